//! Coefficient rings.
//!
//! Two concrete rings implement the [`Coefficient`] interface:
//!
//! * [`PolyCoeff`] — sparse multivariate polynomials over ℚ in variables
//!   x₁,…,xₙ (exponent vectors of fixed length `dim`).
//! * [`TrigCoeff`] — trigonometric polynomials on the n-torus: finite
//!   ℚ(i)-linear combinations of modes e_k, k ∈ ℤⁿ, where e_k stands for
//!   exp(2πi k·x).  The derivation is rescaled so that Dⱼ e_k = kⱼ e_k
//!   (the 2πi is absorbed into Dⱼ), and the torus has unit volume, so the
//!   exact integral of a trigonometric polynomial is its zero-mode
//!   coefficient.
//!
//! All axis arguments throughout the crate are **0-based** (`axis < dim`);
//! the textual grammar (`x1`, `dx1`, `e1`) is 1-based and the translation
//! happens in [`crate::grammar`].

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exact rational scalar (always stored reduced, positive denominator).
pub type Rat = BigRational;
/// Exact Gaussian rational scalar a + b·i.
pub type GaussRat = Complex<Rat>;

/// Convenience constructor: the rational `n/d`.
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor: the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Convenience constructor: the Gaussian rational `re + im·i`.
pub fn gauss(re: Rat, im: Rat) -> GaussRat {
    Complex::new(re, im)
}

/// Convenience constructor: the integer `n` as a Gaussian rational.
pub fn gauss_int(n: i64) -> GaussRat {
    Complex::new(rat_int(n), Rat::zero())
}

/// Errors from checked scalar-ring entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
}

/// Common interface of the coefficient rings.
///
/// A coefficient is a function-like object on an `dim`-dimensional space
/// carrying ring operations and `dim` commuting derivations.  Values are
/// immutable; all operations return fresh values.  Operations between
/// coefficients of different `dim` are programming errors and panic; use
/// [`Coefficient::try_derive`] where axis data comes from untrusted input.
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Ambient dimension n (number of variables / torus dimension).
    fn dim(&self) -> usize;
    /// Additive zero of the ring in dimension `dim`.
    fn zero(dim: usize) -> Self;
    /// Multiplicative unit of the ring in dimension `dim`.
    fn one(dim: usize) -> Self;
    /// Embed a rational constant.
    fn from_rat(dim: usize, r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Partial derivative along `axis` (0-based).  Panics if out of range.
    fn derive(&self, axis: usize) -> Self;

    /// Checked variant of [`Coefficient::derive`] for API boundaries.
    fn try_derive(&self, axis: usize) -> Result<Self, ScalarError> {
        if axis >= self.dim() {
            return Err(ScalarError::AxisOutOfRange {
                axis,
                dim: self.dim(),
            });
        }
        Ok(self.derive(axis))
    }

    /// Short machine name of the ring ("poly" / "trig"), used by the
    /// textual grammar and JSON encodings.
    fn ring_name() -> &'static str;

    /// Multiply by a rational constant.
    fn scale(&self, r: &Rat) -> Self {
        self.mul(&Self::from_rat(self.dim(), r))
    }
}

fn check_same_dim(left: usize, right: usize) {
    assert_eq!(
        left, right,
        "coefficient dimension mismatch: {left} vs {right}"
    );
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Sparse multivariate polynomial over ℚ.
///
/// Terms are keyed by exponent vectors of length `dim`; zero coefficients
/// are never stored, so structural equality is semantic equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyCoeff {
    dim: usize,
    terms: BTreeMap<Vec<u16>, Rat>,
}

impl PolyCoeff {
    pub fn zero(dim: usize) -> Self {
        PolyCoeff {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = PolyCoeff::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        PolyCoeff::constant(dim, Rat::one())
    }

    /// The coordinate function x_axis (0-based axis).
    pub fn var(dim: usize, axis: usize) -> Self {
        assert!(axis < dim, "axis {axis} out of range for dimension {dim}");
        let mut e = vec![0u16; dim];
        e[axis] = 1;
        PolyCoeff::monomial(dim, e, Rat::one())
    }

    /// The single term c·x^exps.
    pub fn monomial(dim: usize, exps: Vec<u16>, c: Rat) -> Self {
        assert_eq!(exps.len(), dim, "exponent vector length must equal dim");
        let mut p = PolyCoeff::zero(dim);
        p.add_term(exps, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate terms in the canonical (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Rat)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of x^exps (zero if absent).
    pub fn coeff_of(&self, exps: &[u16]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Maximal total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    /// True if every term has total degree exactly `k` (vacuously for 0).
    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().map(|&x| x as usize).sum::<usize>() == k)
    }

    fn add_term(&mut self, exps: Vec<u16>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        check_same_dim(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        PolyCoeff {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        check_same_dim(self.dim, other.dim);
        let mut out = PolyCoeff::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return PolyCoeff::zero(self.dim);
        }
        PolyCoeff {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    /// Partial derivative ∂/∂x_axis.
    pub fn derive(&self, axis: usize) -> Self {
        assert!(
            axis < self.dim,
            "axis {axis} out of range for dimension {}",
            self.dim
        );
        let mut out = PolyCoeff::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e[axis];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[axis] = k - 1;
            out.add_term(e2, c * rat_int(k as i64));
        }
        out
    }

    /// Exact antiderivative along `axis`, normalized so the result has no
    /// term that is constant in x_axis.  Satisfies
    /// `p.primitive_in_axis(j).derive(j) == p`.
    pub fn primitive_in_axis(&self, axis: usize) -> Self {
        assert!(
            axis < self.dim,
            "axis {axis} out of range for dimension {}",
            self.dim
        );
        let mut out = PolyCoeff::zero(self.dim);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[axis] += 1;
            let k = e2[axis];
            out.add_term(e2, c / rat_int(k as i64));
        }
        out
    }

    /// Exact evaluation at a rational point (used by test oracles).
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.dim);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }
}

impl Coefficient for PolyCoeff {
    fn dim(&self) -> usize {
        self.dim
    }
    fn zero(dim: usize) -> Self {
        PolyCoeff::zero(dim)
    }
    fn one(dim: usize) -> Self {
        PolyCoeff::one(dim)
    }
    fn from_rat(dim: usize, r: &Rat) -> Self {
        PolyCoeff::constant(dim, r.clone())
    }
    fn is_zero(&self) -> bool {
        PolyCoeff::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        PolyCoeff::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        PolyCoeff::sub(self, other)
    }
    fn neg(&self) -> Self {
        PolyCoeff::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        PolyCoeff::mul(self, other)
    }
    fn derive(&self, axis: usize) -> Self {
        PolyCoeff::derive(self, axis)
    }
    fn ring_name() -> &'static str {
        "poly"
    }
    fn scale(&self, r: &Rat) -> Self {
        PolyCoeff::scale(self, r)
    }
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials on the torus
// ---------------------------------------------------------------------------

/// Trigonometric polynomial on the n-torus.
///
/// A finite sum Σ_k c_k·e_k with c_k ∈ ℚ(i), k ∈ ℤⁿ, where e_k abbreviates
/// exp(2πi k·x).  Products convolve modes; the derivation along axis j is
/// rescaled so that Dⱼ e_k = kⱼ·e_k; the total integral over the unit-volume
/// torus picks out the zero-mode coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrigCoeff {
    dim: usize,
    modes: BTreeMap<Vec<i32>, GaussRat>,
}

impl TrigCoeff {
    pub fn zero(dim: usize) -> Self {
        TrigCoeff {
            dim,
            modes: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: GaussRat) -> Self {
        let mut t = TrigCoeff::zero(dim);
        t.add_mode(vec![0; dim], c);
        t
    }

    pub fn one(dim: usize) -> Self {
        TrigCoeff::constant(dim, GaussRat::one())
    }

    /// The single mode c·e_freq.
    pub fn mode(dim: usize, freq: Vec<i32>, c: GaussRat) -> Self {
        assert_eq!(freq.len(), dim, "frequency vector length must equal dim");
        let mut t = TrigCoeff::zero(dim);
        t.add_mode(freq, c);
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Iterate modes in the canonical (lexicographic frequency) order.
    pub fn modes(&self) -> impl Iterator<Item = (&Vec<i32>, &GaussRat)> {
        self.modes.iter()
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn coeff_of(&self, freq: &[i32]) -> GaussRat {
        self.modes
            .get(freq)
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    fn add_mode(&mut self, freq: Vec<i32>, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.modes.entry(freq) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        check_same_dim(self.dim, other.dim);
        let mut out = self.clone();
        for (k, c) in &other.modes {
            out.add_mode(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TrigCoeff {
            dim: self.dim,
            modes: self
                .modes
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        check_same_dim(self.dim, other.dim);
        let mut out = TrigCoeff::zero(self.dim);
        for (ka, ca) in &self.modes {
            for (kb, cb) in &other.modes {
                let k: Vec<i32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_mode(k, ca * cb);
            }
        }
        out
    }

    pub fn scale_gauss(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return TrigCoeff::zero(self.dim);
        }
        TrigCoeff {
            dim: self.dim,
            modes: self
                .modes
                .iter()
                .map(|(k, m)| (k.clone(), m * c))
                .collect(),
        }
    }

    /// Rescaled derivation along `axis`: Dⱼ e_k = kⱼ·e_k.
    pub fn derive(&self, axis: usize) -> Self {
        assert!(
            axis < self.dim,
            "axis {axis} out of range for dimension {}",
            self.dim
        );
        let mut out = TrigCoeff::zero(self.dim);
        for (k, c) in &self.modes {
            let f = k[axis];
            if f == 0 {
                continue;
            }
            out.add_mode(k.clone(), c * gauss_int(f as i64));
        }
        out
    }

    /// Exact integral over the unit-volume torus: the zero-mode coefficient.
    pub fn integrate_torus(&self) -> GaussRat {
        self.coeff_of(&vec![0; self.dim])
    }

    /// The zero-mode (constant) part as a coefficient.
    pub fn constant_part(&self) -> Self {
        TrigCoeff::constant(self.dim, self.integrate_torus())
    }

    /// All nonzero modes (the function minus its torus average).
    pub fn nonconstant_part(&self) -> Self {
        TrigCoeff {
            dim: self.dim,
            modes: self
                .modes
                .iter()
                .filter(|(k, _)| k.iter().any(|&x| x != 0))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Complex conjugate as a function: conj(c)·e_{−k} for each mode.
    pub fn conj(&self) -> Self {
        let mut out = TrigCoeff::zero(self.dim);
        for (k, c) in &self.modes {
            out.add_mode(k.iter().map(|&x| -x).collect(), c.conj());
        }
        out
    }

    /// True iff the function is real-valued, i.e. c(−k) = conj(c(k)).
    pub fn is_real_function(&self) -> bool {
        self.conj() == *self
    }

    /// Largest |kⱼ| over all modes and axes (0 for constants).
    pub fn max_frequency(&self) -> i32 {
        self.modes
            .keys()
            .flat_map(|k| k.iter().map(|&x| x.abs()))
            .max()
            .unwrap_or(0)
    }
}

impl Coefficient for TrigCoeff {
    fn dim(&self) -> usize {
        self.dim
    }
    fn zero(dim: usize) -> Self {
        TrigCoeff::zero(dim)
    }
    fn one(dim: usize) -> Self {
        TrigCoeff::one(dim)
    }
    fn from_rat(dim: usize, r: &Rat) -> Self {
        TrigCoeff::constant(dim, gauss(r.clone(), Rat::zero()))
    }
    fn is_zero(&self) -> bool {
        TrigCoeff::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        TrigCoeff::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        TrigCoeff::sub(self, other)
    }
    fn neg(&self) -> Self {
        TrigCoeff::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        TrigCoeff::mul(self, other)
    }
    fn derive(&self, axis: usize) -> Self {
        TrigCoeff::derive(self, axis)
    }
    fn ring_name() -> &'static str {
        "trig"
    }
    fn scale(&self, r: &Rat) -> Self {
        self.scale_gauss(&gauss(r.clone(), Rat::zero()))
    }
}

// ---------------------------------------------------------------------------
// Canonical text rendering (the parse side lives in crate::grammar)
// ---------------------------------------------------------------------------

/// Canonical text of a Gaussian rational: `0`, `3/2`, `-2 i`, `1+1/2 i`,
/// `1-2 i`.  No spaces around the inner sign, one space before `i`.
pub fn gauss_to_string(c: &GaussRat) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    if c.im.is_zero() {
        return c.re.to_string();
    }
    if c.re.is_zero() {
        return format!("{} i", c.im);
    }
    if c.im.is_negative() {
        format!("{}-{} i", c.re, -c.im.clone())
    } else {
        format!("{}+{} i", c.re, c.im)
    }
}

/// True if the canonical text of `c` needs parentheses when prefixed to a
/// basis symbol (i.e. contains an interior sign).
pub fn gauss_needs_parens(c: &GaussRat) -> bool {
    !c.re.is_zero() && !c.im.is_zero()
}

fn fmt_signed_join(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    negative: bool,
    body: &str,
) -> fmt::Result {
    if *first {
        *first = false;
        if negative {
            write!(f, "-{body}")
        } else {
            write!(f, "{body}")
        }
    } else if negative {
        write!(f, " - {body}")
    } else {
        write!(f, " + {body}")
    }
}

impl fmt::Display for PolyCoeff {
    /// Canonical grammar: terms in exponent-lexicographic order, e.g.
    /// `1 - 1/2 x1^2 x3 + 2 x2`.  The numeric coefficient is always
    /// printed; a pure constant term prints as the bare rational.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mut body = c.abs().to_string();
            for (axis, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                body.push_str(&format!(" x{}", axis + 1));
                if k > 1 {
                    body.push_str(&format!("^{k}"));
                }
            }
            fmt_signed_join(f, &mut first, c.is_negative(), &body)?;
        }
        Ok(())
    }
}

impl fmt::Display for TrigCoeff {
    /// Canonical grammar: modes in frequency-lexicographic order, e.g.
    /// `2 + (1+1 i) e[0,1] - 1/2 e[1,-1]`.  Coefficients with both real
    /// and imaginary part print in parentheses; the leading sign is pulled
    /// out only for pure-real or pure-imaginary coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.modes {
            let is_const = k.iter().all(|&x| x == 0);
            // Pull the sign out when the coefficient is pure real or pure
            // imaginary; otherwise parenthesize the full complex value.
            let (negative, coeff_txt) = if c.im.is_zero() {
                (c.re.is_negative(), c.re.abs().to_string())
            } else if c.re.is_zero() {
                (c.im.is_negative(), format!("{} i", c.im.abs()))
            } else {
                (false, format!("({})", gauss_to_string(c)))
            };
            let mut body = coeff_txt;
            if !is_const {
                body.push_str(" e[");
                body.push_str(
                    &k.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                );
                body.push(']');
            }
            fmt_signed_join(f, &mut first, negative, &body)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn x(dim: usize, axis: usize) -> PolyCoeff {
        PolyCoeff::var(dim, axis)
    }

    // -- polynomial ring ----------------------------------------------------

    #[test]
    fn poly_derive_example() {
        // ∂₁(x₁² x₂) = 2 x₁ x₂
        let p = x(3, 0).mul(&x(3, 0)).mul(&x(3, 1));
        let expected = x(3, 0).mul(&x(3, 1)).scale(&rat_int(2));
        assert_eq!(p.derive(0), expected);
    }

    #[test]
    fn poly_derivations_commute_and_product_rule() {
        // A modest but non-trivial fixed example plus the ring laws.
        let p = x(3, 0)
            .mul(&x(3, 1))
            .add(&x(3, 2).mul(&x(3, 2)).scale(&rat(3, 2)))
            .add(&PolyCoeff::one(3));
        let q = x(3, 1).mul(&x(3, 2)).sub(&x(3, 0));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.derive(i).derive(j), p.derive(j).derive(i));
            }
            // Leibniz product rule.
            let lhs = p.mul(&q).derive(i);
            let rhs = p.derive(i).mul(&q).add(&p.mul(&q.derive(i)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn poly_primitive_examples() {
        // primitive(x₁, axis 1) = x₁²/2
        let p = x(2, 0);
        let expected = PolyCoeff::monomial(2, vec![2, 0], rat(1, 2));
        assert_eq!(p.primitive_in_axis(0), expected);
        // primitive(1, axis 2) = x₂
        assert_eq!(PolyCoeff::one(2).primitive_in_axis(1), x(2, 1));
        // primitive(x₁x₂², axis 2) = x₁x₂³/3
        let p = PolyCoeff::monomial(2, vec![1, 2], rat_int(1));
        let expected = PolyCoeff::monomial(2, vec![1, 3], rat(1, 3));
        assert_eq!(p.primitive_in_axis(1), expected);
    }

    #[test]
    fn poly_primitive_inverts_derive() {
        let p = x(3, 0)
            .mul(&x(3, 1))
            .mul(&x(3, 1))
            .add(&x(3, 2).scale(&rat(-7, 3)))
            .add(&PolyCoeff::constant(3, rat(5, 4)));
        for axis in 0..3 {
            assert_eq!(p.primitive_in_axis(axis).derive(axis), p);
        }
    }

    #[test]
    fn poly_ring_laws_fixed() {
        let a = x(2, 0).add(&PolyCoeff::one(2));
        let b = x(2, 1).sub(&x(2, 0));
        let c = x(2, 0).mul(&x(2, 1));
        // distributivity and commutativity
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.mul(&b), b.mul(&a));
        // cancellation keeps the representation sparse
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.sub(&a).term_count(), 0);
    }

    #[test]
    fn poly_display_canonical() {
        let p = PolyCoeff::constant(3, rat_int(1))
            .add(&PolyCoeff::monomial(3, vec![2, 0, 1], rat(-1, 2)))
            .add(&PolyCoeff::monomial(3, vec![0, 1, 0], rat_int(2)));
        assert_eq!(p.to_string(), "1 + 2 x2 - 1/2 x1^2 x3");
        assert_eq!(PolyCoeff::zero(3).to_string(), "0");
    }

    #[test]
    fn poly_eval() {
        let p = x(2, 0).mul(&x(2, 0)).add(&x(2, 1).scale(&rat_int(3)));
        let v = p.eval(&[rat(1, 2), rat_int(2)]);
        assert_eq!(v, rat(25, 4));
    }

    // -- trigonometric ring ---------------------------------------------------

    #[test]
    fn trig_derive_example() {
        // D₃ e_{(0,0,1)} = 1·e_{(0,0,1)}
        let t = TrigCoeff::mode(3, vec![0, 0, 1], GaussRat::one());
        assert_eq!(t.derive(2), t);
        assert!(t.derive(0).is_zero());
    }

    #[test]
    fn trig_product_is_mode_convolution() {
        // e_{(0,0,1)}·e_{(0,0,-1)} = e_0, which integrates to 1.
        let a = TrigCoeff::mode(3, vec![0, 0, 1], GaussRat::one());
        let b = TrigCoeff::mode(3, vec![0, 0, -1], GaussRat::one());
        let p = a.mul(&b);
        assert_eq!(p, TrigCoeff::one(3));
        assert_eq!(p.integrate_torus(), GaussRat::one());
        // A pure nonzero mode integrates to 0.
        assert!(a.integrate_torus().is_zero());
    }

    #[test]
    fn trig_derivative_integrates_to_zero() {
        let f = TrigCoeff::mode(2, vec![1, -2], gauss(rat(1, 3), rat_int(1)))
            .add(&TrigCoeff::mode(2, vec![0, 1], gauss_int(2)))
            .add(&TrigCoeff::constant(2, gauss_int(5)));
        for axis in 0..2 {
            assert!(f.derive(axis).integrate_torus().is_zero());
        }
    }

    #[test]
    fn trig_product_rule_and_commuting_derivations() {
        let f = TrigCoeff::mode(2, vec![1, 0], gauss_int(1))
            .add(&TrigCoeff::mode(2, vec![0, 2], gauss(rat_int(0), rat_int(1))));
        let g = TrigCoeff::mode(2, vec![-1, 1], gauss_int(3)).add(&TrigCoeff::one(2));
        for i in 0..2 {
            let lhs = f.mul(&g).derive(i);
            let rhs = f.derive(i).mul(&g).add(&f.mul(&g.derive(i)));
            assert_eq!(lhs, rhs);
            for j in 0..2 {
                assert_eq!(f.derive(i).derive(j), f.derive(j).derive(i));
            }
        }
    }

    #[test]
    fn trig_reality_check() {
        // cos(2πx₁) = (e_{(1,0)} + e_{(-1,0)})/2 is real.
        let half = gauss(rat(1, 2), Rat::zero());
        let cosx = TrigCoeff::mode(2, vec![1, 0], half.clone())
            .add(&TrigCoeff::mode(2, vec![-1, 0], half));
        assert!(cosx.is_real_function());
        // sin needs the −i/2, +i/2 pairing; with both +1 coefficients the
        // combination e_k + i·e_{−k} is not real.
        let bad = TrigCoeff::mode(2, vec![1, 0], GaussRat::one()).add(&TrigCoeff::mode(
            2,
            vec![-1, 0],
            gauss(Rat::zero(), Rat::one()),
        ));
        assert!(!bad.is_real_function());
    }

    #[test]
    fn trig_constant_split() {
        let f = TrigCoeff::constant(2, gauss_int(4)).add(&TrigCoeff::mode(
            2,
            vec![1, 1],
            gauss_int(-2),
        ));
        assert_eq!(f.constant_part(), TrigCoeff::constant(2, gauss_int(4)));
        assert_eq!(
            f.nonconstant_part(),
            TrigCoeff::mode(2, vec![1, 1], gauss_int(-2))
        );
        assert_eq!(f.constant_part().add(&f.nonconstant_part()), f);
    }

    #[test]
    fn trig_display_canonical() {
        let f = TrigCoeff::constant(2, gauss_int(2))
            .add(&TrigCoeff::mode(2, vec![0, 1], gauss(Rat::one(), Rat::one())))
            .add(&TrigCoeff::mode(2, vec![1, -1], gauss(rat(-1, 2), Rat::zero())));
        assert_eq!(f.to_string(), "2 + (1+1 i) e[0,1] - 1/2 e[1,-1]");
        assert_eq!(TrigCoeff::zero(2).to_string(), "0");
        let g = TrigCoeff::mode(2, vec![1, 0], gauss(Rat::zero(), rat(-3, 2)));
        assert_eq!(g.to_string(), "-3/2 i e[1,0]");
    }

    // -- trait-level checks ----------------------------------------------------

    #[test]
    fn try_derive_bounds() {
        let p = PolyCoeff::one(2);
        assert!(Coefficient::try_derive(&p, 1).is_ok());
        assert_eq!(
            Coefficient::try_derive(&p, 2),
            Err(ScalarError::AxisOutOfRange { axis: 2, dim: 2 })
        );
    }

    #[test]
    fn gauss_text() {
        assert_eq!(gauss_to_string(&gauss_int(0)), "0");
        assert_eq!(gauss_to_string(&gauss(rat(3, 2), Rat::zero())), "3/2");
        assert_eq!(gauss_to_string(&gauss(Rat::zero(), rat_int(-2))), "-2 i");
        assert_eq!(gauss_to_string(&gauss(rat_int(1), rat(-1, 2))), "1-1/2 i");
        assert_eq!(gauss_to_string(&gauss(rat_int(1), rat(1, 2))), "1+1/2 i");
    }
}
