//! Differential forms, multivector fields, and the volume-form calculus.
//!
//! Both [`Form`] and [`MultiVec`] are thin wrappers over a sparse map from
//! strictly increasing index tuples (0-based axes) to ring coefficients.
//! The ambient volume form is always μ = dx₁∧…∧dxₙ, giving the musical
//! isomorphisms
//!
//! * [`flat`]:  A ↦ ι_A μ   (k-vectors → (n−k)-forms),
//! * [`sharp`]: its inverse,
//!
//! with the contraction convention ι_{A∧B} = ι_B ∘ ι_A, i.e. for a
//! decomposable X₁∧…∧X_k the factor X₁ is contracted first.  On top of
//! these sit the divergence δ = ♯∘d∘♭ on multivectors, the field map
//! [`hamiltonian_field`] (α ↦ X_α := (dα)♯ for (n−2)-forms α), and the
//! Leibniz bracket [α,β] := L_{X_α}β.
//!
//! Degrees outside the range `0..=n` are allowed as *canonical zero*
//! objects: they carry no terms and arise transiently (e.g. δ of a
//! 0-vector passes through a "form of degree n+1").

use crate::scalar::{Coefficient, Rat};
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use thiserror::Error;

/// Errors from the checked Cartan-calculus entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i32, found: i32 },
    #[error("bad index tuple {tuple:?} for degree {degree} in dimension {dim}")]
    BadIndexTuple {
        tuple: Vec<u8>,
        degree: i32,
        dim: usize,
    },
    #[error("multivector is not a single decomposable term")]
    NotDecomposable,
    #[error("operation needs ambient dimension at least {needed}, have {dim}")]
    NeedDim { needed: usize, dim: usize },
}

/// Marker for the covariant variant (differential forms, `dx[..]` basis).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FormKind;
/// Marker for the contravariant variant (multivectors, `e[..]` basis).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VecKind;

/// Static label distinguishing the two tensor variants.
pub trait TensorKind: Clone + Copy + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    /// Suffix in the brace grammar (`2-form{..}` / `2-vec{..}`).
    const LABEL: &'static str;
    /// Basis-symbol prefix in the brace grammar (`dx` / `e`).
    const BASIS: &'static str;
}
impl TensorKind for FormKind {
    const LABEL: &'static str = "form";
    const BASIS: &'static str = "dx";
}
impl TensorKind for VecKind {
    const LABEL: &'static str = "vec";
    const BASIS: &'static str = "e";
}

/// Shared sparse container behind [`Form`] and [`MultiVec`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor<C: Coefficient, K: TensorKind> {
    dim: usize,
    degree: i32,
    terms: BTreeMap<Vec<u8>, C>,
    _kind: PhantomData<K>,
}

/// Differential form of a fixed degree.
pub type Form<C> = Tensor<C, FormKind>;
/// Multivector field of a fixed degree.
pub type MultiVec<C> = Tensor<C, VecKind>;
/// Degree-1 multivector field.
pub type VectorField<C> = MultiVec<C>;

impl<C: Coefficient, K: TensorKind> Tensor<C, K> {
    /// The zero object of the given degree (any `i32` degree is allowed;
    /// out-of-range degrees are canonical zeros and stay empty).
    pub fn zero(dim: usize, degree: i32) -> Self {
        Tensor {
            dim,
            degree,
            terms: BTreeMap::new(),
            _kind: PhantomData,
        }
    }

    /// Degree-0 object holding a single ring coefficient.
    pub fn scalar(dim: usize, c: C) -> Self {
        let mut t = Tensor::zero(dim, 0);
        t.add_term(vec![], c);
        t
    }

    /// Basis object `dx_I` / `e_I` with unit coefficient.
    ///
    /// Panics if the tuple is not strictly increasing and in range.
    pub fn basis(dim: usize, indices: Vec<u8>) -> Self {
        let mut t = Tensor::zero(dim, indices.len() as i32);
        t.add_term(indices, C::one(dim));
        t
    }

    /// Single term c·dx_I / c·e_I.
    pub fn term(dim: usize, indices: Vec<u8>, c: C) -> Self {
        let mut t = Tensor::zero(dim, indices.len() as i32);
        t.add_term(indices, c);
        t
    }

    /// Checked construction from a term list.
    pub fn from_terms(
        dim: usize,
        degree: i32,
        terms: Vec<(Vec<u8>, C)>,
    ) -> Result<Self, CartanError> {
        let mut t = Tensor::zero(dim, degree);
        for (idx, c) in terms {
            let ok = idx.len() as i32 == degree
                && idx.windows(2).all(|w| w[0] < w[1])
                && idx.iter().all(|&i| (i as usize) < dim)
                && degree >= 0
                && degree <= dim as i32;
            if !ok {
                return Err(CartanError::BadIndexTuple {
                    tuple: idx,
                    degree,
                    dim,
                });
            }
            if c.dim() != dim {
                return Err(CartanError::DimMismatch {
                    left: dim,
                    right: c.dim(),
                });
            }
            t.add_term(idx, c);
        }
        Ok(t)
    }

    /// Insert (accumulating) one term.  Internal fast path with debug
    /// validation; public callers go through [`Tensor::from_terms`].
    pub(crate) fn add_term(&mut self, indices: Vec<u8>, c: C) {
        debug_assert_eq!(indices.len() as i32, self.degree);
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.iter().all(|&i| (i as usize) < self.dim));
        debug_assert_eq!(c.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(indices) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterate stored terms in canonical (index-lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &C)> {
        self.terms.iter()
    }

    /// Coefficient at a basis tuple (ring zero if absent).
    pub fn coeff(&self, indices: &[u8]) -> C {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| C::zero(self.dim))
    }

    /// The unique coefficient of a degree-0 object.
    pub fn scalar_part(&self) -> C {
        debug_assert_eq!(self.degree, 0);
        self.coeff(&[])
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "tensor dimension mismatch: {} vs {}",
            self.dim, other.dim
        );
        assert_eq!(
            self.degree, other.degree,
            "tensor degree mismatch: {} vs {}",
            self.degree, other.degree
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        out
    }

    /// Checked addition for API boundaries.
    pub fn try_add(&self, other: &Self) -> Result<Self, CartanError> {
        if self.dim != other.dim {
            return Err(CartanError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(CartanError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(self.add(other))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiply every coefficient by a ring element.
    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|t| t.mul(c))
    }

    /// Multiply every coefficient by a rational constant.
    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.map_coeffs(|t| t.scale(r))
    }

    pub(crate) fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Tensor::zero(self.dim, self.degree);
        for (i, c) in &self.terms {
            out.add_term(i.clone(), f(c));
        }
        out
    }

    /// Exterior product.  Degrees add; colliding indices cancel.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim, other.dim,
            "tensor dimension mismatch: {} vs {}",
            self.dim, other.dim
        );
        let mut out = Tensor::zero(self.dim, self.degree + other.degree);
        if out.degree < 0 || out.degree > self.dim as i32 {
            return out; // canonical zero
        }
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((idx, negative)) = wedge_indices(ia, ib) {
                    let c = ca.mul(cb);
                    out.add_term(idx, if negative { c.neg() } else { c });
                }
            }
        }
        out
    }
}

/// Merge two strictly increasing tuples; `None` on a shared index.
/// The boolean is true when the permutation sign is −1 (odd number of
/// transpositions moving `b`-entries past larger `a`-entries).
pub(crate) fn wedge_indices(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining a-entries.
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, inversions % 2 == 1))
}

/// Contract one axis into an increasing tuple: position and remainder.
/// `None` when the axis does not occur.  Sign is (−1)^position.
pub(crate) fn iota_axis(axis: u8, indices: &[u8]) -> Option<(Vec<u8>, bool)> {
    let pos = indices.iter().position(|&i| i == axis)?;
    let mut rest = indices.to_vec();
    rest.remove(pos);
    Some((rest, pos % 2 == 1))
}

/// Sorted complement of an increasing tuple inside `0..dim`.
pub(crate) fn complement(indices: &[u8], dim: usize) -> Vec<u8> {
    (0..dim as u8).filter(|i| !indices.contains(i)).collect()
}

/// Sign s = ±1 with ι_{e_I} μ = s·dx_{Ic} for an increasing tuple `I`
/// (`Ic` its complement): true means −1.
pub(crate) fn basis_flat_negative(indices: &[u8], dim: usize) -> bool {
    let mut j: Vec<u8> = (0..dim as u8).collect();
    let mut neg = false;
    for &ax in indices {
        let (rest, n) = iota_axis(ax, &j).expect("axis present in full tuple");
        neg ^= n;
        j = rest;
    }
    neg
}

// ---------------------------------------------------------------------------
// Form-specific operations
// ---------------------------------------------------------------------------

impl<C: Coefficient> Form<C> {
    /// Exterior differential d: degree k → k+1,
    /// d(c·dx_I) = Σ_{j∉I} (∂ⱼc)·dxⱼ∧dx_I.
    pub fn d(&self) -> Form<C> {
        let mut out = Form::zero(self.dim, self.degree + 1);
        if out.degree > self.dim as i32 || self.degree < 0 {
            return out;
        }
        for (idx, c) in &self.terms {
            for j in 0..self.dim as u8 {
                if idx.contains(&j) {
                    continue;
                }
                let dc = c.derive(j as usize);
                if dc.is_zero() {
                    continue;
                }
                let before = idx.iter().filter(|&&i| i < j).count();
                let mut new_idx = idx.clone();
                new_idx.insert(before, j);
                out.add_term(new_idx, if before % 2 == 1 { dc.neg() } else { dc });
            }
        }
        out
    }
}

/// The standard volume form μ = dx₁∧…∧dxₙ.
pub fn mu<C: Coefficient>(dim: usize) -> Form<C> {
    Form::term(dim, (0..dim as u8).collect(), C::one(dim))
}

/// Exterior differential as a free function (alias for [`Form::d`]).
pub fn d<C: Coefficient>(w: &Form<C>) -> Form<C> {
    w.d()
}

/// Contraction ι_A ω of a multivector into a form, with the convention
/// ι_{X₁∧…∧X_k} = ι_{X_k}∘…∘ι_{X₁} (first factor contracts first, i.e.
/// innermost).
pub fn contract<C: Coefficient>(a: &MultiVec<C>, w: &Form<C>) -> Form<C> {
    assert_eq!(
        a.dim,
        w.dim,
        "tensor dimension mismatch: {} vs {}",
        a.dim,
        w.dim
    );
    let mut out = Form::zero(w.dim, w.degree - a.degree);
    for (ia, ca) in &a.terms {
        'term: for (jw, cw) in &w.terms {
            let mut idx = jw.clone();
            let mut neg = false;
            for &ax in ia {
                match iota_axis(ax, &idx) {
                    None => continue 'term,
                    Some((rest, n)) => {
                        idx = rest;
                        neg ^= n;
                    }
                }
            }
            let c = ca.mul(cw);
            out.add_term(idx, if neg { c.neg() } else { c });
        }
    }
    out
}

/// Musical isomorphism A♭ = ι_A μ (k-vectors → (n−k)-forms).
pub fn flat<C: Coefficient>(a: &MultiVec<C>) -> Form<C> {
    contract(a, &mu(a.dim))
}

/// Musical isomorphism inverse to [`flat`]: ω♯ is the unique multivector
/// with ι_{ω♯} μ = ω.
pub fn sharp<C: Coefficient>(w: &Form<C>) -> MultiVec<C> {
    let n = w.dim;
    let mut out = MultiVec::zero(n, n as i32 - w.degree);
    for (j, c) in &w.terms {
        let i = complement(j, n);
        let neg = basis_flat_negative(&i, n);
        out.add_term(i, if neg { c.neg() } else { c.clone() });
    }
    out
}

/// Lie bracket of vector fields:
/// [X,Y]ʲ = Σᵢ (Xⁱ ∂ᵢYʲ − Yⁱ ∂ᵢXʲ).
pub fn lie_bracket<C: Coefficient>(x: &VectorField<C>, y: &VectorField<C>) -> VectorField<C> {
    assert_eq!(x.degree, 1, "lie_bracket expects degree-1 multivectors");
    assert_eq!(y.degree, 1, "lie_bracket expects degree-1 multivectors");
    assert_eq!(x.dim, y.dim, "tensor dimension mismatch");
    let mut out = VectorField::zero(x.dim, 1);
    for (i_idx, xi) in &x.terms {
        let i = i_idx[0] as usize;
        for (j_idx, yj) in &y.terms {
            out.add_term(j_idx.clone(), xi.mul(&yj.derive(i)));
        }
    }
    for (i_idx, yi) in &y.terms {
        let i = i_idx[0] as usize;
        for (j_idx, xj) in &x.terms {
            out.add_term(j_idx.clone(), yi.mul(&xj.derive(i)).neg());
        }
    }
    out
}

/// Divergence of a vector field: div X = Σⱼ ∂ⱼXʲ.
pub fn divergence<C: Coefficient>(x: &VectorField<C>) -> C {
    assert_eq!(x.degree, 1, "divergence expects a degree-1 multivector");
    let mut acc = C::zero(x.dim);
    for (idx, c) in &x.terms {
        acc = acc.add(&c.derive(idx[0] as usize));
    }
    acc
}

/// Lie derivative of a form along a vector field (Cartan formula):
/// L_X ω = d ι_X ω + ι_X dω.
pub fn lie_derivative_form<C: Coefficient>(x: &VectorField<C>, w: &Form<C>) -> Form<C> {
    assert_eq!(x.degree, 1, "lie_derivative_form expects a vector field");
    contract(x, &w.d()).add(&contract(x, w).d())
}

/// Divergence operator on multivectors: δA = (d A♭)♯, degree k → k−1.
pub fn delta<C: Coefficient>(a: &MultiVec<C>) -> MultiVec<C> {
    sharp(&flat(a).d())
}

/// The field X_α := (dα)♯ of a potential (n−2)-form α.
///
/// X_α is divergence-free, and L_{X_α} μ = 0.
pub fn hamiltonian_field<C: Coefficient>(alpha: &Form<C>) -> Result<VectorField<C>, CartanError> {
    let expected = alpha.dim as i32 - 2;
    if alpha.degree != expected {
        return Err(CartanError::DegreeMismatch {
            expected,
            found: alpha.degree,
        });
    }
    Ok(sharp(&alpha.d()))
}

/// Leibniz bracket on potentials: [α,β] := L_{X_α} β (both of degree n−2).
///
/// Satisfies the left Leibniz identity
/// [α,[β,γ]] = [[α,β],γ] + [β,[α,γ]], and α ↦ X_α is a homomorphism onto
/// divergence-free fields: X_{[α,β]} = [X_α, X_β].
pub fn leibniz_bracket<C: Coefficient>(
    alpha: &Form<C>,
    beta: &Form<C>,
) -> Result<Form<C>, CartanError> {
    if alpha.dim != beta.dim {
        return Err(CartanError::DimMismatch {
            left: alpha.dim,
            right: beta.dim,
        });
    }
    let expected = alpha.dim as i32 - 2;
    for f in [alpha, beta] {
        if f.degree != expected {
            return Err(CartanError::DegreeMismatch {
                expected,
                found: f.degree,
            });
        }
    }
    let x = hamiltonian_field(alpha)?;
    Ok(lie_derivative_form(&x, beta))
}

pub mod explicit;

// ---------------------------------------------------------------------------
// Display (the brace grammar; parsing lives in crate::grammar)
// ---------------------------------------------------------------------------

impl<C: Coefficient, K: TensorKind> fmt::Display for Tensor<C, K> {
    /// Brace grammar, e.g. `2-form{ x1 dx[1,2] ; -1/2 dx[1,3] }`,
    /// `1-vec{ 2 e[0,0,1] e[1] }` (trig), `0-form{ 3 }`, `2-vec{}`.
    /// Indices are 1-based in text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}{{", self.degree, K::LABEL)?;
        let mut first = true;
        for (idx, c) in &self.terms {
            if first {
                write!(f, " ")?;
                first = false;
            } else {
                write!(f, " ; ")?;
            }
            write!(f, "{c}")?;
            if !idx.is_empty() {
                let body = idx
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, " {}[{}]", K::BASIS, body)?;
            }
        }
        if !first {
            write!(f, " ")?;
        }
        write!(f, "}}")
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

/// Enumerate all strictly increasing `k`-tuples in `0..n` (index order).
pub fn combinations(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - (k - i)) as u8 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
