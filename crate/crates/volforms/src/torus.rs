//! The central extension on the torus, in exact Fourier calculus.
//!
//! Working over the trigonometric ring on Tⁿ with unit periods, the
//! mode-wise homotopy [`mode_homotopy`] inverts d away from constant
//! modes (d∘h + h∘d = id there, h² = 0), which makes every construction
//! below exact and finite:
//!
//! * [`potential`] — a primitive α with dα = ι_Xμ for every exact
//!   divergence-free field X ([`is_exact_divfree`]);
//! * [`normal_form`] / [`QuotientClass`] — canonical representatives of
//!   (n−2)-forms modulo exact forms (constant mode + h∘d), so classes
//!   compare by structural equality;
//! * [`central_bracket`] — the Lie bracket [ᾱ, β̄] = class(ι_{X_α}ι_{X_β}μ)
//!   on the quotient, whose kernel is exactly the constant classes;
//! * [`lichnerowicz`] and [`cycle_cocycle`] — the two finite-rank 2-cocycle
//!   families on divergence-free fields: ∫ σ(X,Y) μ for a closed 2-form σ,
//!   and ∫_C ι_Xι_Yμ over a coordinate (n−2)-subtorus C;
//! * [`cocycle_vs_bracket`] — the pairing identity connecting the σ-cocycle
//!   to the quotient bracket, ∫ σ(X_a,X_b) μ = ∫ [b,a]∧σ;
//! * [`pairing_matrix`] — cycle functionals against the constant classes,
//!   full rank, exhibiting the center pairing.

use crate::cartan::{
    combinations, contract, divergence, hamiltonian_field, leibniz_bracket, mu, CartanError, Form,
    VectorField,
};
use crate::linalg::rank_dense;
use crate::scalar::{rat, GaussRat, Rat, TrigCoeff};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("form is not closed")]
    NotClosed,
    #[error("vector field is not divergence-free")]
    NotDivergenceFree,
    #[error("vector field is not exact (nonzero mean)")]
    NotExact,
    #[error("expected a form of degree {expected}, found {found}")]
    WrongDegree { expected: i32, found: i32 },
    #[error("malformed cycle: need two distinct fixed axes below the dimension")]
    BadCycle,
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

// ---------------------------------------------------------------------------
// The mode homotopy
// ---------------------------------------------------------------------------

/// Mode-wise contraction homotopy: on the mode c·e_k dx_J with k ≠ 0,
/// h = ι_{k♯}/(k·k) — each j ∈ J contributes (−1)^pos · kⱼ/(k·k) on
/// dx_{J∖j}.  Constant modes are killed.  Satisfies d∘h + h∘d = id on
/// every nonconstant mode and h² = 0.
pub fn mode_homotopy(w: &Form<TrigCoeff>) -> Form<TrigCoeff> {
    let n = w.dim();
    let mut out = Form::zero(n, w.degree() - 1);
    for (idx, c) in w.terms() {
        for (freq, coeff) in c.modes() {
            let k2: i64 = freq.iter().map(|&k| (k as i64) * (k as i64)).sum();
            if k2 == 0 {
                continue;
            }
            for (pos, &j) in idx.iter().enumerate() {
                let kj = freq[j as usize] as i64;
                if kj == 0 {
                    continue;
                }
                let mut sub = idx.clone();
                sub.remove(pos);
                let f = if pos % 2 == 0 {
                    rat(kj, k2)
                } else {
                    rat(-kj, k2)
                };
                let scaled = GaussRat::new(&coeff.re * &f, &coeff.im * &f);
                out.add_term(sub, TrigCoeff::mode(n, freq.clone(), scaled));
            }
        }
    }
    out
}

/// The constant-mode part of a form, coefficient-wise.
pub fn constant_mode(w: &Form<TrigCoeff>) -> Form<TrigCoeff> {
    w.map_coeffs(|c| c.constant_part())
}

// ---------------------------------------------------------------------------
// Exact fields and potentials
// ---------------------------------------------------------------------------

/// True iff X generates an exact class: divergence-free (checked; error
/// otherwise) and ι_Xμ has zero constant Fourier mode (mean-zero X).
pub fn is_exact_divfree(x: &VectorField<TrigCoeff>) -> Result<bool, TorusError> {
    if !divergence(x).is_zero() {
        return Err(TorusError::NotDivergenceFree);
    }
    Ok(constant_mode(&crate::cartan::flat(x)).is_zero())
}

/// A potential α = h(ι_Xμ) with dα = ι_Xμ and hamiltonian_field(α) = X.
pub fn potential(x: &VectorField<TrigCoeff>) -> Result<Form<TrigCoeff>, TorusError> {
    if !is_exact_divfree(x)? {
        return Err(TorusError::NotExact);
    }
    Ok(mode_homotopy(&crate::cartan::flat(x)))
}

// ---------------------------------------------------------------------------
// Quotient classes
// ---------------------------------------------------------------------------

/// An (n−2)-form modulo exact forms, stored with its canonical
/// representative rep = constant_mode(original) + h(d original).
/// Equality compares representatives only.
#[derive(Debug, Clone)]
pub struct QuotientClass {
    original: Form<TrigCoeff>,
    rep: Form<TrigCoeff>,
}

impl PartialEq for QuotientClass {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl QuotientClass {
    pub fn rep(&self) -> &Form<TrigCoeff> {
        &self.rep
    }

    pub fn original(&self) -> &Form<TrigCoeff> {
        &self.original
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Central ⟺ the representative is a constant-coefficient form
    /// (equivalently the induced field vanishes).
    pub fn is_central(&self) -> bool {
        self.rep == constant_mode(&self.rep)
    }

    /// The divergence-free field of the class (well defined:
    /// representatives differ by closed corrections only through the
    /// constant mode, which d kills).
    pub fn field(&self) -> Result<VectorField<TrigCoeff>, TorusError> {
        Ok(hamiltonian_field(&self.rep)?)
    }
}

/// Canonical representative of a form modulo d-images:
/// rep = constant_mode(a) + h(d a).  Idempotent; rep = 0 iff a is exact.
pub fn normal_form(a: &Form<TrigCoeff>) -> QuotientClass {
    let rep = constant_mode(a).add(&mode_homotopy(&a.d()));
    QuotientClass {
        original: a.clone(),
        rep,
    }
}

/// The quotient Lie bracket [ᾱ, β̄] = class(ι_{X_α} ι_{X_β} μ).
/// Antisymmetric and Jacobi on classes; agrees with
/// normal_form(leibniz_bracket(repα, repβ)) because
/// L_{X_α}β − ι_{X_α}dβ = dι_{X_α}β is exact.
pub fn central_bracket(a: &QuotientClass, b: &QuotientClass) -> Result<QuotientClass, TorusError> {
    let xa = hamiltonian_field(&a.rep)?;
    let xb = hamiltonian_field(&b.rep)?;
    let n = a.rep.dim();
    Ok(normal_form(&contract(&xa, &contract(&xb, &mu(n)))))
}

// ---------------------------------------------------------------------------
// Cocycles
// ---------------------------------------------------------------------------

/// ∫ σ(X,Y) μ for a closed 2-form σ and divergence-free X, Y
/// (exactness not required); σ(X,Y) = ι_Y ι_X σ.
pub fn lichnerowicz(
    sigma: &Form<TrigCoeff>,
    x: &VectorField<TrigCoeff>,
    y: &VectorField<TrigCoeff>,
) -> Result<GaussRat, TorusError> {
    if sigma.degree() != 2 {
        return Err(TorusError::WrongDegree {
            expected: 2,
            found: sigma.degree(),
        });
    }
    if !sigma.d().is_zero() {
        return Err(TorusError::NotClosed);
    }
    if !divergence(x).is_zero() || !divergence(y).is_zero() {
        return Err(TorusError::NotDivergenceFree);
    }
    let pairing = contract(y, &contract(x, sigma));
    Ok(pairing.scalar_part().integrate_torus())
}

/// A coordinate (n−2)-subtorus: two axes pinned at 0, the rest free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleSpec {
    n: usize,
    fixed: (u8, u8),
}

impl CycleSpec {
    pub fn new(n: usize, fixed_a: u8, fixed_b: u8) -> Result<Self, TorusError> {
        if fixed_a >= fixed_b || (fixed_b as usize) >= n {
            return Err(TorusError::BadCycle);
        }
        Ok(CycleSpec {
            n,
            fixed: (fixed_a, fixed_b),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fixed(&self) -> (u8, u8) {
        self.fixed
    }

    /// The free axes, in increasing order.
    pub fn free_axes(&self) -> Vec<u8> {
        (0..self.n as u8)
            .filter(|&j| j != self.fixed.0 && j != self.fixed.1)
            .collect()
    }
}

/// ∫_C γ for an (n−2)-form γ: keep the term indexed by C's free axes,
/// keep the modes whose frequencies vanish along the free axes, and
/// evaluate the pinned coordinates at 0 (each mode then contributes its
/// raw coefficient; unit periods).  Kills exact forms (Stokes).
pub fn integrate_form_over_cycle(
    c: &CycleSpec,
    gamma: &Form<TrigCoeff>,
) -> Result<GaussRat, TorusError> {
    let expected = c.n as i32 - 2;
    if gamma.degree() != expected {
        return Err(TorusError::WrongDegree {
            expected,
            found: gamma.degree(),
        });
    }
    let free = c.free_axes();
    let coeff = gamma.coeff(&free);
    let mut total = GaussRat::zero();
    for (freq, v) in coeff.modes() {
        if free.iter().all(|&j| freq[j as usize] == 0) {
            total += v;
        }
    }
    Ok(total)
}

/// ∫_C ι_X ι_Y μ over the coordinate subtorus, for divergence-free X, Y.
pub fn cycle_cocycle(
    c: &CycleSpec,
    x: &VectorField<TrigCoeff>,
    y: &VectorField<TrigCoeff>,
) -> Result<GaussRat, TorusError> {
    if !divergence(x).is_zero() || !divergence(y).is_zero() {
        return Err(TorusError::NotDivergenceFree);
    }
    let gamma = contract(x, &contract(y, &mu(c.n)));
    integrate_form_over_cycle(c, &gamma)
}

/// ∫ u∧v over the torus (zero unless deg u + deg v = n).
pub fn wedge_integrate(u: &Form<TrigCoeff>, v: &Form<TrigCoeff>) -> GaussRat {
    let n = u.dim();
    let w = u.wedge(v);
    if w.degree() != n as i32 {
        return GaussRat::zero();
    }
    let top: Vec<u8> = (0..n as u8).collect();
    w.coeff(&top).integrate_torus()
}

/// Both sides of the pairing identity for the σ-cocycle on exact classes:
/// left = ∫ σ(X_a, X_b) μ, right = ∫ [b,a]∧σ.  They agree because the
/// functional γ ↦ ∫ γ∧σ kills exact forms (σ closed) and
/// [b,a] ≡ ι_{X_b} ι_{X_a} μ modulo exact forms.
pub fn cocycle_vs_bracket(
    sigma: &Form<TrigCoeff>,
    a: &Form<TrigCoeff>,
    b: &Form<TrigCoeff>,
) -> Result<(GaussRat, GaussRat), TorusError> {
    let xa = hamiltonian_field(a)?;
    let xb = hamiltonian_field(b)?;
    let left = lichnerowicz(sigma, &xa, &xb)?;
    let right = wedge_integrate(&leibniz_bracket(b, a)?, sigma);
    Ok((left, right))
}

// ---------------------------------------------------------------------------
// The center pairing
// ---------------------------------------------------------------------------

/// Matrix of cycle functionals against the constant classes: rows are
/// cycles (fixed pairs in increasing lexicographic order), columns are
/// the constant basis forms dx_J (increasing (n−2)-tuples); the entry is
/// ∫_C dx_J.  Values are real rationals.
pub fn pairing_matrix(n: usize) -> Vec<Vec<Rat>> {
    let cycles = combinations(n, 2);
    let center = combinations(n, n - 2);
    cycles
        .iter()
        .map(|cyc| {
            let spec = CycleSpec::new(n, cyc[0], cyc[1]).expect("increasing pair");
            center
                .iter()
                .map(|j| {
                    let form = Form::<TrigCoeff>::basis(n, j.clone());
                    let v = integrate_form_over_cycle(&spec, &form)
                        .expect("constant form has the right degree");
                    debug_assert!(v.im.is_zero());
                    v.re
                })
                .collect()
        })
        .collect()
}

/// Rank of [`pairing_matrix`] — full (C(n,2)) for every n ≥ 2.
pub fn pairing_rank(n: usize) -> usize {
    rank_dense(pairing_matrix(n))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{flat, lie_bracket, MultiVec};
    use crate::scalar::{gauss, gauss_int, rat_int};

    fn e(n: usize, freq: Vec<i32>) -> TrigCoeff {
        TrigCoeff::mode(n, freq, gauss_int(1))
    }

    fn mode_field(n: usize, freq: Vec<i32>, axis: u8) -> VectorField<TrigCoeff> {
        MultiVec::term(n, vec![axis], e(n, freq))
    }

    #[test]
    fn homotopy_identity_on_nonconstant_modes() {
        let n = 3;
        // mixed-degree sample with a constant part
        let w = Form::term(n, vec![1], e(n, vec![1, 0, 0]))
            .add(&Form::term(
                n,
                vec![2],
                TrigCoeff::mode(n, vec![0, 1, -1], gauss(rat_int(1), rat_int(1))),
            ))
            .add(&Form::term(n, vec![0], TrigCoeff::constant(n, gauss_int(2))));
        let lhs = mode_homotopy(&w).d().add(&mode_homotopy(&w.d()));
        assert_eq!(lhs, w.sub(&constant_mode(&w)));
        // 2-form case
        let w2 = Form::term(n, vec![0, 2], e(n, vec![2, -1, 0]));
        let lhs2 = mode_homotopy(&w2).d().add(&mode_homotopy(&w2.d()));
        assert_eq!(lhs2, w2);
        // h² = 0
        assert!(mode_homotopy(&mode_homotopy(&w2)).is_zero());
        // h kills constant modes
        assert!(mode_homotopy(&mu::<TrigCoeff>(3)).is_zero());
    }

    #[test]
    fn exactness_detection() {
        let n = 3;
        // constant field: divergence-free but nonzero mean
        let x0 = MultiVec::term(n, vec![0], TrigCoeff::one(n));
        assert_eq!(is_exact_divfree(&x0), Ok(false));
        // mean-zero mode field
        let x = mode_field(n, vec![0, 0, 1], 0);
        assert_eq!(is_exact_divfree(&x), Ok(true));
        // zero field
        assert_eq!(is_exact_divfree(&MultiVec::zero(n, 1)), Ok(true));
        // divergence obstruction
        let bad = mode_field(n, vec![1, 0, 0], 0);
        assert_eq!(
            is_exact_divfree(&bad),
            Err(TorusError::NotDivergenceFree)
        );
        assert_eq!(potential(&x0), Err(TorusError::NotExact));
    }

    #[test]
    fn potential_examples() {
        let n = 3;
        // X = e_{(0,0,1)}∂₁ → α = −e_{(0,0,1)}dx₂
        let x = mode_field(n, vec![0, 0, 1], 0);
        let alpha = potential(&x).unwrap();
        let expected = Form::term(n, vec![1], e(n, vec![0, 0, 1])).neg();
        assert_eq!(alpha, expected);
        assert_eq!(alpha.d(), flat(&x));
        assert_eq!(hamiltonian_field(&alpha).unwrap(), x);
        // X = e_{(1,0,0)}∂₂ → α = −e_{(1,0,0)}dx₃ (the h-normal form)
        let x2 = mode_field(n, vec![1, 0, 0], 1);
        let alpha2 = potential(&x2).unwrap();
        let expected2 = Form::term(n, vec![2], e(n, vec![1, 0, 0])).neg();
        assert_eq!(alpha2, expected2);
        assert_eq!(alpha2.d(), flat(&x2));
        assert_eq!(hamiltonian_field(&alpha2).unwrap(), x2);
        // zero field → zero potential
        assert!(potential(&MultiVec::zero(n, 1)).unwrap().is_zero());
    }

    #[test]
    fn normal_form_behaviour() {
        let n = 3;
        // constant forms are fixed
        let dx1 = Form::<TrigCoeff>::basis(n, vec![0]);
        assert_eq!(normal_form(&dx1).rep(), &dx1);
        // d-images die: a = d(e_{(1,0,0)}) as a 1-form
        let f0 = Form::scalar(n, e(n, vec![1, 0, 0]));
        let a = f0.d();
        assert!(!a.is_zero());
        assert!(normal_form(&a).is_zero());
        // already coexact per mode: fixed
        let b = Form::term(n, vec![1], e(n, vec![0, 0, 1])).neg();
        assert_eq!(normal_form(&b).rep(), &b);
        // idempotent and invariant under adding d(anything)
        let mixed = b.add(&dx1).add(&a.scale_rat(&rat(3, 2)));
        let c1 = normal_form(&mixed);
        assert_eq!(normal_form(c1.rep()).rep(), c1.rep());
        assert_eq!(c1.rep(), &b.add(&dx1));
        // kernel characterization: central iff induced field vanishes
        assert!(normal_form(&dx1).is_central());
        assert!(normal_form(&dx1).field().unwrap().is_zero());
        assert!(!c1.is_central());
    }

    #[test]
    fn central_bracket_example_and_laws() {
        let n = 3;
        let a = normal_form(&Form::term(n, vec![1], e(n, vec![0, 0, 1])).neg());
        let b = normal_form(&potential(&mode_field(n, vec![0, 0, -1], 1)).unwrap());
        let ab = central_bracket(&a, &b).unwrap();
        // ι_{e_c∂₁} ι_{e_{−c}∂₂} μ = −dx₃
        let expected = Form::<TrigCoeff>::basis(n, vec![2]).neg();
        assert_eq!(ab.rep(), &expected);
        assert!(ab.is_central());
        // agrees with the quotient of the Leibniz bracket of representatives
        let lb = leibniz_bracket(a.rep(), b.rep()).unwrap();
        assert_eq!(normal_form(&lb), ab);
        // constants are central: [dx₁, b] = 0
        let dx1 = normal_form(&Form::<TrigCoeff>::basis(n, vec![0]));
        assert!(central_bracket(&dx1, &b).unwrap().is_zero());
        // antisymmetry on classes
        let ba = central_bracket(&b, &a).unwrap();
        assert_eq!(ba.rep(), &ab.rep().neg());
        // Jacobi on three exact classes
        let c = normal_form(&potential(&mode_field(n, vec![0, 1, 0], 2)).unwrap());
        let jac = central_bracket(&central_bracket(&a, &b).unwrap(), &c)
            .unwrap()
            .rep()
            .add(
                central_bracket(&central_bracket(&b, &c).unwrap(), &a)
                    .unwrap()
                    .rep(),
            )
            .add(
                central_bracket(&central_bracket(&c, &a).unwrap(), &b)
                    .unwrap()
                    .rep(),
            );
        assert!(jac.is_zero());
    }

    #[test]
    fn lichnerowicz_examples() {
        let n = 3;
        let sigma = Form::<TrigCoeff>::basis(n, vec![0, 1]); // dx₁∧dx₂
        let x = mode_field(n, vec![0, 0, 1], 0);
        let y = mode_field(n, vec![0, 0, -1], 1);
        assert_eq!(lichnerowicz(&sigma, &x, &y), Ok(gauss_int(1)));
        // constant fields missing σ's axes
        let d1 = MultiVec::term(n, vec![0], TrigCoeff::one(n));
        let d3 = MultiVec::term(n, vec![2], TrigCoeff::one(n));
        assert_eq!(lichnerowicz(&sigma, &d1, &d3), Ok(gauss_int(0)));
        // antisymmetry: X = Y → 0
        assert_eq!(lichnerowicz(&sigma, &x, &x), Ok(gauss_int(0)));
        // guards
        let open = Form::term(n, vec![0, 1], e(n, vec![0, 0, 1]));
        assert_eq!(
            lichnerowicz(&open, &x, &y),
            Err(TorusError::NotClosed)
        );
        let bad = mode_field(n, vec![1, 0, 0], 0);
        assert_eq!(
            lichnerowicz(&sigma, &bad, &y),
            Err(TorusError::NotDivergenceFree)
        );
    }

    #[test]
    fn cycle_examples() {
        let n = 3;
        let x = mode_field(n, vec![0, 0, 1], 0);
        let y = mode_field(n, vec![0, 0, -1], 1);
        // C = {x₁ = x₂ = 0}: free axis 3
        let c12 = CycleSpec::new(n, 0, 1).unwrap();
        assert_eq!(cycle_cocycle(&c12, &x, &y), Ok(gauss_int(-1)));
        // free axis 1: no dx₁ component in −dx₃
        let c23 = CycleSpec::new(n, 1, 2).unwrap();
        assert_eq!(cycle_cocycle(&c23, &x, &y), Ok(gauss_int(0)));
        // antisymmetry
        assert_eq!(cycle_cocycle(&c12, &x, &x), Ok(gauss_int(0)));
        // malformed cycles
        assert_eq!(CycleSpec::new(n, 1, 1).err(), Some(TorusError::BadCycle));
        assert_eq!(CycleSpec::new(n, 0, 3).err(), Some(TorusError::BadCycle));
        // Stokes: integrals of d-images over the cycle vanish
        let beta = Form::scalar(n, e(n, vec![1, 0, 1]));
        assert_eq!(
            integrate_form_over_cycle(&c12, &beta.d()),
            Ok(gauss_int(0))
        );
    }

    #[test]
    fn cocycle_identity_on_fixed_triples() {
        let n = 3;
        let x = mode_field(n, vec![0, 0, 1], 0);
        let y = mode_field(n, vec![0, 1, 0], 2);
        let z = mode_field(n, vec![1, 0, 0], 1);
        let sigma = Form::<TrigCoeff>::basis(n, vec![0, 1]);
        let c = CycleSpec::new(n, 0, 1).unwrap();
        // ω([X,Y],Z) + ω([Y,Z],X) + ω([Z,X],Y) = 0 for both families
        let lich = lichnerowicz(&sigma, &lie_bracket(&x, &y), &z).unwrap()
            + lichnerowicz(&sigma, &lie_bracket(&y, &z), &x).unwrap()
            + lichnerowicz(&sigma, &lie_bracket(&z, &x), &y).unwrap();
        assert!(lich.is_zero());
        let cyc = cycle_cocycle(&c, &lie_bracket(&x, &y), &z).unwrap()
            + cycle_cocycle(&c, &lie_bracket(&y, &z), &x).unwrap()
            + cycle_cocycle(&c, &lie_bracket(&z, &x), &y).unwrap();
        assert!(cyc.is_zero());
    }

    #[test]
    fn cocycle_vs_bracket_examples() {
        let n = 3;
        let sigma = Form::<TrigCoeff>::basis(n, vec![0, 1]);
        let a = Form::term(n, vec![1], e(n, vec![0, 0, 1])).neg();
        let b = potential(&mode_field(n, vec![0, 0, -1], 1)).unwrap();
        let (l, r) = cocycle_vs_bracket(&sigma, &a, &b).unwrap();
        assert_eq!(l, gauss_int(1));
        assert_eq!(r, gauss_int(1));
        // central argument: both sides vanish
        let dx1 = Form::<TrigCoeff>::basis(n, vec![0]);
        let (l, r) = cocycle_vs_bracket(&sigma, &dx1, &b).unwrap();
        assert_eq!(l, gauss_int(0));
        assert_eq!(r, gauss_int(0));
        // another closed σ on a second pair
        let sigma13 = Form::<TrigCoeff>::basis(n, vec![0, 2]);
        let a2 = potential(&mode_field(n, vec![0, 1, 0], 2)).unwrap();
        let (l, r) = cocycle_vs_bracket(&sigma13, &a2, &b).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn pairing_matrix_full_rank() {
        let m = pairing_matrix(3);
        // cycles [{1,2},{1,3},{2,3}] × center [dx₁,dx₂,dx₃]: anti-diagonal
        let one = rat_int(1);
        let zero = Rat::zero();
        assert_eq!(
            m,
            vec![
                vec![zero.clone(), zero.clone(), one.clone()],
                vec![zero.clone(), one.clone(), zero.clone()],
                vec![one, zero.clone(), zero],
            ]
        );
        assert_eq!(pairing_rank(3), 3);
        assert_eq!(pairing_rank(4), 6);
    }
}
