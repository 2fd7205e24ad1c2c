//! Closed formulas for δ and the bivector bracket on decomposable inputs.
//!
//! These duplicate, by explicit expansion, what [`super::delta`] and the
//! Leibniz bracket compute through the musical isomorphisms; the two code
//! paths share no intermediate representation, so agreeing on random
//! inputs is a strong cross-check.  All formulas act on factor lists
//! X₁,…,X_k of vector fields; [`as_decomposable`] converts a single-term
//! multivector into such a list (a multi-term multivector is rejected).

use super::{divergence, lie_bracket, CartanError, MultiVec, VectorField};
use crate::scalar::Coefficient;

/// Wedge a factor list into a multivector (empty list ⇒ the scalar 1).
pub fn wedge_all<C: Coefficient>(dim: usize, factors: &[VectorField<C>]) -> MultiVec<C> {
    let mut acc = MultiVec::scalar(dim, C::one(dim));
    for f in factors {
        acc = acc.wedge(f);
    }
    acc
}

/// Scalar Lie derivative L_X f = Σⱼ Xʲ ∂ⱼf.
pub fn scalar_lie<C: Coefficient>(x: &VectorField<C>, f: &C) -> C {
    assert_eq!(x.degree(), 1, "scalar_lie expects a vector field");
    let mut acc = C::zero(x.dim());
    for (idx, xj) in x.terms() {
        acc = acc.add(&xj.mul(&f.derive(idx[0] as usize)));
    }
    acc
}

/// Explicit expansion of δ(X₁∧…∧X_k):
///
/// δ = Σ_{i<j} (−1)^{i+j+k} [Xᵢ,Xⱼ] ∧ X₁∧…X̂ᵢ…X̂ⱼ…∧X_k
///   + Σ_i    (−1)^{k+i}   div(Xᵢ) · X₁∧…X̂ᵢ…∧X_k
///
/// with 1-based i, j.  Agrees with `delta(wedge_all(..))` for any factor
/// list; the empty list gives the canonical zero of degree −1.
pub fn delta_decomposable<C: Coefficient>(
    dim: usize,
    factors: &[VectorField<C>],
) -> MultiVec<C> {
    let k = factors.len();
    for f in factors {
        assert_eq!(f.degree(), 1, "delta_decomposable expects vector fields");
        assert_eq!(f.dim(), dim, "tensor dimension mismatch");
    }
    let mut acc = MultiVec::zero(dim, k as i32 - 1);
    // Pair terms: i0, j0 are the 0-based positions (i = i0+1, j = j0+1).
    for i0 in 0..k {
        for j0 in (i0 + 1)..k {
            let rest: Vec<VectorField<C>> = factors
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != i0 && *p != j0)
                .map(|(_, f)| f.clone())
                .collect();
            let mut term = lie_bracket(&factors[i0], &factors[j0]).wedge(&wedge_all(dim, &rest));
            // (−1)^{i+j+k} = (−1)^{i0+j0+k}
            if (i0 + j0 + k) % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
    }
    // Divergence terms.
    for i0 in 0..k {
        let rest: Vec<VectorField<C>> = factors
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != i0)
            .map(|(_, f)| f.clone())
            .collect();
        let mut term = wedge_all(dim, &rest).scale(&divergence(&factors[i0]));
        // (−1)^{k+i} = (−1)^{k+i0+1}
        if (k + i0 + 1) % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    acc
}

/// The field of the potential α = (X₁∧X₂)♭ in closed form:
/// X_α = div(X₂)·X₁ − div(X₁)·X₂ − [X₁,X₂].
pub fn xfield_of_pair<C: Coefficient>(
    x1: &VectorField<C>,
    x2: &VectorField<C>,
) -> VectorField<C> {
    x1.scale(&divergence(x2))
        .sub(&x2.scale(&divergence(x1)))
        .sub(&lie_bracket(x1, x2))
}

/// Bivector bracket via the divergence field:
/// [X₁∧X₂, Y₁∧Y₂] = [δ(X₁∧X₂), Y₁]∧Y₂ + Y₁∧[δ(X₁∧X₂), Y₂].
pub fn bivector_bracket_via_delta<C: Coefficient>(
    x1: &VectorField<C>,
    x2: &VectorField<C>,
    y1: &VectorField<C>,
    y2: &VectorField<C>,
) -> MultiVec<C> {
    let z = xfield_of_pair(x1, x2);
    lie_bracket(&z, y1)
        .wedge(y2)
        .add(&y1.wedge(&lie_bracket(&z, y2)))
}

/// Fully expanded ten-term form of the bivector bracket.
pub fn bivector_bracket_ten_term<C: Coefficient>(
    x1: &VectorField<C>,
    x2: &VectorField<C>,
    y1: &VectorField<C>,
    y2: &VectorField<C>,
) -> MultiVec<C> {
    let div1 = divergence(x1);
    let div2 = divergence(x2);
    let xx = lie_bracket(x1, x2);
    let mut acc = lie_bracket(&xx, y1).wedge(y2).neg();
    acc = acc.sub(&y1.wedge(&lie_bracket(&xx, y2)));
    acc = acc.sub(&lie_bracket(x2, y1).wedge(y2).scale(&div1));
    acc = acc.sub(&y1.wedge(&lie_bracket(x2, y2)).scale(&div1));
    acc = acc.add(&x2.wedge(y2).scale(&scalar_lie(y1, &div1)));
    acc = acc.add(&y1.wedge(x2).scale(&scalar_lie(y2, &div1)));
    acc = acc.add(&lie_bracket(x1, y1).wedge(y2).scale(&div2));
    acc = acc.add(&y1.wedge(&lie_bracket(x1, y2)).scale(&div2));
    acc = acc.sub(&x1.wedge(y2).scale(&scalar_lie(y1, &div2)));
    acc = acc.sub(&y1.wedge(x1).scale(&scalar_lie(y2, &div2)));
    acc
}

/// Split a single-term multivector c·e_{i₁…i_k} into the factor list
/// [c·∂_{i₁}, ∂_{i₂}, …, ∂_{i_k}].  The zero multivector of degree k
/// yields k zero fields; anything with two or more stored terms is
/// rejected as [`CartanError::NotDecomposable`].
pub fn as_decomposable<C: Coefficient>(
    a: &MultiVec<C>,
) -> Result<Vec<VectorField<C>>, CartanError> {
    let n = a.dim();
    let k = a.degree().max(0) as usize;
    if a.is_zero() {
        return Ok(vec![VectorField::zero(n, 1); k]);
    }
    if a.term_count() > 1 {
        return Err(CartanError::NotDecomposable);
    }
    let (idx, c) = a.terms().next().expect("single term");
    let mut out = Vec::with_capacity(k);
    for (pos, &axis) in idx.iter().enumerate() {
        let coeff = if pos == 0 { c.clone() } else { C::one(n) };
        out.push(VectorField::term(n, vec![axis], coeff));
    }
    Ok(out)
}
