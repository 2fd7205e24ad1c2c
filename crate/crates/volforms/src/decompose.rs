//! Constructive decomposition witnesses.
//!
//! Two normal forms over the polynomial ring:
//!
//! * [`commutator_decompose`] writes the potential form of any polynomial
//!   bivector as a sum of Leibniz brackets, one bracket per stored
//!   bivector term g·∂_a∧∂_b: with w the smallest axis outside {a,b} and
//!   h a w-primitive of g, the pair (x_a·∂_w∧∂_a)♭, (h·∂_a∧∂_b)♭
//!   brackets to (g·∂_a∧∂_b)♭ — the left potential's field is exactly
//!   ∂_w, which acts on the right potential as ∂_w(h) = g.
//!
//! * [`square_decompose`] writes any polynomial (n−3)-form b as a sum of
//!   self-contractions ι_{X_α}α, one per stored term g·dx_J: with
//!   {x<y<z} the complementary axes, s the sign making (∂x∧∂y∧∂z)♭
//!   equal s·dx_J, and f an x-primitive of c := s·g, the potential
//!   α = (∂x∧(∂y − f·∂z))♭ satisfies ι_{X_α}α = g·dx_J.  Since
//!   [α,α] = d(ι_{X_α}α), summing gives Σ[αᵢ,αᵢ] = d b, which
//!   [`squares_of_exact`] exposes for exact (n−2)-forms.
//!
//! Witness sizes are bounded by the number of basis tuples: at most
//! C(n,2) brackets (bound asserted as C(n,2)·(n+1)) and at most C(n,3)
//! squares (bound asserted as 4·C(n,3)).

use crate::cartan::{
    contract, flat, hamiltonian_field, leibniz_bracket, mu, Form, MultiVec,
    VectorField,
};
use crate::choose;
use crate::scalar::PolyCoeff;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("ambient dimension {dim} too small, need at least {needed}")]
    DimensionTooSmall { dim: usize, needed: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i32, found: i32 },
    #[error("the given form is not the differential of the given potential")]
    NotExactPair,
}

/// Witness that a bivector potential is a sum of Leibniz brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketWitness {
    /// Bracket operands: Σᵢ [leftᵢ, rightᵢ] = target.
    pub pairs: Vec<(Form<PolyCoeff>, Form<PolyCoeff>)>,
    /// The potential form (B♭ of the input bivector B).
    pub target: Form<PolyCoeff>,
}

impl BracketWitness {
    pub fn count(&self) -> usize {
        self.pairs.len()
    }

    /// The asserted witness-size bound C(n,2)·(n+1).
    pub fn bound(n: usize) -> usize {
        choose(n, 2) * (n + 1)
    }

    /// Recompute every bracket and compare against the target.
    pub fn verify(&self) -> bool {
        let n = self.target.dim();
        let mut acc = Form::zero(n, self.target.degree());
        for (l, r) in &self.pairs {
            let Ok(b) = leibniz_bracket(l, r) else {
                return false;
            };
            acc = acc.add(&b);
        }
        acc == self.target && self.count() <= Self::bound(n)
    }
}

/// Express B♭ as a sum of Leibniz brackets, one per stored term of the
/// polynomial bivector B.  Needs n ≥ 3 (so that an auxiliary axis exists
/// outside any index pair).
pub fn commutator_decompose(
    b: &MultiVec<PolyCoeff>,
) -> Result<BracketWitness, DecomposeError> {
    let n = b.dim();
    if n < 3 {
        return Err(DecomposeError::DimensionTooSmall { dim: n, needed: 3 });
    }
    if b.degree() != 2 {
        return Err(DecomposeError::DegreeMismatch {
            expected: 2,
            found: b.degree(),
        });
    }
    let mut pairs = Vec::new();
    for (idx, g) in b.terms() {
        let (a, bx) = (idx[0], idx[1]);
        let w = (0..n as u8)
            .find(|i| *i != a && *i != bx)
            .expect("n >= 3 guarantees a free axis");
        // left potential: (x_a·∂_w∧∂_a)♭ — its field is ∂_w
        let left_vec = MultiVec::term(n, sorted_pair(w, a), PolyCoeff::var(n, a as usize));
        let left_sign_flip = w > a; // the term was written ∂_w∧∂_a
        let mut left = flat(&left_vec);
        if left_sign_flip {
            left = left.neg();
        }
        // right potential: (h·∂_a∧∂_b)♭ with ∂_w h = g
        let h = g.primitive_in_axis(w as usize);
        let right = flat(&MultiVec::term(n, vec![a, bx], h));
        pairs.push((left, right));
    }
    Ok(BracketWitness {
        pairs,
        target: flat(b),
    })
}

fn sorted_pair(a: u8, b: u8) -> Vec<u8> {
    if a < b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

/// Witness that an (n−3)-form is a sum of self-contractions ι_{X_α}α.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareWitness {
    /// Potentials with Σᵢ ι_{X_{αᵢ}}αᵢ = target.
    pub potentials: Vec<Form<PolyCoeff>>,
    /// Decomposable factors (Xᵢ, Yᵢ) with αᵢ = (Xᵢ∧Yᵢ)♭.
    pub factors: Vec<(VectorField<PolyCoeff>, VectorField<PolyCoeff>)>,
    /// The decomposed (n−3)-form.
    pub target: Form<PolyCoeff>,
}

impl SquareWitness {
    pub fn count(&self) -> usize {
        self.potentials.len()
    }

    /// The asserted witness-size bound 4·C(n,3).
    pub fn bound(n: usize) -> usize {
        4 * choose(n, 3)
    }

    /// Σᵢ ι_{X_{αᵢ}}αᵢ recomputed from scratch.
    pub fn contraction_sum(&self) -> Form<PolyCoeff> {
        let n = self.target.dim();
        let mut acc = Form::zero(n, self.target.degree());
        for alpha in &self.potentials {
            if let Ok(x) = hamiltonian_field(alpha) {
                acc = acc.add(&contract(&x, alpha));
            }
        }
        acc
    }

    /// Σᵢ [αᵢ,αᵢ] recomputed from scratch (equals d(target)).
    pub fn squares_sum(&self) -> Form<PolyCoeff> {
        let n = self.target.dim();
        let mut acc = Form::zero(n, self.target.degree() + 1);
        for alpha in &self.potentials {
            if let Ok(b) = leibniz_bracket(alpha, alpha) {
                acc = acc.add(&b);
            }
        }
        acc
    }

    /// Target reproduced and size bound respected.
    pub fn verify(&self) -> bool {
        self.contraction_sum() == self.target && self.count() <= Self::bound(self.target.dim())
    }

    /// The per-potential contraction identity
    /// ι_{X_α}α = −ι_{[X,Y]∧X∧Y} μ for every stored factor pair.
    pub fn verify_contraction_identity(&self) -> bool {
        if self.potentials.len() != self.factors.len() {
            return false;
        }
        let n = self.target.dim();
        let vol = mu::<PolyCoeff>(n);
        self.potentials
            .iter()
            .zip(&self.factors)
            .all(|(alpha, (x, y))| {
                let Ok(xa) = hamiltonian_field(alpha) else {
                    return false;
                };
                let lhs = contract(&xa, alpha);
                let tri = crate::cartan::lie_bracket(x, y).wedge(x).wedge(y);
                let rhs = contract(&tri, &vol).neg();
                lhs == rhs && *alpha == flat(&x.wedge(y))
            })
    }
}

/// Express a polynomial (n−3)-form as a sum of self-contractions
/// ι_{X_α}α, one per stored term.  Needs n ≥ 3.
pub fn square_decompose(b: &Form<PolyCoeff>) -> Result<SquareWitness, DecomposeError> {
    let n = b.dim();
    if n < 3 {
        return Err(DecomposeError::DimensionTooSmall { dim: n, needed: 3 });
    }
    let expected = n as i32 - 3;
    if b.degree() != expected {
        return Err(DecomposeError::DegreeMismatch {
            expected,
            found: b.degree(),
        });
    }
    let mut potentials = Vec::new();
    let mut factors = Vec::new();
    for (idx, g) in b.terms() {
        let comp = crate::cartan::complement(idx, n);
        debug_assert_eq!(comp.len(), 3);
        let (ax, ay, az) = (comp[0], comp[1], comp[2]);
        // sign s with (∂x∧∂y∧∂z)♭ = s·dx_J
        let neg = crate::cartan::basis_flat_negative(&comp, n);
        let c = if neg { g.neg() } else { g.clone() };
        let f = c.primitive_in_axis(ax as usize);
        let x = VectorField::basis(n, vec![ax]);
        let y = VectorField::basis(n, vec![ay]).sub(&VectorField::term(n, vec![az], f));
        potentials.push(flat(&x.wedge(&y)));
        factors.push((x, y));
    }
    Ok(SquareWitness {
        potentials,
        factors,
        target: b.clone(),
    })
}

/// For an exact (n−2)-form c = d b, return potentials αᵢ with
/// Σᵢ [αᵢ,αᵢ] = c.  Errors unless c really is d b.
pub fn squares_of_exact(
    c: &Form<PolyCoeff>,
    b: &Form<PolyCoeff>,
) -> Result<Vec<Form<PolyCoeff>>, DecomposeError> {
    if b.dim() != c.dim() || b.d() != *c {
        return Err(DecomposeError::NotExactPair);
    }
    let witness = square_decompose(b)?;
    Ok(witness.potentials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(dim: usize, axis: usize) -> PolyCoeff {
        PolyCoeff::var(dim, axis)
    }

    #[test]
    fn bracket_witness_worked_example() {
        // B = x1·∂2∧∂3 in n = 3 → single pair
        // ((x2·∂1∧∂2)♭, (x1²/2·∂2∧∂3)♭) = (x2·dx3, x1²/2·dx1).
        let n = 3;
        let b = MultiVec::term(n, vec![1, 2], x(n, 0));
        let w = commutator_decompose(&b).unwrap();
        assert_eq!(w.count(), 1);
        let (l, r) = &w.pairs[0];
        assert_eq!(*l, Form::term(n, vec![2], x(n, 1)));
        assert_eq!(
            *r,
            Form::term(n, vec![0], PolyCoeff::monomial(n, vec![2, 0, 0], rat(1, 2)))
        );
        assert_eq!(w.target, Form::term(n, vec![0], x(n, 0)));
        assert!(w.verify());
    }

    #[test]
    fn bracket_witness_multi_term_n4() {
        let n = 4;
        let b = MultiVec::term(n, vec![1, 2], x(n, 0).mul(&x(n, 3)))
            .add(&MultiVec::term(n, vec![0, 1], x(n, 1).mul(&x(n, 1))))
            .add(&MultiVec::term(
                n,
                vec![2, 3],
                PolyCoeff::one(n).add(&x(n, 2)),
            ));
        let w = commutator_decompose(&b).unwrap();
        assert_eq!(w.count(), 3);
        assert!(w.count() <= BracketWitness::bound(n));
        assert!(w.verify());
    }

    #[test]
    fn bracket_witness_zero_and_errors() {
        let n = 3;
        let zero = MultiVec::<PolyCoeff>::zero(n, 2);
        let w = commutator_decompose(&zero).unwrap();
        assert_eq!(w.count(), 0);
        assert!(w.verify());
        assert!(matches!(
            commutator_decompose(&MultiVec::<PolyCoeff>::zero(2, 2)),
            Err(DecomposeError::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            commutator_decompose(&MultiVec::<PolyCoeff>::zero(3, 1)),
            Err(DecomposeError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn square_witness_worked_example() {
        // n = 3, b = x3 (0-form) → α = dx3 + x1x3·dx2.
        let n = 3;
        let b = Form::scalar(n, x(n, 2));
        let w = square_decompose(&b).unwrap();
        assert_eq!(w.count(), 1);
        let expected = Form::basis(n, vec![2]).add(&Form::term(
            n,
            vec![1],
            x(n, 0).mul(&x(n, 2)),
        ));
        assert_eq!(w.potentials[0], expected);
        assert!(w.verify());
        assert!(w.verify_contraction_identity());
    }

    #[test]
    fn square_witness_n4_term() {
        // n = 4, b = x4·dx2: complement of {2} is {1,3,4}, the primitive
        // is f = x1·x4.
        let n = 4;
        let b = Form::term(n, vec![1], x(n, 3));
        let w = square_decompose(&b).unwrap();
        assert_eq!(w.count(), 1);
        let (xf, yf) = &w.factors[0];
        assert_eq!(*xf, VectorField::basis(n, vec![0]));
        assert_eq!(
            *yf,
            VectorField::basis(n, vec![2]).sub(&VectorField::term(
                n,
                vec![3],
                x(n, 0).mul(&x(n, 3))
            ))
        );
        assert!(w.verify());
        assert!(w.verify_contraction_identity());
    }

    #[test]
    fn square_witness_multi_term() {
        let n = 4;
        let b = Form::term(n, vec![0], x(n, 1).mul(&x(n, 1)))
            .add(&Form::term(n, vec![3], PolyCoeff::one(n)))
            .add(&Form::term(n, vec![2], x(n, 0).add(&x(n, 3))));
        let w = square_decompose(&b).unwrap();
        assert_eq!(w.count(), 3);
        assert!(w.count() <= SquareWitness::bound(n));
        assert!(w.verify());
        assert!(w.verify_contraction_identity());
        // Σ[αᵢ,αᵢ] = d(target)
        assert_eq!(w.squares_sum(), b.d());
    }

    #[test]
    fn squares_of_exact_path() {
        let n = 3;
        let b = Form::scalar(n, x(n, 0).mul(&x(n, 1)));
        let c = b.d();
        let potentials = squares_of_exact(&c, &b).unwrap();
        let mut acc = Form::zero(n, 1);
        for a in &potentials {
            acc = acc.add(&leibniz_bracket(a, a).unwrap());
        }
        assert_eq!(acc, c);
        // mismatched pair is rejected
        let not_db = Form::term(n, vec![0], x(n, 1));
        assert_eq!(
            squares_of_exact(&not_db, &b),
            Err(DecomposeError::NotExactPair)
        );
    }

    #[test]
    fn square_decompose_degree_guard() {
        assert!(matches!(
            square_decompose(&Form::<PolyCoeff>::zero(4, 2)),
            Err(DecomposeError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            square_decompose(&Form::<PolyCoeff>::zero(2, 0)),
            Err(DecomposeError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn witness_bounds() {
        assert_eq!(BracketWitness::bound(3), 12);
        assert_eq!(BracketWitness::bound(4), 30);
        assert_eq!(SquareWitness::bound(3), 4);
        assert_eq!(SquareWitness::bound(4), 16);
    }
}
