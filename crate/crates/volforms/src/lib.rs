//! Exact symbolic engine for the Cartan calculus of a standard volume form.
//!
//! Everything here is computed in exact arithmetic (arbitrary-precision
//! rationals, Gaussian rationals for Fourier modes); there is no floating
//! point anywhere in the crate.
//!
//! The crate is organized around a small tower:
//!
//! * [`scalar`] — coefficient rings: sparse polynomials on ℝⁿ and
//!   trigonometric polynomials on the n-torus, each with commuting
//!   derivations and (for the torus) an exact total integral.
//! * [`cartan`] — differential forms and multivector fields over either
//!   ring: wedge, exterior differential, contraction, the musical
//!   isomorphisms against the volume form μ = dx₁∧…∧dxₙ, the divergence
//!   operator δ, the potential-to-field map α ↦ X_α, and the Leibniz
//!   bracket [α,β] = L_{X_α}β on (n−2)-forms, together with the explicit
//!   decomposable-input formulas for δ, X_α and the bivector bracket.
//! * [`decompose`] — constructive witnesses expressing bivector targets as
//!   sums of Leibniz brackets and exact forms as sums of squares.
//! * [`gradedrep`] — graded divergence-free polynomial vector fields 𝔛ₖ,
//!   their sl(n) structure, and exact equivariant linear algebra
//!   (Whitehead H¹, intertwiner spaces, endomorphism algebras).
//! * [`coho`] — Chevalley–Eilenberg and Loday cochain complexes over
//!   explicit finite bases, the hat transform, and exact H¹/H² ranks.
//! * [`torus`] — the central extension of exact divergence-free fields by
//!   de Rham classes on Tⁿ: mode homotopy, canonical quotient
//!   representatives, the central bracket, and the two 2-cocycle families
//!   (closed 2-form pairings and cycle periods).
//! * [`ophom`] — polynomial-coefficient differential operators on forms
//!   and the Euler-field induction factoring any operator that kills
//!   exact forms through the exterior differential.
//! * [`grammar`] — the textual/JSON syntax used by the CLI.
//! * [`suites`] — deterministic, seedable invariant batteries used by the
//!   `verify` subcommand, the acceptance tests and the benches.
//!
//! With the `parallel` feature (default) the invariant batteries fan out
//! over rayon; disabling it yields a fully sequential build with identical
//! results.

// The linear-algebra modules walk several parallel index spaces at once
// (bracket tables, action matrices, weight lists); plain index loops keep
// those subscripts visibly aligned with the formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod scalar;
pub mod cartan;
pub mod decompose;
pub mod linalg;
pub mod gradedrep;
pub mod coho;
pub mod torus;
pub mod ophom;
pub mod grammar;
pub mod suites;
pub mod par;

pub use scalar::{Coefficient, GaussRat, PolyCoeff, Rat, TrigCoeff};

/// Exact binomial coefficient as a machine integer (sizes here are tiny).
pub fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
