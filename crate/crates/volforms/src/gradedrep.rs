//! Graded pieces of the divergence-free polynomial vector fields.
//!
//! For each degree k, the space 𝔛_k of fields Σ fⱼ∂ⱼ with homogeneous
//! degree-k polynomial coefficients and zero divergence has dimension
//! n·C(n+k−1, n−1) − C(n+k−2, n−1); the bracket respects the shifted
//! grading [𝔛_k, 𝔛_l] ⊂ 𝔛_{k+l−1}.  [`GradedBasis`] builds an exact
//! rational basis of 𝔛_k as the kernel of the divergence matrix on
//! monomial-pair coordinates (σ, j) ↦ x^σ∂ⱼ, together with membership
//! coordinates against the reduced echelon form.
//!
//! The linear piece 𝔛_1 is sl(n): the traceless matrix A = (a^i_j)
//! corresponds to the field X_A = Σ a^i_j x^j ∂_i, and the
//! correspondence reverses brackets, [X_A, X_B] = X_{[B,A]}.  For
//! divergence-free X the pulled-back Lie derivative sharp∘L_X∘flat on
//! constant multivector fields equals the bracket extension [X, ·],
//! which on ∧^m of the constant fields is the derivation extension of
//! v ↦ −Av.  [`field_algebra`] and [`wedge_action_modules`] package 𝔛_1
//! and these actions as verified [`FiniteAlgebra`]/[`ModuleRep`] data for
//! the cochain machinery, giving [`whitehead_h1`].
//!
//! Every monomial field x^σ∂ⱼ is a weight vector of weight σ − εⱼ for
//! the diagonal fields, and kernel basis vectors inherit a single
//! weight.  Spaces of equivariant maps therefore split along matching
//! weights, which [`intertwiner_dim`] and [`endo_dim_tensor`] exploit:
//! only unknowns pairing equal weights (up to the 𝟙-shift that relates
//! the two gradings) enter the linear system, and equivariance under
//! the 2(n−1) Chevalley generator fields suffices because they generate
//! the algebra and the equivariance condition is closed under brackets.

use crate::cartan::{
    combinations, flat, lie_bracket, lie_derivative_form, sharp, MultiVec, VectorField,
};
use crate::choose;
use crate::coho::{h_dim, FiniteAlgebra, ModuleRep};
use crate::linalg::{kernel_basis, SparseRows};
use crate::scalar::{rat_int, PolyCoeff, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

/// All exponent vectors in n variables of total degree k, in
/// lexicographically descending order.
pub fn monomials(n: usize, k: usize) -> Vec<Vec<u16>> {
    fn rec(out: &mut Vec<Vec<u16>>, prefix: &mut Vec<u16>, slots: usize, left: u16) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(out, prefix, slots - 1, left - e);
            prefix.pop();
        }
    }
    assert!(n >= 1);
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), n, k as u16);
    out
}

/// dim 𝔛_k = n·C(n+k−1, n−1) − C(n+k−2, n−1).
pub fn expected_dim(n: usize, k: usize) -> usize {
    let fields = n * choose(n + k - 1, n - 1);
    let constraints = if n + k >= 2 { choose(n + k - 2, n - 1) } else { 0 };
    fields - constraints
}

/// Exact basis of the degree-k divergence-free fields, with membership
/// testing in the basis coordinates.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    n: usize,
    k: usize,
    /// coordinate order: (monomial σ of degree k, axis j), monomials in
    /// [`monomials`] order, axes innermost
    pairs: Vec<(Vec<u16>, u8)>,
    pair_index: BTreeMap<(Vec<u16>, u8), usize>,
    /// kernel basis vectors in pair coordinates; vector t has a 1 in its
    /// own free column and 0 in every other free column
    basis: Vec<Vec<Rat>>,
    free_cols: Vec<usize>,
}

impl GradedBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let monos = monomials(n, k);
        let mut pairs = Vec::with_capacity(monos.len() * n);
        for m in &monos {
            for j in 0..n as u8 {
                pairs.push((m.clone(), j));
            }
        }
        let pair_index: BTreeMap<(Vec<u16>, u8), usize> = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();

        // divergence matrix: div(x^σ ∂ⱼ) = σⱼ x^{σ−eⱼ}
        let rows_index: BTreeMap<Vec<u16>, usize> = if k == 0 {
            BTreeMap::new()
        } else {
            monomials(n, k - 1)
                .into_iter()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect()
        };
        let mut matrix = vec![vec![Rat::zero(); pairs.len()]; rows_index.len()];
        for (col, (sigma, j)) in pairs.iter().enumerate() {
            let e = sigma[*j as usize];
            if e == 0 {
                continue;
            }
            let mut tau = sigma.clone();
            tau[*j as usize] -= 1;
            let row = rows_index[&tau];
            matrix[row][col] = rat_int(e as i64);
        }
        let basis = kernel_basis(&matrix, pairs.len());
        // the free column of vector t is the unique column where vector t
        // is 1 and all the others vanish; kernel_basis yields them in
        // ascending free-column order
        let mut free_cols = Vec::with_capacity(basis.len());
        for (t, v) in basis.iter().enumerate() {
            let col = v
                .iter()
                .enumerate()
                .position(|(c, x)| {
                    *x == rat_int(1) && basis.iter().enumerate().all(|(s, w)| s == t || w[c].is_zero())
                })
                .expect("kernel basis vector has a defining free column");
            free_cols.push(col);
        }
        GradedBasis {
            n,
            k,
            pairs,
            pair_index,
            basis,
            free_cols,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The t-th basis element as an honest vector field.
    pub fn field(&self, t: usize) -> VectorField<PolyCoeff> {
        let mut components: Vec<PolyCoeff> = (0..self.n).map(|_| PolyCoeff::zero(self.n)).collect();
        for (col, c) in self.basis[t].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sigma, j) = &self.pairs[col];
            components[*j as usize] =
                components[*j as usize].add(&PolyCoeff::monomial(self.n, sigma.clone(), c.clone()));
        }
        let mut out = MultiVec::zero(self.n, 1);
        for (j, f) in components.into_iter().enumerate() {
            if !f.is_zero() {
                out = out.add(&MultiVec::term(self.n, vec![j as u8], f));
            }
        }
        out
    }

    /// Weight of the t-th basis vector under the diagonal fields:
    /// σ − εⱼ for any supported pair (all supported pairs agree).
    pub fn weight(&self, t: usize) -> Vec<i64> {
        let col = self.basis[t]
            .iter()
            .position(|c| !c.is_zero())
            .expect("basis vector is nonzero");
        let (sigma, j) = &self.pairs[col];
        let mut w: Vec<i64> = sigma.iter().map(|&e| e as i64).collect();
        w[*j as usize] -= 1;
        w
    }

    /// Pair-coordinate vector of a field, if it is homogeneous of the
    /// right degree (zero coefficients allowed).
    fn pair_vector(&self, x: &VectorField<PolyCoeff>) -> Option<Vec<Rat>> {
        if x.dim() != self.n || x.degree() != 1 {
            return None;
        }
        let mut v = vec![Rat::zero(); self.pairs.len()];
        for (idx, f) in x.terms() {
            let j = idx[0];
            for (sigma, c) in f.terms() {
                let key = (sigma.clone(), j);
                let col = *self.pair_index.get(&key)?; // wrong degree ⇒ None
                v[col] = c.clone();
            }
        }
        Some(v)
    }

    /// Coordinates of a field in this basis, or `None` if it is not a
    /// degree-k divergence-free field.  Exact residual check included.
    pub fn coords(&self, x: &VectorField<PolyCoeff>) -> Option<Vec<Rat>> {
        let v = self.pair_vector(x)?;
        let coords: Vec<Rat> = self.free_cols.iter().map(|&c| v[c].clone()).collect();
        // residual check: v == Σ coords_t · basis_t
        let mut residual = v;
        for (t, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (col, b) in self.basis[t].iter().enumerate() {
                if !b.is_zero() {
                    residual[col] -= c * b;
                }
            }
        }
        if residual.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    /// Membership test without extracting coordinates.
    pub fn contains(&self, x: &VectorField<PolyCoeff>) -> bool {
        self.coords(x).is_some()
    }
}

/// Verify the shifted grading on whole basis spaces: every bracket of a
/// degree-k and a degree-l basis field lies in 𝔛_{k+l−1} (and brackets
/// of two degree-0 fields vanish).
pub fn grading_check(n: usize, k: usize, l: usize) -> bool {
    let bk = GradedBasis::new(n, k);
    let bl = GradedBasis::new(n, l);
    let target = if k + l == 0 {
        None
    } else {
        Some(GradedBasis::new(n, k + l - 1))
    };
    for s in 0..bk.dim() {
        let xs = bk.field(s);
        for t in 0..bl.dim() {
            let bracket = lie_bracket(&xs, &bl.field(t));
            match &target {
                None => {
                    if !bracket.is_zero() {
                        return false;
                    }
                }
                Some(tb) => {
                    if !bracket.is_zero() && !tb.contains(&bracket) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// The linear piece as sl(n)
// ---------------------------------------------------------------------------

/// Field of a matrix: A = (a^i_j) ↦ X_A = Σ a^i_j x^j ∂_i.
pub fn matrix_to_field(a: &[Vec<Rat>]) -> VectorField<PolyCoeff> {
    let n = a.len();
    let mut out = MultiVec::zero(n, 1);
    for i in 0..n {
        let mut f = PolyCoeff::zero(n);
        for j in 0..n {
            if !a[i][j].is_zero() {
                f = f.add(&PolyCoeff::var(n, j).scale(&a[i][j]));
            }
        }
        if !f.is_zero() {
            out = out.add(&MultiVec::term(n, vec![i as u8], f));
        }
    }
    out
}

/// The sl(n) basis fields in the order of
/// [`crate::coho::sl_basis_matrices`].
pub fn sl_field_basis(n: usize) -> Vec<VectorField<PolyCoeff>> {
    crate::coho::sl_basis_matrices(n)
        .iter()
        .map(|m| matrix_to_field(m))
        .collect()
}

/// Chevalley generator fields: for each i < n−1 the pair
/// (x^{i+1}∂_i, x^i∂_{i+1}) — they generate 𝔛_1 under the bracket.
pub fn chevalley_generator_fields(n: usize) -> Vec<VectorField<PolyCoeff>> {
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let e = MultiVec::term(n, vec![i as u8], PolyCoeff::var(n, i + 1));
        let f = MultiVec::term(n, vec![(i + 1) as u8], PolyCoeff::var(n, i));
        out.push(e);
        out.push(f);
    }
    out
}

/// 𝔛_1 as a verified Lie algebra in the [`GradedBasis`] coordinates
/// (structure constants from the field bracket).
pub fn field_algebra(n: usize) -> FiniteAlgebra {
    let basis = GradedBasis::new(n, 1);
    let d = basis.dim();
    let fields: Vec<_> = (0..d).map(|t| basis.field(t)).collect();
    let mut bracket = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let b = lie_bracket(&fields[i], &fields[j]);
            bracket[i][j] = basis
                .coords(&b)
                .expect("bracket of linear div-free fields is linear div-free");
        }
    }
    let labels = (0..d).map(|t| format!("X{}", t + 1)).collect();
    FiniteAlgebra::new_lie(bracket, labels).expect("field bracket satisfies the Lie axioms")
}

/// Matrix of A ↦ sharp(L_X(flat(A))) on constant m-vector fields, in the
/// increasing-tuple basis.  For divergence-free X this is the bracket
/// extension [X, ·].
pub fn action_on_wedge(n: usize, m: usize, x: &VectorField<PolyCoeff>) -> Vec<Vec<Rat>> {
    let tuples = combinations(n, m);
    let dim = tuples.len();
    let mut out = vec![vec![Rat::zero(); dim]; dim];
    for (col, t) in tuples.iter().enumerate() {
        let a = MultiVec::basis(n, t.clone());
        let image = sharp(&lie_derivative_form(x, &flat(&a)));
        debug_assert_eq!(image.degree(), m as i32);
        for (row, rt) in tuples.iter().enumerate() {
            let c = image.coeff(rt);
            // for linear X the result has constant coefficients
            let val = c.coeff_of(&vec![0u16; n]);
            if !val.is_zero() {
                out[row][col] = val;
            }
        }
    }
    out
}

/// The ∧^m action module over [`field_algebra`], verified.
pub fn wedge_action_module(n: usize, m: usize) -> (FiniteAlgebra, ModuleRep) {
    let alg = field_algebra(n);
    let basis = GradedBasis::new(n, 1);
    let mats: Vec<_> = (0..basis.dim())
        .map(|t| action_on_wedge(n, m, &basis.field(t)))
        .collect();
    let module = ModuleRep::from_matrices(&alg, mats)
        .expect("Lie derivative action satisfies the module law");
    (alg, module)
}

/// dim H¹(𝔛_1; ∧^{n−2} of the constant fields) — zero by the Whitehead
/// lemma, computed exactly here.
pub fn whitehead_h1(n: usize) -> usize {
    assert!(n >= 2);
    let (alg, module) = wedge_action_module(n, n - 2);
    h_dim(&alg, &module, 1)
}

// ---------------------------------------------------------------------------
// Equivariant map dimensions (weight-blocked)
// ---------------------------------------------------------------------------

/// Dimension of the space of linear maps T: (source) → (target)
/// commuting with the 𝔛_1-action.  The source is a weight-homogeneous
/// basis of fields together with a coordinate map; the target is given
/// by its action matrices over the Chevalley generator fields and by
/// its weights.
fn equivariant_map_dim(
    n: usize,
    src_fields: &[VectorField<PolyCoeff>],
    src_weights: &[Vec<i64>],
    src_coords: impl Fn(&VectorField<PolyCoeff>) -> Vec<Rat>,
    target_dim: usize,
    target_weights: &[Vec<i64>],
    // action matrix of each Chevalley generator on the target
    target_actions: &[Vec<Vec<Rat>>],
) -> usize {
    let gens = chevalley_generator_fields(n);
    assert_eq!(gens.len(), target_actions.len());
    let src_dim = src_fields.len();

    // the gradings differ by a multiple of 𝟙: source weights sum to k−1,
    // target weights to their own constant; a pair can interact only if
    // weight_src − weight_tgt = c·𝟙 with the forced integer c
    let unknown_of: BTreeMap<(usize, usize), usize> = {
        let mut map = BTreeMap::new();
        let mut next = 0usize;
        for s in 0..src_dim {
            for t in 0..target_dim {
                let diff: Vec<i64> = src_weights[s]
                    .iter()
                    .zip(&target_weights[t])
                    .map(|(a, b)| a - b)
                    .collect();
                if diff.windows(2).all(|w| w[0] == w[1]) {
                    map.insert((s, t), next);
                    next += 1;
                }
            }
        }
        map
    };
    if unknown_of.is_empty() {
        return 0;
    }

    // brackets of generators against the source basis, in source coords
    let mut sys = SparseRows::new(unknown_of.len());
    for (g_idx, g) in gens.iter().enumerate() {
        let rho = &target_actions[g_idx];
        for s in 0..src_dim {
            let bracket = lie_bracket(g, &src_fields[s]);
            let beta = src_coords(&bracket);
            // equation for each target row r:
            //   Σ_{s'} β_{s'} T[r][s'] − Σ_{r'} ρ[r][r'] T[r'][s] = 0
            for r in 0..target_dim {
                let mut row: Vec<(usize, Rat)> = Vec::new();
                for (sp, b) in beta.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    if let Some(&u) = unknown_of.get(&(sp, r)) {
                        row.push((u, b.clone()));
                    }
                }
                for (rp, c) in rho[r].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if let Some(&u) = unknown_of.get(&(s, rp)) {
                        row.push((u, -c.clone()));
                    }
                }
                if !row.is_empty() {
                    row.sort_by_key(|(u, _)| *u);
                    // merge duplicate columns
                    let mut merged: Vec<(usize, Rat)> = Vec::with_capacity(row.len());
                    for (u, c) in row {
                        match merged.last_mut() {
                            Some((lu, lc)) if *lu == u => *lc += c,
                            _ => merged.push((u, c)),
                        }
                    }
                    merged.retain(|(_, c)| !c.is_zero());
                    sys.insert_row(merged);
                }
            }
        }
    }
    unknown_of.len() - sys.rank()
}

/// The full degree-k polynomial fields S^k⊗ℝⁿ in the monomial-pair
/// basis x^σ∂ⱼ (no divergence constraint).
#[derive(Debug, Clone)]
pub struct TensorBasis {
    n: usize,
    k: usize,
    pairs: Vec<(Vec<u16>, u8)>,
    pair_index: BTreeMap<(Vec<u16>, u8), usize>,
}

impl TensorBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let monos = monomials(n, k);
        let mut pairs = Vec::with_capacity(monos.len() * n);
        for m in &monos {
            for j in 0..n as u8 {
                pairs.push((m.clone(), j));
            }
        }
        let pair_index = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        TensorBasis {
            n,
            k,
            pairs,
            pair_index,
        }
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn field(&self, t: usize) -> VectorField<PolyCoeff> {
        let (sigma, j) = &self.pairs[t];
        MultiVec::term(
            self.n,
            vec![*j],
            PolyCoeff::monomial(self.n, sigma.clone(), rat_int(1)),
        )
    }

    pub fn weight(&self, t: usize) -> Vec<i64> {
        let (sigma, j) = &self.pairs[t];
        let mut w: Vec<i64> = sigma.iter().map(|&e| e as i64).collect();
        w[*j as usize] -= 1;
        w
    }

    /// Coordinates of any degree-k field (total by construction).
    pub fn coords(&self, x: &VectorField<PolyCoeff>) -> Option<Vec<Rat>> {
        if x.dim() != self.n || x.degree() != 1 {
            return None;
        }
        let mut v = vec![Rat::zero(); self.pairs.len()];
        for (idx, f) in x.terms() {
            let j = idx[0];
            for (sigma, c) in f.terms() {
                let col = *self.pair_index.get(&(sigma.clone(), j))?;
                v[col] = c.clone();
            }
        }
        Some(v)
    }
}

/// dim Hom_{𝔛_1}(𝔛_k, ∧^{n−2} with the [`action_on_wedge`] twist).
/// Weight totals force this to vanish unless k+n−3 ≡ 0 (mod n), and the
/// blocked system decides the remaining cases exactly.
pub fn intertwiner_dim(n: usize, k: usize) -> usize {
    let source = GradedBasis::new(n, k);
    let m = n - 2;
    let tuples = combinations(n, m);
    // target weight of e_S is −1_S (the action twists by the negative)
    let target_weights: Vec<Vec<i64>> = tuples
        .iter()
        .map(|t| {
            let mut w = vec![0i64; n];
            for &i in t {
                w[i as usize] = -1;
            }
            w
        })
        .collect();
    let gens = chevalley_generator_fields(n);
    let target_actions: Vec<_> = gens.iter().map(|g| action_on_wedge(n, m, g)).collect();
    let src_fields: Vec<_> = (0..source.dim()).map(|t| source.field(t)).collect();
    let src_weights: Vec<_> = (0..source.dim()).map(|t| source.weight(t)).collect();
    equivariant_map_dim(
        n,
        &src_fields,
        &src_weights,
        |x| {
            source
                .coords(x)
                .expect("generator bracket stays in the graded piece")
        },
        tuples.len(),
        &target_weights,
        &target_actions,
    )
}

/// dim End_{𝔛_1}(S^k⊗ℝⁿ): equivariant endomorphisms of the full
/// degree-k polynomial fields under the bracket action of 𝔛_1 ≅ sl(n).
/// Equals 2 for k ≥ 1: the module splits into the divergence-free
/// kernel and one complementary irreducible summand.
pub fn endo_dim_tensor(n: usize, k: usize) -> usize {
    let source = TensorBasis::new(n, k);
    let d = source.dim();
    let target_weights: Vec<Vec<i64>> = (0..d).map(|t| source.weight(t)).collect();
    let gens = chevalley_generator_fields(n);
    let target_actions: Vec<Vec<Vec<Rat>>> = gens
        .iter()
        .map(|g| {
            let mut m = vec![vec![Rat::zero(); d]; d];
            for (col, row_coords) in (0..d)
                .map(|s| {
                    source
                        .coords(&lie_bracket(g, &source.field(s)))
                        .expect("bracket action preserves the coefficient degree")
                })
                .enumerate()
            {
                for (row, c) in row_coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        m[row][col] = c;
                    }
                }
            }
            m
        })
        .collect();
    let src_fields: Vec<_> = (0..d).map(|t| source.field(t)).collect();
    equivariant_map_dim(
        n,
        &src_fields,
        &target_weights,
        |x| {
            source
                .coords(x)
                .expect("bracket action preserves the coefficient degree")
        },
        d,
        &target_weights,
        &target_actions,
    )
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
