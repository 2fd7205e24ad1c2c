//! Deterministic, seedable batteries of randomized invariant checks.
//!
//! Each battery ("suite") draws its instances from a counter-mode stream
//! cipher keyed by `(seed, suite, instance index)`, so a given
//! [`RunConfig`] always produces the same report — including under the
//! `parallel` feature, because instances are independent and results are
//! collected in index order.  A failure record carries the exact inputs
//! needed to reproduce the instance by hand, rendered in the textual
//! grammar (forms, fields, scalars) or as JSON (operator tables).
//!
//! The randomized suites (`scalar`, `cartan`, `leibniz`, `decompose`,
//! `torus`, `ophom`) honour `RunConfig::instances`; the `rep` and `coho`
//! suites are dominated by a fixed list of exact rank computations and
//! only scale their small randomized portion.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cartan::explicit::{
    bivector_bracket_ten_term, bivector_bracket_via_delta, delta_decomposable, wedge_all,
    xfield_of_pair,
};
use crate::cartan::{
    combinations, contract, delta, flat, hamiltonian_field, leibniz_bracket, lie_bracket,
    lie_derivative_form, mu, sharp, Form, MultiVec, VectorField,
};
use crate::coho::{
    ce_d, h_dim, hat, loday_d, natural_module, sl_algebra, unhat, Cochain, CohoError,
    FiniteAlgebra, ModuleRep,
};
use crate::decompose::{commutator_decompose, square_decompose, BracketWitness, SquareWitness};
use crate::gradedrep::{
    endo_dim_tensor, expected_dim, grading_check, intertwiner_dim, monomials, whitehead_h1,
    GradedBasis,
};
use crate::grammar::{diffop_to_json, render_form, render_multivec, ScalarGrammar};
use crate::ophom::{euler_eigencheck, factor_through_d, DiffOp, OpHomError};
use crate::par;
use crate::scalar::{gauss, rat, GaussRat, PolyCoeff, Rat, TrigCoeff};
use crate::torus::{
    central_bracket, cocycle_vs_bracket, constant_mode, cycle_cocycle, lichnerowicz,
    mode_homotopy, normal_form, pairing_rank, CycleSpec,
};

/// Names accepted by [`run_suite`], in canonical report order.
pub const SUITE_NAMES: &[&str] = &[
    "scalar",
    "cartan",
    "leibniz",
    "decompose",
    "rep",
    "coho",
    "torus",
    "ophom",
];

const SALT_SCALAR: u64 = 1;
const SALT_CARTAN: u64 = 2;
const SALT_LEIBNIZ: u64 = 3;
const SALT_DECOMPOSE: u64 = 4;
const SALT_COHO: u64 = 6;
const SALT_TORUS: u64 = 7;
const SALT_OPHOM: u64 = 8;

/// Parameters shared by every suite run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// Master seed; everything else being equal, the report is a pure
    /// function of this value.
    pub seed: u64,
    /// Ambient dimensions exercised by the dimension-generic suites.
    pub dims: Vec<usize>,
    /// Total-degree cap for random polynomial coefficients.
    pub deg_cap: u16,
    /// Sup-norm cap for random torus frequencies.
    pub freq_cap: i32,
    /// Instance-count override; `None` selects each suite's default.
    pub instances: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            dims: vec![3, 4],
            deg_cap: 3,
            freq_cap: 2,
            instances: None,
        }
    }
}

impl RunConfig {
    fn count(&self, default: usize) -> usize {
        self.instances.unwrap_or(default)
    }
}

/// Outcome of one suite: instance count and reproduction payloads for
/// every failed check (empty ⇔ passed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run one suite by name (`None` for an unknown name).
pub fn run_suite(name: &str, cfg: &RunConfig) -> Option<SuiteReport> {
    match name {
        "scalar" => Some(scalar_suite(cfg)),
        "cartan" => Some(cartan_suite(cfg)),
        "leibniz" => Some(leibniz_suite(cfg)),
        "decompose" => Some(decompose_suite(cfg)),
        "rep" => Some(rep_suite(cfg)),
        "coho" => Some(coho_suite(cfg)),
        "torus" => Some(torus_suite(cfg)),
        "ophom" => Some(ophom_suite(cfg)),
        _ => None,
    }
}

/// Run every suite in canonical order.
pub fn run_all(cfg: &RunConfig) -> Vec<SuiteReport> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, cfg).expect("canonical suite name"))
        .collect()
}

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

fn instance_rng(seed: u64, salt: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((salt << 32) | index as u64);
    rng
}

fn run_instances<F>(name: &'static str, salt: u64, count: usize, seed: u64, check: F) -> SuiteReport
where
    F: Fn(&mut ChaCha8Rng, usize) -> Vec<String> + Sync + Send,
{
    let per: Vec<Vec<String>> = par::map_indexed(count, |i| {
        let mut rng = instance_rng(seed, salt, i);
        check(&mut rng, i)
    });
    SuiteReport {
        name,
        instances: count,
        failures: per.into_iter().flatten().collect(),
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_rat_nonzero(rng: &mut ChaCha8Rng) -> Rat {
    let num = [-4i64, -3, -2, -1, 1, 2, 3, 4][rng.gen_range(0..8)];
    rat(num, rng.gen_range(1..=3))
}

fn random_gauss_nonzero(rng: &mut ChaCha8Rng) -> GaussRat {
    match rng.gen_range(0..3) {
        0 => gauss(random_rat_nonzero(rng), Rat::zero()),
        1 => gauss(Rat::zero(), random_rat_nonzero(rng)),
        _ => gauss(random_rat_nonzero(rng), random_rat_nonzero(rng)),
    }
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg_cap: u16) -> PolyCoeff {
    let mut acc = PolyCoeff::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let total = rng.gen_range(0..=deg_cap);
        let mut exps = vec![0u16; n];
        for _ in 0..total {
            exps[rng.gen_range(0..n)] += 1;
        }
        acc = acc.add(&PolyCoeff::monomial(n, exps, random_rat_nonzero(rng)));
    }
    acc
}

fn random_trig(rng: &mut ChaCha8Rng, n: usize, freq_cap: i32) -> TrigCoeff {
    let mut acc = TrigCoeff::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let freq: Vec<i32> = (0..n)
            .map(|_| rng.gen_range(-freq_cap..=freq_cap))
            .collect();
        acc = acc.add(&TrigCoeff::mode(n, freq, random_gauss_nonzero(rng)));
    }
    acc
}

fn random_poly_form(rng: &mut ChaCha8Rng, n: usize, k: usize, deg_cap: u16) -> Form<PolyCoeff> {
    let mut acc = Form::zero(n, k as i32);
    let combos = combinations(n, k);
    for _ in 0..rng.gen_range(1..=2) {
        let idx = combos[rng.gen_range(0..combos.len())].clone();
        acc = acc.add(&Form::term(n, idx, random_poly(rng, n, deg_cap)));
    }
    acc
}

fn random_trig_form(rng: &mut ChaCha8Rng, n: usize, k: usize, freq_cap: i32) -> Form<TrigCoeff> {
    let mut acc = Form::zero(n, k as i32);
    let combos = combinations(n, k);
    for _ in 0..rng.gen_range(1..=2) {
        let idx = combos[rng.gen_range(0..combos.len())].clone();
        acc = acc.add(&Form::term(n, idx, random_trig(rng, n, freq_cap)));
    }
    acc
}

fn random_poly_multivec(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    deg_cap: u16,
) -> MultiVec<PolyCoeff> {
    let mut acc = MultiVec::zero(n, k as i32);
    let combos = combinations(n, k);
    for _ in 0..rng.gen_range(1..=2) {
        let idx = combos[rng.gen_range(0..combos.len())].clone();
        acc = acc.add(&MultiVec::term(n, idx, random_poly(rng, n, deg_cap)));
    }
    acc
}

fn random_poly_field(rng: &mut ChaCha8Rng, n: usize, deg_cap: u16) -> VectorField<PolyCoeff> {
    let mut acc = MultiVec::zero(n, 1);
    for j in 0..n {
        acc = acc.add(&MultiVec::term(
            n,
            vec![j as u8],
            random_poly(rng, n, deg_cap),
        ));
    }
    acc
}

/// Divergence-free torus field: a Hamiltonian (exact) part, plus — half
/// the time — a constant field, which is divergence-free but not exact.
fn random_divfree_field(rng: &mut ChaCha8Rng, n: usize, freq_cap: i32) -> VectorField<TrigCoeff> {
    let potential = random_trig_form(rng, n, n - 2, freq_cap);
    let mut x = hamiltonian_field(&potential).expect("(n-2)-form potential");
    if rng.gen_range(0..2) == 0 {
        let j = rng.gen_range(0..n);
        x = x.add(&MultiVec::term(
            n,
            vec![j as u8],
            TrigCoeff::constant(n, random_gauss_nonzero(rng)),
        ));
    }
    x
}

/// Closed torus 2-form: an exact part d(1-form) plus a constant mode.
fn random_closed_2form(rng: &mut ChaCha8Rng, n: usize, freq_cap: i32) -> Form<TrigCoeff> {
    let sigma = random_trig_form(rng, n, 1, freq_cap).d();
    let combos = combinations(n, 2);
    let idx = combos[rng.gen_range(0..combos.len())].clone();
    sigma.add(&Form::term(
        n,
        idx,
        TrigCoeff::constant(n, random_gauss_nonzero(rng)),
    ))
}

// ---------------------------------------------------------------------------
// scalar: coefficient-ring laws
// ---------------------------------------------------------------------------

fn scalar_suite(cfg: &RunConfig) -> SuiteReport {
    let dims: Vec<usize> = cfg.dims.iter().copied().filter(|&n| n >= 1).collect();
    let (deg_cap, freq_cap) = (cfg.deg_cap, cfg.freq_cap);
    run_instances(
        "scalar",
        SALT_SCALAR,
        cfg.count(200),
        cfg.seed,
        move |rng, i| {
            let mut fails = Vec::new();
            for &n in &dims {
                let a = random_poly(rng, n, deg_cap);
                let b = random_poly(rng, n, deg_cap);
                let c = random_poly(rng, n, deg_cap);
                let ax = rng.gen_range(0..n);
                let ax2 = rng.gen_range(0..n);
                let payload =
                    |tag: &str| format!("scalar[{i}] {tag} n={n} ring=poly a=({a}) b=({b}) c=({c})");
                if a.mul(&b).mul(&c) != a.mul(&b.mul(&c)) {
                    fails.push(payload("mul-assoc"));
                }
                if a.mul(&b.add(&c)) != a.mul(&b).add(&a.mul(&c)) {
                    fails.push(payload("mul-distrib"));
                }
                if a.mul(&b) != b.mul(&a) {
                    fails.push(payload("mul-comm"));
                }
                if a.mul(&b).derive(ax) != a.derive(ax).mul(&b).add(&a.mul(&b.derive(ax))) {
                    fails.push(payload("derive-product-rule"));
                }
                if a.derive(ax).derive(ax2) != a.derive(ax2).derive(ax) {
                    fails.push(payload("derive-commute"));
                }
                if a.primitive_in_axis(ax).derive(ax) != a {
                    fails.push(payload("primitive-inverts-derive"));
                }

                let u = random_trig(rng, n, freq_cap);
                let v = random_trig(rng, n, freq_cap);
                let w = random_trig(rng, n, freq_cap);
                let tpayload =
                    |tag: &str| format!("scalar[{i}] {tag} n={n} ring=trig u=({u}) v=({v}) w=({w})");
                if u.mul(&v).mul(&w) != u.mul(&v.mul(&w)) {
                    fails.push(tpayload("mul-assoc"));
                }
                if u.mul(&v.add(&w)) != u.mul(&v).add(&u.mul(&w)) {
                    fails.push(tpayload("mul-distrib"));
                }
                if u.mul(&v).derive(ax) != u.derive(ax).mul(&v).add(&u.mul(&v.derive(ax))) {
                    fails.push(tpayload("derive-product-rule"));
                }
                if u.derive(ax).derive(ax2) != u.derive(ax2).derive(ax) {
                    fails.push(tpayload("derive-commute"));
                }
                if !u.derive(ax).integrate_torus().is_zero() {
                    fails.push(tpayload("integral-kills-derivatives"));
                }
                if u.constant_part().add(&u.nonconstant_part()) != u {
                    fails.push(tpayload("mode-split"));
                }
                if u.mul(&v).conj() != u.conj().mul(&v.conj()) {
                    fails.push(tpayload("conj-multiplicative"));
                }
            }
            fails
        },
    )
}

// ---------------------------------------------------------------------------
// cartan: differential identities and explicit-path equivalences
// ---------------------------------------------------------------------------

fn cartan_suite(cfg: &RunConfig) -> SuiteReport {
    let dims: Vec<usize> = cfg.dims.iter().copied().filter(|&n| n >= 2).collect();
    let deg_cap = cfg.deg_cap;
    run_instances(
        "cartan",
        SALT_CARTAN,
        cfg.count(200),
        cfg.seed,
        move |rng, i| {
            let mut fails = Vec::new();
            for &n in &dims {
                // d² = 0
                let k = rng.gen_range(0..n);
                let alpha = random_poly_form(rng, n, k, deg_cap);
                if !alpha.d().d().is_zero() {
                    fails.push(format!(
                        "cartan[{i}] d-squared n={n} alpha=({})",
                        render_form(&alpha)
                    ));
                }
                // δ² = 0
                let m = rng.gen_range(2..=n);
                let av = random_poly_multivec(rng, n, m, deg_cap);
                if !delta(&delta(&av)).is_zero() {
                    fails.push(format!(
                        "cartan[{i}] delta-squared n={n} a=({})",
                        render_multivec(&av)
                    ));
                }
                // graded product rule for d
                let p = rng.gen_range(0..n);
                let q = rng.gen_range(0..n - p);
                let ap = random_poly_form(rng, n, p, deg_cap);
                let bq = random_poly_form(rng, n, q, deg_cap);
                let lhs = ap.wedge(&bq).d();
                let second = ap.wedge(&bq.d());
                let rhs = if p % 2 == 1 {
                    ap.d().wedge(&bq).sub(&second)
                } else {
                    ap.d().wedge(&bq).add(&second)
                };
                if lhs != rhs {
                    fails.push(format!(
                        "cartan[{i}] wedge-sign n={n} p={p} q={q} a=({}) b=({})",
                        render_form(&ap),
                        render_form(&bq)
                    ));
                }
                // musical inversion both ways
                let kk = rng.gen_range(0..=n);
                let mv = random_poly_multivec(rng, n, kk, deg_cap);
                if sharp(&flat(&mv)) != mv {
                    fails.push(format!(
                        "cartan[{i}] sharp-flat n={n} a=({})",
                        render_multivec(&mv)
                    ));
                }
                let om = random_poly_form(rng, n, kk, deg_cap);
                if flat(&sharp(&om)) != om {
                    fails.push(format!(
                        "cartan[{i}] flat-sharp n={n} w=({})",
                        render_form(&om)
                    ));
                }
                // explicit path 1: δ on decomposables
                let kf = rng.gen_range(1..=3.min(n));
                let factors: Vec<VectorField<PolyCoeff>> =
                    (0..kf).map(|_| random_poly_field(rng, n, deg_cap)).collect();
                if delta(&wedge_all(n, &factors)) != delta_decomposable(n, &factors) {
                    let fs: Vec<String> = factors.iter().map(render_multivec).collect();
                    fails.push(format!(
                        "cartan[{i}] delta-explicit n={n} factors=[{}]",
                        fs.join("; ")
                    ));
                }
                // explicit path 2: closed form of the potential field
                let x1 = random_poly_field(rng, n, deg_cap);
                let x2 = random_poly_field(rng, n, deg_cap);
                let pot = flat(&x1.wedge(&x2));
                match hamiltonian_field(&pot) {
                    Ok(xa) => {
                        if xa != xfield_of_pair(&x1, &x2) {
                            fails.push(format!(
                                "cartan[{i}] xfield-explicit n={n} x1=({}) x2=({})",
                                render_multivec(&x1),
                                render_multivec(&x2)
                            ));
                        }
                    }
                    Err(e) => fails.push(format!(
                        "cartan[{i}] xfield-error n={n} err={e} x1=({}) x2=({})",
                        render_multivec(&x1),
                        render_multivec(&x2)
                    )),
                }
                // explicit path 3: the bivector bracket three ways
                let y1 = random_poly_field(rng, n, deg_cap);
                let y2 = random_poly_field(rng, n, deg_cap);
                let via = bivector_bracket_via_delta(&x1, &x2, &y1, &y2);
                let ten = bivector_bracket_ten_term(&x1, &x2, &y1, &y2);
                let payload = || {
                    format!(
                        "x1=({}) x2=({}) y1=({}) y2=({})",
                        render_multivec(&x1),
                        render_multivec(&x2),
                        render_multivec(&y1),
                        render_multivec(&y2)
                    )
                };
                if via != ten {
                    fails.push(format!(
                        "cartan[{i}] bracket-ten-term n={n} {}",
                        payload()
                    ));
                }
                match leibniz_bracket(&pot, &flat(&y1.wedge(&y2))) {
                    Ok(lb) => {
                        if sharp(&lb) != via {
                            fails.push(format!(
                                "cartan[{i}] bracket-transport n={n} {}",
                                payload()
                            ));
                        }
                    }
                    Err(e) => fails.push(format!(
                        "cartan[{i}] bracket-transport-error n={n} err={e} {}",
                        payload()
                    )),
                }
            }
            fails
        },
    )
}

// ---------------------------------------------------------------------------
// leibniz: the bracket algebra of potentials
// ---------------------------------------------------------------------------

fn leibniz_identities<C: ScalarGrammar>(
    tag: &str,
    n: usize,
    a: &Form<C>,
    b: &Form<C>,
    c: &Form<C>,
) -> Vec<String> {
    let mut fails = Vec::new();
    let payload = |law: &str| {
        format!(
            "{tag} {law} n={n} ring={} a=({}) b=({}) c=({})",
            C::ring_name(),
            render_form(a),
            render_form(b),
            render_form(c)
        )
    };
    let bracket = |u: &Form<C>, v: &Form<C>| leibniz_bracket(u, v).expect("(n-2)-forms");
    let xa = hamiltonian_field(a).expect("(n-2)-form");
    let xb = hamiltonian_field(b).expect("(n-2)-form");
    // left Leibniz identity
    let lhs = bracket(a, &bracket(b, c));
    let rhs = bracket(&bracket(a, b), c).add(&bracket(b, &bracket(a, c)));
    if lhs != rhs {
        fails.push(payload("left-leibniz"));
    }
    // potential-to-field is a bracket homomorphism
    if hamiltonian_field(&bracket(a, b)).expect("bracket degree") != lie_bracket(&xa, &xb) {
        fails.push(payload("field-homomorphism"));
    }
    // the symmetric part is exact, with an explicit primitive
    let sym = bracket(a, b).add(&bracket(b, a));
    let primitive = contract(&xa, b).add(&contract(&xb, a));
    if sym != primitive.d() {
        fails.push(payload("symmetric-part-exact"));
    }
    // potential fields preserve the volume form
    if !lie_derivative_form(&xa, &mu::<C>(n)).is_zero() {
        fails.push(payload("volume-preserved"));
    }
    fails
}

fn leibniz_suite(cfg: &RunConfig) -> SuiteReport {
    let dims: Vec<usize> = cfg.dims.iter().copied().filter(|&n| n >= 2).collect();
    let count = if dims.is_empty() { 0 } else { cfg.count(500) };
    let (deg_cap, freq_cap) = (cfg.deg_cap, cfg.freq_cap);
    run_instances(
        "leibniz",
        SALT_LEIBNIZ,
        count,
        cfg.seed,
        move |rng, i| {
            let n = dims[i % dims.len()];
            let tag = format!("leibniz[{i}]");
            if i % 2 == 0 {
                let a = random_poly_form(rng, n, n - 2, deg_cap);
                let b = random_poly_form(rng, n, n - 2, deg_cap);
                let c = random_poly_form(rng, n, n - 2, deg_cap);
                leibniz_identities(&tag, n, &a, &b, &c)
            } else {
                let a = random_trig_form(rng, n, n - 2, freq_cap);
                let b = random_trig_form(rng, n, n - 2, freq_cap);
                let c = random_trig_form(rng, n, n - 2, freq_cap);
                leibniz_identities(&tag, n, &a, &b, &c)
            }
        },
    )
}

// ---------------------------------------------------------------------------
// decompose: bracket and square witnesses
// ---------------------------------------------------------------------------

fn decompose_suite(cfg: &RunConfig) -> SuiteReport {
    let dims: Vec<usize> = cfg.dims.iter().copied().filter(|&n| n >= 3).collect();
    let deg_cap = cfg.deg_cap;
    run_instances(
        "decompose",
        SALT_DECOMPOSE,
        cfg.count(200),
        cfg.seed,
        move |rng, i| {
            let mut fails = Vec::new();
            for &n in &dims {
                // bivector → sum of brackets
                let bv = random_poly_multivec(rng, n, 2, deg_cap);
                match commutator_decompose(&bv) {
                    Ok(w) => {
                        if !w.verify() {
                            fails.push(format!(
                                "decompose[{i}] bracket-witness-reverify n={n} b=({})",
                                render_multivec(&bv)
                            ));
                        }
                        if w.count() > BracketWitness::bound(n) {
                            fails.push(format!(
                                "decompose[{i}] bracket-witness-size n={n} count={} bound={} b=({})",
                                w.count(),
                                BracketWitness::bound(n),
                                render_multivec(&bv)
                            ));
                        }
                    }
                    Err(e) => fails.push(format!(
                        "decompose[{i}] bracket-witness-error n={n} err={e} b=({})",
                        render_multivec(&bv)
                    )),
                }
                // (n−3)-form → sum of self-contractions; squares over d
                let target = random_poly_form(rng, n, n - 3, deg_cap);
                match square_decompose(&target) {
                    Ok(w) => {
                        let good = w.contraction_sum() == target
                            && w.squares_sum() == target.d()
                            && w.count() <= SquareWitness::bound(n)
                            && w.verify_contraction_identity();
                        if !good {
                            fails.push(format!(
                                "decompose[{i}] square-witness n={n} count={} bound={} target=({})",
                                w.count(),
                                SquareWitness::bound(n),
                                render_form(&target)
                            ));
                        }
                    }
                    Err(e) => fails.push(format!(
                        "decompose[{i}] square-witness-error n={n} err={e} target=({})",
                        render_form(&target)
                    )),
                }
            }
            fails
        },
    )
}

// ---------------------------------------------------------------------------
// rep: graded module dimensions and equivariant ranks (fixed battery)
// ---------------------------------------------------------------------------

fn rep_suite(_cfg: &RunConfig) -> SuiteReport {
    let mut fails = Vec::new();
    let mut instances = 0usize;
    // graded dimensions in ambient dimension 3
    for (k, want) in [(0usize, 3usize), (1, 8), (2, 15), (3, 24)] {
        instances += 1;
        let basis = GradedBasis::new(3, k);
        if basis.dim() != want || expected_dim(3, k) != want {
            fails.push(format!(
                "rep graded-dim n=3 k={k} got={} expected={want}",
                basis.dim()
            ));
        }
    }
    // bracket respects the grading
    for k in 0..=3usize {
        for l in 0..=3usize {
            if k + l > 3 {
                continue;
            }
            instances += 1;
            if !grading_check(3, k, l) {
                fails.push(format!("rep grading-check n=3 k={k} l={l}"));
            }
        }
    }
    // first Whitehead rank of the degree-one action
    instances += 1;
    let h1 = whitehead_h1(3);
    if h1 != 0 {
        fails.push(format!("rep whitehead-h1 n=3 got={h1} expected=0"));
    }
    // equivariant maps in the degree-2 stratum
    instances += 1;
    let iw = intertwiner_dim(3, 2);
    if iw != 0 {
        fails.push(format!("rep intertwiner n=3 k=2 got={iw} expected=0"));
    }
    instances += 1;
    let ed = endo_dim_tensor(3, 2);
    if ed != 2 {
        fails.push(format!("rep endo-dim n=3 k=2 got={ed} expected=2"));
    }
    SuiteReport {
        name: "rep",
        instances,
        failures: fails,
    }
}

// ---------------------------------------------------------------------------
// coho: cochain complexes over finite bases
// ---------------------------------------------------------------------------

fn sort_with_sign(tuple: &[usize]) -> (Vec<usize>, bool, bool) {
    let mut idx = tuple.to_vec();
    let mut negative = false;
    for a in 0..idx.len() {
        for b in 0..idx.len().saturating_sub(1 + a) {
            if idx[b] > idx[b + 1] {
                idx.swap(b, b + 1);
                negative = !negative;
            }
        }
    }
    let degenerate = idx.windows(2).any(|w| w[0] == w[1]);
    (idx, negative, degenerate)
}

fn random_alternating_cochain(rng: &mut ChaCha8Rng, q: usize, d: usize, vd: usize) -> Cochain {
    let mut coeffs: BTreeMap<Vec<usize>, Vec<Rat>> = BTreeMap::new();
    for t in combinations(d, q) {
        let key: Vec<usize> = t.iter().map(|&x| x as usize).collect();
        coeffs.insert(key, (0..vd).map(|_| random_rat(rng)).collect());
    }
    Cochain::from_fn(q, d, vd, move |tuple| {
        let (sorted, negative, degenerate) = sort_with_sign(tuple);
        if degenerate {
            return vec![Rat::zero(); vd];
        }
        let base = &coeffs[&sorted];
        base.iter()
            .map(|c| if negative { -c.clone() } else { c.clone() })
            .collect()
    })
}

fn random_cochain(rng: &mut ChaCha8Rng, q: usize, d: usize, vd: usize) -> Cochain {
    let mut table: BTreeMap<Vec<usize>, Vec<Rat>> = BTreeMap::new();
    let mut idx = vec![0usize; q];
    loop {
        table.insert(idx.clone(), (0..vd).map(|_| random_rat(rng)).collect());
        // mixed-radix increment
        let mut pos = q;
        while pos > 0 {
            idx[pos - 1] += 1;
            if idx[pos - 1] < d {
                break;
            }
            idx[pos - 1] = 0;
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
    }
    Cochain::from_fn(q, d, vd, move |tuple| table[tuple].clone())
}

fn coho_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = run_instances(
        "coho",
        SALT_COHO,
        cfg.count(25),
        cfg.seed,
        move |rng, i| {
            let mut fails = Vec::new();
            let alg = sl_algebra(2);
            let d = alg.dim();
            let trivial = ModuleRep::trivial(&alg, 1);
            let coad = ModuleRep::coadjoint(&alg).expect("coadjoint representation");
            let adjoint = ModuleRep::adjoint(&alg).expect("adjoint representation");
            let q = 1 + (i % 2);
            // alternating complex: d² = 0 with adjoint values
            let psi = random_alternating_cochain(rng, q, d, d);
            let dd = ce_d(&ce_d(&psi, &alg, &adjoint).expect("alternating"), &alg, &adjoint)
                .expect("image is alternating");
            if !dd.is_zero() {
                fails.push(format!("coho[{i}] ce-d-squared arity={q}"));
            }
            // full multilinear complex: d² = 0 with trivial values
            let phi = random_cochain(rng, q, d, 1);
            if !loday_d(&loday_d(&phi, &alg, &trivial), &alg, &trivial).is_zero() {
                fails.push(format!("coho[{i}] loday-d-squared arity={q}"));
            }
            // the arity-lowering transform intertwines the differentials
            let lhs = hat(&loday_d(&phi, &alg, &trivial));
            let rhs = loday_d(&hat(&phi), &alg, &coad);
            if lhs != rhs {
                fails.push(format!("coho[{i}] hat-intertwines arity={q}"));
            }
            if unhat(&hat(&phi)) != phi {
                fails.push(format!("coho[{i}] unhat-roundtrip arity={q}"));
            }
            fails
        },
    );
    // fixed exact ranks
    report.instances += 1;
    let alg2 = sl_algebra(2);
    let h2 = h_dim(&alg2, &ModuleRep::trivial(&alg2, 1), 2);
    if h2 != 0 {
        report
            .failures
            .push(format!("coho h2-sl2-trivial got={h2} expected=0"));
    }
    report.instances += 1;
    let alg3 = sl_algebra(3);
    let h1 = h_dim(&alg3, &natural_module(3), 1);
    if h1 != 0 {
        report
            .failures
            .push(format!("coho h1-sl3-natural got={h1} expected=0"));
    }
    // truncated divergence-free window assembles and passes its in-window
    // identity audit
    report.instances += 1;
    match divfree_truncated_algebra(3, 1) {
        Ok(alg) => {
            if alg.dim() != 11 {
                report
                    .failures
                    .push(format!("coho divfree-dim got={} expected=11", alg.dim()));
            }
        }
        Err(e) => report
            .failures
            .push(format!("coho divfree-window err={e}")),
    }
    report
}

// ---------------------------------------------------------------------------
// torus: homotopy, quotient classes, central extension cocycles
// ---------------------------------------------------------------------------

fn torus_suite(cfg: &RunConfig) -> SuiteReport {
    let dims: Vec<usize> = cfg.dims.iter().copied().filter(|&n| n >= 3).collect();
    let count = if dims.is_empty() { 0 } else { cfg.count(200) };
    let freq_cap = cfg.freq_cap;
    let mut report = run_instances(
        "torus",
        SALT_TORUS,
        count,
        cfg.seed,
        move |rng, i| {
            let mut fails = Vec::new();
            let n = dims[i % dims.len()];
            // dh + hd = id − constant projection
            let k = rng.gen_range(1..n);
            let w = random_trig_form(rng, n, k, freq_cap);
            let recon = mode_homotopy(&w.d()).add(&mode_homotopy(&w).d());
            if recon != w.sub(&constant_mode(&w)) {
                fails.push(format!(
                    "torus[{i}] homotopy n={n} k={k} w=({})",
                    render_form(&w)
                ));
            }
            let f = Form::scalar(n, random_trig(rng, n, freq_cap));
            if mode_homotopy(&f.d()) != f.sub(&constant_mode(&f)) {
                fails.push(format!(
                    "torus[{i}] homotopy-functions n={n} f=({})",
                    render_form(&f)
                ));
            }
            // the quotient projection kills exact forms
            let theta = random_trig_form(rng, n, n - 3, freq_cap);
            let exact = theta.d();
            if !normal_form(&exact).is_zero() {
                fails.push(format!(
                    "torus[{i}] normalform-exact n={n} theta=({})",
                    render_form(&theta)
                ));
            }
            let a = random_trig_form(rng, n, n - 2, freq_cap);
            if normal_form(&a.add(&exact)).rep() != normal_form(&a).rep() {
                fails.push(format!(
                    "torus[{i}] normalform-translate n={n} a=({}) theta=({})",
                    render_form(&a),
                    render_form(&theta)
                ));
            }
            // bracket on classes: antisymmetric and left Leibniz
            let ca = normal_form(&a);
            let cb = normal_form(&random_trig_form(rng, n, n - 2, freq_cap));
            let cc = normal_form(&random_trig_form(rng, n, n - 2, freq_cap));
            let class_payload = || {
                format!(
                    "a=({}) b=({}) c=({})",
                    render_form(ca.rep()),
                    render_form(cb.rep()),
                    render_form(cc.rep())
                )
            };
            match (central_bracket(&ca, &cb), central_bracket(&cb, &ca)) {
                (Ok(ab), Ok(ba)) => {
                    if !normal_form(&ab.rep().add(ba.rep())).is_zero() {
                        fails.push(format!(
                            "torus[{i}] central-antisym n={n} {}",
                            class_payload()
                        ));
                    }
                    let nested = central_bracket(&cb, &cc)
                        .and_then(|bc| central_bracket(&ca, &bc))
                        .and_then(|lhs| {
                            let r1 = central_bracket(&ab, &cc)?;
                            let r2 = central_bracket(&cb, &central_bracket(&ca, &cc)?)?;
                            Ok(lhs.rep().sub(r1.rep()).sub(r2.rep()))
                        });
                    match nested {
                        Ok(defect) => {
                            if !normal_form(&defect).is_zero() {
                                fails.push(format!(
                                    "torus[{i}] central-leibniz n={n} {}",
                                    class_payload()
                                ));
                            }
                        }
                        Err(e) => fails.push(format!(
                            "torus[{i}] central-leibniz-error n={n} err={e} {}",
                            class_payload()
                        )),
                    }
                }
                (a_res, b_res) => fails.push(format!(
                    "torus[{i}] central-bracket-error n={n} ok=({},{}) {}",
                    a_res.is_ok(),
                    b_res.is_ok(),
                    class_payload()
                )),
            }
            // 2-cocycles on divergence-free fields
            let sigma = random_closed_2form(rng, n, freq_cap);
            let x = random_divfree_field(rng, n, freq_cap);
            let y = random_divfree_field(rng, n, freq_cap);
            let z = random_divfree_field(rng, n, freq_cap);
            let field_payload = || {
                format!(
                    "sigma=({}) x=({}) y=({}) z=({})",
                    render_form(&sigma),
                    render_multivec(&x),
                    render_multivec(&y),
                    render_multivec(&z)
                )
            };
            let lich = |u: &VectorField<TrigCoeff>, v: &VectorField<TrigCoeff>| {
                lichnerowicz(&sigma, u, v).expect("closed form, div-free fields")
            };
            if !(lich(&x, &y) + lich(&y, &x)).is_zero() {
                fails.push(format!(
                    "torus[{i}] lichnerowicz-antisym n={n} {}",
                    field_payload()
                ));
            }
            let cyc = lich(&lie_bracket(&x, &y), &z)
                + lich(&lie_bracket(&y, &z), &x)
                + lich(&lie_bracket(&z, &x), &y);
            if !cyc.is_zero() {
                fails.push(format!(
                    "torus[{i}] lichnerowicz-cocycle n={n} {}",
                    field_payload()
                ));
            }
            let fa = rng.gen_range(0..n - 1) as u8;
            let fb = rng.gen_range(fa as usize + 1..n) as u8;
            let cyc_spec = CycleSpec::new(n, fa, fb).expect("valid fixed axes");
            let period = |u: &VectorField<TrigCoeff>, v: &VectorField<TrigCoeff>| {
                cycle_cocycle(&cyc_spec, u, v).expect("div-free fields")
            };
            if !(period(&x, &y) + period(&y, &x)).is_zero() {
                fails.push(format!(
                    "torus[{i}] cycle-antisym n={n} fixed=({fa},{fb}) {}",
                    field_payload()
                ));
            }
            let pcyc = period(&lie_bracket(&x, &y), &z)
                + period(&lie_bracket(&y, &z), &x)
                + period(&lie_bracket(&z, &x), &y);
            if !pcyc.is_zero() {
                fails.push(format!(
                    "torus[{i}] cycle-cocycle n={n} fixed=({fa},{fb}) {}",
                    field_payload()
                ));
            }
            // pairing identity on exact classes
            let b = random_trig_form(rng, n, n - 2, freq_cap);
            match cocycle_vs_bracket(&sigma, &a, &b) {
                Ok((left, right)) => {
                    if left != right {
                        fails.push(format!(
                            "torus[{i}] cocycle-vs-bracket n={n} sigma=({}) a=({}) b=({})",
                            render_form(&sigma),
                            render_form(&a),
                            render_form(&b)
                        ));
                    }
                }
                Err(e) => fails.push(format!(
                    "torus[{i}] cocycle-vs-bracket-error n={n} err={e} sigma=({})",
                    render_form(&sigma)
                )),
            }
            fails
        },
    );
    // the center pairing has full rank in dimension 3
    report.instances += 1;
    let rank = pairing_rank(3);
    if rank != 3 {
        report
            .failures
            .push(format!("torus pairing-rank n=3 got={rank} expected=3"));
    }
    report
}

// ---------------------------------------------------------------------------
// ophom: factoring operators through the exterior differential
// ---------------------------------------------------------------------------

fn random_diffop(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    width: usize,
    max_order: u16,
    deg_cap: u16,
) -> DiffOp {
    let combos = combinations(n, k);
    let mut entries = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let idx = combos[rng.gen_range(0..combos.len())].clone();
        let total = rng.gen_range(0..=max_order);
        let mut sigma = vec![0u16; n];
        for _ in 0..total {
            sigma[rng.gen_range(0..n)] += 1;
        }
        let value: Vec<PolyCoeff> = (0..width).map(|_| random_poly(rng, n, deg_cap)).collect();
        entries.push((idx, sigma, value));
    }
    DiffOp::from_terms(n, k, width, entries).expect("valid random operator")
}

fn diffop_monomial_agreement(
    q: &DiffOp,
    d_op: &DiffOp,
    max_deg: usize,
) -> Result<bool, OpHomError> {
    let (n, k) = (d_op.n(), d_op.k());
    for deg in 0..=max_deg {
        for exps in monomials(n, deg) {
            for idx in combinations(n, k) {
                let alpha = Form::term(n, idx, PolyCoeff::monomial(n, exps.clone(), Rat::one()));
                if q.apply(&alpha.d())? != d_op.apply(&alpha)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn ophom_suite(cfg: &RunConfig) -> SuiteReport {
    let deg_cap = cfg.deg_cap.min(2);
    let mut report = run_instances(
        "ophom",
        SALT_OPHOM,
        cfg.count(50),
        cfg.seed,
        move |rng, i| {
            let mut fails = Vec::new();
            let n = [2usize, 3][i % 2];
            let k = rng.gen_range(1..n.max(2));
            let width = rng.gen_range(1..=2);
            // operators that kill exact forms, by construction
            let q0 = random_diffop(rng, n, k + 1, width, 3, deg_cap);
            let d_op = q0.precompose_d().expect("degree k+1 >= 1");
            let op_payload = || {
                serde_json::to_string(&diffop_to_json(&d_op)).expect("operator serializes")
            };
            match factor_through_d(&d_op) {
                Ok((q, stages)) => {
                    for s in &stages {
                        if !s.property1 || !s.property2 {
                            fails.push(format!(
                                "ophom[{i}] stage-invariant n={n} stage={} p1={} p2={} op={}",
                                s.stage, s.property1, s.property2,
                                op_payload()
                            ));
                        }
                    }
                    match q.precompose_d() {
                        Ok(qd) => {
                            if qd != d_op {
                                fails.push(format!(
                                    "ophom[{i}] table-reassembly n={n} op={}",
                                    op_payload()
                                ));
                            }
                        }
                        Err(e) => fails.push(format!(
                            "ophom[{i}] table-reassembly-error n={n} err={e} op={}",
                            op_payload()
                        )),
                    }
                    match diffop_monomial_agreement(&q, &d_op, d_op.order() + 2) {
                        Ok(true) => {}
                        Ok(false) => fails.push(format!(
                            "ophom[{i}] monomial-agreement n={n} op={}",
                            op_payload()
                        )),
                        Err(e) => fails.push(format!(
                            "ophom[{i}] monomial-agreement-error n={n} err={e} op={}",
                            op_payload()
                        )),
                    }
                }
                Err(e) => fails.push(format!(
                    "ophom[{i}] factor-error n={n} err={e} op={}",
                    op_payload()
                )),
            }
            // order-filter and evaluation-reconstruction truncations agree
            let tk = rng.gen_range(0..=n);
            let t = random_diffop(rng, n, tk, 1, 3, deg_cap);
            for level in 0..=t.order() {
                if t.truncate(level) != t.truncate_by_evaluation(level) {
                    fails.push(format!(
                        "ophom[{i}] truncate-mismatch n={n} level={level} op={}",
                        serde_json::to_string(&diffop_to_json(&t)).expect("operator serializes")
                    ));
                }
            }
            fails
        },
    );
    // the scaling-field eigenvalue bookkeeping behind the factorization
    for n in 1..=3usize {
        for k in 0..=2.min(n) {
            report.instances += 1;
            if !euler_eigencheck(n, k, 4) {
                report
                    .failures
                    .push(format!("ophom euler-eigencheck n={n} k={k} max-deg=4"));
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// The truncated divergence-free window as a finite algebra
// ---------------------------------------------------------------------------

/// Assemble the graded divergence-free fields of coefficient degree
/// `0..=kmax` on ℝⁿ into one finite bracket table.  Brackets landing
/// beyond the window are truncated to zero, so the left Leibniz identity
/// is only asserted — and audited by the constructor — on triples whose
/// nested brackets all stay inside the window.
pub fn divfree_truncated_algebra(n: usize, kmax: usize) -> Result<FiniteAlgebra, CohoError> {
    let bases: Vec<GradedBasis> = (0..=kmax).map(|k| GradedBasis::new(n, k)).collect();
    let mut offsets = Vec::with_capacity(bases.len());
    let mut dim = 0usize;
    for b in &bases {
        offsets.push(dim);
        dim += b.dim();
    }
    let mut fields = Vec::with_capacity(dim);
    let mut degs = Vec::with_capacity(dim);
    let mut labels = Vec::with_capacity(dim);
    for b in &bases {
        for t in 0..b.dim() {
            fields.push(b.field(t));
            degs.push(b.degree());
            labels.push(format!("g{}.{}", b.degree(), t + 1));
        }
    }
    let zero_vec = vec![Rat::zero(); dim];
    let mut bracket = vec![vec![zero_vec.clone(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let tdeg = degs[i] + degs[j];
            if tdeg == 0 || tdeg - 1 > kmax {
                continue; // constant-field bracket, or out of window
            }
            let lb = lie_bracket(&fields[i], &fields[j]);
            if lb.is_zero() {
                continue;
            }
            let t = tdeg - 1;
            let coords = bases[t]
                .coords(&lb)
                .expect("bracket of graded divergence-free fields is graded");
            for (s, c) in coords.into_iter().enumerate() {
                bracket[i][j][offsets[t] + s] = c;
            }
        }
    }
    let mut verified = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let total = degs[i] + degs[j] + degs[k];
                let pairwise = (degs[i] + degs[j])
                    .max(degs[i] + degs[k])
                    .max(degs[j] + degs[k]);
                // every nested bracket of the identity stays in window
                if total <= kmax + 2 && pairwise <= kmax + 1 {
                    verified.push((i, j, k));
                }
            }
        }
    }
    FiniteAlgebra::new_truncated(bracket, labels, &verified)
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

fn config_summary(cfg: &RunConfig) -> String {
    let dims: Vec<String> = cfg.dims.iter().map(|d| d.to_string()).collect();
    format!(
        "seed={} dims={} deg-cap={} freq-cap={} instances={}",
        cfg.seed,
        dims.join(","),
        cfg.deg_cap,
        cfg.freq_cap,
        cfg.instances
            .map(|x| x.to_string())
            .unwrap_or_else(|| "default".to_string())
    )
}

/// Tab-separated report: a versioned header, the echoed configuration,
/// one row per suite, then one `!`-prefixed line per failure payload.
pub fn reports_to_tsv(reports: &[SuiteReport], cfg: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str("# format-version 1\n");
    out.push_str(&format!("# config {}\n", config_summary(cfg)));
    out.push_str("suite\tinstances\tfailures\tstatus\n");
    for r in reports {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.name,
            r.instances,
            r.failures.len(),
            if r.passed() { "ok" } else { "FAIL" }
        ));
    }
    for r in reports {
        for f in &r.failures {
            out.push_str(&format!("!\t{}\t{}\n", r.name, f));
        }
    }
    out
}

/// The same report as a JSON document.
pub fn reports_to_json(reports: &[SuiteReport], cfg: &RunConfig) -> serde_json::Value {
    serde_json::json!({
        "format_version": "1",
        "kind": "verify-report",
        "config": {
            "seed": cfg.seed,
            "dims": cfg.dims,
            "deg_cap": cfg.deg_cap,
            "freq_cap": cfg.freq_cap,
            "instances": cfg.instances,
        },
        "suites": reports.iter().map(|r| serde_json::json!({
            "name": r.name,
            "instances": r.instances,
            "failures": r.failures,
            "passed": r.passed(),
        })).collect::<Vec<_>>(),
        "passed": reports.iter().all(|r| r.passed()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> RunConfig {
        RunConfig {
            seed: 7,
            dims: vec![3, 4],
            deg_cap: 2,
            freq_cap: 1,
            instances: Some(3),
        }
    }

    #[test]
    fn randomized_suites_pass_and_repeat() {
        let cfg = small_config();
        for name in ["scalar", "cartan", "leibniz", "decompose", "torus", "ophom"] {
            let first = run_suite(name, &cfg).unwrap();
            assert!(
                first.passed(),
                "suite {name} failed: {:?}",
                first.failures
            );
            let second = run_suite(name, &cfg).unwrap();
            assert_eq!(first, second, "suite {name} is not deterministic");
        }
    }

    #[test]
    fn seed_changes_are_visible_but_reports_stay_shaped() {
        let cfg = small_config();
        let mut other = cfg.clone();
        other.seed = 8;
        let a = run_suite("cartan", &cfg).unwrap();
        let b = run_suite("cartan", &other).unwrap();
        assert_eq!(a.instances, b.instances);
        assert!(a.passed() && b.passed());
    }

    #[test]
    fn fixed_suites_pass() {
        let cfg = RunConfig {
            instances: Some(2),
            ..small_config()
        };
        let rep = run_suite("rep", &cfg).unwrap();
        assert!(rep.passed(), "rep failures: {:?}", rep.failures);
        let coho = run_suite("coho", &cfg).unwrap();
        assert!(coho.passed(), "coho failures: {:?}", coho.failures);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nonesuch", &small_config()).is_none());
    }

    #[test]
    fn divfree_window_algebra_shape() {
        let alg = divfree_truncated_algebra(3, 1).unwrap();
        assert_eq!(alg.dim(), 11);
        // constant fields commute
        assert!(alg.bracket_basis(0, 1).iter().all(|c| c.is_zero()));
        // the table is antisymmetric (brackets of genuine vector fields)
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let ij = alg.bracket_basis(i, j);
                let ji = alg.bracket_basis(j, i);
                assert!(ij.iter().zip(ji).all(|(a, b)| *a == -b.clone()));
            }
        }
    }

    #[test]
    fn report_rendering_includes_failures() {
        let cfg = small_config();
        let reports = vec![
            SuiteReport {
                name: "cartan",
                instances: 3,
                failures: vec![],
            },
            SuiteReport {
                name: "torus",
                instances: 3,
                failures: vec!["torus[1] homotopy n=3 w=(dx1)".to_string()],
            },
        ];
        let tsv = reports_to_tsv(&reports, &cfg);
        assert!(tsv.starts_with("# format-version 1\n"));
        assert!(tsv.contains("cartan\t3\t0\tok"));
        assert!(tsv.contains("torus\t3\t1\tFAIL"));
        assert!(tsv.contains("!\ttorus\ttorus[1] homotopy n=3 w=(dx1)"));
        let json = reports_to_json(&reports, &cfg);
        assert_eq!(json["format_version"], "1");
        assert_eq!(json["passed"], false);
        assert_eq!(json["suites"][0]["passed"], true);
        assert_eq!(json["suites"][1]["failures"][0], "torus[1] homotopy n=3 w=(dx1)");
    }
}
