//! Acceptance gate: nine go/no-go checks covering the whole engine.
//!
//! Each criterion prints exactly one `PASS`/`FAIL` line (run with
//! `cargo test --test acceptance -- --nocapture` to see them as they
//! complete); the test fails if any criterion fails or overruns its
//! wall-clock budget.  Wherever a criterion matches a `verify` suite it
//! runs that suite at the required scale; witness and table criteria
//! drive the library directly so the re-verification logic is visible
//! here, not buried in the generator.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use volforms::cartan::{combinations, Form, MultiVec};
use volforms::decompose::{commutator_decompose, square_decompose, BracketWitness, SquareWitness};
use volforms::gradedrep::{
    endo_dim_tensor, expected_dim, grading_check, intertwiner_dim, whitehead_h1, GradedBasis,
};
use volforms::scalar::{rat, PolyCoeff};
use volforms::suites::{run_suite, RunConfig};

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

struct Criterion {
    number: usize,
    title: &'static str,
    budget: Option<Duration>,
    run: Box<dyn Fn() -> Result<String, String>>,
}

fn run_gate(criteria: Vec<Criterion>) {
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let budget_note = match c.budget {
            Some(b) => format!(" [{:.1}s of {:.0}s budget]", elapsed.as_secs_f64(), b.as_secs_f64()),
            None => format!(" [{:.1}s]", elapsed.as_secs_f64()),
        };
        let overran = c.budget.is_some_and(|b| elapsed > b);
        match (outcome, overran) {
            (Ok(detail), false) => {
                println!("PASS criterion {}: {} — {}{}", c.number, c.title, detail, budget_note);
            }
            (Ok(detail), true) => {
                println!(
                    "FAIL criterion {}: {} — passed checks but overran budget ({}){}",
                    c.number, c.title, detail, budget_note
                );
                failed.push(c.number);
            }
            (Err(reason), _) => {
                println!("FAIL criterion {}: {} — {}{}", c.number, c.title, reason, budget_note);
                failed.push(c.number);
            }
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}

/// Runs one named `verify` suite at an explicit scale and summarizes it.
fn suite_outcome(name: &'static str, cfg: RunConfig) -> Result<String, String> {
    let report = run_suite(name, &cfg).ok_or_else(|| format!("unknown suite {name}"))?;
    if report.passed() {
        Ok(format!("{} instances, 0 failures", report.instances))
    } else {
        Err(format!(
            "{} of {} instances failed; first: {}",
            report.failures.len(),
            report.instances,
            report.failures[0]
        ))
    }
}

fn config(instances: usize, dims: Vec<usize>) -> RunConfig {
    RunConfig {
        seed: 1,
        dims,
        deg_cap: 3,
        freq_cap: 2,
        instances: Some(instances),
    }
}

// ---------------------------------------------------------------------------
// local random instances for the witness criteria
// ---------------------------------------------------------------------------

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg_cap: u16) -> PolyCoeff {
    let mut acc = PolyCoeff::zero(n);
    for _ in 0..rng.gen_range(1..=2) {
        let mut exps = vec![0u16; n];
        for _ in 0..rng.gen_range(0..=deg_cap) {
            exps[rng.gen_range(0..n)] += 1;
        }
        let num = [-4i64, -3, -2, -1, 1, 2, 3, 4][rng.gen_range(0..8)];
        let den = rng.gen_range(1..=3i64);
        acc = acc.add(&PolyCoeff::monomial(n, exps, rat(num, den)));
    }
    acc
}

fn random_bivector(rng: &mut ChaCha8Rng, n: usize) -> MultiVec<PolyCoeff> {
    let combos = combinations(n, 2);
    let mut acc = MultiVec::zero(n, 2);
    for _ in 0..rng.gen_range(1..=2) {
        let combo = combos[rng.gen_range(0..combos.len())].clone();
        acc = acc.add(&MultiVec::term(n, combo, random_poly(rng, n, 3)));
    }
    acc
}

fn random_low_form(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> Form<PolyCoeff> {
    let combos = combinations(n, degree);
    let mut acc = Form::zero(n, degree as i32);
    for _ in 0..rng.gen_range(1..=2) {
        let combo = combos[rng.gen_range(0..combos.len())].clone();
        acc = acc.add(&Form::term(n, combo, random_poly(rng, n, 3)));
    }
    acc
}

// ---------------------------------------------------------------------------
// the witness criteria, driven directly
// ---------------------------------------------------------------------------

/// 200 random bivectors: decomposition re-verifies and respects the
/// pair-count bound in every instance.
fn bracket_witnesses() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut max_count = 0usize;
    for i in 0..200 {
        let n = [3, 4][i % 2];
        let b = random_bivector(&mut rng, n);
        let w = commutator_decompose(&b).map_err(|e| format!("instance {i}: {e}"))?;
        if !w.verify() {
            return Err(format!("instance {i}: witness failed re-verification"));
        }
        if w.count() > BracketWitness::bound(n) {
            return Err(format!(
                "instance {i}: {} pairs exceeds bound {}",
                w.count(),
                BracketWitness::bound(n)
            ));
        }
        max_count = max_count.max(w.count());
    }
    Ok(format!(
        "200 bivectors re-verified, max pair count {max_count} (bounds {} and {})",
        BracketWitness::bound(3),
        BracketWitness::bound(4)
    ))
}

/// 200 random (n−3)-form targets: the contraction sum reproduces the
/// target, the square sum reproduces d(target), the potential count
/// stays within 4·C(n,3), and every emitted potential satisfies the
/// pointwise contraction identity.
fn square_witnesses() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut max_count = 0usize;
    for i in 0..200 {
        let n = [3, 4][i % 2];
        let target = random_low_form(&mut rng, n, n - 3);
        let w = square_decompose(&target).map_err(|e| format!("instance {i}: {e}"))?;
        if w.contraction_sum() != target {
            return Err(format!("instance {i}: contraction sum missed the target"));
        }
        if w.squares_sum() != target.d() {
            return Err(format!("instance {i}: square sum missed d(target)"));
        }
        if w.count() > SquareWitness::bound(n) {
            return Err(format!(
                "instance {i}: {} potentials exceeds bound {}",
                w.count(),
                SquareWitness::bound(n)
            ));
        }
        if !w.verify_contraction_identity() {
            return Err(format!("instance {i}: a potential broke the contraction identity"));
        }
        max_count = max_count.max(w.count());
    }
    Ok(format!(
        "200 targets re-verified, max potential count {max_count} (bounds {} and {})",
        SquareWitness::bound(3),
        SquareWitness::bound(4)
    ))
}

/// Exact dimension table and module invariants of the graded strata.
fn dimension_table() -> Result<String, String> {
    let expected = [3usize, 8, 15, 24];
    for (k, &want) in expected.iter().enumerate() {
        let by_rank = GradedBasis::new(3, k).dim();
        let by_formula = expected_dim(3, k);
        if by_rank != want || by_formula != want {
            return Err(format!(
                "dim at degree {k}: rank gives {by_rank}, formula gives {by_formula}, want {want}"
            ));
        }
    }
    for k in 0..=4usize {
        for l in 0..=(4 - k) {
            if !grading_check(3, k, l) {
                return Err(format!("bracket left the graded window at degrees ({k},{l})"));
            }
        }
    }
    for n in [3usize, 4] {
        let h1 = whitehead_h1(n);
        if h1 != 0 {
            return Err(format!("first cohomology of the special linear action: {h1} != 0 at n={n}"));
        }
    }
    for n in [3usize, 4] {
        for k in [2usize, 3] {
            let iw = intertwiner_dim(n, k);
            let endo = endo_dim_tensor(n, k);
            if iw != 0 || endo != 2 {
                return Err(format!(
                    "module invariants at (n,k)=({n},{k}): intertwiner {iw} (want 0), endo {endo} (want 2)"
                ));
            }
        }
    }
    Ok("dims (3,8,15,24) by rank and formula; grading closed for k+l<=4; \
        no invariant vectors; endomorphism rank 2"
        .to_string())
}

/// `verify --seed 1` twice: byte-identical stdout, exit code 0.
fn deterministic_reports() -> Result<String, String> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_volforms"))
            .args(["verify", "--seed", "1"])
            .output()
            .map_err(|e| format!("spawn: {e}"))
    };
    let first = run()?;
    let second = run()?;
    if first.status.code() != Some(0) {
        return Err(format!(
            "first run exited {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stdout)
        ));
    }
    if second.status.code() != Some(0) {
        return Err(format!("second run exited {:?}", second.status.code()));
    }
    if first.stdout != second.stdout {
        return Err("reports differ between identical invocations".to_string());
    }
    Ok(format!(
        "two runs, {} report bytes, byte-identical, exit 0",
        first.stdout.len()
    ))
}

// ---------------------------------------------------------------------------
// the gate
// ---------------------------------------------------------------------------

#[test]
fn acceptance_gate() {
    let criteria = vec![
        Criterion {
            number: 1,
            title: "exterior/interior calculus identities and explicit-formula equivalences \
                    (200 instances, n in {3,4}, degree <= 3)",
            budget: Some(Duration::from_secs(60)),
            run: Box::new(|| suite_outcome("cartan", config(200, vec![3, 4]))),
        },
        Criterion {
            number: 2,
            title: "potential-form bracket: Leibniz identity (500 triples), field homomorphism, \
                    symmetric-part exactness, volume preservation",
            budget: None,
            run: Box::new(|| suite_outcome("leibniz", config(500, vec![3, 4]))),
        },
        Criterion {
            number: 3,
            title: "bracket decomposition witnesses for 200 random bivectors",
            budget: None,
            run: Box::new(bracket_witnesses),
        },
        Criterion {
            number: 4,
            title: "self-contraction decomposition witnesses for 200 random targets",
            budget: None,
            run: Box::new(square_witnesses),
        },
        Criterion {
            number: 5,
            title: "graded stratum dimension table and module invariants",
            budget: Some(Duration::from_secs(300)),
            run: Box::new(dimension_table),
        },
        Criterion {
            number: 6,
            title: "cohomology differentials square to zero, dual comparison intertwines, \
                    known ranks vanish",
            budget: None,
            run: Box::new(|| suite_outcome("coho", config(25, vec![3, 4]))),
        },
        Criterion {
            number: 7,
            title: "torus extension: mode homotopy, normal form, central bracket laws, \
                    both cocycles, pairing rank 3 (200 instances, frequencies <= 2)",
            budget: None,
            run: Box::new(|| suite_outcome("torus", config(200, vec![3, 4]))),
        },
        Criterion {
            number: 8,
            title: "operator factorization: 50 operators recovered through the exterior \
                    derivative with per-stage checks; Euler eigenvalue sweep n<=3, k<=2",
            budget: Some(Duration::from_secs(120)),
            run: Box::new(|| suite_outcome("ophom", config(50, vec![3, 4]))),
        },
        Criterion {
            number: 9,
            title: "deterministic verification reports",
            budget: None,
            run: Box::new(deterministic_reports),
        },
    ];
    run_gate(criteria);
}
