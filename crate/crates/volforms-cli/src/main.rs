//! Command-line front end for the exact volume-form calculus engine.
//!
//! One binary, one subcommand per module: expression evaluation
//! (`cartan`), constructive witnesses (`decompose`), graded
//! representation tables (`rep`), cohomology ranks (`coho`), torus
//! cocycles and the center pairing (`torus`), operator factorization
//! (`ophom`), and the deterministic invariant battery (`verify`).
//!
//! Every tab-separated output starts with a `# format-version 1` line
//! and every JSON document carries `"format_version"`; all values are
//! exact and re-parse in the same grammar they are printed in.  Output
//! is a pure function of the command line (and stdin), so identical
//! invocations are byte-identical; wall-clock timings go to stderr.
//!
//! Exit codes: 0 success, 1 failed verification, 2 malformed input or
//! configuration.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use volforms::cartan::Form;
use volforms::coho::{h_dim, natural_module, sl_algebra, wedge_module, FiniteAlgebra, ModuleRep};
use volforms::decompose::{commutator_decompose, square_decompose};
use volforms::gradedrep::{endo_dim_tensor, expected_dim, intertwiner_dim, GradedBasis};
use volforms::grammar::{
    bracket_witness_json, eval_expr, square_witness_json, Context, Evaluated, Ring, ScalarGrammar,
    MAX_DIM,
};
use volforms::scalar::{gauss_to_string, PolyCoeff};
use volforms::suites::{
    divfree_truncated_algebra, reports_to_json, reports_to_tsv, run_suite, RunConfig, SUITE_NAMES,
};
use volforms::torus::{lichnerowicz, pairing_matrix, pairing_rank};

const HEADER: &str = "# format-version 1";

/// Exact calculus of the standard volume form: forms, brackets,
/// witnesses, representation tables, cohomology, torus cocycles and
/// operator factorization — all in exact rational arithmetic.
#[derive(Parser)]
#[command(name = "volforms", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression in the textual grammar and print the result.
    Cartan(CartanArgs),
    /// Emit a constructive decomposition witness as JSON.
    #[command(subcommand)]
    Decompose(DecomposeCmd),
    /// Tables for the graded divergence-free strata.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Cohomology ranks of finite bracket algebras.
    Coho(CohoArgs),
    /// Torus-extension cocycles and the center pairing matrix.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Differential operators factored through the exterior derivative.
    #[command(subcommand)]
    Ophom(OphomCmd),
    /// Run the deterministic invariant battery and print a report.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RingArg {
    /// Polynomial coefficients on ℝⁿ.
    Poly,
    /// Trigonometric (Fourier) coefficients on the n-torus.
    Trig,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Poly => Ring::Poly,
            RingArg::Trig => Ring::Trig,
        }
    }
}

#[derive(Args)]
struct CartanArgs {
    /// Expression to evaluate; reads stdin when omitted.
    expr: Option<String>,
    /// Ambient dimension used when the expression has no `@ ... n=N` suffix.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Coefficient ring used when the expression has no `@ ring ...` suffix.
    #[arg(long, value_enum, default_value_t = RingArg::Poly)]
    ring: RingArg,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Subcommand)]
enum DecomposeCmd {
    /// Express a polynomial bivector as a sum of potential brackets.
    Brackets(DecomposeArgs),
    /// Express a polynomial (n−3)-form as a sum of self-contractions.
    Squares(DecomposeArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input file in the textual grammar; `-` (default) reads stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Ambient dimension used when the input has no `@ ... n=N` suffix.
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Subcommand)]
enum RepCmd {
    /// Dimensions, intertwiner ranks and endomorphism ranks per degree.
    Table(RepTableArgs),
}

#[derive(Args)]
struct RepTableArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Largest coefficient degree listed.
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct CohoArgs {
    /// Bracket algebra: `sl(N)` or `divfree(N,K)` (graded window, brackets
    /// truncated past degree K).
    #[arg(long)]
    algebra: String,
    /// Coefficient module: `trivial`, `natural(N)` or `wedge(N,M)`.
    #[arg(long, default_value = "trivial")]
    module: String,
    /// Cohomological degree.
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Subcommand)]
enum TorusCmd {
    /// ∫ σ(X,Y) μ for a closed 2-form σ and divergence-free fields X, Y.
    Cocycle(TorusCocycleArgs),
    /// Exact matrix of cycle periods against the constant classes.
    Pairing(TorusPairingArgs),
}

#[derive(Args)]
struct TorusCocycleArgs {
    /// Closed 2-form, in the trigonometric grammar.
    #[arg(long)]
    sigma: String,
    /// First divergence-free field.
    #[arg(long = "X")]
    x: String,
    /// Second divergence-free field.
    #[arg(long = "Y")]
    y: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct TorusPairingArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Subcommand)]
enum OphomCmd {
    /// Factor an operator that kills exact forms as Q ∘ d.
    Factor(OphomFactorArgs),
}

#[derive(Args)]
struct OphomFactorArgs {
    /// Operator JSON file; `-` (default) reads stdin.
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Master seed for the randomized instances.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Ambient dimensions for the dimension-generic suites
    /// (comma-separated).
    #[arg(long = "n", value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Total-degree cap for random polynomial coefficients.
    #[arg(long = "deg-cap", default_value_t = 3)]
    deg_cap: u16,
    /// Sup-norm cap for random torus frequencies.
    #[arg(long = "freq-cap", default_value_t = 2)]
    freq_cap: i32,
    /// Instance-count override for the randomized suites.
    #[arg(long)]
    instances: Option<usize>,
    /// Suite selection (repeatable); all suites when omitted.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Cartan(a) => cmd_cartan(a),
        Command::Decompose(c) => cmd_decompose(c),
        Command::Rep(RepCmd::Table(a)) => cmd_rep_table(a),
        Command::Coho(a) => cmd_coho(a),
        Command::Torus(c) => cmd_torus(c),
        Command::Ophom(OphomCmd::Factor(a)) => cmd_ophom_factor(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn fail_config(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn fail_verification(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("verification failed: {msg}");
    ExitCode::from(1)
}

fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn check_dim(n: usize) -> Result<(), String> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(format!("dimension {n} out of range (1..={MAX_DIM})"))
    }
}

fn describe(v: &Evaluated) -> String {
    match v {
        Evaluated::PolyScalar(_) => "a polynomial scalar".to_string(),
        Evaluated::TrigScalar(_) => "a trigonometric scalar".to_string(),
        Evaluated::PolyForm(f) => format!("a polynomial {}-form", f.degree()),
        Evaluated::TrigForm(f) => format!("a trigonometric {}-form", f.degree()),
        Evaluated::PolyVec(v) => format!("a polynomial {}-vector field", v.degree()),
        Evaluated::TrigVec(v) => format!("a trigonometric {}-vector field", v.degree()),
        Evaluated::Gauss(_) => "a constant".to_string(),
        Evaluated::Json(_) => "a JSON document".to_string(),
    }
}

// ---------------------------------------------------------------------------
// cartan
// ---------------------------------------------------------------------------

fn cmd_cartan(args: CartanArgs) -> ExitCode {
    if let Err(e) = check_dim(args.n) {
        return fail_config(e);
    }
    let source = match args.expr {
        Some(e) => e,
        None => match read_source("-") {
            Ok(s) => s,
            Err(e) => return fail_config(e),
        },
    };
    let ctx = Context {
        ring: args.ring.into(),
        n: args.n,
    };
    match eval_expr(&source, Some(ctx)) {
        Ok(value) => {
            match args.format {
                Format::Tsv => {
                    println!("{HEADER}");
                    println!("{}", value.render());
                }
                Format::Json => println!("{}", value.to_json()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail_config(e),
    }
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

fn cmd_decompose(cmd: DecomposeCmd) -> ExitCode {
    let (args, brackets) = match &cmd {
        DecomposeCmd::Brackets(a) => (a, true),
        DecomposeCmd::Squares(a) => (a, false),
    };
    if let Err(e) = check_dim(args.n) {
        return fail_config(e);
    }
    let source = match read_source(&args.input) {
        Ok(s) => s,
        Err(e) => return fail_config(e),
    };
    let ctx = Context {
        ring: Ring::Poly,
        n: args.n,
    };
    let value = match eval_expr(&source, Some(ctx)) {
        Ok(v) => v,
        Err(e) => return fail_config(e),
    };
    let witness = if brackets {
        let bv = match value {
            Evaluated::PolyVec(v) if v.degree() == 2 => v,
            other => {
                return fail_config(format!(
                    "decompose brackets expects a polynomial bivector, found {}",
                    describe(&other)
                ))
            }
        };
        match commutator_decompose(&bv) {
            Ok(w) => bracket_witness_json(&w),
            Err(e) => return fail_config(e),
        }
    } else {
        let form = match value {
            Evaluated::PolyForm(f) => f,
            Evaluated::PolyScalar(c) => Form::scalar(c.dim(), c),
            other => {
                return fail_config(format!(
                    "decompose squares expects a polynomial form, found {}",
                    describe(&other)
                ))
            }
        };
        match square_decompose(&form) {
            Ok(w) => square_witness_json(&w),
            Err(e) => return fail_config(e),
        }
    };
    println!("{witness}");
    if witness["verified"] == serde_json::Value::Bool(true) {
        ExitCode::SUCCESS
    } else {
        fail_verification("emitted witness did not re-verify")
    }
}

// ---------------------------------------------------------------------------
// rep
// ---------------------------------------------------------------------------

fn cmd_rep_table(args: RepTableArgs) -> ExitCode {
    if let Err(e) = check_dim(args.n) {
        return fail_config(e);
    }
    if args.n < 2 {
        return fail_config("rep table needs dimension >= 2");
    }
    let rows: Vec<(usize, usize, usize, usize, usize)> = (0..=args.kmax)
        .map(|k| {
            (
                k,
                GradedBasis::new(args.n, k).dim(),
                expected_dim(args.n, k),
                intertwiner_dim(args.n, k),
                endo_dim_tensor(args.n, k),
            )
        })
        .collect();
    match args.format {
        Format::Tsv => {
            println!("{HEADER}");
            println!("k\tdim\tdim-formula\tintertwiner\tendo");
            for (k, dim, formula, iw, ed) in &rows {
                println!("{k}\t{dim}\t{formula}\t{iw}\t{ed}");
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(k, dim, formula, iw, ed)| {
                    serde_json::json!({
                        "k": k,
                        "dim": dim,
                        "dim_formula": formula,
                        "intertwiner": iw,
                        "endo": ed,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "format_version": "1",
                    "kind": "rep-table",
                    "n": args.n,
                    "rows": rows,
                })
            );
        }
    }
    ExitCode::SUCCESS
}

// ---------------------------------------------------------------------------
// coho
// ---------------------------------------------------------------------------

enum AlgebraSpec {
    Sl(usize),
    Divfree(usize, usize),
}

enum ModuleSpec {
    Trivial,
    Natural(usize),
    Wedge(usize, usize),
}

fn parse_paren_args(s: &str, name: &str) -> Option<Vec<usize>> {
    let rest = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    rest.split(',')
        .map(|p| p.trim().parse::<usize>().ok())
        .collect()
}

fn parse_algebra(s: &str) -> Result<AlgebraSpec, String> {
    if let Some(args) = parse_paren_args(s, "sl") {
        if let [n] = args[..] {
            if (2..=MAX_DIM).contains(&n) {
                return Ok(AlgebraSpec::Sl(n));
            }
        }
        return Err(format!("sl(N) needs a single N in 2..={MAX_DIM}: {s}"));
    }
    if let Some(args) = parse_paren_args(s, "divfree") {
        if let [n, k] = args[..] {
            if (2..=MAX_DIM).contains(&n) && k <= 8 {
                return Ok(AlgebraSpec::Divfree(n, k));
            }
        }
        return Err(format!(
            "divfree(N,K) needs N in 2..={MAX_DIM} and K <= 8: {s}"
        ));
    }
    Err(format!(
        "unknown algebra spec {s:?} (expected sl(N) or divfree(N,K))"
    ))
}

fn parse_module(s: &str) -> Result<ModuleSpec, String> {
    if s == "trivial" {
        return Ok(ModuleSpec::Trivial);
    }
    if let Some(args) = parse_paren_args(s, "natural") {
        if let [n] = args[..] {
            return Ok(ModuleSpec::Natural(n));
        }
        return Err(format!("natural(N) needs a single N: {s}"));
    }
    if let Some(args) = parse_paren_args(s, "wedge") {
        if let [n, m] = args[..] {
            if m <= n {
                return Ok(ModuleSpec::Wedge(n, m));
            }
        }
        return Err(format!("wedge(N,M) needs M <= N: {s}"));
    }
    Err(format!(
        "unknown module spec {s:?} (expected trivial, natural(N) or wedge(N,M))"
    ))
}

fn cmd_coho(args: CohoArgs) -> ExitCode {
    let alg_spec = match parse_algebra(&args.algebra) {
        Ok(a) => a,
        Err(e) => return fail_config(e),
    };
    let module_spec = match parse_module(&args.module) {
        Ok(m) => m,
        Err(e) => return fail_config(e),
    };
    let (algebra, window): (FiniteAlgebra, Option<usize>) = match alg_spec {
        AlgebraSpec::Sl(n) => (sl_algebra(n), None),
        AlgebraSpec::Divfree(n, k) => match divfree_truncated_algebra(n, k) {
            Ok(a) => (a, Some(k)),
            Err(e) => return fail_verification(e),
        },
    };
    let module: ModuleRep = match (&module_spec, &alg_spec) {
        (ModuleSpec::Trivial, _) => ModuleRep::trivial(&algebra, 1),
        (ModuleSpec::Natural(m), AlgebraSpec::Sl(n)) if m == n => natural_module(*n),
        (ModuleSpec::Wedge(nn, mm), AlgebraSpec::Sl(n)) if nn == n => wedge_module(*nn, *mm),
        _ => {
            return fail_config(format!(
                "module {} is not defined over algebra {}",
                args.module, args.algebra
            ))
        }
    };
    let dim = h_dim(&algebra, &module, args.q);
    match args.format {
        Format::Tsv => {
            println!("{HEADER}");
            if let Some(k) = window {
                println!(
                    "# window coefficient-degree<={k}; identities audited on in-window triples"
                );
            }
            println!("algebra\tmodule\tq\tdim");
            println!("{}\t{}\t{}\t{}", args.algebra, args.module, args.q, dim);
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "format_version": "1",
                    "kind": "cohomology",
                    "algebra": args.algebra,
                    "module": args.module,
                    "q": args.q,
                    "dim": dim,
                    "window": window,
                })
            );
        }
    }
    ExitCode::SUCCESS
}

// ---------------------------------------------------------------------------
// torus
// ---------------------------------------------------------------------------

fn cmd_torus(cmd: TorusCmd) -> ExitCode {
    match cmd {
        TorusCmd::Cocycle(a) => cmd_torus_cocycle(a),
        TorusCmd::Pairing(a) => cmd_torus_pairing(a),
    }
}

fn cmd_torus_cocycle(args: TorusCocycleArgs) -> ExitCode {
    if let Err(e) = check_dim(args.n) {
        return fail_config(e);
    }
    let ctx = Context {
        ring: Ring::Trig,
        n: args.n,
    };
    let sigma = match eval_expr(&args.sigma, Some(ctx)) {
        Ok(Evaluated::TrigForm(f)) if f.degree() == 2 => f,
        Ok(other) => {
            return fail_config(format!(
                "--sigma expects a trigonometric 2-form, found {}",
                describe(&other)
            ))
        }
        Err(e) => return fail_config(e),
    };
    let mut fields = Vec::new();
    for (flag, src) in [("--X", &args.x), ("--Y", &args.y)] {
        match eval_expr(src, Some(ctx)) {
            Ok(Evaluated::TrigVec(v)) if v.degree() == 1 => fields.push(v),
            Ok(other) => {
                return fail_config(format!(
                    "{flag} expects a trigonometric vector field, found {}",
                    describe(&other)
                ))
            }
            Err(e) => return fail_config(e),
        }
    }
    if sigma.dim() != fields[0].dim() || sigma.dim() != fields[1].dim() {
        return fail_config("inputs disagree on the ambient dimension");
    }
    match lichnerowicz(&sigma, &fields[0], &fields[1]) {
        Ok(value) => {
            match args.format {
                Format::Tsv => {
                    println!("{HEADER}");
                    println!("{}", gauss_to_string(&value));
                }
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "format_version": "1",
                        "kind": "cocycle-value",
                        "value": gauss_to_string(&value),
                    })
                ),
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail_config(e),
    }
}

fn cmd_torus_pairing(args: TorusPairingArgs) -> ExitCode {
    if let Err(e) = check_dim(args.n) {
        return fail_config(e);
    }
    if args.n < 2 {
        return fail_config("torus pairing needs dimension >= 2");
    }
    let matrix = pairing_matrix(args.n);
    let rank = pairing_rank(args.n);
    match args.format {
        Format::Tsv => {
            println!("{HEADER}");
            println!("# rows: cycles (fixed axis pairs, lexicographic)");
            println!("# columns: constant coefficient classes (increasing tuples)");
            for row in &matrix {
                let cells: Vec<String> = row.iter().map(|r| r.to_string()).collect();
                println!("{}", cells.join("\t"));
            }
            println!("# rank {rank}");
        }
        Format::Json => {
            let rows: Vec<Vec<String>> = matrix
                .iter()
                .map(|row| row.iter().map(|r| r.to_string()).collect())
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "format_version": "1",
                    "kind": "pairing-matrix",
                    "n": args.n,
                    "rank": rank,
                    "matrix": rows,
                })
            );
        }
    }
    ExitCode::SUCCESS
}

// ---------------------------------------------------------------------------
// ophom
// ---------------------------------------------------------------------------

fn cmd_ophom_factor(args: OphomFactorArgs) -> ExitCode {
    let contents = match read_source(&args.input) {
        Ok(s) => s,
        Err(e) => return fail_config(e),
    };
    match <PolyCoeff as ScalarGrammar>::factor_operator(&contents) {
        Some(Ok(transcript)) => {
            println!("{transcript}");
            if transcript["verified"] == serde_json::Value::Bool(true) {
                ExitCode::SUCCESS
            } else {
                fail_verification("a factorization stage property failed")
            }
        }
        Some(Err(msg)) => fail_config(msg),
        None => fail_config("operator factorization is unavailable in this ring"),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let selected: Vec<&'static str> = if args.suites.is_empty() {
        SUITE_NAMES.to_vec()
    } else {
        for s in &args.suites {
            if !SUITE_NAMES.contains(&s.as_str()) {
                return fail_config(format!(
                    "unknown suite {s:?} (expected one of: {})",
                    SUITE_NAMES.join(", ")
                ));
            }
        }
        SUITE_NAMES
            .iter()
            .copied()
            .filter(|n| args.suites.iter().any(|s| s == n))
            .collect()
    };
    let dims = args.dims.unwrap_or_else(|| vec![3, 4]);
    if dims.is_empty() || dims.iter().any(|&n| !(1..=8).contains(&n)) {
        return fail_config("--n takes dimensions in 1..=8");
    }
    let cfg = RunConfig {
        seed: args.seed,
        dims,
        deg_cap: args.deg_cap,
        freq_cap: args.freq_cap,
        instances: args.instances,
    };
    let mut reports = Vec::new();
    for name in selected {
        let start = Instant::now();
        let report = run_suite(name, &cfg).expect("validated suite name");
        eprintln!(
            "# {name}: {} instances, {} failures, {:.3}s",
            report.instances,
            report.failures.len(),
            start.elapsed().as_secs_f64()
        );
        reports.push(report);
    }
    match args.format {
        Format::Tsv => print!("{}", reports_to_tsv(&reports, &cfg)),
        Format::Json => println!("{}", reports_to_json(&reports, &cfg)),
    }
    if reports.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
