//! Command-line front end: build or load a pair of frame systems, run the
//! support-bound checks, and emit machine-readable reports.
//!
//! Exit codes: 0 all checks hold, 1 a bound was violated, 2 input error,
//! 3 capacity limit exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use framebound::{
    check_hilbert_chain, check_mixed_norm_bound, check_one_sided_bounds, check_product_bound,
    check_transfer_inequalities, coherence, cross_gram, dft_pair, dirac_comb, identity,
    in_domain, is_reconstructing, min_support_product, random_parseval,
    random_reconstructing_pair, random_vectors, unbounded_diagonal, BoundReport, Direction,
    Error, Exponent, Field, FrameSystem, TailDescriptor, Vector,
};

const DEFAULT_TOL: f64 = framebound::DEFAULT_SUPPORT_TOL;
const RECONSTRUCTION_TOL: f64 = 1e-9;
const VECTOR_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Parser)]
#[command(
    name = "framebound",
    version,
    about = "Support-measure bound checks for pairs of reconstructing frame systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the support bounds for a pair of systems on chosen vectors
    Verify(VerifyArgs),
    /// Print the cross coherences (and optionally the full Gram moduli)
    Coherence(CoherenceArgs),
    /// Exhaustively minimize the support product and compare to the bound
    Extremal(ExtremalArgs),
    /// Decide whether a tail descriptor lies in a diagonal system's domain
    Domain(DomainArgs),
    /// List the built-in demo pairs
    DemoList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Demo {
    /// Identity system paired with itself
    Identity,
    /// Identity paired with the unitary DFT
    DftPair,
    /// Seeded random reconstructing pair
    Random,
    /// Two seeded random Parseval frames
    Parseval,
    /// Diagonal system with weights n^r paired with itself
    UnboundedDiagonal,
}

impl Demo {
    fn name(self) -> &'static str {
        match self {
            Demo::Identity => "identity",
            Demo::DftPair => "dft-pair",
            Demo::Random => "random",
            Demo::Parseval => "parseval",
            Demo::UnboundedDiagonal => "unbounded-diagonal",
        }
    }
}

#[derive(Args)]
struct PairSelect {
    /// JSON file describing the first system
    #[arg(long, value_name = "FILE")]
    system: Option<PathBuf>,
    /// JSON file describing the second system
    #[arg(long, value_name = "FILE")]
    cosystem: Option<PathBuf>,
    /// Built-in demo pair instead of files
    #[arg(long, value_enum, conflicts_with = "system")]
    demo: Option<Demo>,
    /// Dimension (dense demos) or truncation bound (diagonal demo)
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Frame vector count for the parseval demo (defaults to n)
    #[arg(long)]
    m: Option<usize>,
    /// Weight growth rate for the unbounded-diagonal demo
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Seed for all randomness
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    pair: PairSelect,
    /// Exponent: 1, inf, or a finite value above 1
    #[arg(long, default_value = "1")]
    p: String,
    /// JSON file with one vector or an array of vectors
    #[arg(long, value_name = "FILE")]
    vectors: Option<PathBuf>,
    /// Number of seeded random vectors to check
    #[arg(long, value_name = "COUNT")]
    random: Option<usize>,
    /// Check the Dirac comb (dimension must be a perfect square)
    #[arg(long)]
    comb: bool,
    /// Support tolerance (falls back to FRAME_TOL, then 1e-10)
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here (.json or .csv); stdout JSON otherwise
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also check the norm-transfer inequalities (p = 1 or inf only)
    #[arg(long)]
    transfers: bool,
    /// Also run the Hilbert-space chain (both systems must be Parseval)
    #[arg(long)]
    parseval: bool,
}

#[derive(Args)]
struct CoherenceArgs {
    #[command(flatten)]
    pair: PairSelect,
    /// Write the cross-Gram moduli (functionals as rows) to this CSV file
    #[arg(long, value_name = "FILE")]
    gram: Option<PathBuf>,
}

#[derive(Args)]
struct ExtremalArgs {
    #[command(flatten)]
    pair: PairSelect,
    /// Refuse systems with more functionals than this (hard cap 8)
    #[arg(long, default_value_t = 8)]
    max_dim: usize,
    /// Support tolerance (falls back to FRAME_TOL, then 1e-10)
    #[arg(long)]
    tol: Option<f64>,
    /// Write the certificate JSON here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DomainArgs {
    /// Weight growth rate of the diagonal system
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Exponent: 1, inf, or a finite value above 1
    #[arg(long, default_value = "1")]
    p: String,
    /// Truncation bound of the diagonal system
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Tail descriptor: "finite" or "power:<amplitude>:<decay>"
    #[arg(long)]
    tail: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Capacity { .. } => 3,
            Error::BoundViolation { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Coherence(args) => cmd_coherence(args),
        Command::Extremal(args) => cmd_extremal(args),
        Command::Domain(args) => cmd_domain(args),
        Command::DemoList => cmd_demo_list(),
    }
}

fn parse_exponent(s: &str) -> Result<Exponent, Failure> {
    Exponent::parse(s).map_err(Failure::from)
}

fn resolve_tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("FRAME_TOL") {
            Ok(raw) => raw
                .parse::<f64>()
                .map_err(|_| Failure::input(format!("FRAME_TOL is not a number: {raw:?}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::input(format!(
            "tolerance must be finite and nonnegative, got {tol}"
        )));
    }
    Ok(tol)
}

fn load_json(path: &Path) -> Result<Value, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| Failure::input(format!("invalid JSON in {}: {e}", path.display())))
}

fn build_pair(
    select: &PairSelect,
    p: Exponent,
) -> Result<(FrameSystem, FrameSystem, Value), Failure> {
    if let Some(system_path) = &select.system {
        let cosystem_path = select.cosystem.as_ref().ok_or_else(|| {
            Failure::input("--system needs a matching --cosystem (or use --demo)")
        })?;
        let f = FrameSystem::from_json(&load_json(system_path)?)?;
        let g = FrameSystem::from_json(&load_json(cosystem_path)?)?;
        let echo = json!({
            "system": system_path.display().to_string(),
            "cosystem": cosystem_path.display().to_string(),
        });
        return Ok((f, g, echo));
    }
    let demo = select
        .demo
        .ok_or_else(|| Failure::input("choose a pair with --demo or --system/--cosystem"))?;
    let n = select.n;
    let (f, g) = match demo {
        Demo::Identity => {
            let sys = identity(n, Field::Real, p)?;
            (sys.clone(), sys)
        }
        Demo::DftPair => dft_pair(n, p)?,
        Demo::Random => random_reconstructing_pair(n, Field::Complex, p, select.seed)?,
        Demo::Parseval => {
            let m = select.m.unwrap_or(n);
            (
                random_parseval(n, m, Field::Complex, select.seed)?,
                random_parseval(n, m, Field::Complex, select.seed.wrapping_add(1))?,
            )
        }
        Demo::UnboundedDiagonal => {
            let sys = unbounded_diagonal(n, select.r, Field::Real, p)?;
            (sys.clone(), sys)
        }
    };
    let mut echo = json!({ "demo": demo.name(), "n": n, "seed": select.seed });
    if demo == Demo::Parseval {
        echo["m"] = json!(select.m.unwrap_or(n));
    }
    if demo == Demo::UnboundedDiagonal {
        echo["r"] = json!(select.r);
    }
    Ok((f, g, echo))
}

fn require_reconstructing(sys: &FrameSystem, which: &str) -> Result<(), Failure> {
    let report = is_reconstructing(sys, RECONSTRUCTION_TOL)?;
    if !report.holds {
        return Err(Failure::input(format!(
            "{which} is not reconstructing (deviation={:e})",
            report.deviation
        )));
    }
    Ok(())
}

fn gather_vectors(args: &VerifyArgs, f: &FrameSystem) -> Result<Vec<Vector>, Failure> {
    let sources = usize::from(args.vectors.is_some())
        + usize::from(args.random.is_some())
        + usize::from(args.comb);
    if sources != 1 {
        return Err(Failure::input(
            "choose exactly one vector source: --vectors, --random, or --comb",
        ));
    }
    let vectors = if let Some(path) = &args.vectors {
        let value = load_json(path)?;
        let items: Vec<&Value> = match &value {
            Value::Array(items) => items.iter().collect(),
            other => vec![other],
        };
        items
            .into_iter()
            .map(|item| Vector::from_json(item, f.ambient()).map_err(Failure::from))
            .collect::<Result<Vec<_>, _>>()?
    } else if let Some(count) = args.random {
        random_vectors(
            f.ambient(),
            Field::Complex,
            count,
            args.pair.seed ^ VECTOR_SEED_SALT,
        )
    } else {
        vec![dirac_comb(f.ambient().size())?]
    };
    if vectors.is_empty() {
        return Err(Failure::input("no vectors to check"));
    }
    for (pos, v) in vectors.iter().enumerate() {
        if v.is_zero() {
            return Err(Failure::input(format!(
                "vector {pos} is zero; the bounds are stated for x != 0"
            )));
        }
    }
    Ok(vectors)
}

fn check_vector(
    f: &FrameSystem,
    g: &FrameSystem,
    x: &Vector,
    p: Exponent,
    tol: f64,
    args: &VerifyArgs,
) -> Result<Vec<BoundReport>, Failure> {
    let mut reports = Vec::new();
    if p.is_one() || p.is_infinite() {
        reports.push(check_product_bound(f, g, x, p, tol)?);
        let (a, b) = check_one_sided_bounds(f, g, x, p, tol)?;
        reports.extend([a, b]);
        if args.transfers {
            let (a, b) = check_transfer_inequalities(f, g, x, p, tol)?;
            reports.extend([a, b]);
        }
    } else {
        if args.transfers {
            return Err(Failure::input(
                "--transfers applies only at p = 1 or p = inf",
            ));
        }
        let (a, b) = check_mixed_norm_bound(f, g, x, p, tol)?;
        reports.extend([a, b]);
    }
    if args.parseval {
        reports.push(check_hilbert_chain(f, g, x, tol)?.report);
    }
    Ok(reports)
}

fn format_float(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_report(rows: &[(Value, Vec<BoundReport>)]) -> String {
    let mut out = String::from("id,lhs,rhs,slack,holds,equality,q\n");
    for (_, reports) in rows {
        for r in reports {
            let q = r.q.map(format_float).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.id.as_str(),
                format_float(r.lhs),
                format_float(r.rhs),
                format_float(r.slack),
                r.holds,
                r.equality,
                q
            );
        }
    }
    out
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let p = parse_exponent(&args.p)?;
    let tol = resolve_tolerance(args.tol)?;
    let (f, g, mut echo) = build_pair(&args.pair, p)?;
    require_reconstructing(&f, "system")?;
    require_reconstructing(&g, "cosystem")?;
    let vectors = gather_vectors(&args, &f)?;

    let mut rows: Vec<(Value, Vec<BoundReport>)> = Vec::with_capacity(vectors.len());
    for x in &vectors {
        let reports = check_vector(&f, &g, x, p, tol, &args)?;
        rows.push((x.to_json(), reports));
    }

    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut equalities = 0u64;
    let mut min_slack = f64::INFINITY;
    for (_, reports) in &rows {
        for r in reports {
            checked += 1;
            if !r.holds {
                violations += 1;
            }
            if r.equality {
                equalities += 1;
            }
            min_slack = min_slack.min(r.slack);
        }
    }

    echo["command"] = json!("verify");
    echo["p"] = json!(p.to_string());
    echo["tolerance"] = json!(tol);
    echo["transfers"] = json!(args.transfers);
    echo["parseval"] = json!(args.parseval);
    let exit: u8 = if violations == 0 { 0 } else { 1 };
    let report = json!({
        "command": echo,
        "vectors": rows
            .iter()
            .map(|(vector, reports)| json!({
                "vector": vector,
                "reports": reports.iter().map(BoundReport::to_json).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
        "summary": {
            "checked": checked,
            "violations": violations,
            "equalities": equalities,
            "min_slack": if min_slack == f64::NEG_INFINITY {
                json!("-inf")
            } else if min_slack == f64::INFINITY {
                json!("inf")
            } else {
                json!(min_slack)
            },
        },
        "exit": exit,
    });

    match &args.out {
        Some(path) => {
            let rendered = match path.extension().and_then(|e| e.to_str()) {
                Some("json") => format!("{:#}\n", report),
                Some("csv") => csv_report(&rows),
                _ => {
                    return Err(Failure::input(format!(
                        "unsupported output extension for {} (use .json or .csv)",
                        path.display()
                    )))
                }
            };
            write_output(path, &rendered)?;
        }
        None => println!("{report:#}"),
    }
    eprintln!(
        "checked {checked} reports: {violations} violations, {equalities} equalities, min slack {}",
        format_float(min_slack)
    );
    Ok(exit)
}

fn cmd_coherence(args: CoherenceArgs) -> Result<u8, Failure> {
    let (f, g, _) = build_pair(&args.pair, Exponent::Finite(1.0))?;
    let c_f_omega = coherence(&f, &g, Direction::FOfOmega)?;
    let c_g_tau = coherence(&f, &g, Direction::GOfTau)?;
    println!("coherence f(omega): {}", format_float(c_f_omega));
    println!("coherence g(tau): {}", format_float(c_g_tau));
    if let Some(path) = &args.gram {
        let gram = cross_gram(&f, &g, Direction::FOfOmega)?;
        let mut out = String::new();
        for row in gram.modulus_rows() {
            let line: Vec<String> = row.into_iter().map(format_float).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        write_output(path, &out)?;
    }
    Ok(0)
}

fn cmd_extremal(args: ExtremalArgs) -> Result<u8, Failure> {
    if args.max_dim > framebound::MAX_ENUMERATION {
        return Err(Failure::input(format!(
            "--max-dim cannot exceed {}",
            framebound::MAX_ENUMERATION
        )));
    }
    let tol = resolve_tolerance(args.tol)?;
    let (f, g, _) = build_pair(&args.pair, Exponent::Finite(1.0))?;
    require_reconstructing(&f, "system")?;
    require_reconstructing(&g, "cosystem")?;
    for (sys, which) in [(&f, "system"), (&g, "cosystem")] {
        let size = sys.space().size();
        if size > args.max_dim {
            return Err(Failure {
                code: 3,
                message: format!(
                    "{which} has {size} functionals, above the enumeration cap {}",
                    args.max_dim
                ),
            });
        }
    }
    let result = min_support_product(&f, &g, tol)?;
    println!("minimum: {}", format_float(result.minimum));
    println!("bound: {}", format_float(result.bound));
    println!("ratio: {}", format_float(result.ratio));
    let certificate = json!({
        "S": result.pattern_f.iter().collect::<Vec<_>>(),
        "T": result.pattern_g.iter().collect::<Vec<_>>(),
        "product": result.minimum,
        "witness": result.witness.to_json(),
    });
    if let Some(path) = &args.out {
        write_output(path, &format!("{certificate:#}\n"))?;
    } else {
        println!("certificate: {certificate}");
    }
    Ok(0)
}

fn parse_tail(raw: &str) -> Result<TailDescriptor, Failure> {
    if raw.eq_ignore_ascii_case("finite") {
        return Ok(TailDescriptor::FiniteSupport);
    }
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() == 3 && parts[0].eq_ignore_ascii_case("power") {
        let amplitude: f64 = parts[1]
            .parse()
            .map_err(|_| Failure::input(format!("bad amplitude in tail {raw:?}")))?;
        let decay: f64 = parts[2]
            .parse()
            .map_err(|_| Failure::input(format!("bad decay in tail {raw:?}")))?;
        return Ok(TailDescriptor::power_law(amplitude, decay, 1)?);
    }
    Err(Failure::input(format!(
        "tail must be \"finite\" or \"power:<amplitude>:<decay>\", got {raw:?}"
    )))
}

fn cmd_domain(args: DomainArgs) -> Result<u8, Failure> {
    let p = parse_exponent(&args.p)?;
    let tail = parse_tail(&args.tail)?;
    let sys = unbounded_diagonal(args.n, args.r, Field::Real, p)?;
    let inside = in_domain(&sys, &tail)?;
    println!("{}", if inside { "in-domain" } else { "not-in-domain" });
    Ok(0)
}

fn cmd_demo_list() -> Result<u8, Failure> {
    println!("identity            identity system paired with itself");
    println!("dft-pair            identity paired with the unitary DFT");
    println!("random              seeded random reconstructing pair (det-normalized)");
    println!("parseval            two seeded random Parseval frames");
    println!("unbounded-diagonal  diagonal weights n^r paired with itself");
    Ok(0)
}
