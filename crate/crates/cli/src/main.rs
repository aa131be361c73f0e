//! Command-line front end for `morrey-core`.
//!
//! Four subcommands: `norm` evaluates the centered norm of one function,
//! `quotient` evaluates one geometric quotient on its witness family,
//! `sweep` drives a quotient over a geometric ε grid and emits CSV, and
//! `oracle-check` cross-checks the closed-form norm against the quadrature
//! oracle on a random corpus.
//!
//! Exit codes: 0 success, 2 validation or domain error, 3 numerical failure.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morrey_core::{
    centered_norm, corpus, oracle_norm, quotient_report, sweep, MorreyError, QuotientKind,
    RadialFunction, Result, SpaceParams, Variant, CSV_HEADER,
};

#[derive(Parser)]
#[command(
    name = "morrey",
    version,
    about = "Norms and geometric constants of classical and small Morrey spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Ambient dimension.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Local integrability exponent p.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Scaling exponent q (p <= q).
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Radius range of the supremum: all radii (classical, the default) or
    /// (0,1) (small). oracle-check alternates variants when this is absent.
    #[arg(long, global = true, value_enum)]
    variant: Option<VariantArg>,
    /// Output encoding for quotient, sweep and oracle-check; norm is always JSON.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// RNG seed for the oracle-check corpus.
    #[arg(long, global = true, default_value_t = 1789)]
    seed: u64,
    /// Relative tolerance for quadrature paths (default 1e-8).
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the centered norm of a radial piecewise-power function.
    Norm(NormArgs),
    /// Evaluate one geometric quotient on its witness family at a single ε.
    Quotient(QuotientArgs),
    /// Sweep a quotient over a geometric ε grid (default 2⁻¹..2⁻²⁰).
    Sweep(SweepArgs),
    /// Compare closed-form and quadrature norms on a random corpus.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
struct NormArgs {
    /// The function: inline JSON (a top-level array of pieces, each
    /// {"r_lo":..,"r_hi":..|"inf","c":..,"alpha":..}) or a path to a JSON file.
    #[arg(long = "fn", value_name = "JSON|PATH")]
    function: String,
    /// closed: piecewise closed form; oracle: independent quadrature.
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
}

#[derive(Args)]
struct QuotientArgs {
    /// Which quotient to evaluate.
    kind: KindArg,
    /// Split radius of the witness family, in (0,1).
    #[arg(long)]
    eps: f64,
    /// Skew of the dw witness pair; defaults to ε. Only meaningful for dw.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Which quotient to sweep.
    kind: KindArg,
    /// Largest ε of the geometric grid (default 0.5).
    #[arg(long)]
    eps_from: Option<f64>,
    /// Smallest ε of the geometric grid (default 2⁻²⁰).
    #[arg(long)]
    eps_to: Option<f64>,
    /// Number of grid points (default 20; 0 emits the header only).
    #[arg(long)]
    eps_steps: Option<usize>,
    /// Constant dw skew applied to every row; defaults to δ = ε per row.
    #[arg(long)]
    delta: Option<f64>,
    /// Write rows to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Number of random functions to check.
    #[arg(long, default_value_t = 500)]
    count: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Classical,
    Small,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Classical => Variant::Classical,
            VariantArg::Small => Variant::Small,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Nj,
    James,
    Dw,
    Octa,
}

impl From<KindArg> for QuotientKind {
    fn from(k: KindArg) -> QuotientKind {
        match k {
            KindArg::Nj => QuotientKind::VonNeumannJordan,
            KindArg::James => QuotientKind::James,
            KindArg::Dw => QuotientKind::DunklWilliams,
            KindArg::Octa => QuotientKind::Octahedral,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Norm(args) => cmd_norm(&cli.common, &args),
        Command::Quotient(args) => cmd_quotient(&cli.common, &args),
        Command::Sweep(args) => cmd_sweep(&cli.common, &args),
        Command::OracleCheck(args) => cmd_oracle_check(&cli.common, &args),
    }
}

fn space(common: &Common) -> Result<SpaceParams> {
    let d = require(common.d, "--d")?;
    let p = require(common.p, "--p")?;
    let q = require(common.q, "--q")?;
    let variant = common
        .variant
        .map(Variant::from)
        .unwrap_or(Variant::Classical);
    SpaceParams::new(d, p, q, variant)
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| MorreyError::InvalidParams(format!("{flag} is required")))
}

fn effective_tol(common: &Common) -> Result<f64> {
    let tol = common.tol.unwrap_or(1e-8);
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(MorreyError::InvalidParams(format!(
            "--tol must be positive and finite, got {tol}"
        )))
    }
}

fn cmd_norm(common: &Common, args: &NormArgs) -> Result<()> {
    let sp = space(common)?;
    let text = if args.function.trim_start().starts_with('[') {
        args.function.clone()
    } else {
        fs::read_to_string(&args.function).map_err(|e| {
            MorreyError::InvalidParams(format!("cannot read {}: {e}", args.function))
        })?
    };
    let f: RadialFunction = serde_json::from_str(&text)
        .map_err(|e| MorreyError::InvalidParams(format!("bad function JSON: {e}")))?;
    let result = match args.method {
        MethodArg::Closed => centered_norm(&f, &sp)?,
        MethodArg::Oracle => oracle_norm(&f, &sp, effective_tol(common)?)?,
    };
    println!("{}", serde_json::to_string(&result).expect("serializable"));
    Ok(())
}

fn cmd_quotient(common: &Common, args: &QuotientArgs) -> Result<()> {
    let sp = space(common)?;
    let kind: QuotientKind = args.kind.into();
    if args.delta.is_some() && kind != QuotientKind::DunklWilliams {
        return Err(MorreyError::InvalidParams(format!(
            "--delta only applies to the dw quotient, not {kind}"
        )));
    }
    let report = quotient_report(kind, &sp, args.eps, args.delta)?;
    match common.format {
        FormatArg::Json => {
            println!("{}", serde_json::to_string(&report).expect("serializable"));
        }
        FormatArg::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", report.csv_row());
        }
    }
    Ok(())
}

/// Geometric grid from `from` down to `to`, endpoints included.
fn geometric_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && from < 1.0 && to > 0.0 && to < 1.0) {
        return Err(MorreyError::InvalidParams(format!(
            "eps grid endpoints must lie in (0,1), got {from} and {to}"
        )));
    }
    if to > from {
        return Err(MorreyError::InvalidParams(
            "--eps-from must be >= --eps-to; rows are emitted with eps descending".into(),
        ));
    }
    Ok(match steps {
        0 => Vec::new(),
        1 => vec![from],
        n => {
            let ratio = (to / from).powf(1.0 / (n as f64 - 1.0));
            let mut grid: Vec<f64> = (0..n).map(|i| from * ratio.powi(i as i32)).collect();
            *grid.last_mut().expect("n >= 2") = to;
            grid
        }
    })
}

fn cmd_sweep(common: &Common, args: &SweepArgs) -> Result<()> {
    let sp = space(common)?;
    let kind: QuotientKind = args.kind.into();
    // The untouched default is the exact dyadic grid 2⁻¹..2⁻²⁰; any explicit
    // grid flag switches to the generic geometric construction.
    let epsilons: Vec<f64> = match (args.eps_from, args.eps_to, args.eps_steps) {
        (None, None, None) => (1..=20).map(|k| 0.5f64.powi(k)).collect(),
        (from, to, steps) => geometric_grid(
            from.unwrap_or(0.5),
            to.unwrap_or_else(|| 0.5f64.powi(20)),
            steps.unwrap_or(20),
        )?,
    };
    let deltas: Option<Vec<f64>> = args.delta.map(|dl| vec![dl; epsilons.len()]);
    let reports = sweep(kind, &sp, &epsilons, deltas.as_deref())?;

    let body = match common.format {
        FormatArg::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in &reports {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            s
        }
        FormatArg::Json => {
            let mut s = serde_json::to_string(&reports).expect("serializable");
            s.push('\n');
            s
        }
    };
    match &args.out {
        Some(path) => fs::write(path, body).map_err(|e| {
            MorreyError::InvalidParams(format!("cannot write {}: {e}", path.display()))
        })?,
        None => print!("{body}"),
    }

    match reports.last() {
        Some(last) => eprintln!(
            "sweep {kind}: {} rows, final computed {}, target {}",
            reports.len(),
            last.computed,
            kind.target()
        ),
        None => eprintln!("sweep {kind}: 0 rows, target {}", kind.target()),
    }
    Ok(())
}

fn cmd_oracle_check(common: &Common, args: &OracleCheckArgs) -> Result<()> {
    let tol_check = effective_tol(common)?;
    // Run the oracle well below the comparison tolerance so its own
    // truncation does not eat the budget.
    let run_tol = (tol_check / 100.0).min(1e-4);
    let pinned = match (common.p, common.q) {
        (Some(p), Some(q)) => Some((p, q)),
        (None, None) => None,
        _ => {
            return Err(MorreyError::InvalidParams(
                "give both --p and --q, or neither, for oracle-check".into(),
            ))
        }
    };

    let mut rng = corpus::rng(common.seed);
    let mut rows: Vec<String> = Vec::new();
    let mut failures = 0usize;
    let mut max_dev = 0.0f64;
    for i in 0..args.count {
        let d = common.d.unwrap_or(corpus::DIMS[i % corpus::DIMS.len()]);
        let variant = match common.variant {
            Some(v) => Variant::from(v),
            None if i % 2 == 1 => Variant::Small,
            None => Variant::Classical,
        };
        let sp = match pinned {
            Some((p, q)) => SpaceParams::new(d, p, q, variant)?,
            None => corpus::random_space(&mut rng, d, variant),
        };
        let f = corpus::random_function(&mut rng, &sp);
        let closed = centered_norm(&f, &sp)?.value;
        let oracle = oracle_norm(&f, &sp, run_tol)?.value;
        let dev = (closed - oracle).abs() / closed.max(f64::MIN_POSITIVE);
        if dev > tol_check {
            failures += 1;
        }
        max_dev = max_dev.max(dev);
        if common.format == FormatArg::Csv {
            rows.push(format!(
                "{i},{},{},{},{},{},{closed},{oracle},{dev}",
                sp.d(),
                sp.p(),
                sp.q(),
                sp.variant().token(),
                f.pieces().len()
            ));
        }
    }

    match common.format {
        FormatArg::Json => {
            let summary = serde_json::json!({
                "count": args.count,
                "failures": failures,
                "max_rel_deviation": max_dev,
                "tol": tol_check,
            });
            println!("{summary}");
        }
        FormatArg::Csv => {
            println!("index,d,p,q,variant,pieces,closed,oracle,rel_deviation");
            for row in rows {
                println!("{row}");
            }
            eprintln!(
                "oracle-check: {} cases, {failures} failures, max relative deviation {max_dev:e}",
                args.count
            );
        }
    }

    if failures > 0 {
        return Err(MorreyError::ToleranceNotMet(format!(
            "{failures} of {} oracle-check cases exceeded relative tolerance {tol_check:e}",
            args.count
        )));
    }
    Ok(())
}
