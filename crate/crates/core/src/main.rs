use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use svineq::harness::{
    check_explicit, falsify, run_suite, ExitStatus, ExplicitCheck, FalsifyConfig, FalsifyOutcome,
    SuiteConfig,
};
use svineq::inequalities::{all_ids, KPolicy, RegistryRun, ALPHA_GRID};
use svineq::linalg::Tolerances;
use svineq::{Error, Result};

/// Numerical checks of singular value inequalities for block and product operators.
#[derive(Parser)]
#[command(name = "svineq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run inequality suites over seeded random trials.
    Run(RunArgs),
    /// Search for a counterexample after dropping a hypothesis.
    Falsify(FalsifyArgs),
    /// Check explicit matrices from a JSON file.
    Check(CheckArgs),
    /// List registered inequalities.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated ids, or `all`.
    #[arg(long, env = "SVINEQ_SUITE", default_value = "all")]
    suite: String,
    /// `a-b` range or comma list.
    #[arg(long, env = "SVINEQ_DIMS", default_value = "1-6")]
    dims: String,
    #[arg(long, env = "SVINEQ_TRIALS", default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "SVINEQ_SEED", default_value_t = 42)]
    seed: u64,
    /// Margin tolerance.
    #[arg(long, env = "SVINEQ_TOL")]
    tol: Option<f64>,
    /// Comma-separated α grid.
    #[arg(long, env = "SVINEQ_ALPHA")]
    alpha: Option<String>,
    /// Comma-separated Schatten exponents.
    #[arg(long, env = "SVINEQ_P", default_value = "1,2,3")]
    p: String,
    /// Ky Fan indices: `all` or a comma list.
    #[arg(long, env = "SVINEQ_K", default_value = "all")]
    k: String,
    #[arg(long, env = "SVINEQ_OUT")]
    out: Option<PathBuf>,
    /// Also write per-index margins as CSV.
    #[arg(long, env = "SVINEQ_CSV")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FalsifyArgs {
    /// Inequality id, optionally suffixed with a track (e.g. `normal-cartesian-upper`).
    #[arg(long, env = "SVINEQ_INEQ")]
    ineq: String,
    /// Hypothesis to drop.
    #[arg(long, env = "SVINEQ_DROP")]
    drop: Option<String>,
    #[arg(long, env = "SVINEQ_DIMS", default_value_t = 2)]
    dims: usize,
    #[arg(long, env = "SVINEQ_ITERS", default_value_t = 10_000)]
    iters: usize,
    #[arg(long, env = "SVINEQ_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, env = "SVINEQ_ALPHA", default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, env = "SVINEQ_TOL")]
    tol: Option<f64>,
    #[arg(long, env = "SVINEQ_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, env = "SVINEQ_INEQ")]
    ineq: String,
    #[arg(long, env = "SVINEQ_INPUT")]
    input: PathBuf,
    /// Evaluate margins even when hypotheses fail.
    #[arg(long, env = "SVINEQ_FORCE")]
    force: bool,
    #[arg(long, env = "SVINEQ_ALPHA")]
    alpha: Option<f64>,
    #[arg(long, env = "SVINEQ_P", default_value = "1,2,3")]
    p: String,
    #[arg(long, env = "SVINEQ_TOL")]
    tol: Option<f64>,
    #[arg(long, env = "SVINEQ_OUT")]
    out: Option<PathBuf>,
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Parameter(format!("--{flag}: cannot parse `{s}`")))
        })
        .collect()
}

fn parse_dims(text: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = text.split_once('-') {
        let lo: usize = parse_list("dims", lo)?.first().copied().unwrap_or(0);
        let hi: usize = parse_list("dims", hi)?.first().copied().unwrap_or(0);
        if lo == 0 || hi < lo {
            return Err(Error::Parameter(format!("--dims: bad range `{text}`")));
        }
        return Ok((lo..=hi).collect());
    }
    parse_list("dims", text)
}

fn tolerances(margin: Option<f64>) -> Result<Tolerances> {
    let tol = match margin {
        Some(m) => Tolerances::default().with_margin_tol(m),
        None => Tolerances::default(),
    };
    tol.validate()?;
    Ok(tol)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = out {
        fs::write(path, text)?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<ExitStatus> {
    let suites = if args.suite == "all" {
        all_ids().into_iter().map(String::from).collect()
    } else {
        parse_list("suite", &args.suite)?
    };
    let k_policy = if args.k == "all" {
        KPolicy::All
    } else {
        KPolicy::Only(parse_list("k", &args.k)?)
    };
    let config = SuiteConfig {
        suites,
        run: RegistryRun {
            dims: parse_dims(&args.dims)?,
            trials: args.trials,
            seed: args.seed,
            alphas: match &args.alpha {
                Some(a) => parse_list("alpha", a)?,
                None => ALPHA_GRID.to_vec(),
            },
            p_list: parse_list("p", &args.p)?,
            k_policy,
            tol: tolerances(args.tol)?,
        },
        out: args.out,
        csv: args.csv,
    };
    let report = run_suite(&config)?;
    for s in &report.suites {
        eprintln!(
            "{:<20} checks {:>7}  passes {:>7}  violations {:>4}  errors {:>4}  worst {:+.3e}",
            s.id,
            s.checks,
            s.passes,
            s.violations,
            s.errors,
            s.worst_margin.unwrap_or(f64::NAN)
        );
    }
    if config.out.is_none() {
        print!("{}", report.to_json());
    }
    Ok(report.status())
}

fn cmd_falsify(args: FalsifyArgs) -> Result<ExitStatus> {
    let mut config = FalsifyConfig::new(&args.ineq, args.drop.as_deref(), args.dims, args.seed);
    config.iters = args.iters;
    config.alpha = args.alpha;
    config.tol = tolerances(args.tol)?;
    let outcome = falsify(&config)?;
    match &outcome {
        FalsifyOutcome::Witness(w) => eprintln!(
            "witness after {} iterations: {} index {} violated by {:.6e}",
            w.iterations, w.violated_track, w.violated_index, w.violation
        ),
        FalsifyOutcome::Exhausted(e) => eprintln!(
            "exhausted after {} iterations; best margin {:+.3e} ({} index {})",
            e.iterations, e.best_margin, e.best_track, e.best_index
        ),
    }
    emit(&outcome.to_json(), args.out.as_ref())?;
    Ok(match outcome {
        FalsifyOutcome::Witness(_) => ExitStatus::Violation,
        FalsifyOutcome::Exhausted(_) => ExitStatus::Pass,
    })
}

fn cmd_check(args: CheckArgs) -> Result<ExitStatus> {
    let config = ExplicitCheck {
        id: args.ineq,
        alpha: args.alpha,
        p_list: parse_list("p", &args.p)?,
        force: args.force,
        tol: tolerances(args.tol)?,
    };
    let result = check_explicit(&config, &args.input)?;
    emit(
        &(serde_json::to_string_pretty(&result).expect("result serializes") + "\n"),
        args.out.as_ref(),
    )?;
    Ok(ExitStatus::of_check(&result))
}

fn cmd_list() -> Result<ExitStatus> {
    for spec in svineq::inequalities::registry() {
        println!("{:<20} {}", spec.id, spec.statement);
        if !spec.hypotheses.is_empty() {
            println!("{:<20} hypotheses: {}", "", spec.hypotheses.join(", "));
        }
    }
    Ok(ExitStatus::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Falsify(a) => cmd_falsify(a),
        Command::Check(a) => cmd_check(a),
        Command::List => cmd_list(),
    };
    match status {
        Ok(s) => ExitCode::from(s.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::Error.code() as u8)
        }
    }
}
