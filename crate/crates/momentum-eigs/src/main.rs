//! Thin CLI over the experiment harness.

use clap::{Args, Parser, Subcommand};
use momentum_eigs::harness::{
    self, mu_ratio_points, rate_report, run_experiment, suite, ExperimentPlan, OutputKind,
    SuiteOptions,
};
use momentum_eigs::iterations::{IterationConfig, Method};
use momentum_eigs::matrices::{generate, InitPolicy, MatrixSpec};
use momentum_eigs::matrix_market::mm_write;
use momentum_eigs::spectral::{invert_rate, perturbation_gain};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "momentum-eigs",
    about = "Benchmark runner for momentum-accelerated power and inverse iterations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment: a matrix against one or more methods.
    Run(RunArgs),
    /// Run a named benchmark suite (test1..test4, inverse-largest,
    /// inverse-smallest).
    Suite(SuiteArgs),
    /// Rate analysis: momentum-parameter sweeps and observed-rate inversion.
    Analyze(AnalyzeArgs),
    /// Generate a benchmark matrix and write it as a Matrix Market file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Matrix spec (diag:N, linspace:LO:HI:N, logspace:OFF:ELO:EHI:N,
    /// tridiag:N:SEED) or a Matrix Market file path.
    #[arg(long)]
    matrix: String,
    /// Methods: power | static | dynamic | inverse | static-inverse |
    /// dynamic-inverse. Repeatable.
    #[arg(long, required = true)]
    method: Vec<String>,
    /// Momentum parameter for the static methods.
    #[arg(long)]
    beta: Option<f64>,
    /// Shift for the inverse methods.
    #[arg(long)]
    shift: Option<f64>,
    /// Residual tolerance (defaults: 1e-12 power family, 1e-15 inverse).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Initial vector: ones | random:SEED | alternating.
    #[arg(long, default_value = "ones")]
    init: String,
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Output selection: csv | json | both.
    #[arg(long, default_value = "both")]
    format: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also dump the per-step iterate vectors for trace replay.
    #[arg(long)]
    dump_vectors: bool,
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite name.
    name: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Directory with Matrix Market benchmark files (falls back to the
    /// MOMENTUM_EIGS_DATA environment variable).
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Replicates for the randomized suites.
    #[arg(long, default_value_t = 100)]
    replicates: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Dominant eigenvalue for a rate sweep.
    #[arg(long)]
    lambda1: Option<f64>,
    /// Second eigenvalue for a rate sweep.
    #[arg(long)]
    lambda2: Option<f64>,
    /// Grid resolution of the sweep.
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Invert one observed residual ratio instead of sweeping.
    #[arg(long)]
    rho: Option<f64>,
    /// Diagonal spectrum (matrix spec) for augmented eigenvalue ratios.
    #[arg(long)]
    spectrum: Option<String>,
    /// Momentum parameter for the spectrum ratios.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    /// Matrix spec to generate.
    #[arg(long)]
    matrix: String,
    /// Output file path (.mtx).
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> momentum_eigs::Result<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Suite(args) => cmd_suite(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Generate(args) => cmd_generate(args),
    }
}

fn parse_method(
    name: &str,
    beta: Option<f64>,
    shift: Option<f64>,
) -> momentum_eigs::Result<Method> {
    use momentum_eigs::Error;
    let need_beta =
        || beta.ok_or_else(|| Error::InvalidParameter(format!("method `{name}` requires --beta")));
    let need_shift = || {
        shift.ok_or_else(|| Error::InvalidParameter(format!("method `{name}` requires --shift")))
    };
    match name {
        "power" => Ok(Method::Power),
        "static" => Ok(Method::StaticMomentum { beta: need_beta()? }),
        "dynamic" => Ok(Method::DynamicMomentum),
        "inverse" => Ok(Method::InversePower {
            shift: need_shift()?,
        }),
        "static-inverse" => Ok(Method::StaticMomentumInverse {
            shift: need_shift()?,
            beta: need_beta()?,
        }),
        "dynamic-inverse" => Ok(Method::DynamicMomentumInverse {
            shift: need_shift()?,
        }),
        other => Err(Error::InvalidParameter(format!(
            "unknown method `{other}` (expected power|static|dynamic|inverse|static-inverse|dynamic-inverse)"
        ))),
    }
}

fn cmd_run(args: RunArgs) -> momentum_eigs::Result<ExitCode> {
    let matrix: MatrixSpec = args.matrix.parse()?;
    let init: InitPolicy = args.init.parse()?;
    let output = match args.format.as_str() {
        "csv" => OutputKind::CsvTrace,
        "json" => OutputKind::JsonSummary,
        "both" => OutputKind::Both,
        other => {
            return Err(momentum_eigs::Error::InvalidParameter(format!(
                "unknown format `{other}` (expected csv|json|both)"
            )))
        }
    };
    let mut methods = Vec::new();
    for name in &args.method {
        let method = parse_method(name, args.beta, args.shift)?;
        let mut cfg = IterationConfig::new(method)
            .with_max_iter(args.max_iter)
            .with_init(init);
        if let Some(tol) = args.tol {
            cfg = cfg.with_tol(tol);
        }
        methods.push(cfg);
    }
    let plan = ExperimentPlan {
        matrix,
        methods,
        replicates: args.replicates,
        output,
        out_dir: args.out.clone(),
        dump_vectors: args.dump_vectors,
    };
    let summaries = run_experiment(&plan)?;
    for s in &summaries {
        println!(
            "{} rep {}: {} after {} iterations, residual {:.3e}, eigenvalue {:.9}, {:.3}s",
            s.label,
            s.replicate,
            s.stop,
            s.iterations,
            s.terminal_residual,
            s.eigenvalue,
            s.wall_time_secs
        );
    }
    println!("wrote results under {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_suite(args: SuiteArgs) -> momentum_eigs::Result<ExitCode> {
    let opts = SuiteOptions {
        out_dir: args.out,
        data_dir: args.data_dir,
        replicates: args.replicates,
    };
    let outcome = suite(&args.name, &opts)?;
    print!("{}", outcome.report);
    for s in &outcome.skipped {
        eprintln!("skipped: {s}");
    }
    if outcome.violations.is_empty() {
        println!("suite {}: all checks passed", outcome.name);
        Ok(ExitCode::SUCCESS)
    } else {
        for v in &outcome.violations {
            eprintln!("violation: {v}");
        }
        Ok(ExitCode::from(2))
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> momentum_eigs::Result<ExitCode> {
    std::fs::create_dir_all(&args.out)?;
    let mut did_something = false;
    if let Some(rho) = args.rho {
        let r = invert_rate(rho);
        println!(
            "rho {rho}: eigenvalue-ratio estimate r = {r}, first-order gain = {}",
            perturbation_gain(rho)
        );
        did_something = true;
    }
    if let (Some(l1), Some(l2)) = (args.lambda1, args.lambda2) {
        let report = rate_report(l1, l2, args.grid)?;
        let path = args.out.join("rate_sweep.csv");
        harness::write_rate_csv(&report, &path)?;
        println!(
            "lambda1 {l1}, lambda2 {l2}: optimal beta = {}, asymptotic rate = {:.6}; sweep written to {}",
            report.optimal_beta,
            report.asymptotic_rate,
            path.display()
        );
        did_something = true;
    }
    if let Some(spec) = &args.spectrum {
        let beta = args.beta.ok_or_else(|| {
            momentum_eigs::Error::InvalidParameter("--spectrum requires --beta".into())
        })?;
        let spec: MatrixSpec = spec.parse()?;
        let matrix = generate(&spec)?;
        let diag: Vec<f64> = (0..matrix.n()).map(|i| matrix.get(i, i)).collect();
        let points = mu_ratio_points(&diag, beta)?;
        let path = args.out.join("mu_ratios.csv");
        harness::write_mu_ratio_csv(&points, &path)?;
        println!("augmented eigenvalue ratios written to {}", path.display());
        did_something = true;
    }
    if !did_something {
        return Err(momentum_eigs::Error::InvalidParameter(
            "analyze needs --rho, --lambda1/--lambda2, or --spectrum".into(),
        ));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: GenerateArgs) -> momentum_eigs::Result<ExitCode> {
    let spec: MatrixSpec = args.matrix.parse()?;
    let matrix = generate(&spec)?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    mm_write(&matrix, &args.out)?;
    println!(
        "wrote {} ({} x {}, {} stored entries)",
        args.out.display(),
        matrix.n(),
        matrix.n(),
        matrix.nnz()
    );
    Ok(ExitCode::SUCCESS)
}
