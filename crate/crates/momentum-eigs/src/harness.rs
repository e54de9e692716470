//! Experiment harness: plans, benchmark suites, rate reports, and
//! machine-readable trace/summary output.

use crate::error::{Error, Result};
use crate::iterations::{iterate, IterationConfig, IterationResult, Method, StopReason};
use crate::linalg::Matrix;
use crate::matrices::{generate, InitPolicy, MatrixSpec};
use crate::spectral::{self, augmented_eigenvalues};
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable holding the default search directory for Matrix
/// Market files.
pub const DATA_DIR_ENV: &str = "MOMENTUM_EIGS_DATA";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    CsvTrace,
    JsonSummary,
    Both,
}

impl OutputKind {
    fn write_traces(self) -> bool {
        matches!(self, OutputKind::CsvTrace | OutputKind::Both)
    }
    fn write_summary(self) -> bool {
        matches!(self, OutputKind::JsonSummary | OutputKind::Both)
    }
}

/// One experiment: a matrix, a list of method configurations, and how many
/// replicates to run.
///
/// Replicated runs require the random-uniform init policy; replicate `i`
/// offsets the configured seed by `i`.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub matrix: MatrixSpec,
    pub methods: Vec<IterationConfig>,
    pub replicates: usize,
    pub output: OutputKind,
    pub out_dir: PathBuf,
    pub dump_vectors: bool,
}

/// Flat per-run record used in summaries and tables.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub label: String,
    pub replicate: usize,
    pub stop: StopReason,
    pub iterations: usize,
    pub matvec_count: usize,
    pub solve_count: usize,
    pub terminal_residual: f64,
    pub eigenvalue: f64,
    pub wall_time_secs: f64,
}

impl RunSummary {
    fn from_result(label: &str, replicate: usize, res: &IterationResult, wall: f64) -> Self {
        RunSummary {
            label: label.to_string(),
            replicate,
            stop: res.stop,
            iterations: res.iterations(),
            matvec_count: res.matvec_count,
            solve_count: res.solve_count,
            terminal_residual: res.terminal_residual(),
            eigenvalue: res.eigenvalue(),
            wall_time_secs: wall,
        }
    }

    /// Operator applications: matrix-vector products or triangular solve
    /// pairs, whichever the method uses.
    pub fn work_count(&self) -> usize {
        self.matvec_count + self.solve_count
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodAggregate {
    pub label: String,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub converged: usize,
    pub runs: usize,
}

fn aggregate(label: &str, counts: &[usize], converged: usize) -> MethodAggregate {
    let runs = counts.len();
    let min = counts.iter().copied().min().unwrap_or(0);
    let max = counts.iter().copied().max().unwrap_or(0);
    let mean = counts.iter().sum::<usize>() as f64 / runs.max(1) as f64;
    let var = counts
        .iter()
        .map(|c| (*c as f64 - mean).powi(2))
        .sum::<f64>()
        / runs.max(1) as f64;
    MethodAggregate {
        label: label.to_string(),
        min,
        max,
        mean,
        std_dev: var.sqrt(),
        converged,
        runs,
    }
}

/// Execute every method x replicate of the plan, writing one trace file per
/// run and a versioned JSON summary.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<Vec<RunSummary>> {
    if plan.replicates < 1 {
        return Err(Error::InvalidParameter("replicates must be >= 1".into()));
    }
    if plan.replicates > 1 {
        for cfg in &plan.methods {
            if !matches!(cfg.init, InitPolicy::RandomUniform { .. }) {
                return Err(Error::InvalidParameter(
                    "replicates > 1 requires the random-uniform init policy".into(),
                ));
            }
        }
    }
    fs::create_dir_all(&plan.out_dir)?;
    let matrix = generate(&plan.matrix)?;

    let mut summaries = Vec::new();
    let mut aggregates = Vec::new();
    for cfg in &plan.methods {
        let label = cfg.method.label();
        let mut counts = Vec::with_capacity(plan.replicates);
        let mut converged = 0;
        for rep in 0..plan.replicates {
            let mut run_cfg = cfg.clone();
            if let InitPolicy::RandomUniform { seed } = run_cfg.init {
                run_cfg.init = InitPolicy::RandomUniform {
                    seed: seed + rep as u64,
                };
            }
            if plan.dump_vectors {
                run_cfg.record_vectors = true;
            }
            let started = Instant::now();
            let res = iterate(&matrix, &run_cfg)?;
            let wall = started.elapsed().as_secs_f64();
            if plan.output.write_traces() {
                let path = plan.out_dir.join(format!("trace_{label}_r{rep}.csv"));
                write_trace_csv(&res, &path)?;
            }
            if plan.dump_vectors {
                let path = plan.out_dir.join(format!("vectors_{label}_r{rep}.csv"));
                write_vectors_csv(&res, &path)?;
            }
            if res.converged() {
                converged += 1;
            }
            let summary = RunSummary::from_result(&label, rep, &res, wall);
            counts.push(summary.work_count());
            summaries.push(summary);
        }
        aggregates.push(aggregate(&label, &counts, converged));
    }

    if plan.output.write_summary() {
        #[derive(Serialize)]
        struct SummaryFile<'a> {
            schema: u32,
            matrix: String,
            replicates: usize,
            aggregates: &'a [MethodAggregate],
            runs: &'a [RunSummary],
        }
        let file = SummaryFile {
            schema: 1,
            matrix: plan.matrix.to_string(),
            replicates: plan.replicates,
            aggregates: &aggregates,
            runs: &summaries,
        };
        let path = plan.out_dir.join("summary.json");
        fs::write(&path, serde_json::to_string_pretty(&file)?)?;
    }
    Ok(summaries)
}

/// Trace columns are fixed as `k,h,nu,d,rho,r,beta`; quantities a method
/// does not produce are left empty.
pub fn write_trace_csv(res: &IterationResult, path: &Path) -> Result<()> {
    let mut out = String::from("k,h,nu,d,rho,r,beta\n");
    for s in &res.steps {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{:e},{:e},{:e},{},{},{}\n",
            s.k,
            s.norm,
            s.rayleigh,
            s.residual,
            opt(s.detected_ratio),
            opt(s.rate_estimate),
            opt(s.beta),
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// One row per step: `k` followed by the iterate's entries.
fn write_vectors_csv(res: &IterationResult, path: &Path) -> Result<()> {
    let vectors = res.vectors.as_ref().ok_or_else(|| {
        Error::InvalidParameter("vector dump requested but none were recorded".into())
    })?;
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    for (step, x) in res.steps.iter().zip(vectors.iter()) {
        write!(w, "{}", step.k)?;
        for v in x {
            write!(w, ",{v:e}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// rate analysis
// ---------------------------------------------------------------------------

/// Data behind a momentum-parameter sweep: the predicted rate over a beta
/// grid plus the optimal parameter and its asymptotic rate.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub optimal_beta: f64,
    pub asymptotic_rate: f64,
    pub grid: Vec<(f64, f64)>,
}

pub fn rate_report(lambda1: f64, lambda2: f64, grid_points: usize) -> Result<RateReport> {
    if grid_points < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 grid points".into(),
        ));
    }
    let a1 = lambda1.abs();
    let a2 = lambda2.abs();
    if !(a2 < a1) {
        return Err(Error::OutOfRange(
            "need |lambda2| < |lambda1| for a rate sweep".into(),
        ));
    }
    let optimal_beta = a2 * a2 / 4.0;
    let asymptotic_rate = spectral::static_rate(lambda1, lambda2, optimal_beta)?.rate;
    let top = a1 * a1 / 4.0;
    let mut grid = Vec::with_capacity(grid_points);
    for i in 0..grid_points {
        let beta = (i as f64 + 0.5) / grid_points as f64 * top;
        let rate = spectral::static_rate(lambda1, lambda2, beta)?.rate;
        grid.push((beta, rate));
    }
    Ok(RateReport {
        lambda1,
        lambda2,
        optimal_beta,
        asymptotic_rate,
        grid,
    })
}

pub fn write_rate_csv(report: &RateReport, path: &Path) -> Result<()> {
    let mut out = String::from("beta,rate\n");
    for (beta, rate) in &report.grid {
        out.push_str(&format!("{beta:e},{rate:e}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Augmented eigenvalue ratios `mu_{lambda,+-} / mu_{lambda_1}` for a
/// diagonal spectrum at a given momentum parameter; the complex points that
/// land on circles of radius `sqrt(beta) / mu_{lambda_1}`.
pub fn mu_ratio_points(spectrum: &[f64], beta: f64) -> Result<Vec<MuRatioPoint>> {
    if spectrum.is_empty() {
        return Err(Error::InvalidParameter("empty spectrum".into()));
    }
    let lambda1 = spectrum
        .iter()
        .copied()
        .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .unwrap();
    let mu1 = augmented_eigenvalues(lambda1, beta).mu_plus;
    if mu1.norm() == 0.0 {
        return Err(Error::OutOfRange("dominant augmented mode is zero".into()));
    }
    let mut points = Vec::with_capacity(spectrum.len());
    for &lambda in spectrum {
        let pair = augmented_eigenvalues(lambda, beta);
        let plus = pair.mu_plus / mu1;
        let minus = pair.mu_minus / mu1;
        points.push(MuRatioPoint {
            lambda,
            plus_re: plus.re,
            plus_im: plus.im,
            minus_re: minus.re,
            minus_im: minus.im,
        });
    }
    Ok(points)
}

#[derive(Debug, Clone, Serialize)]
pub struct MuRatioPoint {
    pub lambda: f64,
    pub plus_re: f64,
    pub plus_im: f64,
    pub minus_re: f64,
    pub minus_im: f64,
}

pub fn write_mu_ratio_csv(points: &[MuRatioPoint], path: &Path) -> Result<()> {
    let mut out = String::from("lambda,plus_re,plus_im,minus_re,minus_im\n");
    for p in points {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e}\n",
            p.lambda, p.plus_re, p.plus_im, p.minus_re, p.minus_im
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------------

/// Outcome of a named suite: rendered tables plus any acceptance-band
/// violations (non-empty violations map to exit code 2).
#[derive(Debug)]
pub struct SuiteOutcome {
    pub name: String,
    pub report: String,
    pub violations: Vec<String>,
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub out_dir: PathBuf,
    /// Directory searched for Matrix Market benchmark files; falls back to
    /// the `MOMENTUM_EIGS_DATA` environment variable.
    pub data_dir: Option<PathBuf>,
    pub replicates: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            out_dir: PathBuf::from("out"),
            data_dir: None,
            replicates: 100,
        }
    }
}

/// Known leading eigenvalues of the named benchmark matrices, used to form
/// the optimal fixed momentum parameter when those files are supplied.
/// For `Muu` the two leading eigenvalues coincide, so the usable gap is to
/// the third one.
fn catalog_lambdas(stem: &str) -> Option<(f64, f64)> {
    match stem {
        "Kuu" => Some((54.0821, 53.9817)),
        "Muu" => Some((0.8399e-3, 0.8391e-3)),
        "ash292" => Some((9.1522, 8.3769)),
        "bcspwr06" => Some((5.6195, 5.5147)),
        "Si5H12" => Some((58.5609, 58.4205)),
        "ss1" => Some((1.3735, 1.3733)),
        "thermomech_TC" => Some((0.03055, 0.03047)),
        _ => None,
    }
}

fn locate_data_file(name: &str, opts: &SuiteOptions) -> Option<PathBuf> {
    let mut candidates = Vec::new();
    if let Some(dir) = &opts.data_dir {
        candidates.push(dir.join(name));
    }
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        candidates.push(PathBuf::from(dir).join(name));
    }
    candidates.push(PathBuf::from(name));
    candidates.into_iter().find(|p| p.is_file())
}

pub fn suite(name: &str, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    match name {
        "test1" => suite_test1(opts),
        "test2" => suite_test2(opts),
        "test3" => suite_test3(opts),
        "test4" => suite_test4(opts),
        "inverse-largest" => suite_inverse(opts, InverseTarget::Largest),
        "inverse-smallest" => suite_inverse(opts, InverseTarget::Smallest),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "test1",
    "test2",
    "test3",
    "test4",
    "inverse-largest",
    "inverse-smallest",
];

fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: &[String], widths: &[usize]| -> String {
        let mut line = String::from("|");
        for i in 0..cols {
            let cell = cells.get(i).map(String::as_str).unwrap_or("");
            line.push_str(&format!(" {:>w$} |", cell, w = widths[i]));
        }
        line.push('\n');
        line
    };
    out.push_str(&fmt_row(headers, &widths));
    let sep: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&fmt_row(&sep, &widths));
    for row in rows {
        out.push_str(&fmt_row(row, &widths));
    }
    out
}

fn count_cell(res: &IterationResult) -> String {
    if res.converged() {
        format!("{}", res.iterations())
    } else {
        "--".to_string()
    }
}

struct SuiteMatrix {
    label: String,
    matrix: Matrix,
    lambdas: Option<(f64, f64)>,
}

fn builtin(label: &str, spec: MatrixSpec, lambdas: Option<(f64, f64)>) -> Result<SuiteMatrix> {
    Ok(SuiteMatrix {
        label: label.to_string(),
        matrix: generate(&spec)?,
        lambdas,
    })
}

fn optional_mm(
    name: &str,
    opts: &SuiteOptions,
    skipped: &mut Vec<String>,
) -> Result<Option<SuiteMatrix>> {
    let file = format!("{name}.mtx");
    match locate_data_file(&file, opts) {
        Some(path) => {
            let matrix = matrix_from_path(&path)?;
            Ok(Some(SuiteMatrix {
                label: name.to_string(),
                matrix,
                lambdas: catalog_lambdas(name),
            }))
        }
        None => {
            skipped.push(format!(
                "{name}: file `{file}` not found (set {DATA_DIR_ENV} or --data-dir)"
            ));
            Ok(None)
        }
    }
}

fn matrix_from_path(path: &Path) -> Result<Matrix> {
    crate::matrix_market::mm_read(path)
}

fn convergence_methods(lambdas: Option<(f64, f64)>) -> Vec<IterationConfig> {
    let mut methods = vec![
        IterationConfig::new(Method::Power),
        IterationConfig::new(Method::DynamicMomentum),
    ];
    if let Some((_, l2)) = lambdas {
        methods.insert(
            1,
            IterationConfig::new(Method::StaticMomentum {
                beta: l2 * l2 / 4.0,
            }),
        );
    }
    methods
}

fn suite_test1(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut skipped = Vec::new();
    let mut entries = vec![builtin(
        "diag-1000",
        MatrixSpec::DiagDescending { n: 1000 },
        Some((1000.0, 999.0)),
    )?];
    for name in ["Kuu", "Muu"] {
        if let Some(m) = optional_mm(name, opts, &mut skipped)? {
            entries.push(m);
        }
    }

    fs::create_dir_all(&opts.out_dir)?;
    let mut violations = Vec::new();
    let headers: Vec<String> = [
        "matrix",
        "method",
        "iterations",
        "terminal residual",
        "eigenvalue",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut rows = Vec::new();
    for entry in &entries {
        for cfg in convergence_methods(entry.lambdas) {
            let res = iterate(&entry.matrix, &cfg)?;
            write_trace_csv(
                &res,
                &opts
                    .out_dir
                    .join(format!("test1_{}_{}.csv", entry.label, cfg.method.label())),
            )?;
            rows.push(vec![
                entry.label.clone(),
                cfg.method.label(),
                count_cell(&res),
                format!("{:.2e}", res.terminal_residual()),
                format!("{:.6}", res.eigenvalue()),
            ]);
            if entry.label == "diag-1000" {
                match cfg.method {
                    Method::Power if res.stop != StopReason::MaxIter => {
                        violations
                            .push("test1: power on diag-1000 should exhaust the budget".into());
                    }
                    Method::DynamicMomentum
                        if !res.converged() || res.terminal_residual() >= 1e-12 =>
                    {
                        violations
                            .push("test1: dynamic momentum on diag-1000 should reach 1e-12".into());
                    }
                    _ => {}
                }
            }
        }
    }
    let report = format!("suite test1\n{}", render_table(&headers, &rows));
    fs::write(opts.out_dir.join("test1_table.txt"), &report)?;
    Ok(SuiteOutcome {
        name: "test1".into(),
        report,
        violations,
        skipped,
    })
}

fn suite_test2(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut skipped = Vec::new();
    let mut entries = Vec::new();
    for name in ["ash292", "bcspwr06"] {
        if let Some(m) = optional_mm(name, opts, &mut skipped)? {
            entries.push(m);
        }
    }
    entries.push(builtin(
        "linspace-200",
        MatrixSpec::LinspaceDiag {
            lo: -99.0,
            hi: 100.0,
            n: 200,
        },
        Some((100.0, 99.0)),
    )?);
    entries.push(builtin(
        "logspace-200",
        MatrixSpec::LogspaceDiag {
            offset: 10.0,
            exp_lo: 0.0,
            exp_hi: 1.0,
            n: 200,
        },
        Some((9.0, 10.0 - 10f64.powf(1.0 / 199.0))),
    )?);

    fs::create_dir_all(&opts.out_dir)?;
    let mut violations = Vec::new();
    let headers: Vec<String> = ["matrix", "method", "min", "max", "mean", "std"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for entry in &entries {
        for cfg in convergence_methods(entry.lambdas) {
            let mut counts = Vec::with_capacity(opts.replicates);
            for rep in 0..opts.replicates {
                let run_cfg = cfg.clone().with_init(InitPolicy::RandomUniform {
                    seed: 1000 + rep as u64,
                });
                let res = iterate(&entry.matrix, &run_cfg)?;
                counts.push(res.matvec_count + res.solve_count);
            }
            let agg = aggregate(&cfg.method.label(), &counts, 0);
            rows.push(vec![
                entry.label.clone(),
                agg.label.clone(),
                agg.min.to_string(),
                agg.max.to_string(),
                format!("{:.2}", agg.mean),
                format!("{:.2}", agg.std_dev),
            ]);
            if entry.label == "logspace-200"
                && cfg.method == Method::DynamicMomentum
                && (agg.min < 400 || agg.max > 700)
            {
                violations.push(format!(
                    "test2: dynamic momentum on logspace-200 outside [400, 700]: min {} max {}",
                    agg.min, agg.max
                ));
            }
        }
    }
    let report = format!(
        "suite test2 ({} random starts per method)\n{}",
        opts.replicates,
        render_table(&headers, &rows)
    );
    fs::write(opts.out_dir.join("test2_table.txt"), &report)?;
    Ok(SuiteOutcome {
        name: "test2".into(),
        report,
        violations,
        skipped,
    })
}

fn suite_test3(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    fs::create_dir_all(&opts.out_dir)?;
    let n = 200;
    let seeds = opts.replicates.max(1);
    let mut power_counts = Vec::with_capacity(seeds);
    let mut dynamic_counts = Vec::with_capacity(seeds);
    let mut static_counts = Vec::with_capacity(seeds);
    let mut residuals: Vec<(String, f64, f64)> = Vec::new();

    let mut min_resid = [f64::MAX; 3];
    let mut max_resid = [f64::MIN; 3];
    for seed in 0..seeds {
        let a = generate(&MatrixSpec::RandomTridiagonal {
            n,
            seed: seed as u64,
        })?;
        // leading eigenvalue ratio for the optimal static parameter
        let eigs = crate::eig::dense_eigenvalues_real(&a)?;
        let mut mags: Vec<f64> = eigs.iter().map(|v| v.abs()).collect();
        mags.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let beta_opt = mags[1] * mags[1] / 4.0;

        let runs = [
            (0usize, IterationConfig::new(Method::Power)),
            (
                1,
                IterationConfig::new(Method::StaticMomentum { beta: beta_opt }),
            ),
            (2, IterationConfig::new(Method::DynamicMomentum)),
        ];
        for (slot, cfg) in runs {
            let res = iterate(&a, &cfg)?;
            let count = res.matvec_count + res.solve_count;
            match slot {
                0 => power_counts.push(count),
                1 => static_counts.push(count),
                _ => dynamic_counts.push(count),
            }
            min_resid[slot] = min_resid[slot].min(res.terminal_residual());
            max_resid[slot] = max_resid[slot].max(res.terminal_residual());
        }
    }
    residuals.push(("power".into(), min_resid[0], max_resid[0]));
    residuals.push(("static-momentum".into(), min_resid[1], max_resid[1]));
    residuals.push(("dynamic-momentum".into(), min_resid[2], max_resid[2]));

    let headers: Vec<String> = [
        "method",
        "mean",
        "std",
        "min",
        "max",
        "resid min",
        "resid max",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let labelled = [
        ("power", &power_counts),
        ("static-momentum", &static_counts),
        ("dynamic-momentum", &dynamic_counts),
    ];
    for (i, (label, counts)) in labelled.iter().enumerate() {
        let agg = aggregate(label, counts, 0);
        rows.push(vec![
            label.to_string(),
            format!("{:.2}", agg.mean),
            format!("{:.2}", agg.std_dev),
            agg.min.to_string(),
            agg.max.to_string(),
            format!("{:.2e}", residuals[i].1),
            format!("{:.2e}", residuals[i].2),
        ]);
    }
    let power_mean = power_counts.iter().sum::<usize>() as f64 / seeds as f64;
    let dynamic_mean = dynamic_counts.iter().sum::<usize>() as f64 / seeds as f64;
    if dynamic_mean > 0.5 * power_mean {
        violations.push(format!(
            "test3: dynamic mean {dynamic_mean:.1} exceeds half the power mean {power_mean:.1}"
        ));
    }
    let wins = power_counts
        .iter()
        .zip(dynamic_counts.iter())
        .filter(|(p, d)| d <= p)
        .count();
    if (wins as f64) < 0.95 * seeds as f64 {
        violations.push(format!(
            "test3: dynamic beat power in only {wins}/{seeds} runs"
        ));
    }

    let report = format!(
        "suite test3 ({seeds} seeded tridiagonal matrices, n = {n}, all-ones start)\n{}",
        render_table(&headers, &rows)
    );
    fs::write(opts.out_dir.join("test3_table.txt"), &report)?;
    Ok(SuiteOutcome {
        name: "test3".into(),
        report,
        violations,
        skipped: Vec::new(),
    })
}

fn suite_test4(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut skipped = Vec::new();
    let mut entries = Vec::new();
    for name in ["Si5H12", "ss1", "thermomech_TC"] {
        if let Some(m) = optional_mm(name, opts, &mut skipped)? {
            entries.push(m);
        }
    }
    fs::create_dir_all(&opts.out_dir)?;
    let headers: Vec<String> = ["matrix", "method", "iterations", "terminal residual"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for entry in &entries {
        let (l1, l2) = entry.lambdas.expect("catalog entries carry lambdas");
        let beta_opt = l2 * l2 / 4.0;
        // perturbed parameters stay inside the convergence region
        let beta_plus = (1.01 * beta_opt).min((3.0 * l1 * l1 + l2 * l2) / 16.0);
        let beta_minus = 0.99 * beta_opt;
        let methods = vec![
            IterationConfig::new(Method::Power),
            IterationConfig::new(Method::StaticMomentum { beta: beta_opt }),
            IterationConfig::new(Method::StaticMomentum { beta: beta_plus }),
            IterationConfig::new(Method::StaticMomentum { beta: beta_minus }),
            IterationConfig::new(Method::DynamicMomentum),
        ];
        for cfg in methods {
            let res = iterate(&entry.matrix, &cfg)?;
            write_trace_csv(
                &res,
                &opts
                    .out_dir
                    .join(format!("test4_{}_{}.csv", entry.label, cfg.method.label())),
            )?;
            rows.push(vec![
                entry.label.clone(),
                cfg.method.label(),
                count_cell(&res),
                format!("{:.2e}", res.terminal_residual()),
            ]);
        }
    }
    let report = format!("suite test4\n{}", render_table(&headers, &rows));
    fs::write(opts.out_dir.join("test4_table.txt"), &report)?;
    Ok(SuiteOutcome {
        name: "test4".into(),
        report,
        violations: Vec::new(),
        skipped,
    })
}

enum InverseTarget {
    Largest,
    Smallest,
}

/// Expected iteration counts for the deterministic inverse-iteration rows
/// (all-ones start, tolerance 1e-15): `(sigma, plain, dynamic, beta_opt)`.
const INVERSE_LARGEST_EXPECTED: &[(f64, usize, usize, usize)] = &[
    (1001.0, 50, 29, 34),
    (1004.0, 155, 69, 88),
    (1009.0, 328, 146, 175),
];
const INVERSE_SMALLEST_EXPECTED: &[(f64, usize, usize, usize)] =
    &[(0.0, 50, 29, 33), (-15.0, 570, 265, 296)];
/// Slack on the expected counts (floating-point ordering).
const INVERSE_COUNT_SLACK: usize = 2;

fn suite_inverse(opts: &SuiteOptions, target: InverseTarget) -> Result<SuiteOutcome> {
    fs::create_dir_all(&opts.out_dir)?;
    let a = generate(&MatrixSpec::DiagDescending { n: 1000 })?;
    let (name, shifts, grid, second_closest, expected): (
        &str,
        Vec<f64>,
        Vec<f64>,
        fn(f64) -> f64,
        &[(f64, usize, usize, usize)],
    ) = match target {
        InverseTarget::Largest => (
            "inverse-largest",
            vec![999.75, 1000.25, 1000.5, 1001.0, 1002.0, 1004.0, 1009.0],
            vec![0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64],
            |_sigma| 999.0,
            INVERSE_LARGEST_EXPECTED,
        ),
        InverseTarget::Smallest => (
            "inverse-smallest",
            vec![1.25, 0.75, 0.5, 0.0, -1.0, -3.0, -7.0, -15.0],
            vec![1e-4, 1e-3, 1e-2, 1e-1, 2e-1, 4e-1, 8e-1],
            |_sigma| 2.0,
            INVERSE_SMALLEST_EXPECTED,
        ),
    };

    let mut headers: Vec<String> = vec![
        "sigma".into(),
        "0".into(),
        "dynamic".into(),
        "beta_opt".into(),
    ];
    headers.extend(grid.iter().map(|b| format!("{b}")));
    let mut rows = Vec::new();
    let mut violations = Vec::new();

    for &sigma in &shifts {
        let beta_opt = 1.0 / (4.0 * (second_closest(sigma) - sigma).powi(2));
        let mut row = vec![format!("{sigma}")];

        let plain = iterate(
            &a,
            &IterationConfig::new(Method::InversePower { shift: sigma }),
        )?;
        row.push(count_cell(&plain));

        let dynamic = iterate(
            &a,
            &IterationConfig::new(Method::DynamicMomentumInverse { shift: sigma }),
        )?;
        row.push(count_cell(&dynamic));

        let optimal = iterate(
            &a,
            &IterationConfig::new(Method::StaticMomentumInverse {
                shift: sigma,
                beta: beta_opt,
            }),
        )?;
        row.push(format!("{} ({:.2e})", count_cell(&optimal), beta_opt));

        for &beta in &grid {
            let res = iterate(
                &a,
                &IterationConfig::new(Method::StaticMomentumInverse { shift: sigma, beta }),
            )?;
            row.push(count_cell(&res));
        }
        rows.push(row);

        if let Some((_, p, d, o)) = expected.iter().find(|(s, ..)| *s == sigma) {
            let checks = [
                ("plain", &plain, *p),
                ("dynamic", &dynamic, *d),
                ("beta_opt", &optimal, *o),
            ];
            for (what, res, want) in checks {
                let got = res.iterations();
                if !res.converged() || got.abs_diff(want) > INVERSE_COUNT_SLACK {
                    violations.push(format!(
                        "{name}: sigma {sigma} {what} expected {want} +- {INVERSE_COUNT_SLACK}, got {got} ({})",
                        res.stop
                    ));
                }
            }
        }
    }

    let report = format!(
        "suite {name} (diag(1000..1), all-ones start, tol 1e-15; `--` marks runs that hit the budget)\n{}",
        render_table(&headers, &rows)
    );
    fs::write(opts.out_dir.join(format!("{name}_table.txt")), &report)?;
    Ok(SuiteOutcome {
        name: name.into(),
        report,
        violations,
        skipped: Vec::new(),
    })
}
