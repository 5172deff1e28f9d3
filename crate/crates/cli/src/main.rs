//! `tsallisq`: evaluate entanglement measures on JSON states, generate
//! figure data for the g_q analysis, and sweep monogamy/polygamy
//! inequalities over random ensembles.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 a `--expect-convex`
//! scan found violations, 4 an inequality check or sweep found violations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tsallisq::entropy::{tsallis_entropy, von_neumann, EntropicIndex};
use tsallisq::gq::{bq_scan, scan_convexity, ScanGrid};
use tsallisq::measure::{tq_2q, tq_2q_extended, tq_mixed_bound, tq_pure, MeasureValue};
use tsallisq::monogamy::{
    ckw_residual, dual_ckw_residual, mixed_mono_check, run_sweep, tsallis_mono_residual,
    tsallis_poly_residual, write_reports_csv, Inequality, InequalityReport, StateLabel,
    SweepConfig,
};
use tsallisq::qmath::{state_from_json, LoadedState};
use tsallisq::roof::{roof_extremize, Direction, RoofBudget, RoofMeasure};
use tsallisq::{DensityMatrix, QubitCut};

const EXIT_EXPECTATION: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tsallisq",
    version,
    about = "Tsallis-q entanglement: measures, figure scans, inequality sweeps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the Tsallis-q and von Neumann entropy of a state
    Entropy(EntropyArgs),
    /// Evaluate Tsallis-q entanglement with automatic method routing
    Measure(MeasureArgs),
    /// Scan the convexity certificate g_q'' over an (x, q) grid
    ScanConvexity(ScanConvexityArgs),
    /// Scan the unit-circle gap b_q(1/sqrt(2)) over q
    ScanBq(ScanBqArgs),
    /// Evaluate monogamy/polygamy inequalities on one state file
    Check(CheckArgs),
    /// Monte Carlo inequality sweep over Haar-random pure states
    Sweep(SweepArgs),
    /// Run the convex-roof optimizer with an explicit budget
    Roof(RoofArgs),
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Entropy(a) => cmd_entropy(a),
        Cmd::Measure(a) => cmd_measure(a),
        Cmd::ScanConvexity(a) => cmd_scan_convexity(a),
        Cmd::ScanBq(a) => cmd_scan_bq(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Roof(a) => cmd_roof(a),
    }
}

// ---------------------------------------------------------------- plumbing

fn lib_err(e: tsallisq::Error) -> String {
    e.to_string()
}

fn load_state(path: &Path) -> Result<LoadedState, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    state_from_json(&text).map_err(lib_err)
}

fn density_of(state: LoadedState) -> DensityMatrix {
    match state {
        LoadedState::Pure(psi) => psi.density(),
        LoadedState::Density(rho) => rho,
    }
}

/// Writes via a sibling temp file and rename, so `path` never holds a
/// partial artifact.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, bytes).map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
    fs::rename(&tmp, path)
        .map_err(|e| format!("cannot move output into {}: {e}", path.display()))
}

fn entropic(q: f64) -> Result<EntropicIndex, String> {
    EntropicIndex::new(q).map_err(lib_err)
}

fn cut_for(n_qubits: usize, side: &Option<Vec<usize>>) -> Result<QubitCut, String> {
    match side {
        Some(side) => QubitCut::new(n_qubits, side).map_err(lib_err),
        None if n_qubits == 2 => QubitCut::single(2, 0).map_err(lib_err),
        None => Err("--cut is required for states on more than two qubits".into()),
    }
}

fn budget_for(budget: &Option<Vec<usize>>, rank: usize) -> Result<RoofBudget, String> {
    match budget {
        None => Ok(RoofBudget::default_for_rank(rank)),
        Some(v) if v.len() == 3 => Ok(RoofBudget::new(v[0], v[1], v[2])),
        Some(v) => Err(format!("--budget takes m,restarts,iters (got {} values)", v.len())),
    }
}

fn state_label(path: &Path) -> StateLabel {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    StateLabel::Named(name)
}

// ---------------------------------------------------------------- entropy

#[derive(Args)]
struct EntropyArgs {
    /// JSON state file (pure amplitudes or density matrix)
    state: PathBuf,
    /// Entropic index q > 0
    #[arg(long)]
    q: f64,
}

fn cmd_entropy(a: EntropyArgs) -> Result<ExitCode, String> {
    let q = entropic(a.q)?;
    let rho = density_of(load_state(&a.state)?);
    let out = json!({
        "tsallis_q": tsallis_entropy(&rho, q),
        "von_neumann": von_neumann(&rho),
        "q": a.q,
    });
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- measure

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Pure exact when pure, two-qubit closed form when 2x2, else roof
    Auto,
    /// Force the two-qubit closed form g_q(C)
    Closed,
    /// Force the convex-roof optimizer bound
    Roof,
}

#[derive(Args)]
struct MeasureArgs {
    state: PathBuf,
    /// Qubits on side A of the cut, comma separated (default 0 on 2 qubits)
    #[arg(long, value_delimiter = ',')]
    cut: Option<Vec<usize>>,
    /// Entropic index q
    #[arg(long)]
    q: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Accept q in the extended range for the two-qubit closed form
    #[arg(long)]
    allow_extended: bool,
    /// Roof budget as m,restarts,iters (default derived from rank)
    #[arg(long, value_delimiter = ',')]
    budget: Option<Vec<usize>>,
    /// Seed for the roof optimizer
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn closed_2q(rho: &DensityMatrix, q: EntropicIndex, extended: bool) -> Result<MeasureValue, String> {
    if rho.n_qubits() != 2 {
        return Err(format!(
            "the closed form needs a two-qubit state, got {} qubits",
            rho.n_qubits()
        ));
    }
    if extended { tq_2q_extended(rho, q) } else { tq_2q(rho, q) }.map_err(lib_err)
}

fn roof_bound(rho: &DensityMatrix, a: &MeasureArgs, q: EntropicIndex) -> Result<MeasureValue, String> {
    let cut = cut_for(rho.n_qubits(), &a.cut)?;
    let budget = budget_for(&a.budget, rho.rank())?;
    tq_mixed_bound(rho, &cut, q, &budget, a.seed).map_err(lib_err)
}

fn cmd_measure(a: MeasureArgs) -> Result<ExitCode, String> {
    let q = entropic(a.q)?;
    let state = load_state(&a.state)?;
    let value = match a.method {
        MethodArg::Auto => match state {
            LoadedState::Pure(psi) => {
                let cut = cut_for(psi.n_qubits(), &a.cut)?;
                tq_pure(&psi, &cut, q).map_err(lib_err)?
            }
            LoadedState::Density(rho) if rho.n_qubits() == 2 => {
                closed_2q(&rho, q, a.allow_extended)?
            }
            LoadedState::Density(rho) => roof_bound(&rho, &a, q)?,
        },
        MethodArg::Closed => closed_2q(&density_of(state), q, a.allow_extended)?,
        MethodArg::Roof => roof_bound(&density_of(state), &a, q)?,
    };
    println!("{}", serde_json::to_string(&value).expect("measure value serializes"));
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- scans

#[derive(Args)]
struct ScanConvexityArgs {
    #[arg(long, default_value_t = 1.0)]
    q_min: f64,
    #[arg(long, default_value_t = 4.0)]
    q_max: f64,
    #[arg(long, default_value_t = 300)]
    x_steps: usize,
    #[arg(long, default_value_t = 100)]
    q_steps: usize,
    /// CSV output path (x,q,value rows)
    #[arg(long)]
    out: PathBuf,
    /// Exit 3 if any cell dips below the convexity tolerance
    #[arg(long)]
    expect_convex: bool,
}

fn cmd_scan_convexity(a: ScanConvexityArgs) -> Result<ExitCode, String> {
    let grid =
        ScanGrid::new(0.01, 0.99, a.x_steps, a.q_min, a.q_max, a.q_steps).map_err(lib_err)?;
    let report = scan_convexity(&grid);
    let mut csv = Vec::new();
    report.write_csv(&mut csv).map_err(|e| e.to_string())?;
    write_atomic(&a.out, &csv)?;
    println!(
        "{}",
        serde_json::to_string(&report.summary()).expect("scan summary serializes")
    );
    if a.expect_convex && !report.violations.is_empty() {
        return Ok(ExitCode::from(EXIT_EXPECTATION));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct ScanBqArgs {
    #[arg(long, default_value_t = 1.01)]
    q_min: f64,
    #[arg(long, default_value_t = 4.0)]
    q_max: f64,
    #[arg(long, default_value_t = 600)]
    steps: usize,
    /// CSV output path (q,value rows)
    #[arg(long)]
    out: PathBuf,
}

fn cmd_scan_bq(a: ScanBqArgs) -> Result<ExitCode, String> {
    let scan = bq_scan(a.q_min, a.q_max, a.steps).map_err(lib_err)?;
    let mut csv = Vec::new();
    scan.write_csv(&mut csv).map_err(|e| e.to_string())?;
    write_atomic(&a.out, &csv)?;
    let summary = json!({
        "q_min": a.q_min,
        "q_max": a.q_max,
        "steps": a.steps,
        "zero_crossings": scan.zero_crossings,
        "sign_segments": scan.sign_segments,
    });
    println!("{summary}");
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- check

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IneqArg {
    #[value(name = "ckw")]
    Ckw,
    #[value(name = "dual_ckw")]
    DualCkw,
    #[value(name = "tsallis_mono")]
    TsallisMono,
    #[value(name = "tsallis_poly")]
    TsallisPoly,
}

impl From<IneqArg> for Inequality {
    fn from(v: IneqArg) -> Self {
        match v {
            IneqArg::Ckw => Inequality::Ckw,
            IneqArg::DualCkw => Inequality::DualCkw,
            IneqArg::TsallisMono => Inequality::TsallisMono,
            IneqArg::TsallisPoly => Inequality::TsallisPoly,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// JSON state file: a pure state on >= 3 qubits, or a 3-qubit density
    /// matrix (mixed-state monogamy probe only)
    state: PathBuf,
    /// Inequalities to evaluate; default: all whose q requirements are met
    #[arg(long = "ineq", value_delimiter = ',')]
    ineq: Vec<IneqArg>,
    /// Entropic indices for the Tsallis inequalities
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    /// Roof budget m,restarts,iters for the mixed-state probe
    #[arg(long, value_delimiter = ',')]
    budget: Option<Vec<usize>>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn cmd_check(a: CheckArgs) -> Result<ExitCode, String> {
    let label = state_label(&a.state);
    let explicit = !a.ineq.is_empty();
    let mut reports: Vec<InequalityReport> = Vec::new();

    match load_state(&a.state)? {
        LoadedState::Pure(psi) => {
            let chosen: Vec<IneqArg> = if explicit {
                a.ineq.clone()
            } else {
                vec![IneqArg::Ckw, IneqArg::DualCkw, IneqArg::TsallisMono, IneqArg::TsallisPoly]
            };
            for ineq in chosen {
                match ineq {
                    IneqArg::Ckw => reports.push(ckw_residual(&psi).map_err(lib_err)?),
                    IneqArg::DualCkw => reports.push(dual_ckw_residual(&psi).map_err(lib_err)?),
                    IneqArg::TsallisMono | IneqArg::TsallisPoly => {
                        let lib: Inequality = ineq.into();
                        if explicit && a.q.is_empty() {
                            return Err(format!("--q is required for {}", lib.name()));
                        }
                        for &q in &a.q {
                            // Explicit requests fail hard on a bad (ineq, q)
                            // pairing; the default set just skips it.
                            match lib.validate_q(q) {
                                Err(e) if explicit => return Err(lib_err(e)),
                                Err(_) => continue,
                                Ok(()) => {}
                            }
                            let qi = entropic(q)?;
                            let rep = match lib {
                                Inequality::TsallisMono => tsallis_mono_residual(&psi, qi),
                                _ => tsallis_poly_residual(&psi, qi),
                            };
                            reports.push(rep.map_err(lib_err)?);
                        }
                    }
                }
            }
        }
        LoadedState::Density(rho) => {
            if explicit && a.ineq != [IneqArg::TsallisMono] {
                return Err(
                    "only tsallis_mono is available for density-matrix input; the other \
                     inequalities need a pure state"
                        .into(),
                );
            }
            if a.q.is_empty() {
                return Err("--q is required for the mixed-state monogamy probe".into());
            }
            let budget = budget_for(&a.budget, rho.rank())?;
            for &q in &a.q {
                let rep = mixed_mono_check(&rho, entropic(q)?, &budget, a.seed).map_err(lib_err)?;
                reports.push(rep);
            }
        }
    }

    let reports: Vec<InequalityReport> =
        reports.into_iter().map(|r| r.with_label(label.clone())).collect();
    let violations = reports.iter().filter(|r| !r.pass).count();
    let out = json!({
        "state": label.to_string(),
        "seed": a.seed,
        "violations": violations,
        "reports": reports,
    });
    println!("{out}");
    if violations > 0 {
        return Ok(ExitCode::from(EXIT_VIOLATION));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- sweep

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n_qubits: usize,
    #[arg(long)]
    n_states: usize,
    /// Inequalities, comma separated
    #[arg(long = "ineq", value_delimiter = ',', required = true)]
    ineq: Vec<IneqArg>,
    /// Entropic indices for the Tsallis inequalities
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// CSV report path
    #[arg(long)]
    out: PathBuf,
    /// Optional file for the JSON summary (always printed to stdout)
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode, String> {
    let config = SweepConfig {
        n_qubits: a.n_qubits,
        n_states: a.n_states,
        inequalities: a.ineq.iter().map(|&i| i.into()).collect(),
        q_values: a.q.clone(),
        seed: a.seed,
    };
    let (reports, summary) = run_sweep(&config).map_err(lib_err)?;
    let mut csv = Vec::new();
    write_reports_csv(&reports, &mut csv).map_err(|e| e.to_string())?;
    write_atomic(&a.out, &csv)?;
    let js = serde_json::to_string(&summary).expect("sweep summary serializes");
    if let Some(path) = &a.summary_out {
        write_atomic(path, js.as_bytes())?;
    }
    println!("{js}");
    if summary.violation_count > 0 {
        return Ok(ExitCode::from(EXIT_VIOLATION));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- roof

#[derive(Clone, Copy, ValueEnum)]
enum RoofMeasureArg {
    Tsallis,
    VonNeumann,
    Concurrence,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Min,
    Max,
}

#[derive(Args)]
struct RoofArgs {
    state: PathBuf,
    /// Qubits on side A of the cut (default 0 on 2 qubits)
    #[arg(long, value_delimiter = ',')]
    cut: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = RoofMeasureArg::Tsallis)]
    measure: RoofMeasureArg,
    /// Entropic index (required for --measure tsallis)
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Min)]
    direction: DirectionArg,
    /// Budget m,restarts,iters (default derived from rank)
    #[arg(long, value_delimiter = ',')]
    budget: Option<Vec<usize>>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn cmd_roof(a: RoofArgs) -> Result<ExitCode, String> {
    let rho = density_of(load_state(&a.state)?);
    let cut = cut_for(rho.n_qubits(), &a.cut)?;
    let measure = match a.measure {
        RoofMeasureArg::Tsallis => {
            let q = a.q.ok_or("--q is required for --measure tsallis")?;
            RoofMeasure::TsallisQ(entropic(q)?)
        }
        RoofMeasureArg::VonNeumann => RoofMeasure::VonNeumann,
        RoofMeasureArg::Concurrence => RoofMeasure::Concurrence,
    };
    let direction = match a.direction {
        DirectionArg::Min => Direction::Min,
        DirectionArg::Max => Direction::Max,
    };
    let budget = budget_for(&a.budget, rho.rank())?;
    let res = roof_extremize(&rho, &cut, measure, direction, &budget, a.seed).map_err(lib_err)?;
    let out = json!({
        "value": res.value,
        "converged": res.converged,
        "restarts_used": res.restarts_used,
        "members": res.best.len(),
        "m": budget.m,
        "restarts": budget.restarts,
        "iters": budget.iters,
        "seed": a.seed,
    });
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}
