//! Experiment plumbing behind the `oscint` binary: config structs, system
//! and problem loading, run execution, sweeps and the audit report.
//!
//! Everything here is ordinary library code so that runs can also be driven
//! programmatically (the examples do); the binary itself only parses flags.

use std::collections::VecDeque;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::filters::{self, FilterPair};
use crate::integrator::{integrate, IntegratorConfig, RecordOptions, RunResult};
use crate::linalg::CMatrix;
use crate::series::EnergySeries;
use crate::system::{
    closeness_check, drift_bound_check, unconditional_bound_check, OscillatorSystem, State,
};
use crate::wave::{build_system, rho_certificate, PotentialSpec, WaveProblem};
use crate::{system::Forcing, OscintError, Result, C64};

/// Output format for series files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = OscintError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(OscintError::InvalidInput(format!(
                "unknown output format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Render a series in the requested format.
pub fn render_series(series: &EnergySeries, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => series.to_csv_string(),
        OutputFormat::Json => series.to_json_string(),
    }
}

/// Write a series to `path`, or return the rendered text when no path given.
pub fn emit_series(
    series: &EnergySeries,
    out: Option<&Path>,
    format: OutputFormat,
) -> Result<Option<String>> {
    let text = render_series(series, format)?;
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Load a system from an inline JSON string or a file path.
pub fn load_system_source(source: &str) -> Result<(OscillatorSystem, Option<State>)> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') {
        OscillatorSystem::from_json(source)
    } else {
        let text = fs::read_to_string(source)?;
        OscillatorSystem::from_json(&text)
    }
}

/// Load a wave problem from an inline JSON string or a file path.
pub fn load_problem_source(source: &str) -> Result<WaveProblem> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') {
        WaveProblem::from_json(source)
    } else {
        let text = fs::read_to_string(source)?;
        WaveProblem::from_json(&text)
    }
}

/// Deterministic random Hermitian positive-semidefinite coupling with the
/// requested spectral norm.
pub fn random_psd_coupling(d: usize, norm: f64, rng: &mut impl Rng) -> Result<CMatrix> {
    let r = CMatrix::from_fn(d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let gram = r.adjoint().mul(&r);
    let current = crate::linalg::spectral_norm(&gram)?;
    if current == 0.0 {
        return Ok(CMatrix::zeros(d));
    }
    Ok(gram.scaled(norm / current))
}

/// Random oscillatory system for sweeps and randomized audits.
///
/// A few frequencies land in the upper decade of `[0, omega_max]` so that
/// resonant step sizes are reachable; `zero_mode` plants an exact zero
/// frequency. The coupling is positive semidefinite with the given norm,
/// which keeps long trajectories bounded.
pub fn random_system(
    d: usize,
    omega_max: f64,
    coupling_norm: f64,
    zero_mode: bool,
    rng: &mut impl Rng,
) -> Result<OscillatorSystem> {
    if d == 0 {
        return Err(OscintError::InvalidInput(
            "dimension must be positive".into(),
        ));
    }
    let mut omegas: Vec<f64> = (0..d)
        .map(|i| {
            if i < d / 2 {
                rng.random_range(0.05 * omega_max..omega_max)
            } else {
                rng.random_range(0.0..0.02 * omega_max)
            }
        })
        .collect();
    if zero_mode {
        omegas[d - 1] = 0.0;
    }
    let coupling = random_psd_coupling(d, coupling_norm, rng)?;
    OscillatorSystem::new(omegas, coupling)
}

/// Random state with O(1) component magnitudes.
pub fn random_state(d: usize, rng: &mut impl Rng) -> State {
    State::new(
        (0..d)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
        (0..d)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

fn filter_by_name(name: &str) -> Result<FilterPair> {
    filters::by_name(name).ok_or_else(|| {
        let known: Vec<String> = filters::catalog().into_iter().map(|p| p.name).collect();
        OscintError::InvalidInput(format!(
            "unknown filter '{name}' (available: {})",
            known.join(", ")
        ))
    })
}

/// Configuration of a single linear ODE run.
#[derive(Clone, Debug)]
pub struct OdeConfig {
    /// Inline JSON or file path of the system fixture.
    pub system: String,
    pub filter: String,
    pub h: f64,
    pub steps: usize,
    pub stride: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Outcome of an ode/wave run.
pub struct RunArtifacts {
    pub series: EnergySeries,
    /// Rendered series when no output path was configured.
    pub rendered: Option<String>,
    pub warnings: Vec<String>,
    /// The seed actually used when the initial state was drawn.
    pub drawn_seed: Option<u64>,
}

fn initial_state_for(
    sys: &OscillatorSystem,
    embedded: Option<State>,
    seed: Option<u64>,
) -> (State, Option<u64>, Vec<String>) {
    let mut warnings = Vec::new();
    match embedded {
        Some(s) => (s, None, warnings),
        None => {
            let seed = seed.unwrap_or_else(|| {
                let s = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_nanos() as u64)
                    .unwrap_or(0);
                warnings.push(format!(
                    "no initial state in the system fixture and no --seed; drew seed {s}"
                ));
                s
            });
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (random_state(sys.dim(), &mut rng), Some(seed), warnings)
        }
    }
}

/// Run one linear trajectory from a system fixture and emit its series.
pub fn run_ode(cfg: &OdeConfig) -> Result<RunArtifacts> {
    let (sys, embedded_state) = load_system_source(&cfg.system)?;
    let filter = filter_by_name(&cfg.filter)?;
    let (s0, drawn_seed, mut warnings) = initial_state_for(&sys, embedded_state, cfg.seed);
    if sys.asymmetry_significant() {
        warnings.push(format!(
            "coupling matrix was asymmetric (defect {:.3e}); it has been Hermitian-symmetrized",
            sys.symmetrization_defect()
        ));
    }
    let icfg = IntegratorConfig::new(cfg.h, filter)?;
    let record = RecordOptions { stride: cfg.stride };
    let RunResult { series, .. } =
        integrate(&sys, &Forcing::Linear, &icfg, &s0, cfg.steps, &record)?;
    let rendered = emit_series(&series, cfg.out.as_deref(), cfg.format)?;
    Ok(RunArtifacts {
        series,
        rendered,
        warnings,
        drawn_seed,
    })
}

/// Configuration of a wave-pipeline run (one series per step size).
#[derive(Clone, Debug)]
pub struct WaveConfig {
    /// Inline JSON or file path; when absent, `big_k`/`rho`/`potential` are used.
    pub problem: Option<String>,
    pub big_k: usize,
    pub rho: f64,
    /// Inline JSON array of potential coefficients, e.g.
    /// `[{"j":0,"re":0.5},{"j":1,"re":0.2}]`.
    pub potential: Option<String>,
    pub filter: String,
    pub h_list: Vec<f64>,
    pub steps: usize,
    pub stride: Option<usize>,
    pub c2_estimate: f64,
    pub out_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Built-in smooth three-mode potential and low-mode initial data used when a
/// wave run is configured from `--K`/`--rho` alone.
pub fn default_wave_problem(big_k: usize, rho: f64) -> Result<WaveProblem> {
    let potential = PotentialSpec::new(&[
        (0, C64::new(0.5, 0.0)),
        (1, C64::new(0.2, 0.1)),
        (2, C64::new(0.1, -0.05)),
    ])?;
    let n = 2 * big_k;
    let mut u0 = vec![C64::new(0.0, 0.0); n];
    let mut v0 = vec![C64::new(0.0, 0.0); n];
    for j in -4i64..=4 {
        if j.unsigned_abs() as usize >= big_k {
            continue;
        }
        let slot = crate::wave::storage_index(j, big_k);
        let decay = 1.0 / (1.0 + (j * j) as f64);
        u0[slot] = C64::new(0.3 * decay, 0.1 * decay * j as f64);
        v0[slot] = C64::new(-0.05 * decay * j as f64, 0.2 * decay);
    }
    WaveProblem::new(big_k, rho, potential, u0, v0)
}

/// One per-step-size result of a wave run.
pub struct WaveRunEntry {
    pub h: f64,
    pub series: EnergySeries,
    pub rendered: Option<String>,
    pub out_path: Option<PathBuf>,
}

pub struct WaveArtifacts {
    pub certificate: crate::wave::RhoCertificate,
    pub runs: Vec<WaveRunEntry>,
    pub warnings: Vec<String>,
}

/// Run the Klein-Gordon pipeline: build the system, evaluate the threshold
/// certificate, and integrate once per requested step size.
pub fn run_wave(cfg: &WaveConfig) -> Result<WaveArtifacts> {
    if cfg.h_list.is_empty() {
        return Err(OscintError::InvalidInput("empty step-size list".into()));
    }
    let problem = match &cfg.problem {
        Some(src) => load_problem_source(src)?,
        None => match &cfg.potential {
            Some(pot_json) => {
                let entries: Vec<serde_json::Value> = serde_json::from_str(pot_json)?;
                let parsed: Result<Vec<(i64, C64)>> = entries
                    .iter()
                    .map(|e| {
                        let j = e["j"].as_i64().ok_or_else(|| {
                            OscintError::InvalidInput("potential entry without mode index j".into())
                        })?;
                        let re = e["re"].as_f64().unwrap_or(0.0);
                        let im = e["im"].as_f64().unwrap_or(0.0);
                        Ok((j, C64::new(re, im)))
                    })
                    .collect();
                let default = default_wave_problem(cfg.big_k, cfg.rho)?;
                WaveProblem::new(
                    cfg.big_k,
                    cfg.rho,
                    PotentialSpec::new(&parsed?)?,
                    default.u0,
                    default.v0,
                )?
            }
            None => default_wave_problem(cfg.big_k, cfg.rho)?,
        },
    };
    let filter = filter_by_name(&cfg.filter)?;
    let certificate = rho_certificate(&problem, &filter, cfg.c2_estimate)?;
    let (sys, s0) = build_system(&problem)?;

    let mut warnings = Vec::new();
    let mut runs = Vec::new();
    for (idx, &h) in cfg.h_list.iter().enumerate() {
        let icfg = IntegratorConfig::new(h, filter.clone())?;
        if icfg.advisory_large_step() {
            warnings.push(format!(
                "h = {h} exceeds 1; conservation-bound checks are advisory at this step size"
            ));
        }
        let record = RecordOptions { stride: cfg.stride };
        let RunResult { series, .. } =
            integrate(&sys, &Forcing::Linear, &icfg, &s0, cfg.steps, &record)?;
        let out_path = cfg
            .out_dir
            .as_ref()
            .map(|dir| dir.join(format!("wave_h{}.{}", idx, cfg.format.extension())));
        let rendered = emit_series(&series, out_path.as_deref(), cfg.format)?;
        runs.push(WaveRunEntry {
            h,
            series,
            rendered,
            out_path,
        });
    }
    Ok(WaveArtifacts {
        certificate,
        runs,
        warnings,
    })
}

/// Configuration of a sweep over random systems, filters and step sizes.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub systems: usize,
    pub dim: usize,
    pub omega_max: f64,
    pub coupling_norm: f64,
    pub filters: Vec<String>,
    pub h_list: Vec<f64>,
    pub steps: usize,
    pub stride: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: usize,
    pub out_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Aggregated result of one sweep entry.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub system: usize,
    pub filter: String,
    pub h: f64,
    pub steps: u64,
    pub max_abs_drift_energy: f64,
    pub max_abs_drift_modified: f64,
    pub max_step_defect_modified: f64,
    pub modified_scale: f64,
}

pub struct SweepArtifacts {
    pub rows: Vec<SweepRow>,
    pub seed: u64,
    pub seed_was_drawn: bool,
}

/// Run the sweep grid, optionally writing one series file per entry.
///
/// Entries run concurrently up to `jobs` worker threads; each entry owns its
/// output file and the summary is aggregated in deterministic grid order
/// after all entries complete.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepArtifacts> {
    if cfg.filters.is_empty() || cfg.h_list.is_empty() || cfg.systems == 0 {
        return Err(OscintError::InvalidInput(
            "sweep needs at least one system, one filter and one step size".into(),
        ));
    }
    let seed_was_drawn = cfg.seed.is_none();
    let seed = cfg.seed.unwrap_or_else(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0)
    });
    let filter_pairs: Vec<FilterPair> = cfg
        .filters
        .iter()
        .map(|n| filter_by_name(n))
        .collect::<Result<_>>()?;

    let mut systems = Vec::with_capacity(cfg.systems);
    let mut states = Vec::with_capacity(cfg.systems);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cfg.systems {
        let sys = random_system(
            cfg.dim,
            cfg.omega_max,
            cfg.coupling_norm,
            i % 2 == 1,
            &mut rng,
        )?;
        states.push(random_state(cfg.dim, &mut rng));
        systems.push(sys);
    }

    struct Job {
        index: usize,
        sys_idx: usize,
        filter_idx: usize,
        h: f64,
    }
    let mut jobs = VecDeque::new();
    let mut index = 0;
    for sys_idx in 0..cfg.systems {
        for filter_idx in 0..filter_pairs.len() {
            for &h in &cfg.h_list {
                jobs.push_back(Job {
                    index,
                    sys_idx,
                    filter_idx,
                    h,
                });
                index += 1;
            }
        }
    }
    let total = index;
    let queue = Mutex::new(jobs);
    let results: Mutex<Vec<Option<Result<SweepRow>>>> =
        Mutex::new((0..total).map(|_| None).collect());
    let workers = cfg.jobs.max(1).min(total.max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let job = {
                    let mut q = queue.lock().unwrap();
                    q.pop_front()
                };
                let Some(job) = job else { break };
                let outcome = (|| -> Result<SweepRow> {
                    let sys = &systems[job.sys_idx];
                    let fp = &filter_pairs[job.filter_idx];
                    let icfg = IntegratorConfig::new(job.h, fp.clone())?;
                    let record = RecordOptions { stride: cfg.stride };
                    let run = integrate(
                        sys,
                        &Forcing::Linear,
                        &icfg,
                        &states[job.sys_idx],
                        cfg.steps,
                        &record,
                    )?;
                    if let Some(dir) = &cfg.out_dir {
                        let path = dir.join(format!(
                            "sweep_s{}_{}_h{}.{}",
                            job.sys_idx,
                            fp.name,
                            cfg.h_list.iter().position(|&x| x == job.h).unwrap_or(0),
                            cfg.format.extension()
                        ));
                        emit_series(&run.series, Some(&path), cfg.format)?;
                    }
                    let s = &run.series.summary;
                    Ok(SweepRow {
                        system: job.sys_idx,
                        filter: fp.name.clone(),
                        h: job.h,
                        steps: s.steps,
                        max_abs_drift_energy: run.series.max_abs_drift_energy(),
                        max_abs_drift_modified: s.max_abs_drift_modified,
                        max_step_defect_modified: s.max_step_defect_modified,
                        modified_scale: s.modified_scale,
                    })
                })();
                results.lock().unwrap()[job.index] = Some(outcome);
            });
        }
    });

    let collected = results.into_inner().unwrap();
    let mut rows = Vec::with_capacity(total);
    for slot in collected {
        match slot {
            Some(Ok(row)) => rows.push(row),
            Some(Err(e)) => return Err(e),
            None => {
                return Err(OscintError::InvalidInput(
                    "sweep worker dropped a job".into(),
                ))
            }
        }
    }
    Ok(SweepArtifacts {
        rows,
        seed,
        seed_was_drawn,
    })
}

/// Configuration of an audit run over a system fixture or a wave problem.
#[derive(Clone, Debug)]
pub struct AuditConfig {
    /// System fixture (inline JSON or path). Ignored when `problem` is set.
    pub system: Option<String>,
    /// Wave problem (inline JSON or path); the initial state comes from the
    /// problem's own data.
    pub problem: Option<String>,
    pub filter: String,
    pub h: f64,
    pub steps: usize,
    pub stride: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Machine-readable audit entry.
#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct AuditReport {
    pub filter: String,
    pub h: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub advisory_large_step: bool,
    pub checks: Vec<CheckEntry>,
    pub hard_failure: bool,
}

const AUDIT_MOD_DRIFT_TOL: f64 = 1e-8;
const AUDIT_STEP_DEFECT_TOL: f64 = 1e-13;
const AUDIT_EXCHANGE_TOL: f64 = 1e-12;

/// Run a trajectory and bundle the conservation/closeness/drift audits into
/// one report. Inapplicable checks (gate refusals) are reported, not errors.
pub fn run_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    let (sys, embedded_state) = match (&cfg.problem, &cfg.system) {
        (Some(problem_src), _) => {
            let problem = load_problem_source(problem_src)?;
            let (sys, s0) = build_system(&problem)?;
            (sys, Some(s0))
        }
        (None, Some(system_src)) => load_system_source(system_src)?,
        (None, None) => {
            return Err(OscintError::InvalidInput(
                "audit needs --system or --problem".into(),
            ))
        }
    };
    let filter = filter_by_name(&cfg.filter)?;
    let (s0, drawn_seed, _warnings) = initial_state_for(&sys, embedded_state, cfg.seed);
    let icfg = IntegratorConfig::new(cfg.h, filter.clone())?;
    let record = RecordOptions { stride: cfg.stride };
    let run = integrate(&sys, &Forcing::Linear, &icfg, &s0, cfg.steps, &record)?;
    let series = &run.series;
    let summary = &series.summary;

    let mut checks = Vec::new();

    if filter.hl_compliant {
        let drift_ok = summary.max_abs_drift_modified
            <= AUDIT_MOD_DRIFT_TOL * summary.modified_scale.max(1e-300);
        checks.push(CheckEntry {
            name: "modified-energy-conservation".into(),
            applicable: true,
            satisfied: Some(drift_ok),
            worst_slack: Some(summary.max_abs_drift_modified),
            scale: Some(summary.modified_scale),
            detail: format!(
                "max |H_mod drift| = {:.3e} over {} steps (scale {:.3e})",
                summary.max_abs_drift_modified, summary.steps, summary.modified_scale
            ),
        });
        let defect_ok = summary.max_step_defect_modified
            <= AUDIT_STEP_DEFECT_TOL * summary.modified_scale.max(1e-300);
        checks.push(CheckEntry {
            name: "modified-energy-step-defect".into(),
            applicable: true,
            satisfied: Some(defect_ok),
            worst_slack: Some(summary.max_step_defect_modified),
            scale: Some(summary.modified_scale),
            detail: format!(
                "max per-step |ΔH_mod| = {:.3e}",
                summary.max_step_defect_modified
            ),
        });
        let exchange_ok =
            summary.max_exchange_defect <= AUDIT_EXCHANGE_TOL * summary.exchange_scale.max(1e-300);
        checks.push(CheckEntry {
            name: "exchange-identity".into(),
            applicable: true,
            satisfied: Some(exchange_ok),
            worst_slack: Some(summary.max_exchange_defect),
            scale: Some(summary.exchange_scale),
            detail: format!(
                "max per-step exchange defect = {:.3e}",
                summary.max_exchange_defect
            ),
        });
    } else {
        checks.push(CheckEntry {
            name: "modified-energy-conservation".into(),
            applicable: false,
            satisfied: None,
            worst_slack: None,
            scale: None,
            detail: format!(
                "not applicable (hypothesis unmet: '{}' is not compliant); observed max |H_mod drift| = {:.3e}, max |H drift| = {:.3e}",
                filter.name,
                summary.max_abs_drift_modified,
                series.max_abs_drift_energy()
            ),
        });
    }

    // closeness inequalities at the initial and final state
    {
        let mut worst_rel = f64::INFINITY;
        let mut worst_slack = 0.0;
        let mut worst_scale = 1.0;
        let mut all_ok = true;
        for state in [&s0, &run.final_state] {
            let rep = closeness_check(&sys, &filter, cfg.h, state)?;
            for ineq in [rep.oscillatory, rep.total] {
                let rel = if ineq.scale > 0.0 {
                    ineq.slack / ineq.scale
                } else {
                    ineq.slack
                };
                if rel < worst_rel {
                    worst_rel = rel;
                    worst_slack = ineq.slack;
                    worst_scale = ineq.scale;
                }
                all_ok &= ineq.satisfied;
            }
        }
        checks.push(CheckEntry {
            name: "closeness-bounds".into(),
            applicable: true,
            satisfied: Some(all_ok),
            worst_slack: Some(worst_slack),
            scale: Some(worst_scale),
            detail: "closeness inequalities at the initial and final state".into(),
        });
    }

    match drift_bound_check(&sys, &filter, cfg.h, series) {
        Ok(rep) => checks.push(CheckEntry {
            name: "drift-bound".into(),
            applicable: true,
            satisfied: Some(rep.satisfied),
            worst_slack: Some(rep.worst_slack),
            scale: Some(rep.worst_scale),
            detail: format!(
                "worst slack {:.3e} at step {}{}",
                rep.worst_slack,
                rep.worst_step,
                if rep.advisory_large_step {
                    " (advisory: h > 1)"
                } else {
                    ""
                }
            ),
        }),
        Err(OscintError::HypothesisUnmet(msg)) => checks.push(CheckEntry {
            name: "drift-bound".into(),
            applicable: false,
            satisfied: None,
            worst_slack: None,
            scale: None,
            detail: format!(
                "not applicable (hypothesis unmet): {msg}; observed max |H drift| = {:.3e}",
                series.max_abs_drift_energy()
            ),
        }),
        Err(e) => return Err(e),
    }

    match unconditional_bound_check(&sys, &filter, cfg.h, &s0, series) {
        Ok(rep) => checks.push(CheckEntry {
            name: "unconditional-ceiling".into(),
            applicable: true,
            satisfied: Some(rep.state_bound_satisfied && rep.drift_within_ceiling),
            worst_slack: Some(rep.worst_state_slack),
            scale: Some(rep.state_scale),
            detail: format!(
                "state bound |H_mod(0)| = {:.6e}, worst slack {:.3e}; drift ceiling {:.6e}, observed {:.3e}",
                rep.state_energy_bound,
                rep.worst_state_slack,
                rep.drift_ceiling,
                rep.max_abs_drift_energy
            ),
        }),
        Err(OscintError::FrequencyCondition(msg)) | Err(OscintError::HypothesisUnmet(msg)) => {
            checks.push(CheckEntry {
                name: "unconditional-ceiling".into(),
                applicable: false,
                satisfied: None,
                worst_slack: None,
                scale: None,
                detail: format!("refused: {msg}"),
            })
        }
        Err(e) => return Err(e),
    }

    let hard_failure = checks
        .iter()
        .any(|c| c.applicable && c.satisfied == Some(false));
    let report = AuditReport {
        filter: filter.name.clone(),
        h: cfg.h,
        steps: cfg.steps,
        seed: drawn_seed,
        advisory_large_step: icfg.advisory_large_step(),
        checks,
        hard_failure,
    };
    if let Some(path) = &cfg.out {
        fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

/// Catalog listing for the `filters` subcommand.
pub fn filter_table() -> Vec<(String, String, String, f64, f64, bool)> {
    filters::catalog()
        .into_iter()
        .map(|p| {
            (
                p.name.clone(),
                p.phi.label().to_string(),
                p.psi1.label().to_string(),
                p.c0,
                p.c1,
                p.hl_compliant,
            )
        })
        .collect()
}
