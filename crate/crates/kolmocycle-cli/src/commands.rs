use std::time::Instant;

use kolmocycle::flow::{equilibrium_first_quadrant, EquilibriumReport, LimitCycle, PolycycleFlow};
use kolmocycle::invariants::{
    d3, independence_jacobian, invariant_report, zero_threshold, CheckedSystem, HyperbolicityRatios, InvariantReport,
    LowerBoundEvidence, TestFunction, TestValues,
};
use kolmocycle::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::config::{build_family, RunConfig, SweepSpec, SystemSpec, Window};
use crate::error::CliError;

/// Serializes through `serde_json::Value`, whose maps keep keys sorted.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v: Value = serde_json::to_value(value).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    s
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesesOutcome {
    pub satisfied: bool,
    pub lambdas: HyperbolicityRatios,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub config: RunConfig,
    pub hypotheses: HypothesesOutcome,
    pub invariants: InvariantReport,
    pub equilibrium: Option<EquilibriumReport>,
    pub limit_cycles: Option<Vec<LimitCycle>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

/// `d1` and `d2` (and `d3` when the cascade reaches it) both vanish and the pole guard
/// blocked `d3`.
fn needs_blocked_d3(values: &TestValues, lam: HyperbolicityRatios, tol_zero: f64) -> bool {
    let t = zero_threshold(lam, tol_zero);
    values.pole_guard_fired && values.d1.abs() <= t && values.d2.abs() <= t
}

/// Gradient rank of the leading test functions in the family parameters, with a displacement
/// sample at `s = 1e-2`. `None` for raw systems or when either piece fails.
fn lower_bound_evidence(cfg: &RunConfig, sys: &CheckedSystem, values: &TestValues) -> Option<LowerBoundEvidence> {
    let SystemSpec::Family { family, .. } = &cfg.system else {
        return None;
    };
    let mu = cfg.family_vector()?;
    let mut which = vec![TestFunction::D1, TestFunction::D2];
    if values.d3.is_some() {
        which.push(TestFunction::D3);
    }
    let ind = independence_jacobian(|m| build_family(family, m), &mu, &which, &cfg.tolerances).ok()?;
    let witness = PolycycleFlow::new(sys, cfg.tolerances.ode).and_then(|f| f.displacement(1e-2)).ok()?;
    Some(LowerBoundEvidence { gradient_rank: ind.rank, displacement_witness: witness.value })
}

pub fn analyze(cfg: &RunConfig, timing: bool) -> Result<String, CliError> {
    let start = Instant::now();
    let sys = CheckedSystem::new(cfg.build()?)?;
    let tol = &cfg.tolerances;
    let values = TestValues::compute(&sys, tol)?;
    if needs_blocked_d3(&values, sys.lambdas(), tol.zero) {
        return Err(match d3(&sys, tol) {
            Err(e @ Error::MellinPole { .. }) => CliError::Pole(e),
            Err(e) => e.into(),
            Ok(_) => CliError::Numeric(Error::Domain("pole guard fired for d3 only once".into())),
        });
    }
    let evidence = lower_bound_evidence(cfg, &sys, &values);
    let (invariants, _) = invariant_report(&sys, tol, evidence)?;
    let equilibrium = equilibrium_first_quadrant(sys.system()).ok();
    let limit_cycles = if cfg.analysis.with_cycles { Some(cycles_for(cfg, &sys)?) } else { None };
    let report = AnalysisReport {
        config: cfg.clone(),
        hypotheses: HypothesesOutcome { satisfied: true, lambdas: sys.lambdas() },
        invariants,
        equilibrium,
        limit_cycles,
        wall_time_seconds: timing.then(|| start.elapsed().as_secs_f64()),
    };
    Ok(to_sorted_json(&report))
}

/// CSV with columns `s, D, est_error`, one row per log-spaced sample.
pub fn displacement(cfg: &RunConfig) -> Result<String, CliError> {
    let sys = CheckedSystem::new(cfg.build()?)?;
    let window = cfg.window(Window::DISPLACEMENT)?;
    let flow = PolycycleFlow::new(&sys, cfg.tolerances.ode)?;
    let rows: Vec<_> = window.points().par_iter().map(|&x| flow.displacement_log(x)).collect::<Result<_, _>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["s", "D", "est_error"]).map_err(io)?;
    for d in rows {
        w.write_record([sci(d.s), sci(d.value), sci(d.est_error)]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is ascii"))
}

pub fn cycles_for(cfg: &RunConfig, sys: &CheckedSystem) -> Result<Vec<LimitCycle>, CliError> {
    let w = cfg.window(Window::CYCLES)?;
    Ok(PolycycleFlow::new(sys, cfg.tolerances.ode)?.find_limit_cycles(w.ln_s_min, w.ln_s_max, w.grid_n)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclesReport {
    pub window: Window,
    pub count: usize,
    pub cycles: Vec<LimitCycle>,
}

pub fn cycles(cfg: &RunConfig) -> Result<String, CliError> {
    let sys = CheckedSystem::new(cfg.build()?)?;
    let cycles = cycles_for(cfg, &sys)?;
    let report = CyclesReport { window: cfg.window(Window::CYCLES)?, count: cycles.len(), cycles };
    Ok(to_sorted_json(&report))
}

/// One sweep row; any failure lands in `error` and leaves the later columns empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub d3: Option<f64>,
    pub stability: Option<String>,
    pub upper_bound: Option<String>,
    pub identity_suspected: Option<bool>,
    pub cycle_count: Option<usize>,
    pub error: Option<String>,
}

fn sweep_point(cfg: &RunConfig, key: &str, value: f64) -> SweepRow {
    let mut row = SweepRow { value, ..Default::default() };
    let point = match cfg.with_param(key, value) {
        Ok(c) => c,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let sys = match point.build().and_then(CheckedSystem::new) {
        Ok(s) => s,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let (report, values) = match invariant_report(&sys, &point.tolerances, None) {
        Ok(r) => r,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.d1 = Some(values.d1);
    row.d2 = Some(values.d2);
    row.d3 = values.d3;
    row.stability = Some(serde_json::to_value(report.stability).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
    row.upper_bound = Some(report.verdict.upper_bound.map_or("none".into(), |b| b.to_string()));
    row.identity_suspected = Some(report.verdict.identity_suspected);
    if needs_blocked_d3(&values, sys.lambdas(), point.tolerances.zero) {
        row.error = values.d3_unavailable.clone();
    }
    match cycles_for(&point, &sys) {
        Ok(c) => row.cycle_count = Some(c.len()),
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

pub fn sweep_values(spec: &SweepSpec) -> Result<Vec<f64>, CliError> {
    if spec.steps == 0 || !spec.from.is_finite() || !spec.to.is_finite() {
        return Err(CliError::Parse("sweep needs finite from/to and at least one step".into()));
    }
    if spec.steps == 1 {
        return Ok(vec![spec.from]);
    }
    Ok((0..spec.steps).map(|k| spec.from + (spec.to - spec.from) * k as f64 / (spec.steps - 1) as f64).collect())
}

pub fn sweep_rows(cfg: &RunConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    cfg.with_param(&spec.param, 0.0)?;
    let values = sweep_values(spec)?;
    Ok(values.par_iter().map(|&v| sweep_point(cfg, &spec.param, v)).collect())
}

/// CSV with one row per parameter value, in sweep order.
pub fn sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = cfg.analysis.sweep.as_ref().ok_or_else(|| CliError::Parse("sweep needs --param/--from/--to/--steps or analysis.sweep".into()))?;
    let rows = sweep_rows(cfg, spec)?;
    let opt = |v: Option<f64>| v.map(sci).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record([spec.param.as_str(), "d1", "d2", "d3", "stability", "upper_bound", "identity_suspected", "cycle_count", "error"])
        .map_err(io)?;
    for r in rows {
        w.write_record([
            sci(r.value),
            opt(r.d1),
            opt(r.d2),
            opt(r.d3),
            r.stability.unwrap_or_default(),
            r.upper_bound.unwrap_or_default(),
            r.identity_suspected.map(|b| b.to_string()).unwrap_or_default(),
            r.cycle_count.map(|c| c.to_string()).unwrap_or_default(),
            r.error.unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is ascii"))
}
