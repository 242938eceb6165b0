//! Scenario configs: one pulse, one parameter point or sweep, and a list of
//! analytic models compared against the numerical propagator.

use super::output::{write_file, Format};
use super::{unwrap_skipping, CliError, RunOptions};
use crate::asymptotics::{
    exponential_lifting, large_detuning_transfer, linear_lifting, small_detuning_transfer, universal_lifting_flagged,
};
use crate::lineshape::{composed_transfer, rosen_zener, trig_lineshape, ComposeOptions, LineshapePoint};
use crate::propagator::{
    adiabatic_trajectory, dynamical_phase, mixing_angle, propagate_with, state_to_adiabatic, PropagatorConfig,
    StateVector,
};
use crate::pulses::{pulse_area, rabi_at, ExpSign, PulseKind, PulseShape, SystemParams};
use crate::specfun::wrap_angle;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeName {
    PowerRise,
    PowerFall,
    ExponentialRise,
    ExponentialFall,
    Gaussian,
    Sech,
    TrigPower,
    LinearTruncated,
}

/// Pulse record. `t0_omega0` defaults to the scenario's; omitted support
/// ends take shape-specific defaults (cutoff `level` for smooth tails).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeConfig {
    pub kind: ShapeName,
    pub n: Option<u32>,
    pub t0_omega0: Option<f64>,
    pub tau_start: Option<f64>,
    pub tau_end: Option<f64>,
    pub level: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub t0_omega0: f64,
    pub t0_delta0: f64,
    /// Power of the rise; defaults to the shape's `n`, else 1.
    pub n: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    T0Delta0,
    T0Omega0,
    Tau,
}

impl SweepParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::T0Delta0 => "t0_delta0",
            SweepParameter::T0Omega0 => "t0_omega0",
            SweepParameter::Tau => "tau",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl SweepConfig {
    pub fn values(&self) -> Vec<f64> {
        let m = (self.points - 1) as f64;
        (0..self.points).map(|i| self.from + (self.to - self.from) * i as f64 / m).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    LinearExact,
    ExponentialExact,
    Universal,
    LargeDetuning,
    SmallDetuning,
    RosenZener,
    Trig,
    Composed,
}

impl ModelName {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::LinearExact => "linear_exact",
            ModelName::ExponentialExact => "exponential_exact",
            ModelName::Universal => "universal",
            ModelName::LargeDetuning => "large_detuning",
            ModelName::SmallDetuning => "small_detuning",
            ModelName::RosenZener => "rosen_zener",
            ModelName::Trig => "trig",
            ModelName::Composed => "composed",
        }
    }

    /// Full-pulse models compare bare amplitudes; the others compare
    /// adiabatic amplitudes after the lifting.
    fn is_bare(self) -> bool {
        matches!(self, ModelName::RosenZener | ModelName::Trig | ModelName::Composed)
    }

    fn accepts(self, shape: ShapeName, n: u32) -> bool {
        use ShapeName::*;
        match self {
            ModelName::LinearExact => shape == PowerRise && n == 1,
            ModelName::ExponentialExact => shape == ExponentialRise,
            ModelName::Universal | ModelName::LargeDetuning => shape == PowerRise,
            ModelName::SmallDetuning => matches!(shape, PowerRise | ExponentialRise | Gaussian),
            ModelName::RosenZener => shape == Sech,
            ModelName::Trig => shape == TrigPower,
            ModelName::Composed => matches!(shape, TrigPower | Sech | LinearTruncated),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub shape: ShapeConfig,
    pub params: ParamsConfig,
    pub sweep: Option<SweepConfig>,
    pub models: Vec<ModelName>,
    /// Report path without extension, relative to the output directory.
    pub output: Option<String>,
    /// Breach when a model's max |p+ error| exceeds this.
    pub threshold: Option<f64>,
}

impl Scenario {
    /// Parses and validates a TOML scenario; `origin` labels errors.
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, CliError> {
        let s: Scenario = toml::from_str(text).map_err(|e| CliError::config(origin, e.to_string().trim_end()))?;
        s.validate().map_err(|m| CliError::config(origin, m))?;
        Ok(s)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(&origin, e.to_string()))?;
        Self::from_toml(&text, &origin)
    }

    fn n(&self) -> u32 {
        self.params.n.or(self.shape.n).unwrap_or(1)
    }

    /// Checks the invariants that do not need any numerics.
    pub fn validate(&self) -> Result<(), String> {
        if self.name.trim().is_empty() {
            return Err("field `name`: must not be empty".into());
        }
        if self.models.is_empty() {
            return Err("field `models`: at least one model is required".into());
        }
        let n = self.n();
        if let (Some(a), Some(b)) = (self.params.n, self.shape.n) {
            if a != b {
                return Err(format!("field `params.n`: {a} disagrees with `shape.n` = {b}"));
            }
        }
        for m in &self.models {
            if !m.accepts(self.shape.kind, n) {
                return Err(format!("field `models`: {} does not apply to {:?} with n = {n}", m.as_str(), self.shape.kind));
            }
        }
        if self.models.iter().any(|m| m.is_bare()) != self.models.iter().all(|m| m.is_bare()) {
            return Err("field `models`: full-pulse and lifting models cannot be mixed".into());
        }
        if let Some(t) = self.threshold {
            if !(t.is_finite() && t >= 0.0) {
                return Err(format!("field `threshold`: must be finite and >= 0, got {t}"));
            }
        }
        if let Some(sw) = &self.sweep {
            if sw.points < 2 {
                return Err(format!("field `sweep.points`: must be at least 2, got {}", sw.points));
            }
            if !(sw.from.is_finite() && sw.to.is_finite()) {
                return Err("field `sweep.from`/`sweep.to`: must be finite".into());
            }
            if sw.parameter == SweepParameter::Tau && self.is_bare() {
                return Err("field `sweep.parameter`: full-pulse models have no tau history".into());
            }
        }
        // build the pulse once at the nominal point to surface shape errors early
        let shape = self.pulse(self.params.t0_omega0)?;
        if let Some(sw) = &self.sweep {
            if sw.parameter == SweepParameter::Tau {
                let (a, b) = shape.support();
                let (lo, hi) = (sw.from.min(sw.to), sw.from.max(sw.to));
                if lo < a || hi > b {
                    return Err(format!("field `sweep`: tau range [{lo}, {hi}] leaves the pulse support [{a}, {b}]"));
                }
            }
        }
        SystemParams::new(self.params.t0_omega0, self.params.t0_delta0, n).map_err(|e| format!("field `params`: {e}"))?;
        Ok(())
    }

    fn is_bare(&self) -> bool {
        self.models.iter().all(|m| m.is_bare())
    }

    /// The pulse at scenario amplitude `w0` (unless the shape pins its own).
    fn pulse(&self, w0: f64) -> Result<PulseShape, String> {
        let c = &self.shape;
        let w0 = c.t0_omega0.unwrap_or(w0);
        let n = self.n();
        let level = c.level.unwrap_or(crate::pulses::DEFAULT_CUTOFF_LEVEL);
        if !(level > 0.0 && level < w0) {
            return Err(format!("field `shape.level`: must lie in (0, t0_omega0), got {level}"));
        }
        let need = |v: Option<f64>, f: &str| v.ok_or_else(|| format!("field `shape.{f}`: required for {:?}", c.kind));
        let (kind, a, b) = match c.kind {
            ShapeName::PowerRise => (PulseKind::PowerRise(n), c.tau_start.unwrap_or(0.0), need(c.tau_end, "tau_end")?),
            ShapeName::PowerFall => (PulseKind::PowerFall(n), c.tau_start.unwrap_or(0.0), need(c.tau_end, "tau_end")?),
            ShapeName::ExponentialRise => {
                let b = need(c.tau_end, "tau_end")?;
                (PulseKind::Exponential(ExpSign::Rising), c.tau_start.unwrap_or((level / w0).ln().min(b)), b)
            }
            ShapeName::ExponentialFall => {
                let a = need(c.tau_start, "tau_start")?;
                (PulseKind::Exponential(ExpSign::Falling), a, c.tau_end.unwrap_or((w0 / level).ln().max(a)))
            }
            ShapeName::Gaussian => {
                let cut = (w0 / level).ln().max(0.0).sqrt();
                (PulseKind::Gaussian, c.tau_start.unwrap_or(-cut), c.tau_end.unwrap_or(cut))
            }
            ShapeName::Sech => {
                let b = c.tau_end.unwrap_or(12.0);
                (PulseKind::Sech, c.tau_start.unwrap_or(-b), b)
            }
            ShapeName::TrigPower => {
                let a = c.tau_start.unwrap_or(0.0);
                (PulseKind::TrigPower(n), a, c.tau_end.unwrap_or(a + PI))
            }
            ShapeName::LinearTruncated => {
                (PulseKind::LinearTruncated, need(c.tau_start, "tau_start")?, need(c.tau_end, "tau_end")?)
            }
        };
        PulseShape::new(kind, w0, a, b).map_err(|e| format!("field `shape`: {e}"))
    }
}

/// Magnitudes and phases of the two amplitudes compared in one row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Amplitudes {
    pub p_plus: f64,
    pub minus_abs: f64,
    pub minus_phase: f64,
    pub plus_abs: f64,
    pub plus_phase: f64,
}

impl Amplitudes {
    const MISSING: Amplitudes =
        Amplitudes { p_plus: f64::NAN, minus_abs: f64::NAN, minus_phase: f64::NAN, plus_abs: f64::NAN, plus_phase: f64::NAN };

    fn from_pair(m: C, p: C) -> Self {
        Amplitudes { p_plus: p.norm_sqr(), minus_abs: m.norm(), minus_phase: m.arg(), plus_abs: p.norm(), plus_phase: p.arg() }
    }

    fn population_only(p_plus: f64) -> Self {
        Amplitudes { p_plus, ..Self::MISSING }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowModel {
    pub model: ModelName,
    pub values: Amplitudes,
    /// |p+ model - p+ oracle|.
    pub abs_error: f64,
    pub rel_error: f64,
    /// Largest wrapped phase difference over the amplitudes whose magnitude
    /// reaches [`PHASE_FLOOR`] on both sides; NaN when none does.
    pub phase_error: f64,
    /// Regime warning raised by the model (numbers still reported).
    pub flag: Option<String>,
    /// Set when the model could not be evaluated at this row.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub index: usize,
    /// Sweep value; the nominal point is reported as NaN (null).
    pub value: f64,
    pub failed: bool,
    pub message: Option<String>,
    pub oracle: Amplitudes,
    pub models: Vec<RowModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSummary {
    pub model: ModelName,
    /// Max of `abs_error` over the rows where both sides evaluated.
    pub max_abs_error: f64,
    pub max_phase_error: f64,
    pub evaluated_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub scenario: String,
    /// "adiabatic" (A-, A+ after the lifting) or "bare" (B-, B+ after the pulse).
    pub frame: &'static str,
    pub sweep_parameter: Option<SweepParameter>,
    pub tol: f64,
    pub rows: Vec<ReportRow>,
    pub summary: Vec<ModelSummary>,
    /// Distinct "model: warning" strings raised anywhere in the sweep.
    pub regime_flags: Vec<String>,
    pub threshold: Option<f64>,
    pub threshold_breached: bool,
}

/// Phases of amplitudes smaller than this are not compared.
pub const PHASE_FLOOR: f64 = 1e-3;

struct Point {
    params: SystemParams,
    shape: PulseShape,
    tau: f64,
}

/// Runs a validated scenario. Numerical failures are confined to their rows.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ComparisonReport, CliError> {
    s.validate().map_err(|m| CliError::config(&s.name, m))?;
    let cfg = PropagatorConfig { tol: opts.tol, ..Default::default() };
    let n = s.n();
    let point = |sw: Option<(SweepParameter, f64)>| -> Result<Point, String> {
        let (mut w0, mut d) = (s.params.t0_omega0, s.params.t0_delta0);
        let mut tau = None;
        match sw {
            Some((SweepParameter::T0Delta0, v)) => d = v,
            Some((SweepParameter::T0Omega0, v)) => w0 = v,
            Some((SweepParameter::Tau, v)) => tau = Some(v),
            None => {}
        }
        let shape = s.pulse(w0)?;
        let params = SystemParams::new(w0, d, n).map_err(|e| e.to_string())?;
        Ok(Point { params, shape, tau: tau.unwrap_or(shape.tau_end) })
    };
    let values: Vec<Option<f64>> = match &s.sweep {
        Some(sw) => sw.values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let param = s.sweep.as_ref().map(|sw| sw.parameter);
    let bare = s.is_bare();

    let oracles: Vec<Result<Amplitudes, String>> = if param == Some(SweepParameter::Tau) {
        let taus: Vec<f64> = values.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        let p = point(None).map_err(|m| CliError::config(&s.name, m))?;
        let traj = adiabatic_trajectory(&p.params, &p.shape, p.shape.tau_start, StateVector::ground(), &taus, &cfg);
        match traj {
            Ok(t) => t
                .iter()
                .map(|x| {
                    let mut a = Amplitudes::from_pair(x.a_minus, x.a_plus);
                    a.minus_phase = x.phase_minus;
                    a.plus_phase = x.phase_plus;
                    Ok(a)
                })
                .collect(),
            Err(e) => vec![Err(e.to_string()); taus.len()],
        }
    } else {
        let mut o: Vec<Result<Amplitudes, String>> = opts.install(|| {
            values
                .par_iter()
                .map(|v| {
                    let p = point(v.map(|x| (param.unwrap(), x)))?;
                    oracle(&p, bare, &cfg).map_err(|e| e.to_string())
                })
                .collect()
        });
        let mut mp: Vec<f64> = o.iter().map(|r| r.as_ref().map_or(f64::NAN, |a| a.minus_phase)).collect();
        let mut pp: Vec<f64> = o.iter().map(|r| r.as_ref().map_or(f64::NAN, |a| a.plus_phase)).collect();
        unwrap_skipping(&mut mp);
        unwrap_skipping(&mut pp);
        for (i, r) in o.iter_mut().enumerate() {
            if let Ok(a) = r {
                a.minus_phase = mp[i];
                a.plus_phase = pp[i];
            }
        }
        o
    };

    let rows: Vec<ReportRow> = opts.install(|| {
        values
            .par_iter()
            .zip(oracles.par_iter())
            .enumerate()
            .map(|(index, (v, o))| {
                let value = v.unwrap_or(f64::NAN);
                let p = match point(v.map(|x| (param.unwrap(), x))) {
                    Ok(p) => p,
                    Err(m) => return failed_row(index, value, m, &s.models),
                };
                let oracle = match o {
                    Ok(a) => *a,
                    Err(m) => return failed_row(index, value, m.clone(), &s.models),
                };
                let models = s.models.iter().map(|&m| compare(m, &p, &oracle)).collect();
                ReportRow { index, value, failed: false, message: None, oracle, models }
            })
            .collect()
    });

    let summary: Vec<ModelSummary> = s
        .models
        .iter()
        .enumerate()
        .map(|(k, &model)| {
            let ok: Vec<&RowModel> = rows.iter().filter(|r| !r.failed).map(|r| &r.models[k]).filter(|m| m.error.is_none()).collect();
            ModelSummary {
                model,
                max_abs_error: ok.iter().map(|m| m.abs_error).fold(f64::NAN, f64::max),
                max_phase_error: ok.iter().map(|m| m.phase_error).fold(f64::NAN, f64::max),
                evaluated_rows: ok.len(),
            }
        })
        .collect();
    let mut regime_flags: Vec<String> = Vec::new();
    for r in &rows {
        for m in &r.models {
            if let Some(f) = &m.flag {
                let f = format!("{}: {f}", m.model.as_str());
                if !regime_flags.contains(&f) {
                    regime_flags.push(f);
                }
            }
        }
    }
    let threshold_breached = s.threshold.is_some_and(|t| summary.iter().any(|m| m.max_abs_error > t));
    Ok(ComparisonReport {
        scenario: s.name.clone(),
        frame: if bare { "bare" } else { "adiabatic" },
        sweep_parameter: param,
        tol: opts.tol,
        rows,
        summary,
        regime_flags,
        threshold: s.threshold,
        threshold_breached,
    })
}

fn failed_row(index: usize, value: f64, message: String, models: &[ModelName]) -> ReportRow {
    let models = models
        .iter()
        .map(|&model| RowModel {
            model,
            values: Amplitudes::MISSING,
            abs_error: f64::NAN,
            rel_error: f64::NAN,
            phase_error: f64::NAN,
            flag: None,
            error: None,
        })
        .collect();
    ReportRow { index, value, failed: true, message: Some(message), oracle: Amplitudes::MISSING, models }
}

fn oracle(p: &Point, bare: bool, cfg: &PropagatorConfig) -> crate::Result<Amplitudes> {
    let (a, b) = p.shape.support();
    let end = if bare { b } else { p.tau };
    let u = propagate_with(&p.params, &p.shape, a, end, cfg)?;
    let s = StateVector { b_minus: u.u11, b_plus: -u.u12.conj() };
    if bare {
        return Ok(Amplitudes::from_pair(s.b_minus, s.b_plus));
    }
    let w = rabi_at(&p.shape, end);
    let theta = if w == 0.0 && p.params.t0_delta0 == 0.0 { 0.0 } else { mixing_angle(w, p.params.t0_delta0)? };
    let x = state_to_adiabatic(&s, theta);
    Ok(Amplitudes::from_pair(x.b_minus, x.b_plus))
}

/// Model prediction at one point: amplitudes (or just p+) and a regime flag.
fn evaluate(m: ModelName, p: &Point) -> crate::Result<(Amplitudes, Option<String>)> {
    let (w0, d, n) = (p.params.t0_omega0, p.params.t0_delta0, p.params.n);
    let start = p.shape.tau_start;
    let pair = |(a, b): (C, C)| Amplitudes::from_pair(a, b);
    Ok(match m {
        ModelName::LinearExact => {
            let l = linear_lifting(p.params.omega())?;
            (pair(l.amplitudes(dynamical_phase(&p.params, &p.shape, start, p.tau)?)), l.warning)
        }
        ModelName::Universal => {
            let l = universal_lifting_flagged(n, d, w0)?;
            (pair(l.amplitudes(dynamical_phase(&p.params, &p.shape, start, p.tau)?)), l.warning)
        }
        ModelName::ExponentialExact => {
            let zeta = 0.5 * w0 * p.tau.exp();
            let l = exponential_lifting(d, zeta, w0 * start.exp())?;
            (pair(l.amplitudes(zeta)), l.warning)
        }
        ModelName::LargeDetuning => {
            let j = large_detuning_transfer(n, p.params.alpha_n())?;
            let eta = dynamical_phase(&p.params, &p.shape, start, p.tau)?;
            (pair((C::from_polar(1.0, eta), j.j_n * C::from_polar(1.0, -eta))), None)
        }
        ModelName::SmallDetuning => {
            let r = small_detuning_transfer(p.shape.kind, d, w0)?;
            let zeta = 0.5 * pulse_area(&p.shape, start, p.tau)?;
            let a = match r.amplitudes(zeta) {
                Some(pm) => Amplitudes { p_plus: r.p_plus, ..pair(pm) },
                None => Amplitudes::population_only(r.p_plus),
            };
            (a, r.warning)
        }
        ModelName::RosenZener => {
            let l = rosen_zener(w0, d);
            (lineshape(&l), l.warning)
        }
        ModelName::Trig => {
            let l = trig_lineshape(n, w0, d)?;
            (lineshape(&l), l.warning)
        }
        ModelName::Composed => {
            let l = composed_transfer(&p.params, &p.shape, &ComposeOptions::default())?;
            (lineshape(&l), l.warning)
        }
    })
}

/// B- phase is withheld when the model marks it approximate.
fn lineshape(l: &LineshapePoint) -> Amplitudes {
    let mut a = Amplitudes::from_pair(l.b_minus, l.b_plus);
    if !l.b_minus_phase_exact {
        a.minus_phase = f64::NAN;
    }
    a
}

fn compare(model: ModelName, p: &Point, o: &Amplitudes) -> RowModel {
    match evaluate(model, p) {
        Ok((mut v, flag)) => {
            let abs_error = (v.p_plus - o.p_plus).abs();
            let de = [v.minus_phase - o.minus_phase, v.plus_phase - o.plus_phase].map(wrap_angle);
            // report model phases on the oracle's branch
            v.minus_phase = o.minus_phase + de[0];
            v.plus_phase = o.plus_phase + de[1];
            let resolved = [o.minus_abs.min(v.minus_abs), o.plus_abs.min(v.plus_abs)].map(|m| m >= PHASE_FLOOR);
            RowModel {
                model,
                values: v,
                abs_error,
                rel_error: abs_error / o.p_plus.abs(),
                phase_error: de.iter().zip(resolved).filter(|(_, r)| *r).map(|(d, _)| d.abs()).fold(f64::NAN, f64::max),
                flag,
                error: None,
            }
        }
        Err(e) => RowModel {
            model,
            values: Amplitudes::MISSING,
            abs_error: f64::NAN,
            rel_error: f64::NAN,
            phase_error: f64::NAN,
            flag: None,
            error: Some(e.to_string()),
        },
    }
}

impl ComparisonReport {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.failed)
    }

    /// Column names of the rows CSV.
    pub fn row_columns(&self) -> Vec<String> {
        let mut c = vec!["index".to_string(), self.sweep_parameter.map_or("point", |p| p.as_str()).to_string()];
        c.push("status".into());
        let fields = ["p_plus", "minus_abs", "minus_phase", "plus_abs", "plus_phase"];
        c.extend(fields.iter().map(|f| format!("oracle_{f}")));
        for m in &self.summary {
            let m = m.model.as_str();
            c.extend(fields.iter().chain(&["abs_err", "rel_err", "phase_err"]).map(|f| format!("{m}_{f}")));
        }
        c.push("flags".into());
        c
    }

    pub fn rows_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(self.row_columns());
        let amp = |a: &Amplitudes| [a.p_plus, a.minus_abs, a.minus_phase, a.plus_abs, a.plus_phase];
        for r in &self.rows {
            let mut rec = vec![r.index.to_string(), r.value.to_string(), if r.failed { "failed" } else { "ok" }.into()];
            rec.extend(amp(&r.oracle).iter().map(|v| v.to_string()));
            let mut flags: Vec<String> = r.message.iter().cloned().collect();
            for m in &r.models {
                rec.extend(amp(&m.values).iter().chain(&[m.abs_error, m.rel_error, m.phase_error]).map(|v| v.to_string()));
                flags.extend(m.flag.iter().chain(&m.error).map(|f| format!("{}: {f}", m.model.as_str())));
            }
            rec.push(flags.join("; "));
            let _ = w.write_record(rec);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }

    pub fn summary_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(["model", "max_abs_error", "max_phase_error", "evaluated_rows"]);
        for m in &self.summary {
            let _ = w.write_record([
                m.model.as_str().to_string(),
                m.max_abs_error.to_string(),
                m.max_phase_error.to_string(),
                m.evaluated_rows.to_string(),
            ]);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default() + "\n"
    }

    /// Writes `<stem>.csv` plus `<stem>_summary.csv`, or `<stem>.json`.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<Vec<PathBuf>, CliError> {
        match format {
            Format::Csv => Ok(vec![
                write_file(dir, &format!("{stem}.csv"), &self.rows_csv())?,
                write_file(dir, &format!("{stem}_summary.csv"), &self.summary_csv())?,
            ]),
            Format::Json => Ok(vec![write_file(dir, &format!("{stem}.json"), &self.to_json())?]),
        }
    }
}
