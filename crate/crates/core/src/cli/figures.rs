//! Built-in datasets, one table per curve. Sweeps that compare numerics with
//! formulas go through [`run_scenario`] so figures and scenarios agree.

use super::output::Table;
use super::scenario::{run_scenario, ComparisonReport, ModelName, ParamsConfig, Scenario, ShapeConfig, ShapeName};
use super::scenario::{SweepConfig, SweepParameter};
use super::{unwrap_skipping, CliError, RunOptions};
use crate::asymptotics::{gaussian_g, linear_lifting};
use crate::lineshape::{eigenenergy_surface, half_scrap, Sequence};
use crate::propagator::{adiabatic_trajectory, PropagatorConfig, StateVector};
use crate::pulses::{PulseShape, SystemParams};
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, LN_10};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    FigLiftall,
}

pub const FIGURE_IDS: [FigureId; 12] = [
    FigureId::Fig1,
    FigureId::Fig2,
    FigureId::Fig3,
    FigureId::Fig4,
    FigureId::Fig5,
    FigureId::Fig6,
    FigureId::Fig7,
    FigureId::Fig8,
    FigureId::Fig9,
    FigureId::Fig10,
    FigureId::Fig11,
    FigureId::FigLiftall,
];

impl FigureId {
    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
            FigureId::Fig11 => "fig11",
            FigureId::FigLiftall => "figliftall",
        }
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FIGURE_IDS
            .iter()
            .find(|f| f.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1..fig11 or figliftall)"))
    }
}

/// Builds every curve of a figure.
pub fn reproduce_figure(id: FigureId, opts: &RunOptions) -> Result<Vec<Table>, CliError> {
    match id {
        FigureId::Fig1 => fig1(opts),
        FigureId::Fig2 => {
            let s = scenario("fig2", power(1, 1.0), 100.0, 5.0, Some(sweep(SweepParameter::Tau, 0.0, 1.0, 201)));
            report_tables("fig2", &run_scenario(&with_models(s, &[ModelName::LinearExact]), opts)?)
        }
        FigureId::Fig3 => fig3(),
        FigureId::Fig4 => {
            let shape = ShapeConfig { tau_end: Some(LN_10), ..shape(ShapeName::ExponentialRise) };
            let s = scenario("fig4", shape, 100.0, 0.4, Some(sweep(SweepParameter::Tau, -8.0, LN_10, 401)));
            report_tables("fig4", &run_scenario(&with_models(s, &[ModelName::ExponentialExact]), opts)?)
        }
        FigureId::Fig5 => detuning_figure("fig5", 2, 3.0, opts),
        FigureId::Fig6 => detuning_figure("fig6", 3, 2.5, opts),
        FigureId::Fig7 => fig7(),
        FigureId::Fig8 => lineshape_figure("fig8", 1, FRAC_PI_2, opts),
        FigureId::Fig9 => lineshape_figure("fig9", 2, 2.0, opts),
        FigureId::Fig10 => lineshape_figure("fig10", 2, 6.0, opts),
        FigureId::Fig11 => Ok(vec![fig11()]),
        FigureId::FigLiftall => liftall(opts),
    }
}

fn shape(kind: ShapeName) -> ShapeConfig {
    ShapeConfig { kind, n: None, t0_omega0: None, tau_start: None, tau_end: None, level: None }
}

fn power(n: u32, tau_end: f64) -> ShapeConfig {
    ShapeConfig { n: Some(n), tau_end: Some(tau_end), ..shape(ShapeName::PowerRise) }
}

fn sweep(parameter: SweepParameter, from: f64, to: f64, points: usize) -> SweepConfig {
    SweepConfig { parameter, from, to, points }
}

fn scenario(name: &str, shape: ShapeConfig, w0: f64, d: f64, sweep: Option<SweepConfig>) -> Scenario {
    Scenario {
        name: name.into(),
        shape,
        params: ParamsConfig { t0_omega0: w0, t0_delta0: d, n: None },
        sweep,
        models: Vec::new(),
        output: None,
        threshold: None,
    }
}

fn with_models(mut s: Scenario, models: &[ModelName]) -> Scenario {
    s.models = models.to_vec();
    s
}

const AMPLITUDE_COLUMNS: [&str; 5] = ["p_plus", "minus_abs", "minus_phase", "plus_abs", "plus_phase"];

/// `<prefix>_numeric` from the oracle and `<prefix>_<model>` per model.
fn report_tables(prefix: &str, r: &ComparisonReport) -> Result<Vec<Table>, CliError> {
    let x = r.sweep_parameter.map_or("point", |p| p.as_str());
    let mut cols = vec![x];
    cols.extend(AMPLITUDE_COLUMNS);
    let mut numeric = Table::new(format!("{prefix}_numeric"), &cols);
    for row in &r.rows {
        let o = &row.oracle;
        numeric.push(vec![row.value, o.p_plus, o.minus_abs, o.minus_phase, o.plus_abs, o.plus_phase]);
    }
    let mut out = vec![numeric];
    let mut mcols = cols.clone();
    mcols.extend(["abs_err", "phase_err"]);
    for (k, m) in r.summary.iter().enumerate() {
        let mut t = Table::new(format!("{prefix}_{}", m.model.as_str()), &mcols);
        for row in &r.rows {
            let v = &row.models[k];
            let a = &v.values;
            t.push(vec![row.value, a.p_plus, a.minus_abs, a.minus_phase, a.plus_abs, a.plus_phase, v.abs_error, v.phase_error]);
        }
        out.push(t);
    }
    Ok(out)
}

/// |A+|^2 histories for linear, quadratic and quartic rising.
fn fig1(opts: &RunOptions) -> Result<Vec<Table>, CliError> {
    let w0 = 100.0;
    let cfg = PropagatorConfig { tol: opts.tol, ..Default::default() };
    let cases: Vec<(u32, f64, f64)> = [(1u32, 3.0), (2, 2.0), (4, 1.5)]
        .iter()
        .flat_map(|&(n, tmax)| [2.0, 5.0, 10.0, 20.0].map(|d| (n, tmax, d)))
        .collect();
    let tables: Vec<crate::Result<Table>> = opts.install(|| {
        cases
            .par_iter()
            .map(|&(n, tmax, d)| {
                let shape = PulseShape::power_rise(n, w0, tmax)?;
                let params = SystemParams::new(w0, d, n)?;
                let taus: Vec<f64> = (0..=300).map(|i| tmax * i as f64 / 300.0).collect();
                let traj = adiabatic_trajectory(&params, &shape, 0.0, StateVector::ground(), &taus, &cfg)?;
                let mut t = Table::new(format!("fig1_n{n}_d{d}"), &["tau", "p_plus", "plus_abs", "plus_phase"]);
                for s in traj {
                    t.push(vec![s.tau, s.a_plus.norm_sqr(), s.a_plus.norm(), s.phase_plus]);
                }
                Ok(t)
            })
            .collect()
    });
    Ok(tables.into_iter().collect::<crate::Result<_>>()?)
}

fn fig3() -> Result<Vec<Table>, CliError> {
    let mut t = Table::new("fig3", &["omega", "p_plus", "chi_minus", "chi_plus"]);
    for i in 0..=300 {
        let w = 0.01 * i as f64;
        let l = linear_lifting(w)?;
        t.push(vec![w, l.p_plus, l.chi_minus, l.chi_plus]);
    }
    for c in [2, 3] {
        let mut col: Vec<f64> = t.rows.iter().map(|r| r[c]).collect();
        unwrap_skipping(&mut col);
        for (r, v) in t.rows.iter_mut().zip(col) {
            r[c] = v;
        }
    }
    Ok(vec![t])
}

/// Asymptotic P+ and phases against T0*Delta0 for T0*Omega0 = 100.
fn detuning_figure(prefix: &str, n: u32, tau: f64, opts: &RunOptions) -> Result<Vec<Table>, CliError> {
    let s = scenario(prefix, power(n, tau), 100.0, 0.0, Some(sweep(SweepParameter::T0Delta0, 0.0, 20.0, 201)));
    let models = [ModelName::LargeDetuning, ModelName::SmallDetuning, ModelName::Universal];
    report_tables(prefix, &run_scenario(&with_models(s, &models), opts)?)
}

fn fig7() -> Result<Vec<Table>, CliError> {
    let mut t = Table::new("fig7", &["x", "G"]);
    for i in 0..=400 {
        let x = 0.025 * i as f64;
        t.push(vec![x, gaussian_g(x)?]);
    }
    Ok(vec![t])
}

/// Trig-pulse lineshape |B+|^2 and phases against T0*Delta0.
fn lineshape_figure(prefix: &str, n: u32, w0: f64, opts: &RunOptions) -> Result<Vec<Table>, CliError> {
    let shape = ShapeConfig { n: Some(n), ..shape(ShapeName::TrigPower) };
    let s = scenario(prefix, shape, w0, 0.0, Some(sweep(SweepParameter::T0Delta0, 0.0, 10.0, 201)));
    report_tables(prefix, &run_scenario(&with_models(s, &[ModelName::Trig]), opts)?)
}

fn fig11() -> Table {
    let mut t = Table::new("fig11", &["t0_omega", "t0_delta", "lambda_minus", "lambda_plus"]);
    for i in 0..=40 {
        for j in 0..=40 {
            let (w, d) = (0.25 * i as f64, 0.25 * j as f64);
            let (lm, lp) = eigenenergy_surface(w, d);
            t.push(vec![w, d, lm, lp]);
        }
    }
    t
}

/// Half-SCRAP transfers: power rising (n = 2, 4), Gaussian and exponential.
fn liftall(opts: &RunOptions) -> Result<Vec<Table>, CliError> {
    let dsweep = || Some(sweep(SweepParameter::T0Delta0, 0.0, 20.0, 201));
    let mut out = Vec::new();
    for n in [2u32, 4] {
        for w0 in [1000.0f64, 100.0, 10.0] {
            let tau = (1000.0 / w0).powf(1.0 / n as f64);
            let name = format!("figliftall_n{n}_w{w0}");
            let s = scenario(&name, power(n, tau), w0, 0.0, dsweep());
            out.extend(report_tables(&name, &run_scenario(&with_models(s, &[ModelName::Universal]), opts)?)?);
        }
    }
    let ds: Vec<f64> = (0..=200).map(|i| 0.1 * i as f64).collect();
    for w0 in [1000.0f64, 100.0, 10.0] {
        let gauss = PulseShape::gaussian(w0, crate::pulses::DEFAULT_CUTOFF_LEVEL)?;
        let ps: Vec<crate::Result<f64>> = opts.install(|| {
            ds.par_iter()
                .map(|&d| Ok(half_scrap(Sequence::StarkPump, &gauss, w0, d, opts.tol)?.p_plus_final))
                .collect()
        });
        let mut t = Table::new(format!("figliftall_gaussian_w{w0}_numeric"), &["t0_delta0", "p_plus"]);
        for (d, p) in ds.iter().zip(ps) {
            t.push(vec![*d, p?]);
        }
        out.push(t);
    }
    let shape = ShapeConfig { tau_end: Some(LN_10), ..shape(ShapeName::ExponentialRise) };
    let s = scenario("figliftall_exponential", shape, 100.0, 0.0, dsweep());
    out.extend(report_tables(
        "figliftall_exponential",
        &run_scenario(&with_models(s, &[ModelName::ExponentialExact]), opts)?,
    )?);
    Ok(out)
}
