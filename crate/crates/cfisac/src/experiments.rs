//! Validation runs, figure sweeps and single-realization optimization
//! reports, with CSV output.
//!
//! Every figure is a list of [`CsvRow`]s with the columns
//! `sweep_variable, sweep_value, scheme, statistic, value, stderr`. SINRs are
//! written in dB, probabilities and savings as fractions, powers in watts.
//! Secondary sweep parameters (jamming budget, monitor radius, …) are encoded
//! in the `scheme` label, e.g. `opa@P_pm=1W`.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::experiments::{figure, FigureOptions};
//! use cfisac::scenario::SystemParams;
//!
//! let opts = FigureOptions { realizations: 4, ..FigureOptions::default() };
//! let rows = figure("fig5", &SystemParams::reduced(), &opts).unwrap();
//! assert!(rows.iter().any(|r| r.statistic == "sdp"));
//! ```

use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{
    mean_stderr, msp, operational_lifetime, proportion_stderr, sdp, EmpiricalCdf, EnsembleRecord, MetricsError,
};
use crate::montecarlo::{run, McConfig, Receiver, SpoofingModel};
use crate::optimizer::{solve_p1, solve_p2, Status, DEFAULT_TOL};
use crate::scenario::{realization_rng, ParamError, SystemParams};
use crate::sinr::{
    from_db, q_coefficients, sinr_cpu, sinr_monitor, sinr_monitor_with, sinr_ue, to_db, BuModel, Instance,
    PowerAllocation, QCoefficients, SinrBreakdown,
};

/// Figure names accepted by [`figure`].
pub const FIGURES: [&str; 7] = ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"];

/// Detection threshold used by the SDP-versus-N_pm and SDP-versus-(h, r) sweeps (dB).
pub const DEFAULT_KAPPA_DB: f64 = 8.0;

/// Monitor antenna counts of the N_pm sweeps.
pub const N_PM_SWEEP: [usize; 4] = [4, 8, 16, 32];

/// Errors of the experiment layer.
#[derive(Debug, Error)]
pub enum ExperimentError {
    /// Bad configuration.
    #[error(transparent)]
    Param(#[from] ParamError),
    /// Statistics on an empty set or bad argument.
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    /// CSV encoding/decoding failure.
    #[error("csv error")]
    Csv(#[from] csv::Error),
    /// File-system failure.
    #[error("i/o error")]
    Io(#[from] std::io::Error),
    /// Unknown figure name.
    #[error("unknown figure {0:?}; expected one of fig3..fig9")]
    UnknownFigure(String),
    /// Inconsistent request.
    #[error("usage: {0}")]
    Usage(String),
}

/// One CSV record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    /// Name of the swept quantity.
    pub sweep_variable: String,
    /// Value of the swept quantity.
    pub sweep_value: f64,
    /// Scheme label, with secondary parameters after `@`.
    pub scheme: String,
    /// Statistic name.
    pub statistic: String,
    /// Statistic value.
    pub value: f64,
    /// Standard error of the value (NaN when not applicable).
    pub stderr: f64,
}

impl CsvRow {
    fn new(var: &str, x: f64, scheme: impl Into<String>, stat: &str, value: f64, stderr: f64) -> Self {
        Self {
            sweep_variable: var.into(),
            sweep_value: x,
            scheme: scheme.into(),
            statistic: stat.into(),
            value,
            stderr,
        }
    }
}

/// Writes rows with a header line.
pub fn write_csv(path: impl AsRef<Path>, rows: &[CsvRow]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_csv`].
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// Jamming scheme at the monitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Silent monitor.
    Passive,
    /// Equal power allocation θ = (½, ½).
    Epa,
    /// (P1)-optimized allocation; infeasible realizations fall back to silence.
    Opa,
}

impl Scheme {
    /// Lower-case label.
    pub fn label(self) -> &'static str {
        match self {
            Scheme::Passive => "passive",
            Scheme::Epa => "epa",
            Scheme::Opa => "opa",
        }
    }
}

/// Evaluates one realization under `scheme` at normalized budget `rho_pm`
/// using the q-form of the closed-form SINRs.
pub fn evaluate(q: &QCoefficients, scheme: Scheme, tol: f64) -> EnsembleRecord {
    let (allocation, status) = match scheme {
        Scheme::Passive => (PowerAllocation::passive(q.rho_pm), Status::Optimal),
        Scheme::Epa => (PowerAllocation::epa(q.rho_pm), Status::Optimal),
        Scheme::Opa => {
            let r = solve_p1(q, tol);
            (r.allocation, r.status)
        }
    };
    EnsembleRecord {
        sinr_ue1: q.sinr_ue1(&allocation),
        sinr_monitor: q.sinr_monitor(&allocation),
        sinr_cpu: q.sinr_cpu(&allocation),
        allocation,
        status,
    }
}

/// Figure sweep options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureOptions {
    /// Outer network realizations per sweep point.
    pub realizations: usize,
    /// Jamming budgets (W) of the sweeps that vary P_pm.
    pub p_pm_list: Vec<f64>,
    /// Fading draws for Monte-Carlo markers of fig3 (0 disables them).
    pub mc_draws: usize,
    /// Relative bisection tolerance.
    pub tol: f64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self { realizations: 200, p_pm_list: vec![1.0, 2.0, 3.0], mc_draws: 0, tol: DEFAULT_TOL }
    }
}

/// q-coefficients of every realization for one configuration, in index order.
pub fn ensemble_q(params: &SystemParams, realizations: usize) -> Vec<QCoefficients> {
    let rho = params.rho_pm();
    (0..realizations as u64)
        .into_par_iter()
        .map(|i| q_coefficients(&Instance::new(params.clone(), i), rho))
        .collect()
}

/// Records of every realization under `scheme`.
pub fn ensemble(params: &SystemParams, realizations: usize, scheme: Scheme, tol: f64) -> Vec<EnsembleRecord> {
    ensemble_q(params, realizations).par_iter().map(|q| evaluate(q, scheme, tol)).collect()
}

fn at(label: &str, extra: impl std::fmt::Display) -> String {
    format!("{label}@{extra}")
}

/// Mean of linear values expressed in dB, with a delta-method standard error.
fn mean_db(values: &[f64]) -> Result<(f64, f64), ExperimentError> {
    let (m, se) = mean_stderr(values)?;
    Ok((to_db(m), 10.0 / std::f64::consts::LN_10 * se / m))
}

/// Runs the named figure sweep. Figure-defining settings override `params`;
/// everything else comes from `params`.
pub fn figure(name: &str, params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    if opts.realizations == 0 {
        return Err(ExperimentError::Usage("realizations must be positive".into()));
    }
    match name {
        "fig3" => fig3(params, opts),
        "fig4" => fig4(params, opts),
        "fig5" => fig5(params, opts),
        "fig6" => fig6(params, opts),
        "fig7" => fig7(params, opts),
        "fig8" => fig8(params, opts),
        "fig9" => fig9(params, opts),
        other => Err(ExperimentError::UnknownFigure(other.to_string())),
    }
}

/// CDFs of SINR_1, SINR_pm and SINR_cpu (dB) for passive and EPA monitoring
/// at P_pm = 3 W, N_pm = 32. With `mc_draws > 0` the Monte-Carlo SINRs of
/// each realization are added as `*_mc` families.
fn fig3(params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    let p = SystemParams { p_pm: 3.0, n_pm: 32, ..params.clone() };
    let rho = p.rho_pm();
    let mut rows = Vec::new();
    for scheme in [Scheme::Passive, Scheme::Epa] {
        let alloc = if scheme == Scheme::Passive { PowerAllocation::passive(rho) } else { PowerAllocation::epa(rho) };
        let per_real: Vec<([f64; 3], Option<[f64; 3]>)> = (0..opts.realizations as u64)
            .into_par_iter()
            .map(|i| {
                let inst = Instance::new(p.clone(), i);
                let closed =
                    [sinr_ue(&inst, 0, &alloc).sinr, sinr_monitor(&inst, &alloc).sinr, sinr_cpu(&inst, &alloc).sinr];
                let mc = (opts.mc_draws > 0).then(|| {
                    let t = run(&inst, &McConfig { n_draws: opts.mc_draws, seed: p.seed ^ i, ..McConfig::default() });
                    [t.ue(&inst, 0, &alloc).sinr, t.monitor(&inst, &alloc).sinr, t.cpu(&inst, &alloc).sinr]
                });
                (closed, mc)
            })
            .collect();
        let n = per_real.len();
        for (j, fam) in ["cdf_ue1", "cdf_monitor", "cdf_cpu"].iter().enumerate() {
            let mut families = vec![(fam.to_string(), per_real.iter().map(|r| to_db(r.0[j])).collect::<Vec<_>>())];
            if opts.mc_draws > 0 {
                families.push((format!("{fam}_mc"), per_real.iter().map(|r| to_db(r.1.unwrap()[j])).collect()));
            }
            for (stat, samples) in families {
                for (x, f) in EmpiricalCdf::new(&samples)?.steps() {
                    rows.push(CsvRow::new("sinr_db", x, scheme.label(), &stat, f, proportion_stderr(f, n)));
                }
            }
        }
    }
    Ok(rows)
}

/// Per-(N_pm, P_pm) ensemble outcome of EPA and OPA.
struct EpaOpa {
    epa: Vec<EnsembleRecord>,
    opa: Vec<EnsembleRecord>,
}

fn epa_opa(params: &SystemParams, realizations: usize, tol: f64) -> EpaOpa {
    let qs = ensemble_q(params, realizations);
    let (epa, opa) = qs.par_iter().map(|q| (evaluate(q, Scheme::Epa, tol), evaluate(q, Scheme::Opa, tol))).unzip();
    EpaOpa { epa, opa }
}

/// Mean SINR_cpu versus N_pm for EPA and OPA at each P_pm. Besides the
/// all-realization means (infeasible OPA realizations stay silent), the means
/// over the (P1)-feasible subset and the feasible fraction are reported.
fn fig4(params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut rows = Vec::new();
    for &p_pm in &opts.p_pm_list {
        for &n_pm in &N_PM_SWEEP {
            let p = SystemParams { p_pm, n_pm, ..params.clone() };
            let e = epa_opa(&p, opts.realizations, opts.tol);
            let x = n_pm as f64;
            let feasible: Vec<usize> = (0..e.opa.len()).filter(|&i| e.opa[i].status == Status::Optimal).collect();
            for (scheme, recs) in [(Scheme::Epa, &e.epa), (Scheme::Opa, &e.opa)] {
                let label = at(scheme.label(), format!("P_pm={p_pm}W"));
                let all: Vec<f64> = recs.iter().map(|r| r.sinr_cpu).collect();
                let (m, se) = mean_db(&all)?;
                rows.push(CsvRow::new("n_pm", x, &label, "mean_sinr_cpu_db", m, se));
                let sub: Vec<f64> = feasible.iter().map(|&i| recs[i].sinr_cpu).collect();
                let (m, se) = if sub.is_empty() { (f64::NAN, f64::NAN) } else { mean_db(&sub)? };
                rows.push(CsvRow::new("n_pm", x, &label, "mean_sinr_cpu_db_feasible", m, se));
            }
            let frac = feasible.len() as f64 / e.opa.len() as f64;
            let label = at("opa", format!("P_pm={p_pm}W"));
            rows.push(CsvRow::new("n_pm", x, label, "p1_feasible_fraction", frac, proportion_stderr(frac, e.opa.len())));
        }
    }
    Ok(rows)
}

fn sdp_rows(
    rows: &mut Vec<CsvRow>,
    var: &str,
    x: f64,
    label: &str,
    recs: &[EnsembleRecord],
    kappa_db: f64,
) -> Result<(), ExperimentError> {
    let n = recs.len();
    let s = sdp(recs, from_db(kappa_db))?;
    rows.push(CsvRow::new(var, x, label, "sdp", s, proportion_stderr(s, n)));
    let m = msp(recs)?;
    rows.push(CsvRow::new(var, x, label, "msp", m, proportion_stderr(m, n)));
    Ok(())
}

/// SDP (κ = 8 dB) and MSP versus N_pm for EPA and OPA at each P_pm.
fn fig5(params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut rows = Vec::new();
    for &p_pm in &opts.p_pm_list {
        for &n_pm in &N_PM_SWEEP {
            let p = SystemParams { p_pm, n_pm, ..params.clone() };
            let e = epa_opa(&p, opts.realizations, opts.tol);
            for (scheme, recs) in [(Scheme::Epa, &e.epa), (Scheme::Opa, &e.opa)] {
                let label = at(scheme.label(), format!("P_pm={p_pm}W"));
                sdp_rows(&mut rows, "n_pm", n_pm as f64, &label, recs, DEFAULT_KAPPA_DB)?;
            }
        }
    }
    Ok(rows)
}

/// Target heights (m) of the SDP-versus-(h, r) sweep.
pub const HEIGHT_SWEEP: [f64; 6] = [100.0, 300.0, 500.0, 700.0, 900.0, 1100.0];
/// Monitor radii (m) of the SDP-versus-(h, r) sweep.
pub const RADIUS_SWEEP: [f64; 3] = [100.0, 300.0, 500.0];

/// SDP (κ = 8 dB) versus target height for several monitor radii,
/// P_pm = 1 W, N_pm = 32.
fn fig6(params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut rows = Vec::new();
    for &r in &RADIUS_SWEEP {
        for &h in &HEIGHT_SWEEP {
            let p = SystemParams { p_pm: 1.0, n_pm: 32, target_height: h, monitor_radius: r, ..params.clone() };
            let e = epa_opa(&p, opts.realizations, opts.tol);
            for (scheme, recs) in [(Scheme::Epa, &e.epa), (Scheme::Opa, &e.opa)] {
                sdp_rows(&mut rows, "target_height_m", h, &at(scheme.label(), format!("r={r}m")), recs, DEFAULT_KAPPA_DB)?;
            }
        }
    }
    Ok(rows)
}

/// Detection thresholds (dB) of the SDP-versus-κ sweep.
pub fn kappa_sweep_db() -> Vec<f64> {
    (-5..=10).map(|i| 2.0 * i as f64).collect()
}

/// SDP versus detection threshold for N_pm ∈ {8, 32} and each P_pm, EPA and OPA.
fn fig7(params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut rows = Vec::new();
    for n_pm in [8usize, 32] {
        for &p_pm in &opts.p_pm_list {
            let p = SystemParams { p_pm, n_pm, ..params.clone() };
            let e = epa_opa(&p, opts.realizations, opts.tol);
            for (scheme, recs) in [(Scheme::Epa, &e.epa), (Scheme::Opa, &e.opa)] {
                let label = at(scheme.label(), format!("N_pm={n_pm},P_pm={p_pm}W"));
                for k in kappa_sweep_db() {
                    let s = sdp(recs, from_db(k))?;
                    rows.push(CsvRow::new("kappa_db", k, &label, "sdp", s, proportion_stderr(s, recs.len())));
                }
            }
        }
    }
    Ok(rows)
}

/// Battery capacity (J), static consumption (W) and amplifier efficiency of
/// the lifetime sweep.
pub const LIFETIME_SETTINGS: (f64, f64, f64) = (1.0e4, 0.5, 0.5);

/// Per-realization outcome of the (P2) power-saving experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSaving {
    /// EPA SINR_cpu, used as the realization's sensing cap κ (linear).
    pub kappa: f64,
    /// Minimal total power found by (P2) (W), if feasible.
    pub p2_power_w: Option<f64>,
    /// `1 − p2_power/P_pm`, if feasible.
    pub saving: Option<f64>,
}

/// (P2) with κ set per realization to its EPA sensing SINR.
pub fn power_savings(params: &SystemParams, realizations: usize, tol: f64) -> Vec<PowerSaving> {
    let rho = params.rho_pm();
    let noise = params.noise_power();
    ensemble_q(params, realizations)
        .par_iter()
        .map(|q| {
            let kappa = q.sinr_cpu(&PowerAllocation::epa(rho));
            let r = solve_p2(q, kappa, rho, tol);
            let power = (r.status == Status::Optimal).then_some(r.objective * noise);
            PowerSaving { kappa, p2_power_w: power, saving: power.map(|w| 1.0 - w / params.p_pm) }
        })
        .collect()
}

/// Operational lifetime of the monitor versus N_pm: EPA spends the full
/// budget, OPA the (P2) minimum for the EPA sensing SINR. Infeasible (P2)
/// realizations are excluded and counted.
fn fig8(params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    let (e_max, p_sta, eta_amp) = LIFETIME_SETTINGS;
    let mut rows = Vec::new();
    for &p_pm in &opts.p_pm_list {
        for &n_pm in &N_PM_SWEEP {
            let p = SystemParams { p_pm, n_pm, ..params.clone() };
            let s = power_savings(&p, opts.realizations, opts.tol);
            let x = n_pm as f64;
            let epa = operational_lifetime(e_max, p_sta, 1.0, p_pm, eta_amp)?;
            rows.push(CsvRow::new("n_pm", x, at("epa", format!("P_pm={p_pm}W")), "lifetime_s", epa, 0.0));
            let opa: Vec<f64> = s
                .iter()
                .filter_map(|r| r.p2_power_w)
                .map(|w| operational_lifetime(e_max, p_sta, w / p_pm, p_pm, eta_amp))
                .collect::<Result<_, _>>()?;
            let label = at("opa", format!("P_pm={p_pm}W"));
            let (m, se) = if opa.is_empty() { (f64::NAN, f64::NAN) } else { mean_stderr(&opa)? };
            rows.push(CsvRow::new("n_pm", x, &label, "lifetime_s", m, se));
            rows.push(CsvRow::new("n_pm", x, &label, "p2_infeasible_count", (s.len() - opa.len()) as f64, 0.0));
        }
    }
    Ok(rows)
}

/// Monitor antenna counts of the power-saving sweep.
pub const N_PM_POWER_SWEEP: [usize; 3] = [8, 16, 32];

/// Total transmit power versus sensing SINR: for each N_pm and P_pm, EPA
/// spends P_pm and reaches a mean SINR_cpu; (P2) reaches the same per-realization
/// SINR with the reported mean power. `mean_saving_pooled` pools all P_pm points.
fn fig9(params: &SystemParams, opts: &FigureOptions) -> Result<Vec<CsvRow>, ExperimentError> {
    let mut rows = Vec::new();
    for &n_pm in &N_PM_POWER_SWEEP {
        let x = n_pm as f64;
        let mut pooled = Vec::new();
        let mut infeasible = 0usize;
        for &p_pm in &opts.p_pm_list {
            let p = SystemParams { p_pm, n_pm, ..params.clone() };
            let s = power_savings(&p, opts.realizations, opts.tol);
            let kappas: Vec<f64> = s.iter().map(|r| r.kappa).collect();
            let (k_db, k_se) = mean_db(&kappas)?;
            let epa_label = at("epa", format!("P_pm={p_pm}W"));
            rows.push(CsvRow::new("n_pm", x, &epa_label, "mean_sinr_cpu_db", k_db, k_se));
            rows.push(CsvRow::new("n_pm", x, &epa_label, "mean_power_w", p_pm, 0.0));
            let label = at("opa", format!("P_pm={p_pm}W"));
            let feas: Vec<&PowerSaving> = s.iter().filter(|r| r.saving.is_some()).collect();
            infeasible += s.len() - feas.len();
            rows.push(CsvRow::new("n_pm", x, &label, "p2_infeasible_count", (s.len() - feas.len()) as f64, 0.0));
            if feas.is_empty() {
                continue;
            }
            let k: Vec<f64> = feas.iter().map(|r| r.kappa).collect();
            let (k_db, k_se) = mean_db(&k)?;
            rows.push(CsvRow::new("n_pm", x, &label, "mean_sinr_cpu_db", k_db, k_se));
            let pw: Vec<f64> = feas.iter().map(|r| r.p2_power_w.unwrap()).collect();
            let (m, se) = mean_stderr(&pw)?;
            rows.push(CsvRow::new("n_pm", x, &label, "mean_power_w", m, se));
            let sv: Vec<f64> = feas.iter().map(|r| r.saving.unwrap()).collect();
            let (m, se) = mean_stderr(&sv)?;
            rows.push(CsvRow::new("n_pm", x, &label, "mean_saving", m, se));
            pooled.extend(sv);
        }
        if !pooled.is_empty() {
            let (m, se) = mean_stderr(&pooled)?;
            rows.push(CsvRow::new("n_pm", x, "opa", "mean_saving_pooled", m, se));
        }
        rows.push(CsvRow::new("n_pm", x, "opa", "p2_infeasible_count_pooled", infeasible as f64, 0.0));
    }
    Ok(rows)
}

/// One closed-form-versus-Monte-Carlo term comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermCheck {
    /// Receiver label (`ue0`, `monitor`, `cpu`, …).
    pub receiver: String,
    /// Allocation label.
    pub allocation: String,
    /// Term name (`ds`, `bu`, …, `sinr`).
    pub term: String,
    /// Closed-form value.
    pub closed: f64,
    /// Monte-Carlo value.
    pub empirical: f64,
    /// Relative deviation (see [`relative_error`]).
    pub rel_err: f64,
    /// Monte-Carlo standard error relative to the closed form (NaN if unavailable).
    pub rel_stderr: f64,
    /// Tolerance applied.
    pub tol: f64,
    /// Whether the comparison counts toward the verdict.
    pub counted: bool,
}

impl TermCheck {
    /// `rel_err ≤ tol`.
    pub fn pass(&self) -> bool {
        self.rel_err <= self.tol
    }
}

/// `|e − c| / |c|`, or relative to `scale` when the closed form is zero (a
/// term that is exactly zero must be numerically zero in the oracle too).
pub fn relative_error(closed: f64, empirical: f64, scale: f64) -> f64 {
    let d = (empirical - closed).abs();
    if closed != 0.0 {
        d / closed.abs()
    } else if d == 0.0 {
        0.0
    } else {
        d / scale
    }
}

/// Compares two breakdowns term by term and at the SINR level.
pub fn compare_breakdowns(
    receiver: &str,
    allocation: &str,
    closed: &SinrBreakdown,
    empirical: &SinrBreakdown,
    stderrs: &[f64; 7],
    tol: f64,
    counted: bool,
) -> Vec<TermCheck> {
    let scale = closed.ds.abs().max(f64::MIN_POSITIVE);
    let mut out: Vec<TermCheck> = closed
        .terms()
        .iter()
        .zip(empirical.terms().iter())
        .zip(stderrs)
        .map(|(((name, c), (_, e)), se)| TermCheck {
            receiver: receiver.into(),
            allocation: allocation.into(),
            term: name.to_string(),
            closed: *c,
            empirical: *e,
            rel_err: relative_error(*c, *e, scale),
            rel_stderr: if *c != 0.0 { se / c.abs() } else { f64::NAN },
            tol,
            counted,
        })
        .collect();
    out.push(TermCheck {
        receiver: receiver.into(),
        allocation: allocation.into(),
        term: "sinr".into(),
        closed: closed.sinr,
        empirical: empirical.sinr,
        rel_err: relative_error(closed.sinr, empirical.sinr, 1.0),
        rel_stderr: f64::NAN,
        tol,
        counted,
    });
    out
}

/// Closed-form-versus-Monte-Carlo validation of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Fading draws used.
    pub draws: usize,
    /// Every comparison.
    pub checks: Vec<TermCheck>,
}

impl ValidationReport {
    /// All counted checks pass.
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.counted).all(TermCheck::pass)
    }

    /// Largest counted relative error among checks selected by `filter`.
    pub fn max_error(&self, filter: impl Fn(&TermCheck) -> bool) -> f64 {
        self.checks.iter().filter(|c| c.counted && filter(c)).map(|c| c.rel_err).fold(0.0, f64::max)
    }
}

/// Validates every UE, the monitor and the CPU of `inst` at each allocation.
/// UE and CPU terms use `tol_exact`; monitor terms use `tol_monitor`. The
/// Gaussian-approximation monitor form is included as uncounted rows.
pub fn validate_instance(
    inst: &Instance,
    allocations: &[(String, PowerAllocation)],
    draws: usize,
    seed: u64,
    tol_exact: f64,
    tol_monitor: f64,
) -> ValidationReport {
    let terms = run(inst, &McConfig { n_draws: draws, seed, spoofing: SpoofingModel::Independent });
    let mut checks = Vec::new();
    for (label, a) in allocations {
        for k in 0..inst.params.k_ues {
            let rx = Receiver::Ue(k);
            checks.extend(compare_breakdowns(
                &format!("ue{k}"),
                label,
                &sinr_ue(inst, k, a),
                &terms.breakdown(inst, rx, a),
                &terms.stderrs(inst, rx, a),
                tol_exact,
                true,
            ));
        }
        let (mb, ms) = (terms.breakdown(inst, Receiver::Monitor, a), terms.stderrs(inst, Receiver::Monitor, a));
        checks.extend(compare_breakdowns("monitor", label, &sinr_monitor(inst, a), &mb, &ms, tol_monitor, true));
        let gauss = sinr_monitor_with(inst, a, BuModel::Gaussian);
        checks.extend(compare_breakdowns("monitor_gaussian_bu", label, &gauss, &mb, &ms, tol_monitor, false));
        let rx = Receiver::Cpu;
        checks.extend(compare_breakdowns(
            "cpu",
            label,
            &sinr_cpu(inst, a),
            &terms.breakdown(inst, rx, a),
            &terms.stderrs(inst, rx, a),
            tol_exact,
            true,
        ));
    }
    ValidationReport { draws, checks }
}

/// Passive, EPA and `n_random` uniformly drawn simplex allocations.
pub fn validation_allocations(rho_pm: f64, n_random: usize, seed: u64) -> Vec<(String, PowerAllocation)> {
    let mut out = vec![
        ("passive".to_string(), PowerAllocation::passive(rho_pm)),
        ("epa".to_string(), PowerAllocation::epa(rho_pm)),
    ];
    let mut rng = realization_rng(seed, u64::MAX);
    for i in 0..n_random {
        // Uniform on the simplex {θ_t + θ_1 ≤ 1} by reflection.
        let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
        if a + b > 1.0 {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        out.push((format!("random{i}"), PowerAllocation::new(a, b, rho_pm)));
    }
    out
}

/// The `validate` command: realization 0 of the configuration, passive and
/// EPA allocations, fading drawn from the default Monte-Carlo seed;
/// `tol_pct` applies to the exact closed forms and `1.5·tol_pct` to the monitor.
pub fn cmd_validate(params: &SystemParams, draws: usize, tol_pct: f64) -> Result<ValidationReport, ExperimentError> {
    if draws == 0 {
        return Err(ExperimentError::Usage("draws must be positive".into()));
    }
    if tol_pct.is_nan() || tol_pct < 0.0 {
        return Err(ExperimentError::Usage("tolerance must be non-negative".into()));
    }
    let inst = Instance::new(params.clone(), 0);
    let allocs = validation_allocations(params.rho_pm(), 0, params.seed);
    let tol = tol_pct / 100.0;
    Ok(validate_instance(&inst, &allocs, draws, McConfig::default().seed, tol, 1.5 * tol))
}

/// Which allocation problem to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    /// Minimize sensing SINR under successful monitoring.
    P1,
    /// Minimize jamming power under a sensing cap and successful monitoring.
    P2,
}

/// Single-realization optimization report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    /// Problem solved.
    pub problem: Problem,
    /// Solver outcome.
    pub result: crate::optimizer::OptimizationResult,
    /// (UE 1, monitor, CPU) breakdowns under EPA.
    pub before: [SinrBreakdown; 3],
    /// Breakdowns under the solver's allocation (silence if infeasible).
    pub after: [SinrBreakdown; 3],
    /// Noise power (W) converting normalized powers to watts.
    pub noise_power_w: f64,
}

impl OptimizeReport {
    /// CSV rows of the report.
    pub fn rows(&self) -> Vec<CsvRow> {
        let mut rows = Vec::new();
        for (scheme, b) in [("epa", &self.before), ("opa", &self.after)] {
            for (name, br) in ["sinr_ue1_db", "sinr_monitor_db", "sinr_cpu_db"].iter().zip(b.iter()) {
                rows.push(CsvRow::new("realization", 0.0, scheme, name, to_db(br.sinr), f64::NAN));
            }
        }
        let a = &self.result.allocation;
        let (pt, p1) = a.absolute();
        let opa = |stat: &str, v: f64| CsvRow::new("realization", 0.0, "opa", stat, v, f64::NAN);
        rows.push(opa("theta_t", a.theta_t));
        rows.push(opa("theta_1", a.theta_1));
        rows.push(opa("power_target_w", pt * self.noise_power_w));
        rows.push(opa("power_ue_w", p1 * self.noise_power_w));
        rows.push(opa("objective", self.result.objective));
        rows.push(opa("optimal", f64::from(u8::from(self.result.status == Status::Optimal))));
        rows.push(opa("iterations", self.result.iterations as f64));
        rows
    }
}

/// The `optimize` command on realization 0 of the configuration. For (P2) the
/// budget is the configured P_pm and `kappa_db` the sensing cap.
pub fn cmd_optimize(params: &SystemParams, problem: Problem, kappa_db: Option<f64>, tol: f64) -> Result<OptimizeReport, ExperimentError> {
    let inst = Instance::new(params.clone(), 0);
    let rho = params.rho_pm();
    let q = q_coefficients(&inst, rho);
    let result = match (problem, kappa_db) {
        (Problem::P1, _) => solve_p1(&q, tol),
        (Problem::P2, Some(k)) => solve_p2(&q, from_db(k), rho, tol),
        (Problem::P2, None) => return Err(ExperimentError::Usage("p2 requires --kappa-db".into())),
    };
    let triple = |a: &PowerAllocation| [sinr_ue(&inst, 0, a), sinr_monitor(&inst, a), sinr_cpu(&inst, a)];
    Ok(OptimizeReport {
        problem,
        before: triple(&PowerAllocation::epa(rho)),
        after: triple(&result.allocation),
        result,
        noise_power_w: params.noise_power(),
    })
}
