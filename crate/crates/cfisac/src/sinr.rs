//! Closed-form SINR expressions of the malicious UE, the proactive monitor and
//! the malicious sensing CPU, the linearizing q-coefficients, and the
//! large-antenna limits.
//!
//! All terms are expectations of the use-and-then-forget decomposition under
//! conjugate (maximum-ratio) precoding at the C-APs, line-of-sight precoding at
//! the sensing APs and the monitor's two jamming beams: one toward the target
//! (share θ_t) and one toward the suspicious UE (share θ_1). Every value is
//! linear power; dB conversion happens only at reporting boundaries.
//!
//! UE index 0 is the suspicious UE. The monitor shares map to its per-beam
//! power coefficients via `θ_t = N_pm·η_pm,t·ζ_pm,t` and
//! `θ_1 = N_pm·η_pm,1·β_pm,1`.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::scenario::SystemParams;
//! use cfisac::sinr::{q_coefficients, sinr_cpu, Instance, PowerAllocation};
//!
//! let inst = Instance::new(SystemParams::default(), 0);
//! let alloc = PowerAllocation::epa(inst.params.rho_pm());
//! let direct = sinr_cpu(&inst, &alloc).sinr;
//! let q = q_coefficients(&inst, alloc.rho_pm);
//! assert!((q.sinr_cpu(&alloc) / direct - 1.0).abs() < 1e-10);
//! ```

use serde::{Deserialize, Serialize};

use crate::estimation::{compute_stats, EstimationStats};
use crate::scenario::{generate_realization, NetworkRealization, SystemParams};

/// Monitor jamming split: target-beam share θ_t, UE-beam share θ_1 and the
/// normalized monitor SNR ρ_pm the shares apply to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    /// Share of the jamming budget steered at the target.
    pub theta_t: f64,
    /// Share of the jamming budget steered at the suspicious UE.
    pub theta_1: f64,
    /// Normalized jamming budget ρ_pm.
    pub rho_pm: f64,
}

impl PowerAllocation {
    /// Allocation with explicit shares.
    pub fn new(theta_t: f64, theta_1: f64, rho_pm: f64) -> Self {
        Self { theta_t, theta_1, rho_pm }
    }

    /// No jamming (passive monitoring).
    pub fn passive(rho_pm: f64) -> Self {
        Self::new(0.0, 0.0, rho_pm)
    }

    /// Equal power allocation θ = (½, ½).
    pub fn epa(rho_pm: f64) -> Self {
        Self::new(0.5, 0.5, rho_pm)
    }

    /// Whether the shares lie on the unit simplex (within `tol`).
    pub fn is_feasible(&self, tol: f64) -> bool {
        self.theta_t >= -tol && self.theta_1 >= -tol && self.theta_t + self.theta_1 <= 1.0 + tol
    }

    /// Target-beam power coefficient η_pm,t.
    pub fn eta_t(&self, n_pm: usize, zeta_pm: f64) -> f64 {
        self.theta_t / (n_pm as f64 * zeta_pm)
    }

    /// UE-beam power coefficient η_pm,1.
    pub fn eta_1(&self, n_pm: usize, beta_pm_1: f64) -> f64 {
        self.theta_1 / (n_pm as f64 * beta_pm_1)
    }

    /// Absolute normalized powers (ς_s, ς_c) = ρ_pm·(θ_t, θ_1).
    pub fn absolute(&self) -> (f64, f64) {
        (self.theta_t * self.rho_pm, self.theta_1 * self.rho_pm)
    }
}

/// Named terms of one receiver's SINR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrBreakdown {
    /// Desired-signal power |DS|².
    pub ds: f64,
    /// Beamforming-uncertainty power.
    pub bu: f64,
    /// Inter-user interference power, summed over interferers.
    pub iu: f64,
    /// Sensing-signal interference power.
    pub is_: f64,
    /// Target-beam jamming power.
    pub js_s: f64,
    /// UE-beam jamming power.
    pub js_c: f64,
    /// Noise power.
    pub noise: f64,
    /// `ds / (bu + iu + is_ + js_s + js_c + noise)`.
    pub sinr: f64,
}

impl SinrBreakdown {
    /// Builds a breakdown and its ratio.
    pub fn from_terms(ds: f64, bu: f64, iu: f64, is_: f64, js_s: f64, js_c: f64, noise: f64) -> Self {
        let sinr = ds / (bu + iu + is_ + js_s + js_c + noise);
        Self { ds, bu, iu, is_, js_s, js_c, noise, sinr }
    }

    /// Terms as `(name, value)` pairs, in declaration order.
    pub fn terms(&self) -> [(&'static str, f64); 7] {
        [
            ("ds", self.ds),
            ("bu", self.bu),
            ("iu", self.iu),
            ("is", self.is_),
            ("js_s", self.js_s),
            ("js_c", self.js_c),
            ("noise", self.noise),
        ]
    }

    /// SINR in dB.
    pub fn sinr_db(&self) -> f64 {
        to_db(self.sinr)
    }
}

/// `10·log10(x)`.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// `10^(x/10)`.
pub fn from_db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Downlink power-control coefficients of the malicious APs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApPowerControl {
    /// η_{m,k}, indexed `[m][k]`.
    pub eta_c: Vec<Vec<f64>>,
    /// η_{m',t}, indexed `[mt]`.
    pub eta_s: Vec<f64>,
}

/// Full-power rules `η_{m,k} = 1/(N Σ_k γ_{m,k})` and `η_{m',t} = 1/(N ζ_{m',t})`.
pub fn default_ap_power_control(
    real: &NetworkRealization,
    stats: &EstimationStats,
    params: &SystemParams,
) -> ApPowerControl {
    let n = params.n_ap as f64;
    let eta_c = stats
        .gamma
        .iter()
        .map(|row| {
            let e = 1.0 / (n * row.iter().sum::<f64>());
            vec![e; row.len()]
        })
        .collect();
    let eta_s = real.zeta_st.iter().map(|z| 1.0 / (n * z)).collect();
    ApPowerControl { eta_c, eta_s }
}

/// Everything the closed forms need for one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    /// Configuration.
    pub params: SystemParams,
    /// Large-scale draw.
    pub real: NetworkRealization,
    /// Estimate statistics γ.
    pub stats: EstimationStats,
    /// AP power control η.
    pub eta: ApPowerControl,
}

impl Instance {
    /// Generates realization `index` and derives γ and η.
    pub fn new(params: SystemParams, index: u64) -> Self {
        let real = generate_realization(&params, index);
        Self::from_realization(params, real)
    }

    /// Derives γ and η for a given realization.
    pub fn from_realization(params: SystemParams, real: NetworkRealization) -> Self {
        let stats = compute_stats(&real, &params);
        let eta = default_ap_power_control(&real, &stats, &params);
        Self { params, real, stats, eta }
    }

    fn n(&self) -> f64 {
        self.params.n_ap as f64
    }

    fn npm(&self) -> f64 {
        self.params.n_pm as f64
    }

    /// `S = Σ_{m'} √η_{m',t}·ζ_{m',t}`.
    fn s_sum(&self) -> f64 {
        self.eta.eta_s.iter().zip(&self.real.zeta_st).map(|(e, z)| e.sqrt() * z).sum()
    }

    /// `Z = Σ_{m''} ζ_{t,m''}`.
    fn z_sum(&self) -> f64 {
        self.real.zeta_sr.iter().sum()
    }

    /// Bracket `√η_{m'}ζ_{m'} + Σ_{m̃'≠m'} √η_{m̃'}ζ_{m̃'}` of the sensing sums.
    fn sensing_bracket(&self, mt: usize) -> f64 {
        let own = self.eta.eta_s[mt].sqrt() * self.real.zeta_st[mt];
        let others: f64 = (0..self.params.m_st)
            .filter(|&j| j != mt)
            .map(|j| self.eta.eta_s[j].sqrt() * self.real.zeta_st[j])
            .sum();
        own + others
    }

    /// `A = Σ_m η_{m,1}·ρ_c·β_{m,pm}·N·γ_{m,1}`: per-antenna power of the
    /// monitor's combining vector.
    fn monitor_gain(&self) -> f64 {
        let rho_c = self.params.rho_c();
        (0..self.params.m_c)
            .map(|m| self.eta.eta_c[m][0] * rho_c * self.real.beta_c_pm[m] * self.n() * self.stats.gamma[m][0])
            .sum()
    }
}

/// Closed-form SINR of UE `k`.
pub fn sinr_ue(inst: &Instance, k: usize, alloc: &PowerAllocation) -> SinrBreakdown {
    let p = &inst.params;
    let r = &inst.real;
    let (n, npm) = (inst.n(), inst.npm());
    let (rho_c, rho_s, rho) = (p.rho_c(), p.rho_s(), alloc.rho_pm);
    let eta = &inst.eta;
    let gamma = &inst.stats.gamma;
    let alpha = r.alpha;

    let ds_amp: f64 = (0..p.m_c).map(|m| (eta.eta_c[m][k] * rho_c).sqrt() * n * gamma[m][k]).sum();
    let bu = rho_c * n * (0..p.m_c).map(|m| eta.eta_c[m][k] * gamma[m][k] * r.beta_c_ue[m][k]).sum::<f64>();
    let iu: f64 = (0..p.k_ues)
        .filter(|&kp| kp != k)
        .map(|kp| {
            (0..p.m_c).map(|m| eta.eta_c[m][kp] * rho_c * n * gamma[m][kp] * r.beta_c_ue[m][k]).sum::<f64>()
        })
        .sum();
    let zeta_tk = r.zeta_ue[k];
    let is_: f64 = (0..p.m_st)
        .map(|mt| {
            let se = eta.eta_s[mt].sqrt();
            let z = r.zeta_st[mt];
            let others: f64 = (0..p.m_st)
                .filter(|&j| j != mt)
                .map(|j| eta.eta_s[j].sqrt() * r.zeta_st[j] * zeta_tk * alpha * n)
                .sum();
            se * rho_s * z * n * (alpha * se * n * z * zeta_tk + se * r.beta_st_ue[mt][k] + others)
        })
        .sum();
    let eta_t = alloc.eta_t(p.n_pm, r.zeta_pm);
    let eta_1 = alloc.eta_1(p.n_pm, r.beta_pm_ue[0]);
    let js_s = eta_t * rho * r.zeta_pm * npm * (r.beta_pm_ue[k] + alpha * zeta_tk * npm * r.zeta_pm);
    let b1 = r.beta_pm_ue[0];
    let js_c = if k == 0 {
        eta_1 * rho * npm * b1 * (npm * b1 + b1 + alpha * zeta_tk * r.zeta_pm)
    } else {
        eta_1 * rho * b1 * npm * (r.beta_pm_ue[k] + alpha * zeta_tk * r.zeta_pm)
    };
    SinrBreakdown::from_terms(ds_amp * ds_amp, bu, iu, is_, js_s, js_c, 1.0)
}

/// Closed-form SINR of the suspicious UE's signal at the proactive monitor.
pub fn sinr_monitor(inst: &Instance, alloc: &PowerAllocation) -> SinrBreakdown {
    sinr_monitor_with(inst, alloc, BuModel::Exact)
}

/// How the monitor's beamforming-uncertainty term is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BuModel {
    /// Exact variance of `‖v‖²`, including the fluctuation of the estimate
    /// norms `‖ĝ_{m,1}‖²`: `N_pm·s² + N_pm(N_pm+1)·Σ_m (η_{m,1}ρ_c β_{m,pm} γ_{m,1})² N`.
    #[default]
    Exact,
    /// Gaussian approximation keeping only `N_pm·s²`, with
    /// `s = Σ_m η_{m,1}ρ_c β_{m,pm} N γ_{m,1}`.
    Gaussian,
}

/// [`sinr_monitor`] with an explicit beamforming-uncertainty model.
pub fn sinr_monitor_with(inst: &Instance, alloc: &PowerAllocation, bu_model: BuModel) -> SinrBreakdown {
    let p = &inst.params;
    let r = &inst.real;
    let (n, npm) = (inst.n(), inst.npm());
    let (rho_c, rho_s, rho) = (p.rho_c(), p.rho_s(), alloc.rho_pm);
    let eta = &inst.eta;
    let gamma = &inst.stats.gamma;
    let alpha = r.alpha;
    let sigma = p.sigma_si;
    let bpm = &r.beta_c_pm;

    let ds_amp: f64 = (0..p.m_c).map(|m| eta.eta_c[m][0] * rho_c * npm * bpm[m] * n * gamma[m][0]).sum();
    let bu = {
        let s: f64 = (0..p.m_c).map(|m| eta.eta_c[m][0] * rho_c * bpm[m] * gamma[m][0] * n).sum();
        let fluctuation = match bu_model {
            BuModel::Exact => {
                npm * (npm + 1.0)
                    * (0..p.m_c).map(|m| (eta.eta_c[m][0] * rho_c * bpm[m] * gamma[m][0]).powi(2) * n).sum::<f64>()
            }
            BuModel::Gaussian => 0.0,
        };
        s * s * npm + fluctuation
    };
    let iu: f64 = (1..p.k_ues)
        .map(|kp| {
            (0..p.m_c)
                .map(|m| {
                    let cross: f64 = (0..p.m_c)
                        .filter(|&mm| mm != m)
                        .map(|mm| eta.eta_c[mm][0] * n * gamma[mm][0] * bpm[mm])
                        .sum();
                    eta.eta_c[m][kp]
                        * rho_c
                        * rho_c
                        * npm
                        * n
                        * gamma[m][kp]
                        * bpm[m]
                        * (eta.eta_c[m][0] * (npm + n) * bpm[m] * gamma[m][0] + cross)
                })
                .sum::<f64>()
        })
        .sum();
    let is_: f64 = (0..p.m_c)
        .map(|m| {
            (0..p.m_st)
                .map(|mt| {
                    let se = eta.eta_s[mt].sqrt();
                    let z = r.zeta_st[mt];
                    let others: f64 = (0..p.m_st)
                        .filter(|&j| j != mt)
                        .map(|j| eta.eta_s[j].sqrt() * n * r.zeta_pm * r.zeta_st[j] * alpha)
                        .sum();
                    se * eta.eta_c[m][0]
                        * rho_s
                        * rho_c
                        * bpm[m]
                        * gamma[m][0]
                        * z
                        * npm
                        * n
                        * n
                        * (se * r.beta_st_pm[mt] + se * n * r.zeta_pm * z * alpha + others)
                })
                .sum::<f64>()
        })
        .sum();
    let eta_t = alloc.eta_t(p.n_pm, r.zeta_pm);
    let eta_1 = alloc.eta_1(p.n_pm, r.beta_pm_ue[0]);
    let zp = r.zeta_pm;
    let js_s: f64 = (0..p.m_c)
        .map(|m| {
            eta_t * rho * eta.eta_c[m][0] * rho_c * zp * bpm[m] * npm * npm * n * gamma[m][0]
                * (sigma + alpha * npm * zp * zp)
        })
        .sum();
    let js_c: f64 = (0..p.m_c)
        .map(|m| {
            eta_1 * eta.eta_c[m][0] * rho_c * rho * gamma[m][0] * n * npm * npm * bpm[m] * r.beta_pm_ue[0]
                * (sigma + alpha * zp * zp)
        })
        .sum();
    let noise: f64 = (0..p.m_c).map(|m| eta.eta_c[m][0] * rho_c * n * npm * bpm[m] * gamma[m][0]).sum();
    SinrBreakdown::from_terms(ds_amp * ds_amp, bu, iu, is_, js_s, js_c, noise)
}

/// Amplitude of the CPU's desired sensing term; it also equals the CPU noise power.
fn cpu_ds_amplitude(inst: &Instance) -> f64 {
    let p = &inst.params;
    let r = &inst.real;
    let n3 = inst.n().powi(3);
    let rho_s = p.rho_s();
    (0..p.m_sr)
        .map(|mr| {
            (0..p.m_st)
                .map(|mt| {
                    inst.eta.eta_s[mt].sqrt() * rho_s * r.zeta_st[mt] * r.zeta_sr[mr] * r.alpha * n3
                        * inst.sensing_bracket(mt)
                })
                .sum::<f64>()
        })
        .sum()
}

/// Σ_k E|IU_{k,cpu}|²: C-AP data leaking into the sensing receivers.
fn cpu_interference(inst: &Instance) -> f64 {
    let p = &inst.params;
    let r = &inst.real;
    let n4 = inst.n().powi(4);
    let (rho_c, rho_s) = (p.rho_c(), p.rho_s());
    let mut total = 0.0;
    for k in 0..p.k_ues {
        for mr in 0..p.m_sr {
            for m in 0..p.m_c {
                for mt in 0..p.m_st {
                    total += inst.eta.eta_c[m][k]
                        * inst.eta.eta_s[mt].sqrt()
                        * rho_c
                        * rho_s
                        * r.alpha
                        * inst.stats.gamma[m][k]
                        * n4
                        * r.beta_c_sr[m][mr]
                        * r.zeta_sr[mr]
                        * r.zeta_st[mt]
                        * inst.sensing_bracket(mt);
                }
            }
        }
    }
    total
}

/// `Σ_{m''} ζ_{t,m''}·β_{pm,m''}`.
fn monitor_to_rx_sum(inst: &Instance) -> f64 {
    inst.real.zeta_sr.iter().zip(&inst.real.beta_pm_sr).map(|(z, b)| z * b).sum()
}

/// Closed-form sensing SINR at the malicious CPU.
pub fn sinr_cpu(inst: &Instance, alloc: &PowerAllocation) -> SinrBreakdown {
    let p = &inst.params;
    let r = &inst.real;
    let (n, npm) = (inst.n(), inst.npm());
    let (rho_s, rho) = (p.rho_s(), alloc.rho_pm);
    let alpha = r.alpha;
    let zp = r.zeta_pm;
    let b1 = r.beta_pm_ue[0];
    let s2 = inst.s_sum().powi(2);
    let sz2 = (inst.s_sum() * inst.z_sum()).powi(2);
    let bz = monitor_to_rx_sum(inst);

    let ds_amp = cpu_ds_amplitude(inst);
    let iu = cpu_interference(inst);
    let eta_t = alloc.eta_t(p.n_pm, zp);
    let eta_1 = alloc.eta_1(p.n_pm, b1);
    let js_s = eta_t * rho_s * rho * alpha * n.powi(3) * npm * zp * bz * s2
        + eta_t * rho * rho_s * zp * zp * n.powi(4) * npm * npm * alpha * alpha * sz2;
    let js_c = eta_1 * rho * rho_s * alpha * npm * n.powi(3) * b1 * bz * s2
        + eta_1 * rho * rho_s * zp * b1 * n.powi(4) * npm * alpha * alpha * sz2;
    SinrBreakdown::from_terms(ds_amp * ds_amp, 0.0, iu, 0.0, js_s, js_c, ds_amp)
}

/// The twelve constants that make both optimization problems linear in the
/// jamming shares, together with the ρ_pm they were evaluated at.
///
/// `SINR_pm = q1/(q2 θ_t + q3 θ_1 + q4)`, `SINR_1 = q5/(q6 θ_t + q7 θ_1 + q8)`,
/// `SINR_cpu = q9/(q10 θ_t + q11 θ_1 + q12)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QCoefficients {
    /// q1 … q12 (index 0 holds q1).
    pub q: [f64; 12],
    /// ρ_pm the jamming coefficients were evaluated at.
    pub rho_pm: f64,
}

impl QCoefficients {
    /// `qᵢ` with 1-based index.
    pub fn get(&self, i: usize) -> f64 {
        self.q[i - 1]
    }

    /// Primed coefficients `q′ᵢ = qᵢ/ρ_pm` for the jamming-dependent indices
    /// {2, 3, 6, 7, 10, 11}; the others are unchanged. With these, the SINRs
    /// are linear-fractional in absolute powers `(ς_s, ς_c) = ρ_pm·(θ_t, θ_1)`.
    pub fn primed(&self) -> [f64; 12] {
        let mut out = self.q;
        for i in [2, 3, 6, 7, 10, 11] {
            out[i - 1] /= self.rho_pm;
        }
        out
    }

    /// SINR_pm from the q-form.
    pub fn sinr_monitor(&self, a: &PowerAllocation) -> f64 {
        self.get(1) / (self.get(2) * a.theta_t + self.get(3) * a.theta_1 + self.get(4))
    }

    /// SINR of UE 0 from the q-form.
    pub fn sinr_ue1(&self, a: &PowerAllocation) -> f64 {
        self.get(5) / (self.get(6) * a.theta_t + self.get(7) * a.theta_1 + self.get(8))
    }

    /// SINR_cpu from the q-form.
    pub fn sinr_cpu(&self, a: &PowerAllocation) -> f64 {
        self.get(9) / (self.get(10) * a.theta_t + self.get(11) * a.theta_1 + self.get(12))
    }

    /// Monitoring-constraint margin
    /// `(q1q6 − q2q5)θ_t + (q1q7 − q3q5)θ_1 + (q1q8 − q4q5)`; non-negative
    /// exactly when SINR_pm ≥ SINR_1.
    pub fn monitoring_margin(&self, a: &PowerAllocation) -> f64 {
        let q = |i| self.get(i);
        (q(1) * q(6) - q(2) * q(5)) * a.theta_t + (q(1) * q(7) - q(3) * q(5)) * a.theta_1 + (q(1) * q(8) - q(4) * q(5))
    }

    /// Unjammed sensing SINR `q9/q12`.
    pub fn unjammed_sinr_cpu(&self) -> f64 {
        self.get(9) / self.get(12)
    }
}

/// q1 … q12 at monitor budget `rho_pm`.
pub fn q_coefficients(inst: &Instance, rho_pm: f64) -> QCoefficients {
    let p = &inst.params;
    let r = &inst.real;
    let (n, npm) = (inst.n(), inst.npm());
    let (rho_s, rho) = (p.rho_s(), rho_pm);
    let alpha = r.alpha;
    let zp = r.zeta_pm;
    let b1 = r.beta_pm_ue[0];
    let a_gain = inst.monitor_gain();
    let passive = PowerAllocation::passive(rho_pm);

    let mon = sinr_monitor(inst, &passive);
    let ue = sinr_ue(inst, 0, &passive);
    let cpu = sinr_cpu(inst, &passive);
    let s2 = inst.s_sum().powi(2);
    let sz2 = (inst.s_sum() * inst.z_sum()).powi(2);
    let bz = monitor_to_rx_sum(inst);

    let q = [
        mon.ds,
        rho * a_gain * npm * (p.sigma_si + alpha * npm * zp * zp),
        rho * a_gain * npm * (p.sigma_si + alpha * zp * zp),
        mon.bu + mon.iu + mon.is_ + mon.noise,
        ue.ds,
        rho * (b1 + alpha * r.zeta_ue[0] * npm * zp),
        rho * (npm * b1 + b1 + alpha * r.zeta_ue[0] * zp),
        ue.bu + ue.iu + ue.is_ + ue.noise,
        cpu.ds,
        rho_s * rho * alpha * n.powi(3) * bz * s2 + rho * rho_s * zp * n.powi(4) * npm * alpha * alpha * sz2,
        rho * rho_s * alpha * n.powi(3) * bz * s2 + rho * rho_s * zp * n.powi(4) * alpha * alpha * sz2,
        cpu.iu + cpu.noise,
    ];
    QCoefficients { q, rho_pm }
}

/// Large-N_pm limit of SINR_k under EPA with the monitor's total jamming power
/// held at `p_pm_norm` (normalized) while ρ_pm = p_pm_norm/N_pm.
///
/// The target-beam term tends to `½·P·α·ζ_{t,k}·ζ_pm,t`; the UE-beam term tends
/// to `½·P·β_pm,1` for the suspicious UE and vanishes for the others.
pub fn asymptotic_sinr_ue_limit(inst: &Instance, k: usize, p_pm_norm: f64) -> f64 {
    let r = &inst.real;
    let base = sinr_ue(inst, k, &PowerAllocation::passive(0.0));
    let js_s = 0.5 * p_pm_norm * r.alpha * r.zeta_ue[k] * r.zeta_pm;
    let js_c = if k == 0 { 0.5 * p_pm_norm * r.beta_pm_ue[0] } else { 0.0 };
    base.ds / (base.bu + base.iu + base.is_ + base.noise + js_s + js_c)
}

/// Large-N_pm limit of SINR_pm under EPA with scaled-down jamming power:
/// `(Σ_m η_{m,1} β_{m,pm} N γ_{m,1})² / Σ_{k'≠1} Σ_m η_{m,k'} η_{m,1} N γ_{m,k'} γ_{m,1} β²_{m,pm}`.
///
/// With the exact beamforming-uncertainty term the estimate-norm fluctuation
/// adds `Σ_m η²_{m,1} N γ²_{m,1} β²_{m,pm}` to the denominator.
pub fn asymptotic_sinr_monitor_limit(inst: &Instance) -> f64 {
    asymptotic_sinr_monitor_limit_with(inst, BuModel::Exact)
}

/// [`asymptotic_sinr_monitor_limit`] for a given beamforming-uncertainty model.
pub fn asymptotic_sinr_monitor_limit_with(inst: &Instance, bu_model: BuModel) -> f64 {
    let p = &inst.params;
    let n = inst.n();
    let eta = &inst.eta.eta_c;
    let g = &inst.stats.gamma;
    let b = &inst.real.beta_c_pm;
    let num: f64 = (0..p.m_c).map(|m| eta[m][0] * b[m] * n * g[m][0]).sum();
    let den: f64 = (1..p.k_ues)
        .map(|kp| (0..p.m_c).map(|m| eta[m][kp] * eta[m][0] * n * g[m][kp] * g[m][0] * b[m] * b[m]).sum::<f64>())
        .sum();
    let fluctuation = match bu_model {
        BuModel::Exact => (0..p.m_c).map(|m| (eta[m][0] * g[m][0] * b[m]).powi(2) * n).sum(),
        BuModel::Gaussian => 0.0,
    };
    num * num / (den + fluctuation)
}

/// Large-N_pm limit of SINR_cpu under EPA with total jamming power
/// `p_pm_norm` (normalized): the target-beam term tends to
/// `½·P·ρ_s·ζ_pm,t·N⁴·α²·(Σ_{m'}Σ_{m''} √η_{m',t} ζ_{m',t} ζ_{t,m''})²` and the
/// UE-beam term vanishes.
pub fn asymptotic_sinr_cpu_limit(inst: &Instance, p_pm_norm: f64) -> f64 {
    let r = &inst.real;
    let base = sinr_cpu(inst, &PowerAllocation::passive(0.0));
    let sz2 = (inst.s_sum() * inst.z_sum()).powi(2);
    let js = 0.5 * p_pm_norm * inst.params.rho_s() * r.zeta_pm * inst.n().powi(4) * r.alpha * r.alpha * sz2;
    base.ds / (base.iu + base.noise + js)
}
