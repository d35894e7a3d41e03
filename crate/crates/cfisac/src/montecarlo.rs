//! Monte-Carlo oracle for the closed-form SINR expressions.
//!
//! Each fading draw samples every small-scale channel (C-AP↔UE, C-AP↔monitor,
//! S-AP↔UE, S-AP↔monitor, monitor↔UE, monitor self-interference,
//! monitor↔receive S-AP, C-AP↔receive S-AP), the training noise and the
//! receiver noise, builds the MMSE estimates and the precoders / combiners
//! from them, and evaluates every instantaneous term of the use-and-then-forget
//! decomposition. Desired-signal strength is the squared sample mean of the
//! desired term, beamforming uncertainty its sample variance, and every other
//! term the sample mean of its squared magnitude.
//!
//! The jamming terms are accumulated per unit monitor power coefficient, so a
//! single pass serves any number of allocations with common random numbers.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::montecarlo::{run, McConfig};
//! use cfisac::scenario::SystemParams;
//! use cfisac::sinr::{Instance, PowerAllocation};
//!
//! let inst = Instance::new(SystemParams::reduced(), 0);
//! let terms = run(&inst, &McConfig { n_draws: 200, ..McConfig::default() });
//! let b = terms.cpu(&inst, &PowerAllocation::passive(1.0));
//! assert!(b.ds > 0.0 && b.js_s == 0.0);
//! ```

use std::ops::Add;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    conj, dot, dotc, effective_sap_ue_channel, los_channel, norm_sqr, reflected_channel, sample_rayleigh_matrix,
    sample_rayleigh_vector, sample_self_interference, steering_vector, CMat, CVec,
};
use crate::estimation::estimate_from_channels;
use crate::scenario::realization_rng;
use crate::sinr::{Instance, PowerAllocation, SinrBreakdown};

/// How the monitor's training-phase channel relates to its downlink channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SpoofingModel {
    /// The spoofing pilot reaches the C-AP through a channel drawn
    /// independently of the downlink C-AP→monitor channel. This is the
    /// statistical model under which the monitor's closed form is exact for
    /// the desired-signal term.
    #[default]
    Independent,
    /// The same C-AP↔monitor channel is used in training and downlink
    /// (reciprocity within the coherence block).
    Coherent,
}

/// Monte-Carlo run settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    /// Number of small-scale fading draws.
    pub n_draws: usize,
    /// Seed of the fading streams.
    pub seed: u64,
    /// Training/downlink channel relation of the spoofing monitor.
    pub spoofing: SpoofingModel,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { n_draws: 20_000, seed: 0x5eed, spoofing: SpoofingModel::Independent }
    }
}

/// Running first and second moments of a real sample.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// Σx.
    pub sum: f64,
    /// Σx².
    pub sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    /// Sample mean over `n` draws.
    pub fn mean(&self, n: usize) -> f64 {
        self.sum / n as f64
    }

    /// Standard error of the mean over `n` draws.
    pub fn stderr(&self, n: usize) -> f64 {
        let nf = n as f64;
        let m = self.sum / nf;
        ((self.sum_sq / nf - m * m).max(0.0) / nf).sqrt()
    }
}

impl Add for Moments {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { sum: self.sum + o.sum, sum_sq: self.sum_sq + o.sum_sq }
    }
}

/// Accumulated instantaneous terms of one receiver.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReceiverTerms {
    /// Σ of the (complex) desired term.
    pub ds_sum: Complex64,
    /// Moments of |desired|².
    pub ds_power: Moments,
    /// Moments of |IU|² (summed over interferers within a draw).
    pub iu: Moments,
    /// Moments of |IS|².
    pub is_: Moments,
    /// Moments of |JS_s|² per unit monitor coefficient η_pm,t·ρ_pm.
    pub js_s_unit: Moments,
    /// Moments of |JS_c|² per unit monitor coefficient η_pm,1·ρ_pm.
    pub js_c_unit: Moments,
    /// Moments of |noise|².
    pub noise: Moments,
}

impl Add for ReceiverTerms {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            ds_sum: self.ds_sum + o.ds_sum,
            ds_power: self.ds_power + o.ds_power,
            iu: self.iu + o.iu,
            is_: self.is_ + o.is_,
            js_s_unit: self.js_s_unit + o.js_s_unit,
            js_c_unit: self.js_c_unit + o.js_c_unit,
            noise: self.noise + o.noise,
        }
    }
}

impl ReceiverTerms {
    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, ds: Complex64, iu: f64, is_: f64, js_s: Complex64, js_c: Complex64, noise: Complex64) {
        self.ds_sum += ds;
        self.ds_power.push(ds.norm_sqr());
        self.iu.push(iu);
        self.is_.push(is_);
        self.js_s_unit.push(js_s.norm_sqr());
        self.js_c_unit.push(js_c.norm_sqr());
        self.noise.push(noise.norm_sqr());
    }

    /// Standard errors of the seven terms, in [`SinrBreakdown::terms`] order.
    /// The desired-signal error uses the delta method `2·|mean|·√(BU/n)`;
    /// the uncertainty term (a sample variance) is reported as NaN.
    fn stderrs(&self, n: usize, eta_t_rho: f64, eta_1_rho: f64) -> [f64; 7] {
        let b = self.breakdown(n, eta_t_rho, eta_1_rho);
        [
            2.0 * (b.ds * b.bu / n as f64).sqrt(),
            f64::NAN,
            self.iu.stderr(n),
            self.is_.stderr(n),
            eta_t_rho * self.js_s_unit.stderr(n),
            eta_1_rho * self.js_c_unit.stderr(n),
            self.noise.stderr(n),
        ]
    }

    fn breakdown(&self, n: usize, eta_t_rho: f64, eta_1_rho: f64) -> SinrBreakdown {
        let mean = self.ds_sum / n as f64;
        let ds = mean.norm_sqr();
        let bu = (self.ds_power.mean(n) - ds).max(0.0);
        SinrBreakdown::from_terms(
            ds,
            bu,
            self.iu.mean(n),
            self.is_.mean(n),
            eta_t_rho * self.js_s_unit.mean(n),
            eta_1_rho * self.js_c_unit.mean(n),
            self.noise.mean(n),
        )
    }
}

/// One of the three receivers of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Receiver {
    /// UE with the given index (0 is the suspicious UE).
    Ue(usize),
    /// The proactive monitor.
    Monitor,
    /// The malicious sensing CPU.
    Cpu,
}

/// Empirical terms of all receivers for one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalTerms {
    /// Draws accumulated.
    pub n_draws: usize,
    /// Per-UE terms.
    pub ue: Vec<ReceiverTerms>,
    /// Monitor terms.
    pub monitor: ReceiverTerms,
    /// CPU terms.
    pub cpu: ReceiverTerms,
}

impl EmpiricalTerms {
    fn empty(k: usize) -> Self {
        Self { n_draws: 0, ue: vec![ReceiverTerms::default(); k], monitor: Default::default(), cpu: Default::default() }
    }

    fn merge(mut self, o: Self) -> Self {
        self.n_draws += o.n_draws;
        for (a, b) in self.ue.iter_mut().zip(o.ue) {
            *a = *a + b;
        }
        self.monitor = self.monitor + o.monitor;
        self.cpu = self.cpu + o.cpu;
        self
    }

    fn scales(inst: &Instance, alloc: &PowerAllocation) -> (f64, f64) {
        let p = &inst.params;
        let r = &inst.real;
        (alloc.eta_t(p.n_pm, r.zeta_pm) * alloc.rho_pm, alloc.eta_1(p.n_pm, r.beta_pm_ue[0]) * alloc.rho_pm)
    }

    fn receiver(&self, rx: Receiver) -> &ReceiverTerms {
        match rx {
            Receiver::Ue(k) => &self.ue[k],
            Receiver::Monitor => &self.monitor,
            Receiver::Cpu => &self.cpu,
        }
    }

    /// Empirical breakdown of any receiver under `alloc`.
    pub fn breakdown(&self, inst: &Instance, rx: Receiver, alloc: &PowerAllocation) -> SinrBreakdown {
        let (t, o) = Self::scales(inst, alloc);
        self.receiver(rx).breakdown(self.n_draws, t, o)
    }

    /// Standard errors of the empirical terms of `rx` under `alloc`.
    pub fn stderrs(&self, inst: &Instance, rx: Receiver, alloc: &PowerAllocation) -> [f64; 7] {
        let (t, o) = Self::scales(inst, alloc);
        self.receiver(rx).stderrs(self.n_draws, t, o)
    }

    /// Empirical breakdown of UE `k` under `alloc`.
    pub fn ue(&self, inst: &Instance, k: usize, alloc: &PowerAllocation) -> SinrBreakdown {
        let (t, o) = Self::scales(inst, alloc);
        self.ue[k].breakdown(self.n_draws, t, o)
    }

    /// Empirical breakdown of the monitor under `alloc`.
    pub fn monitor(&self, inst: &Instance, alloc: &PowerAllocation) -> SinrBreakdown {
        let (t, o) = Self::scales(inst, alloc);
        self.monitor.breakdown(self.n_draws, t, o)
    }

    /// Empirical breakdown of the CPU under `alloc`.
    pub fn cpu(&self, inst: &Instance, alloc: &PowerAllocation) -> SinrBreakdown {
        let (t, o) = Self::scales(inst, alloc);
        self.cpu.breakdown(self.n_draws, t, o)
    }
}

/// Deterministic line-of-sight quantities of a realization.
struct LosSet {
    /// h_{m',t} (N).
    h_st: Vec<CVec>,
    /// h_{t,m''} (N).
    h_sr: Vec<CVec>,
    /// h_{pm,t} (N_pm).
    h_pm: CVec,
    /// h_{t,k} (single-antenna UE).
    h_tk: Vec<Complex64>,
    /// Sensing combiners, stored un-conjugated: `b_{m''} = Σ_{m'} √(η_{m'} ρ_s) H_{m',m''} h*_{m'}`.
    b_sr: Vec<CVec>,
}

impl LosSet {
    fn new(inst: &Instance) -> Self {
        let p = &inst.params;
        let r = &inst.real;
        let h_st: Vec<CVec> = r
            .angles_st
            .iter()
            .zip(&r.zeta_st)
            .map(|(a, z)| los_channel(*z, &steering_vector(a.azimuth, a.elevation, p.n_ap)))
            .collect();
        let h_sr: Vec<CVec> = r
            .angles_sr
            .iter()
            .zip(&r.zeta_sr)
            .map(|(a, z)| los_channel(*z, &steering_vector(a.azimuth, a.elevation, p.n_ap)))
            .collect();
        let h_pm = los_channel(r.zeta_pm, &steering_vector(r.angles_pm.azimuth, r.angles_pm.elevation, p.n_pm));
        let h_tk = r.zeta_ue.iter().map(|z| Complex64::new(z.sqrt(), 0.0)).collect();
        let rho_s = p.rho_s();
        let b_sr = h_sr
            .iter()
            .map(|hr| {
                let mut b = vec![Complex64::new(0.0, 0.0); p.n_ap];
                for (mt, ht) in h_st.iter().enumerate() {
                    let h = reflected_channel(hr, ht, r.alpha);
                    let x = h.mul_vec(&conj(ht));
                    let s = (inst.eta.eta_s[mt] * rho_s).sqrt();
                    for (bi, xi) in b.iter_mut().zip(x) {
                        *bi += s * xi;
                    }
                }
                b
            })
            .collect();
        Self { h_st, h_sr, h_pm, h_tk, b_sr }
    }
}

fn axpy(acc: &mut [Complex64], s: f64, x: &[Complex64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += s * b;
    }
}

/// `Λ x = Dᵀ x + √α · a · (bᵀ x)` for a composite channel with direct part
/// `D` stored un-transposed.
fn composite_apply(direct: &CMat, a: &[Complex64], b: &[Complex64], alpha: f64, x: &[Complex64]) -> CVec {
    let mut y = direct.mul_t_vec(x);
    let s = alpha.sqrt() * dot(b, x);
    for (yi, ai) in y.iter_mut().zip(a) {
        *yi += s * ai;
    }
    y
}

fn one_draw<R: Rng + ?Sized>(inst: &Instance, los: &LosSet, spoofing: SpoofingModel, rng: &mut R, acc: &mut EmpiricalTerms) {
    let p = &inst.params;
    let r = &inst.real;
    let (n, npm, kk) = (p.n_ap, p.n_pm, p.k_ues);
    let (rho_c, rho_s) = (p.rho_c(), p.rho_s());
    let alpha = r.alpha;

    // C-AP channels and estimates.
    let mut g = Vec::with_capacity(p.m_c);
    let mut g_hat = Vec::with_capacity(p.m_c);
    let mut g_cpm = Vec::with_capacity(p.m_c);
    for m in 0..p.m_c {
        let gm = sample_rayleigh_matrix(r.beta_c_pm[m], n, npm, rng);
        let train = match spoofing {
            SpoofingModel::Independent => sample_rayleigh_matrix(r.beta_c_pm[m], n, npm, rng),
            SpoofingModel::Coherent => gm.clone(),
        };
        let mut gk = Vec::with_capacity(kk);
        let mut ghk = Vec::with_capacity(kk);
        for k in 0..kk {
            let true_g = sample_rayleigh_vector(r.beta_c_ue[m][k], n, rng);
            let noise = sample_rayleigh_vector(1.0, n, rng);
            ghk.push(estimate_from_channels(m, k, &true_g, Some(&train), &noise, r, p));
            gk.push(true_g);
        }
        g.push(gk);
        g_hat.push(ghk);
        g_cpm.push(gm);
    }
    // Transmit S-AP channels.
    let g_st_ue: Vec<Vec<CVec>> = (0..p.m_st)
        .map(|mt| (0..kk).map(|k| sample_rayleigh_vector(r.beta_st_ue[mt][k], n, rng)).collect())
        .collect();
    let g_st_pm: Vec<CMat> = (0..p.m_st).map(|mt| sample_rayleigh_matrix(r.beta_st_pm[mt], n, npm, rng)).collect();
    // Monitor channels.
    let g_pm_ue: Vec<CVec> = (0..kk).map(|k| sample_rayleigh_vector(r.beta_pm_ue[k], npm, rng)).collect();
    let g_si = sample_self_interference(p.sigma_si, npm, rng);
    // Receive S-AP channels.
    let g_pm_sr: Vec<CMat> = (0..p.m_sr).map(|mr| sample_rayleigh_matrix(r.beta_pm_sr[mr], npm, n, rng)).collect();
    let g_c_sr: Vec<Vec<CMat>> = (0..p.m_c)
        .map(|m| (0..p.m_sr).map(|mr| sample_rayleigh_matrix(r.beta_c_sr[m][mr], n, n, rng)).collect())
        .collect();
    // Receiver noise.
    let n_ue: CVec = sample_rayleigh_vector(1.0, kk, rng);
    let n_pm = sample_rayleigh_vector(1.0, npm, rng);
    let n_sr: Vec<CVec> = (0..p.m_sr).map(|_| sample_rayleigh_vector(1.0, n, rng)).collect();

    let eta = &inst.eta;
    let ghc: Vec<Vec<CVec>> = g_hat.iter().map(|row| row.iter().map(|x| conj(x)).collect()).collect();
    let g_pm1_conj = conj(&g_pm_ue[0]);
    let h_pm_conj = conj(&los.h_pm);

    // UEs.
    for k in 0..kk {
        let ds: Complex64 = (0..p.m_c).map(|m| (eta.eta_c[m][k] * rho_c).sqrt() * dot(&g[m][k], &ghc[m][k])).sum();
        let iu: f64 = (0..kk)
            .filter(|&kp| kp != k)
            .map(|kp| {
                (0..p.m_c)
                    .map(|m| (eta.eta_c[m][kp] * rho_c).sqrt() * dot(&g[m][k], &ghc[m][kp]))
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum();
        let is_: Complex64 = (0..p.m_st)
            .map(|mt| {
                let eff = effective_sap_ue_channel(&g_st_ue[mt][k], los.h_tk[k], &los.h_st[mt], alpha)
                    .expect("antenna counts agree");
                (eta.eta_s[mt] * rho_s).sqrt() * dotc(&los.h_st[mt], &eff)
            })
            .sum();
        let eff_pm = effective_sap_ue_channel(&g_pm_ue[k], los.h_tk[k], &los.h_pm, alpha).expect("antenna counts agree");
        let js_s = dot(&eff_pm, &h_pm_conj);
        let js_c = dot(&eff_pm, &g_pm1_conj);
        acc.ue[k].push(ds, iu, is_.norm_sqr(), js_s, js_c, n_ue[k]);
    }

    // Monitor: combining vector from the suspicious UE's precoded stream.
    let stream = |kp: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); npm];
        for m in 0..p.m_c {
            axpy(&mut v, (eta.eta_c[m][kp] * rho_c).sqrt(), &g_cpm[m].mul_t_vec(&ghc[m][kp]));
        }
        v
    };
    let v = stream(0);
    let ds_pm = Complex64::new(norm_sqr(&v), 0.0);
    let iu_pm: f64 = (1..kk).map(|kp| dotc(&v, &stream(kp)).norm_sqr()).sum();
    let mut sens = vec![Complex64::new(0.0, 0.0); npm];
    for mt in 0..p.m_st {
        let x = composite_apply(&g_st_pm[mt], &los.h_pm, &los.h_st[mt], alpha, &conj(&los.h_st[mt]));
        axpy(&mut sens, (eta.eta_s[mt] * rho_s).sqrt(), &x);
    }
    let is_pm = dotc(&v, &sens).norm_sqr();
    let js_s_pm = dotc(&v, &composite_apply(&g_si, &los.h_pm, &los.h_pm, alpha, &h_pm_conj));
    let js_c_pm = dotc(&v, &composite_apply(&g_si, &los.h_pm, &los.h_pm, alpha, &g_pm1_conj));
    acc.monitor.push(ds_pm, iu_pm, is_pm, js_s_pm, js_c_pm, dotc(&v, &n_pm));

    // CPU: deterministic line-of-sight combiners at the receive S-APs.
    let mut ds_cpu = Complex64::new(0.0, 0.0);
    let mut js_s_cpu = Complex64::new(0.0, 0.0);
    let mut js_c_cpu = Complex64::new(0.0, 0.0);
    let mut noise_cpu = Complex64::new(0.0, 0.0);
    for mr in 0..p.m_sr {
        let b = &los.b_sr[mr];
        let mut rx = vec![Complex64::new(0.0, 0.0); n];
        for (mt, ht) in los.h_st.iter().enumerate() {
            let h = reflected_channel(&los.h_sr[mr], ht, alpha);
            axpy(&mut rx, (eta.eta_s[mt] * rho_s).sqrt(), &h.mul_vec(&conj(ht)));
        }
        ds_cpu += dotc(b, &rx);
        js_s_cpu += dotc(b, &composite_apply(&g_pm_sr[mr], &los.h_sr[mr], &los.h_pm, alpha, &h_pm_conj));
        js_c_cpu += dotc(b, &composite_apply(&g_pm_sr[mr], &los.h_sr[mr], &los.h_pm, alpha, &g_pm1_conj));
        noise_cpu += dotc(b, &n_sr[mr]);
    }
    let iu_cpu: f64 = (0..kk)
        .map(|k| {
            let mut s = Complex64::new(0.0, 0.0);
            for mr in 0..p.m_sr {
                for m in 0..p.m_c {
                    let x = g_c_sr[m][mr].mul_t_vec(&ghc[m][k]);
                    s += (eta.eta_c[m][k] * rho_c).sqrt() * dotc(&los.b_sr[mr], &x);
                }
            }
            s.norm_sqr()
        })
        .sum();
    acc.cpu.push(ds_cpu, iu_cpu, 0.0, js_s_cpu, js_c_cpu, noise_cpu);
}

const CHUNK: usize = 256;

/// Runs the oracle for one realization. Draws are split into fixed-size
/// chunks, each with its own RNG stream, and reduced in chunk order, so the
/// result depends only on `(inst, cfg)`.
pub fn run(inst: &Instance, cfg: &McConfig) -> EmpiricalTerms {
    assert!(cfg.n_draws >= 1, "at least one draw");
    let los = LosSet::new(inst);
    let chunks = cfg.n_draws.div_ceil(CHUNK);
    let parts: Vec<EmpiricalTerms> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = realization_rng(cfg.seed ^ 0x9e37_79b9_7f4a_7c15, c as u64);
            let mut acc = EmpiricalTerms::empty(inst.params.k_ues);
            let draws = CHUNK.min(cfg.n_draws - c * CHUNK);
            for _ in 0..draws {
                one_draw(inst, &los, cfg.spoofing, &mut rng, &mut acc);
            }
            acc.n_draws = draws;
            acc
        })
        .collect();
    parts.into_iter().fold(EmpiricalTerms::empty(inst.params.k_ues), EmpiricalTerms::merge)
}

/// Empirical SINR breakdown of UE `k`.
pub fn empirical_sinr_ue(inst: &Instance, k: usize, alloc: &PowerAllocation, cfg: &McConfig) -> SinrBreakdown {
    run(inst, cfg).ue(inst, k, alloc)
}

/// Empirical SINR breakdown at the monitor.
pub fn empirical_sinr_monitor(inst: &Instance, alloc: &PowerAllocation, cfg: &McConfig) -> SinrBreakdown {
    run(inst, cfg).monitor(inst, alloc)
}

/// Empirical SINR breakdown at the CPU.
pub fn empirical_sinr_cpu(inst: &Instance, alloc: &PowerAllocation, cfg: &McConfig) -> SinrBreakdown {
    run(inst, cfg).cpu(inst, alloc)
}
