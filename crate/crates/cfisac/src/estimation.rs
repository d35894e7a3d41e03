//! Uplink training under pilot spoofing and MMSE channel-estimate statistics.
//!
//! With orthogonal pilots, the despread pilot received by C-AP `m` for UE `k`
//! is `y̌ = √(τ_p ρ_p)·g_{m,k} + √(τ_p ρ_p,pm)·G_{m,pm}·u + n`, where the
//! spoofing term (all-ones `u`, monitor channel `G_{m,pm}`) is present only for
//! the suspicious UE (index 0). The MMSE estimate is the scalar-gain output
//! `ĝ = c·y̌`, whose per-entry variance is `γ_{m,k}`.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::estimation::compute_stats;
//! use cfisac::scenario::{generate_realization, SystemParams};
//!
//! let params = SystemParams::default();
//! let real = generate_realization(&params, 0);
//! let stats = compute_stats(&real, &params);
//! assert!(stats.gamma[0][0] <= real.beta_c_ue[0][0]);
//! ```

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{sample_rayleigh_matrix, sample_rayleigh_vector, CMat, CVec};
use crate::scenario::{NetworkRealization, SystemParams};

/// Channel-estimate statistics of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationStats {
    /// γ_{m,k}, indexed `[m][k]`.
    pub gamma: Vec<Vec<f64>>,
}

/// Denominator `τ_p ρ_p β + [k = 0]·τ_p ρ_p,pm β_{m,pm} N_pm + 1` of the MMSE gain.
fn mmse_denominator(m: usize, k: usize, real: &NetworkRealization, params: &SystemParams) -> f64 {
    let tau = params.tau_p as f64;
    let beta = real.beta_c_ue[m][k];
    let spoof = if k == 0 { tau * params.rho_p_pm() * real.beta_c_pm[m] * params.n_pm as f64 } else { 0.0 };
    tau * params.rho_p() * beta + spoof + 1.0
}

/// Per-entry variance γ_{m,k} of the MMSE estimate.
pub fn gamma_coefficient(m: usize, k: usize, real: &NetworkRealization, params: &SystemParams) -> f64 {
    let tau_rho = params.tau_p as f64 * params.rho_p();
    let beta = real.beta_c_ue[m][k];
    tau_rho * beta * beta / mmse_denominator(m, k, real, params)
}

/// Scalar MMSE gain `c_{m,k}` applied to the despread pilot.
pub fn mmse_gain(m: usize, k: usize, real: &NetworkRealization, params: &SystemParams) -> f64 {
    let tau_rho = params.tau_p as f64 * params.rho_p();
    tau_rho.sqrt() * real.beta_c_ue[m][k] / mmse_denominator(m, k, real, params)
}

/// γ for every (C-AP, UE) pair.
pub fn compute_stats(real: &NetworkRealization, params: &SystemParams) -> EstimationStats {
    let gamma = (0..params.m_c)
        .map(|m| (0..params.k_ues).map(|k| gamma_coefficient(m, k, real, params)).collect())
        .collect();
    EstimationStats { gamma }
}

/// MMSE estimate from given true channels and training noise.
///
/// `spoof` is the monitor→C-AP channel `G_{m,pm}` (N × N_pm) seen during
/// training; it is used only for UE 0.
pub fn estimate_from_channels(
    m: usize,
    k: usize,
    g: &[Complex64],
    spoof: Option<&CMat>,
    noise: &[Complex64],
    real: &NetworkRealization,
    params: &SystemParams,
) -> CVec {
    let tau = params.tau_p as f64;
    let a = (tau * params.rho_p()).sqrt();
    let c = mmse_gain(m, k, real, params);
    let mut y: CVec = g.iter().zip(noise).map(|(gi, ni)| a * gi + ni).collect();
    if k == 0 {
        if let Some(gm) = spoof {
            let b = (tau * params.rho_p_pm()).sqrt();
            let u = vec![Complex64::new(1.0, 0.0); gm.cols()];
            for (yi, si) in y.iter_mut().zip(gm.mul_vec(&u)) {
                *yi += b * si;
            }
        }
    }
    y.into_iter().map(|v| c * v).collect()
}

/// Samples a fresh true channel, spoofing channel and training noise, and
/// returns the estimate `ĝ` and its error `g̃ = g − ĝ`.
pub fn sample_mmse_estimate<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    real: &NetworkRealization,
    params: &SystemParams,
    rng: &mut R,
) -> (CVec, CVec) {
    let n = params.n_ap;
    let g = sample_rayleigh_vector(real.beta_c_ue[m][k], n, rng);
    let spoof = sample_rayleigh_matrix(real.beta_c_pm[m], n, params.n_pm, rng);
    let noise = sample_rayleigh_vector(1.0, n, rng);
    let g_hat = estimate_from_channels(m, k, &g, Some(&spoof), &noise, real, params);
    let err = g.iter().zip(&g_hat).map(|(a, b)| a - b).collect();
    (g_hat, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::dotc;
    use crate::scenario::{generate_realization, realization_rng};

    fn unit_realization(params: &SystemParams) -> NetworkRealization {
        let mut r = generate_realization(params, 0);
        for row in &mut r.beta_c_ue {
            row.iter_mut().for_each(|b| *b = 1.0);
        }
        r.beta_c_pm.iter_mut().for_each(|b| *b = 1.0);
        r
    }

    #[test]
    fn hand_substitution() {
        // τ_p ρ_p = 10 and τ_p ρ_p,pm N_pm = 10 with unit gains → γ = 10/21.
        let base = SystemParams { m_c: 1, k_ues: 1, tau_p: 1, n_pm: 2, ..SystemParams::default() };
        let params = SystemParams { p_p: 10.0 * base.noise_power(), p_p_pm: 5.0 * base.noise_power(), ..base };
        let r = unit_realization(&params);
        let g = gamma_coefficient(0, 0, &r, &params);
        assert!((g - 10.0 / 21.0).abs() < 1e-12, "{g}");
    }

    #[test]
    fn no_spoofing_and_perfect_estimation_limits() {
        let base = SystemParams::reduced();
        let quiet = SystemParams { p_p_pm: 1e-300, ..base.clone() };
        let r = generate_realization(&quiet, 2);
        let lhs = gamma_coefficient(3, 0, &r, &quiet);
        let tr = quiet.tau_p as f64 * quiet.rho_p();
        let b = r.beta_c_ue[3][0];
        assert!((lhs / (tr * b * b / (tr * b + 1.0)) - 1.0).abs() < 1e-12);

        let loud = SystemParams { p_p: 1e9, p_p_pm: 1e-300, ..base };
        let r = generate_realization(&loud, 2);
        assert!((gamma_coefficient(1, 1, &r, &loud) / r.beta_c_ue[1][1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn estimate_moments_and_orthogonality() {
        let params = SystemParams::reduced();
        let r = generate_realization(&params, 4);
        let mut rng = realization_rng(77, 0);
        for (m, k) in [(0, 0), (2, 1)] {
            let gamma = gamma_coefficient(m, k, &r, &params);
            let beta = r.beta_c_ue[m][k];
            let draws = 100_000;
            let (mut var, mut corr) = (0.0, Complex64::new(0.0, 0.0));
            for _ in 0..draws {
                let (gh, ge) = sample_mmse_estimate(m, k, &r, &params, &mut rng);
                var += gh.iter().map(|x| x.norm_sqr()).sum::<f64>() / params.n_ap as f64;
                corr += dotc(&gh, &ge) / params.n_ap as f64;
            }
            let d = draws as f64;
            assert!((var / d / gamma - 1.0).abs() < 0.02, "var ratio {}", var / d / gamma);
            assert!((corr / d).norm() < 0.02 * beta);
        }
    }

    #[test]
    fn zero_pilot_power_gives_zero_estimate() {
        let params = SystemParams { p_p: 1e-300, ..SystemParams::reduced() };
        let r = generate_realization(&params, 0);
        let mut rng = realization_rng(1, 1);
        let (gh, _) = sample_mmse_estimate(0, 1, &r, &params, &mut rng);
        assert!(gh.iter().all(|x| x.norm() < 1e-100));
    }
}
