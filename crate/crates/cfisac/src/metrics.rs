//! Ensemble statistics over network realizations: success detection
//! probability (SDP) of the malicious sensing, monitoring success probability
//! (MSP), empirical CDFs and the monitor's operational lifetime.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::metrics::{sdp, EnsembleRecord};
//!
//! let recs: Vec<EnsembleRecord> = [1.0, 2.0, 3.0, 4.0]
//!     .iter()
//!     .map(|&c| EnsembleRecord::new(1.0, 1.0, c))
//!     .collect();
//! assert_eq!(sdp(&recs, 2.5).unwrap(), 0.5);
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optimizer::Status;
use crate::sinr::PowerAllocation;

/// Errors of the ensemble statistics.
#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    /// The ensemble (or sample set) is empty.
    #[error("empty ensemble")]
    Empty,
    /// An argument is outside its domain.
    #[error("invalid argument {name}: {reason}")]
    InvalidArgument {
        /// Argument name.
        name: &'static str,
        /// Why it was rejected.
        reason: String,
    },
}

/// Per-realization outcome (linear SINRs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    /// SINR of the suspicious UE.
    pub sinr_ue1: f64,
    /// SINR at the monitor.
    pub sinr_monitor: f64,
    /// Sensing SINR at the malicious CPU.
    pub sinr_cpu: f64,
    /// Allocation applied.
    pub allocation: PowerAllocation,
    /// Solver status (optimal for fixed schemes).
    pub status: Status,
}

impl EnsembleRecord {
    /// Record of a fixed (non-optimized) scheme with a zero allocation.
    pub fn new(sinr_ue1: f64, sinr_monitor: f64, sinr_cpu: f64) -> Self {
        Self { sinr_ue1, sinr_monitor, sinr_cpu, allocation: PowerAllocation::passive(0.0), status: Status::Optimal }
    }
}

fn non_empty<T>(v: &[T]) -> Result<(), MetricsError> {
    if v.is_empty() {
        Err(MetricsError::Empty)
    } else {
        Ok(())
    }
}

/// Fraction of realizations whose sensing SINR reaches `kappa` (linear).
pub fn sdp(records: &[EnsembleRecord], kappa: f64) -> Result<f64, MetricsError> {
    non_empty(records)?;
    Ok(records.iter().filter(|r| r.sinr_cpu >= kappa).count() as f64 / records.len() as f64)
}

/// Fraction of realizations in which the monitor hears the suspicious UE at
/// least as well as the UE itself (`SINR_pm ≥ SINR_1`, ties count as success).
pub fn msp(records: &[EnsembleRecord]) -> Result<f64, MetricsError> {
    non_empty(records)?;
    Ok(records.iter().filter(|r| r.sinr_monitor >= r.sinr_ue1).count() as f64 / records.len() as f64)
}

/// Standard error of a proportion estimated from `n` samples.
pub fn proportion_stderr(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(samples: &[f64]) -> Result<(f64, f64), MetricsError> {
    non_empty(samples)?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return Ok((mean, 0.0));
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Right-continuous empirical CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// Builds the CDF of `samples` (NaNs are rejected).
    pub fn new(samples: &[f64]) -> Result<Self, MetricsError> {
        non_empty(samples)?;
        if samples.iter().any(|x| x.is_nan()) {
            return Err(MetricsError::InvalidArgument { name: "samples", reason: "NaN sample".into() });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    /// `F(x) = #{samples ≤ x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    /// Sorted support points.
    pub fn support(&self) -> &[f64] {
        &self.sorted
    }

    /// Smallest support point `x` with `F(x) ≥ p`, for `p ∈ (0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let idx = ((p * n as f64).ceil() as usize).clamp(1, n) - 1;
        self.sorted[idx]
    }

    /// `(x, F(x))` at every distinct support point.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        let n = self.sorted.len() as f64;
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = f,
                _ => out.push((x, f)),
            }
        }
        out
    }
}

/// Operational lifetime `T = e_max / (p_sta + theta_sum·p_pm/eta_amp)` in
/// seconds of a battery-powered monitor.
pub fn operational_lifetime(e_max: f64, p_sta: f64, theta_sum: f64, p_pm: f64, eta_amp: f64) -> Result<f64, MetricsError> {
    let bad = |name, reason: &str| Err(MetricsError::InvalidArgument { name, reason: reason.into() });
    if e_max.is_nan() || e_max <= 0.0 {
        return bad("e_max", "must be positive");
    }
    if p_sta.is_nan() || p_sta < 0.0 {
        return bad("p_sta", "must be non-negative");
    }
    if !(theta_sum >= 0.0 && p_pm >= 0.0) {
        return bad("theta_sum/p_pm", "must be non-negative");
    }
    if !(eta_amp > 0.0 && eta_amp <= 1.0) {
        return bad("eta_amp", "must lie in (0, 1]");
    }
    let denom = p_sta + theta_sum * p_pm / eta_amp;
    if denom <= 0.0 {
        return bad("p_sta", "total consumption must be positive");
    }
    Ok(e_max / denom)
}
