//! Network scenario: system parameters and random network realizations.
//!
//! A [`SystemParams`] value holds every scalar of the deployment (node counts,
//! powers, geometry, radio constants). [`generate_realization`] turns it into
//! one [`NetworkRealization`]: node positions on a wrap-around square, the
//! aerial target above the centre, the proactive monitor inside a disc around
//! the target's ground projection, and all large-scale coefficients that the
//! closed-form SINR expressions consume.
//!
//! Ground-to-ground links follow a three-slope path-loss model with log-normal
//! shadowing beyond the second breakpoint; node-to-target links are free-space
//! line-of-sight gains `ζ = (λ / (4π d))^L` computed on the 3-D distance.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::scenario::{generate_realization, SystemParams};
//!
//! let params = SystemParams::default();
//! let a = generate_realization(&params, 7);
//! let b = generate_realization(&params, 7);
//! assert_eq!(a, b); // pure function of (seed, index)
//! assert_eq!(a.beta_c_ue.len(), params.m_c);
//! ```

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reference noise temperature (K).
pub const NOISE_TEMPERATURE: f64 = 290.0;
/// Speed of light (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Smallest linear gain kept for a large-scale coefficient.
pub const BETA_FLOOR: f64 = 1e-30;

/// Errors raised while loading or validating a configuration.
#[derive(Debug, Error)]
pub enum ParamError {
    /// A field violates its declared range.
    #[error("invalid parameter `{field}`: {reason}")]
    Invalid {
        /// Offending field name.
        field: &'static str,
        /// Human-readable reason.
        reason: String,
    },
    /// The configuration file could not be read.
    #[error("cannot read config `{path}`")]
    Io {
        /// Path that failed.
        path: String,
        /// Underlying I/O error.
        source: std::io::Error,
    },
    /// The configuration file is not valid JSON for [`SystemParams`].
    #[error("malformed config")]
    Json(#[from] serde_json::Error),
}

/// Domain error of the path-loss model.
#[derive(Debug, Error, PartialEq)]
#[error("distance must be strictly positive, got {0}")]
pub struct DistanceError(pub f64);

/// All scalar configuration of the deployment.
///
/// Powers are in watts, lengths in metres, frequencies in hertz and
/// `noise_figure`, `sigma_sh`, `pl_const` in dB. The JSON representation is a
/// flat object whose keys are exactly the field names; unknown keys are
/// rejected and missing keys take the [`Default`] value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemParams {
    /// Number of communication APs (C-APs).
    pub m_c: usize,
    /// Number of transmit sensing APs.
    pub m_st: usize,
    /// Number of receive sensing APs.
    pub m_sr: usize,
    /// Number of UEs; UE index 0 is the suspicious UE.
    pub k_ues: usize,
    /// Antennas per AP (N).
    pub n_ap: usize,
    /// Antennas at the proactive monitor (N_pm).
    pub n_pm: usize,
    /// Edge of the square deployment area (m).
    pub area_side: f64,
    /// Height of the aerial target (m).
    pub target_height: f64,
    /// Radius of the disc around the target's ground projection holding the monitor (m).
    pub monitor_radius: f64,
    /// Downlink data power per C-AP (W).
    pub p_c: f64,
    /// Sensing power per transmit S-AP (W).
    pub p_s: f64,
    /// UE pilot power (W).
    pub p_p: f64,
    /// Monitor pilot (spoofing) power (W).
    pub p_p_pm: f64,
    /// Monitor jamming power budget (W).
    pub p_pm: f64,
    /// Receiver noise figure (dB).
    pub noise_figure: f64,
    /// System bandwidth (Hz).
    pub bandwidth: f64,
    /// Carrier frequency (Hz).
    pub carrier_freq: f64,
    /// Pilot length in symbols; must be at least `k_ues`.
    pub tau_p: usize,
    /// Shadowing standard deviation (dB).
    pub sigma_sh: f64,
    /// First path-loss breakpoint (m).
    pub d0: f64,
    /// Second path-loss breakpoint (m).
    pub d1: f64,
    /// Path-loss constant of the three-slope model (dB).
    pub pl_const: f64,
    /// Radar cross-section of the target (m²).
    pub sigma_rcs: f64,
    /// Exponent of the free-space line-of-sight gain.
    pub fsl_exponent: f64,
    /// Residual self-interference variance at the full-duplex monitor (linear).
    pub sigma_si: f64,
    /// Master RNG seed.
    pub seed: u64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            m_c: 32,
            m_st: 4,
            m_sr: 4,
            k_ues: 5,
            n_ap: 4,
            n_pm: 32,
            area_side: 2000.0,
            target_height: 500.0,
            monitor_radius: 300.0,
            p_c: 1.0,
            p_s: 1.0,
            p_p: 0.2,
            p_p_pm: 0.2,
            p_pm: 1.0,
            noise_figure: 8.0,
            bandwidth: 20e6,
            carrier_freq: 1.9e9,
            tau_p: 5,
            sigma_sh: 9.0,
            d0: 10.0,
            d1: 50.0,
            pl_const: 140.7,
            sigma_rcs: 1.0,
            fsl_exponent: 2.0,
            sigma_si: 1.0,
            seed: 1,
        }
    }
}

impl SystemParams {
    /// Reduced configuration used for Monte-Carlo validation
    /// (M_c = 8, M_st = M_sr = 2, K = 3, N = 2, N_pm = 8).
    pub fn reduced() -> Self {
        Self { m_c: 8, m_st: 2, m_sr: 2, k_ues: 3, n_ap: 2, n_pm: 8, tau_p: 3, ..Self::default() }
    }

    /// Reads and validates a JSON configuration file.
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, ParamError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ParamError::Io { path: path.display().to_string(), source })?;
        Self::from_json_str(&text)
    }

    /// Parses and validates a JSON configuration string.
    pub fn from_json_str(text: &str) -> Result<Self, ParamError> {
        let params: Self = serde_json::from_str(text)?;
        params.validate()?;
        Ok(params)
    }

    /// Checks every declared invariant.
    pub fn validate(&self) -> Result<(), ParamError> {
        fn bad(field: &'static str, reason: impl Into<String>) -> Result<(), ParamError> {
            Err(ParamError::Invalid { field, reason: reason.into() })
        }
        let counts = [
            ("m_c", self.m_c),
            ("m_st", self.m_st),
            ("m_sr", self.m_sr),
            ("k_ues", self.k_ues),
            ("n_ap", self.n_ap),
            ("n_pm", self.n_pm),
        ];
        for (name, v) in counts {
            if v == 0 {
                return bad(name, "must be at least 1");
            }
        }
        if self.tau_p < self.k_ues {
            return bad("tau_p", format!("{} < k_ues = {} (orthogonal pilots)", self.tau_p, self.k_ues));
        }
        let positive = [
            ("area_side", self.area_side),
            ("target_height", self.target_height),
            ("p_c", self.p_c),
            ("p_s", self.p_s),
            ("p_p", self.p_p),
            ("p_p_pm", self.p_p_pm),
            ("p_pm", self.p_pm),
            ("bandwidth", self.bandwidth),
            ("carrier_freq", self.carrier_freq),
            ("d0", self.d0),
            ("d1", self.d1),
            ("fsl_exponent", self.fsl_exponent),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(name, format!("must be finite and > 0, got {v}"));
            }
        }
        let non_negative = [
            ("monitor_radius", self.monitor_radius),
            ("sigma_sh", self.sigma_sh),
            ("sigma_rcs", self.sigma_rcs),
            ("sigma_si", self.sigma_si),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return bad(name, format!("must be finite and >= 0, got {v}"));
            }
        }
        if !(self.noise_figure.is_finite() && self.pl_const.is_finite()) {
            return bad("noise_figure", "noise_figure and pl_const must be finite");
        }
        if self.d0 > self.d1 {
            return bad("d0", "first breakpoint must not exceed the second");
        }
        if self.monitor_radius > self.area_side / 2.0 {
            return bad("monitor_radius", "disc must fit inside the deployment area");
        }
        Ok(())
    }

    /// Thermal noise power `k_B·T₀·B·NF` in watts.
    pub fn noise_power(&self) -> f64 {
        BOLTZMANN * NOISE_TEMPERATURE * self.bandwidth * 10f64.powf(self.noise_figure / 10.0)
    }

    /// Normalized SNR `p / noise_power` of a transmit power in watts.
    pub fn rho(&self, power_w: f64) -> f64 {
        power_w / self.noise_power()
    }

    /// Normalized downlink data SNR ρ_c.
    pub fn rho_c(&self) -> f64 {
        self.rho(self.p_c)
    }

    /// Normalized sensing SNR ρ_s.
    pub fn rho_s(&self) -> f64 {
        self.rho(self.p_s)
    }

    /// Normalized UE pilot SNR ρ_p.
    pub fn rho_p(&self) -> f64 {
        self.rho(self.p_p)
    }

    /// Normalized monitor pilot SNR ρ_p,pm.
    pub fn rho_p_pm(&self) -> f64 {
        self.rho(self.p_p_pm)
    }

    /// Normalized monitor jamming budget ρ_pm.
    pub fn rho_pm(&self) -> f64 {
        self.rho(self.p_pm)
    }

    /// Carrier wavelength λ (m).
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    /// Target reflection gain α = 4π·σ_RCS/λ².
    pub fn alpha(&self) -> f64 {
        let lambda = self.wavelength();
        4.0 * PI * self.sigma_rcs / (lambda * lambda)
    }
}

/// Ground position (m).
pub type Point2 = [f64; 2];

/// Azimuth and elevation (rad) of a node→target direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    /// Azimuth in the horizontal plane.
    pub azimuth: f64,
    /// Elevation above the horizon.
    pub elevation: f64,
}

/// Node positions of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Positions {
    /// Communication APs.
    pub c_aps: Vec<Point2>,
    /// Transmit sensing APs.
    pub s_tx: Vec<Point2>,
    /// Receive sensing APs.
    pub s_rx: Vec<Point2>,
    /// UEs (index 0 is the suspicious UE).
    pub ues: Vec<Point2>,
    /// Proactive monitor.
    pub monitor: Point2,
    /// Aerial target (x, y, height).
    pub target: [f64; 3],
}

/// One random draw of the network: positions and all large-scale gains.
///
/// Index conventions: `m` runs over C-APs, `mt` over transmit S-APs, `mr` over
/// receive S-APs and `k` over UEs. Every gain is linear and strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRealization {
    /// Node positions.
    pub positions: Positions,
    /// β_{m,k}: C-AP ↔ UE, indexed `[m][k]`.
    pub beta_c_ue: Vec<Vec<f64>>,
    /// β_{m,pm}: C-AP ↔ monitor, indexed `[m]`.
    pub beta_c_pm: Vec<f64>,
    /// β_{m',k}: transmit S-AP ↔ UE, indexed `[mt][k]`.
    pub beta_st_ue: Vec<Vec<f64>>,
    /// β_{m',pm}: transmit S-AP ↔ monitor, indexed `[mt]`.
    pub beta_st_pm: Vec<f64>,
    /// β_{pm,k}: monitor ↔ UE, indexed `[k]`.
    pub beta_pm_ue: Vec<f64>,
    /// β_{pm,m''}: monitor ↔ receive S-AP, indexed `[mr]`.
    pub beta_pm_sr: Vec<f64>,
    /// β_{m,m''}: C-AP ↔ receive S-AP, indexed `[m][mr]`.
    pub beta_c_sr: Vec<Vec<f64>>,
    /// ζ_{m',t}: transmit S-AP ↔ target, indexed `[mt]`.
    pub zeta_st: Vec<f64>,
    /// ζ_{t,m''}: target ↔ receive S-AP, indexed `[mr]`.
    pub zeta_sr: Vec<f64>,
    /// ζ_{t,k}: target ↔ UE, indexed `[k]`.
    pub zeta_ue: Vec<f64>,
    /// ζ_{pm,t}: monitor ↔ target.
    pub zeta_pm: f64,
    /// Transmit S-AP → target angles.
    pub angles_st: Vec<Angles>,
    /// Receive S-AP → target angles.
    pub angles_sr: Vec<Angles>,
    /// Monitor → target angles.
    pub angles_pm: Angles,
    /// Target reflection gain α.
    pub alpha: f64,
}

/// Minimum distance between `a` and `b` over the nine toroidal images of the
/// square `[0, area_side)²`; exactly symmetric in its arguments.
pub fn wrapped_distance(a: Point2, b: Point2, area_side: f64) -> f64 {
    let wrap = |d: f64| {
        let d = d.abs();
        d.min((area_side - d).abs())
    };
    wrap(a[0] - b[0]).hypot(wrap(a[1] - b[1]))
}

/// Three-slope path loss in dB at distance `d` (m).
///
/// The constant `pl_const` is the one of the classical cell-free model, which
/// is calibrated for distances expressed in kilometres; the logarithms are
/// therefore taken of `d/1000` (and likewise for the breakpoints).
pub fn path_loss_db(d: f64, params: &SystemParams) -> Result<f64, DistanceError> {
    if !(d > 0.0) {
        return Err(DistanceError(d));
    }
    let km = |x: f64| x / 1000.0;
    let l = params.pl_const;
    let (d_km, d0_km, d1_km) = (km(d), km(params.d0), km(params.d1));
    Ok(if d <= params.d0 {
        -l - 15.0 * d1_km.log10() - 20.0 * d0_km.log10()
    } else if d <= params.d1 {
        -l - 15.0 * d1_km.log10() - 20.0 * d_km.log10()
    } else {
        -l - 35.0 * d_km.log10()
    })
}

/// Linear large-scale gain `10^(pl_db/10)·10^(σ_sh·z/10)`, floored at [`BETA_FLOOR`].
pub fn large_scale_coefficient(pl_db: f64, shadow_draw: f64, sigma_sh: f64) -> f64 {
    let beta = 10f64.powf(pl_db / 10.0) * 10f64.powf(sigma_sh * shadow_draw / 10.0);
    if beta < BETA_FLOOR {
        log::warn!("large-scale gain {beta:e} clamped to {BETA_FLOOR:e}");
        BETA_FLOOR
    } else {
        beta
    }
}

/// Free-space line-of-sight gain `(λ/(4π d))^L`.
pub fn free_space_gain(distance_3d: f64, params: &SystemParams) -> f64 {
    (params.wavelength() / (4.0 * PI * distance_3d)).powf(params.fsl_exponent)
}

/// RNG stream of realization `index` under master seed `seed`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn uniform_point<R: Rng + ?Sized>(rng: &mut R, side: f64) -> Point2 {
    [rng.random::<f64>() * side, rng.random::<f64>() * side]
}

/// Shadowed ground-link gain between two ground points. Shadowing applies
/// only beyond the second breakpoint.
fn ground_link<R: Rng + ?Sized>(a: Point2, b: Point2, params: &SystemParams, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    let d = wrapped_distance(a, b, params.area_side);
    let pl = path_loss_db(d, params).expect("co-located ground nodes are re-drawn");
    let sigma = if d > params.d1 { params.sigma_sh } else { 0.0 };
    large_scale_coefficient(pl, z, sigma)
}

fn target_link(node: Point2, target: [f64; 3], params: &SystemParams) -> (f64, Angles) {
    let dx = target[0] - node[0];
    let dy = target[1] - node[1];
    let ground = dx.hypot(dy);
    let d3 = ground.hypot(target[2]);
    let angles = Angles { azimuth: dy.atan2(dx), elevation: target[2].atan2(ground) };
    (free_space_gain(d3, params), angles)
}

/// Draws realization `realization_index`; a pure function of
/// `(params, realization_index)`.
pub fn generate_realization(params: &SystemParams, realization_index: u64) -> NetworkRealization {
    let mut rng = realization_rng(params.seed, realization_index);
    let side = params.area_side;
    let draw = |n: usize, rng: &mut ChaCha8Rng| (0..n).map(|_| uniform_point(rng, side)).collect::<Vec<_>>();
    let c_aps = draw(params.m_c, &mut rng);
    let s_tx = draw(params.m_st, &mut rng);
    let s_rx = draw(params.m_sr, &mut rng);
    let target = [side / 2.0, side / 2.0, params.target_height];

    let radius = params.monitor_radius * rng.random::<f64>().sqrt();
    let phi = 2.0 * PI * rng.random::<f64>();
    let monitor = [target[0] + radius * phi.cos(), target[1] + radius * phi.sin()];

    let occupied: Vec<Point2> = c_aps.iter().chain(&s_tx).chain(&s_rx).copied().chain([monitor]).collect();
    let ues: Vec<Point2> = (0..params.k_ues)
        .map(|_| loop {
            let p = uniform_point(&mut rng, side);
            if occupied.iter().all(|q| wrapped_distance(p, *q, side) > 0.0) {
                break p;
            }
        })
        .collect();

    let beta_c_ue = c_aps
        .iter()
        .map(|&a| ues.iter().map(|&u| ground_link(a, u, params, &mut rng)).collect())
        .collect();
    let beta_c_pm = c_aps.iter().map(|&a| ground_link(a, monitor, params, &mut rng)).collect();
    let beta_st_ue = s_tx
        .iter()
        .map(|&a| ues.iter().map(|&u| ground_link(a, u, params, &mut rng)).collect())
        .collect();
    let beta_st_pm = s_tx.iter().map(|&a| ground_link(a, monitor, params, &mut rng)).collect();
    let beta_pm_ue = ues.iter().map(|&u| ground_link(monitor, u, params, &mut rng)).collect();
    let beta_pm_sr = s_rx.iter().map(|&a| ground_link(monitor, a, params, &mut rng)).collect();
    let beta_c_sr = c_aps
        .iter()
        .map(|&a| s_rx.iter().map(|&r| ground_link(a, r, params, &mut rng)).collect())
        .collect();

    let (zeta_st, angles_st) = s_tx.iter().map(|&a| target_link(a, target, params)).unzip();
    let (zeta_sr, angles_sr) = s_rx.iter().map(|&a| target_link(a, target, params)).unzip();
    let zeta_ue = ues.iter().map(|&u| target_link(u, target, params).0).collect();
    let (zeta_pm, angles_pm) = target_link(monitor, target, params);

    NetworkRealization {
        positions: Positions { c_aps, s_tx, s_rx, ues, monitor, target },
        beta_c_ue,
        beta_c_pm,
        beta_st_ue,
        beta_st_pm,
        beta_pm_ue,
        beta_pm_sr,
        beta_c_sr,
        zeta_st,
        zeta_sr,
        zeta_ue,
        zeta_pm,
        angles_st,
        angles_sr,
        angles_pm,
        alpha: params.alpha(),
    }
}
