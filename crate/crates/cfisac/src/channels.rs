//! Small-scale channel sampling and line-of-sight / composite channel builders.
//!
//! Rayleigh channels have i.i.d. circularly-symmetric complex Gaussian entries
//! (each drawn as two independent real normals scaled by `√(var/2)`). The
//! line-of-sight ground-to-air channel is `√ζ · a(φᵃ, φᵉ)` with a half-wavelength
//! uniform linear array response. Composite channels add the target-reflected
//! rank-one path `√α · a · bᵀ` to a direct channel.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::channels::{los_channel, norm_sqr, steering_vector};
//!
//! let a = steering_vector(0.3, 0.7, 8);
//! let h = los_channel(4.0, &a);
//! assert!((norm_sqr(&h) - 32.0).abs() < 1e-12); // ‖h‖² = ζ·n
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Dense complex column vector.
pub type CVec = Vec<Complex64>;

/// Dimension mismatch while composing channels.
#[derive(Debug, Error, PartialEq)]
#[error("dimension mismatch: expected {expected}, got {got}")]
pub struct DimensionError {
    /// Required length.
    pub expected: usize,
    /// Supplied length.
    pub got: usize,
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    /// All-zero `rows × cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    /// Builds a matrix from a row-major entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &[Complex64]) -> CVec {
        assert_eq!(x.len(), self.cols, "mul_vec dimension");
        self.data.chunks_exact(self.cols).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `Mᵀ x`.
    pub fn mul_t_vec(&self, x: &[Complex64]) -> CVec {
        assert_eq!(x.len(), self.rows, "mul_t_vec dimension");
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (row, xr) in self.data.chunks_exact(self.cols).zip(x) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * xr;
            }
        }
        out
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }
}

/// `Σ aᵢ bᵢ` (plain bilinear product, no conjugation).
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ conj(aᵢ) bᵢ` = `aᴴ b`.
pub fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `‖a‖²`.
pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Entrywise conjugate.
pub fn conj(a: &[Complex64]) -> CVec {
    a.iter().map(|x| x.conj()).collect()
}

/// One circularly-symmetric complex Gaussian sample of variance `var`.
pub fn complex_gaussian<R: Rng + ?Sized>(var: f64, rng: &mut R) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Rayleigh vector of length `n` with per-entry variance `beta`.
pub fn sample_rayleigh_vector<R: Rng + ?Sized>(beta: f64, n: usize, rng: &mut R) -> CVec {
    (0..n).map(|_| complex_gaussian(beta, rng)).collect()
}

/// Rayleigh `rows × cols` matrix with per-entry variance `beta`.
pub fn sample_rayleigh_matrix<R: Rng + ?Sized>(beta: f64, rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(beta, rng))
}

/// Self-interference channel of an `n_pm`-antenna full-duplex node.
pub fn sample_self_interference<R: Rng + ?Sized>(sigma_si: f64, n_pm: usize, rng: &mut R) -> CMat {
    if sigma_si == 0.0 {
        return CMat::zeros(n_pm, n_pm);
    }
    sample_rayleigh_matrix(sigma_si, n_pm, n_pm, rng)
}

/// Half-wavelength ULA response: entry `i` is `exp(jπ·i·sin(az)·cos(el))`.
pub fn steering_vector(azimuth: f64, elevation: f64, n: usize) -> CVec {
    let phase = PI * azimuth.sin() * elevation.cos();
    (0..n).map(|i| Complex64::from_polar(1.0, phase * i as f64)).collect()
}

/// Line-of-sight channel `√ζ · a`.
pub fn los_channel(zeta: f64, steering: &[Complex64]) -> CVec {
    let s = zeta.sqrt();
    steering.iter().map(|a| a * s).collect()
}

/// Row channel `gᵀ + √α·h_{t,k}·h_{m',t}ᵀ` from a transmit array to a
/// single-antenna receiver via the direct link and the target (𝔥_{m',k},
/// and 𝔥_{pm,k} when the transmitter is the monitor).
pub fn effective_sap_ue_channel(
    direct: &[Complex64],
    h_t_k: Complex64,
    h_mt: &[Complex64],
    alpha: f64,
) -> Result<CVec, DimensionError> {
    if direct.len() != h_mt.len() {
        return Err(DimensionError { expected: h_mt.len(), got: direct.len() });
    }
    let s = alpha.sqrt() * h_t_k;
    Ok(direct.iter().zip(h_mt).map(|(g, h)| g + s * h).collect())
}

/// Composite matrix `D + √α · a · bᵀ` (Λ_{m',pm}, Λ_{pm,pm}, Λ_{pm,m''};
/// with a zero `D` it is H_{m',m''}).
pub fn composite_channel(direct: &CMat, a: &[Complex64], b: &[Complex64], alpha: f64) -> Result<CMat, DimensionError> {
    if direct.rows() != a.len() {
        return Err(DimensionError { expected: direct.rows(), got: a.len() });
    }
    if direct.cols() != b.len() {
        return Err(DimensionError { expected: direct.cols(), got: b.len() });
    }
    let s = alpha.sqrt();
    Ok(CMat::from_fn(direct.rows(), direct.cols(), |r, c| direct.get(r, c) + s * a[r] * b[c]))
}

/// Reflected S-AP→S-AP channel `H_{m',m''} = √α · h_{t,m''} · h_{m',t}ᵀ`.
pub fn reflected_channel(h_t_rx: &[Complex64], h_tx_t: &[Complex64], alpha: f64) -> CMat {
    composite_channel(&CMat::zeros(h_t_rx.len(), h_tx_t.len()), h_t_rx, h_tx_t, alpha)
        .expect("dimensions taken from the inputs")
}
