//! Shared test oracles: random q-coefficient instances and zooming grid
//! searches for the two allocation problems.

#![allow(dead_code)]

use cfisac::sinr::{PowerAllocation, QCoefficients};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Grid resolution per axis.
pub const GRID: usize = 500;
/// Zoom levels after the initial grid.
pub const ZOOM_LEVELS: usize = 5;
/// Cells added around the near-optimal box when zooming; keeps a wedge-shaped
/// feasible tip inside the next window.
const MARGIN: f64 = 25.0;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// A random, well-scaled q-coefficient instance at budget `rho_pm`.
///
/// The monitoring margin at silence and the jamming sensitivities are drawn
/// so that instances are feasible, infeasible or partly feasible in roughly
/// comparable proportions.
pub fn random_q(seed: u64, rho_pm: f64) -> QCoefficients {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = [0.0; 12];
    for v in q.iter_mut() {
        *v = log_uniform(&mut rng, 0.1, 10.0);
    }
    QCoefficients { q, rho_pm }
}

/// Minimal objective of `f` over the points of the unit square `(u, v)` that
/// are `feasible`, by a `GRID × GRID` search refined `ZOOM_LEVELS` times.
/// Each refinement covers the (axis-aligned, possibly elongated) bounding box
/// of all feasible grid points whose value is within a few local grid
/// increments of the incumbent. Returns `None` when no grid point of the first
/// level is feasible.
pub fn zoom_search(feasible: impl Fn(f64, f64) -> bool, f: impl Fn(f64, f64) -> f64) -> Option<(f64, f64, f64)> {
    let inside = |u: f64, v: f64| (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) && feasible(u, v);
    let mut best: Option<(f64, f64, f64)> = None;
    let (mut u0, mut v0, mut su, mut sv) = (0.0, 0.0, 1.0, 1.0);
    for level in 0..=ZOOM_LEVELS {
        let (du, dv) = (su / (GRID - 1) as f64, sv / (GRID - 1) as f64);
        let points = || (0..GRID).flat_map(move |i| (0..GRID).map(move |j| (u0 + i as f64 * du, v0 + j as f64 * dv)));
        for (u, v) in points() {
            if inside(u, v) {
                let val = f(u, v);
                if best.is_none_or(|b| val < b.2) {
                    best = Some((u, v, val));
                }
            }
        }
        let (bu, bv, bval) = best?;
        if level == ZOOM_LEVELS {
            break;
        }
        let slack = 3.0 * ((f(bu + du, bv) - bval).abs() + (f(bu, bv + dv) - bval).abs());
        let (mut lo_u, mut lo_v, mut hi_u, mut hi_v) = (bu, bv, bu, bv);
        for (u, v) in points() {
            if inside(u, v) && f(u, v) <= bval + slack {
                (lo_u, lo_v, hi_u, hi_v) = (lo_u.min(u), lo_v.min(v), hi_u.max(u), hi_v.max(v));
            }
        }
        u0 = (lo_u - MARGIN * du).max(0.0);
        v0 = (lo_v - MARGIN * dv).max(0.0);
        su = (hi_u + MARGIN * du).min(1.0) - u0;
        sv = (hi_v + MARGIN * dv).min(1.0) - v0;
    }
    best
}

/// Grid oracle of (P1): minimal SINR_cpu on the simplex under successful
/// monitoring, searched over the unit square with `θ_t + θ_1 ≤ 1`.
pub fn p1_oracle(q: &QCoefficients) -> Option<f64> {
    let rho = q.rho_pm;
    let alloc = |x: f64, y: f64| PowerAllocation { theta_t: x, theta_1: y, rho_pm: rho };
    zoom_search(|x, y| x + y <= 1.0 + 1e-15 && q.monitoring_margin(&alloc(x, y)) >= 0.0, |x, y| q.sinr_cpu(&alloc(x, y)))
        .map(|b| b.2)
}

/// Grid oracle of (P2): minimal total normalized power meeting the sensing cap
/// and successful monitoring within `budget`, searched over (total power
/// fraction, split) so that the objective is one grid coordinate.
pub fn p2_oracle(q: &QCoefficients, kappa: f64, budget: f64) -> Option<f64> {
    // Absolute powers (x, y) through θ at the instance's own ρ.
    let alloc = |s: f64, r: f64| {
        let total = s * budget;
        PowerAllocation { theta_t: total * r / q.rho_pm, theta_1: total * (1.0 - r) / q.rho_pm, rho_pm: q.rho_pm }
    };
    zoom_search(
        |s, r| q.sinr_cpu(&alloc(s, r)) <= kappa && q.monitoring_margin(&alloc(s, r)) >= 0.0,
        |s, _| s * budget,
    )
    .map(|b| b.2)
}

/// Relative difference with an absolute floor for zero optima.
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
