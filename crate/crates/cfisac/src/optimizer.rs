//! Jamming-power allocation at the proactive monitor.
//!
//! * (P1) minimizes the malicious sensing SINR `q9/(q10·θ_t + q11·θ_1 + q12)`
//!   over the simplex `θ_t, θ_1 ≥ 0, θ_t + θ_1 ≤ 1`, subject to successful
//!   monitoring `SINR_pm ≥ SINR_1`.
//! * (P2) minimizes the monitor's total transmit power subject to a sensing
//!   cap `SINR_cpu ≤ κ`, successful monitoring and the power budget.
//!
//! Both are quasi-linear and are solved by bisection on an auxiliary scalar,
//! each step deciding a two-variable linear feasibility problem exactly by
//! vertex enumeration.
//!
//! ## Example
//!
//! ```rust
//! use cfisac::optimizer::{solve_p1, Status};
//! use cfisac::sinr::{q_coefficients, Instance};
//! use cfisac::scenario::SystemParams;
//!
//! let inst = Instance::new(SystemParams::reduced(), 0);
//! let q = q_coefficients(&inst, inst.params.rho_pm());
//! let r = solve_p1(&q, 1e-6);
//! if r.status == Status::Optimal {
//!     assert!(q.monitoring_margin(&r.allocation) >= -1e-9 * q.get(1) * q.get(8));
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::sinr::{PowerAllocation, QCoefficients};

/// Default relative bisection tolerance.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Relative residual tolerance of the exact feasibility test: a point is
/// admissible when `a·x + b·y − c ≤ tol·(|a·x| + |b·y| + |c|)`.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Half-plane `a·x + b·y ≤ c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    /// Coefficient of x.
    pub a: f64,
    /// Coefficient of y.
    pub b: f64,
    /// Right-hand side.
    pub c: f64,
}

impl HalfPlane {
    /// `a·x + b·y ≤ c`.
    pub fn le(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `a·x + b·y ≥ c`, stored as `−a·x − b·y ≤ −c`.
    pub fn ge(a: f64, b: f64, c: f64) -> Self {
        Self { a: -a, b: -b, c: -c }
    }

    /// Rescaled so that `(a, b)` has unit norm; `None` for a constant
    /// constraint `0 ≤ c`.
    fn normalized(&self) -> Option<Self> {
        let s = self.a.hypot(self.b);
        (s > 0.0).then(|| Self { a: self.a / s, b: self.b / s, c: self.c / s })
    }

    fn residual(&self, x: f64, y: f64) -> f64 {
        self.a * x + self.b * y - self.c
    }
}

/// Intersection of half-planes with the nonnegative quadrant `x, y ≥ 0`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityProblem2D {
    /// Constraints besides the quadrant.
    pub constraints: Vec<HalfPlane>,
}

/// Decides feasibility exactly. When feasible, returns the centroid of the
/// feasible vertices of the polygon, which lies inside it by convexity.
///
/// A nonempty polyhedron inside the quadrant contains no line, so it has a
/// vertex; every vertex is the intersection of two boundary lines (constraint
/// lines or axes), so enumerating pairwise intersections is exhaustive.
pub fn feasible_2d(problem: &FeasibilityProblem2D) -> Option<(f64, f64)> {
    let mut lines = vec![HalfPlane::le(-1.0, 0.0, 0.0), HalfPlane::le(0.0, -1.0, 0.0)];
    for h in &problem.constraints {
        if !(h.a.is_finite() && h.b.is_finite() && h.c.is_finite()) {
            return None;
        }
        match h.normalized() {
            Some(n) => lines.push(n),
            None if h.c < 0.0 => return None,
            None => {}
        }
    }
    // Purely relative, because useful jamming levels can be ~1e-12 of the budget.
    let tol = |h: &HalfPlane, x: f64, y: f64| FEASIBILITY_TOL * ((h.a * x).abs() + (h.b * y).abs() + h.c.abs());
    let admissible = |x: f64, y: f64| lines.iter().all(|h| h.residual(x, y) <= tol(h, x, y));
    let mut vertices: Vec<(f64, f64)> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (l1, l2) = (lines[i], lines[j]);
            let det = l1.a * l2.b - l1.b * l2.a;
            if det.abs() < 1e-14 {
                continue;
            }
            let x = (l1.c * l2.b - l1.b * l2.c) / det;
            let y = (l1.a * l2.c - l1.c * l2.a) / det;
            if admissible(x, y) {
                vertices.push((x.max(0.0), y.max(0.0)));
            }
        }
    }
    if vertices.is_empty() {
        return None;
    }
    let n = vertices.len() as f64;
    let cx = vertices.iter().map(|v| v.0).sum::<f64>() / n;
    let cy = vertices.iter().map(|v| v.1).sum::<f64>() / n;
    // The centroid is admissible up to rounding; fall back to a vertex otherwise.
    Some(if admissible(cx, cy) { (cx, cy) } else { vertices[0] })
}

/// Solver outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// Converged to within tolerance.
    Optimal,
    /// No allocation satisfies the constraints.
    Infeasible,
}

/// Result of (P1) or (P2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Allocation found. For (P2), `rho_pm` is the minimized total power
    /// (normalized) and `θ` its split. Infeasible (P1) falls back to silence.
    pub allocation: PowerAllocation,
    /// SINR_cpu (P1) or total normalized power (P2).
    pub objective: f64,
    /// Optimal or infeasible.
    pub status: Status,
    /// Bisection iterations performed.
    pub iterations: usize,
    /// Labels of constraints active at the solution (within 10·tol).
    pub active_constraints: Vec<String>,
}

/// Equal power allocation `(½, ½)` of a normalized budget.
pub fn epa_allocation(rho_pm: f64) -> PowerAllocation {
    PowerAllocation::epa(rho_pm)
}

/// Bisection iteration count `⌈log₂(range/ε)⌉` (zero when already converged).
pub fn bisection_iterations(range: f64, eps: f64) -> usize {
    if range <= eps {
        0
    } else {
        (range / eps).log2().ceil() as usize
    }
}

/// Monitoring constraint `SINR_pm ≥ SINR_1` as a half-plane in (θ_t, θ_1) or,
/// with primed coefficients, in absolute powers. Both sides are divided by
/// the desired-signal coefficients to keep the constraint well scaled.
fn monitoring_halfplane(q: &[f64; 12]) -> HalfPlane {
    // (q2x + q3y + q4)/q1 ≤ (q6x + q7y + q8)/q5
    HalfPlane::le(q[1] / q[0] - q[5] / q[4], q[2] / q[0] - q[6] / q[4], q[7] / q[4] - q[3] / q[0])
}

fn label_active(checks: &[(&str, f64)], tol: f64) -> Vec<String> {
    checks.iter().filter(|(_, r)| r.abs() <= tol).map(|(l, _)| l.to_string()).collect()
}

/// Solves (P1): maximizes `t` with `q10θ_t + q11θ_1 + q12 ≥ t·q9` over the
/// simplex and the monitoring constraint. `t` is bracketed by the unjammed
/// value `q12/q9` and the full-power value `(max(q10, q11) + q12)/q9`;
/// `tol` is relative to `t_min`.
pub fn solve_p1(q: &QCoefficients, tol: f64) -> OptimizationResult {
    assert!(tol > 0.0, "tolerance must be positive");
    let c = &q.q;
    let simplex = HalfPlane::le(1.0, 1.0, 1.0);
    let monitoring = monitoring_halfplane(c);
    let base = FeasibilityProblem2D { constraints: vec![simplex, monitoring] };
    let Some(mut best) = feasible_2d(&base) else {
        let silent = PowerAllocation::passive(q.rho_pm);
        return OptimizationResult {
            allocation: silent,
            objective: q.sinr_cpu(&silent),
            status: Status::Infeasible,
            iterations: 0,
            active_constraints: vec![],
        };
    };
    let mut t_min = c[11] / c[8];
    let mut t_max = (c[9].max(c[10]) + c[11]) / c[8];
    let eps = tol * t_min;
    let iterations = bisection_iterations(t_max - t_min, eps);
    for _ in 0..iterations {
        let t = 0.5 * (t_min + t_max);
        let mut p = base.clone();
        // (q10θ_t + q11θ_1 + q12)/q9 ≥ t
        p.constraints.push(HalfPlane::ge(c[9] / c[8], c[10] / c[8], t - c[11] / c[8]));
        match feasible_2d(&p) {
            Some(w) => {
                t_min = t;
                best = w;
            }
            None => t_max = t,
        }
    }
    let allocation = PowerAllocation::new(best.0, best.1, q.rho_pm);
    let mon = monitoring.residual(best.0, best.1) / monitoring.a.hypot(monitoring.b).max(1e-300);
    let active_constraints = label_active(&[("total_power", best.0 + best.1 - 1.0), ("monitoring", mon)], 10.0 * tol);
    OptimizationResult {
        objective: q.sinr_cpu(&allocation),
        allocation,
        status: Status::Optimal,
        iterations,
        active_constraints,
    }
}

/// Solves (P2): minimal total normalized power `x + y` (x toward the target,
/// y toward the suspicious UE) with `SINR_cpu ≤ kappa`, successful monitoring
/// and `x + y ≤ budget`. Bisection runs on `ς = 1/(x + y)` over
/// `[1/budget, 1/p_lb]`, where `p_lb` is the largest power that either
/// constraint alone provably requires; `ε = tol/budget` bounds the relative
/// power error by `tol`.
pub fn solve_p2(q: &QCoefficients, kappa: f64, budget: f64, tol: f64) -> OptimizationResult {
    assert!(kappa > 0.0 && budget > 0.0 && tol > 0.0, "kappa, budget and tol must be positive");
    let c = &q.primed();
    let cap_rhs = c[8] / kappa - c[11];
    let cap = HalfPlane::ge(c[9] / c[8], c[10] / c[8], cap_rhs / c[8]);
    let monitoring = monitoring_halfplane(c);
    let infeasible = || OptimizationResult {
        allocation: PowerAllocation::passive(0.0),
        objective: f64::INFINITY,
        status: Status::Infeasible,
        iterations: 0,
        active_constraints: vec![],
    };
    // Silence already satisfies both constraints.
    if cap.residual(0.0, 0.0) <= 0.0 && monitoring.residual(0.0, 0.0) <= 0.0 {
        return OptimizationResult {
            allocation: PowerAllocation::passive(0.0),
            objective: 0.0,
            status: Status::Optimal,
            iterations: 0,
            active_constraints: vec![],
        };
    }
    let with_sum_cap = |s: f64| FeasibilityProblem2D {
        constraints: vec![cap, monitoring, HalfPlane::le(1.0, 1.0, s)],
    };
    let Some(mut best) = feasible_2d(&with_sum_cap(budget)) else {
        return infeasible();
    };
    // Single-constraint lower bounds on x + y: a·x + b·y ≥ d needs x + y ≥ d/max(a, b).
    let lower = |h: &HalfPlane| {
        let (a, b, d) = (-h.a, -h.b, -h.c);
        if d <= 0.0 {
            0.0
        } else {
            d / a.max(b)
        }
    };
    let p_lb = lower(&cap).max(lower(&monitoring)).min(budget);
    let mut s_min = 1.0 / budget;
    let mut s_max = 1.0 / p_lb;
    let eps = tol / budget;
    let iterations = bisection_iterations(s_max - s_min, eps);
    for _ in 0..iterations {
        let s = 0.5 * (s_min + s_max);
        match feasible_2d(&with_sum_cap(1.0 / s)) {
            Some(w) => {
                s_min = s;
                best = w;
            }
            None => s_max = s,
        }
    }
    let total = best.0 + best.1;
    let allocation = PowerAllocation::new(best.0 / total, best.1 / total, total);
    let norm = |h: &HalfPlane| h.residual(best.0, best.1) / h.a.hypot(h.b).max(1e-300) / total.max(1e-300);
    let active_constraints = label_active(&[("sensing_cap", norm(&cap)), ("monitoring", norm(&monitoring))], 10.0 * tol);
    OptimizationResult { allocation, objective: total, status: Status::Optimal, iterations, active_constraints }
}
