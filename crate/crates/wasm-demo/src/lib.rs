//! Browser bindings for three interactive views of the `cfisac` model:
//! SINRs along a jamming-power sweep, the (P1) allocation of one network
//! realization, and ensemble CDFs of the malicious sensing SINR.
//!
//! Every function takes the configuration as a JSON object of `SystemParams`
//! overrides (`"{}"` for the defaults) and returns a JSON string, so the page
//! needs no bindings beyond `JSON.parse`. Everything runs on the calling
//! thread with closed-form expressions; no Monte Carlo is involved.
//!
//! ## Example
//!
//! ```rust
//! let json = wasm_demo::sinr_sweep("{}", 0, 0.5, 5).unwrap();
//! let v: serde_json::Value = serde_json::from_str(&json).unwrap();
//! assert_eq!(v["share"].as_array().unwrap().len(), 5);
//! ```

use cfisac::metrics::EmpiricalCdf;
use cfisac::optimizer::{solve_p1, Status, DEFAULT_TOL};
use cfisac::scenario::SystemParams;
use cfisac::sinr::{q_coefficients, sinr_cpu, sinr_monitor, sinr_ue, to_db, Instance, PowerAllocation};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn params(config_json: &str) -> Result<SystemParams, JsError> {
    let text = if config_json.trim().is_empty() { "{}" } else { config_json };
    SystemParams::from_json_str(text).map_err(|e| JsError::new(&e.to_string()))
}

fn json(value: &impl Serialize) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

#[derive(Serialize)]
struct Sweep {
    share: Vec<f64>,
    sinr_ue1_db: Vec<f64>,
    sinr_monitor_db: Vec<f64>,
    sinr_cpu_db: Vec<f64>,
}

/// SINRs (dB) of UE 1, the monitor and the CPU as the fraction of the jamming
/// budget in use grows from 0 to 1, with `target_split` of it aimed at the
/// target and the rest at UE 1.
#[wasm_bindgen]
pub fn sinr_sweep(config_json: &str, realization: u32, target_split: f64, points: u32) -> Result<String, JsError> {
    let p = params(config_json)?;
    if !(0.0..=1.0).contains(&target_split) || points < 2 {
        return Err(JsError::new("target_split must lie in [0, 1] and points must be at least 2"));
    }
    let inst = Instance::new(p.clone(), u64::from(realization));
    let rho = p.rho_pm();
    let mut out = Sweep { share: vec![], sinr_ue1_db: vec![], sinr_monitor_db: vec![], sinr_cpu_db: vec![] };
    for i in 0..points {
        let s = f64::from(i) / f64::from(points - 1);
        let a = PowerAllocation::new(s * target_split, s * (1.0 - target_split), rho);
        out.share.push(s);
        out.sinr_ue1_db.push(to_db(sinr_ue(&inst, 0, &a).sinr));
        out.sinr_monitor_db.push(to_db(sinr_monitor(&inst, &a).sinr));
        out.sinr_cpu_db.push(to_db(sinr_cpu(&inst, &a).sinr));
    }
    json(&out)
}

#[derive(Serialize)]
struct Solve {
    feasible: bool,
    theta_t: f64,
    theta_1: f64,
    iterations: usize,
    epa: [f64; 3],
    optimized: [f64; 3],
    active_constraints: Vec<String>,
}

/// Solves (P1) on one realization; SINR triples are (UE 1, monitor, CPU) in dB.
#[wasm_bindgen]
pub fn solve_p1_json(config_json: &str, realization: u32) -> Result<String, JsError> {
    let p = params(config_json)?;
    let inst = Instance::new(p.clone(), u64::from(realization));
    let rho = p.rho_pm();
    let q = q_coefficients(&inst, rho);
    let r = solve_p1(&q, DEFAULT_TOL);
    let triple = |a: &PowerAllocation| [to_db(q.sinr_ue1(a)), to_db(q.sinr_monitor(a)), to_db(q.sinr_cpu(a))];
    json(&Solve {
        feasible: r.status == Status::Optimal,
        theta_t: r.allocation.theta_t,
        theta_1: r.allocation.theta_1,
        iterations: r.iterations,
        epa: triple(&PowerAllocation::epa(rho)),
        optimized: triple(&r.allocation),
        active_constraints: r.active_constraints,
    })
}

#[derive(Serialize)]
struct Cdf {
    x: Vec<f64>,
    f: Vec<f64>,
}

#[derive(Serialize)]
struct Cdfs {
    passive: Cdf,
    epa: Cdf,
    opa: Cdf,
    p1_feasible: usize,
}

/// Empirical CDFs of SINR_cpu (dB) over `realizations` networks for silent,
/// equal-power and (P1)-optimized monitoring.
#[wasm_bindgen]
pub fn sensing_cdf(config_json: &str, realizations: u32) -> Result<String, JsError> {
    let p = params(config_json)?;
    if realizations == 0 {
        return Err(JsError::new("realizations must be positive"));
    }
    let rho = p.rho_pm();
    let (mut passive, mut epa, mut opa, mut feasible) = (vec![], vec![], vec![], 0);
    for i in 0..u64::from(realizations) {
        let q = q_coefficients(&Instance::new(p.clone(), i), rho);
        passive.push(to_db(q.sinr_cpu(&PowerAllocation::passive(rho))));
        epa.push(to_db(q.sinr_cpu(&PowerAllocation::epa(rho))));
        let r = solve_p1(&q, DEFAULT_TOL);
        feasible += usize::from(r.status == Status::Optimal);
        opa.push(to_db(q.sinr_cpu(&r.allocation)));
    }
    let cdf = |v: &[f64]| -> Result<Cdf, JsError> {
        let steps = EmpiricalCdf::new(v).map_err(|e| JsError::new(&e.to_string()))?.steps();
        Ok(Cdf { x: steps.iter().map(|s| s.0).collect(), f: steps.iter().map(|s| s.1).collect() })
    };
    json(&Cdfs { passive: cdf(&passive)?, epa: cdf(&epa)?, opa: cdf(&opa)?, p1_feasible: feasible })
}
