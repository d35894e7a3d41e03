//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! values, standard errors and runtimes behind each verdict.
//!
//! The process exits successfully whenever the suite ran to completion; the
//! verdict lines are the deliverable, and a failing criterion is reported,
//! not hidden. Set `ACCEPTANCE_STRICT=1` to turn any FAIL into a non-zero exit.

mod common;

use std::time::Instant;

use cfisac::estimation::gamma_coefficient;
use cfisac::experiments::{ensemble_q, evaluate, power_savings, validate_instance, validation_allocations, Scheme};
use cfisac::metrics::{msp, proportion_stderr, sdp, EnsembleRecord};
use cfisac::montecarlo::McConfig;
use cfisac::optimizer::{bisection_iterations, solve_p1, solve_p2, Status};
use cfisac::scenario::{generate_realization, SystemParams};
use cfisac::sinr::{
    asymptotic_sinr_cpu_limit, asymptotic_sinr_monitor_limit, asymptotic_sinr_ue_limit, from_db, q_coefficients,
    sinr_cpu, sinr_monitor, sinr_ue, to_db, Instance, PowerAllocation,
};
use common::{p1_oracle, p2_oracle, random_q, rel_diff};
use rand::{Rng, SeedableRng};

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(&mut self, id: u32, title: &str, pass: bool, detail: String, started: Instant) {
        if !pass {
            self.failures += 1;
        }
        println!(
            "criterion {id} [{}] {title}: {detail} ({:.1} s)",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
    }

    fn note(&self, id: u32, text: String) {
        println!("criterion {id} [info] {text}");
    }
}

const REALIZATIONS: usize = 200;

/// Criteria 1 and 2: closed forms versus Monte Carlo on the reduced network.
fn closed_form_validation(suite: &mut Suite) {
    let t = Instant::now();
    let params = SystemParams::reduced();
    let inst = Instance::new(params.clone(), 0);
    let allocs = validation_allocations(params.rho_pm(), 3, params.seed);
    let draws = 20_000;
    let report = validate_instance(&inst, &allocs, draws, McConfig::default().seed, 0.02, 0.03);
    let elapsed = t.elapsed().as_secs_f64();
    let exact = |c: &cfisac::experiments::TermCheck| c.receiver.starts_with("ue") || c.receiver == "cpu";
    let worst = |f: &dyn Fn(&cfisac::experiments::TermCheck) -> bool| {
        report
            .checks
            .iter()
            .filter(|c| c.counted && f(c))
            .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
            .map(|c| {
                format!(
                    "worst {} {} {} err {:.2}% (MC s.e. {:.2}%)",
                    c.receiver,
                    c.allocation,
                    c.term,
                    100.0 * c.rel_err,
                    100.0 * c.rel_stderr
                )
            })
            .unwrap_or_default()
    };
    let max_se = report
        .checks
        .iter()
        .filter(|c| c.counted && c.rel_stderr.is_finite())
        .map(|c| c.rel_stderr)
        .fold(0.0, f64::max);
    let e1 = report.max_error(exact);
    let n1 = report.checks.iter().filter(|c| c.counted && exact(c)).count();
    suite.report(
        1,
        "UE and CPU closed forms vs Monte Carlo (2%)",
        e1 <= 0.02 && elapsed < 120.0,
        format!(
            "{n1} term checks over {} allocations, {draws} draws, max err {:.2}%, {}; largest MC s.e. {:.2}%",
            allocs.len(),
            100.0 * e1,
            worst(&exact),
            100.0 * max_se
        ),
        t,
    );
    let t2 = Instant::now();
    let is_mon = |c: &cfisac::experiments::TermCheck| c.receiver == "monitor";
    let e2 = report.max_error(is_mon);
    suite.report(
        2,
        "monitor closed form vs Monte Carlo (3%)",
        e2 <= 0.03 && elapsed < 120.0,
        format!("max err {:.2}%, {}; shares the {elapsed:.1} s run above", 100.0 * e2, worst(&is_mon)),
        t2,
    );
    let gauss = report
        .checks
        .iter()
        .filter(|c| c.receiver == "monitor_gaussian_bu" && (c.term == "bu" || c.term == "sinr"))
        .map(|c| c.rel_err)
        .fold(0.0, f64::max);
    suite.note(
        2,
        format!("Gaussian-approximation BU form, for comparison: max err on bu/sinr {:.1}%", 100.0 * gauss),
    );
}

/// Criterion 3: large-N_pm limits with the jamming budget spread over the array.
fn asymptotic_limits(suite: &mut Suite) {
    let t = Instant::now();
    let eval = |n_pm: usize, sigma_si: f64| {
        let params = SystemParams { n_pm, sigma_si, ..SystemParams::default() };
        let inst = Instance::new(params.clone(), 0);
        let total = params.rho_pm();
        let a = PowerAllocation::epa(total / n_pm as f64);
        let mut errs: Vec<(String, f64)> = (0..params.k_ues)
            .map(|k| {
                let e = rel_diff(sinr_ue(&inst, k, &a).sinr, asymptotic_sinr_ue_limit(&inst, k, total), 0.0);
                (format!("SINR_{}", k + 1), e)
            })
            .collect();
        errs.push(("SINR_pm".into(), rel_diff(sinr_monitor(&inst, &a).sinr, asymptotic_sinr_monitor_limit(&inst), 0.0)));
        errs.push(("SINR_cpu".into(), rel_diff(sinr_cpu(&inst, &a).sinr, asymptotic_sinr_cpu_limit(&inst, total), 0.0)));
        errs
    };
    let errs = eval(1 << 14, SystemParams::default().sigma_si);
    let fmt = |e: &[(String, f64)]| e.iter().map(|(n, v)| format!("{n} {:.1e}", v)).collect::<Vec<_>>().join(", ");
    let pass = errs.iter().all(|(_, e)| *e <= 0.02);
    suite.report(3, "large-array limits at N_pm = 2^14 (2%)", pass, format!("relative gaps: {}", fmt(&errs)), t);
    for exp in [20usize, 26, 32] {
        let e = eval(1 << exp, SystemParams::default().sigma_si);
        suite.note(3, format!("N_pm = 2^{exp}: SINR_pm gap {:.1e}", e.iter().find(|(n, _)| n == "SINR_pm").unwrap().1));
    }
    let e = eval(1 << 14, 0.0);
    suite.note(3, format!("N_pm = 2^14 without residual self-interference: {}", fmt(&e)));
}

/// Criterion 4: bisection solvers versus zooming grid searches.
fn optimizer_oracles(suite: &mut Suite) {
    let t = Instant::now();
    let tol = 1e-7;
    let n = 1000u64;
    let mut worst = (0.0f64, 0.0f64);
    let (mut both1, mut both2, mut inf_agree, mut thin, mut iter_bad, mut status_bad) = (0, 0, 0, 0, 0, 0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    for seed in 0..n {
        let q = random_q(seed, 1.0);
        let c = q.q;
        // (P1)
        let r = solve_p1(&q, tol);
        match (r.status, p1_oracle(&q)) {
            (Status::Optimal, Some(o)) => {
                both1 += 1;
                worst.0 = worst.0.max(rel_diff(r.objective, o, 0.0));
                let (tmin, tmax) = (c[11] / c[8], (c[9].max(c[10]) + c[11]) / c[8]);
                if r.iterations != bisection_iterations(tmax - tmin, tol * tmin) {
                    iter_bad += 1;
                }
            }
            (Status::Infeasible, None) => inf_agree += 1,
            // A feasible set thinner than one grid cell: accept if the witness is genuinely feasible.
            (Status::Optimal, None) if q.monitoring_margin(&r.allocation) >= -1e-9 * (c[0] * c[7]).abs() => thin += 1,
            _ => status_bad += 1,
        }
        // (P2): cap between full-power and unjammed sensing SINR.
        let u: f64 = rng.random_range(0.0..1.2);
        let kappa = c[8] / (c[11] + u * c[9].max(c[10]));
        let budget = 1.0;
        let r = solve_p2(&q, kappa, budget, tol);
        match (r.status, p2_oracle(&q, kappa, budget)) {
            (Status::Optimal, Some(o)) => {
                both2 += 1;
                worst.1 = worst.1.max(rel_diff(r.objective, o, 1e-12));
                if r.iterations > 0 {
                    let lb = |a: f64, b: f64, d: f64| if d <= 0.0 { 0.0 } else { d / a.max(b) };
                    let p_lb = lb(c[9], c[10], c[8] / kappa - c[11])
                        .max(lb(c[2] / c[0] - c[6] / c[4], c[1] / c[0] - c[5] / c[4], 0.0).max(lb(
                            c[5] / c[4] - c[1] / c[0],
                            c[6] / c[4] - c[2] / c[0],
                            c[3] / c[0] - c[7] / c[4],
                        )))
                        .min(budget);
                    if r.iterations != bisection_iterations(1.0 / p_lb - 1.0 / budget, tol / budget) {
                        iter_bad += 1;
                    }
                }
            }
            (Status::Infeasible, None) => inf_agree += 1,
            (Status::Optimal, None) => thin += 1,
            _ => status_bad += 1,
        }
    }
    let pass = worst.0 <= 1e-4 && worst.1 <= 1e-4 && iter_bad == 0 && status_bad == 0 && t.elapsed().as_secs_f64() < 60.0;
    suite.report(
        4,
        "P1/P2 vs 500x500 zooming grid oracles (1e-4)",
        pass,
        format!(
            "{n} instances: P1 max rel diff {:.1e} over {both1} feasible, P2 max rel diff {:.1e} over {both2} feasible, \
             {inf_agree} agreed infeasible, {thin} sub-grid feasible sets, {status_bad} status mismatches, {iter_bad} iteration-count mismatches",
            worst.0, worst.1
        ),
        t,
    );
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Criteria 5 and 6: optimized versus equal allocation on the full-size network.
fn figure_4_and_5(suite: &mut Suite) {
    let t = Instant::now();
    let mut gap_primary = f64::NAN;
    for p_pm in [1.0, 2.0, 3.0] {
        let params = SystemParams { n_pm: 32, p_pm, ..SystemParams::default() };
        let qs = ensemble_q(&params, REALIZATIONS);
        let epa: Vec<f64> = qs.iter().map(|q| evaluate(q, Scheme::Epa, 1e-6).sinr_cpu).collect();
        let opa: Vec<EnsembleRecord> = qs.iter().map(|q| evaluate(q, Scheme::Opa, 1e-6)).collect();
        let feasible = opa.iter().filter(|r| r.status == Status::Optimal).count();
        let gap = to_db(mean(&epa)) - to_db(mean(&opa.iter().map(|r| r.sinr_cpu).collect::<Vec<_>>()));
        let fidx: Vec<usize> = (0..opa.len()).filter(|&i| opa[i].status == Status::Optimal).collect();
        let fgap = if fidx.is_empty() {
            f64::NAN
        } else {
            to_db(mean(&fidx.iter().map(|&i| epa[i]).collect::<Vec<_>>()))
                - to_db(mean(&fidx.iter().map(|&i| opa[i].sinr_cpu).collect::<Vec<_>>()))
        };
        if p_pm == 1.0 {
            gap_primary = gap;
        }
        suite.note(
            5,
            format!(
                "P_pm = {p_pm} W: EPA mean {:.2} dB, OPA mean {:.2} dB, gap {gap:.2} dB; P1 feasible in {feasible}/{REALIZATIONS} (gap on that subset {fgap:.2} dB)",
                to_db(mean(&epa)),
                to_db(mean(&opa.iter().map(|r| r.sinr_cpu).collect::<Vec<_>>()))
            ),
        );
    }
    suite.report(
        5,
        "mean SINR_cpu reduction OPA vs EPA at N_pm = 32 in [2, 4] dB",
        (2.0..=4.0).contains(&gap_primary),
        format!("gap {gap_primary:.2} dB at P_pm = 1 W, {REALIZATIONS} realizations (infeasible P1 stays silent)"),
        t,
    );

    let t = Instant::now();
    let params = SystemParams { n_pm: 32, p_pm: 1.0, ..SystemParams::default() };
    let qs = ensemble_q(&params, REALIZATIONS);
    let epa: Vec<EnsembleRecord> = qs.iter().map(|q| evaluate(q, Scheme::Epa, 1e-6)).collect();
    let opa: Vec<EnsembleRecord> = qs.iter().map(|q| evaluate(q, Scheme::Opa, 1e-6)).collect();
    let kappa = from_db(8.0);
    let (se, so) = (sdp(&epa, kappa).unwrap(), sdp(&opa, kappa).unwrap());
    let reduction = if se > 0.0 { (se - so) / se } else { f64::NAN };
    let best = epa.iter().map(|r| r.sinr_cpu).fold(f64::NEG_INFINITY, f64::max);
    suite.report(
        6,
        "SDP at 8 dB: OPA at least 50% below EPA",
        reduction >= 0.5,
        format!(
            "SDP EPA {se:.3} ± {:.3}, OPA {so:.3} ± {:.3}, relative reduction {}; largest EPA SINR_cpu {:.1} dB",
            proportion_stderr(se, REALIZATIONS),
            proportion_stderr(so, REALIZATIONS),
            if reduction.is_nan() { "undefined (EPA SDP is zero)".to_string() } else { format!("{:.0}%", 100.0 * reduction) },
            to_db(best)
        ),
        t,
    );
}

/// Criterion 7: jamming power saved by (P2) at the EPA sensing level.
fn figure_9(suite: &mut Suite) {
    let t = Instant::now();
    let mut results = Vec::new();
    for (n_pm, lo, hi) in [(32usize, 0.38, 0.49), (8, 0.25, 0.37)] {
        let mut savings = Vec::new();
        let mut infeasible = 0;
        for p_pm in [1.0, 2.0, 3.0] {
            let params = SystemParams { n_pm, p_pm, ..SystemParams::default() };
            for s in power_savings(&params, REALIZATIONS, 1e-6) {
                match s.saving {
                    Some(v) => savings.push(v),
                    None => infeasible += 1,
                }
            }
        }
        let m = if savings.is_empty() { f64::NAN } else { mean(&savings) };
        results.push((n_pm, m, lo, hi, savings.len(), infeasible));
    }
    let pass = results.iter().all(|&(_, m, lo, hi, _, _)| (lo..=hi).contains(&m));
    let detail = results
        .iter()
        .map(|&(n, m, lo, hi, ok, bad)| {
            format!("N_pm = {n}: mean saving {} (target [{:.0}%, {:.0}%]) over {ok} feasible, {bad} infeasible", pct(m), 100.0 * lo, 100.0 * hi)
        })
        .collect::<Vec<_>>()
        .join("; ");
    suite.report(7, "P2 power saving vs EPA", pass, detail, t);
}

fn pct(v: f64) -> String {
    if v.is_nan() {
        "n/a".into()
    } else {
        format!("{:.1}%", 100.0 * v)
    }
}

/// Criterion 8: always-on structural properties.
fn properties(suite: &mut Suite) {
    let t = Instant::now();
    let mut failed: Vec<&str> = Vec::new();
    let params = SystemParams::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);

    // SINR_cpu non-increasing in each jamming share.
    let mut mono = true;
    let mut q_agree = true;
    for i in 0..20 {
        let inst = Instance::new(params.clone(), i);
        let rho = params.rho_pm();
        let q = q_coefficients(&inst, rho);
        for _ in 0..5 {
            let (x, y): (f64, f64) = (rng.random_range(0.0..0.5), rng.random_range(0.0..0.5));
            let base = sinr_cpu(&inst, &PowerAllocation::new(x, y, rho)).sinr;
            mono &= sinr_cpu(&inst, &PowerAllocation::new(x + 0.1, y, rho)).sinr <= base;
            mono &= sinr_cpu(&inst, &PowerAllocation::new(x, y + 0.1, rho)).sinr <= base;
        }
        // q-form vs direct form on simplex samples (100 overall).
        for _ in 0..5 {
            let (mut x, mut y): (f64, f64) = (rng.random(), rng.random());
            if x + y > 1.0 {
                (x, y) = (1.0 - x, 1.0 - y);
            }
            let a = PowerAllocation::new(x, y, rho);
            for (u, v) in [
                (q.sinr_cpu(&a), sinr_cpu(&inst, &a).sinr),
                (q.sinr_monitor(&a), sinr_monitor(&inst, &a).sinr),
                (q.sinr_ue1(&a), sinr_ue(&inst, 0, &a).sinr),
            ] {
                q_agree &= rel_diff(u, v, 0.0) <= 1e-10;
            }
        }
    }
    if !mono {
        failed.push("SINR_cpu monotonicity");
    }
    if !q_agree {
        failed.push("q-form agreement");
    }

    // γ ≤ β and γ_{m,1} non-increasing in the spoofing power.
    let mut gamma_ok = true;
    let mut spoof_ok = true;
    for i in 0..20 {
        let real = generate_realization(&params, i);
        for m in 0..params.m_c {
            for k in 0..params.k_ues {
                gamma_ok &= gamma_coefficient(m, k, &real, &params) <= real.beta_c_ue[m][k];
            }
            let mut prev = f64::INFINITY;
            for p in [0.0, 0.01, 0.1, 1.0, 10.0] {
                let g = gamma_coefficient(m, 0, &real, &SystemParams { p_p_pm: p, ..params.clone() });
                spoof_ok &= g <= prev;
                prev = g;
            }
        }
    }
    if !gamma_ok {
        failed.push("gamma <= beta");
    }
    if !spoof_ok {
        failed.push("spoofing monotonicity");
    }

    // MSP over P1-feasible realizations and dB/linear invariance.
    let opa: Vec<EnsembleRecord> = ensemble_q(&params, REALIZATIONS)
        .iter()
        .map(|q| evaluate(q, Scheme::Opa, 1e-6))
        .filter(|r| r.status == Status::Optimal)
        .collect();
    let n_feasible = opa.len();
    if !opa.is_empty() && msp(&opa).unwrap() != 1.0 {
        failed.push("MSP = 1 on feasible realizations");
    }
    let epa = cfisac::experiments::ensemble(&params, REALIZATIONS, Scheme::Epa, 1e-6);
    let in_db: Vec<EnsembleRecord> = epa
        .iter()
        .map(|r| EnsembleRecord::new(to_db(r.sinr_ue1), to_db(r.sinr_monitor), to_db(r.sinr_cpu)))
        .collect();
    if msp(&epa).unwrap() != msp(&in_db).unwrap() {
        failed.push("dB/linear MSP invariance");
    }

    // Determinism of seeded runs.
    let a = cfisac::experiments::figure("fig5", &SystemParams::reduced(), &cfisac::experiments::FigureOptions { realizations: 20, ..Default::default() }).unwrap();
    let b = cfisac::experiments::figure("fig5", &SystemParams::reduced(), &cfisac::experiments::FigureOptions { realizations: 20, ..Default::default() }).unwrap();
    let same = a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.value.to_bits() == y.value.to_bits());
    if !same {
        failed.push("determinism");
    }

    suite.report(
        8,
        "property suite",
        failed.is_empty(),
        if failed.is_empty() {
            format!("7 properties hold (MSP checked on {n_feasible} P1-feasible realizations; see also the proptest target)")
        } else {
            format!("violated: {}", failed.join(", "))
        },
        t,
    );
}

fn main() {
    let mut suite = Suite { failures: 0 };
    println!("acceptance suite: {REALIZATIONS} realizations per ensemble");
    closed_form_validation(&mut suite);
    asymptotic_limits(&mut suite);
    optimizer_oracles(&mut suite);
    figure_4_and_5(&mut suite);
    figure_9(&mut suite);
    properties(&mut suite);
    println!("acceptance summary: {} of 8 criteria pass", 8 - suite.failures);
    if suite.failures > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
