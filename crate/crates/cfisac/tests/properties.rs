//! Randomized invariants over network realizations, allocations and
//! q-coefficients.

mod common;

use cfisac::estimation::gamma_coefficient;
use cfisac::experiments::{evaluate, Scheme};
use cfisac::metrics::{msp, sdp, EmpiricalCdf, EnsembleRecord};
use cfisac::optimizer::{solve_p1, solve_p2, Status};
use cfisac::scenario::{generate_realization, wrapped_distance, SystemParams};
use cfisac::sinr::{q_coefficients, sinr_cpu, sinr_monitor, sinr_ue, to_db, Instance, PowerAllocation};
use proptest::prelude::*;

fn small(seed: u64) -> SystemParams {
    SystemParams { m_c: 6, m_st: 2, m_sr: 2, k_ues: 3, n_ap: 2, n_pm: 8, tau_p: 3, seed, ..SystemParams::default() }
}

fn simplex() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sinr_cpu_non_increasing_in_each_share(seed in 0u64..1000, idx in 0u64..50, (x, y) in simplex(), d in 0.0..0.5f64) {
        let inst = Instance::new(small(seed), idx);
        let rho = inst.params.rho_pm();
        let base = sinr_cpu(&inst, &PowerAllocation::new(x, y, rho)).sinr;
        prop_assert!(sinr_cpu(&inst, &PowerAllocation::new(x + d, y, rho)).sinr <= base);
        prop_assert!(sinr_cpu(&inst, &PowerAllocation::new(x, y + d, rho)).sinr <= base);
    }

    #[test]
    fn gamma_bounded_by_beta(seed in 0u64..1000, idx in 0u64..50) {
        let p = small(seed);
        let real = generate_realization(&p, idx);
        for m in 0..p.m_c {
            for k in 0..p.k_ues {
                let g = gamma_coefficient(m, k, &real, &p);
                prop_assert!(g >= 0.0 && g <= real.beta_c_ue[m][k]);
            }
        }
    }

    #[test]
    fn spoofing_lowers_suspicious_estimate_quality(seed in 0u64..1000, idx in 0u64..50, p1 in 0.0..5.0f64, dp in 0.0..5.0f64) {
        let p = small(seed);
        let real = generate_realization(&p, idx);
        let lo = SystemParams { p_p_pm: p1, ..p.clone() };
        let hi = SystemParams { p_p_pm: p1 + dp, ..p.clone() };
        for m in 0..p.m_c {
            prop_assert!(gamma_coefficient(m, 0, &real, &hi) <= gamma_coefficient(m, 0, &real, &lo));
            // Other UEs are untouched by the spoofing pilot.
            prop_assert_eq!(gamma_coefficient(m, 1, &real, &hi), gamma_coefficient(m, 1, &real, &lo));
        }
    }

    #[test]
    fn q_form_matches_direct_form(seed in 0u64..1000, idx in 0u64..50, (x, y) in simplex()) {
        let inst = Instance::new(small(seed), idx);
        let rho = inst.params.rho_pm();
        let q = q_coefficients(&inst, rho);
        let a = PowerAllocation::new(x, y, rho);
        prop_assert!(rel(q.sinr_cpu(&a), sinr_cpu(&inst, &a).sinr) <= 1e-10);
        prop_assert!(rel(q.sinr_monitor(&a), sinr_monitor(&inst, &a).sinr) <= 1e-10);
        prop_assert!(rel(q.sinr_ue1(&a), sinr_ue(&inst, 0, &a).sinr) <= 1e-10);
    }

    #[test]
    fn p1_feasible_realizations_monitor_successfully(seed in 0u64..1000) {
        let p = SystemParams { sigma_si: 1e-13, ..small(seed) };
        let recs: Vec<EnsembleRecord> = (0..20)
            .map(|i| evaluate(&q_coefficients(&Instance::new(p.clone(), i), p.rho_pm()), Scheme::Opa, 1e-6))
            .filter(|r| r.status == Status::Optimal)
            .collect();
        if !recs.is_empty() {
            prop_assert_eq!(msp(&recs).unwrap(), 1.0);
        }
    }

    #[test]
    fn msp_is_invariant_to_db_conversion(pairs in prop::collection::vec((1e-6..1e6f64, 1e-6..1e6f64), 1..50)) {
        let lin: Vec<EnsembleRecord> = pairs.iter().map(|&(u, m)| EnsembleRecord::new(u, m, 1.0)).collect();
        let db: Vec<EnsembleRecord> = pairs.iter().map(|&(u, m)| EnsembleRecord::new(to_db(u), to_db(m), 0.0)).collect();
        prop_assert_eq!(msp(&lin).unwrap(), msp(&db).unwrap());
    }

    #[test]
    fn sdp_non_increasing_in_kappa(values in prop::collection::vec(1e-6..1e6f64, 1..50), k1 in 1e-6..1e6f64, k2 in 1e-6..1e6f64) {
        let recs: Vec<EnsembleRecord> = values.iter().map(|&c| EnsembleRecord::new(1.0, 1.0, c)).collect();
        let (lo, hi) = (k1.min(k2), k1.max(k2));
        prop_assert!(sdp(&recs, hi).unwrap() <= sdp(&recs, lo).unwrap());
    }

    #[test]
    fn cdf_is_monotone_and_bounded(values in prop::collection::vec(-100.0..100.0f64, 1..60), x1 in -150.0..150.0f64, x2 in -150.0..150.0f64) {
        let c = EmpiricalCdf::new(&values).unwrap();
        let (lo, hi) = (x1.min(x2), x1.max(x2));
        prop_assert!(c.eval(lo) <= c.eval(hi));
        prop_assert!((0.0..=1.0).contains(&c.eval(lo)));
    }

    #[test]
    fn wrapped_distance_is_symmetric_and_bounded(a in (0.0..1000.0f64, 0.0..1000.0f64), b in (0.0..1000.0f64, 0.0..1000.0f64)) {
        let d = wrapped_distance(a.into(), b.into(), 1000.0);
        prop_assert_eq!(d, wrapped_distance(b.into(), a.into(), 1000.0));
        prop_assert!(d <= 500.0 * 2f64.sqrt() + 1e-9);
    }

    #[test]
    fn p1_never_worse_than_any_feasible_allocation(seed in 0u64..1_000_000, (x, y) in simplex()) {
        let q = common::random_q(seed, 1.0);
        let a = PowerAllocation::new(x, y, 1.0);
        let r = solve_p1(&q, 1e-9);
        if q.monitoring_margin(&a) >= 0.0 {
            prop_assert_eq!(r.status, Status::Optimal);
            prop_assert!(r.objective <= q.sinr_cpu(&a) * (1.0 + 1e-6));
        }
    }

    #[test]
    fn p2_power_never_exceeds_any_admissible_point(seed in 0u64..1_000_000, (x, y) in simplex(), u in 0.0..1.2f64) {
        let q = common::random_q(seed, 1.0);
        let c = q.q;
        let kappa = c[8] / (c[11] + u * c[9].max(c[10]));
        let a = PowerAllocation::new(x, y, 1.0);
        let r = solve_p2(&q, kappa, 1.0, 1e-9);
        if q.monitoring_margin(&a) >= 0.0 && q.sinr_cpu(&a) <= kappa {
            prop_assert_eq!(r.status, Status::Optimal);
            prop_assert!(r.objective <= (x + y) * (1.0 + 1e-6) + 1e-12);
        }
    }
}

#[test]
fn seeded_runs_are_deterministic() {
    let a = Instance::new(small(9), 4);
    let b = Instance::new(small(9), 4);
    let alloc = PowerAllocation::epa(a.params.rho_pm());
    assert_eq!(sinr_cpu(&a, &alloc).sinr.to_bits(), sinr_cpu(&b, &alloc).sinr.to_bits());
    assert_ne!(
        sinr_cpu(&a, &alloc).sinr.to_bits(),
        sinr_cpu(&Instance::new(small(10), 4), &alloc).sinr.to_bits()
    );
}
