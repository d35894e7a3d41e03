//! Bisection solvers against brute-force grid oracles on random instances.

mod common;

use cfisac::optimizer::{bisection_iterations, solve_p1, solve_p2, Status};
use common::{p1_oracle, p2_oracle, random_q, rel_diff};

#[test]
fn p1_matches_grid_oracle() {
    for seed in 0..100 {
        let q = random_q(1_000 + seed, 1.0);
        let r = solve_p1(&q, 1e-7);
        match (r.status, p1_oracle(&q)) {
            (Status::Optimal, Some(o)) => assert!(rel_diff(r.objective, o, 0.0) <= 1e-4, "seed {seed}: {} vs {o}", r.objective),
            (Status::Infeasible, None) => {}
            (s, o) => panic!("seed {seed}: solver {s:?}, oracle {o:?}"),
        }
    }
}

#[test]
fn p1_iteration_count_is_log2_of_range_over_eps() {
    for seed in 0..100 {
        let q = random_q(2_000 + seed, 1.0);
        let c = q.q;
        let r = solve_p1(&q, 1e-6);
        if r.status == Status::Optimal {
            let t_min = c[11] / c[8];
            let t_max = (c[9].max(c[10]) + c[11]) / c[8];
            let expected = ((t_max - t_min) / (1e-6 * t_min)).log2().ceil() as usize;
            assert_eq!(r.iterations, expected);
            assert_eq!(r.iterations, bisection_iterations(t_max - t_min, 1e-6 * t_min));
        }
    }
}

#[test]
fn p2_matches_grid_oracle() {
    for seed in 0..100 {
        let q = random_q(3_000 + seed, 1.0);
        let c = q.q;
        for u in [0.3, 0.8] {
            let kappa = c[8] / (c[11] + u * c[9].max(c[10]));
            let r = solve_p2(&q, kappa, 1.0, 1e-7);
            match (r.status, p2_oracle(&q, kappa, 1.0)) {
                (Status::Optimal, Some(o)) => assert!(rel_diff(r.objective, o, 1e-12) <= 1e-4, "seed {seed}: {} vs {o}", r.objective),
                (Status::Infeasible, None) => {}
                (s, o) => panic!("seed {seed}: solver {s:?}, oracle {o:?}"),
            }
        }
    }
}

#[test]
fn p2_above_unjammed_sensing_needs_no_power() {
    for seed in 0..50 {
        let q = random_q(4_000 + seed, 1.0);
        if q.monitoring_margin(&cfisac::sinr::PowerAllocation::passive(1.0)) >= 0.0 {
            let r = solve_p2(&q, 1.01 * q.unjammed_sinr_cpu(), 1.0, 1e-6);
            assert_eq!((r.status, r.objective), (Status::Optimal, 0.0));
        }
    }
}
