mod common;

use barrierlab::barrier::UniversalBarrier;
use barrierlab::geometry::{hypercube, standard_simplex, Tolerances};
use barrierlab::solver::{analytic_center, solve_lp, vertex_minimum, LPProblem, SolverParams};
use common::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn center_of_unit_interval_is_its_midpoint() {
    let b = UniversalBarrier::new(hypercube::<f64>(1, 0.0, 1.0), tol()).unwrap();
    let (x, _) = analytic_center(&b, &[0.2], &SolverParams::default()).unwrap();
    assert!((x[0] - 0.5).abs() <= 1e-9);
}

#[test]
fn center_of_unit_triangle_matches_grid_refinement() {
    let b = UniversalBarrier::new(standard_simplex::<f64>(2, 1.0), tol()).unwrap();
    let (x, _) = analytic_center(&b, &[0.2, 0.6], &SolverParams::default()).unwrap();
    let e = b.eval(&x).unwrap();
    assert!(e.grad.iter().all(|g| g.abs() <= 1e-8), "{:?}", e.grad);
    // shrinking grid search on phi
    let (mut cx, mut cy, mut step) = (1.0 / 3.0 + 0.05, 1.0 / 3.0 - 0.04, 0.05);
    while step > 1e-7 {
        let mut best = (b.value(&[cx, cy]).unwrap(), cx, cy);
        for i in -4..=4 {
            for j in -4..=4 {
                let p = [cx + i as f64 * step / 4.0, cy + j as f64 * step / 4.0];
                if let Ok(v) = b.value(&p) {
                    if v < best.0 {
                        best = (v, p[0], p[1]);
                    }
                }
            }
        }
        (cx, cy) = (best.1, best.2);
        step /= 2.0;
    }
    assert!((cx - x[0]).abs() <= 1e-6 && (cy - x[1]).abs() <= 1e-6, "grid ({cx}, {cy}) vs {x:?}");
}

#[test]
fn random_lps_match_brute_force_and_stay_interior() {
    for run in 0..5 {
        let mut r = rng(50 + run);
        let (p, rows) = random_polytope(&mut r, 3, 10, 15);
        let c = unit(&mut r, 3);
        let lp = LPProblem::new(p.clone(), c.clone(), 1e-6).unwrap();
        let s = solve_lp(&lp, &SolverParams::default()).unwrap();
        let truth = brute_force_min(3, &rows, &c);
        assert!((truth - vertex_minimum(&p, &c).0).abs() <= 1e-9);
        let gap = s.objective - truth;
        assert!(gap.abs() <= 1e-6 && gap <= s.gap_bound + 1e-9, "gap {gap}, n/t {}", s.gap_bound);
        assert!(s.certified_gap >= s.gap_bound);
        for w in s.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-9);
            assert!(w[1].t > w[0].t);
        }
        assert!(s.trace.iter().all(|st| p.check_interior(&st.x, &tol()).is_ok()));
    }
}

#[test]
fn iterations_grow_affinely_in_log_inverse_eps() {
    let mut r = rng(60);
    let (p, _) = random_polytope(&mut r, 3, 10, 12);
    let c = unit(&mut r, 3);
    let eps: Vec<f64> = (1..=6).map(|i| 10f64.powi(-i)).collect();
    let iters: Vec<f64> = eps
        .iter()
        .map(|&e| solve_lp(&LPProblem::new(p.clone(), c.clone(), e).unwrap(), &SolverParams::default()).unwrap().iterations as f64)
        .collect();
    let xs: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, iters.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&iters).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = iters.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);
    assert!(r2 >= 0.95, "R^2 {r2}, iterations {iters:?}");
    assert!(iters.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn iteration_counts_scale_with_sqrt_n() {
    // reported only: per-dimension constant C in iterations ≈ C sqrt(n) log(1/eps)
    for n in 2..=4 {
        let lp = LPProblem::new(hypercube::<f64>(n, -1.0, 1.0), vec![1.0; n], 1e-6).unwrap();
        let s = solve_lp(&lp, &SolverParams::default()).unwrap();
        let c = s.iterations as f64 / ((n as f64).sqrt() * 1e6f64.ln());
        assert!(c.is_finite() && c > 0.0);
        assert!((s.objective + n as f64).abs() <= 1e-6);
    }
}
