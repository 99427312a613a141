mod common;

use barrierlab::barrier::UniversalBarrier;
use barrierlab::geometry::{standard_simplex, volume, Halfspace, Polytope, Simplex, Tolerances};
use barrierlab::moments::{body_moments, marginal_moments, simplex_directional_moment};
use barrierlab::sconcave::bound23;
use common::*;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::Exp1;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn simplex_third_moment_matches_monte_carlo() {
    let mut r = rng(10);
    let verts: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    let s = Simplex::new(verts.clone());
    let h = unit(&mut r, 3);
    let exact = simplex_directional_moment(&s, &h, 3).unwrap();
    let vol = simplex_directional_moment(&s, &h, 0).unwrap();
    // normalised exponentials give uniform barycentric weights
    let n = 1_000_000;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let w: Vec<f64> = (0..4).map(|_| r.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        let t: f64 = (0..3).map(|j| (0..4).map(|i| w[i] * verts[i][j]).sum::<f64>() / total * h[j]).sum();
        let v = t * t * t;
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let sigma = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((exact / vol - mean).abs() <= 3.0 * sigma, "{} vs {mean} ± {sigma}", exact / vol);
}

/// Body volume between two parallel planes `a <= y·h <= b`.
fn slab(p: &Polytope<f64>, h: &[f64], a: f64, b: f64) -> f64 {
    let mut hs = p.halfspaces().to_vec();
    hs.push(Halfspace::new(h.to_vec(), b));
    hs.push(Halfspace::new(h.iter().map(|v| -v).collect(), -a));
    Polytope::from_halfspaces(p.dim(), hs, &tol()).map_or(0.0, |s| volume(&s, &tol()).unwrap())
}

#[test]
fn marginal_density_is_brunn_concave() {
    let mut r = rng(11);
    let n = 3;
    for _ in 0..3 {
        let (p, _) = random_polytope(&mut r, n, 6, 10);
        let h = unit(&mut r, n);
        let proj: Vec<f64> = p.vertices().iter().map(|v| v.iter().zip(&h).map(|(a, b)| a * b).sum()).collect();
        let lo = proj.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let bins = 60;
        let w = (hi - lo) / bins as f64;
        // slice area from a thin slab around each bin centre
        let delta = 1e-6 * (hi - lo);
        let root: Vec<f64> = (0..bins)
            .map(|i| {
                let t = lo + (i as f64 + 0.5) * w;
                (slab(&p, &h, t - delta, t + delta) / (2.0 * delta)).powf(1.0 / (n as f64 - 1.0))
            })
            .collect();
        let eps = 1e-6 * root.iter().cloned().fold(0.0, f64::max);
        for i in 0..bins {
            for j in (i + 2..bins).step_by(2) {
                let mid = root[(i + j) / 2];
                assert!(mid >= 0.5 * (root[i] + root[j]) - eps, "bins {i},{j}: {mid} vs {} {}", root[i], root[j]);
            }
        }
        let total: f64 = (0..bins).map(|i| slab(&p, &h, lo + i as f64 * w, lo + (i + 1) as f64 * w)).sum();
        assert!((total - volume(&p, &tol()).unwrap()).abs() <= 1e-9 * total);
    }
}

#[test]
fn polar_marginals_obey_moment_bounds_at_index_n() {
    let mut r = rng(12);
    for n in 2..=4usize {
        let k = n as f64;
        for _ in 0..4 {
            let (p, _) = random_polytope(&mut r, n, n + 3, 2 * n + 4);
            let b = UniversalBarrier::new(p.clone(), tol()).unwrap();
            for _ in 0..5 {
                let x = interior_point(&mut r, &p, 1e-3);
                let polar = b.polar(&x).unwrap();
                let h = unit(&mut r, n);
                let m = marginal_moments(&polar, &h, &tol()).unwrap();
                assert!(m.mu1 * m.mu1 <= k * (k + 2.0) * m.mu2sq * (1.0 + 1e-8));
                assert!(m.mu3cu <= bound23(n as u32) * m.mu2sq.powf(1.5) * (1.0 + 1e-8));
                assert!(m.raw2 >= m.raw1 * m.raw1 && m.mu2sq >= 0.0);
                assert!((m.mu3cu - m.mu3cu_from_raw()).abs() <= 1e-8 * m.raw3.abs().max(m.mu2sq.powf(1.5)));
            }
        }
    }
}

#[test]
fn index_below_n_is_too_strict_for_simplex_polars() {
    // near a vertex of the triangle the polar marginal is a cone with k = n
    let p = standard_simplex::<f64>(2, 1.0);
    let b = UniversalBarrier::new(p, tol()).unwrap();
    let polar = b.polar(&[1e-4, 1e-4]).unwrap();
    let s = 1.0 / 2f64.sqrt();
    let m = marginal_moments(&polar, &[s, s], &tol()).unwrap();
    let xi = m.mu3cu / m.mu2sq.powf(1.5);
    assert!(xi > bound23(1));
    assert!(xi <= bound23(2) * (1.0 + 1e-8));
    let p = standard_simplex::<f64>(3, 1.0);
    let b = UniversalBarrier::new(p, tol()).unwrap();
    let polar = b.polar(&[1e-4, 1e-4, 1e-4]).unwrap();
    let s = 1.0 / 3f64.sqrt();
    let m = marginal_moments(&polar, &[s, s, s], &tol()).unwrap();
    let xi = m.mu3cu / m.mu2sq.powf(1.5);
    assert!(xi > bound23(2), "{xi} vs {}", bound23(2));
    assert!(xi <= bound23(3) * (1.0 + 1e-8));
}

fn polytope_and_direction() -> impl Strategy<Value = (Polytope<f64>, Vec<f64>)> {
    (2usize..=4, any::<u64>()).prop_map(|(n, seed)| {
        let mut r = rng(seed);
        let p = random_polytope(&mut r, n, n + 2, 2 * n + 3).0;
        (p, unit(&mut r, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn marginal_matches_contracted_body_moments((p, h) in polytope_and_direction()) {
        let m = marginal_moments(&p, &h, &tol()).unwrap();
        let bm = body_moments(&p, &tol()).unwrap();
        let n = p.dim();
        let raw1: f64 = (0..n).map(|i| h[i] * bm.m1[i]).sum::<f64>() / bm.vol;
        let raw2: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| h[i] * bm.m2[i][j] * h[j]).sum::<f64>() / bm.vol;
        prop_assert!((m.vol - bm.vol).abs() <= 1e-10 * bm.vol);
        prop_assert!((m.raw1 - raw1).abs() <= 1e-10 * (1.0 + raw1.abs()));
        prop_assert!((m.raw2 - raw2).abs() <= 1e-10 * raw2);
    }

    #[test]
    fn body_covariance_is_positive_semidefinite((p, h) in polytope_and_direction()) {
        let bm = body_moments(&p, &tol()).unwrap();
        let n = p.dim();
        prop_assert!(bm.vol > 0.0);
        for i in 0..n {
            for j in 0..n {
                prop_assert!((bm.m2[i][j] - bm.m2[j][i]).abs() <= 1e-12 * (1.0 + bm.m2[i][j].abs()));
            }
        }
        // hᵀ Cov h >= 0 for the sampled direction
        let c: Vec<f64> = bm.m1.iter().map(|v| v / bm.vol).collect();
        let var: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| h[i] * (bm.m2[i][j] / bm.vol - c[i] * c[j]) * h[j])
            .sum();
        prop_assert!(var >= -1e-12);
    }
}
