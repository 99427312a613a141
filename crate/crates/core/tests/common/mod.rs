//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use barrierlab::geometry::{Halfspace, Polytope, Tolerances};
use barrierlab::{Error, Scalar};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const SEED: u64 = 0xC0FFEE;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

pub fn unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|a| a / norm).collect();
        }
    }
}

/// Rows `a·x <= b` with unit normals and offsets in `[0.5, 1.5]`, rounded to
/// short binary fractions so the exact copies stay cheap.
pub fn random_rows(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<(Vec<f64>, f64)> {
    let round = |v: f64| (v * 1024.0).round() / 1024.0;
    (0..m)
        .map(|_| (unit(rng, n).into_iter().map(round).collect(), round(rng.random_range(0.5..1.5))))
        .collect()
}

pub fn build<S: Scalar>(n: usize, rows: &[(Vec<f64>, f64)]) -> Result<Polytope<S>, Error> {
    let hs = rows
        .iter()
        .map(|(a, b)| Halfspace::new(a.iter().map(|&v| S::from_f64(v)).collect(), S::from_f64(*b)))
        .collect();
    Polytope::from_halfspaces(n, hs, &Tolerances::default())
}

/// A bounded random polytope with between `lo` and `hi` rows (redraws until bounded).
pub fn random_polytope(rng: &mut ChaCha8Rng, n: usize, lo: usize, hi: usize) -> (Polytope<f64>, Vec<(Vec<f64>, f64)>) {
    loop {
        let m = rng.random_range(lo..=hi);
        let rows = random_rows(rng, n, m);
        if let Ok(p) = build::<f64>(n, &rows) {
            return (p, rows);
        }
    }
}

/// Uniform rejection sample from the interior, kept at least `margin` from
/// every facet.
pub fn interior_point(rng: &mut ChaCha8Rng, p: &Polytope<f64>, margin: f64) -> Vec<f64> {
    let (lo, hi) = p.bounding_box();
    loop {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| rng.random_range(*l..*h)).collect();
        if p.distance_to_boundary(&x) > margin {
            return x;
        }
    }
}

/// Solves a square system by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Brute-force LP minimum over every basic feasible point of the raw rows.
pub fn brute_force_min(n: usize, rows: &[(Vec<f64>, f64)], c: &[f64]) -> f64 {
    let m = rows.len();
    let mut best = f64::INFINITY;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b = idx.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = solve(a, b) {
            let feasible = rows.iter().all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= b + 1e-9);
            if feasible {
                best = best.min(c.iter().zip(&x).map(|(p, q)| p * q).sum());
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < m - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `ln(a / b)` for positive rationals, accurate when `a ≈ b`.
pub fn ln_ratio(a: &BigRational, b: &BigRational) -> f64 {
    let rel = ToPrimitive::to_f64(&((a - b) / b)).unwrap();
    if rel.abs() < 0.5 {
        rel.ln_1p()
    } else {
        ToPrimitive::to_f64(&(a / b)).unwrap().ln()
    }
}

pub fn is_zero(x: &BigRational) -> bool {
    x.is_zero()
}
