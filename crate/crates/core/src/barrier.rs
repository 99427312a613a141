//! The universal barrier `phi(x) = log Vol(K°(x))`.
//!
//! Here `K°(x) = {y : yᵀ(z - x) <= 1 for all z in K}`. Derivatives come from
//! moments of the polar body: with `p` the marginal of `K°(x)` along `-h`,
//!
//! ```text
//! Dphi[h]       = -(n+1) mu1
//! D2phi[h,h]    = (n+1)(n+2) mu2^2 + (n+1) mu1^2
//! D3phi[h,h,h]  = -(n+1)(n+2)(n+3) mu3^3 - 6(n+1)(n+2) mu2^2 mu1 - 2(n+1) mu1^3
//! ```
//!
//! The direction is reversed because these formulas hold for the polar
//! reflected through `x`; on `K = [-1, 1]`, `phi(x) = log(2 / (1 - x^2))`
//! increases toward `+1` while the polar's mass moves to `+∞`.
//!
//! Contracting the first two over all `h` gives the gradient and Hessian in
//! terms of the polar centroid `c` and covariance `C`:
//! `grad = (n+1) c`, `hess = (n+1)(n+2) C + (n+1) c cᵀ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{triangulate, PolarFamily, Polytope, Tolerances};
use crate::moments::{central_moments_of, marginal_moments_of, MarginalMoments};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BarrierEval<S = f64> {
    pub phi: f64,
    pub grad: Vec<S>,
    pub hess: Vec<Vec<S>>,
    pub at: Vec<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalDerivatives<S = f64> {
    pub d1: S,
    pub d2: S,
    pub d3: S,
    pub n: usize,
    pub moments: MarginalMoments<S>,
}

impl<S: Scalar> DirectionalDerivatives<S> {
    /// The three derivative formulas, given the marginal along `-h`.
    pub fn from_moments(n: usize, m: MarginalMoments<S>) -> Self {
        let n1 = S::from_i64(n as i64 + 1);
        let n2 = S::from_i64(n as i64 + 2);
        let n3 = S::from_i64(n as i64 + 3);
        let (mu1, mu2sq, mu3cu) = (m.mu1.clone(), m.mu2sq.clone(), m.mu3cu.clone());
        let d1 = -(n1.clone() * mu1.clone());
        let d2 = n1.clone() * n2.clone() * mu2sq.clone() + n1.clone() * mu1.clone() * mu1.clone();
        let d3 = -(n1.clone() * n2.clone() * n3 * mu3cu)
            - S::from_i64(6) * n1.clone() * n2 * mu2sq * mu1.clone()
            - S::from_i64(2) * n1 * mu1.clone() * mu1.clone() * mu1;
        Self { d1, d2, d3, n, moments: m }
    }

    /// `|d1| / sqrt(n d2)`; at most 1 for an `n`-self-concordant barrier.
    pub fn r1(&self) -> f64 {
        self.d1.to_f64().abs() / (self.n as f64 * self.d2.to_f64()).sqrt()
    }

    /// `|d3| / (2 d2^{3/2})`; at most 1 for a self-concordant barrier.
    pub fn r3(&self) -> f64 {
        let d2 = self.d2.to_f64();
        self.d3.to_f64().abs() / (2.0 * d2 * d2.sqrt())
    }

    /// `r1 <= 1 + slack`, decided on squared quantities so exact scalars
    /// give an exact verdict.
    pub fn nu_bound_holds(&self, slack: f64) -> bool {
        let f = S::from_f64((1.0 + slack) * (1.0 + slack));
        self.d1.clone() * self.d1.clone() <= f * S::from_i64(self.n as i64) * self.d2.clone()
    }

    /// `r3 <= 1 + slack` via `d3^2 <= 4 (1+slack)^2 d2^3`.
    pub fn concordance_bound_holds(&self, slack: f64) -> bool {
        let f = S::from_f64((1.0 + slack) * (1.0 + slack));
        let d2 = self.d2.clone();
        self.d3.clone() * self.d3.clone() <= f * S::from_i64(4) * d2.clone() * d2.clone() * d2
    }
}

/// Barrier oracle for one body. The polar triangulation is computed once and
/// reused for every evaluation point.
#[derive(Clone, Debug)]
pub struct UniversalBarrier<S = f64> {
    family: PolarFamily<S>,
}

impl<S: Scalar> UniversalBarrier<S> {
    pub fn new(body: Polytope<S>, tol: Tolerances) -> Result<Self> {
        Ok(Self { family: PolarFamily::new(body, tol)? })
    }

    pub fn body(&self) -> &Polytope<S> {
        self.family.body()
    }

    pub fn dim(&self) -> usize {
        self.family.body().dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        self.family.tolerances()
    }

    pub fn polar(&self, x: &[S]) -> Result<Polytope<S>> {
        self.family.polar_at(x)
    }

    /// `Vol(K°(x))`.
    pub fn polar_volume(&self, x: &[S]) -> Result<S> {
        let polar = self.polar(x)?;
        let simplices = triangulate(&polar, self.tolerances())?;
        Ok(simplices.iter().fold(S::zero(), |acc, s| acc + s.volume()))
    }

    /// `phi(x)`.
    pub fn value(&self, x: &[S]) -> Result<f64> {
        let v = self.polar_volume(x)?;
        Ok(log_of(&v))
    }

    pub fn eval(&self, x: &[S]) -> Result<BarrierEval<S>> {
        let polar = self.polar(x)?;
        let simplices = triangulate(&polar, self.tolerances())?;
        let c = central_moments_of(&simplices, &polar.vertex_centroid())?;
        let n = self.dim();
        let n1 = S::from_i64(n as i64 + 1);
        let n12 = S::from_i64(((n + 1) * (n + 2)) as i64);
        let grad = c.centroid.iter().map(|ci| n1.clone() * ci.clone()).collect();
        let hess = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        n12.clone() * c.cov[a][b].clone()
                            + n1.clone() * c.centroid[a].clone() * c.centroid[b].clone()
                    })
                    .collect()
            })
            .collect();
        Ok(BarrierEval { phi: log_of(&c.vol), grad, hess, at: x.to_vec() })
    }

    pub fn directional(&self, x: &[S], h: &[S]) -> Result<DirectionalDerivatives<S>> {
        if h.len() != self.dim() {
            return Err(Error::InvalidInput("direction has wrong length".into()));
        }
        if h.iter().all(|v| v.is_zero()) {
            return Err(Error::ZeroDirection);
        }
        let polar = self.polar(x)?;
        let simplices = triangulate(&polar, self.tolerances())?;
        let reversed: Vec<S> = h.iter().map(|v| -v.clone()).collect();
        let m = marginal_moments_of(&simplices, &reversed, &polar.vertex_centroid())?;
        Ok(DirectionalDerivatives::from_moments(self.dim(), m))
    }
}

fn log_of<S: Scalar>(v: &S) -> f64 {
    v.ln()
}

pub fn barrier_value<S: Scalar>(k: &Polytope<S>, x: &[S], tol: &Tolerances) -> Result<f64> {
    UniversalBarrier::new(k.clone(), *tol)?.value(x)
}

pub fn barrier_eval<S: Scalar>(k: &Polytope<S>, x: &[S], tol: &Tolerances) -> Result<BarrierEval<S>> {
    UniversalBarrier::new(k.clone(), *tol)?.eval(x)
}

pub fn directional_derivatives<S: Scalar>(
    k: &Polytope<S>,
    x: &[S],
    h: &[S],
    tol: &Tolerances,
) -> Result<DirectionalDerivatives<S>> {
    UniversalBarrier::new(k.clone(), *tol)?.directional(x, h)
}

/// Sampling plan for [`certify_self_concordance`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertConfig {
    /// Interior base points drawn by rejection in the bounding box.
    pub n_points: usize,
    /// Unit directions per evaluation point.
    pub n_dirs: usize,
    pub seed: u64,
    pub slack: f64,
    /// Each base point is also mixed toward a random vertex with these weights.
    pub push_weights: Vec<f64>,
}

impl Default for CertConfig {
    fn default() -> Self {
        Self { n_points: 64, n_dirs: 4, seed: crate::DEFAULT_SEED, slack: 1e-8, push_weights: vec![0.5, 0.9, 0.99] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub r1: f64,
    pub r3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub point: usize,
    pub r1: f64,
    pub r3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub max_r1: f64,
    pub max_r3: f64,
    pub samples: usize,
    pub slack: f64,
    pub exact: bool,
    pub violations: Vec<Violation>,
    /// Every evaluated ratio pair, in deterministic order.
    #[serde(skip)]
    pub ratios: Vec<RatioSample>,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn empty(slack: f64, exact: bool) -> Self {
        Self { max_r1: 0.0, max_r3: 0.0, samples: 0, slack, exact, violations: Vec::new(), ratios: Vec::new() }
    }

    /// Folds another report in; order of merging fixes the order of `ratios`.
    pub fn merge(&mut self, other: CertReport) {
        self.max_r1 = self.max_r1.max(other.max_r1);
        self.max_r3 = self.max_r3.max(other.max_r3);
        self.samples += other.samples;
        self.violations.extend(other.violations);
        self.ratios.extend(other.ratios);
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Checks the two self-concordance ratios at explicit `(x, h)` pairs.
pub fn certify_points<S: Scalar>(
    barrier: &UniversalBarrier<S>,
    pairs: &[(Vec<f64>, Vec<f64>)],
    slack: f64,
) -> Result<CertReport> {
    let mut report = CertReport::empty(slack, S::EXACT);
    for (i, (x, h)) in pairs.iter().enumerate() {
        let xs: Vec<S> = x.iter().map(|&v| S::from_f64(v)).collect();
        let hs: Vec<S> = h.iter().map(|&v| S::from_f64(v)).collect();
        let d = barrier.directional(&xs, &hs)?;
        record(&mut report, i, x, h, &d, slack);
    }
    Ok(report)
}

fn record<S: Scalar>(report: &mut CertReport, point: usize, x: &[f64], h: &[f64], d: &DirectionalDerivatives<S>, slack: f64) {
    let (r1, r3) = (d.r1(), d.r3());
    report.max_r1 = report.max_r1.max(r1);
    report.max_r3 = report.max_r3.max(r3);
    report.samples += 1;
    report.ratios.push(RatioSample { point, r1, r3 });
    if !d.nu_bound_holds(slack) || !d.concordance_bound_holds(slack) {
        report.violations.push(Violation { x: x.to_vec(), h: h.to_vec(), r1, r3 });
    }
}

/// Samples interior points (rejection in the bounding box, or a random
/// vertex mixture for thin bodies, then pushed toward random vertices) and
/// unit directions, and records both ratios.
///
/// Sample `i` draws from its own ChaCha stream, so the merged report does not
/// depend on how rayon schedules the work.
pub fn certify_self_concordance<S: Scalar>(barrier: &UniversalBarrier<S>, cfg: &CertConfig) -> Result<CertReport> {
    let body = barrier.body();
    let n = body.dim();
    let (lo, hi) = body.bounding_box();
    let tol = *barrier.tolerances();
    let float_body: Polytope<f64> = body.map_scalar();
    let parts: Vec<Result<CertReport>> = (0..cfg.n_points)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let mut base = None;
            const MAX_TRIES: usize = 1000;
            for _ in 0..MAX_TRIES {
                let x: Vec<f64> = (0..n).map(|j| lo[j] + (hi[j] - lo[j]) * rng.random::<f64>()).collect();
                if float_body.check_interior(&x, &tol).is_ok() {
                    base = Some(x);
                    break;
                }
            }
            // thin bodies: fall back to a random convex combination of vertices
            let base = match base {
                Some(x) => x,
                None => {
                    let verts = float_body.vertices();
                    let w: Vec<f64> = verts.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
                    let total: f64 = w.iter().sum();
                    let x: Vec<f64> =
                        (0..n).map(|j| verts.iter().zip(&w).map(|(v, wi)| v[j] * wi).sum::<f64>() / total).collect();
                    if float_body.check_interior(&x, &tol).is_err() {
                        return Err(Error::SamplingFailure { rate: 1.0, tries: MAX_TRIES });
                    }
                    x
                }
            };
            let mut points = vec![base.clone()];
            for &w in &cfg.push_weights {
                let v = &float_body.vertices()[rng.random_range(0..float_body.vertices().len())];
                points.push(base.iter().zip(v).map(|(a, b)| (1.0 - w) * a + w * b).collect());
            }
            let mut part = CertReport::empty(cfg.slack, S::EXACT);
            for x in points {
                if float_body.check_interior(&x, &tol).is_err() {
                    continue;
                }
                let xs: Vec<S> = x.iter().map(|&v| S::from_f64(v)).collect();
                for _ in 0..cfg.n_dirs {
                    let h = random_unit(&mut rng, n);
                    let hs: Vec<S> = h.iter().map(|&v| S::from_f64(v)).collect();
                    let d = barrier.directional(&xs, &hs)?;
                    record(&mut part, i, &x, &h, &d, cfg.slack);
                }
            }
            Ok(part)
        })
        .collect();
    let mut report = CertReport::empty(cfg.slack, S::EXACT);
    for p in parts {
        report.merge(p?);
    }
    Ok(report)
}

/// `l(t) = (4 c_n - 6t - 2t^3) / (1 + t^2)^{3/2}` with `c_n = (n-1) / (2 sqrt n)`.
pub fn ell(n: usize, t: f64) -> f64 {
    let c = ell_constant(n);
    (4.0 * c - 6.0 * t - 2.0 * t * t * t) / (1.0 + t * t).powf(1.5)
}

pub fn ell_constant(n: usize) -> f64 {
    (n as f64 - 1.0) / (2.0 * (n as f64).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllProfile {
    pub n: usize,
    pub c_n: f64,
    /// `c_n ± sqrt(c_n^2 + 1)`, ascending.
    pub stationary: (f64, f64),
    pub value_at_minus: f64,
    pub value_at_plus: f64,
    pub limit_neg_inf: f64,
    pub limit_pos_inf: f64,
    pub maximum: f64,
    /// `2 sqrt(n+1)`.
    pub predicted_maximum: f64,
    pub grid_points: usize,
    pub grid_max: f64,
    pub grid_argmax: f64,
}

impl EllProfile {
    /// Max agrees with `2 sqrt(n+1)`, stationary points with `-1/sqrt n`
    /// and `sqrt n`, and the grid finds nothing larger.
    pub fn consistent(&self, tol: f64) -> bool {
        let n = self.n as f64;
        let rel = |a: f64, b: f64| (a - b).abs() <= tol * b.abs().max(1.0);
        rel(self.maximum, self.predicted_maximum)
            && rel(self.stationary.0, -1.0 / n.sqrt())
            && rel(self.stationary.1, n.sqrt())
            && self.grid_max <= self.predicted_maximum * (1.0 + tol)
    }
}

/// Stationary points and maximum of `l`, plus a grid scan over `[-1e3, 1e3]`.
pub fn ell_profile(n: usize, grid_points: usize) -> Result<EllProfile> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let c = ell_constant(n);
    let disc = (c * c + 1.0).sqrt();
    let stationary = (c - disc, c + disc);
    let value_at_minus = ell(n, stationary.0);
    let value_at_plus = ell(n, stationary.1);
    let (limit_neg_inf, limit_pos_inf) = (2.0, -2.0);
    let maximum = [limit_neg_inf, value_at_minus, value_at_plus, limit_pos_inf]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let (mut grid_max, mut grid_argmax) = (f64::NEG_INFINITY, 0.0);
    let span = 2000.0;
    for i in 0..grid_points {
        let t = -1000.0 + span * i as f64 / (grid_points.max(2) - 1) as f64;
        let v = ell(n, t);
        if v > grid_max {
            grid_max = v;
            grid_argmax = t;
        }
    }
    Ok(EllProfile {
        n,
        c_n: c,
        stationary,
        value_at_minus,
        value_at_plus,
        limit_neg_inf,
        limit_pos_inf,
        maximum,
        predicted_maximum: 2.0 * (n as f64 + 1.0).sqrt(),
        grid_points,
        grid_max,
        grid_argmax,
    })
}
