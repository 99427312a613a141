//! Densities `q(t) ∝ (αt + β)^{k-1}` on `[a, b]`, the extremal class for
//! `1/(k-1)`-concave marginals, with exact moments and the sharp moment
//! inequalities
//!
//! ```text
//! mu1^2 <= k(k+2) mu2^2                          (0 in the support)
//! mu3^3 <= 2 sqrt((k+2)/k) (k-1)/(k+3) mu2^3
//! ```
//!
//! Both are attained by `k t^{k-1}` on `[0, 1]` (the second after reflecting).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::MarginalMoments;
use crate::scalar::{powi, Scalar};

/// Comparison slack on the float path; the exact path compares exactly.
pub const FLOAT_TOL: f64 = 1e-9;
pub const EXACT_TOL: f64 = 1e-12;

fn default_tol<S: Scalar>() -> f64 {
    if S::EXACT {
        EXACT_TOL
    } else {
        FLOAT_TOL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineDistribution<S = f64> {
    pub alpha: S,
    pub beta: S,
    pub a: S,
    pub b: S,
    pub k: u32,
}

impl<S: Scalar> AffineDistribution<S> {
    pub fn new(alpha: S, beta: S, a: S, b: S, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        let width = b.clone() - a.clone();
        let scale = a.to_f64().abs().max(b.to_f64().abs()).max(1.0);
        if !width.is_positive() || width.is_negligible(1e-12, scale) {
            return Err(Error::DegenerateSupport(width.to_f64()));
        }
        let d = Self { alpha, beta, a, b, k };
        if d.base_at(&d.a) < S::zero() || d.base_at(&d.b) < S::zero() {
            return Err(Error::InvalidInput("alpha t + beta is negative on the support".into()));
        }
        if k > 1 && !d.normalizer().is_positive() {
            return Err(Error::InvalidInput("density has zero mass".into()));
        }
        Ok(d)
    }

    pub fn uniform(a: S, b: S) -> Result<Self> {
        Self::new(S::zero(), S::one(), a, b, 1)
    }

    /// `k t^{k-1}` on `[0, 1]`.
    pub fn sharp(k: u32) -> Result<Self> {
        Self::new(S::one(), S::zero(), S::zero(), S::one(), k)
    }

    /// `k (1-t)^{k-1}` on `[0, 1]`.
    pub fn sharp_reflected(k: u32) -> Result<Self> {
        Self::new(-S::one(), S::one(), S::zero(), S::one(), k)
    }

    fn base_at(&self, t: &S) -> S {
        self.alpha.clone() * t.clone() + self.beta.clone()
    }

    /// Unnormalized density `(αt + β)^{k-1}` inside the support.
    pub fn weight(&self, t: &S) -> S {
        if *t < self.a || *t > self.b {
            return S::zero();
        }
        powi(&self.base_at(t), self.k - 1)
    }

    pub fn normalizer(&self) -> S {
        self.raw_integral(0)
    }

    /// `∫_a^b t^j (αt+β)^{k-1} dt`, substituting `u = αt + β` so only `j+1`
    /// terms appear.
    fn raw_integral(&self, j: u32) -> S {
        let k = self.k;
        if self.alpha.is_zero() {
            let p = j + 1;
            let span = powi(&self.b, p) - powi(&self.a, p);
            return powi(&self.beta, k - 1) * span / S::from_i64(p as i64);
        }
        let (ua, ub) = (self.base_at(&self.a), self.base_at(&self.b));
        let mut acc = S::zero();
        for i in 0..=j {
            let binom = S::from_i64(binomial(j, i));
            let sign = if (j - i) % 2 == 1 { -S::one() } else { S::one() };
            let e = k + i;
            let term = (powi(&ub, e) - powi(&ua, e)) / S::from_i64(e as i64);
            acc = acc + sign * binom * powi(&self.beta, j - i) * term;
        }
        acc / powi(&self.alpha, j + 1)
    }

    /// Same distribution seen through `t -> σt + μ`, `σ != 0`.
    pub fn reparametrize(&self, sigma: S, mu: S) -> Result<Self> {
        if sigma.is_zero() {
            return Err(Error::InvalidInput("sigma must be nonzero".into()));
        }
        let alpha = self.alpha.clone() / sigma.clone();
        let beta = self.beta.clone() - self.alpha.clone() * mu.clone() / sigma.clone();
        let ea = sigma.clone() * self.a.clone() + mu.clone();
        let eb = sigma * self.b.clone() + mu;
        let (a, b) = if ea < eb { (ea, eb) } else { (eb, ea) };
        Self::new(alpha, beta, a, b, self.k)
    }

    /// `t -> -t`.
    pub fn reflect(&self) -> Self {
        self.reparametrize(-S::one(), S::zero()).expect("reflection preserves validity")
    }

    /// `κ = β/(bα)` for the canonical form `α > 0, a = 0`.
    pub fn kappa(&self) -> Option<S> {
        if self.alpha.is_positive() && self.a.is_zero() {
            Some(self.beta.clone() / (self.b.clone() * self.alpha.clone()))
        } else {
            None
        }
    }

    /// `γ = (1+κ)/κ`, defined for `κ > 0`.
    pub fn gamma(&self) -> Option<S> {
        self.kappa().filter(|k| k.is_positive()).map(|k| (S::one() + k.clone()) / k)
    }
}

pub fn binomial(n: u32, r: u32) -> i64 {
    (0..r as i64).fold(1, |acc, i| acc * (n as i64 - i) / (i + 1))
}

/// Same density with the origin moved to `c`.
fn recentred<S: Scalar>(d: &AffineDistribution<S>, c: &S) -> AffineDistribution<S> {
    AffineDistribution {
        alpha: d.alpha.clone(),
        beta: d.beta.clone() + d.alpha.clone() * c.clone(),
        a: d.a.clone() - c.clone(),
        b: d.b.clone() - c.clone(),
        k: d.k,
    }
}

/// Normalized raw and central moments of `d`.
///
/// Exact scalars use the closed-form antiderivative. Floats use Gauss-Legendre
/// quadrature with enough nodes to be exact for the polynomial integrand,
/// taking central moments about the mean so no sums cancel.
pub fn affine_moments<S: Scalar>(d: &AffineDistribution<S>) -> MarginalMoments<S> {
    if !S::EXACT {
        return float_moments(d);
    }
    let mid = (d.a.clone() + d.b.clone()) / S::from_i64(2);
    let about_mid = recentred(d, &mid);
    let vol = about_mid.raw_integral(0);
    let r = |j| about_mid.raw_integral(j) / vol.clone();
    MarginalMoments::from_shifted_raw(vol.clone(), mid, r(1), r(2), r(3))
}

fn float_moments<S: Scalar>(d: &AffineDistribution<S>) -> MarginalMoments<S> {
    let (alpha, beta, a, b) = (d.alpha.to_f64(), d.beta.to_f64(), d.a.to_f64(), d.b.to_f64());
    let (nodes, weights) = gauss_legendre((d.k as usize + 4).div_ceil(2));
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let pts: Vec<(f64, f64)> = nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| {
            let t = mid + half * x;
            (t, w * half * (alpha * t + beta).max(0.0).powi(d.k as i32 - 1))
        })
        .collect();
    let vol: f64 = pts.iter().map(|p| p.1).sum();
    let mean = pts.iter().map(|(t, w)| (t - mid) * w).sum::<f64>() / vol + mid;
    let central = |j: i32| pts.iter().map(|(t, w)| (t - mean).powi(j) * w).sum::<f64>() / vol;
    let f = S::from_f64;
    MarginalMoments::from_shifted_raw(f(vol), f(mean), f(central(1)), f(central(2)), f(central(3)))
}

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[-1, 1]`.
fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // three-term recurrence for P_m and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for n in 2..=m {
                let p2 = ((2 * n - 1) as f64 * x * p1 - (n - 1) as f64 * p0) / n as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 0 { 1.0 } else if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentFunctionals {
    /// `|mu3^3 / mu2^3|`.
    pub xi: f64,
    /// `mu1 / mu2`.
    pub eta: f64,
    /// `(∫ t p)^2 / ∫ t^2 p`.
    pub phi_ratio: f64,
}

pub fn functionals<S: Scalar>(m: &MarginalMoments<S>) -> Result<MomentFunctionals> {
    if !m.mu2sq.is_positive() {
        return Err(Error::ZeroVariance);
    }
    let mu2sq = m.mu2sq.to_f64();
    let mu2 = mu2sq.sqrt();
    let phi = (m.raw1.clone() * m.raw1.clone() / m.raw2.clone()).to_f64();
    Ok(MomentFunctionals { xi: m.mu3cu.to_f64().abs() / (mu2sq * mu2), eta: m.mu1.to_f64() / mu2, phi_ratio: phi })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Moment12Check<S = f64> {
    pub holds: bool,
    /// `k(k+2) mu2^2 - mu1^2`.
    pub slack: S,
    pub phi_ratio: S,
    /// `k(k+2)/(k+1)^2`.
    pub phi_bound: S,
}

/// `mu1^2 <= k(k+2) mu2^2` at the distribution's own `k`.
pub fn check_moment12<S: Scalar>(d: &AffineDistribution<S>) -> Result<Moment12Check<S>> {
    check_moment12_at(d, d.k)
}

/// `mu1^2 <= k(k+2) mu2^2` at an explicit `k` (any `k' >= d.k` is implied).
pub fn check_moment12_at<S: Scalar>(d: &AffineDistribution<S>, k: u32) -> Result<Moment12Check<S>> {
    if d.a > S::zero() || d.b < S::zero() {
        return Err(Error::HypothesisViolated("0 must lie in the support".into()));
    }
    let m = affine_moments(d);
    let kk = S::from_i64((k * (k + 2)) as i64);
    let slack = kk.clone() * m.mu2sq.clone() - m.mu1.clone() * m.mu1.clone();
    let holds = if S::EXACT { slack >= S::zero() } else { slack.to_f64() >= -FLOAT_TOL };
    let phi_ratio = if m.raw2.is_zero() { S::zero() } else { m.raw1.clone() * m.raw1.clone() / m.raw2.clone() };
    let phi_bound = kk / S::from_i64(((k + 1) * (k + 1)) as i64);
    Ok(Moment12Check { holds, slack, phi_ratio, phi_bound })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Moment23Check<S = f64> {
    pub holds: bool,
    pub xi: f64,
    pub bound: f64,
    pub mu2sq: S,
    pub mu3cu: S,
    /// `Ξ = bound` exactly (exact scalars) or to `1e-12` relative.
    pub attained: bool,
}

/// `bound^2 = 4 (k+2)(k-1)^2 / (k (k+3)^2)` as a scalar.
fn bound23_sq<S: Scalar>(k: u32) -> S {
    let k = k as i64;
    S::from_i64(4 * (k + 2) * (k - 1) * (k - 1)) / S::from_i64(k * (k + 3) * (k + 3))
}

pub fn bound23(k: u32) -> f64 {
    let k = k as f64;
    2.0 * ((k + 2.0) / k).sqrt() * (k - 1.0) / (k + 3.0)
}

/// One-sided `mu3^3 <= bound·mu2^3` plus the reflected `Ξ <= bound`.
///
/// Decided on squares so exact inputs give exact verdicts despite the
/// irrational bound.
pub fn check_moment23<S: Scalar>(d: &AffineDistribution<S>) -> Result<Moment23Check<S>> {
    let m = affine_moments(d);
    if !m.mu2sq.is_positive() {
        return Err(Error::ZeroVariance);
    }
    let b2: S = bound23_sq(d.k);
    let cube = m.mu2sq.clone() * m.mu2sq.clone() * m.mu2sq.clone();
    let lhs = m.mu3cu.clone() * m.mu3cu.clone();
    let rhs = b2 * cube;
    let f = functionals(&m)?;
    let bound = bound23(d.k);
    let (holds, attained) = if S::EXACT {
        (lhs <= rhs, lhs == rhs)
    } else {
        let tol = default_tol::<S>();
        (f.xi <= bound + tol, (f.xi - bound).abs() <= 1e-12 * bound.max(1.0))
    };
    Ok(Moment23Check { holds, xi: f.xi, bound, mu2sq: m.mu2sq, mu3cu: m.mu3cu, attained })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanBound<S = f64> {
    pub holds: bool,
    /// Mean after rescaling the support to `[0, 1]`.
    pub mean: S,
}

/// A non-increasing density on `[0, 1]` has mean at most `1/2`.
pub fn mean_bound_check<S: Scalar>(d: &AffineDistribution<S>) -> Result<MeanBound<S>> {
    let width = d.b.clone() - d.a.clone();
    let unit = d.reparametrize(S::one() / width, -(d.a.clone()) / (d.b.clone() - d.a.clone()))?;
    if unit.k > 1 && unit.alpha.is_positive() {
        return Err(Error::NotNonIncreasing);
    }
    let mean = affine_moments(&unit).mu1;
    let half = S::one() / S::from_i64(2);
    let holds = if S::EXACT { mean <= half } else { mean.to_f64() <= 0.5 + FLOAT_TOL };
    Ok(MeanBound { holds, mean })
}

/// `f0(γ) = 2kγ^{2k+1} - (k+1)γ^{2k} - k²(k+1)γ^{k+2} + 2k(k²+k-1)γ^{k+1} - (k³+k²-2)γ^k + (k-1)`.
pub fn f0<S: Scalar>(gamma: &S, k: u32) -> S {
    let ki = k as i64;
    let c = |v: i64| S::from_i64(v);
    c(2 * ki) * powi(gamma, 2 * k + 1) - c(ki + 1) * powi(gamma, 2 * k) - c(ki * ki * (ki + 1)) * powi(gamma, k + 2)
        + c(2 * ki * (ki * ki + ki - 1)) * powi(gamma, k + 1)
        - c(ki * ki * ki + ki * ki - 2) * powi(gamma, k)
        + c(ki - 1)
}

/// Right side minus left side of the two-sided inequality in `γ`, which
/// `f0` clears of denominators: `f0 = (k+1)(γ^k - 1)^2 · gap`.
pub fn gamma_two_sided_gap<S: Scalar>(gamma: &S, k: u32) -> Option<S> {
    let ki = k as i64;
    let denom = powi(gamma, k) - S::one();
    if denom.is_zero() {
        return None;
    }
    let r1 = (powi(gamma, k + 1) - S::one()) / denom.clone();
    let r2 = (powi(gamma, k + 2) - S::one()) / denom;
    let c = |v: i64| S::from_i64(v);
    let a = r1.clone() * c(ki) / c(ki + 1) - S::one();
    let lhs = c((ki + 1) * (ki + 1)) * a.clone() * a;
    let rhs = c(ki * (ki + 2)) * (r2 * c(ki) / c(ki + 2) - c(2) * r1 * c(ki) / c(ki + 1) + S::one());
    Some(rhs - lhs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaCheck<S = f64> {
    pub f0: S,
    pub holds: bool,
    /// Sign of the two-sided gap agrees with `f0` (and the scaling is exact
    /// for exact scalars); `None` at `γ = 1`.
    pub cross_check: Option<bool>,
}

pub fn check_gamma_inequality<S: Scalar>(gamma: &S, k: u32) -> Result<GammaCheck<S>> {
    if *gamma < S::one() {
        return Err(Error::InvalidInput("gamma must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidInput("k must be at least 2".into()));
    }
    let f = f0(gamma, k);
    let scale = f.to_f64().abs().max(1.0);
    let holds = if S::EXACT { f >= S::zero() } else { f.to_f64() >= -FLOAT_TOL * scale };
    let cross_check = gamma_two_sided_gap(gamma, k).map(|gap| {
        let d = powi(gamma, k) - S::one();
        let scaled = S::from_i64(k as i64 + 1) * d.clone() * d * gap;
        if S::EXACT {
            scaled == f
        } else {
            let (s, t) = (scaled.to_f64(), f.to_f64());
            (s - t).abs() <= 1e-8 * s.abs().max(t.abs()).max(1.0)
        }
    });
    Ok(GammaCheck { f0: f, holds, cross_check })
}
