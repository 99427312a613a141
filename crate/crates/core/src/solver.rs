//! Short-step path following for `min cᵀx` over a polytope, driven by the
//! universal barrier.
//!
//! The iterate tracks minimizers of `t·cᵀx + phi(x)`. Each round multiplies
//! `t` by `θ = 1 + 1/(8 sqrt n)` and takes damped Newton steps until the
//! Newton decrement is at most `1/8`. Since `phi` is an `n`-self-concordant
//! barrier, a centred point has `cᵀx - min <= n/t`, so the loop stops once
//! `n/t <= eps` and re-centres tightly.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::barrier::UniversalBarrier;
use crate::error::{Error, Result};
use crate::geometry::{Polytope, Tolerances};
use crate::scalar::dot;

#[derive(Clone, Debug)]
pub struct LPProblem {
    pub body: Polytope<f64>,
    pub c: Vec<f64>,
    pub eps: f64,
}

impl LPProblem {
    pub fn new(body: Polytope<f64>, c: Vec<f64>, eps: f64) -> Result<Self> {
        if c.len() != body.dim() {
            return Err(Error::InvalidInput(format!("cost has length {}, body has dimension {}", c.len(), body.dim())));
        }
        if c.iter().all(|v| *v == 0.0) || c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("cost vector must be finite and nonzero".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::InvalidInput("eps must be positive".into()));
        }
        Ok(Self { body, c, eps })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Initial path parameter; default `1 / (|c| · diam K)`.
    pub t0: Option<f64>,
    /// Growth factor of `t`; default `1 + 1/(8 sqrt n)`.
    pub theta: Option<f64>,
    /// Newton decrement accepted as "on the path".
    pub decrement_threshold: f64,
    /// Decrement reached by the initial and final centring.
    pub center_tolerance: f64,
    /// Damped steps allowed per centring.
    pub center_budget: usize,
    pub max_iterations: usize,
    /// Starting point; default the vertex centroid.
    pub x0: Option<Vec<f64>>,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            t0: None,
            theta: None,
            decrement_threshold: 0.125,
            center_tolerance: 1e-10,
            center_budget: 500,
            max_iterations: 100_000,
            x0: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralPathState {
    pub t: f64,
    pub x: Vec<f64>,
    pub newton_decrement: f64,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LPSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// `n / t` at termination.
    pub gap_bound: f64,
    /// `(n + (β + sqrt n) β / (1 - β)) / t` for the final decrement `β`,
    /// valid for an approximately centred point.
    pub certified_gap: f64,
    pub t_final: f64,
    /// Newton steps taken along the path (after the initial centring).
    pub iterations: usize,
    pub center: Vec<f64>,
    pub center_iterations: usize,
    pub trace: Vec<CentralPathState>,
}

struct Newton {
    delta: Vec<f64>,
    decrement: f64,
}

fn newton_step(barrier: &UniversalBarrier<f64>, x: &[f64], t: f64, c: Option<&[f64]>) -> Result<Newton> {
    let e = barrier.eval(x)?;
    let n = x.len();
    let g = DVector::from_iterator(n, (0..n).map(|i| e.grad[i] + c.map_or(0.0, |c| t * c[i])));
    let h = DMatrix::from_fn(n, n, |i, j| 0.5 * (e.hess[i][j] + e.hess[j][i]));
    let chol = h.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let d = chol.solve(&g);
    let decrement = g.dot(&d).max(0.0).sqrt();
    if !decrement.is_finite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(Newton { delta: d.iter().map(|v| -v).collect(), decrement })
}

/// Moves along `delta / (1 + λ)`, halving if rounding ever leaves the interior.
fn damped_move(body: &Polytope<f64>, tol: &Tolerances, x: &[f64], step: &Newton) -> Result<Vec<f64>> {
    let mut s = 1.0 / (1.0 + step.decrement);
    for _ in 0..60 {
        let y: Vec<f64> = x.iter().zip(&step.delta).map(|(a, d)| a + s * d).collect();
        if body.check_interior(&y, tol).is_ok() {
            return Ok(y);
        }
        s *= 0.5;
    }
    Err(Error::NotInterior { index: 0, slack: 0.0 })
}

/// Damped Newton steps on `t·cᵀx + phi` until the decrement is at most `target`.
fn center(
    barrier: &UniversalBarrier<f64>,
    x: Vec<f64>,
    t: f64,
    c: Option<&[f64]>,
    target: f64,
    budget: usize,
) -> Result<(Vec<f64>, f64, usize)> {
    let body = barrier.body();
    let tol = *barrier.tolerances();
    let mut x = x;
    for it in 0..=budget {
        let step = newton_step(barrier, &x, t, c)?;
        if step.decrement <= target {
            return Ok((x, step.decrement, it));
        }
        if it == budget {
            break;
        }
        x = damped_move(body, &tol, &x, &step)?;
    }
    Err(Error::MaxIterations(budget))
}

/// Minimizer of `phi`, reached from `x0` by damped Newton steps.
pub fn analytic_center(barrier: &UniversalBarrier<f64>, x0: &[f64], params: &SolverParams) -> Result<(Vec<f64>, usize)> {
    barrier.body().check_interior(x0, barrier.tolerances())?;
    let (x, _, it) = center(barrier, x0.to_vec(), 0.0, None, params.center_tolerance, params.center_budget)?;
    Ok((x, it))
}

pub fn solve_lp(p: &LPProblem, params: &SolverParams) -> Result<LPSolution> {
    let tol = Tolerances::default();
    let barrier = UniversalBarrier::new(p.body.clone(), tol)?;
    let n = p.body.dim();
    let nf = n as f64;
    let x0 = params.x0.clone().unwrap_or_else(|| p.body.vertex_centroid());
    let (x_c, center_iterations) = analytic_center(&barrier, &x0, params)?;
    let c_norm = dot(&p.c, &p.c).sqrt();
    let mut t = params.t0.unwrap_or(1.0 / (c_norm * p.body.diameter()));
    let theta = params.theta.unwrap_or(1.0 + 1.0 / (8.0 * nf.sqrt()));
    if !(t > 0.0) || !(theta > 1.0) {
        return Err(Error::InvalidInput("t0 must be positive and theta above 1".into()));
    }
    let target = params.decrement_threshold;
    let (mut x, mut lambda, mut iterations) = center(&barrier, x_c.clone(), t, Some(&p.c), target, params.center_budget)?;
    let mut trace = vec![CentralPathState { t, x: x.clone(), newton_decrement: lambda, objective: dot(&p.c, &x), iterations }];
    while nf / t > p.eps {
        if iterations >= params.max_iterations {
            return Err(Error::MaxIterations(params.max_iterations));
        }
        t *= theta;
        let (y, l, it) = center(&barrier, x, t, Some(&p.c), target, params.center_budget)?;
        // a round always costs at least one Newton step
        let it = if it == 0 {
            let step = newton_step(&barrier, &y, t, Some(&p.c))?;
            let z = damped_move(&p.body, &tol, &y, &step)?;
            lambda = newton_step(&barrier, &z, t, Some(&p.c))?.decrement;
            x = z;
            1
        } else {
            x = y;
            lambda = l;
            it
        };
        iterations += it;
        trace.push(CentralPathState { t, x: x.clone(), newton_decrement: lambda, objective: dot(&p.c, &x), iterations });
    }
    let (x, beta, _) = center(&barrier, x, t, Some(&p.c), params.center_tolerance.max(1e-9), params.center_budget)?;
    let beta = beta.min(0.5);
    let certified_gap = (nf + (beta + nf.sqrt()) * beta / (1.0 - beta)) / t;
    Ok(LPSolution {
        objective: dot(&p.c, &x),
        x,
        gap_bound: nf / t,
        certified_gap,
        t_final: t,
        iterations,
        center: x_c,
        center_iterations,
        trace,
    })
}

/// `min cᵀv` over the vertex list, with a minimizing vertex.
pub fn vertex_minimum(body: &Polytope<f64>, c: &[f64]) -> (f64, Vec<f64>) {
    body.vertices()
        .iter()
        .map(|v| (dot(c, v), v.clone()))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("bounded polytope has vertices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hypercube, standard_simplex};

    #[test]
    fn center_of_square_and_interval() {
        let b = UniversalBarrier::new(hypercube::<f64>(2, -1.0, 1.0), Tolerances::default()).unwrap();
        let (x, _) = analytic_center(&b, &[0.3, -0.2], &SolverParams::default()).unwrap();
        assert!(x.iter().all(|v| v.abs() < 1e-8), "{x:?}");
        let seg = UniversalBarrier::new(hypercube::<f64>(1, 0.0, 1.0), Tolerances::default()).unwrap();
        let (x, _) = analytic_center(&seg, &[0.9], &SolverParams::default()).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-8);
        assert!(matches!(analytic_center(&seg, &[1.5], &SolverParams::default()), Err(Error::NotInterior { .. })));
    }

    #[test]
    fn square_lp() {
        let p = LPProblem::new(hypercube::<f64>(2, -1.0, 1.0), vec![1.0, 0.0], 1e-6).unwrap();
        let s = solve_lp(&p, &SolverParams::default()).unwrap();
        assert!((s.objective + 1.0).abs() <= 1e-6);
        assert!(s.x[1].abs() < 1e-6);
        assert!(s.gap_bound <= 1e-6);
        assert!(s.objective + 1.0 <= s.gap_bound);
    }

    #[test]
    fn triangle_lp_and_monotone_objective() {
        let p = LPProblem::new(standard_simplex::<f64>(2, 1.0), vec![1.0, 1.0], 1e-6).unwrap();
        let s = solve_lp(&p, &SolverParams::default()).unwrap();
        assert!(s.objective >= 0.0 && s.objective <= 1e-6);
        for w in s.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-9);
        }
        let (m, v) = vertex_minimum(&p.body, &p.c);
        assert_eq!((m, v), (0.0, vec![0.0, 0.0]));
    }

    #[test]
    fn rejects_bad_problems() {
        let sq = hypercube::<f64>(2, -1.0, 1.0);
        assert!(LPProblem::new(sq.clone(), vec![0.0, 0.0], 1e-6).is_err());
        assert!(LPProblem::new(sq.clone(), vec![1.0], 1e-6).is_err());
        assert!(LPProblem::new(sq, vec![1.0, 0.0], 0.0).is_err());
    }
}
