use std::fmt::Write as _;
use std::path::Path;

use barrierlab::barrier::{certify_self_concordance, ell_profile, CertConfig, UniversalBarrier};
use barrierlab::cascade::{sample_implication, verify_all, ChainConstants, ChainReport};
use barrierlab::geometry::{Polytope, PolytopeSpec, Tolerances};
use barrierlab::moments::marginal_moments;
use barrierlab::scalar::ratio_to_f64;
use barrierlab::sconcave::{bound23, check_moment12, check_moment23, AffineDistribution};
use barrierlab::solver::{solve_lp, vertex_minimum, LPProblem, SolverParams};
use barrierlab::Scalar;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, Coords, Global};
use crate::report::{float, judged, read_json, CliError, Outcome};

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::BarrierEval { point, direction } => {
            if g.exact {
                barrier_eval::<BigRational>(g, point, direction.as_ref())
            } else {
                barrier_eval::<f64>(g, point, direction.as_ref())
            }
        }
        Command::Certify => {
            if g.exact {
                certify::<BigRational>(g)
            } else {
                certify::<f64>(g)
            }
        }
        Command::MomentsCheck { max_k } => moments_check(g, *max_k),
        Command::CascadeVerify => cascade(),
        Command::ImplicationSample => implication(g),
        Command::LpSolve => lp_solve(g),
        Command::EllProfile { max_n } => ell(g, *max_n),
    }
}

/// JSON rendering of a scalar: a number for floats, the exact fraction plus
/// its nearest float for rationals.
trait Show {
    fn show(&self) -> Value;
}

impl Show for f64 {
    fn show(&self) -> Value {
        float(*self)
    }
}

impl Show for BigRational {
    fn show(&self) -> Value {
        json!({ "exact": self.to_string(), "approx": float(ratio_to_f64(self)) })
    }
}

fn show_vec<S: Show>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Show::show).collect())
}

fn input_path(g: &Global) -> Result<&Path, CliError> {
    g.input.as_deref().ok_or_else(|| CliError::Usage("this command needs --input".into()))
}

fn load_body<S: Scalar>(path: &Path, tol: &Tolerances) -> Result<Polytope<S>, CliError> {
    let spec: PolytopeSpec = read_json(path)?;
    Ok(spec.build::<S>(tol)?)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn barrier_eval<S: Scalar + Show>(g: &Global, point: &Coords, direction: Option<&Coords>) -> Result<Outcome, CliError> {
    let geo = Tolerances::default();
    let body = load_body::<S>(input_path(g)?, &geo)?;
    if point.0.len() != body.dim() {
        return Err(CliError::Usage(format!("--point has {} coordinates, body has dimension {}", point.0.len(), body.dim())));
    }
    let tol = g.tol.unwrap_or(1e-8);
    let b = UniversalBarrier::new(body, geo)?;
    let x: Vec<S> = point.0.iter().map(|&v| S::from_f64(v)).collect();
    let e = b.eval(&x)?;
    let mut text = format!("phi = {:.12e}\ngrad = {}\n", e.phi, fmt_vec(&e.grad.iter().map(Scalar::to_f64).collect::<Vec<_>>()));
    let mut results = json!({
        "phi": float(e.phi),
        "grad": show_vec(&e.grad),
        "hess": Value::Array(e.hess.iter().map(|r| show_vec(r)).collect()),
    });
    let mut pass = true;
    if let Some(h) = direction {
        if h.0.len() != b.dim() {
            return Err(CliError::Usage(format!("--direction has {} coordinates, body has dimension {}", h.0.len(), b.dim())));
        }
        let hs: Vec<S> = h.0.iter().map(|&v| S::from_f64(v)).collect();
        let d = b.directional(&x, &hs)?;
        let (ok1, ok3) = (d.nu_bound_holds(tol), d.concordance_bound_holds(tol));
        pass = ok1 && ok3;
        results["directional"] = json!({
            "d1": d.d1.show(),
            "d2": d.d2.show(),
            "d3": d.d3.show(),
            "r1": judged(d.r1(), 1.0, tol, ok1),
            "r3": judged(d.r3(), 1.0, tol, ok3),
        });
        let _ = writeln!(
            text,
            "d1 = {:.12e}\nd2 = {:.12e}\nd3 = {:.12e}\nr1 = {:.9} (<= 1 + {tol:e}: {ok1})\nr3 = {:.9} (<= 1 + {tol:e}: {ok3})",
            d.d1.to_f64(),
            d.d2.to_f64(),
            d.d3.to_f64(),
            d.r1(),
            d.r3()
        );
    }
    Ok(Outcome { parameters: json!({ "tolerance": tol, "exact": S::EXACT }), results, pass, text, csv: None })
}

fn certify<S: Scalar>(g: &Global) -> Result<Outcome, CliError> {
    let geo = Tolerances::default();
    let body = load_body::<S>(input_path(g)?, &geo)?;
    let b = UniversalBarrier::new(body, geo)?;
    let defaults = CertConfig::default();
    let samples = g.samples.unwrap_or(1000);
    let n_dirs = g.dirs.unwrap_or(defaults.n_dirs).max(1);
    // each base point yields itself plus one pushed copy per weight
    let per_point = n_dirs * (1 + defaults.push_weights.len());
    let cfg = CertConfig {
        n_points: samples.div_ceil(per_point).max(1),
        n_dirs,
        seed: g.seed,
        // rational arithmetic has no roundoff for slack to absorb
        slack: g.tol.unwrap_or(if S::EXACT { 0.0 } else { defaults.slack }),
        ..defaults
    };
    let rep = certify_self_concordance(&b, &cfg)?;
    let pass = rep.passed();
    let mut csv = String::from("point,r1,r3\n");
    for r in &rep.ratios {
        let _ = writeln!(csv, "{},{},{}", r.point, r.r1, r.r3);
    }
    let text = format!(
        "samples: {}\nmax r1: {:.9} (bound 1, slack {:e})\nmax r3: {:.9} (bound 1, slack {:e})\nviolations: {}\n",
        rep.samples,
        rep.max_r1,
        cfg.slack,
        rep.max_r3,
        cfg.slack,
        rep.violations.len()
    );
    let results = json!({
        "samples": rep.samples,
        "exact": rep.exact,
        "max_r1": judged(rep.max_r1, 1.0, cfg.slack, rep.max_r1 <= 1.0 + cfg.slack),
        "max_r3": judged(rep.max_r3, 1.0, cfg.slack, rep.max_r3 <= 1.0 + cfg.slack),
        "violations": rep.violations,
    });
    Ok(Outcome { parameters: serde_json::to_value(&cfg).expect("config serializes"), results, pass, text, csv: Some(csv) })
}

/// Interior point from exponentially weighted vertex mixtures.
fn random_interior(body: &Polytope<f64>, rng: &mut ChaCha8Rng, geo: &Tolerances) -> Option<Vec<f64>> {
    let n = body.dim();
    for _ in 0..1000 {
        let w: Vec<f64> = body.vertices().iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        let x: Vec<f64> = (0..n).map(|i| body.vertices().iter().zip(&w).map(|(v, wi)| v[i] * wi).sum::<f64>() / total).collect();
        if body.check_interior(&x, geo).is_ok() {
            return Some(x);
        }
    }
    None
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

fn moments_check(g: &Global, max_k: u32) -> Result<Outcome, CliError> {
    if max_k < 2 {
        return Err(CliError::Usage("--max-k must be at least 2".into()));
    }
    let float_tol = g.tol.unwrap_or(1e-12);
    let mut text = String::from(
        "sharpness at q = k t^(k-1) and its reflection\n   k  b(k)              Xi exact  Xi float  Phi exact  Phi float\n",
    );
    let mut rows = Vec::new();
    let mut pass = true;
    for k in 2..=max_k {
        let exact = check_moment23(&AffineDistribution::<BigRational>::sharp_reflected(k)?)?;
        let flt = check_moment23(&AffineDistribution::<f64>::sharp_reflected(k)?)?;
        let xi_float = (flt.xi - flt.bound).abs() <= float_tol * flt.bound.max(1.0);
        let phi_exact = check_moment12(&AffineDistribution::<BigRational>::sharp(k)?)?;
        let phi_flt = check_moment12(&AffineDistribution::<f64>::sharp(k)?)?;
        let phi_attained = phi_exact.phi_ratio == phi_exact.phi_bound && phi_exact.slack.is_zero();
        let phi_float = (phi_flt.phi_ratio - phi_flt.phi_bound).abs() <= float_tol;
        pass &= exact.holds && exact.attained && flt.holds && xi_float && phi_attained && phi_float;
        let _ = writeln!(
            text,
            "{k:>4}  {:<16.12}  {:<8}  {:<8}  {:<9}  {}",
            exact.bound, exact.attained, xi_float, phi_attained, phi_float
        );
        rows.push(json!({
            "k": k,
            "xi": {
                "bound": float(exact.bound),
                "exact": { "mu2sq": exact.mu2sq.to_string(), "mu3cu": exact.mu3cu.to_string(), "attained": exact.attained, "tolerance": 0.0 },
                "float": judged(flt.xi, flt.bound, float_tol, xi_float),
            },
            "phi": {
                "bound": phi_exact.phi_bound.to_string(),
                "exact": { "value": phi_exact.phi_ratio.to_string(), "attained": phi_attained, "tolerance": 0.0 },
                "float": judged(phi_flt.phi_ratio, phi_flt.phi_bound, float_tol, phi_float),
            },
        }));
    }
    let mut results = json!({ "sharpness": rows });
    let mut parameters = json!({ "max_k": max_k, "float_tolerance": float_tol });
    if let Some(path) = &g.input {
        let geo = Tolerances::default();
        let body = load_body::<f64>(path, &geo)?;
        let n = body.dim();
        let (points, dirs, tol) = (g.samples.unwrap_or(16), g.dirs.unwrap_or(4), g.tol.unwrap_or(1e-8));
        let b = UniversalBarrier::new(body.clone(), geo)?;
        let k = n as f64;
        let found: Vec<Result<Vec<(f64, f64, bool, bool)>, CliError>> = (0..points)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
                rng.set_stream(i as u64);
                let x = random_interior(&body, &mut rng, &geo)
                    .ok_or(barrierlab::Error::SamplingFailure { rate: 0.0, tries: 1000 })?;
                let polar = b.polar(&x)?;
                (0..dirs)
                    .map(|_| {
                        let h = random_unit(&mut rng, n);
                        let m = marginal_moments(&polar, &h, &geo)?;
                        let r12 = m.mu1 * m.mu1 / (k * (k + 2.0) * m.mu2sq);
                        let r23 = m.mu3cu / (bound23(n as u32) * m.mu2sq.powf(1.5));
                        Ok((r12, r23, r12 <= 1.0 + tol, r23 <= 1.0 + tol))
                    })
                    .collect()
            })
            .collect();
        let mut flat = Vec::new();
        for f in found {
            flat.extend(f?);
        }
        let max12 = flat.iter().map(|t| t.0).fold(0.0, f64::max);
        let max23 = flat.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let (ok12, ok23) = (flat.iter().all(|t| t.2), flat.iter().all(|t| t.3));
        pass &= ok12 && ok23;
        let _ = writeln!(
            text,
            "polar marginals, index k = n = {n}, {} samples\n  max mu1^2 / (k(k+2) mu2^2) = {max12:.9}\n  max mu3^3 / (b(k) mu2^3)    = {max23:.9}",
            flat.len()
        );
        results["polar"] = json!({
            "dimension": n,
            "index": n,
            "samples": flat.len(),
            "moment12_ratio": judged(max12, 1.0, tol, ok12),
            "moment23_ratio": judged(max23, 1.0, tol, ok23),
        });
        parameters["polar"] = json!({ "points": points, "dirs": dirs, "tolerance": tol });
    }
    Ok(Outcome { parameters, results, pass, text, csv: None })
}

fn chain_summary(text: &mut String, r: &ChainReport) {
    let extra = r.extra.iter().filter(|s| s.holds).count();
    let _ = writeln!(
        text,
        "{} chain (k >= {}): {}/{} steps, {}/{} extra identities, verified: {}",
        r.chain,
        r.k_min,
        r.steps_verified(),
        r.steps.len(),
        extra,
        r.extra.len(),
        r.verified
    );
    for s in r.steps.iter().chain(&r.extra).filter(|s| !s.holds) {
        let _ = writeln!(text, "  FAILED {}: {}", s.label, s.detail.clone().unwrap_or_default());
    }
}

fn cascade() -> Result<Outcome, CliError> {
    let rep = verify_all()?;
    let ids = rep.f_chain.steps_verified() + rep.g_chain.steps_verified();
    let mut text = format!("derivative-chain identities verified: {ids}/{}\n", rep.f_chain.steps.len() + rep.g_chain.steps.len());
    chain_summary(&mut text, &rep.f_chain);
    chain_summary(&mut text, &rep.g_chain);
    let _ = writeln!(text, "boundary values at gamma = 1:");
    for b in &rep.g_chain.boundaries {
        let mark = if b.matches { "ok" } else { "MISMATCH" };
        match &b.transcribed {
            Some(f) => {
                let _ = writeln!(text, "  g{:<2}(1) = {f}\n          = {}  [{mark}]", b.index, b.computed);
            }
            None => {
                let _ = writeln!(text, "  g{:<2}(1) = {}  [{mark}]", b.index, b.computed);
            }
        }
    }
    let small = rep.small_k.cases.iter().filter(|c| c.matches).count();
    let exponent = rep.small_k.k4_last_exponent.map_or_else(|| "none".to_string(), |e| e.to_string());
    let _ = writeln!(text, "small k: {small}/{} cases, k = 4 exponent {exponent}", rep.small_k.cases.len());
    let _ = writeln!(text, "substitution identity: symbolic {}, verified {}", rep.g_identity.symbolic, rep.g_identity.verified);
    let pass = rep.verified;
    let results = json!({
        "arithmetic": "exact",
        "tolerance": 0.0,
        "identities_verified": ids,
        "report": rep,
    });
    Ok(Outcome { parameters: json!({ "constants": "embedded" }), results, pass, text, csv: None })
}

fn implication(g: &Global) -> Result<Outcome, CliError> {
    let n = g.samples.unwrap_or(10_000);
    let rep = sample_implication(ChainConstants::embedded(), n, g.seed)?;
    let pass = rep.passed();
    let text = format!(
        "{}\nrandom samples: {}\ngrid samples: {}\nantecedent held: {}\ncounterexamples: {}\n",
        rep.label,
        rep.random_samples,
        rep.grid_samples,
        rep.antecedent_held,
        rep.counterexamples.len()
    );
    let results = json!({ "arithmetic": "exact", "tolerance": 0.0, "report": rep });
    Ok(Outcome { parameters: json!({ "samples": n, "seed": g.seed }), results, pass, text, csv: None })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LpInput {
    polytope: PolytopeSpec,
    c: Vec<f64>,
    #[serde(default)]
    eps: Option<f64>,
}

fn lp_solve(g: &Global) -> Result<Outcome, CliError> {
    if g.exact {
        return Err(CliError::Usage("lp-solve runs in floating point only; drop --exact".into()));
    }
    let input: LpInput = read_json(input_path(g)?)?;
    let geo = Tolerances::default();
    let body = input.polytope.build::<f64>(&geo)?;
    let eps = input.eps.unwrap_or(1e-6);
    let tol = g.tol.unwrap_or(1e-9);
    let n = body.dim();
    let lp = LPProblem::new(body.clone(), input.c.clone(), eps)?;
    let params = SolverParams::default();
    let s = solve_lp(&lp, &params)?;
    let (vmin, vx) = vertex_minimum(&body, &input.c);
    let gap = s.objective - vmin;
    let pass = gap <= s.gap_bound + tol;
    let mut csv = String::from("t,objective,newton_decrement,iterations");
    for i in 0..n {
        let _ = write!(csv, ",x{i}");
    }
    csv.push('\n');
    for st in &s.trace {
        let _ = write!(csv, "{},{},{},{}", st.t, st.objective, st.newton_decrement, st.iterations);
        for v in &st.x {
            let _ = write!(csv, ",{v}");
        }
        csv.push('\n');
    }
    let text = format!(
        "objective: {:.12e}\nvertex minimum: {:.12e} at {}\ngap: {gap:.3e} (bound n/t = {:.3e}, tolerance {tol:e})\nx: {}\npath iterations: {}, centring iterations: {}\n",
        s.objective,
        vmin,
        fmt_vec(&vx),
        s.gap_bound,
        fmt_vec(&s.x),
        s.iterations,
        s.center_iterations
    );
    let results = json!({
        "objective": float(s.objective),
        "x": s.x,
        "vertex_minimum": float(vmin),
        "vertex_argmin": vx,
        "gap": judged(gap, s.gap_bound, tol, pass),
        "certified_gap": float(s.certified_gap),
        "t_final": float(s.t_final),
        "iterations": s.iterations,
        "center_iterations": s.center_iterations,
        "trace_length": s.trace.len(),
    });
    let parameters = json!({ "eps": eps, "tolerance": tol, "solver": params });
    Ok(Outcome { parameters, results, pass, text, csv: Some(csv) })
}

fn ell(g: &Global, max_n: usize) -> Result<Outcome, CliError> {
    if g.exact {
        return Err(CliError::Usage("ell-profile runs in floating point only; drop --exact".into()));
    }
    let grid = g.samples.unwrap_or(20_001);
    let tol = g.tol.unwrap_or(1e-9);
    let profiles = (1..=max_n).map(|n| ell_profile(n, grid)).collect::<Result<Vec<_>, _>>()?;
    let mut text = String::from("   n  max l            2 sqrt(n+1)      grid max         ok\n");
    let mut rows = Vec::new();
    let mut pass = true;
    for p in &profiles {
        let ok = p.consistent(tol);
        pass &= ok;
        let _ = writeln!(text, "{:>4}  {:<15.12}  {:<15.12}  {:<15.12}  {ok}", p.n, p.maximum, p.predicted_maximum, p.grid_max);
        rows.push(json!({ "profile": p, "consistent": ok, "tolerance": tol }));
    }
    Ok(Outcome { parameters: json!({ "max_n": max_n, "grid_points": grid, "tolerance": tol }), results: json!({ "profiles": rows }), pass, text, csv: None })
}
