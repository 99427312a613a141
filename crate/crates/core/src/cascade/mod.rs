//! Exact verification of two derivative-chain positivity proofs.
//!
//! Each chain starts from a function of `γ >= 1` and a parameter `k`, and
//! repeatedly writes `h_i' = c_i · h_{i+1}` with a nonnegative factor `c_i`.
//! If every `h_i(1) >= 0` and the last element is nonnegative on `γ >= 1`,
//! then so is `h_0`. Everything is checked with big-integer exponent
//! polynomials; nonnegativity in `k` is certified by shifting `k = m + k_min`
//! and reading off coefficient signs.
//!
//! The constants live in `data/chain_constants.json`, kept apart from the
//! code so the transcription can be reviewed on its own.

pub mod expr;
pub mod poly;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use expr::{parse, parse_exp_poly, parse_int_poly, Expr};
pub use poly::{ExpPoly, IntPoly, Laurent};

const EMBEDDED: &str = include_str!("../../data/chain_constants.json");

/// Upper end of the exhaustive fallback when a shift certificate fails.
pub const EXHAUSTIVE_K_MAX: i64 = 200;

#[derive(Deserialize)]
struct RawTerminal {
    second_derivative_factor: String,
    second_derivative_rest: String,
}

#[derive(Deserialize)]
struct RawFChain {
    k_min: i64,
    elements: Vec<String>,
    factors: Vec<String>,
    boundaries: Vec<String>,
    terminal: RawTerminal,
}

#[derive(Deserialize)]
struct RawGChain {
    k_min: i64,
    factorization: String,
    elements: Vec<String>,
    factors: Vec<String>,
    boundaries: Vec<Option<String>>,
    g17_slope: String,
}

#[derive(Deserialize)]
struct RawConstants {
    f_chain: RawFChain,
    f0_definition: String,
    g_definition: String,
    #[serde(rename = "G_definition")]
    big_g_definition: String,
    g_chain: RawGChain,
    small_k: BTreeMap<String, String>,
}

/// Parsed chain constants.
#[derive(Clone, Debug)]
pub struct ChainConstants {
    pub f_k_min: i64,
    pub f: Vec<ExpPoly>,
    pub f_factors: Vec<ExpPoly>,
    pub f_boundaries: Vec<IntPoly>,
    pub f_terminal_factor: ExpPoly,
    pub f_terminal_rest: ExpPoly,
    pub f0_definition: ExpPoly,
    pub g_k_min: i64,
    /// `g(γ, k)` as an expression, for concrete evaluation.
    pub g_expr: Expr,
    pub g_definition: ExpPoly,
    pub g_factorization: ExpPoly,
    pub g: Vec<ExpPoly>,
    pub g_factors: Vec<ExpPoly>,
    pub g_boundaries: Vec<Option<IntPoly>>,
    /// The same boundary values as written, often in factored form.
    pub g_boundary_text: Vec<Option<String>>,
    pub g17_slope: IntPoly,
    /// `G(γ, ξ, k)`.
    pub big_g: Expr,
    /// Factorized `g(γ, k)` for small fixed `k`.
    pub small_k: BTreeMap<i64, ExpPoly>,
}

fn parse_all(v: &[String]) -> Result<Vec<ExpPoly>> {
    v.iter().map(|s| parse_exp_poly(s)).collect()
}

fn parse_k_min(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad k_min {s:?}")))
}

impl ChainConstants {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConstants =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("chain constants: {e}")))?;
        let f = &raw.f_chain;
        let g = &raw.g_chain;
        let small_k = raw
            .small_k
            .iter()
            .map(|(k, v)| Ok((parse_k_min(k)?, parse_exp_poly(v)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            f_k_min: f.k_min,
            f: parse_all(&f.elements)?,
            f_factors: parse_all(&f.factors)?,
            f_boundaries: f.boundaries.iter().map(|s| parse_int_poly(s)).collect::<Result<_>>()?,
            f_terminal_factor: parse_exp_poly(&f.terminal.second_derivative_factor)?,
            f_terminal_rest: parse_exp_poly(&f.terminal.second_derivative_rest)?,
            f0_definition: parse_exp_poly(&raw.f0_definition)?,
            g_k_min: g.k_min,
            g_expr: parse(&raw.g_definition)?,
            g_definition: parse_exp_poly(&raw.g_definition)?,
            g_factorization: parse_exp_poly(&g.factorization)?,
            g: parse_all(&g.elements)?,
            g_factors: parse_all(&g.factors)?,
            g_boundaries: g
                .boundaries
                .iter()
                .map(|b| b.as_deref().map(parse_int_poly).transpose())
                .collect::<Result<_>>()?,
            g_boundary_text: g.boundaries.clone(),
            g17_slope: parse_int_poly(&g.g17_slope)?,
            big_g: parse(&raw.big_g_definition)?,
            small_k,
        })
    }

    /// The transcription shipped with the crate.
    pub fn embedded() -> &'static ChainConstants {
        static CONSTANTS: OnceLock<ChainConstants> = OnceLock::new();
        CONSTANTS.get_or_init(|| ChainConstants::from_json(EMBEDDED).expect("embedded chain constants parse"))
    }

    /// `g(γ, k)` at a concrete point.
    pub fn g_value(&self, gamma: &BigRational, k: &BigRational) -> Result<BigRational> {
        self.g_expr.eval(gamma, &BigRational::zero(), k)
    }

    /// `G(γ, ξ, k)` at a concrete point.
    pub fn big_g_value(&self, gamma: &BigRational, xi: &BigRational, k: &BigRational) -> Result<BigRational> {
        self.big_g.eval(gamma, xi, k)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub label: String,
    pub holds: bool,
    /// First differing term when the identity fails.
    pub detail: Option<String>,
}

fn identity(label: impl Into<String>, lhs: &ExpPoly, rhs: &ExpPoly) -> IdentityCheck {
    let holds = lhs == rhs;
    IdentityCheck { label: label.into(), holds, detail: (!holds).then(|| lhs.first_difference(rhs)).flatten() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub index: usize,
    pub label: String,
    /// `h_i(1)` as a polynomial in `k`.
    pub computed: String,
    /// The transcribed value, when one is given, normalized.
    pub expected: Option<String>,
    /// The transcribed value verbatim.
    pub transcribed: Option<String>,
    pub matches: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// All coefficients nonnegative after `k = m + k_min` (and `γ = 1 + u`).
    Shift,
    /// Direct evaluation for `k_min..=200` plus a positive leading coefficient;
    /// weaker than a proof for all `k`.
    Exhaustive,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityCheck {
    pub label: String,
    pub kind: CertificateKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub chain: String,
    pub k_min: i64,
    /// Proof steps: factorizations and derivative identities.
    pub steps: Vec<IdentityCheck>,
    /// Consistency checks outside the chain proper.
    pub extra: Vec<IdentityCheck>,
    pub boundaries: Vec<BoundaryCheck>,
    pub positivity: Vec<PositivityCheck>,
    pub notes: Vec<String>,
    pub verified: bool,
}

impl ChainReport {
    fn finish(mut self) -> Self {
        self.verified = self.steps.iter().chain(&self.extra).all(|s| s.holds)
            && self.boundaries.iter().all(|b| b.matches)
            && self.positivity.iter().all(|p| p.kind != CertificateKind::Failed);
        self
    }

    pub fn steps_verified(&self) -> usize {
        self.steps.iter().filter(|s| s.holds).count()
    }

    /// `Err` describing the first failure.
    pub fn check(&self) -> Result<()> {
        if let Some(s) = self.steps.iter().chain(&self.extra).find(|s| !s.holds) {
            return Err(Error::ChainMismatch {
                step: s.label.clone(),
                detail: s.detail.clone().unwrap_or_default(),
            });
        }
        if let Some(b) = self.boundaries.iter().find(|b| !b.matches) {
            return Err(Error::ChainMismatch {
                step: b.label.clone(),
                detail: format!("computed {} expected {}", b.computed, b.expected.clone().unwrap_or_default()),
            });
        }
        if let Some(p) = self.positivity.iter().find(|p| p.kind == CertificateKind::Failed) {
            return Err(Error::CertificateFailure(p.label.clone()));
        }
        Ok(())
    }
}

fn worst(kinds: impl IntoIterator<Item = CertificateKind>) -> CertificateKind {
    kinds.into_iter().max().unwrap_or(CertificateKind::Shift)
}

/// `p(k) >= 0` (or `> 0` when `strict`) for every `k >= k_min`.
pub fn certify_k_poly(p: &IntPoly, k_min: i64, strict: bool) -> CertificateKind {
    let shifted = p.shift(k_min);
    let c = shifted.coeffs();
    let nonneg = c.iter().all(|v| !v.is_negative());
    let positive_at_start = c.first().is_some_and(|v| v.is_positive());
    if nonneg && (!strict || positive_at_start) {
        return CertificateKind::Shift;
    }
    let lead_ok = c.last().is_some_and(|v| v.is_positive()) || (!strict && p.is_zero());
    let all_ok = (k_min..=EXHAUSTIVE_K_MAX).all(|k| {
        let v = p.eval(&BigInt::from(k));
        if strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    });
    if lead_ok && all_ok {
        CertificateKind::Exhaustive
    } else {
        CertificateKind::Failed
    }
}

/// Every coefficient of a sum of `γ`-powers is nonnegative for `k >= k_min`,
/// so the sum is nonnegative for `γ > 0`.
pub fn certify_termwise(p: &ExpPoly, k_min: i64) -> CertificateKind {
    worst(p.terms().values().map(|c| certify_k_poly(c, k_min, false)))
}

/// A polynomial `Σ c_j(k) γ^j` is nonnegative on `γ >= 1` for `k >= k_min`:
/// substitute `γ = 1 + u` and certify each coefficient of `u^i`.
pub fn certify_on_gamma_ge_1(p: &ExpPoly, k_min: i64) -> CertificateKind {
    let Some(coeffs) = p.as_gamma_poly() else {
        return certify_collapsed(p, k_min);
    };
    let shifted = poly::shift_gamma(&coeffs);
    match worst(shifted.iter().map(|c| certify_k_poly(c, k_min, false))) {
        CertificateKind::Failed => certify_collapsed(p, k_min),
        kind => kind,
    }
}

/// Fixed-`k` fallback: for each `k` in range the collapsed polynomial has
/// nonnegative coefficients in `u = γ - 1`.
fn certify_collapsed(p: &ExpPoly, k_min: i64) -> CertificateKind {
    let ok = (k_min..=EXHAUSTIVE_K_MAX).all(|k| {
        let l = p.collapse_at(k);
        match (l.min_exponent(), l.max_exponent()) {
            (None, _) => true,
            (Some(lo), Some(hi)) if lo >= 0 => {
                let coeffs: Vec<IntPoly> =
                    (0..=hi).map(|e| IntPoly::constant(l.terms().get(&e).cloned().unwrap_or_default())).collect();
                poly::shift_gamma(&coeffs).iter().all(|c| c.as_constant().is_some_and(|v| !v.is_negative()))
            }
            _ => false,
        }
    });
    if ok {
        CertificateKind::Exhaustive
    } else {
        CertificateKind::Failed
    }
}

fn boundary(index: usize, label: String, p: &ExpPoly, expected: Option<&IntPoly>) -> BoundaryCheck {
    let computed = p.eval_at_gamma1();
    BoundaryCheck {
        index,
        label,
        matches: expected.is_none_or(|e| *e == computed),
        computed: computed.to_string(),
        expected: expected.map(ToString::to_string),
        transcribed: None,
    }
}

/// Checks the three-step chain `f0 -> f1 -> f2 -> f2''`.
pub fn verify_f_chain(c: &ChainConstants) -> ChainReport {
    let k_min = c.f_k_min;
    let mut r = ChainReport {
        chain: "f".into(),
        k_min,
        steps: Vec::new(),
        extra: Vec::new(),
        boundaries: Vec::new(),
        positivity: Vec::new(),
        notes: Vec::new(),
        verified: false,
    };
    if c.f.len() != 3 || c.f_factors.len() != 2 || c.f_boundaries.len() != 3 {
        r.steps.push(IdentityCheck { label: "shape".into(), holds: false, detail: Some("expected f0..f2".into()) });
        return r.finish();
    }
    r.extra.push(identity("f0 expands from its definition", &c.f0_definition, &c.f[0]));
    for i in 0..2 {
        let rhs = &c.f_factors[i] * &c.f[i + 1];
        r.steps.push(identity(format!("f{i}' = ({}) f{}", c.f_factors[i], i + 1), &c.f[i].differentiate(), &rhs));
    }
    let f2d = c.f[2].differentiate();
    let second = &c.f_terminal_factor * &c.f_terminal_rest;
    r.steps.push(identity("f2'' = k(k-1) g^(k-3) ((2k+1) g - (k-2))", &f2d.differentiate(), &second));
    for (i, f) in c.f.iter().enumerate() {
        r.boundaries.push(boundary(i, format!("f{i}(1)"), f, Some(&c.f_boundaries[i])));
    }
    r.boundaries.push(boundary(3, "f2'(1)".into(), &f2d, Some(&IntPoly::default())));
    for (i, fac) in c.f_factors.iter().enumerate() {
        r.positivity.push(PositivityCheck { label: format!("factor of f{i}'"), kind: certify_termwise(fac, k_min) });
    }
    r.positivity.push(PositivityCheck {
        label: "f2'' factor".into(),
        kind: certify_termwise(&c.f_terminal_factor, k_min),
    });
    r.positivity.push(PositivityCheck {
        label: "f2'' bracket on g >= 1".into(),
        kind: certify_on_gamma_ge_1(&c.f_terminal_rest, k_min),
    });
    r.finish()
}

/// Checks `g = (k+1)^3 (g-1)^2 g^k g0`, the seventeen steps `g_i' = c_i g_{i+1}`,
/// the boundary table and all positivity side conditions.
pub fn verify_g_chain(c: &ChainConstants) -> ChainReport {
    let k_min = c.g_k_min;
    let mut r = ChainReport {
        chain: "g".into(),
        k_min,
        steps: Vec::new(),
        extra: Vec::new(),
        boundaries: Vec::new(),
        positivity: Vec::new(),
        notes: Vec::new(),
        verified: false,
    };
    let n = c.g.len();
    if n < 2 || c.g_factors.len() + 1 != n || c.g_boundaries.len() != n {
        r.steps.push(IdentityCheck { label: "shape".into(), holds: false, detail: Some("inconsistent lengths".into()) });
        return r.finish();
    }
    r.steps.push(identity("g = (k+1)^3 (g-1)^2 g^k g0", &c.g_definition, &(&c.g_factorization * &c.g[0])));
    let steps: Vec<IdentityCheck> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let rhs = &c.g_factors[i] * &c.g[i + 1];
            identity(format!("g{i}' = ({}) g{}", c.g_factors[i], i + 1), &c.g[i].differentiate(), &rhs)
        })
        .collect();
    r.steps.extend(steps);

    let last = &c.g[n - 1];
    let slope = last.terms().get(&(0, 1)).cloned().unwrap_or_default();
    let slope_ok = slope == c.g17_slope && last.as_gamma_poly().is_some_and(|p| p.len() <= 2);
    r.extra.push(IdentityCheck {
        label: format!("g{} is linear in g with slope {}", n - 1, c.g17_slope),
        holds: slope_ok,
        detail: (!slope_ok).then(|| format!("found slope {slope}")),
    });
    for (i, (gi, b)) in c.g.iter().zip(&c.g_boundaries).enumerate() {
        let mut check = boundary(i, format!("g{i}(1)"), gi, b.as_ref());
        check.transcribed = c.g_boundary_text.get(i).cloned().flatten();
        r.boundaries.push(check);
    }
    r.notes.push(format!("g{}(1) = {}", n - 1, last.eval_at_gamma1()));

    for (i, fac) in c.g_factors.iter().enumerate() {
        r.positivity.push(PositivityCheck { label: format!("factor of g{i}'"), kind: certify_termwise(fac, k_min) });
    }
    for (i, gi) in c.g.iter().enumerate().take(n - 1) {
        let v = gi.eval_at_gamma1();
        if !v.is_zero() {
            r.positivity
                .push(PositivityCheck { label: format!("g{i}(1) > 0"), kind: certify_k_poly(&v, k_min, true) });
        }
    }
    r.positivity.push(PositivityCheck {
        label: format!("g{} >= 0 on g >= 1", n - 1),
        kind: certify_on_gamma_ge_1(last, k_min),
    });
    r.finish()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallKCase {
    pub k: i64,
    pub matches: bool,
    pub expanded: String,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallKReport {
    pub cases: Vec<SmallKCase>,
    /// `g(γ, 4) / (4500 (γ-1)^12 γ^4)`, derived by exact division.
    pub k4_quotient: Option<String>,
    /// Highest power of `γ` in that quotient.
    pub k4_last_exponent: Option<i64>,
    pub verified: bool,
}

/// Expands `g(γ, k)` for `k = 1..4` and compares with the factorized forms.
pub fn verify_small_k(c: &ChainConstants) -> SmallKReport {
    let mut cases = Vec::new();
    let g1 = c.g_definition.collapse_at(1);
    cases.push(SmallKCase {
        k: 1,
        matches: g1.is_zero(),
        expanded: g1.to_string(),
        detail: (!g1.is_zero()).then(|| "g(g, 1) is not identically zero".into()),
    });
    for (&k, factored) in &c.small_k {
        let lhs = c.g_definition.collapse_at(k);
        let rhs = factored.collapse_at(k);
        let matches = lhs == rhs;
        let detail = (!matches).then(|| {
            let diff = Laurent::from_terms(
                lhs.terms()
                    .iter()
                    .map(|(e, v)| (*e, v.clone()))
                    .chain(rhs.terms().iter().map(|(e, v)| (*e, -v))),
            );
            format!("difference {diff}")
        });
        cases.push(SmallKCase { k, matches, expanded: lhs.to_string(), detail });
    }
    let quotient = derive_k4_factor(c);
    let verified = cases.iter().all(|c| c.matches) && quotient.is_some() && cases.iter().any(|c| c.k == 4);
    SmallKReport {
        cases,
        k4_last_exponent: quotient.as_ref().and_then(Laurent::max_exponent),
        k4_quotient: quotient.map(|q| q.to_string()),
        verified,
    }
}

fn derive_k4_factor(c: &ChainConstants) -> Option<Laurent> {
    let mut p = c.g_definition.collapse_at(4).div_exact(&BigInt::from(4500))?;
    for _ in 0..12 {
        p = p.div_gamma_minus_one()?;
    }
    if p.min_exponent()? < 4 {
        return None;
    }
    Some(p.shift_scale(-4, &BigInt::one()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GIdentityReport {
    /// `G(γ, γ^k, k) = g(γ, k)` as exponent polynomials.
    pub symbolic: bool,
    pub spot_checks: Vec<IdentityCheck>,
    pub verified: bool,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn verify_g_identity(c: &ChainConstants) -> Result<GIdentityReport> {
    let lowered = c.big_g.to_exp_poly()?;
    let symbolic = lowered == c.g_definition;
    let mut spot_checks = Vec::new();
    let g23 = c.g_value(&rat(2), &rat(3))?;
    let big23 = c.big_g_value(&rat(2), &rat(8), &rat(3))?;
    spot_checks.push(IdentityCheck {
        label: "G(2, 8, 3) = g(2, 3)".into(),
        holds: g23 == big23,
        detail: Some(format!("g(2, 3) = {g23}")),
    });
    for k in 1..=6 {
        let v = c.big_g_value(&rat(1), &rat(1), &rat(k))?;
        spot_checks.push(IdentityCheck { label: format!("G(1, 1, {k}) = 0"), holds: v.is_zero(), detail: None });
    }
    let verified = symbolic && spot_checks.iter().all(|s| s.holds);
    Ok(GIdentityReport { symbolic, spot_checks, verified })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImplicationSample {
    pub gamma: String,
    pub xi: String,
    pub k: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub label: String,
    pub random_samples: usize,
    pub grid_samples: usize,
    /// Samples where `G(γ, ξ, k) >= 0`.
    pub antecedent_held: usize,
    pub counterexamples: Vec<ImplicationSample>,
    pub seed: u64,
}

impl ImplicationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Nearest rational with denominator `2^16`, keeping exact evaluation cheap.
fn dyadic(x: f64) -> BigRational {
    let scale = 65536.0;
    BigRational::new(BigInt::from((x * scale).round() as i64), BigInt::from(65536))
}

const XI_MAX: f64 = 1e6;

fn draw(i: usize, rng: &mut ChaCha8Rng) -> (BigRational, BigRational, BigRational) {
    match i % 4 {
        0 => {
            let g = rng.random_range(1.0..1000.0);
            let xi = rng.random_range(g..XI_MAX);
            let k = rng.random_range(1.0..50.0);
            (dyadic(g), dyadic(xi), dyadic(k))
        }
        1 => {
            let g: f64 = 10f64.powf(rng.random_range(0.0..3.0));
            let xi = g * 10f64.powf(rng.random_range(0.0..(6.0 - g.log10()).max(1e-9)));
            let k = rng.random_range(1..=50);
            (dyadic(g), dyadic(xi.min(XI_MAX)).max(dyadic(g)), rat(k))
        }
        2 => {
            // ξ = γ^k puts the antecedent on the g(γ, k) slice
            let gq = BigRational::one() + dyadic(10f64.powf(rng.random_range(-4.0..0.0)));
            let k = rng.random_range(1..=50u32);
            let xi = num_traits::pow(gq.clone(), k as usize);
            let cap = rat(XI_MAX as i64);
            (gq.clone(), if xi > cap { cap.max(gq) } else { xi }, rat(k as i64))
        }
        _ => {
            let g: f64 = rng.random_range(1.0..3.0);
            let k = 1.0 + rng.random_range(0..392) as f64 / 8.0;
            let hi = g.powf(k + 2.0).min(XI_MAX);
            let xi = if hi > g { rng.random_range(g..hi) } else { g };
            (dyadic(g), dyadic(xi).max(dyadic(g)), dyadic(k))
        }
    }
}

fn grid() -> Vec<(BigRational, BigRational, BigRational)> {
    let gammas = [
        rat(1),
        BigRational::one() + BigRational::new(1.into(), 1024.into()),
        BigRational::new(3.into(), 2.into()),
        rat(2),
        rat(10),
        rat(1000),
    ];
    let mut out = Vec::new();
    for g in &gammas {
        for k in [1, 2, 3, 5, 10, 20, 50] {
            let cap = rat(XI_MAX as i64);
            let pk = num_traits::pow(g.clone(), k as usize);
            for xi in [g.clone(), pk, g * rat(10), cap.clone()] {
                if xi >= *g && xi <= cap {
                    out.push((g.clone(), xi, rat(k)));
                }
            }
        }
    }
    out
}

/// Falsification search for `G(γ,ξ,k) >= 0 ⇒ G(γ, ξγ, k+1) >= 0` over
/// `γ ∈ [1, 1e3]`, `ξ ∈ [γ, 1e6]`, `k ∈ [1, 50]`. Finding nothing is
/// evidence, not a proof.
pub fn sample_implication(c: &ChainConstants, n_samples: usize, seed: u64) -> Result<ImplicationReport> {
    let check = |(g, xi, k): &(BigRational, BigRational, BigRational)| -> Result<(bool, bool)> {
        let ante = !c.big_g_value(g, xi, k)?.is_negative();
        if !ante {
            return Ok((false, false));
        }
        let cons = c.big_g_value(g, &(xi * g), &(k + BigRational::one()))?;
        Ok((true, cons.is_negative()))
    };
    let random: Vec<Result<(bool, Option<ImplicationSample>)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let s = draw(i, &mut rng);
            let (ante, bad) = check(&s)?;
            Ok((ante, bad.then(|| describe(&s))))
        })
        .collect();
    let grid_points = grid();
    let fixed: Vec<Result<(bool, Option<ImplicationSample>)>> = grid_points
        .par_iter()
        .map(|s| {
            let (ante, bad) = check(s)?;
            Ok((ante, bad.then(|| describe(s))))
        })
        .collect();
    let mut report = ImplicationReport {
        label: "heuristic falsification search, not a proof".into(),
        random_samples: n_samples,
        grid_samples: grid_points.len(),
        antecedent_held: 0,
        counterexamples: Vec::new(),
        seed,
    };
    for r in random.into_iter().chain(fixed) {
        let (ante, bad) = r?;
        report.antecedent_held += ante as usize;
        report.counterexamples.extend(bad);
    }
    Ok(report)
}

fn describe((g, xi, k): &(BigRational, BigRational, BigRational)) -> ImplicationSample {
    let show = |v: &BigRational| {
        let f = v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN);
        format!("{v} (~{f:.6e})")
    };
    ImplicationSample { gamma: show(g), xi: show(xi), k: show(k) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CascadeReport {
    pub f_chain: ChainReport,
    pub g_chain: ChainReport,
    pub small_k: SmallKReport,
    pub g_identity: GIdentityReport,
    pub verified: bool,
}

/// Runs every exact check on the embedded constants.
pub fn verify_all() -> Result<CascadeReport> {
    let c = ChainConstants::embedded();
    let (f_chain, g_chain) = rayon::join(|| verify_f_chain(c), || verify_g_chain(c));
    let small_k = verify_small_k(c);
    let g_identity = verify_g_identity(c)?;
    let verified = f_chain.verified && g_chain.verified && small_k.verified && g_identity.verified;
    Ok(CascadeReport { f_chain, g_chain, small_k, g_identity, verified })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> &'static ChainConstants {
        ChainConstants::embedded()
    }

    #[test]
    fn f_chain_verifies() {
        let r = verify_f_chain(c());
        r.check().unwrap();
        assert_eq!(r.steps_verified(), 3);
        assert!(r.positivity.iter().all(|p| p.kind == CertificateKind::Shift));
    }

    #[test]
    fn f0_collapses_at_two() {
        let l = c().f[0].collapse_at(2);
        let expected = Laurent::from_terms([
            (5, 4.into()),
            (4, (-15).into()),
            (3, 20.into()),
            (2, (-10).into()),
            (0, 1.into()),
        ]);
        assert_eq!(l, expected);
        assert_eq!(c().f[0].eval(2, &rat(2)), rat(9));
    }

    #[test]
    fn g_chain_verifies() {
        let r = verify_g_chain(c());
        r.check().unwrap();
        assert_eq!(r.steps.len(), 18);
        assert_eq!(r.boundaries[10].computed, parse_int_poly("350(k-1)k^2(k+1)(k+2)^2").unwrap().to_string());
        assert!(r.notes[0].ends_with(&parse_int_poly("80k^2+131k+63").unwrap().to_string()));
    }

    #[test]
    fn small_k_and_substitution() {
        let s = verify_small_k(c());
        assert!(s.verified, "{s:?}");
        assert_eq!(s.k4_last_exponent, Some(10));
        assert!(verify_g_identity(c()).unwrap().verified);
    }

    #[test]
    fn tampered_step_is_reported() {
        let mut bad = c().clone();
        bad.g_factors[2] = parse_exp_poly("2(k+2)").unwrap();
        let r = verify_g_chain(&bad);
        assert!(!r.verified);
        match r.check() {
            Err(Error::ChainMismatch { step, detail }) => {
                assert!(step.starts_with("g2'"));
                assert!(!detail.is_empty());
            }
            other => panic!("{other:?}"),
        }
        let mut bad = c().clone();
        bad.g_boundaries[12] = Some(parse_int_poly("14(k-1)k(k+1)(k+2)(1081k^3 + 2951k^2 + 1664k + 371)").unwrap());
        assert!(matches!(verify_g_chain(&bad).check(), Err(Error::ChainMismatch { .. })));
    }

    #[test]
    fn certificates() {
        assert_eq!(certify_k_poly(&parse_int_poly("k-5").unwrap(), 5, false), CertificateKind::Shift);
        assert_eq!(certify_k_poly(&parse_int_poly("k-5").unwrap(), 5, true), CertificateKind::Failed);
        // (k-7)^2 + 1 has a negative coefficient after k = m + 5 but is positive
        assert_eq!(certify_k_poly(&parse_int_poly("(k-7)^2+1").unwrap(), 5, true), CertificateKind::Exhaustive);
        assert_eq!(certify_on_gamma_ge_1(&parse_exp_poly("g - 1").unwrap(), 5), CertificateKind::Shift);
        assert_eq!(certify_on_gamma_ge_1(&parse_exp_poly("1 - g").unwrap(), 5), CertificateKind::Failed);
    }

    #[test]
    fn implication_examples() {
        let c = c();
        assert!(c.big_g_value(&rat(1), &rat(1), &rat(1)).unwrap().is_zero());
        assert!(!c.big_g_value(&rat(2), &rat(8), &rat(3)).unwrap().is_negative());
        assert!(!c.big_g_value(&rat(2), &rat(16), &rat(4)).unwrap().is_negative());
        let r = sample_implication(c, 200, crate::DEFAULT_SEED).unwrap();
        assert!(r.passed());
        assert!(r.antecedent_held > 0);
    }
}
