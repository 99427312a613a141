//! Integer polynomials in `k`, exponent polynomials `Σ c_{a,b}(k) γ^{ak+b}`,
//! and the univariate forms they collapse to once `k` is fixed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial in `k` with big-integer coefficients, lowest degree first,
/// no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The polynomial `k`.
    pub fn k() -> Self {
        Self::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// The constant term if the polynomial has degree at most 0.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.0.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, k: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * k + c)
    }

    pub fn eval_rational(&self, k: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * k + BigRational::from_integer(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// `p(m + s)` as a polynomial in `m`.
    pub fn shift(&self, s: i64) -> Self {
        let lin = Self::new(vec![BigInt::from(s), BigInt::one()]);
        self.0.iter().rev().fold(Self::default(), |acc, c| &(&acc * &lin) + &Self::constant(c.clone()))
    }

    /// Every coefficient of `p(m + k_min)` is nonnegative, so `p(k) >= 0`
    /// for all real `k >= k_min`.
    pub fn shift_certificate(&self, k_min: i64) -> bool {
        self.shift(k_min).0.iter().all(|c| !c.is_negative())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        let z = BigInt::zero();
        IntPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + rhs.0.get(i).unwrap_or(&z)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (BigInt, String)>) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
            (true, false) => {}
        }
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}{mono}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn power_name(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.clone(), power_name("k", i as i64)));
        write_terms(f, terms)
    }
}

/// Key `(a, b)` of the monomial `γ^{a k + b}`.
pub type ExpKey = (u32, i64);

/// `Σ c_{a,b}(k) γ^{ak+b}` in canonical form (no zero coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpPoly {
    terms: BTreeMap<ExpKey, IntPoly>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(key: ExpKey, coeff: IntPoly) -> Self {
        let mut p = Self::zero();
        p.add_term(key, coeff);
        p
    }

    pub fn constant(c: IntPoly) -> Self {
        Self::monomial((0, 0), c)
    }

    pub fn terms(&self) -> &BTreeMap<ExpKey, IntPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_a(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    fn add_term(&mut self, key: ExpKey, coeff: IntPoly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_default();
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Multiplies every coefficient by a polynomial in `k`.
    pub fn scale(&self, c: &IntPoly) -> Self {
        let mut out = Self::zero();
        for (key, v) in &self.terms {
            out.add_term(*key, v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(IntPoly::constant(1)), |acc, _| &acc * self)
    }

    /// Termwise `d/dγ`: `c γ^{ak+b} -> (ak+b) c γ^{ak+b-1}`.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let factor = IntPoly::new(vec![BigInt::from(b), BigInt::from(a)]);
            out.add_term((a, b - 1), c * &factor);
        }
        out
    }

    /// `Σ c_{a,b}(k)`, the value at `γ = 1`.
    pub fn eval_at_gamma1(&self) -> IntPoly {
        self.terms.values().fold(IntPoly::default(), |acc, c| &acc + c)
    }

    /// Fixes `k` and merges coinciding exponents.
    pub fn collapse_at(&self, k: i64) -> Laurent {
        let kb = BigInt::from(k);
        let mut out = Laurent::default();
        for (&(a, b), c) in &self.terms {
            out.add_term(a as i64 * k + b, c.eval(&kb));
        }
        out
    }

    /// Exact value at integer `k` and rational `γ > 0`.
    pub fn eval(&self, k: i64, gamma: &BigRational) -> BigRational {
        self.collapse_at(k).eval(gamma)
    }

    /// The γ-polynomial `Σ c_j(k) γ^j` when no exponent depends on `k` and
    /// none is negative.
    pub fn as_gamma_poly(&self) -> Option<Vec<IntPoly>> {
        let mut out: Vec<IntPoly> = Vec::new();
        for (&(a, b), c) in &self.terms {
            if a != 0 || b < 0 {
                return None;
            }
            let j = b as usize;
            if out.len() <= j {
                out.resize(j + 1, IntPoly::default());
            }
            out[j] = c.clone();
        }
        Some(out)
    }

    /// First term of `self - other` in display order, for mismatch reports.
    pub fn first_difference(&self, other: &ExpPoly) -> Option<String> {
        let d = self - other;
        d.terms.iter().next_back().map(|(k, c)| format!("({c}) {}", exp_name(*k)))
    }
}

fn exp_name((a, b): ExpKey) -> String {
    let e = match (a, b) {
        (0, b) => return power_name("g", b),
        (1, 0) => "k".to_string(),
        (a, 0) => format!("{a}k"),
        (1, b) if b > 0 => format!("k+{b}"),
        (1, b) => format!("k{b}"),
        (a, b) if b > 0 => format!("{a}k+{b}"),
        (a, b) => format!("{a}k{b}"),
    };
    format!("g^({e})")
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| {
                let name = exp_name(*k);
                if name.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {name}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Univariate Laurent polynomial in `γ` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<i64, BigInt>,
}

impl Laurent {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut out = Self::default();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn eval(&self, gamma: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&e, c) in &self.terms {
            let p = if e >= 0 {
                num_traits::pow(gamma.clone(), e as usize)
            } else {
                num_traits::pow(gamma.recip(), (-e) as usize)
            };
            acc += p * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact quotient by `(γ - 1)` if it divides, else `None`.
    pub fn div_gamma_minus_one(&self) -> Option<Laurent> {
        let lo = self.min_exponent()?;
        let hi = self.max_exponent()?;
        // synthetic division from the top degree down
        let mut q = BTreeMap::new();
        let mut carry = BigInt::zero();
        for e in (lo..=hi).rev() {
            let c = self.terms.get(&e).cloned().unwrap_or_default() + &carry;
            if e == lo {
                return c.is_zero().then(|| Laurent::from_terms(q));
            }
            q.insert(e - 1, c.clone());
            carry = c;
        }
        None
    }

    /// Multiplies by `c γ^s`.
    pub fn shift_scale(&self, s: i64, c: &BigInt) -> Laurent {
        Laurent::from_terms(self.terms.iter().map(|(e, v)| (e + s, v * c)))
    }

    /// Exact division by an integer that divides every coefficient.
    pub fn div_exact(&self, d: &BigInt) -> Option<Laurent> {
        if d.is_zero() || self.terms.values().any(|c| !(c % d).is_zero()) {
            return None;
        }
        Some(Laurent::from_terms(self.terms.iter().map(|(e, c)| (*e, c / d))))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(e, c)| (c.clone(), power_name("g", *e))))
    }
}

/// Substitutes `γ = 1 + u` into `Σ c_j(k) γ^j`, returning coefficients of `u^i`.
pub fn shift_gamma(coeffs: &[IntPoly]) -> Vec<IntPoly> {
    let mut out = vec![IntPoly::default(); coeffs.len()];
    for (j, c) in coeffs.iter().enumerate() {
        let mut binom = BigInt::one();
        for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
            *slot = &*slot + &(c * &IntPoly::constant(binom.clone()));
            binom = binom * BigInt::from(j - i) / BigInt::from(i + 1);
        }
    }
    out
}
