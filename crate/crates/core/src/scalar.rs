//! Numeric scalar abstraction shared by the geometry and moment code.
//!
//! Two instantiations exist: `f64` for speed and [`BigRational`] for exact
//! oracle runs. Tolerance-based predicates collapse to exact zero tests on the
//! rational side, so the same algorithm text serves both.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is exact and tolerances must be ignored.
    const EXACT: bool;

    /// Exact conversion for rationals (the binary value of `x`), identity for floats.
    fn from_f64(x: f64) -> Self;
    fn from_i64(x: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Natural log, finite for positive values of any magnitude.
    fn ln(&self) -> f64;

    /// `|self| <= eps * scale` for floats, `self == 0` for exact scalars.
    fn is_negligible(&self, eps: f64, scale: f64) -> bool;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(x: i64) -> Self {
        x as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn ln(&self) -> f64 {
        f64::ln(*self)
    }
    fn is_negligible(&self, eps: f64, scale: f64) -> bool {
        f64::abs(*self) <= eps * scale
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn ln(&self) -> f64 {
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }
    fn is_negligible(&self, _eps: f64, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Correctly scaled conversion that survives numerators and denominators
/// beyond the `f64` range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    let shift = num_bits - den_bits;
    // bring the quotient near 2^60 before converting
    let scaled = if shift > 60 {
        r / BigRational::from_integer(BigInt::one() << ((shift - 60) as usize))
    } else {
        r * BigRational::from_integer(BigInt::one() << ((60 - shift) as usize))
    };
    let mant = scaled.to_integer().to_f64().unwrap_or(0.0);
    mant * 2f64.powi((shift - 60) as i32)
}

fn ln_bigint(b: &BigInt) -> f64 {
    let bits = b.bits();
    if bits <= 1000 {
        return b.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = (bits - 60) as usize;
    let top = (b >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Dot product over any scalar.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn to_f64_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub fn from_f64_vec<S: Scalar>(v: &[f64]) -> Vec<S> {
    v.iter().map(|&x| S::from_f64(x)).collect()
}

/// `x^e` by repeated squaring.
pub fn powi<S: Scalar>(x: &S, mut e: u32) -> S {
    let mut base = x.clone();
    let mut acc = S::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        e >>= 1;
    }
    acc
}

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}
