//! Parser for the transcribed chain constants.
//!
//! Grammar (implicit multiplication by juxtaposition):
//!
//! ```text
//! expr    := ('+' | '-')? term (('+' | '-') term)*
//! term    := factor ('*'? factor)*
//! factor  := primary ('^' primary)?
//! primary := integer | 'g' | 'k' | 'xi' | '(' expr ')'
//! ```
//!
//! `g` is γ, `xi` stands for `γ^k` when lowered to an [`ExpPoly`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{ExpPoly, IntPoly};
use crate::error::{Error, Result};

/// Largest `a` accepted in a literal exponent `g^(a k + b)`.
pub const MAX_EXP_A: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    G,
    K,
    Xi,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Var(Var),
    Neg(Box<Expr>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
                continue;
            }
            b'x' if bytes.get(i + 1) == Some(&b'i') => {
                out.push((i, Tok::Var(Var::Xi)));
                i += 2;
                continue;
            }
            b'g' => Tok::Var(Var::G),
            b'k' => Tok::Var(Var::K),
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character {:?}", c as char) }),
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            terms.push(if negate { Expr::Neg(Box::new(t)) } else { t });
            negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::LParen) => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.primary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Expr::Var(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, end: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(e) => e.mentions(v),
            Expr::Add(es) | Expr::Mul(es) => es.iter().any(|e| e.mentions(v)),
            Expr::Pow(b, e) => b.mentions(v) || e.mentions(v),
        }
    }

    /// Polynomial in `k`; fails if `g` or `xi` appear.
    pub fn to_int_poly(&self) -> Result<IntPoly> {
        Ok(match self {
            Expr::Num(n) => IntPoly::constant(n.clone()),
            Expr::Var(Var::K) => IntPoly::k(),
            Expr::Var(v) => return Err(Error::InvalidInput(format!("{v:?} in a polynomial in k"))),
            Expr::Neg(e) => -&e.to_int_poly()?,
            Expr::Add(es) => es.iter().try_fold(IntPoly::default(), |acc, e| Ok::<_, Error>(&acc + &e.to_int_poly()?))?,
            Expr::Mul(es) => es.iter().try_fold(IntPoly::constant(1), |acc, e| Ok::<_, Error>(&acc * &e.to_int_poly()?))?,
            Expr::Pow(b, e) => b.to_int_poly()?.pow(const_exponent(e)?),
        })
    }

    /// Lowers to an exponent polynomial, reading `xi` as `γ^k`.
    pub fn to_exp_poly(&self) -> Result<ExpPoly> {
        let one = || IntPoly::constant(1);
        Ok(match self {
            Expr::Num(n) => ExpPoly::constant(IntPoly::constant(n.clone())),
            Expr::Var(Var::K) => ExpPoly::constant(IntPoly::k()),
            Expr::Var(Var::G) => ExpPoly::monomial((0, 1), one()),
            Expr::Var(Var::Xi) => ExpPoly::monomial((1, 0), one()),
            Expr::Neg(e) => -&e.to_exp_poly()?,
            Expr::Add(es) => es.iter().try_fold(ExpPoly::zero(), |acc, e| Ok::<_, Error>(&acc + &e.to_exp_poly()?))?,
            Expr::Mul(es) => {
                es.iter().try_fold(ExpPoly::constant(one()), |acc, e| Ok::<_, Error>(&acc * &e.to_exp_poly()?))?
            }
            Expr::Pow(b, e) => {
                if !e.mentions(Var::K) {
                    b.to_exp_poly()?.pow(const_exponent(e)?)
                } else if **b == Expr::Var(Var::G) {
                    let p = e.to_int_poly()?;
                    let c = p.coeffs();
                    if p.degree().unwrap_or(0) > 1 {
                        return Err(Error::InvalidInput(format!("exponent {p} is not affine in k")));
                    }
                    let b0 = c.first().cloned().unwrap_or_default();
                    let a = c.get(1).cloned().unwrap_or_default();
                    let (a, b0) = (a.to_i64().unwrap_or(-1), b0.to_i64().unwrap_or(i64::MAX));
                    if !(0..=MAX_EXP_A).contains(&a) || b0 == i64::MAX {
                        return Err(Error::InvalidInput(format!("exponent {p} out of range")));
                    }
                    ExpPoly::monomial((a as u32, b0), one())
                } else {
                    return Err(Error::InvalidInput("only g may carry a k-dependent exponent".into()));
                }
            }
        })
    }

    /// Exact value at concrete `γ`, `ξ` and `k`; integer exponents only.
    pub fn eval(&self, g: &BigRational, xi: &BigRational, k: &BigRational) -> Result<BigRational> {
        let fast = || Some((Dyadic::from_rational(g)?, Dyadic::from_rational(xi)?, Dyadic::from_rational(k)?));
        if let Some(v) = fast().and_then(|(g, xi, k)| self.eval_dyadic(&g, &xi, &k)) {
            return Ok(v.into_rational());
        }
        self.eval_rational(g, xi, k)
    }

    /// Evaluation without gcd reductions; `None` when a step leaves the dyadics.
    fn eval_dyadic(&self, g: &Dyadic, xi: &Dyadic, k: &Dyadic) -> Option<Dyadic> {
        Some(match self {
            Expr::Num(n) => Dyadic { m: n.clone(), e: 0 },
            Expr::Var(Var::G) => g.clone(),
            Expr::Var(Var::Xi) => xi.clone(),
            Expr::Var(Var::K) => k.clone(),
            Expr::Neg(e) => {
                let v = e.eval_dyadic(g, xi, k)?;
                Dyadic { m: -v.m, e: v.e }
            }
            Expr::Add(es) => {
                let mut acc = Dyadic { m: BigInt::zero(), e: 0 };
                for e in es {
                    acc = acc.add(&e.eval_dyadic(g, xi, k)?);
                }
                acc
            }
            Expr::Mul(es) => {
                let mut acc = Dyadic { m: BigInt::one(), e: 0 };
                for e in es {
                    acc = acc.mul(&e.eval_dyadic(g, xi, k)?);
                }
                acc
            }
            Expr::Pow(b, e) => {
                let n = e.eval_dyadic(g, xi, k)?.to_u32()?;
                let base = b.eval_dyadic(g, xi, k)?;
                Dyadic { m: num_traits::pow(base.m, n as usize), e: base.e * n as u64 }
            }
        })
    }

    fn eval_rational(&self, g: &BigRational, xi: &BigRational, k: &BigRational) -> Result<BigRational> {
        Ok(match self {
            Expr::Num(n) => BigRational::from_integer(n.clone()),
            Expr::Var(Var::G) => g.clone(),
            Expr::Var(Var::Xi) => xi.clone(),
            Expr::Var(Var::K) => k.clone(),
            Expr::Neg(e) => -e.eval_rational(g, xi, k)?,
            Expr::Add(es) => {
                es.iter().try_fold(BigRational::zero(), |acc, e| Ok::<_, Error>(acc + e.eval_rational(g, xi, k)?))?
            }
            Expr::Mul(es) => {
                es.iter().try_fold(BigRational::one(), |acc, e| Ok::<_, Error>(acc * e.eval_rational(g, xi, k)?))?
            }
            Expr::Pow(b, e) => {
                let ev = e.eval_rational(g, xi, k)?;
                if !ev.is_integer() {
                    return Err(Error::InvalidInput(format!("non-integer exponent {ev}")));
                }
                let n = ev.to_integer().to_i64().ok_or_else(|| Error::InvalidInput("exponent too large".into()))?;
                let base = b.eval_rational(g, xi, k)?;
                if n < 0 {
                    if base.is_zero() {
                        return Err(Error::InvalidInput("zero to a negative power".into()));
                    }
                    num_traits::pow(base.recip(), n.unsigned_abs() as usize)
                } else {
                    num_traits::pow(base, n as usize)
                }
            }
        })
    }
}

/// `m / 2^e`.
#[derive(Clone, Debug)]
struct Dyadic {
    m: BigInt,
    e: u64,
}

impl Dyadic {
    fn from_rational(q: &BigRational) -> Option<Self> {
        let d = q.denom();
        let e = d.trailing_zeros()?;
        (*d == BigInt::one() << e).then(|| Dyadic { m: q.numer().clone(), e })
    }

    fn add(&self, o: &Dyadic) -> Dyadic {
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        Dyadic { m: &hi.m + (&lo.m << (hi.e - lo.e)), e: hi.e }
    }

    fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { m: &self.m * &o.m, e: self.e + o.e }
    }

    fn to_u32(&self) -> Option<u32> {
        if self.m.is_zero() {
            return Some(0);
        }
        if self.m.is_negative() || self.m.trailing_zeros()? < self.e {
            return None;
        }
        (&self.m >> self.e).to_u32()
    }

    fn into_rational(self) -> BigRational {
        BigRational::new(self.m, BigInt::one() << self.e)
    }
}

fn const_exponent(e: &Expr) -> Result<u32> {
    let p = e.to_int_poly()?;
    let c = p.as_constant().ok_or_else(|| Error::InvalidInput(format!("exponent {p} depends on k")))?;
    if c.is_negative() {
        return Err(Error::InvalidInput(format!("negative exponent {c}")));
    }
    c.to_u32().ok_or_else(|| Error::InvalidInput("exponent too large".into()))
}

pub fn parse_exp_poly(s: &str) -> Result<ExpPoly> {
    parse(s)?.to_exp_poly()
}

pub fn parse_int_poly(s: &str) -> Result<IntPoly> {
    parse(s)?.to_int_poly()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn implicit_multiplication_and_powers() {
        let p = parse_int_poly("2k(k+1)^2 - 3").unwrap();
        assert_eq!(p.to_string(), "2k^3 + 4k^2 + 2k - 3");
        let e = parse("(12k^3+76k^2) g -12k^3+4k^2+3k-1").unwrap();
        assert_eq!(e.eval(&q(1), &q(0), &q(1)).unwrap(), q(88 - 6));
        assert_eq!(parse_int_poly("k^11").unwrap().degree(), Some(11));
    }

    #[test]
    fn exponent_forms() {
        let p = parse_exp_poly("k g^(k-1) + g^4 + g^(4k+4) + xi g").unwrap();
        let keys: Vec<_> = p.terms().keys().copied().collect();
        assert_eq!(keys, vec![(0, 4), (1, -1), (1, 1), (4, 4)]);
        assert!(parse_exp_poly("g^(9k)").is_err());
        assert!(parse_exp_poly("g^(k^2)").is_err());
        assert!(parse_exp_poly("k^k").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse("2k + (g") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("2 $ 3"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse("2)").is_err());
    }

    #[test]
    fn rational_eval_negative_exponent() {
        let e = parse("g^(k-3)").unwrap();
        let v = e.eval(&q(2), &q(0), &q(1)).unwrap();
        assert_eq!(v, BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn dyadic_path_matches_rational_path() {
        let e = parse("4(k-1)^2(xi g^2 - 1)^3 - (k+2)(xi-1)^2 g^(k+1)").unwrap();
        let pts = [
            (BigRational::new(3.into(), 2.into()), BigRational::new(17.into(), 1024.into()), q(5)),
            (BigRational::new(1025.into(), 1024.into()), q(7), q(2)),
            (BigRational::new(4.into(), 3.into()), q(2), q(3)),
        ];
        for (g, xi, k) in pts {
            assert_eq!(e.eval(&g, &xi, &k).unwrap(), e.eval_rational(&g, &xi, &k).unwrap());
        }
        // a fractional exponent still reports an error
        assert!(e.eval(&q(2), &q(1), &BigRational::new(1.into(), 2.into())).is_err());
    }
}
