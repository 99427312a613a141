mod common;

use barrierlab::cascade::{
    parse_exp_poly, parse_int_poly, sample_implication, verify_f_chain, verify_g_chain, verify_g_identity, verify_small_k,
    ChainConstants, CertificateKind, ExpPoly, IntPoly, Laurent,
};
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

type Q = BigRational;

fn c() -> &'static ChainConstants {
    ChainConstants::embedded()
}

fn r(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Exact value of `d/dγ` of a Laurent polynomial.
fn derivative_at(l: &Laurent, g: &Q) -> Q {
    l.terms().iter().fold(Q::zero(), |acc, (e, v)| {
        acc + Q::from_integer(v * BigInt::from(*e)) * num_traits::pow(g.clone(), (*e - 1).max(0) as usize)
            / if *e >= 1 { Q::from_integer(1.into()) } else { num_traits::pow(g.clone(), (1 - *e) as usize) }
    })
}

#[test]
fn chain_steps_hold_at_random_points() {
    let mut rg = rng(40);
    let c = c();
    for _ in 0..20 {
        let k = rg.random_range(5..60i64);
        let g = r(rg.random_range(1..400), rg.random_range(1..100));
        for i in 0..c.g.len() - 1 {
            let lhs = derivative_at(&c.g[i].collapse_at(k), &g);
            let rhs = c.g_factors[i].eval(k, &g) * c.g[i + 1].eval(k, &g);
            assert_eq!(lhs, rhs, "step {i} at k={k}, g={g}");
        }
        for i in 0..2 {
            let lhs = derivative_at(&c.f[i].collapse_at(k), &g);
            assert_eq!(lhs, c.f_factors[i].eval(k, &g) * c.f[i + 1].eval(k, &g));
        }
        // the parsed tree and the expanded form agree
        let kq = Q::from_integer(k.into());
        assert_eq!(c.g_value(&g, &kq).unwrap(), c.g_definition.eval(k, &g));
    }
}

#[test]
fn tampered_identity_is_seen_numerically() {
    let mut bad = c().clone();
    bad.g_factors[5] = &bad.g_factors[5] + &parse_exp_poly("1").unwrap();
    assert!(!verify_g_chain(&bad).verified);
    let mut rg = rng(41);
    let differs = (0..20).any(|_| {
        let k = rg.random_range(5..60i64);
        let g = r(rg.random_range(1..400), rg.random_range(1..100));
        derivative_at(&bad.g[5].collapse_at(k), &g) != bad.g_factors[5].eval(k, &g) * bad.g[6].eval(k, &g)
    });
    assert!(differs);
}

#[test]
fn boundary_table_entries() {
    let rep = verify_g_chain(c());
    let expect = |i: usize, s: &str| assert_eq!(rep.boundaries[i].computed, parse_int_poly(s).unwrap().to_string());
    expect(10, "350(k-1)k^2(k+1)(k+2)^2");
    expect(15, "7(k-1)k(k+1)(281k^2+471k+214)");
    expect(16, "(k-1)k(2442k^4+8626k^3+11825k^2+7479k+1862)");
    assert_eq!(c().g17_slope, parse_int_poly("12k^3+76k^2+128k+64").unwrap());
    assert!(rep.boundaries.iter().all(|b| b.matches));
    let f = verify_f_chain(c());
    assert!(f.verified && f.boundaries[0].computed == "0");
}

#[test]
fn f0_derivative_names_f1() {
    let c = c();
    let lhs = c.f[0].differentiate();
    let rhs = &parse_exp_poly("k g^(k-1)").unwrap() * &c.f[1];
    assert_eq!(lhs, rhs);
    for k in 2..=10 {
        assert!(!c.f[0].eval(k, &r(3, 2)).is_negative());
    }
}

#[test]
fn factored_value_at_thirteen_sevenths() {
    let c = c();
    let g = r(13, 7);
    let direct = c.g_value(&g, &r(7, 1)).unwrap();
    let factored = c.g_factorization.eval(7, &g) * c.g[0].eval(7, &g);
    assert_eq!(direct, factored);
    assert!(!direct.is_negative());
}

#[test]
fn small_cases_and_substitution() {
    let s = verify_small_k(c());
    assert!(s.verified);
    for k in [1, 2, 3, 4] {
        assert!(s.cases.iter().any(|x| x.k == k && x.matches), "k = {k}");
    }
    assert_eq!(s.k4_last_exponent, Some(10));
    let gi = verify_g_identity(c()).unwrap();
    assert!(gi.symbolic && gi.verified);
    assert_eq!(c().big_g_value(&r(2, 1), &r(8, 1), &r(3, 1)).unwrap(), c().g_value(&r(2, 1), &r(3, 1)).unwrap());
}

#[test]
fn implication_report_is_deterministic() {
    let a = sample_implication(c(), 2000, 7).unwrap();
    let b = sample_implication(c(), 2000, 7).unwrap();
    assert_eq!(a, b);
    assert!(a.passed() && a.label.contains("not a proof"));
}

#[test]
fn certified_boundaries_are_nonnegative_by_evaluation() {
    let c = c();
    let rep = verify_g_chain(c);
    let mut checked = 0;
    for (i, g) in c.g.iter().enumerate().take(c.g.len() - 1) {
        let v = g.eval_at_gamma1();
        if v.is_zero() {
            continue;
        }
        let label = format!("g{i}(1) > 0");
        assert!(rep.positivity.iter().any(|p| p.label == label && p.kind == CertificateKind::Shift), "{label}");
        for k in 5..=100 {
            assert!(v.eval(&BigInt::from(k)).is_positive(), "{label} at k={k}");
        }
        checked += 1;
    }
    assert!(checked > 0);
    // every derivative factor is nonnegative coefficientwise on the same range
    for (i, f) in c.g_factors.iter().enumerate() {
        for coeff in f.terms().values() {
            for k in 5..=100 {
                assert!(!coeff.eval(&BigInt::from(k)).is_negative(), "factor {i} at k={k}");
            }
        }
    }
}

fn int_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-50i64..=50, 1..4).prop_map(|c| IntPoly::new(c.into_iter().map(BigInt::from).collect()))
}

fn term() -> impl Strategy<Value = (u32, i64, IntPoly)> {
    (0u32..=4, -6i64..=6, int_poly())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn power_rule_on_single_terms((a, b, p) in term()) {
        let d = ExpPoly::monomial((a, b), p.clone()).differentiate();
        // d/dγ p(k) γ^(ak+b) = p(k) (ak+b) γ^(ak+b-1)
        let factor = IntPoly::new(vec![BigInt::from(b), BigInt::from(a)]);
        let expected = ExpPoly::monomial((a, b - 1), &p * &factor);
        prop_assert_eq!(d, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn differentiation_is_linear(s in prop::collection::vec(term(), 1..5), t in prop::collection::vec(term(), 1..5)) {
        let build = |ts: &[(u32, i64, IntPoly)]| ts.iter().fold(ExpPoly::zero(), |acc, (a, b, p)| &acc + &ExpPoly::monomial((*a, *b), p.clone()));
        let (p, q) = (build(&s), build(&t));
        prop_assert_eq!((&p + &q).differentiate(), &p.differentiate() + &q.differentiate());
    }

    #[test]
    fn collapse_agrees_with_termwise_evaluation(s in prop::collection::vec(term(), 1..5), k in 5i64..40, num in 1i64..300, den in 1i64..50) {
        let g = r(num, den);
        let p = s.iter().fold(ExpPoly::zero(), |acc, (a, b, c)| &acc + &ExpPoly::monomial((*a, *b), c.clone()));
        let direct = s.iter().fold(Q::zero(), |acc, (a, b, c)| {
            let e = *a as i64 * k + b;
            let pw = if e >= 0 { num_traits::pow(g.clone(), e as usize) } else { num_traits::pow(g.clone(), (-e) as usize).recip() };
            acc + Q::from_integer(c.eval(&BigInt::from(k))) * pw
        });
        prop_assert_eq!(p.eval(k, &g), direct);
    }
}
