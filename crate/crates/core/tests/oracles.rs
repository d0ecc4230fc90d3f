//! Independent oracles: closed forms and derivative expansions that do not
//! share code paths with the engine's normal-ordering and star routines.

use num_bigint::BigInt;
use num_rational::BigRational;
use weylforge::phase::Var;
use weylforge::scalar::{binomial, factorial};
use weylforge::weyl::{t_monomial, Generator, TForm};
use weylforge::wwgm::{ms, ms_inverse};
use weylforge::{Exponents, GaussianRational, OpPoly, OrderParam, PhasePoly, Scalar};

fn int(n: BigInt) -> Scalar {
    Scalar::constant(GaussianRational::from_rational(BigRational::from_integer(n)))
}

fn minus_i_hbar() -> Scalar {
    Scalar::monomial(-GaussianRational::i(), 1, 0)
}

fn power(g: Generator, k: u32) -> OpPoly {
    let x = OpPoly::generator(1, g).unwrap();
    (0..k).fold(OpPoly::identity(1), |acc, _| &acc * &x)
}

#[test]
fn reordering_closed_form() {
    // p^b q^a = sum_k k! C(b,k) C(a,k) (-i hbar)^k q^(a-k) p^(b-k)
    for a in 0..=6u32 {
        for b in 0..=6u32 {
            let lhs = &power(Generator::p(0), b) * &power(Generator::q(0), a);
            let mut rhs = OpPoly::zero(1);
            for k in 0..=a.min(b) {
                let c = &int(factorial(k) * binomial(b, k) * binomial(a, k)) * &minus_i_hbar().pow(k);
                rhs = &rhs + &OpPoly::monomial(Exponents::new(vec![(a - k, b - k)]), c);
            }
            assert_eq!(lhs, rhs, "p^{b} q^{a}");
        }
    }
}

fn nth_derivative(f: &PhasePoly, var: Var, k: u32) -> PhasePoly {
    (0..k).fold(f.clone(), |g, _| g.derivative(var, 0).unwrap())
}

/// sum over r, t of a^r b^t / (r! t!) (d_p^r d_q^t f)(d_q^r d_p^t g) with
/// a = i hbar (1 - s)/2 and b = -i hbar (1 + s)/2.
fn star_by_derivatives(f: &PhasePoly, g: &PhasePoly, order: &OrderParam) -> PhasePoly {
    let half_i_hbar = Scalar::monomial(
        GaussianRational::new(BigRational::from_integer(0.into()), BigRational::new(1.into(), 2.into())),
        1,
        0,
    );
    let a = &half_i_hbar * &order.one_minus();
    let b = -&(&half_i_hbar * &order.one_plus());
    let mut out = PhasePoly::zero(1);
    for r in 0..=8u32 {
        for t in 0..=8u32 {
            let left = nth_derivative(&nth_derivative(f, Var::P, r), Var::Q, t);
            let right = nth_derivative(&nth_derivative(g, Var::Q, r), Var::P, t);
            if left.is_zero() || right.is_zero() {
                continue;
            }
            let bang = int(factorial(r) * factorial(t)).inv_monomial().unwrap();
            let w = &(&a.pow(r) * &b.pow(t)) * &bang;
            out = &out + &(&left * &right).scale(&w);
        }
    }
    out
}

fn sample_polys() -> Vec<PhasePoly> {
    let c = |n: i64, d: i64| Scalar::ratio(n, d);
    let mono = |n, m, s: Scalar| PhasePoly::monomial(Exponents::new(vec![(n, m)]), s);
    vec![
        PhasePoly::qp(1, 0),
        PhasePoly::qp(0, 3),
        &mono(2, 1, c(3, 2)) + &mono(0, 2, Scalar::s()),
        &mono(3, 3, Scalar::i()) + &mono(1, 0, c(-1, 1)),
        &mono(4, 0, c(1, 1)) + &mono(0, 4, c(-2, 3)),
        &mono(2, 2, Scalar::hbar()) + &PhasePoly::one(1),
    ]
}

#[test]
fn star_matches_derivative_expansion() {
    for order in [OrderParam::formal(), OrderParam::integer(0), OrderParam::integer(1), OrderParam::integer(-1)] {
        for f in sample_polys() {
            for g in sample_polys() {
                assert_eq!(f.star_product(&g, &order).unwrap(), star_by_derivatives(&f, &g, &order));
            }
        }
    }
}

#[test]
fn basic_star_and_brackets() {
    let s = OrderParam::formal();
    let (q, p) = (PhasePoly::qp(1, 0), PhasePoly::qp(0, 1));
    // q * p = qp - i hbar (1 + s)/2
    let shift = Scalar::monomial(
        GaussianRational::new(BigRational::from_integer(0.into()), BigRational::new((-1).into(), 2.into())),
        1,
        0,
    );
    let expected = &PhasePoly::qp(1, 1) + &PhasePoly::constant(1, &shift * &s.one_plus());
    assert_eq!(q.star_product(&p, &s).unwrap(), expected);
    assert_eq!(q.moyal_bracket(&p, &s).unwrap(), PhasePoly::constant(1, minus_i_hbar()));
    assert_eq!(q.poisson_bracket(&p).unwrap(), PhasePoly::constant(1, Scalar::integer(-1)));
}

#[test]
fn t_monomials_match_known_forms() {
    let s = OrderParam::formal();
    // t_11 = qh ph - i hbar (1 - s)/2
    let half = Scalar::monomial(
        GaussianRational::new(BigRational::from_integer(0.into()), BigRational::new((-1).into(), 2.into())),
        1,
        0,
    );
    let expected = &OpPoly::qp(1, 1) + &OpPoly::constant(1, &half * &s.one_minus());
    assert_eq!(t_monomial(1, 1, &s, TForm::QForm), expected);
    assert_eq!(t_monomial(1, 1, &s, TForm::PForm), expected);
    // s = 1 is standard order, s = -1 antistandard
    assert_eq!(t_monomial(2, 3, &OrderParam::integer(1), TForm::QForm), OpPoly::qp(2, 3));
    let anti = &power(Generator::p(0), 3) * &power(Generator::q(0), 2);
    assert_eq!(t_monomial(2, 3, &OrderParam::integer(-1), TForm::QForm), anti);
    for n in 0..=4 {
        for m in 0..=4 {
            let f = PhasePoly::qp(n, m);
            assert_eq!(ms(&f, &s), t_monomial(n, m, &s, TForm::QForm));
            assert_eq!(ms_inverse(&ms(&f, &s), &s), f);
        }
    }
}

#[test]
fn weyl_order_is_the_symmetric_average() {
    // at s = 0, t_21 = (q q p + q p q + p q q)/3
    let (q, p) = (power(Generator::q(0), 1), power(Generator::p(0), 1));
    let sum = &(&(&(&q * &q) * &p) + &(&(&q * &p) * &q)) + &(&(&p * &q) * &q);
    assert_eq!(t_monomial(2, 1, &OrderParam::integer(0), TForm::QForm), sum.scale(&Scalar::ratio(1, 3)));
}
