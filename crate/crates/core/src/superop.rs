//! Superoperators acting on operator polynomials: the two-sided
//! multiplications `T[A](s) = (1+s) L_A + (1-s) R_A`, the ordering
//! superoperators built from them, Liouvillians of phase-space polynomials,
//! the commutative diamond product, and the Poisson-Moyal bracket.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ordering::OrderParam;
use crate::phase::{inv_i_hbar, PhasePoly, Var};
use crate::scalar::{GaussianRational, Scalar};
use crate::terms::Exponents;
use crate::weyl::{Generator, OpPoly};
use crate::wwgm::{ms, ms_inverse};

/// `T[A](sigma) F = (1 + sigma) A F + (1 - sigma) F A`.
pub fn t_super_apply(g: Generator, sigma: &OrderParam, op: &OpPoly) -> OpPoly {
    let left = op.left_mul_generator(g).scale(&sigma.one_plus());
    let right = op.right_mul_generator(g).scale(&sigma.one_minus());
    &left + &right
}

fn pow2_inv(k: u32) -> GaussianRational {
    GaussianRational::from_rational(BigRational::new(BigInt::one(), BigInt::from(2u32).pow(k)))
}

/// `O(s)_{nm} F = 2^{-(n+m)} T[q](s)^n T[p](-s)^m F`, applied per dof.
pub fn ordering_super_apply(exps: &Exponents, order: &OrderParam, op: &OpPoly) -> OpPoly {
    let neg = order.negated();
    let mut acc = op.clone();
    for (i, &(n, m)) in exps.pairs().iter().enumerate() {
        for _ in 0..m {
            acc = t_super_apply(Generator::p(i), &neg, &acc);
        }
        for _ in 0..n {
            acc = t_super_apply(Generator::q(i), order, &acc);
        }
    }
    acc.scale(&Scalar::constant(pow2_inv(exps.total_degree())))
}

/// The superoperator `sum c_{nm} O(s)_{nm}` attached to `f = sum c_{nm} q^n p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Liouvillian {
    source: PhasePoly,
    order: OrderParam,
}

impl Liouvillian {
    pub fn new(source: PhasePoly, order: OrderParam) -> Self {
        Self { source, order }
    }

    pub fn source(&self) -> &PhasePoly {
        &self.source
    }

    pub fn order(&self) -> &OrderParam {
        &self.order
    }

    /// Applies every ordering superoperator of the source, sharing the
    /// partial `T` products between terms with a common exponent prefix.
    pub fn apply(&self, op: &OpPoly) -> Result<OpPoly> {
        if self.source.dof() != op.dof() {
            return Err(Error::DofMismatch { left: self.source.dof(), right: op.dof() });
        }
        let terms: Vec<(&Exponents, &Scalar)> = self.source.terms().iter().collect();
        let neg = self.order.negated();
        Ok(self.apply_from(op, &terms, 0, &neg))
    }

    fn apply_from(&self, op: &OpPoly, terms: &[(&Exponents, &Scalar)], dof: usize, neg: &OrderParam) -> OpPoly {
        if dof == op.dof() {
            let mut total = Scalar::zero();
            for (e, c) in terms {
                total += &c.scale(&pow2_inv(e.total_degree()));
            }
            return op.scale(&total);
        }
        let mut groups: BTreeMap<(u32, u32), Vec<(&Exponents, &Scalar)>> = BTreeMap::new();
        for &(e, c) in terms {
            groups.entry(e.get(dof)).or_default().push((e, c));
        }
        let max_m = groups.keys().map(|k| k.1).max().unwrap_or(0);
        let mut out = OpPoly::zero(op.dof());
        let mut p_side = op.clone();
        for m in 0..=max_m {
            let max_n = groups.keys().filter(|k| k.1 == m).map(|k| k.0).max();
            if let Some(max_n) = max_n {
                let mut q_side = p_side.clone();
                for n in 0..=max_n {
                    if let Some(group) = groups.get(&(n, m)) {
                        out = &out + &self.apply_from(&q_side, group, dof + 1, neg);
                    }
                    if n < max_n {
                        q_side = t_super_apply(Generator::q(dof), &self.order, &q_side);
                    }
                }
            }
            if m < max_m {
                p_side = t_super_apply(Generator::p(dof), neg, &p_side);
            }
        }
        out
    }

    /// `f o g` as maps equals the Liouvillian of the product `f g`.
    pub fn compose(&self, other: &Liouvillian, op: &OpPoly) -> Result<OpPoly> {
        self.apply(&other.apply(op)?)
    }
}

/// `ad_A F = [A, F]`.
pub fn ad_apply(g: Generator, op: &OpPoly) -> Result<OpPoly> {
    OpPoly::generator(op.dof(), g)?.commutator(op)
}

/// The commutative product: `F <> G = g(s)(F)` with `g = M_s^{-1}(G)`.
pub fn diamond(f_op: &OpPoly, g_op: &OpPoly, order: &OrderParam) -> Result<OpPoly> {
    if f_op.dof() != g_op.dof() {
        return Err(Error::DofMismatch { left: f_op.dof(), right: g_op.dof() });
    }
    let g = ms_inverse(g_op, order);
    Liouvillian::new(g, order.clone()).apply(f_op)
}

/// The four superoperator expressions of the Poisson-Moyal bracket. Writing
/// `h_x` for the Liouvillian of `d_x h`, summed over dofs:
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PmbForm {
    /// `-(i/hbar) [g_q(ad_q F) + g_p(ad_p F)]`
    GOnF,
    /// `-(i/hbar) [g_q(ad_q F) - f_q(ad_q G)]`
    QOnly,
    /// `(i/hbar) [f_p(ad_p G) - g_p(ad_p F)]`
    POnly,
    /// `(i/hbar) [f_q(ad_q G) + f_p(ad_p G)]`
    FOnG,
}

impl PmbForm {
    pub const ALL: [PmbForm; 4] = [PmbForm::GOnF, PmbForm::QOnly, PmbForm::POnly, PmbForm::FOnG];

    pub fn name(self) -> &'static str {
        match self {
            PmbForm::GOnF => "g-on-f",
            PmbForm::QOnly => "q-only",
            PmbForm::POnly => "p-only",
            PmbForm::FOnG => "f-on-g",
        }
    }
}

/// `[F, G]_PMB` computed from the operators; pulls both back through `M_s^{-1}`.
pub fn pmb(f_op: &OpPoly, g_op: &OpPoly, order: &OrderParam, form: PmbForm) -> Result<OpPoly> {
    if f_op.dof() != g_op.dof() {
        return Err(Error::DofMismatch { left: f_op.dof(), right: g_op.dof() });
    }
    let f = ms_inverse(f_op, order);
    let g = ms_inverse(g_op, order);
    pmb_parts(f_op, g_op, &f, &g, order, form)
}

/// `[M_s f, M_s g]_PMB` from the phase-space functions, skipping the inverse map.
pub fn pmb_functions(f: &PhasePoly, g: &PhasePoly, order: &OrderParam, form: PmbForm) -> Result<OpPoly> {
    if f.dof() != g.dof() {
        return Err(Error::DofMismatch { left: f.dof(), right: g.dof() });
    }
    pmb_parts(&ms(f, order), &ms(g, order), f, g, order, form)
}

fn pmb_parts(
    f_op: &OpPoly,
    g_op: &OpPoly,
    f: &PhasePoly,
    g: &PhasePoly,
    order: &OrderParam,
    form: PmbForm,
) -> Result<OpPoly> {
    let dof = f_op.dof();
    let lv = |h: &PhasePoly, var: Var, i: usize| -> Result<Liouvillian> {
        Ok(Liouvillian::new(h.derivative(var, i)?, order.clone()))
    };
    let mut sum = OpPoly::zero(dof);
    for i in 0..dof {
        let (q, p) = (Generator::q(i), Generator::p(i));
        let term = match form {
            PmbForm::GOnF => {
                let a = lv(g, Var::Q, i)?.apply(&ad_apply(q, f_op)?)?;
                let b = lv(g, Var::P, i)?.apply(&ad_apply(p, f_op)?)?;
                -&(&a + &b)
            }
            PmbForm::QOnly => {
                let a = lv(g, Var::Q, i)?.apply(&ad_apply(q, f_op)?)?;
                let b = lv(f, Var::Q, i)?.apply(&ad_apply(q, g_op)?)?;
                -&(&a - &b)
            }
            PmbForm::POnly => {
                let a = lv(f, Var::P, i)?.apply(&ad_apply(p, g_op)?)?;
                let b = lv(g, Var::P, i)?.apply(&ad_apply(p, f_op)?)?;
                &a - &b
            }
            PmbForm::FOnG => {
                let a = lv(f, Var::Q, i)?.apply(&ad_apply(q, g_op)?)?;
                let b = lv(f, Var::P, i)?.apply(&ad_apply(p, g_op)?)?;
                &a + &b
            }
        };
        sum = &sum + &term;
    }
    // i/hbar = -(i hbar)^{-1}
    sum.scale(&-inv_i_hbar()).assert_no_negative_hbar()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{t_monomial, TForm};

    fn ih(c: i64) -> Scalar {
        Scalar::monomial(GaussianRational::new(num_traits::Zero::zero(), BigRational::from_integer(c.into())), 1, 0)
    }

    fn t(n: u32, m: u32, s: &OrderParam) -> OpPoly {
        t_monomial(n, m, s, TForm::QForm)
    }

    #[test]
    fn t_super_examples() {
        let s = OrderParam::formal();
        let i1 = OpPoly::identity(1);
        assert_eq!(t_super_apply(Generator::q(0), &s, &i1), OpPoly::qp(1, 0).scale(&Scalar::integer(2)));
        let got = t_super_apply(Generator::q(0), &s, &OpPoly::qp(0, 1));
        let expect = &OpPoly::qp(1, 1).scale(&Scalar::integer(2)) - &OpPoly::constant(1, &ih(1) * &s.one_minus());
        assert_eq!(got, expect);
    }

    #[test]
    fn ordering_super_examples() {
        let s = OrderParam::formal();
        let i1 = OpPoly::identity(1);
        for (n, m) in [(0, 0), (1, 2), (3, 1)] {
            let e = Exponents::new(vec![(n, m)]);
            assert_eq!(ordering_super_apply(&e, &s, &i1), t(n, m, &s));
            let e11 = Exponents::new(vec![(1, 1)]);
            assert_eq!(ordering_super_apply(&e11, &s, &t(n, m, &s)), t(n + 1, m + 1, &s));
        }
        let f = &OpPoly::qp(2, 1) + &OpPoly::qp(0, 3);
        assert_eq!(ordering_super_apply(&Exponents::one(1), &s, &f), f);
    }

    #[test]
    fn liouvillian_examples() {
        let s = OrderParam::formal();
        let f = &OpPoly::qp(2, 1) + &OpPoly::qp(0, 3);
        assert_eq!(Liouvillian::new(PhasePoly::one(1), s.clone()).apply(&f).unwrap(), f);
        let l = Liouvillian::new(PhasePoly::qp(2, 3), s.clone());
        assert_eq!(l.apply(&OpPoly::identity(1)).unwrap(), t(2, 3, &s));
        let got = Liouvillian::new(PhasePoly::qp(1, 0), s.clone()).apply(&OpPoly::qp(0, 1)).unwrap();
        let half = Scalar::ratio(1, 2);
        assert_eq!(got, &OpPoly::qp(1, 1) - &OpPoly::constant(1, &(&ih(1) * &s.one_minus()) * &half));
    }

    #[test]
    fn ad_of_t_monomials() {
        let s = OrderParam::formal();
        let (n, m) = (2, 3);
        let tq = ad_apply(Generator::q(0), &t(n, m, &s)).unwrap();
        assert_eq!(tq, t(n, m - 1, &s).scale(&ih(m as i64)));
        let tp = ad_apply(Generator::p(0), &t(n, m, &s)).unwrap();
        assert_eq!(tp, t(n - 1, m, &s).scale(&ih(-(n as i64))));
        assert!(ad_apply(Generator::q(0), &OpPoly::qp(4, 0)).unwrap().is_zero());
    }

    #[test]
    fn diamond_examples() {
        let s = OrderParam::formal();
        assert_eq!(diamond(&t(1, 2, &s), &t(2, 1, &s), &s).unwrap(), t(3, 3, &s));
        let f = &OpPoly::qp(2, 1) + &OpPoly::qp(0, 3);
        assert_eq!(diamond(&f, &OpPoly::identity(1), &s).unwrap(), f);
        let w = OrderParam::integer(0);
        let d = diamond(&OpPoly::qp(1, 0), &OpPoly::qp(0, 1), &w).unwrap();
        assert_eq!(d, t(1, 1, &w));
        assert_ne!(d, OpPoly::qp(1, 1));
    }

    #[test]
    fn pmb_examples() {
        let s = OrderParam::formal();
        for form in PmbForm::ALL {
            let r = pmb(&OpPoly::qp(1, 0), &OpPoly::qp(0, 1), &s, form).unwrap();
            assert_eq!(r, OpPoly::constant(1, Scalar::integer(-1)), "{form:?}");
            let f = &OpPoly::qp(2, 1) + &OpPoly::qp(1, 3);
            assert!(pmb(&f, &f, &s, form).unwrap().is_zero());
            let r = pmb(&t(2, 1, &s), &t(1, 3, &s), &s, form).unwrap();
            // (mk - nl) = 1*1 - 2*3
            assert_eq!(r, t(2, 3, &s).scale(&Scalar::integer(-5)));
        }
    }
}
