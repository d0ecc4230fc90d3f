//! The s-ordered association `M_s: q^n p^m -> t(s)_{nm}` between
//! phase-space and operator polynomials, and the identities that relate
//! brackets on both sides.

use crate::error::Result;
use crate::ordering::OrderParam;
use crate::phase::{inv_i_hbar, PhasePoly, Var};
use crate::superop::ad_apply;
use crate::weyl::{from_t_basis, Generator, OpPoly};

/// `M_s(f)`: replace each `q^n p^m` by `t(s)_{nm}`.
pub fn ms(f: &PhasePoly, order: &OrderParam) -> OpPoly {
    from_t_basis(f.dof(), f.terms(), order)
}

/// `M_s^{-1}(F)`: expand in the `t(s)` basis and read the coefficients.
pub fn ms_inverse(op: &OpPoly, order: &OrderParam) -> PhasePoly {
    PhasePoly::from_terms(op.dof(), op.to_t_basis(order))
}

/// `M_s(d_p f) = -(i/hbar) ad_q F` and `M_s(d_q f) = (i/hbar) ad_p F`.
pub fn derivative_image(f: &PhasePoly, var: Var, index: usize, order: &OrderParam) -> Result<OpPoly> {
    let op = ms(f, order);
    let image = match var {
        // -(i/hbar) = (i hbar)^{-1}
        Var::P => ad_apply(Generator::q(index), &op)?.scale(&inv_i_hbar()),
        Var::Q => ad_apply(Generator::p(index), &op)?.scale(&-inv_i_hbar()),
    };
    image.assert_no_negative_hbar()
}

/// Both sides of `M_s({f, g}_MB) = -[M_s f, M_s g]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntihomWitness {
    pub holds: bool,
    pub image_of_bracket: OpPoly,
    pub negated_commutator: OpPoly,
}

pub fn antihom_check(f: &PhasePoly, g: &PhasePoly, order: &OrderParam) -> Result<AntihomWitness> {
    let lhs = ms(&f.moyal_bracket(g, order)?, order);
    let rhs = -&ms(f, order).commutator(&ms(g, order))?;
    Ok(AntihomWitness { holds: lhs == rhs, image_of_bracket: lhs, negated_commutator: rhs })
}

/// `lim_{hbar -> 0} -(i hbar)^{-1} M_s^{-1}([F, G])`.
pub fn commutator_classical_limit(f_op: &OpPoly, g_op: &OpPoly, order: &OrderParam) -> Result<PhasePoly> {
    let comm = f_op.commutator(g_op)?;
    ms_inverse(&comm, order).scale(&-inv_i_hbar()).limit_hbar_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational, Scalar};
    use crate::weyl::{t_monomial, TForm};
    use num_rational::BigRational;
    use num_traits::Zero;

    fn ih(c: i64) -> Scalar {
        Scalar::monomial(GaussianRational::new(BigRational::zero(), BigRational::from_integer(c.into())), 1, 0)
    }

    #[test]
    fn ms_examples() {
        let s = OrderParam::formal();
        assert_eq!(ms(&PhasePoly::qp(2, 3), &s), t_monomial(2, 3, &s, TForm::QForm));
        let w = OrderParam::integer(0);
        let half_ih = &ih(1) * &Scalar::ratio(1, 2);
        assert_eq!(ms(&PhasePoly::qp(1, 1), &w), &OpPoly::qp(1, 1) - &OpPoly::constant(1, half_ih.clone()));
        assert_eq!(ms(&PhasePoly::one(1), &s), OpPoly::identity(1));
    }

    #[test]
    fn ms_inverse_examples() {
        let s = OrderParam::formal();
        assert_eq!(ms_inverse(&t_monomial(3, 1, &s, TForm::QForm), &s), PhasePoly::qp(3, 1));
        let w = OrderParam::integer(0);
        let half_ih = &ih(1) * &Scalar::ratio(1, 2);
        let expect = &PhasePoly::qp(1, 1) + &PhasePoly::constant(1, half_ih);
        assert_eq!(ms_inverse(&OpPoly::qp(1, 1), &w), expect);
    }

    #[test]
    fn derivative_image_examples() {
        let s = OrderParam::formal();
        assert_eq!(derivative_image(&PhasePoly::qp(1, 1), Var::P, 0, &s).unwrap(), OpPoly::qp(1, 0));
        assert!(derivative_image(&PhasePoly::qp(2, 0), Var::P, 0, &s).unwrap().is_zero());
        let got = derivative_image(&PhasePoly::qp(3, 2), Var::Q, 0, &s).unwrap();
        assert_eq!(got, t_monomial(2, 2, &s, TForm::QForm).scale(&Scalar::integer(3)));
    }

    #[test]
    fn antihom_examples() {
        let s = OrderParam::formal();
        let w = antihom_check(&PhasePoly::qp(1, 0), &PhasePoly::qp(0, 1), &s).unwrap();
        assert!(w.holds);
        assert_eq!(w.image_of_bracket, OpPoly::constant(1, -ih(1)));
        let f = PhasePoly::qp(2, 2);
        let w = antihom_check(&f, &f, &s).unwrap();
        assert!(w.holds && w.image_of_bracket.is_zero());
    }

    #[test]
    fn commutator_limit_examples() {
        let s = OrderParam::formal();
        let r = commutator_classical_limit(&OpPoly::qp(1, 0), &OpPoly::qp(0, 1), &s).unwrap();
        assert_eq!(r, PhasePoly::constant(1, Scalar::integer(-1)));
        let (n, m, k, l) = (2, 1, 1, 3);
        let r =
            commutator_classical_limit(&t_monomial(n, m, &s, TForm::QForm), &t_monomial(k, l, &s, TForm::QForm), &s)
                .unwrap();
        assert_eq!(r, crate::phase::winf_pb_structure(n, m, k, l));
        let f = OpPoly::qp(2, 2);
        assert!(commutator_classical_limit(&f, &f, &s).unwrap().is_zero());
    }
}
