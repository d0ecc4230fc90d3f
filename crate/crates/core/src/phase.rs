//! Commutative phase-space polynomials with the Poisson bracket, the s-ordered
//! star product and Moyal bracket, and the closed-form monomial brackets.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ordering::OrderParam;
use crate::scalar::{binomial, factorial, falling_factorial, int_scalar, GaussianRational, Scalar};
use crate::terms::{Exponents, Terms};

/// Which canonical coordinate a derivative or generator refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Q,
    P,
}

/// `sum c * prod_i q_i^{n_i} p_i^{m_i}` over `dof` degrees of freedom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasePoly {
    dof: usize,
    terms: Terms,
}

impl PhasePoly {
    pub fn zero(dof: usize) -> Self {
        assert!(dof > 0, "at least one degree of freedom is required");
        Self { dof, terms: Terms::new() }
    }

    pub fn one(dof: usize) -> Self {
        Self::constant(dof, Scalar::one())
    }

    pub fn constant(dof: usize, c: Scalar) -> Self {
        Self::monomial(Exponents::one(dof), c)
    }

    pub fn monomial(exps: Exponents, c: Scalar) -> Self {
        let dof = exps.dof();
        let mut p = Self::zero(dof);
        p.terms.add_term(exps, &c);
        p
    }

    /// `q^n p^m` for a single degree of freedom.
    pub fn qp(n: u32, m: u32) -> Self {
        Self::monomial(Exponents::new(vec![(n, m)]), Scalar::one())
    }

    /// The coordinate function `q_index` or `p_index`.
    pub fn var(dof: usize, var: Var, index: usize) -> Result<Self> {
        if index >= dof {
            return Err(Error::DofIndexOutOfRange { index, dof });
        }
        let (n, m) = match var {
            Var::Q => (1, 0),
            Var::P => (0, 1),
        };
        Ok(Self::monomial(Exponents::single(dof, index, n, m), Scalar::one()))
    }

    pub fn from_terms(dof: usize, terms: Terms) -> Self {
        assert!(terms.iter().all(|(e, _)| e.dof() == dof), "exponent length must equal dof");
        Self { dof, terms }
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, e: &Exponents) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.total_degree()).max()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { dof: self.dof, terms: self.terms.scale(c) }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self { dof: self.dof, terms: self.terms.map_coeffs(f) }
    }

    /// `true` when no term involves the given coordinate kind in any dof.
    pub fn is_free_of(&self, var: Var) -> bool {
        self.terms.iter().all(|(e, _)| {
            e.pairs().iter().all(|&(n, m)| match var {
                Var::Q => n == 0,
                Var::P => m == 0,
            })
        })
    }

    pub fn limit_hbar_zero(&self) -> Result<Self> {
        Ok(Self { dof: self.dof, terms: self.terms.try_map_coeffs(Scalar::limit_hbar_zero)? })
    }

    pub fn substitute(&self, s_value: Option<&GaussianRational>, hbar_value: Option<&BigRational>) -> Result<Self> {
        Ok(Self { dof: self.dof, terms: self.terms.try_map_coeffs(|c| c.substitute(s_value, hbar_value))? })
    }

    fn check_dof(&self, other: &PhasePoly) -> Result<()> {
        if self.dof != other.dof {
            return Err(Error::DofMismatch { left: self.dof, right: other.dof });
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dof {
            return Err(Error::DofIndexOutOfRange { index, dof: self.dof });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &PhasePoly) -> Result<PhasePoly> {
        self.check_dof(other)?;
        let mut out = Terms::new();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                out.add_term(ea.add(eb), &(ca * cb));
            }
        }
        Ok(Self { dof: self.dof, terms: out })
    }

    /// Partial derivative with respect to `q_index` or `p_index`.
    pub fn derivative(&self, var: Var, index: usize) -> Result<PhasePoly> {
        self.check_index(index)?;
        let mut out = Terms::new();
        for (e, c) in self.terms.iter() {
            let (n, m) = e.get(index);
            let (power, lowered) = match var {
                Var::Q if n > 0 => (n, (n - 1, m)),
                Var::P if m > 0 => (m, (n, m - 1)),
                _ => continue,
            };
            let mut e2 = e.clone();
            e2.set(index, lowered);
            out.add_term(e2, &c.scale(&GaussianRational::from_integer(power as i64)));
        }
        Ok(Self { dof: self.dof, terms: out })
    }

    /// `sum_i d_{p_i} f d_{q_i} g - d_{q_i} f d_{p_i} g`; note `{q, p} = -1`.
    pub fn poisson_bracket(&self, other: &PhasePoly) -> Result<PhasePoly> {
        self.check_dof(other)?;
        let mut out = PhasePoly::zero(self.dof);
        for i in 0..self.dof {
            let a = self.derivative(Var::P, i)?.checked_mul(&other.derivative(Var::Q, i)?)?;
            let b = self.derivative(Var::Q, i)?.checked_mul(&other.derivative(Var::P, i)?)?;
            out = &(&out + &a) - &b;
        }
        Ok(out)
    }

    /// `f exp{(i hbar / 2)[(1-s) dL_p dR_q - (1+s) dL_q dR_p]} g`, summed over
    /// degrees of freedom in the exponent.
    pub fn star_product(&self, other: &PhasePoly, order: &OrderParam) -> Result<PhasePoly> {
        self.check_dof(other)?;
        let weights = StarWeights::new(order);
        let mut out = Terms::new();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let coeff = ca * cb;
                let mut partial: Vec<(Scalar, Vec<(u32, u32)>)> = vec![(coeff, Vec::new())];
                for i in 0..self.dof {
                    let local = weights.monomial_contributions(ea.get(i), eb.get(i));
                    let mut next = Vec::with_capacity(partial.len() * local.len());
                    for (c, prefix) in &partial {
                        for (w, pair) in &local {
                            let mut v = prefix.clone();
                            v.push(*pair);
                            next.push((c * w, v));
                        }
                    }
                    partial = next;
                }
                for (c, pairs) in partial {
                    out.add_term(Exponents::new(pairs), &c);
                }
            }
        }
        Ok(Self { dof: self.dof, terms: out })
    }

    /// `f * g - g * f` with the star product at the same `s`.
    pub fn moyal_bracket(&self, other: &PhasePoly, order: &OrderParam) -> Result<PhasePoly> {
        let fg = self.star_product(other, order)?;
        let gf = other.star_product(self, order)?;
        Ok(&fg - &gf)
    }

    /// `lim_{hbar -> 0} (i hbar)^{-1} {f, g}_MB`.
    pub fn classical_limit_bracket(&self, other: &PhasePoly, order: &OrderParam) -> Result<PhasePoly> {
        let mb = self.moyal_bracket(other, order)?;
        mb.scale(&inv_i_hbar()).limit_hbar_zero()
    }
}

/// `(i hbar)^{-1} = -i hbar^{-1}`.
pub(crate) fn inv_i_hbar() -> Scalar {
    Scalar::monomial(-GaussianRational::i(), -1, 0)
}

/// Per-dof factors of the factorised star exponential
/// `exp(A) exp(-B)`, `A = (i hbar/2)(1-s) dL_p dR_q`, `B = (i hbar/2)(1+s) dL_q dR_p`.
struct StarWeights {
    half_i_hbar: Scalar,
    one_minus: Scalar,
    neg_one_plus: Scalar,
}

impl StarWeights {
    fn new(order: &OrderParam) -> Self {
        Self {
            half_i_hbar: Scalar::monomial(
                GaussianRational::new(BigRational::zero(), BigRational::new(1.into(), 2.into())),
                1,
                0,
            ),
            one_minus: order.one_minus(),
            neg_one_plus: -order.one_plus(),
        }
    }

    /// Terms of `q^n p^m * q^k p^l` in one dof; `a` counts `dL_p dR_q`
    /// applications, `b` counts `dL_q dR_p`.
    fn monomial_contributions(&self, (n, m): (u32, u32), (k, l): (u32, u32)) -> Vec<(Scalar, (u32, u32))> {
        let mut out = Vec::new();
        for a in 0..=m.min(k) {
            for b in 0..=n.min(l) {
                let derivs = falling_factorial(m, a)
                    * falling_factorial(k, a)
                    * falling_factorial(n, b)
                    * falling_factorial(l, b);
                let denom = factorial(a) * factorial(b);
                let w = Scalar::constant(GaussianRational::from_rational(BigRational::new(derivs, denom)));
                let w = &(&(&w * &self.half_i_hbar.pow(a + b)) * &self.one_minus.pow(a)) * &self.neg_one_plus.pow(b);
                if !w.is_zero() {
                    out.push((w, (n - b + k - a, m - a + l - b)));
                }
            }
        }
        out
    }
}

/// `{q^n p^m, q^k p^l}_PB = (mk - nl) q^{n+k-1} p^{m+l-1}` for one dof.
pub fn winf_pb_structure(n: u32, m: u32, k: u32, l: u32) -> PhasePoly {
    let c = (m as i64) * (k as i64) - (n as i64) * (l as i64);
    if c == 0 {
        return PhasePoly::zero(1);
    }
    // nonzero prefactor forces n + k >= 1 and m + l >= 1
    assert!(n + k >= 1 && m + l >= 1, "negative exponent with nonzero prefactor");
    PhasePoly::monomial(Exponents::new(vec![(n + k - 1, m + l - 1)]), Scalar::integer(c))
}

/// Closed-form `{q^n p^m, q^k p^l}_MB` as a double sum over `j` (the order in
/// `hbar`) and `r`, with `f_srj = (s-)^r (-s+)^{j-r} - (s-)^{j-r} (-s+)^r` and
/// `a_{nmkl,rj} = n! m! k! l! / ((n+r-j)! (m-r)! (k-r)! (l+r-j)!)`. Terms whose
/// factorials would take a negative argument vanish.
pub fn winf_mb_closed_form(n: u32, m: u32, k: u32, l: u32, order: &OrderParam) -> PhasePoly {
    let r_max = m.min(k);
    let j_max = (n + r_max).min(l + r_max);
    let s_minus = order.s_minus();
    let neg_s_plus = -order.s_plus();
    let numer = factorial(n) * factorial(m) * factorial(k) * factorial(l);
    let mut out = PhasePoly::zero(1);
    let mut i_pow = Scalar::one();
    for j in 0..=j_max {
        let mut inner = Scalar::zero();
        for r in 0..=r_max.min(j) {
            let a = match a_factor(&numer, n, m, k, l, r, j) {
                Some(a) => a,
                None => continue,
            };
            let f_srj = &(&s_minus.pow(r) * &neg_s_plus.pow(j - r)) - &(&s_minus.pow(j - r) * &neg_s_plus.pow(r));
            let weight = int_scalar(binomial(j, r) * a);
            inner += &(&weight * &f_srj);
        }
        if !inner.is_zero() {
            let prefactor =
                i_pow.scale(&GaussianRational::from_rational(BigRational::new(BigInt::one(), factorial(j))));
            let term = PhasePoly::monomial(Exponents::new(vec![(n + k - j, m + l - j)]), &prefactor * &inner);
            out = &out + &term;
        }
        i_pow = &i_pow * &Scalar::i();
    }
    out
}

fn a_factor(numer: &BigInt, n: u32, m: u32, k: u32, l: u32, r: u32, j: u32) -> Option<BigInt> {
    let nrj = (n + r).checked_sub(j)?;
    let lrj = (l + r).checked_sub(j)?;
    let mr = m.checked_sub(r)?;
    let kr = k.checked_sub(r)?;
    let denom = factorial(nrj) * factorial(mr) * factorial(kr) * factorial(lrj);
    Some(numer / denom)
}

impl Add<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;

    fn add(self, rhs: &PhasePoly) -> PhasePoly {
        assert_eq!(self.dof, rhs.dof, "dof mismatch");
        let mut terms = self.terms.clone();
        terms.add_assign(&rhs.terms);
        PhasePoly { dof: self.dof, terms }
    }
}

impl Sub<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;

    fn sub(self, rhs: &PhasePoly) -> PhasePoly {
        assert_eq!(self.dof, rhs.dof, "dof mismatch");
        let mut terms = self.terms.clone();
        terms.sub_assign(&rhs.terms);
        PhasePoly { dof: self.dof, terms }
    }
}

impl Mul<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;

    fn mul(self, rhs: &PhasePoly) -> PhasePoly {
        self.checked_mul(rhs).expect("dof mismatch")
    }
}

impl Neg for &PhasePoly {
    type Output = PhasePoly;

    fn neg(self) -> PhasePoly {
        self.scale(&Scalar::integer(-1))
    }
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::text_terms(&self.terms, self.dof, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> PhasePoly {
        PhasePoly::qp(1, 0)
    }

    fn p() -> PhasePoly {
        PhasePoly::qp(0, 1)
    }

    fn i_hbar(c: i64) -> Scalar {
        Scalar::monomial(GaussianRational::new(BigRational::zero(), BigRational::from_integer(c.into())), 1, 0)
    }

    #[test]
    fn derivatives() {
        let f = PhasePoly::qp(2, 1);
        assert_eq!(f.derivative(Var::Q, 0).unwrap(), PhasePoly::qp(1, 1).scale(&Scalar::integer(2)));
        assert!(PhasePoly::qp(2, 0).derivative(Var::P, 0).unwrap().is_zero());
        assert_eq!(PhasePoly::qp(5, 3).derivative(Var::Q, 0).unwrap(), PhasePoly::qp(4, 3).scale(&Scalar::integer(5)));
        assert!(matches!(f.derivative(Var::Q, 1), Err(Error::DofIndexOutOfRange { index: 1, dof: 1 })));
    }

    #[test]
    fn poisson_bracket_sign_convention() {
        assert_eq!(q().poisson_bracket(&p()).unwrap(), PhasePoly::constant(1, Scalar::integer(-1)));
        let r = PhasePoly::qp(1, 1).poisson_bracket(&PhasePoly::qp(2, 0)).unwrap();
        assert_eq!(r, PhasePoly::qp(2, 0).scale(&Scalar::integer(2)));
        let r = PhasePoly::qp(2, 1).poisson_bracket(&PhasePoly::qp(1, 2)).unwrap();
        assert_eq!(r, PhasePoly::qp(2, 2).scale(&Scalar::integer(-3)));
    }

    #[test]
    fn star_product_first_order() {
        let s = OrderParam::formal();
        let half_one_plus = &s.one_plus() * &Scalar::ratio(1, 2);
        let half_one_minus = &s.one_minus() * &Scalar::ratio(1, 2);
        let expect_qp = &PhasePoly::qp(1, 1) - &PhasePoly::constant(1, &i_hbar(1) * &half_one_plus);
        assert_eq!(q().star_product(&p(), &s).unwrap(), expect_qp);
        let expect_pq = &PhasePoly::qp(1, 1) + &PhasePoly::constant(1, &i_hbar(1) * &half_one_minus);
        assert_eq!(p().star_product(&q(), &s).unwrap(), expect_pq);
        let f = PhasePoly::qp(3, 2);
        assert_eq!(f.star_product(&PhasePoly::one(1), &s).unwrap(), f);
    }

    #[test]
    fn moyal_examples() {
        let s = OrderParam::formal();
        assert_eq!(q().moyal_bracket(&p(), &s).unwrap(), PhasePoly::constant(1, -i_hbar(1)));
        let f = PhasePoly::qp(2, 3);
        assert!(f.moyal_bracket(&f, &s).unwrap().is_zero());
        let r = PhasePoly::qp(2, 0).moyal_bracket(&PhasePoly::qp(0, 2), &s).unwrap();
        // the hbar^2 term survives away from s = 0; it is what makes the
        // bracket map onto minus the operator commutator
        let tail = Scalar::monomial(GaussianRational::from_integer(-2), 2, 1);
        assert_eq!(r, &PhasePoly::qp(1, 1).scale(&i_hbar(-4)) + &PhasePoly::constant(1, tail));
        let w = OrderParam::integer(0);
        let r = PhasePoly::qp(2, 0).moyal_bracket(&PhasePoly::qp(0, 2), &w).unwrap();
        assert_eq!(r, PhasePoly::qp(1, 1).scale(&i_hbar(-4)));
    }

    #[test]
    fn winf_examples() {
        assert_eq!(winf_pb_structure(1, 0, 0, 1), PhasePoly::constant(1, Scalar::integer(-1)));
        assert!(winf_pb_structure(1, 1, 1, 1).is_zero());
        assert_eq!(winf_pb_structure(0, 2, 1, 0), PhasePoly::qp(0, 1).scale(&Scalar::integer(2)));

        let s = OrderParam::formal();
        assert_eq!(winf_mb_closed_form(1, 0, 0, 1, &s), PhasePoly::constant(1, -i_hbar(1)));
        let qp = PhasePoly::qp(1, 1);
        assert_eq!(winf_mb_closed_form(1, 1, 1, 1, &s), qp.moyal_bracket(&qp, &s).unwrap());
        assert!(winf_mb_closed_form(0, 0, 3, 2, &s).is_zero());
    }

    #[test]
    fn classical_limit_examples() {
        let s = OrderParam::formal();
        assert_eq!(q().classical_limit_bracket(&p(), &s).unwrap(), PhasePoly::constant(1, Scalar::integer(-1)));
        let r = PhasePoly::qp(2, 0).classical_limit_bracket(&PhasePoly::qp(0, 2), &s).unwrap();
        assert_eq!(r, PhasePoly::qp(1, 1).scale(&Scalar::integer(-4)));
    }

    #[test]
    fn separate_dofs_do_not_interact() {
        let s = OrderParam::formal();
        let q1 = PhasePoly::var(2, Var::Q, 0).unwrap();
        let p2 = PhasePoly::var(2, Var::P, 1).unwrap();
        assert!(q1.moyal_bracket(&p2, &s).unwrap().is_zero());
        assert!(q1.poisson_bracket(&p2).unwrap().is_zero());
    }

    #[test]
    fn dof_mismatch_is_an_error() {
        let a = PhasePoly::one(1);
        let b = PhasePoly::one(2);
        assert!(matches!(a.poisson_bracket(&b), Err(Error::DofMismatch { left: 1, right: 2 })));
        assert!(a.star_product(&b, &OrderParam::formal()).is_err());
    }
}
