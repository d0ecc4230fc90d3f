//! Polynomial operators in the Heisenberg-Weyl algebra `[q, p] = i hbar`,
//! kept in standard normal form (every `q_i` left of `p_i`), together with the
//! s-ordered monomials `t(s)_{nm}` and the change of basis onto them.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ordering::OrderParam;
use crate::phase::Var;
use crate::scalar::{binomial, int_scalar, GaussianRational, SRule, Scalar};
use crate::terms::{Exponents, Terms};

/// A single generator `q_index` or `p_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub var: Var,
    pub index: usize,
}

impl Generator {
    pub fn q(index: usize) -> Self {
        Self { var: Var::Q, index }
    }

    pub fn p(index: usize) -> Self {
        Self { var: Var::P, index }
    }
}

/// An arbitrary (not yet ordered) product of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpWord {
    dof: usize,
    letters: Vec<Generator>,
}

impl OpWord {
    pub fn new(dof: usize, letters: Vec<Generator>) -> Result<Self> {
        if let Some(g) = letters.iter().find(|g| g.index >= dof) {
            return Err(Error::DofIndexOutOfRange { index: g.index, dof });
        }
        Ok(Self { dof, letters })
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    /// `q^n p^m ...` built from a repeated-letter description, single dof.
    pub fn from_powers(powers: &[(Var, u32)]) -> Self {
        let letters =
            powers.iter().flat_map(|&(var, k)| std::iter::repeat_n(Generator { var, index: 0 }, k as usize)).collect();
        Self { dof: 1, letters }
    }

    pub fn reversed(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.reverse();
        Self { dof: self.dof, letters }
    }
}

/// Which of the two equivalent binomial expansions builds `t(s)_{nm}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TForm {
    /// `2^-n sum_j C(n,j) (1+s)^j (1-s)^{n-j} q^j p^m q^{n-j}`
    #[default]
    QForm,
    /// `2^-m sum_k C(m,k) (1-s)^k (1+s)^{m-k} p^k q^n p^{m-k}`
    PForm,
}

/// Operator polynomial in normal form: keys are `prod_i q_i^{n_i} p_i^{m_i}`
/// with `q_i` to the left of `p_i`. Generators of different dofs commute.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpPoly {
    dof: usize,
    terms: Terms,
}

type ReorderCache = HashMap<(u32, u32), Arc<Vec<BigInt>>>;

/// Coefficients `c_k` with `p^b q^a = sum_k c_k (-i hbar)^k q^{a-k} p^{b-k}`,
/// built by repeatedly rewriting `p q -> q p - i hbar`:
/// `p^b q^a = p^{b-1} (q^a p - i hbar a q^{a-1})`.
fn reorder_table(b: u32, a: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<RwLock<ReorderCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.read().unwrap().get(&(b, a)) {
        return hit.clone();
    }
    let table = if b == 0 || a == 0 {
        vec![BigInt::one()]
    } else {
        let upper = reorder_table(b - 1, a);
        let lower = reorder_table(b - 1, a - 1);
        let len = a.min(b) as usize + 1;
        let mut c = vec![BigInt::zero(); len];
        for (k, v) in upper.iter().enumerate() {
            c[k] += v;
        }
        for (k, v) in lower.iter().enumerate() {
            c[k + 1] += v * BigInt::from(a);
        }
        c
    };
    let table = Arc::new(table);
    cache.write().unwrap().insert((b, a), table.clone());
    table
}

fn minus_i_hbar_pow(k: u32) -> Scalar {
    // (-i)^k cycles 1, -i, -1, i
    let c = match k % 4 {
        0 => GaussianRational::one(),
        1 => -GaussianRational::i(),
        2 => -GaussianRational::one(),
        _ => GaussianRational::i(),
    };
    Scalar::monomial(c, k as i32, 0)
}

impl OpPoly {
    pub fn zero(dof: usize) -> Self {
        assert!(dof > 0, "at least one degree of freedom is required");
        Self { dof, terms: Terms::new() }
    }

    pub fn identity(dof: usize) -> Self {
        Self::constant(dof, Scalar::one())
    }

    pub fn constant(dof: usize, c: Scalar) -> Self {
        Self::monomial(Exponents::one(dof), c)
    }

    /// Normal-ordered monomial `c * prod_i q_i^{n_i} p_i^{m_i}`.
    pub fn monomial(exps: Exponents, c: Scalar) -> Self {
        let mut out = Self::zero(exps.dof());
        out.terms.add_term(exps, &c);
        out
    }

    /// `q^n p^m` for one dof.
    pub fn qp(n: u32, m: u32) -> Self {
        Self::monomial(Exponents::new(vec![(n, m)]), Scalar::one())
    }

    pub fn generator(dof: usize, g: Generator) -> Result<Self> {
        if g.index >= dof {
            return Err(Error::DofIndexOutOfRange { index: g.index, dof });
        }
        let (n, m) = match g.var {
            Var::Q => (1, 0),
            Var::P => (0, 1),
        };
        Ok(Self::monomial(Exponents::single(dof, g.index, n, m), Scalar::one()))
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

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { dof: self.dof, terms: self.terms.scale(c) }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self { dof: self.dof, terms: self.terms.map_coeffs(f) }
    }

    pub fn min_hbar_power(&self) -> Option<i32> {
        self.terms.min_hbar_power()
    }

    /// Fails with [`Error::NegativeHbarPower`] if any `1/hbar` survives.
    pub fn assert_no_negative_hbar(self) -> Result<Self> {
        match self.min_hbar_power() {
            Some(k) if k < 0 => Err(Error::NegativeHbarPower(k)),
            _ => Ok(self),
        }
    }

    pub fn substitute(&self, s_value: Option<&GaussianRational>, hbar_value: Option<&BigRational>) -> Result<Self> {
        Ok(Self { dof: self.dof, terms: self.terms.try_map_coeffs(|c| c.substitute(s_value, hbar_value))? })
    }

    fn check_dof(&self, other: &OpPoly) -> Result<()> {
        if self.dof != other.dof {
            return Err(Error::DofMismatch { left: self.dof, right: other.dof });
        }
        Ok(())
    }

    /// Right multiplication by one generator, rewriting `p^b q = (p^{b-1} q) p - i hbar p^{b-1}`.
    pub fn right_mul_generator(&self, g: Generator) -> OpPoly {
        let i = g.index;
        let mut out = Terms::new();
        for (e, c) in self.terms.iter() {
            let (a, b) = e.get(i);
            match g.var {
                Var::P => {
                    let mut e2 = e.clone();
                    e2.set(i, (a, b + 1));
                    out.add_term(e2, c);
                }
                Var::Q => {
                    for (coef, (qa, pb)) in push_q_through(b) {
                        let mut e2 = e.clone();
                        e2.set(i, (a + qa, pb));
                        out.add_term(e2, &(c * &coef));
                    }
                }
            }
        }
        Self { dof: self.dof, terms: out }
    }

    /// Left multiplication by one generator.
    pub fn left_mul_generator(&self, g: Generator) -> OpPoly {
        let i = g.index;
        let mut out = Terms::new();
        for (e, c) in self.terms.iter() {
            let (a, b) = e.get(i);
            match g.var {
                Var::Q => {
                    let mut e2 = e.clone();
                    e2.set(i, (a + 1, b));
                    out.add_term(e2, c);
                }
                Var::P => {
                    let table = reorder_table(1, a);
                    for (k, coef) in table.iter().enumerate() {
                        let k = k as u32;
                        let mut e2 = e.clone();
                        e2.set(i, (a - k, b + 1 - k));
                        out.add_term(e2, &(c * &(&int_scalar(coef.clone()) * &minus_i_hbar_pow(k))));
                    }
                }
            }
        }
        Self { dof: self.dof, terms: out }
    }

    /// Bilinear product, reordering each `p_i^b q_i^a` block in the middle.
    pub fn checked_mul(&self, other: &OpPoly) -> Result<OpPoly> {
        self.check_dof(other)?;
        let mut out = Terms::new();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let mut partial: Vec<(Scalar, Vec<(u32, u32)>)> = vec![(ca * cb, Vec::with_capacity(self.dof))];
                for i in 0..self.dof {
                    let (a1, b1) = ea.get(i);
                    let (a2, b2) = eb.get(i);
                    let table = reorder_table(b1, a2);
                    let mut next = Vec::with_capacity(partial.len() * table.len());
                    for (c, prefix) in &partial {
                        for (k, coef) in table.iter().enumerate() {
                            let k = k as u32;
                            let w = &int_scalar(coef.clone()) * &minus_i_hbar_pow(k);
                            let mut v = prefix.clone();
                            v.push((a1 + a2 - k, b1 + b2 - k));
                            next.push((c * &w, v));
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

    /// `[F, G] = FG - GF`.
    pub fn commutator(&self, other: &OpPoly) -> Result<OpPoly> {
        Ok(&self.checked_mul(other)? - &other.checked_mul(self)?)
    }

    /// Hermitian adjoint: reverse every word, conjugate every coefficient.
    pub fn dagger(&self, rule: SRule) -> OpPoly {
        let mut out = OpPoly::zero(self.dof);
        for (e, c) in self.terms.iter() {
            let word = monomial_word(e).reversed();
            out = &out + &normalize(&word, &c.conjugate(rule));
        }
        out
    }

    /// Coefficients `e_{nm}` with `F = sum e_{nm} t(s)_{nm}`. Each `t(s)_{nm}` is
    /// `q^n p^m` plus strictly lower total degree, so peeling off the leading
    /// term terminates.
    pub fn to_t_basis(&self, order: &OrderParam) -> Terms {
        let mut rest = self.terms.clone();
        let mut out = Terms::new();
        while let Some((e, c)) = rest.leading() {
            let e = e.clone();
            let c = c.clone();
            let t = t_monomial_exps(&e, order, TForm::QForm);
            rest.add_scaled(&t.terms, &-&c);
            debug_assert!(rest.get(&e).is_none());
            out.add_term(e, &c);
        }
        out
    }
}

/// Normal form of `p^b q`: `q p^b - i hbar b p^{b-1}`, one rewrite at a time.
fn push_q_through(b: u32) -> Vec<(Scalar, (u32, u32))> {
    if b == 0 {
        return vec![(Scalar::one(), (1, 0))];
    }
    // p^b q = (p^{b-1} q) p - i hbar p^{b-1}
    let mut out: Vec<(Scalar, (u32, u32))> =
        push_q_through(b - 1).into_iter().map(|(c, (qa, pb))| (c, (qa, pb + 1))).collect();
    let correction = minus_i_hbar_pow(1);
    match out.iter_mut().find(|(_, pair)| *pair == (0, b - 1)) {
        Some((c, _)) => *c += &correction,
        None => out.push((correction, (0, b - 1))),
    }
    out
}

/// The normal-ordered letter sequence of a basis monomial.
fn monomial_word(e: &Exponents) -> OpWord {
    let mut letters = Vec::new();
    for (i, &(n, m)) in e.pairs().iter().enumerate() {
        letters.extend(std::iter::repeat_n(Generator::q(i), n as usize));
        letters.extend(std::iter::repeat_n(Generator::p(i), m as usize));
    }
    OpWord { dof: e.dof(), letters }
}

/// Bring `coeff * word` to normal form, multiplying in one letter at a time.
pub fn normalize(word: &OpWord, coeff: &Scalar) -> OpPoly {
    let mut acc = OpPoly::constant(word.dof, coeff.clone());
    for &g in &word.letters {
        acc = acc.right_mul_generator(g);
    }
    acc
}

type TCache = RwLock<HashMap<(OrderParam, u32, u32, TForm), Arc<Terms>>>;

/// Single-dof `t(s)_{nm}` as a coefficient map over `(n', m')`.
fn t_single(n: u32, m: u32, order: &OrderParam, form: TForm) -> Arc<Terms> {
    static CACHE: OnceLock<TCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (order.clone(), n, m, form);
    if let Some(hit) = cache.read().unwrap().get(&key) {
        return hit.clone();
    }
    let terms = if order.is_formal() {
        build_t_single(n, m, order, form)
    } else {
        t_single(n, m, &OrderParam::formal(), form).map_coeffs(|c| order.specialize(c))
    };
    let terms = Arc::new(terms);
    cache.write().unwrap().insert(key, terms.clone());
    terms
}

fn build_t_single(n: u32, m: u32, order: &OrderParam, form: TForm) -> Terms {
    let plus = order.one_plus();
    let minus = order.one_minus();
    let (outer, first, second, outer_var, inner_var, inner_pow) = match form {
        TForm::QForm => (n, &plus, &minus, Var::Q, Var::P, m),
        TForm::PForm => (m, &minus, &plus, Var::P, Var::Q, n),
    };
    let norm = Scalar::constant(GaussianRational::from_rational(BigRational::new(
        BigInt::one(),
        BigInt::from(2u32).pow(outer),
    )));
    let mut acc = OpPoly::zero(1);
    for j in 0..=outer {
        let weight = &(&int_scalar(binomial(outer, j)) * &first.pow(j)) * &second.pow(outer - j);
        let word = OpWord::from_powers(&[(outer_var, j), (inner_var, inner_pow), (outer_var, outer - j)]);
        acc = &acc + &normalize(&word, &weight);
    }
    acc.scale(&norm).terms
}

/// `t(s)_{nm}` for one dof.
pub fn t_monomial(n: u32, m: u32, order: &OrderParam, form: TForm) -> OpPoly {
    OpPoly::from_terms(1, (*t_single(n, m, order, form)).clone())
}

/// Multi-dof `t(s)`: the product over dofs of the single-dof monomials.
pub fn t_monomial_exps(exps: &Exponents, order: &OrderParam, form: TForm) -> OpPoly {
    let mut partial: Vec<(Scalar, Vec<(u32, u32)>)> = vec![(Scalar::one(), Vec::with_capacity(exps.dof()))];
    for &(n, m) in exps.pairs() {
        let single = t_single(n, m, order, form);
        let mut next = Vec::with_capacity(partial.len() * single.len());
        for (c, prefix) in &partial {
            for (e, w) in single.iter() {
                let mut v = prefix.clone();
                v.push(e.get(0));
                next.push((c * w, v));
            }
        }
        partial = next;
    }
    let terms = partial.into_iter().map(|(c, v)| (Exponents::new(v), c)).collect();
    OpPoly::from_terms(exps.dof(), terms)
}

/// Rebuild `sum e_{nm} t(s)_{nm}` from t-basis coefficients.
pub fn from_t_basis(dof: usize, coeffs: &Terms, order: &OrderParam) -> OpPoly {
    let mut out = Terms::new();
    for (e, c) in coeffs.iter() {
        out.add_scaled(&t_monomial_exps(e, order, TForm::QForm).terms, c);
    }
    OpPoly::from_terms(dof, out)
}

impl Add<&OpPoly> for &OpPoly {
    type Output = OpPoly;

    fn add(self, rhs: &OpPoly) -> OpPoly {
        assert_eq!(self.dof, rhs.dof, "dof mismatch");
        let mut terms = self.terms.clone();
        terms.add_assign(&rhs.terms);
        OpPoly { dof: self.dof, terms }
    }
}

impl Sub<&OpPoly> for &OpPoly {
    type Output = OpPoly;

    fn sub(self, rhs: &OpPoly) -> OpPoly {
        assert_eq!(self.dof, rhs.dof, "dof mismatch");
        let mut terms = self.terms.clone();
        terms.sub_assign(&rhs.terms);
        OpPoly { dof: self.dof, terms }
    }
}

impl Mul<&OpPoly> for &OpPoly {
    type Output = OpPoly;

    fn mul(self, rhs: &OpPoly) -> OpPoly {
        self.checked_mul(rhs).expect("dof mismatch")
    }
}

impl Neg for &OpPoly {
    type Output = OpPoly;

    fn neg(self) -> OpPoly {
        self.scale(&Scalar::integer(-1))
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::text_terms(&self.terms, self.dof, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ih(c: i64) -> Scalar {
        Scalar::monomial(GaussianRational::new(BigRational::zero(), BigRational::from_integer(c.into())), 1, 0)
    }

    fn q() -> OpPoly {
        OpPoly::qp(1, 0)
    }

    fn p() -> OpPoly {
        OpPoly::qp(0, 1)
    }

    fn word(powers: &[(Var, u32)]) -> OpPoly {
        normalize(&OpWord::from_powers(powers), &Scalar::one())
    }

    #[test]
    fn normalize_examples() {
        let pq = word(&[(Var::P, 1), (Var::Q, 1)]);
        assert_eq!(pq, &OpPoly::qp(1, 1) - &OpPoly::constant(1, ih(1)));
        let ppq = word(&[(Var::P, 2), (Var::Q, 1)]);
        assert_eq!(ppq, &OpPoly::qp(1, 2) - &OpPoly::qp(0, 1).scale(&ih(2)));
        assert_eq!(word(&[(Var::Q, 1), (Var::P, 1)]), OpPoly::qp(1, 1));
    }

    #[test]
    fn products_and_commutators() {
        assert_eq!(&q() * &p(), OpPoly::qp(1, 1));
        assert_eq!(&p() * &q(), &OpPoly::qp(1, 1) - &OpPoly::constant(1, ih(1)));
        assert_eq!(q().commutator(&p()).unwrap(), OpPoly::constant(1, ih(1)));
        let f = &OpPoly::qp(2, 1) + &p();
        assert!(f.commutator(&f).unwrap().is_zero());
        assert!(q().commutator(&OpPoly::qp(4, 0)).unwrap().is_zero());
    }

    #[test]
    fn weyl_t11_squared() {
        let w = OrderParam::integer(0);
        let t11 = t_monomial(1, 1, &w, TForm::QForm);
        let half_ih = &ih(1) * &Scalar::ratio(1, 2);
        assert_eq!(t11, &OpPoly::qp(1, 1) - &OpPoly::constant(1, half_ih.clone()));
        let expect = &(&OpPoly::qp(2, 2) - &OpPoly::qp(1, 1).scale(&ih(2)))
            - &OpPoly::constant(1, Scalar::hbar().pow(2).scale(&GaussianRational::from_ratio(1, 4)));
        assert_eq!(&t11 * &t11, expect);
    }

    #[test]
    fn dagger_examples() {
        let d = OpPoly::qp(1, 1).dagger(SRule::FixS);
        assert_eq!(d, &OpPoly::qp(1, 1) - &OpPoly::constant(1, ih(1)));
        let s = OrderParam::formal();
        for (n, m) in [(1, 1), (2, 1), (1, 3)] {
            let t = t_monomial(n, m, &s, TForm::QForm);
            assert_eq!(t.dagger(SRule::FixS), t_monomial(n, m, &s.negated(), TForm::QForm));
            assert_eq!(t.dagger(SRule::FixS).dagger(SRule::FixS), t);
        }
    }

    #[test]
    fn t_monomial_examples() {
        assert_eq!(t_monomial(2, 3, &OrderParam::integer(1), TForm::QForm), OpPoly::qp(2, 3));
        let t12 = t_monomial(1, 2, &OrderParam::integer(0), TForm::QForm);
        assert_eq!(t12, &OpPoly::qp(1, 2) - &OpPoly::qp(0, 1).scale(&ih(1)));
        for m in 0..4 {
            assert_eq!(t_monomial(0, m, &OrderParam::formal(), TForm::QForm), OpPoly::qp(0, m));
            assert_eq!(t_monomial(m, 0, &OrderParam::formal(), TForm::PForm), OpPoly::qp(m, 0));
        }
    }

    #[test]
    fn t_basis_examples() {
        let one = OrderParam::integer(1);
        let std = OpPoly::qp(2, 3).to_t_basis(&one);
        assert_eq!(std, Terms::single(Exponents::new(vec![(2, 3)]), Scalar::one()));

        let s = OrderParam::formal();
        let t12 = t_monomial(1, 2, &s, TForm::QForm);
        assert_eq!(t12.to_t_basis(&s), Terms::single(Exponents::new(vec![(1, 2)]), Scalar::one()));

        let weyl = OpPoly::qp(1, 1).to_t_basis(&OrderParam::integer(0));
        let mut expect = Terms::single(Exponents::new(vec![(1, 1)]), Scalar::one());
        expect.add_term(Exponents::new(vec![(0, 0)]), &(&ih(1) * &Scalar::ratio(1, 2)));
        assert_eq!(weyl, expect);
    }

    #[test]
    fn multi_dof_generators_commute() {
        let q1 = OpPoly::generator(2, Generator::q(0)).unwrap();
        let p2 = OpPoly::generator(2, Generator::p(1)).unwrap();
        assert!(q1.commutator(&p2).unwrap().is_zero());
        let p1 = OpPoly::generator(2, Generator::p(0)).unwrap();
        assert_eq!(q1.commutator(&p1).unwrap(), OpPoly::constant(2, ih(1)));
        assert!(OpPoly::generator(1, Generator::q(1)).is_err());
    }
}
