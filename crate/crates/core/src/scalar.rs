//! Exact coefficients: Gaussian rationals, and Laurent polynomials in `hbar`
//! that are ordinary polynomials in the ordering parameter `s`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `re + i*im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    pub fn from_rational(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &norm, -&self.im / &norm))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_integer(1)
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;

    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;

    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;

    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;

    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;

    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;

    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;

    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-&self.im).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", self.im)
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({} {} {}*i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// How complex conjugation treats the formal ordering parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SRule {
    /// `s` is real: conj(s) = s.
    FixS,
    /// `s` is pure imaginary: conj(s) = -s.
    NegateS,
}

/// Exponent pair of a [`Scalar`] term; ordered by `hbar` power, then `s` power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarKey {
    pub hbar: i32,
    pub s: u32,
}

/// Finite sum of `c * hbar^k * s^j` with Gaussian-rational `c`, `k` any integer
/// and `j >= 0`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<ScalarKey, GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(GaussianRational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(GaussianRational::from_ratio(num, den))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn hbar() -> Self {
        Self::monomial(GaussianRational::one(), 1, 0)
    }

    pub fn s() -> Self {
        Self::monomial(GaussianRational::one(), 0, 1)
    }

    /// `c * hbar^hbar_pow * s^s_pow`.
    pub fn monomial(c: GaussianRational, hbar_pow: i32, s_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ScalarKey { hbar: hbar_pow, s: s_pow }, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&ScalarKey { hbar: 0, s: 0 }).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending `(hbar, s)` order.
    pub fn terms(&self) -> impl Iterator<Item = (ScalarKey, &GaussianRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this scalar is a plain Gaussian rational (no `hbar`, no `s`).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&ScalarKey { hbar: 0, s: 0 }).cloned(),
            _ => None,
        }
    }

    /// Lowest `hbar` exponent present, `None` for zero.
    pub fn min_hbar_power(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.hbar).min()
    }

    pub fn max_s_power(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.s).max()
    }

    fn add_term(&mut self, key: ScalarKey, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing = &*existing + c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Multiply by `hbar^k`.
    pub fn shift_hbar(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(key, v)| (ScalarKey { hbar: key.hbar + k, s: key.s }, v.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a single-term scalar `c * hbar^k` (no `s` dependence).
    pub fn inv_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (key, c) = self.terms.iter().next()?;
        if key.s != 0 {
            return None;
        }
        Some(Self::monomial(c.inv()?, -key.hbar, 0))
    }

    /// Complex conjugation `i -> -i`; `hbar` is real, `s` follows `rule`.
    pub fn conjugate(&self, rule: SRule) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let c = v.conj();
                    let c = if rule == SRule::NegateS && k.s % 2 == 1 { -c } else { c };
                    (*k, c)
                })
                .collect(),
        }
    }

    /// Partial evaluation at numeric `s` and/or `hbar`. `None` leaves the
    /// parameter formal.
    pub fn substitute(&self, s_value: Option<&GaussianRational>, hbar_value: Option<&BigRational>) -> Result<Self> {
        if let Some(h) = hbar_value {
            if h.is_zero() && self.min_hbar_power().is_some_and(|k| k < 0) {
                return Err(Error::DivisionByZero);
            }
        }
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let mut c = c.clone();
            let mut new_key = *key;
            if let Some(sv) = s_value {
                c = &c * &sv.pow(key.s);
                new_key.s = 0;
            }
            if let Some(h) = hbar_value {
                let hk = if key.hbar >= 0 {
                    num_traits::pow(h.clone(), key.hbar as usize)
                } else {
                    num_traits::pow(h.recip(), (-key.hbar) as usize)
                };
                c = &c * &GaussianRational::from_rational(hk);
                new_key.hbar = 0;
            }
            out.add_term(new_key, &c);
        }
        Ok(out)
    }

    /// Replace `s` by an arbitrary scalar expression (a ring homomorphism).
    pub fn compose_s(&self, sigma: &Scalar) -> Self {
        let max = self.max_s_power().unwrap_or(0);
        let mut powers = Vec::with_capacity(max as usize + 1);
        powers.push(Scalar::one());
        for j in 1..=max as usize {
            let next = &powers[j - 1] * sigma;
            powers.push(next);
        }
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let base = Self::monomial(c.clone(), key.hbar, 0);
            out += &(&base * &powers[key.s as usize]);
        }
        out
    }

    /// Keep only the `hbar^0` part. Fails if any negative power survives.
    pub fn limit_hbar_zero(&self) -> Result<Self> {
        if let Some(k) = self.min_hbar_power().filter(|&k| k < 0) {
            return Err(Error::NegativeHbarPower(k));
        }
        Ok(Self { terms: self.terms.iter().filter(|(k, _)| k.hbar == 0).map(|(k, v)| (*k, v.clone())).collect() })
    }
}

impl From<GaussianRational> for Scalar {
    fn from(c: GaussianRational) -> Self {
        Scalar::constant(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::integer(n)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &-c);
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;

    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ka, a) in &self.terms {
            for (kb, b) in &rhs.terms {
                let key = ScalarKey { hbar: ka.hbar + kb.hbar, s: ka.s + kb.s };
                out.add_term(key, &(a * b));
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

/// `C(n, k)` as an exact integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

pub fn factorial(n: u32) -> BigInt {
    falling_factorial(n, n)
}

pub(crate) fn int_scalar(n: BigInt) -> Scalar {
    Scalar::constant(GaussianRational::from_rational(BigRational::from_integer(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Scalar {
        Scalar::ratio(1, 2)
    }

    #[test]
    fn gaussian_norm_product() {
        let a = Scalar::one() + Scalar::i();
        let b = Scalar::one() - Scalar::i();
        assert_eq!(&a * &b, Scalar::integer(2));
    }

    #[test]
    fn laurent_cancellation() {
        let inv = Scalar::hbar().inv_monomial().unwrap();
        assert_eq!(&Scalar::hbar() * &inv, Scalar::one());
    }

    #[test]
    fn s_plus_and_s_minus_sum_to_hbar() {
        let one = Scalar::one();
        let s_plus = &(&Scalar::hbar() * &(&one + &Scalar::s())) * &half();
        let s_minus = &(&Scalar::hbar() * &(&one - &Scalar::s())) * &half();
        assert_eq!(&s_plus + &s_minus, Scalar::hbar());
    }

    #[test]
    fn conjugation_rules() {
        let ih = &Scalar::i() * &Scalar::hbar();
        assert_eq!(ih.conjugate(SRule::FixS), -&ih);
        assert_eq!(Scalar::s().conjugate(SRule::NegateS), -Scalar::s());
        let x = &(&Scalar::one() + &Scalar::s()) * &Scalar::i();
        assert_eq!(x.conjugate(SRule::FixS), -&x);
    }

    #[test]
    fn substitution_examples() {
        let x = Scalar::one() + Scalar::s();
        let zero = GaussianRational::zero();
        assert_eq!(x.substitute(Some(&zero), None).unwrap(), Scalar::one());

        let i_half = GaussianRational::new(BigRational::zero(), BigRational::new(1.into(), 2.into()));
        let s2 = Scalar::s().pow(2);
        assert_eq!(s2.substitute(Some(&i_half), None).unwrap(), Scalar::ratio(-1, 4));

        let y = &Scalar::hbar().inv_monomial().unwrap() * &Scalar::hbar().pow(2);
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(y.substitute(None, Some(&third)).unwrap(), Scalar::ratio(1, 3));
    }

    #[test]
    fn substitution_zero_hbar_with_negative_power_fails() {
        let inv = Scalar::hbar().inv_monomial().unwrap();
        let err = inv.substitute(None, Some(&BigRational::zero())).unwrap_err();
        assert!(matches!(err, Error::DivisionByZero));
    }

    #[test]
    fn hbar_limits() {
        let x = Scalar::integer(2) + Scalar::integer(3) * Scalar::hbar() + Scalar::hbar().pow(2) * Scalar::s();
        assert_eq!(x.limit_hbar_zero().unwrap(), Scalar::integer(2));

        let inv = Scalar::hbar().inv_monomial().unwrap();
        assert!(matches!(inv.limit_hbar_zero(), Err(Error::NegativeHbarPower(-1))));

        let ih = &Scalar::i() * &Scalar::hbar();
        let contraction = &ih.inv_monomial().unwrap() * &(-&ih);
        assert_eq!(contraction.limit_hbar_zero().unwrap(), Scalar::integer(-1));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let x = Scalar::s() - Scalar::s();
        assert!(x.is_zero());
        assert_eq!(x, Scalar::zero());
    }

    #[test]
    fn compose_s_matches_substitute_for_constants() {
        let x = (Scalar::one() + Scalar::s()).pow(3) * Scalar::hbar();
        let v = GaussianRational::from_ratio(2, 3);
        assert_eq!(x.compose_s(&Scalar::constant(v.clone())), x.substitute(Some(&v), None).unwrap());
        assert_eq!(x.compose_s(&Scalar::s()), x);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(factorial(0), BigInt::one());
    }
}
