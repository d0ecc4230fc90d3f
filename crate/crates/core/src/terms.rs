//! Sparse linear combinations keyed by per-dof `(q, p)` exponent vectors,
//! shared by phase-space and operator polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::scalar::{GaussianRational, Scalar};

/// `((n_1, m_1), ..., (n_d, m_d))`, read as `prod_i q_i^{n_i} p_i^{m_i}`.
///
/// Ordered by total degree (highest first), then lexicographically with larger
/// exponents first, so map iteration is the canonical print order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponents(Vec<(u32, u32)>);

impl Exponents {
    pub fn new(pairs: Vec<(u32, u32)>) -> Self {
        Self(pairs)
    }

    pub fn one(dof: usize) -> Self {
        Self(vec![(0, 0); dof])
    }

    /// `q^n p^m` embedded in dof `index` of `dof` degrees of freedom.
    pub fn single(dof: usize, index: usize, n: u32, m: u32) -> Self {
        let mut e = Self::one(dof);
        e.0[index] = (n, m);
        e
    }

    pub fn dof(&self) -> usize {
        self.0.len()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn get(&self, index: usize) -> (u32, u32) {
        self.0[index]
    }

    pub fn set(&mut self, index: usize, pair: (u32, u32)) {
        self.0[index] = pair;
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(n, m)| n + m).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&(n, m)| n == 0 && m == 0)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| (a.0 + b.0, a.1 + b.1)).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        other.total_degree().cmp(&self.total_degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical sparse combination: no zero coefficient is ever stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Terms(BTreeMap<Exponents, Scalar>);

impl Terms {
    pub fn new() -> Self {
        Self(BTreeMap::new())
    }

    pub fn single(e: Exponents, c: Scalar) -> Self {
        let mut t = Self::new();
        t.add_term(e, &c);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.0.iter()
    }

    pub fn get(&self, e: &Exponents) -> Option<&Scalar> {
        self.0.get(e)
    }

    /// Leading term in canonical order (highest total degree).
    pub fn leading(&self) -> Option<(&Exponents, &Scalar)> {
        self.0.iter().next()
    }

    pub fn add_term(&mut self, e: Exponents, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.0.remove(&e);
                }
            }
            None => {
                self.0.insert(e, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &Terms) {
        for (e, c) in &other.0 {
            self.add_term(e.clone(), c);
        }
    }

    pub fn sub_assign(&mut self, other: &Terms) {
        for (e, c) in &other.0 {
            self.add_term(e.clone(), &-c);
        }
    }

    pub fn add_scaled(&mut self, other: &Terms, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (e, c) in &other.0 {
            self.add_term(e.clone(), &(c * factor));
        }
    }

    pub fn scale(&self, factor: &Scalar) -> Terms {
        let mut out = Terms::new();
        out.add_scaled(self, factor);
        out
    }

    pub fn scale_gaussian(&self, factor: &GaussianRational) -> Terms {
        Terms(self.0.iter().map(|(e, c)| (e.clone(), c.scale(factor))).filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Terms {
        let mut out = Terms::new();
        for (e, c) in &self.0 {
            out.add_term(e.clone(), &f(c));
        }
        out
    }

    pub fn try_map_coeffs<E>(&self, f: impl Fn(&Scalar) -> Result<Scalar, E>) -> Result<Terms, E> {
        let mut out = Terms::new();
        for (e, c) in &self.0 {
            out.add_term(e.clone(), &f(c)?);
        }
        Ok(out)
    }

    /// Lowest `hbar` power over all coefficients.
    pub fn min_hbar_power(&self) -> Option<i32> {
        self.0.values().filter_map(Scalar::min_hbar_power).min()
    }
}

impl FromIterator<(Exponents, Scalar)> for Terms {
    fn from_iter<I: IntoIterator<Item = (Exponents, Scalar)>>(iter: I) -> Self {
        let mut t = Terms::new();
        for (e, c) in iter {
            t.add_term(e, &c);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_degree_then_lex() {
        let mut t = Terms::new();
        for (n, m) in [(0, 1), (0, 2), (2, 0), (1, 1), (0, 0)] {
            t.add_term(Exponents::new(vec![(n, m)]), &Scalar::one());
        }
        let order: Vec<_> = t.iter().map(|(e, _)| e.get(0)).collect();
        assert_eq!(order, vec![(2, 0), (1, 1), (0, 2), (0, 1), (0, 0)]);
    }

    #[test]
    fn cancellation_removes_entry() {
        let e = Exponents::new(vec![(1, 1)]);
        let mut t = Terms::single(e.clone(), Scalar::s());
        t.add_term(e, &-Scalar::s());
        assert!(t.is_zero());
    }
}
