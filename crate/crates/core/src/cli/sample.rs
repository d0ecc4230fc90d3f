//! Seeded random generation of scalars, polynomials and operator words for
//! property checks. The same seed and label always give the same stream.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::phase::{PhasePoly, Var};
use crate::scalar::{GaussianRational, Scalar};
use crate::terms::{Exponents, Terms};
use crate::weyl::{Generator, OpPoly, OpWord};

/// FNV-1a, used to derive a per-check stream from one seed.
fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, label: &str) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed ^ fnv1a(label)) }
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.rng.random_range(0..n)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn rational(&mut self) -> BigRational {
        let den = if self.chance(0.25) { self.range(2, 3) } else { 1 };
        BigRational::new(self.range(-3, 3).into(), den.into())
    }

    pub fn nonzero_rational(&mut self) -> BigRational {
        loop {
            let r = self.rational();
            if r != BigRational::from_integer(0.into()) {
                return r;
            }
        }
    }

    pub fn gaussian(&mut self) -> GaussianRational {
        loop {
            let g = GaussianRational::new(
                self.rational(),
                if self.chance(0.5) { self.rational() } else { BigRational::from_integer(0.into()) },
            );
            if g != GaussianRational::new(BigRational::from_integer(0.into()), BigRational::from_integer(0.into())) {
                return g;
            }
        }
    }

    /// A nonzero coefficient, sometimes carrying `s` or `hbar`.
    pub fn coefficient(&mut self, allow_hbar: bool) -> Scalar {
        let s_pow = if self.chance(0.25) { 1 } else { 0 };
        let hbar_pow = if allow_hbar && self.chance(0.2) { 1 } else { 0 };
        let mut c = Scalar::monomial(self.gaussian(), hbar_pow, s_pow);
        if self.chance(0.15) {
            let extra = Scalar::monomial(self.gaussian(), 0, 0);
            c = &c + &extra;
        }
        if c.is_zero() {
            Scalar::one()
        } else {
            c
        }
    }

    /// A random scalar for ring-axiom checks; may hold negative `hbar` and
    /// higher `s` powers.
    pub fn scalar(&mut self) -> Scalar {
        let mut x = Scalar::zero();
        for _ in 0..self.range(0, 3) {
            x += &Scalar::monomial(self.gaussian(), self.range(-2, 2) as i32, self.below(3));
        }
        x
    }

    pub fn exponents(&mut self, dof: usize, max_degree: u32) -> Exponents {
        let total = self.below(max_degree + 1);
        let mut slots = vec![0u32; 2 * dof];
        for _ in 0..total {
            let k = self.below(2 * dof as u32) as usize;
            slots[k] += 1;
        }
        Exponents::new(slots.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn terms(&mut self, dof: usize, max_degree: u32, max_terms: u32, allow_hbar: bool) -> Terms {
        let mut t = Terms::new();
        for _ in 0..=self.below(max_terms) {
            let e = self.exponents(dof, max_degree);
            let c = self.coefficient(allow_hbar);
            t.add_term(e, &c);
        }
        t
    }

    /// Phase-space polynomial of total degree at most `max_degree`.
    pub fn phase(&mut self, dof: usize, max_degree: u32) -> PhasePoly {
        PhasePoly::from_terms(dof, self.terms(dof, max_degree, 3, true))
    }

    /// Phase-space polynomial free of `hbar`.
    pub fn classical(&mut self, dof: usize, max_degree: u32) -> PhasePoly {
        PhasePoly::from_terms(dof, self.terms(dof, max_degree, 3, false))
    }

    /// Polynomial in `q` only, with a nonzero top term of degree `degree`.
    pub fn potential(&mut self, dof: usize, degree: u32) -> PhasePoly {
        let mut f = PhasePoly::zero(dof);
        for d in 0..=degree {
            if d == degree || self.chance(0.5) {
                let i = self.below(dof as u32) as usize;
                let c = Scalar::constant(GaussianRational::from_rational(self.nonzero_rational()));
                f = &f + &PhasePoly::monomial(Exponents::single(dof, i, d, 0), c);
            }
        }
        f
    }

    /// Polynomial in `p` only.
    pub fn momentum_function(&mut self, dof: usize, degree: u32) -> PhasePoly {
        let mut f = PhasePoly::zero(dof);
        for d in 0..=degree {
            if d == degree || self.chance(0.5) {
                let i = self.below(dof as u32) as usize;
                f = &f + &PhasePoly::monomial(Exponents::single(dof, i, 0, d), self.coefficient(false));
            }
        }
        f
    }

    /// Normal-ordered operator polynomial of total degree at most `max_degree`.
    pub fn op(&mut self, dof: usize, max_degree: u32) -> OpPoly {
        OpPoly::from_terms(dof, self.terms(dof, max_degree, 3, true))
    }

    /// `a q_i + b p_i + c`, summed over dofs.
    pub fn affine_op(&mut self, dof: usize) -> OpPoly {
        let mut f = OpPoly::constant(dof, self.coefficient(true));
        for i in 0..dof {
            f = &f + &OpPoly::monomial(Exponents::single(dof, i, 1, 0), self.coefficient(true));
            f = &f + &OpPoly::monomial(Exponents::single(dof, i, 0, 1), self.coefficient(true));
        }
        f
    }

    pub fn word(&mut self, dof: usize, max_len: u32) -> OpWord {
        let len = self.below(max_len + 1);
        let letters = (0..len)
            .map(|_| {
                let i = self.below(dof as u32) as usize;
                if self.chance(0.5) {
                    Generator::q(i)
                } else {
                    Generator::p(i)
                }
            })
            .collect();
        OpWord::new(dof, letters).expect("indices below dof")
    }

    pub fn var(&mut self) -> Var {
        if self.chance(0.5) {
            Var::Q
        } else {
            Var::P
        }
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u32) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<_> = (0..5)
            .map({
                let mut s = Sampler::new(7, "x");
                move |_| s.phase(2, 4)
            })
            .collect();
        let b: Vec<_> = (0..5)
            .map({
                let mut s = Sampler::new(7, "x");
                move |_| s.phase(2, 4)
            })
            .collect();
        assert_eq!(a, b);
        let mut c = Sampler::new(7, "y");
        assert_ne!(a[0], c.phase(2, 4));
    }

    #[test]
    fn degrees_are_bounded() {
        let mut s = Sampler::new(1, "deg");
        for _ in 0..100 {
            assert!(s.phase(2, 3).total_degree().unwrap_or(0) <= 3);
        }
    }
}
