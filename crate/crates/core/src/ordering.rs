//! The ordering parameter `s`: formal, or any scalar substituted for it.

use crate::scalar::{GaussianRational, Scalar};

/// Value used for `s` when building s-ordered objects. `s = 1` is standard
/// order, `s = -1` antistandard, `s = 0` Weyl (symmetric) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderParam(Scalar);

impl OrderParam {
    /// The free symbol `s`.
    pub fn formal() -> Self {
        Self(Scalar::s())
    }

    pub fn value(v: GaussianRational) -> Self {
        Self(Scalar::constant(v))
    }

    pub fn integer(n: i64) -> Self {
        Self(Scalar::integer(n))
    }

    pub fn from_scalar(sigma: Scalar) -> Self {
        Self(sigma)
    }

    pub fn as_scalar(&self) -> &Scalar {
        &self.0
    }

    pub fn is_formal(&self) -> bool {
        self.0 == Scalar::s()
    }

    /// `-s`.
    pub fn negated(&self) -> Self {
        Self(-&self.0)
    }

    /// `1 + s`.
    pub fn one_plus(&self) -> Scalar {
        &Scalar::one() + &self.0
    }

    /// `1 - s`.
    pub fn one_minus(&self) -> Scalar {
        &Scalar::one() - &self.0
    }

    /// `s+ = hbar (1 + s) / 2`.
    pub fn s_plus(&self) -> Scalar {
        &(&Scalar::hbar() * &self.one_plus()) * &Scalar::ratio(1, 2)
    }

    /// `s- = hbar (1 - s) / 2`.
    pub fn s_minus(&self) -> Scalar {
        &(&Scalar::hbar() * &self.one_minus()) * &Scalar::ratio(1, 2)
    }

    /// Rewrite a scalar built with formal `s` at this parameter.
    pub fn specialize(&self, x: &Scalar) -> Scalar {
        if self.is_formal() {
            x.clone()
        } else {
            x.compose_s(&self.0)
        }
    }
}

impl Default for OrderParam {
    fn default() -> Self {
        Self::formal()
    }
}
