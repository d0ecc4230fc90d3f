//! Exact symbolic algebra for s-ordered quantization on polynomial phase
//! space: the coefficient ring, star products and brackets, the Weyl
//! algebra, superoperators, the association map and operator dynamics.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod ordering;
pub mod phase;
pub mod render;
pub mod scalar;
pub mod superop;
pub mod terms;
pub mod weyl;
pub mod wwgm;

pub use dynamics::FlowSeries;
pub use error::{Error, Result};
pub use ordering::OrderParam;
pub use phase::{PhasePoly, Var};
pub use render::{Format, Render};
pub use scalar::{GaussianRational, SRule, Scalar, ScalarKey};
pub use superop::{Liouvillian, PmbForm};
pub use terms::{Exponents, Terms};
pub use weyl::{Generator, OpPoly, OpWord, TForm};
