//! Worst-case rates of the proximal gradient method, with instances that
//! attain them and exact certificates that prove them.

pub mod certificate;
pub mod error;
pub mod linalg;
pub mod mixed;
pub mod pgm;
pub mod prox;
pub mod rates;
pub mod scalar;
pub mod smooth;
pub mod worstcase;

pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use rates::{BoundTable, BoundValue, ClassParams, MeasureKind, Provenance};
pub use scalar::{ExtReal, Real, Scalar};

/// Exact scalar used by certificate checks and bit-exact runs.
pub type Rational = BigRational;

pub type Params = ClassParams<f64>;
pub type ExactParams = ClassParams<Rational>;
pub type Problem = smooth::CompositeProblem<f64>;
pub type ExactProblem = smooth::CompositeProblem<Rational>;
pub type Trace = pgm::IterateTrace<f64>;
pub type ExactTrace = pgm::IterateTrace<Rational>;
