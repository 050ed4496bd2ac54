//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! The method, the rate formulas and the worst-case generators are written
//! once against [`Scalar`], an ordered field. `f32`/`f64` are used for
//! simulation; [`BigRational`] gives bit-exact runs (the constrained 1-D
//! instances reproduce `1/30` exactly, not approximately). Routines that need
//! square roots or bracketing searches ask for [`Real`] instead.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field usable by the method and the rate formulas.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `num / den`, exact for rational scalars.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// `true` when arithmetic is exact.
    fn is_exact() -> bool;

    /// Equality up to the representation's own precision: exact for
    /// rationals, `1e-12` relative for floats.
    fn near(&self, other: &Self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

/// Scalars with transcendental operations (square roots, golden ratio).
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_exact() -> bool {
                false
            }

            fn near(&self, other: &Self) -> bool {
                // f32 cannot resolve 1e-12, fall back to a few ulps
                let rel = 1e-12_f64.max(4.0 * <$t>::EPSILON as f64);
                let scale = 1.0_f64.max(self.abs() as f64).max(other.abs() as f64);
                ((*self - *other).abs() as f64) <= rel * scale
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn is_exact() -> bool {
        true
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }
}

/// `max(a, b)` for partially ordered scalars (returns `a` on ties).
pub fn max_of<T: Scalar>(a: &T, b: &T) -> T {
    if b > a {
        b.clone()
    } else {
        a.clone()
    }
}

pub fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    if b < a {
        b.clone()
    } else {
        a.clone()
    }
}

/// Integer power, negative exponents allowed for nonzero bases.
pub fn powi<T: Scalar>(base: &T, exp: i64) -> T {
    let pos = num_traits::pow::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        T::one() / pos
    } else {
        pos
    }
}

/// Value of a function into `ℝ ∪ {+∞}`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtReal<T> {
    Finite(T),
    PosInf,
}

impl<T: Scalar> ExtReal<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInf => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInf => None,
        }
    }

    pub fn add_finite(self, v: &T) -> Self {
        match self {
            ExtReal::Finite(a) => ExtReal::Finite(a + v.clone()),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => v.to_f64(),
            ExtReal::PosInf => f64::INFINITY,
        }
    }
}

impl<T: Scalar> Display for ExtReal<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "+inf"),
        }
    }
}
