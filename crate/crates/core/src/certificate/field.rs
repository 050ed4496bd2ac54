//! Coefficient fields of symbolic expressions.

use std::fmt::{Debug, Display};
use std::ops::{Div, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact field of coefficients: rationals for point checks, rational
/// functions of the step size for the all-steps identity mode.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(q: &BigRational) -> Self;
}

impl Field for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}
