//! Univariate polynomials and rational functions over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::Field;

/// Dense polynomial, coefficients by increasing degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    fn trimmed(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::trimmed(vec![c])
    }

    /// The indeterminate.
    pub fn x() -> Self {
        Self::trimmed(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::trimmed(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(BigRational::one() / self.leading()))
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty").clone() / lead.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].clone() - factor.clone() * c.clone();
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Self::trimmed(quot), Self::trimmed(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(self, rhs: Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
        Poly::trimmed((0..n).map(|i| get(&self, i) + get(&rhs, i)).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::trimmed(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::trimmed(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*g")?,
                _ => write!(f, "({c})*g^{i}")?,
            }
        }
        Ok(())
    }
}

/// Reduced fraction of polynomials with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self {
                num,
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = BigRational::one() / den.leading();
        Self {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::poly(Poly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::poly(Poly::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(self.num + rhs.num, self.den);
        }
        RatFunc::new(
            self.num * rhs.den.clone() + rhs.num * self.den.clone(),
            self.den * rhs.den,
        )
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: RatFunc) -> RatFunc {
        RatFunc::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;

    fn div(self, rhs: RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RatFunc::new(self.num * rhs.den, self.den * rhs.num)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl Field for RatFunc {
    fn from_rational(q: &BigRational) -> Self {
        Self::poly(Poly::constant(q.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn p(c: &[i64]) -> Poly {
        Poly::trimmed(c.iter().map(|v| q(*v, 1)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = p(&[-1, 0, 1]);
        let (quot, rem) = a.div_rem(&p(&[-1, 1]));
        assert_eq!(quot, p(&[1, 1]));
        assert!(rem.is_zero());
        let (quot, rem) = p(&[3, 0, 2]).div_rem(&p(&[0, 2]));
        assert_eq!((quot, rem), (p(&[0, 1]), p(&[3])));
        assert_eq!(Poly::gcd(&a, &p(&[2, 2])), p(&[1, 1]));
        assert_eq!(Poly::gcd(&p(&[1, 1]), &p(&[2, 1])), p(&[1]));
    }

    #[test]
    fn rational_functions_reduce() {
        let x = RatFunc::poly(Poly::x());
        let one = RatFunc::one();
        let f = (x.clone() * x.clone() - one.clone()) / (x.clone() - one.clone());
        assert_eq!(f, x.clone() + one.clone());
        let g = one.clone() / x.clone() + one.clone() / (x.clone() * q_rf(2));
        assert_eq!(g.eval(&q(1, 3)), Some(q(9, 2)));
        assert_eq!(g.eval(&q(0, 1)), None);
        assert!((g.clone() - g).is_zero());
        assert_eq!(p(&[1, 2, 3]).eval(&q(2, 1)), q(17, 1));
    }

    fn q_rf(v: i64) -> RatFunc {
        RatFunc::from_rational(&q(v, 1))
    }
}
