//! Closed, proper, convex terms `h` with closed-form proximal operators.
//!
//! Every catalog member is separable, so prox, value and subdifferential are
//! all evaluated coordinate by coordinate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::check_dim;
use crate::scalar::{max_of, min_of, ExtReal, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum ProxKind<T> {
    /// `h = 0`
    Zero,
    /// Indicator of the nonnegative orthant.
    IndicatorNonneg,
    /// Indicator of `{lo <= x <= hi}`.
    IndicatorBox { lo: Vec<T>, hi: Vec<T> },
    /// `weight * ||x||_1`
    L1 { weight: T },
    /// `<c, x>` plus the indicator of the nonnegative orthant.
    LinearPlusIndicatorNonneg { c: Vec<T> },
}

/// Catalog families selectable without parameters, used by random instance
/// generators and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxFamily {
    Zero,
    Nonneg,
    Box,
    L1,
}

impl ProxFamily {
    /// Default member of the family: box `[-1/4, 1/2]`, l1 weight `3/10`.
    pub fn instantiate<T: Scalar>(self, dim: usize) -> ProxFunction<T> {
        match self {
            ProxFamily::Zero => ProxFunction::zero(dim),
            ProxFamily::Nonneg => ProxFunction::nonneg(dim),
            ProxFamily::Box => ProxFunction {
                kind: ProxKind::IndicatorBox {
                    lo: vec![T::from_ratio(-1, 4); dim],
                    hi: vec![T::from_ratio(1, 2); dim],
                },
                dim,
            },
            ProxFamily::L1 => ProxFunction {
                kind: ProxKind::L1 {
                    weight: T::from_ratio(3, 10),
                },
                dim,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProxFunction<T> {
    kind: ProxKind<T>,
    dim: usize,
}

/// Closed interval with optional infinite ends.
#[derive(Debug, Clone, PartialEq)]
struct Interval<T> {
    lo: Option<T>,
    hi: Option<T>,
}

impl<T: Scalar> Interval<T> {
    fn point(v: T) -> Self {
        Self {
            lo: Some(v.clone()),
            hi: Some(v),
        }
    }

    fn below(v: T) -> Self {
        Self { lo: None, hi: Some(v) }
    }

    fn above(v: T) -> Self {
        Self { lo: Some(v), hi: None }
    }

    fn contains(&self, s: &T, tol: &T) -> bool {
        let lo_ok = self.lo.as_ref().map_or(true, |lo| *s >= lo.clone() - tol.clone());
        let hi_ok = self.hi.as_ref().map_or(true, |hi| *s <= hi.clone() + tol.clone());
        lo_ok && hi_ok
    }

    fn clamp(&self, s: &T) -> T {
        let mut v = s.clone();
        if let Some(lo) = &self.lo {
            v = max_of(&v, lo);
        }
        if let Some(hi) = &self.hi {
            v = min_of(&v, hi);
        }
        v
    }
}

impl<T: Scalar> ProxFunction<T> {
    pub fn zero(dim: usize) -> Self {
        Self {
            kind: ProxKind::Zero,
            dim,
        }
    }

    pub fn nonneg(dim: usize) -> Self {
        Self {
            kind: ProxKind::IndicatorNonneg,
            dim,
        }
    }

    pub fn boxed(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        check_dim(&hi, lo.len())?;
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidArgument("box requires lo <= hi".into()));
        }
        let dim = lo.len();
        Ok(Self {
            kind: ProxKind::IndicatorBox { lo, hi },
            dim,
        })
    }

    pub fn l1(weight: T, dim: usize) -> Result<Self> {
        if weight < T::zero() {
            return Err(Error::InvalidArgument("l1 weight must be >= 0".into()));
        }
        Ok(Self {
            kind: ProxKind::L1 { weight },
            dim,
        })
    }

    pub fn linear_nonneg(c: Vec<T>) -> Self {
        let dim = c.len();
        Self {
            kind: ProxKind::LinearPlusIndicatorNonneg { c },
            dim,
        }
    }

    pub fn kind(&self) -> &ProxKind<T> {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, ProxKind::Zero)
    }

    /// `argmin_y gamma h(y) + ||x - y||^2 / 2`
    pub fn prox(&self, gamma: &T, x: &[T]) -> Result<Vec<T>> {
        if *gamma <= T::zero() {
            return Err(Error::NonPositiveStep(gamma.to_string()));
        }
        check_dim(x, self.dim)?;
        Ok(x.iter()
            .enumerate()
            .map(|(i, xi)| self.prox_coord(i, gamma, xi))
            .collect())
    }

    /// One coordinate of the prox. Assumes `gamma > 0` and `i < dim`.
    pub(crate) fn prox_coord(&self, i: usize, gamma: &T, v: &T) -> T {
        let zero = T::zero();
        match &self.kind {
            ProxKind::Zero => v.clone(),
            ProxKind::IndicatorNonneg => max_of(v, &zero),
            ProxKind::IndicatorBox { lo, hi } => min_of(&max_of(v, &lo[i]), &hi[i]),
            ProxKind::L1 { weight } => {
                let shrunk = v.abs() - gamma.clone() * weight.clone();
                if shrunk <= zero {
                    zero
                } else {
                    v.signum() * shrunk
                }
            }
            ProxKind::LinearPlusIndicatorNonneg { c } => {
                max_of(&(v.clone() - gamma.clone() * c[i].clone()), &zero)
            }
        }
    }

    fn value_coord(&self, i: usize, x: &T) -> ExtReal<T> {
        let zero = T::zero();
        match &self.kind {
            ProxKind::Zero => ExtReal::Finite(zero),
            ProxKind::IndicatorNonneg if *x < zero => ExtReal::PosInf,
            ProxKind::IndicatorNonneg => ExtReal::Finite(zero),
            ProxKind::IndicatorBox { lo, hi } => {
                if *x < lo[i] || *x > hi[i] {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite(zero)
                }
            }
            ProxKind::L1 { weight } => ExtReal::Finite(weight.clone() * x.abs()),
            ProxKind::LinearPlusIndicatorNonneg { c } => {
                if *x < zero {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite(c[i].clone() * x.clone())
                }
            }
        }
    }

    pub fn value(&self, x: &[T]) -> Result<ExtReal<T>> {
        check_dim(x, self.dim)?;
        let mut total = T::zero();
        for (i, xi) in x.iter().enumerate() {
            match self.value_coord(i, xi) {
                ExtReal::Finite(v) => total = total + v,
                ExtReal::PosInf => return Ok(ExtReal::PosInf),
            }
        }
        Ok(ExtReal::Finite(total))
    }

    /// Subdifferential of coordinate `i` at a feasible point.
    fn subdiff_coord(&self, i: usize, x: &T) -> Interval<T> {
        let zero = T::zero();
        match &self.kind {
            ProxKind::Zero => Interval::point(zero),
            ProxKind::IndicatorNonneg => {
                if x.is_zero() {
                    Interval::below(zero)
                } else {
                    Interval::point(zero)
                }
            }
            ProxKind::IndicatorBox { lo, hi } => {
                let at_lo = *x == lo[i];
                let at_hi = *x == hi[i];
                match (at_lo, at_hi) {
                    (true, true) => Interval { lo: None, hi: None },
                    (true, false) => Interval::below(zero),
                    (false, true) => Interval::above(zero),
                    (false, false) => Interval::point(zero),
                }
            }
            ProxKind::L1 { weight } => {
                if x.is_zero() {
                    Interval {
                        lo: Some(-weight.clone()),
                        hi: Some(weight.clone()),
                    }
                } else {
                    Interval::point(x.signum() * weight.clone())
                }
            }
            ProxKind::LinearPlusIndicatorNonneg { c } => {
                if x.is_zero() {
                    Interval::below(c[i].clone())
                } else {
                    Interval::point(c[i].clone())
                }
            }
        }
    }

    fn require_feasible(&self, x: &[T]) -> Result<()> {
        check_dim(x, self.dim)?;
        if !self.value(x)?.is_finite() {
            return Err(Error::OutsideDomain);
        }
        Ok(())
    }

    /// Whether `s` lies in the subdifferential of `h` at `x`, with `tol`
    /// slack on each coordinate constraint.
    pub fn subgradient_membership(&self, x: &[T], s: &[T], tol: &T) -> Result<bool> {
        self.require_feasible(x)?;
        check_dim(s, self.dim)?;
        Ok(x.iter()
            .zip(s)
            .enumerate()
            .all(|(i, (xi, si))| self.subdiff_coord(i, xi).contains(si, tol)))
    }

    /// Euclidean projection of `target` onto the subdifferential at `x`.
    ///
    /// With `target = -grad f(x)` this yields the subgradient that makes the
    /// residual `grad f(x) + s` shortest.
    pub fn closest_subgradient(&self, x: &[T], target: &[T]) -> Result<Vec<T>> {
        self.require_feasible(x)?;
        check_dim(target, self.dim)?;
        Ok(x.iter()
            .zip(target)
            .enumerate()
            .map(|(i, (xi, ti))| self.subdiff_coord(i, xi).clamp(ti))
            .collect())
    }

    /// `h(x) - h(x_ref) - <s_ref, x - x_ref>` for feasible `x`, `x_ref`.
    ///
    /// Evaluated piece by piece so that points sharing a linear piece of `h`
    /// with `x_ref` contribute exactly zero.
    pub fn bregman_gap(&self, x: &[T], x_ref: &[T], s_ref: &[T]) -> Result<T> {
        self.require_feasible(x)?;
        self.require_feasible(x_ref)?;
        check_dim(s_ref, self.dim)?;
        let mut total = T::zero();
        for i in 0..self.dim {
            let (xi, ri, si) = (&x[i], &x_ref[i], &s_ref[i]);
            let term = match &self.kind {
                ProxKind::L1 { weight } => {
                    (weight.clone() * xi.abs() - si.clone() * xi.clone())
                        - (weight.clone() * ri.abs() - si.clone() * ri.clone())
                }
                ProxKind::LinearPlusIndicatorNonneg { c } => {
                    (c[i].clone() - si.clone()) * (xi.clone() - ri.clone())
                }
                _ => -(si.clone() * (xi.clone() - ri.clone())),
            };
            total = total + term;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn prox_examples() {
        let zero = ProxFunction::<f64>::zero(2);
        assert_eq!(zero.prox(&0.7, &[3.0, -1.0]).unwrap(), vec![3.0, -1.0]);
        let nn = ProxFunction::<f64>::nonneg(2);
        assert_eq!(nn.prox(&0.5, &[2.0, -3.0]).unwrap(), vec![2.0, 0.0]);
        let l1 = ProxFunction::l1(q(1, 1), 2).unwrap();
        assert_eq!(
            l1.prox(&q(1, 2), &[q(2, 1), q(-1, 5)]).unwrap(),
            vec![q(3, 2), q(0, 1)]
        );
        let lin = ProxFunction::linear_nonneg(vec![q(1, 1), q(-1, 1)]);
        assert_eq!(
            lin.prox(&q(1, 2), &[q(1, 4), q(1, 4)]).unwrap(),
            vec![q(0, 1), q(3, 4)]
        );
        let bx = ProxFunction::boxed(vec![-1.0, 0.0], vec![1.0, 0.5]).unwrap();
        assert_eq!(bx.prox(&3.0, &[-4.0, 0.25]).unwrap(), vec![-1.0, 0.25]);
    }

    #[test]
    fn prox_argument_errors() {
        let h = ProxFunction::<f64>::nonneg(2);
        assert!(matches!(h.prox(&0.0, &[1.0, 1.0]), Err(Error::NonPositiveStep(_))));
        assert!(matches!(h.prox(&-1.0, &[1.0, 1.0]), Err(Error::NonPositiveStep(_))));
        assert!(matches!(
            h.prox(&1.0, &[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(ProxFunction::boxed(vec![1.0], vec![0.0]).is_err());
        assert!(ProxFunction::l1(-1.0, 3).is_err());
    }

    #[test]
    fn value_examples() {
        let nn = ProxFunction::<f64>::nonneg(2);
        assert_eq!(nn.value(&[1.0, -1.0]).unwrap(), ExtReal::PosInf);
        let l1 = ProxFunction::l1(q(2, 1), 2).unwrap();
        assert_eq!(l1.value(&[q(1, 1), q(-3, 1)]).unwrap(), ExtReal::Finite(q(8, 1)));
        let lin = ProxFunction::linear_nonneg(vec![q(1, 15)]);
        assert_eq!(lin.value(&[q(1, 5)]).unwrap(), ExtReal::Finite(q(1, 75)));
        assert_eq!(lin.value(&[q(-1, 5)]).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn membership_examples() {
        let nn = ProxFunction::<f64>::nonneg(2);
        assert!(nn.subgradient_membership(&[0.0, 1.0], &[-5.0, 0.0], &0.0).unwrap());
        assert!(!nn.subgradient_membership(&[0.0, 1.0], &[1.0, 0.0], &0.0).unwrap());
        let zero = ProxFunction::<f64>::zero(2);
        assert!(zero.subgradient_membership(&[4.0, 2.0], &[0.0, 0.0], &0.0).unwrap());
        assert!(!zero.subgradient_membership(&[4.0, 2.0], &[0.1, 0.0], &0.0).unwrap());
        let l1 = ProxFunction::l1(1.0, 2).unwrap();
        assert!(l1.subgradient_membership(&[2.0, 0.0], &[1.0, 0.3], &0.0).unwrap());
        assert!(!l1.subgradient_membership(&[2.0, 0.0], &[0.9, 0.3], &0.0).unwrap());
        assert_eq!(
            nn.subgradient_membership(&[-1.0, 0.0], &[0.0, 0.0], &0.0),
            Err(Error::OutsideDomain)
        );
        let bx = ProxFunction::boxed(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert!(bx.subgradient_membership(&[1.0, 0.0], &[3.0, -7.0], &0.0).unwrap());
        assert!(!bx.subgradient_membership(&[1.0, 0.0], &[-3.0, 0.0], &0.0).unwrap());
    }

    #[test]
    fn closest_subgradient_projects() {
        let l1 = ProxFunction::l1(1.0, 3).unwrap();
        let s = l1.closest_subgradient(&[0.0, 2.0, 0.0], &[3.0, 0.0, -0.5]).unwrap();
        assert_eq!(s, vec![1.0, 1.0, -0.5]);
        let nn = ProxFunction::<f64>::nonneg(2);
        assert_eq!(nn.closest_subgradient(&[0.0, 1.0], &[2.0, 2.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(nn.closest_subgradient(&[0.0, 1.0], &[-2.0, 2.0]).unwrap(), vec![-2.0, 0.0]);
    }

    #[test]
    fn bregman_gap_is_exact_on_shared_pieces() {
        let l1 = ProxFunction::l1(0.3, 2).unwrap();
        let s = vec![0.3, -0.3];
        let g = l1.bregman_gap(&[1.7, -2.1], &[0.9, -0.4], &s).unwrap();
        assert_eq!(g, 0.0);
        let g = l1.bregman_gap(&[-1.0, -2.1], &[0.9, -0.4], &s).unwrap();
        assert!(f64::abs(g - 0.6) < 1e-15);
    }

    /// Grid search plus local refinement of `gamma h(y) + (x - y)^2 / 2` in
    /// exact arithmetic, so that flat minima do not limit the resolution.
    fn brute_force_prox(h: &ProxFunction<Q>, gamma: &Q, x: &Q) -> Q {
        let half = q(1, 2);
        let obj = |y: &Q| {
            h.value(std::slice::from_ref(y)).unwrap().into_finite().map(|v| {
                let d = x.clone() - y.clone();
                gamma.clone() * v + half.clone() * d.clone() * d
            })
        };
        let n = 40;
        let (mut lo, mut hi) = (x.clone() - q(10, 1), x.clone() + q(10, 1));
        while hi.clone() - lo.clone() > q(1, 1_000_000_000_000) {
            let step = (hi.clone() - lo.clone()) / q(n, 1);
            let mut best: Option<(Q, Q)> = None;
            for j in 0..=n {
                let y = lo.clone() + step.clone() * q(j, 1);
                if let Some(v) = obj(&y) {
                    if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                        best = Some((y, v));
                    }
                }
            }
            let y = best.unwrap().0;
            lo = y.clone() - step.clone();
            hi = y + step;
        }
        (lo + hi) * half
    }

    fn catalog_1d() -> Vec<ProxFunction<Q>> {
        vec![
            ProxFunction::zero(1),
            ProxFunction::nonneg(1),
            ProxFunction::boxed(vec![q(-1, 2)], vec![q(3, 4)]).unwrap(),
            ProxFunction::l1(q(4, 5), 1).unwrap(),
            ProxFunction::linear_nonneg(vec![q(3, 5)]),
            ProxFunction::linear_nonneg(vec![q(-2, 5)]),
        ]
    }

    fn catalog(dim: usize) -> Vec<ProxFunction<f64>> {
        vec![
            ProxFunction::zero(dim),
            ProxFunction::nonneg(dim),
            ProxFunction::boxed(vec![-0.5; dim], vec![0.75; dim]).unwrap(),
            ProxFunction::l1(0.8, dim).unwrap(),
            ProxFunction::linear_nonneg((0..dim).map(|i| 0.3 * i as f64 - 0.5).collect()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn prox_matches_brute_force_1d(x in -5.0f64..5.0, gamma in 0.05f64..3.0) {
            let (xq, gq) = (Q::from_f64(x).unwrap(), Q::from_f64(gamma).unwrap());
            for h in catalog_1d() {
                let p = h.prox(&gq, std::slice::from_ref(&xq)).unwrap()[0].to_f64();
                let b = brute_force_prox(&h, &gq, &xq).to_f64();
                prop_assert!(f64::abs(p - b) < 1e-10, "{:?}: prox {} brute {}", h.kind(), p, b);
            }
        }
    }

    proptest! {

        #[test]
        fn prox_is_nonexpansive(
            x in proptest::collection::vec(-5.0f64..5.0, 4),
            y in proptest::collection::vec(-5.0f64..5.0, 4),
            gamma in 0.01f64..5.0,
        ) {
            for h in catalog(4) {
                let px = h.prox(&gamma, &x).unwrap();
                let py = h.prox(&gamma, &y).unwrap();
                prop_assert!(crate::linalg::dist_sq(&px, &py) <= crate::linalg::dist_sq(&x, &y) * (1.0 + 1e-12));
            }
        }

        #[test]
        fn prox_residual_is_a_subgradient(
            x in proptest::collection::vec(-5.0f64..5.0, 4),
            gamma in 0.01f64..5.0,
        ) {
            for h in catalog(4) {
                let p = h.prox(&gamma, &x).unwrap();
                let s: Vec<f64> = x.iter().zip(&p).map(|(a, b)| (a - b) / gamma).collect();
                prop_assert!(h.subgradient_membership(&p, &s, &1e-12).unwrap());
            }
        }

        #[test]
        fn subdifferential_is_monotone(
            x in proptest::collection::vec(-5.0f64..5.0, 4),
            y in proptest::collection::vec(-5.0f64..5.0, 4),
            gamma in 0.01f64..5.0,
        ) {
            for h in catalog(4) {
                let px = h.prox(&gamma, &x).unwrap();
                let py = h.prox(&gamma, &y).unwrap();
                let sx: Vec<f64> = x.iter().zip(&px).map(|(a, b)| (a - b) / gamma).collect();
                let sy: Vec<f64> = y.iter().zip(&py).map(|(a, b)| (a - b) / gamma).collect();
                let m = crate::linalg::dot(&crate::linalg::sub(&sx, &sy), &crate::linalg::sub(&px, &py));
                prop_assert!(m >= -1e-12);
            }
        }
    }
}
