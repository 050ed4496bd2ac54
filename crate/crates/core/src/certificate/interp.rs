//! Interpolation inequalities between the points `x_k`, `x_{k+1}`, `x*`,
//! written as expressions that are nonnegative for valid data.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::expr::{LinComb, ScalarSymbol, SymbolicExpr, VectorSymbol};
use super::field::Field;
use crate::error::{Error, Result};
use crate::rates::ClassParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Point {
    K,
    K1,
    Star,
}

impl Point {
    pub const ALL: [Point; 3] = [Point::K, Point::K1, Point::Star];

    pub fn label(self) -> &'static str {
        match self {
            Point::K => "k",
            Point::K1 => "k+1",
            Point::Star => "*",
        }
    }

    /// Position relative to `x*`.
    fn x<F: Field>(self) -> LinComb<F> {
        match self {
            Point::K => LinComb::var(VectorSymbol::X),
            Point::K1 => LinComb::var(VectorSymbol::Xk1),
            Point::Star => LinComb::zero(),
        }
    }

    fn g<F: Field>(self) -> LinComb<F> {
        LinComb::var(match self {
            Point::K => VectorSymbol::Gk,
            Point::K1 => VectorSymbol::Gk1,
            Point::Star => VectorSymbol::Gs,
        })
    }

    fn s<F: Field>(self) -> LinComb<F> {
        LinComb::var(match self {
            Point::K => VectorSymbol::Sk,
            Point::K1 => VectorSymbol::Sk1,
            Point::Star => VectorSymbol::Ss,
        })
    }

    fn f(self) -> ScalarSymbol {
        match self {
            Point::K => ScalarSymbol::Fk,
            Point::K1 => ScalarSymbol::Fk1,
            Point::Star => ScalarSymbol::Fs,
        }
    }

    fn h(self) -> ScalarSymbol {
        match self {
            Point::K => ScalarSymbol::Hk,
            Point::K1 => ScalarSymbol::Hk1,
            Point::Star => ScalarSymbol::Hs,
        }
    }
}

/// Smooth strongly convex interpolation between `i` and `j`, before the
/// iteration is substituted in.
pub fn interp_smooth_raw<F: Field>(
    i: Point,
    j: Point,
    params: &ClassParams<BigRational>,
) -> Result<SymbolicExpr<F>> {
    if params.mu() >= params.l() {
        return Err(Error::DegenerateClass);
    }
    let mu = F::from_rational(params.mu());
    let l = F::from_rational(params.l());
    let two = F::one() + F::one();
    let dx = i.x::<F>().sub(&j.x());
    let dg = i.g::<F>().sub(&j.g());
    let values = SymbolicExpr::scalar(i.f(), F::one()).add(&SymbolicExpr::scalar(j.f(), -F::one()));
    let linear = SymbolicExpr::inner(&j.g(), &dx);
    let grad_term = SymbolicExpr::norm_sq(&dg).scale(&(F::one() / (two.clone() * l.clone())));
    // mu / (2 (1 - mu/L)) = mu L / (2 (L - mu))
    let curvature = mu * l.clone() / (two * (l.clone() - F::from_rational(params.mu())));
    let mixed = dx.sub(&dg.scale(&(F::one() / l)));
    let curv_term = SymbolicExpr::norm_sq(&mixed).scale(&curvature);
    Ok(values.sub(&linear).sub(&grad_term).sub(&curv_term))
}

/// Convex (possibly nonsmooth) interpolation between `i` and `j`, raw form.
pub fn interp_convex_raw<F: Field>(i: Point, j: Point) -> SymbolicExpr<F> {
    let dx = i.x::<F>().sub(&j.x());
    SymbolicExpr::scalar(i.h(), F::one())
        .add(&SymbolicExpr::scalar(j.h(), -F::one()))
        .sub(&SymbolicExpr::inner(&j.s(), &dx))
}

/// [`interp_smooth_raw`] in the canonical basis for step `gamma`.
pub fn interp_smooth<F: Field>(
    i: Point,
    j: Point,
    params: &ClassParams<BigRational>,
    gamma: &F,
) -> Result<SymbolicExpr<F>> {
    Ok(interp_smooth_raw(i, j, params)?.substitute(gamma))
}

/// [`interp_convex_raw`] in the canonical basis for step `gamma`.
pub fn interp_convex<F: Field>(i: Point, j: Point, gamma: &F) -> SymbolicExpr<F> {
    interp_convex_raw(i, j).substitute(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use VectorSymbol::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn p12() -> ClassParams<Q> {
        ClassParams::new(q(1, 1), q(2, 1)).unwrap()
    }

    #[test]
    fn identical_points_give_zero() {
        for p in Point::ALL {
            assert!(interp_smooth::<Q>(p, p, &p12(), &q(1, 2)).unwrap().is_zero());
            assert!(interp_convex::<Q>(p, p, &q(1, 2)).is_zero());
        }
    }

    #[test]
    fn smooth_star_k_coefficients() {
        // mu = 1, L = 2: f* - f_k + <g_k, x_k> - |g* - g_k|^2 / 4 - |x_k + (g* - g_k)/2|^2
        let e = interp_smooth_raw::<Q>(Point::Star, Point::K, &p12()).unwrap();
        assert_eq!(e.gram_coeff(Gk, Gk), q(-1, 2));
        assert_eq!(e.gram_coeff(Gs, Gs), q(-1, 2));
        assert_eq!(e.gram_coeff(Gk, Gs), q(1, 1));
        assert_eq!(e.gram_coeff(X, X), q(-1, 1));
        assert_eq!(e.gram_coeff(X, Gk), q(2, 1));
        assert_eq!(e.gram_coeff(X, Gs), q(-1, 1));
        assert_eq!(e.scalar_coeff(ScalarSymbol::Fs), q(1, 1));
        assert_eq!(e.scalar_coeff(ScalarSymbol::Fk), q(-1, 1));
    }

    #[test]
    fn symmetric_sum_drops_function_values() {
        let a = interp_smooth::<Q>(Point::Star, Point::K, &p12(), &q(1, 2)).unwrap();
        let b = interp_smooth::<Q>(Point::K, Point::Star, &p12(), &q(1, 2)).unwrap();
        let s = a.add(&b);
        assert!(s.scalar_terms().next().is_none());
    }

    #[test]
    fn convex_pairs() {
        let g = q(1, 3);
        let mono = interp_convex::<Q>(Point::Star, Point::K1, &g).add(&interp_convex(Point::K1, Point::Star, &g));
        // <s_{k+1} - s*, x_{k+1} - x*> with s* = -g*
        let diff = LinComb::var(Sk1).plus(Gs, q(1, 1));
        let xk1 = LinComb::var(X).plus(Gk, -g.clone()).plus(Sk1, -g.clone());
        assert_eq!(mono, SymbolicExpr::inner(&diff, &xk1));
        let hk = interp_convex::<Q>(Point::K, Point::K1, &g);
        assert!(hk.scalar_terms().all(|(s, _)| matches!(s, ScalarSymbol::Hk | ScalarSymbol::Hk1)));
    }

    #[test]
    fn degenerate_class_rejected() {
        let p = ClassParams::new(q(2, 1), q(2, 1)).unwrap();
        assert_eq!(
            interp_smooth_raw::<Q>(Point::K, Point::Star, &p),
            Err(Error::DegenerateClass)
        );
    }
}
