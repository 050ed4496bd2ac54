//! Quadratic members of `F_{mu,L}` and composite problems `F = f + h`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, check_dim};
use crate::prox::{ProxFamily, ProxFunction, ProxKind};
use crate::rates::ClassParams;
use crate::scalar::{ExtReal, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum SmoothKind<T> {
    /// `(a/2) ||x||^2`
    ScaledSqNorm { a: T, dim: usize },
    /// `sum_i d_i x_i^2 / 2 + b_i x_i`
    DiagonalQuadratic { d: Vec<T>, b: Vec<T> },
    /// `x^T A x / 2 + <b, x>` with symmetric `A`.
    DenseQuadratic { a: Vec<Vec<T>>, b: Vec<T> },
}

/// A quadratic together with the class it is declared to belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothFunction<T> {
    kind: SmoothKind<T>,
    params: ClassParams<T>,
}

impl<T: Scalar> SmoothFunction<T> {
    /// Validates that the spectrum lies in `[mu, L]`.
    pub fn new(kind: SmoothKind<T>, params: ClassParams<T>) -> Result<Self> {
        let f = Self::new_unchecked(kind, params);
        f.validate()?;
        Ok(f)
    }

    /// Skips the spectrum check. Used to build deliberate class violations.
    pub fn new_unchecked(kind: SmoothKind<T>, params: ClassParams<T>) -> Self {
        Self { kind, params }
    }

    pub fn scaled_sq_norm(a: T, dim: usize, params: ClassParams<T>) -> Result<Self> {
        Self::new(SmoothKind::ScaledSqNorm { a, dim }, params)
    }

    /// `f_mu(x) = (mu/2) ||x||^2`
    pub fn f_mu(params: &ClassParams<T>, dim: usize) -> Self {
        Self::new_unchecked(
            SmoothKind::ScaledSqNorm {
                a: params.mu().clone(),
                dim,
            },
            params.clone(),
        )
    }

    /// `f_L(x) = (L/2) ||x||^2`
    pub fn f_l(params: &ClassParams<T>, dim: usize) -> Self {
        Self::new_unchecked(
            SmoothKind::ScaledSqNorm {
                a: params.l().clone(),
                dim,
            },
            params.clone(),
        )
    }

    pub fn diagonal(d: Vec<T>, b: Vec<T>, params: ClassParams<T>) -> Result<Self> {
        Self::new(SmoothKind::DiagonalQuadratic { d, b }, params)
    }

    pub fn dense(a: Vec<Vec<T>>, b: Vec<T>, params: ClassParams<T>) -> Result<Self> {
        Self::new(SmoothKind::DenseQuadratic { a, b }, params)
    }

    fn validate(&self) -> Result<()> {
        let (mu, l) = (self.params.mu(), self.params.l());
        let in_range = |v: &T| v >= mu && v <= l;
        match &self.kind {
            SmoothKind::ScaledSqNorm { a, .. } => {
                if !in_range(a) {
                    return Err(Error::Construction(format!("modulus {a} outside [{mu}, {l}]")));
                }
            }
            SmoothKind::DiagonalQuadratic { d, b } => {
                check_dim(b, d.len())?;
                if let Some(bad) = d.iter().find(|v| !in_range(v)) {
                    return Err(Error::Construction(format!("eigenvalue {bad} outside [{mu}, {l}]")));
                }
            }
            SmoothKind::DenseQuadratic { a, b } => {
                let n = b.len();
                check_dim(a, n)?;
                for row in a {
                    check_dim(row, n)?;
                }
                for i in 0..n {
                    for j in 0..i {
                        if !a[i][j].near(&a[j][i]) {
                            return Err(Error::Construction("matrix is not symmetric".into()));
                        }
                    }
                }
                let tol = if T::is_exact() {
                    T::zero()
                } else {
                    T::from_f64(1e-12).unwrap() * l.clone()
                };
                let shifted = |shift: &T, sign: &T| -> Vec<Vec<T>> {
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| {
                                    let diag = if i == j { shift.clone() } else { T::zero() };
                                    sign.clone() * (a[i][j].clone() - diag)
                                })
                                .collect()
                        })
                        .collect()
                };
                if !linalg::is_psd(&shifted(mu, &T::one()), &tol)
                    || !linalg::is_psd(&shifted(l, &-T::one()), &tol)
                {
                    return Err(Error::Construction(format!("spectrum not inside [{mu}, {l}]")));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &SmoothKind<T> {
        &self.kind
    }

    pub fn params(&self) -> &ClassParams<T> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SmoothKind::ScaledSqNorm { dim, .. } => *dim,
            SmoothKind::DiagonalQuadratic { d, .. } => d.len(),
            SmoothKind::DenseQuadratic { b, .. } => b.len(),
        }
    }

    fn linear(&self) -> Option<&[T]> {
        match &self.kind {
            SmoothKind::ScaledSqNorm { .. } => None,
            SmoothKind::DiagonalQuadratic { b, .. } | SmoothKind::DenseQuadratic { b, .. } => Some(b),
        }
    }

    /// `A v`
    pub fn hess_apply(&self, v: &[T]) -> Result<Vec<T>> {
        check_dim(v, self.dim())?;
        Ok(match &self.kind {
            SmoothKind::ScaledSqNorm { a, .. } => linalg::scale(a, v),
            SmoothKind::DiagonalQuadratic { d, .. } => {
                d.iter().zip(v).map(|(di, vi)| di.clone() * vi.clone()).collect()
            }
            SmoothKind::DenseQuadratic { a, .. } => linalg::mat_vec(a, v),
        })
    }

    /// `<v, A v>`
    pub fn quad_form(&self, v: &[T]) -> Result<T> {
        Ok(linalg::dot(v, &self.hess_apply(v)?))
    }

    pub fn eval_grad(&self, x: &[T]) -> Result<(T, Vec<T>)> {
        let ax = self.hess_apply(x)?;
        let half = T::from_ratio(1, 2);
        let mut value = half * linalg::dot(x, &ax);
        let grad = match self.linear() {
            Some(b) => {
                value = value + linalg::dot(b, x);
                linalg::add(&ax, b)
            }
            None => ax,
        };
        Ok((value, grad))
    }

    pub fn value(&self, x: &[T]) -> Result<T> {
        Ok(self.eval_grad(x)?.0)
    }

    pub fn grad(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.eval_grad(x)?.1)
    }

    /// Smallest and largest eigenvalue for diagonal members; the declared
    /// constants for dense ones.
    pub fn effective_params(&self) -> ClassParams<T> {
        let spectrum: Vec<T> = match &self.kind {
            SmoothKind::ScaledSqNorm { a, .. } => vec![a.clone()],
            SmoothKind::DiagonalQuadratic { d, .. } => d.clone(),
            SmoothKind::DenseQuadratic { .. } => return self.params.clone(),
        };
        let lo = spectrum.iter().fold(spectrum[0].clone(), |m, v| crate::scalar::min_of(&m, v));
        let hi = spectrum.iter().fold(spectrum[0].clone(), |m, v| crate::scalar::max_of(&m, v));
        if hi <= T::zero() {
            return self.params.clone();
        }
        ClassParams::new(lo, hi).unwrap_or_else(|_| self.params.clone())
    }

    /// Most negative value of the smooth strongly convex interpolation
    /// inequality over all ordered pairs of `points`.
    pub fn check_interpolation(&self, params: &ClassParams<T>, points: &[Vec<T>]) -> Result<T> {
        if params.mu() >= params.l() {
            return Err(Error::DegenerateClass);
        }
        if points.len() < 2 {
            return Err(Error::InvalidArgument("at least two points are required".into()));
        }
        let evals = points
            .iter()
            .map(|x| self.eval_grad(x))
            .collect::<Result<Vec<_>>>()?;
        let mut worst: Option<T> = None;
        for (i, (xi, (fi, gi))) in points.iter().zip(&evals).enumerate() {
            for (j, (xj, (fj, gj))) in points.iter().zip(&evals).enumerate() {
                if i == j {
                    continue;
                }
                let v = interpolation_value(params, xi, fi, gi, xj, fj, gj);
                worst = Some(match worst {
                    Some(w) if w <= v => w,
                    _ => v,
                });
            }
        }
        Ok(worst.expect("at least one ordered pair"))
    }

    /// Slack of the relaxed distance condition at `x` relative to `x_star`:
    /// `<g* - g, x* - x> - |g - g*|^2/L - mu/(1 - mu/L) |x - x* - (g - g*)/L|^2`.
    pub fn relaxed_distance_slack(&self, params: &ClassParams<T>, x: &[T], x_star: &[T]) -> Result<T> {
        if params.mu() >= params.l() {
            return Err(Error::DegenerateClass);
        }
        let g = self.grad(x)?;
        let gs = self.grad(x_star)?;
        let (mu, l) = (params.mu().clone(), params.l().clone());
        let dg = linalg::sub(&g, &gs);
        let dx = linalg::sub(x, x_star);
        let lhs = linalg::dot(&linalg::sub(&gs, &g), &linalg::sub(x_star, x));
        let w = linalg::axpy(&dx, &(-T::one() / l.clone()), &dg);
        let coef = mu.clone() / (T::one() - mu / l.clone());
        Ok(lhs - linalg::norm_sq(&dg) / l - coef * linalg::norm_sq(&w))
    }
}

/// `f_i - f_j - <g_j, x_i - x_j> - |g_i - g_j|^2/(2L)
///   - mu/(2(1 - mu/L)) |x_i - x_j - (g_i - g_j)/L|^2`
pub fn interpolation_value<T: Scalar>(
    params: &ClassParams<T>,
    xi: &[T],
    fi: &T,
    gi: &[T],
    xj: &[T],
    fj: &T,
    gj: &[T],
) -> T {
    let (mu, l) = (params.mu().clone(), params.l().clone());
    let two = T::two();
    let dx = linalg::sub(xi, xj);
    let dg = linalg::sub(gi, gj);
    let w = linalg::axpy(&dx, &(-T::one() / l.clone()), &dg);
    let coef = mu.clone() / (two.clone() * (T::one() - mu / l.clone()));
    fi.clone()
        - fj.clone()
        - linalg::dot(gj, &dx)
        - linalg::norm_sq(&dg) / (two * l)
        - coef * linalg::norm_sq(&w)
}

/// Random diagonal quadratic in `F_{mu,L}` with both endpoints in its
/// spectrum and linear term uniform in `[-1, 1]`.
///
/// With `dim = 1` and `mu < L` only the modulus `mu` is used;
/// [`SmoothFunction::effective_params`] then reports `L = mu`.
pub fn random_instance<T: Scalar>(params: &ClassParams<T>, dim: usize, seed: u64) -> Result<SmoothFunction<T>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mu, l) = (params.mu().clone(), params.l().clone());
    let mut d = Vec::with_capacity(dim);
    if dim == 1 {
        d.push(mu.clone());
    } else {
        d.push(mu.clone());
        d.push(l.clone());
        let (lo, hi) = (mu.to_f64(), l.to_f64());
        for _ in 2..dim {
            let t: f64 = rng.gen();
            let v = T::from_f64(lo + t * (hi - lo)).expect("finite sample");
            // rounding may leave [mu, L] by an ulp
            d.push(crate::scalar::min_of(&crate::scalar::max_of(&v, &mu), &l));
        }
        d.shuffle(&mut rng);
    }
    let b = (0..dim)
        .map(|_| T::from_f64(rng.gen_range(-1.0..=1.0)).expect("finite sample"))
        .collect();
    SmoothFunction::diagonal(d, b, params.clone())
}

/// Optimal point and value of a composite problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum<T> {
    pub x: Vec<T>,
    pub value: T,
}

/// `min_x f(x) + h(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeProblem<T> {
    f: SmoothFunction<T>,
    h: ProxFunction<T>,
    optimum: Option<Optimum<T>>,
    /// `s* = -grad f(x*)` projected onto the subdifferential of `h` at `x*`.
    s_star: Option<Vec<T>>,
}

impl<T: Scalar> CompositeProblem<T> {
    /// Builds the problem and solves it in closed form when possible.
    ///
    /// Separable quadratics with any catalog `h` and dense quadratics with
    /// `h = 0` are solved; other combinations get no stored optimum.
    pub fn new(f: SmoothFunction<T>, h: ProxFunction<T>) -> Result<Self> {
        if f.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: h.dim(),
            });
        }
        let x_star = match closed_form_minimizer(&f, &h) {
            Ok(x) => Some(x),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        let mut p = Self {
            f,
            h,
            optimum: None,
            s_star: None,
        };
        if let Some(x) = x_star {
            p.set_optimum_point(x)?;
        }
        Ok(p)
    }

    /// Uses a caller-supplied minimizer instead of the closed form.
    pub fn with_optimum(f: SmoothFunction<T>, h: ProxFunction<T>, x_star: Vec<T>) -> Result<Self> {
        let mut p = Self {
            f,
            h,
            optimum: None,
            s_star: None,
        };
        p.set_optimum_point(x_star)?;
        Ok(p)
    }

    fn set_optimum_point(&mut self, x: Vec<T>) -> Result<()> {
        let (fv, g) = self.f.eval_grad(&x)?;
        let hv = self.h.value(&x)?.into_finite().ok_or(Error::OutsideDomain)?;
        let target: Vec<T> = g.iter().map(|v| -v.clone()).collect();
        self.s_star = Some(self.h.closest_subgradient(&x, &target)?);
        self.optimum = Some(Optimum { x, value: fv + hv });
        Ok(())
    }

    pub fn f(&self) -> &SmoothFunction<T> {
        &self.f
    }

    pub fn h(&self) -> &ProxFunction<T> {
        &self.h
    }

    pub fn params(&self) -> &ClassParams<T> {
        self.f.params()
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn optimum(&self) -> Option<&Optimum<T>> {
        self.optimum.as_ref()
    }

    pub fn objective(&self, x: &[T]) -> Result<ExtReal<T>> {
        let hv = self.h.value(x)?;
        Ok(hv.add_finite(&self.f.value(x)?))
    }

    /// `F(x) - F*` for feasible `x`, evaluated around `x*`:
    /// `<g* + s*, d> + <d, A d>/2 + D_h(x, x*)` with `d = x - x*`.
    pub fn func_gap(&self, x: &[T]) -> Result<Option<T>> {
        let (Some(opt), Some(s_star)) = (&self.optimum, &self.s_star) else {
            return Ok(None);
        };
        let g_star = self.f.grad(&opt.x)?;
        let d = linalg::sub(x, &opt.x);
        let first = linalg::dot(&linalg::add(&g_star, s_star), &d);
        let second = T::from_ratio(1, 2) * self.f.quad_form(&d)?;
        let breg = self.h.bregman_gap(x, &opt.x, s_star)?;
        Ok(Some(first + second + breg))
    }

    pub fn dist_sq(&self, x: &[T]) -> Result<Option<T>> {
        check_dim(x, self.dim())?;
        Ok(self.optimum.as_ref().map(|o| linalg::dist_sq(x, &o.x)))
    }

    /// Whether `x* = prox(gamma, x* - gamma grad f(x*))` holds, to `tol` in
    /// squared distance.
    pub fn is_fixed_point(&self, gamma: &T, tol: &T) -> Result<bool> {
        let opt = self.optimum.as_ref().ok_or(Error::UnknownOptimum)?;
        let g = self.f.grad(&opt.x)?;
        let y = self.h.prox(gamma, &linalg::axpy(&opt.x, &-gamma.clone(), &g))?;
        Ok(linalg::dist_sq(&y, &opt.x) <= *tol)
    }
}

/// Minimizer of `f + h`, coordinatewise for separable `f`.
fn closed_form_minimizer<T: Scalar>(f: &SmoothFunction<T>, h: &ProxFunction<T>) -> Result<Vec<T>> {
    let n = f.dim();
    let (d, b): (Vec<T>, Vec<T>) = match f.kind() {
        SmoothKind::ScaledSqNorm { a, dim } => (vec![a.clone(); *dim], vec![T::zero(); *dim]),
        SmoothKind::DiagonalQuadratic { d, b } => (d.clone(), b.clone()),
        SmoothKind::DenseQuadratic { a, b } => {
            if !h.is_zero() {
                return Err(Error::Unsupported("dense quadratic with nonzero h".into()));
            }
            let rhs: Vec<T> = b.iter().map(|v| -v.clone()).collect();
            return linalg::solve(a, &rhs)
                .ok_or_else(|| Error::NoClosedFormOptimum("singular quadratic".into()));
        }
    };
    (0..n)
        .map(|i| {
            if d[i].is_zero() {
                linear_coord_minimizer(h, i, &b[i])
            } else {
                let gamma = T::one() / d[i].clone();
                let v = -b[i].clone() * gamma.clone();
                Ok(h.prox_coord(i, &gamma, &v))
            }
        })
        .collect()
}

/// Minimizer of `b x + h_i(x)` over one coordinate.
fn linear_coord_minimizer<T: Scalar>(h: &ProxFunction<T>, i: usize, b: &T) -> Result<T> {
    let zero = T::zero();
    let unbounded = || Err(Error::NoClosedFormOptimum("objective is unbounded below".into()));
    match h.kind() {
        ProxKind::Zero if b.is_zero() => Ok(zero),
        ProxKind::IndicatorNonneg if *b >= zero => Ok(zero),
        ProxKind::IndicatorBox { lo, hi } => Ok(if *b > zero {
            lo[i].clone()
        } else if *b < zero {
            hi[i].clone()
        } else {
            crate::scalar::min_of(&crate::scalar::max_of(&zero, &lo[i]), &hi[i])
        }),
        ProxKind::L1 { weight } if b.abs() <= *weight => Ok(zero),
        ProxKind::LinearPlusIndicatorNonneg { c } if b.clone() + c[i].clone() >= zero => Ok(zero),
        _ => unbounded(),
    }
}

/// Random diagonal quadratic plus a default member of `family`.
pub fn random_composite<T: Scalar>(
    params: &ClassParams<T>,
    dim: usize,
    family: ProxFamily,
    seed: u64,
) -> Result<CompositeProblem<T>> {
    let f = random_instance(params, dim, seed)?;
    CompositeProblem::new(f, family.instantiate(dim))
}
