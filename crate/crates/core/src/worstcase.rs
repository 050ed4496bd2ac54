//! Instances on which the method attains its worst-case rates.
//!
//! - `f_mu` / `f_L` quadratics attain `rho^(2k)` for every fixed step.
//! - The constrained 1-D problem `min_{x >= 0} (mu/2) x^2 + c x` at
//!   `gamma = 1/L` attains the mixed-measure values with `c` tuned to the
//!   horizon.
//! - `min_{x >= 0} c x` makes three mixed ratios of the smooth convex
//!   limit arbitrarily large as `c -> 0`.
//! - `(mu x_1^2 + L x_2^2)/2` from `(1/mu, 1/L)` attains the exact line
//!   search rate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pgm::{self, IterateTrace};
use crate::prox::ProxFunction;
use crate::rates::{self, ClassParams, MeasureKind};
use crate::scalar::{max_of, powi, Real, Scalar};
use crate::smooth::{CompositeProblem, SmoothFunction};

#[derive(Debug, Clone, PartialEq)]
pub enum Prediction<T> {
    /// `m_final(N) / m_initial(0)`
    Ratio(T),
    /// `m(k+1) / m(k)` at every step.
    PerStepRatio(T),
    /// Witness ratio at the instance's `c`, growing like `c^(-exponent)`.
    Unbounded { witness: T, exponent: u32 },
}

impl<T> Prediction<T> {
    pub fn value(&self) -> &T {
        match self {
            Prediction::Ratio(v) | Prediction::PerStepRatio(v) => v,
            Prediction::Unbounded { witness, .. } => witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepChoice<T> {
    Fixed(T),
    ExactLineSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseSpec<T> {
    pub problem: CompositeProblem<T>,
    pub step: StepChoice<T>,
    pub x0: Vec<T>,
    pub s0: Vec<T>,
    pub horizon: usize,
    pub predicted: BTreeMap<(MeasureKind, MeasureKind), Prediction<T>>,
    /// Iterates `x_0 .. x_N` from the closed-form solution of the recurrence.
    pub closed_form_iterates: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> WorstCaseSpec<T> {
    pub fn run_fixed(&self) -> Result<IterateTrace<T>> {
        match &self.step {
            StepChoice::Fixed(gamma) => {
                pgm::run(&self.problem, gamma, &self.x0, self.horizon, Some(self.s0.clone()))
            }
            StepChoice::ExactLineSearch => Err(Error::Unsupported(
                "exact line search needs a real scalar; use run()".into(),
            )),
        }
    }

    /// Largest squared distance between simulated and closed-form iterates.
    pub fn closed_form_deviation(&self, trace: &IterateTrace<T>) -> Option<T> {
        let cf = self.closed_form_iterates.as_ref()?;
        Some(
            cf.iter()
                .zip(&trace.records)
                .map(|(x, r)| crate::linalg::dist_sq(x, &r.x))
                .fold(T::zero(), |m, v| max_of(&m, &v)),
        )
    }
}

impl<T: Real> WorstCaseSpec<T> {
    pub fn run(&self) -> Result<IterateTrace<T>> {
        match &self.step {
            StepChoice::Fixed(_) => self.run_fixed(),
            StepChoice::ExactLineSearch => {
                pgm::run_exact_line_search(&self.problem, &self.x0, self.horizon, Some(self.s0.clone()))
            }
        }
    }
}

/// `f_mu` when `gamma <= 2/(L+mu)`, else `f_L`; `h = 0`, `x0 = e_1`.
///
/// With `f_mu` the three proven mixed cells are attained as well.
pub fn quadratic_lower_bound<T: Scalar>(
    params: &ClassParams<T>,
    gamma: &T,
    dim: usize,
    horizon: usize,
) -> Result<WorstCaseSpec<T>> {
    use MeasureKind::*;
    params.require_strongly_convex()?;
    if *gamma <= T::zero() {
        return Err(Error::NonPositiveStep(gamma.to_string()));
    }
    if !params.step_in_theory(gamma) {
        return Err(Error::InvalidArgument(format!(
            "step {gamma} outside [0, 2/L]; no attaining instance"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let small = *gamma <= params.optimal_step();
    let f = if small {
        SmoothFunction::f_mu(params, dim)
    } else {
        SmoothFunction::f_l(params, dim)
    };
    let modulus = if small { params.mu() } else { params.l() };
    let factor = T::one() - modulus.clone() * gamma.clone();
    let problem = CompositeProblem::new(f, ProxFunction::zero(dim))?;

    let mut x0 = vec![T::zero(); dim];
    x0[0] = T::one();
    let iterates = (0..=horizon)
        .map(|k| {
            let mut x = vec![T::zero(); dim];
            x[0] = powi(&factor, k as i64);
            x
        })
        .collect();

    let contraction = rates::rho(params, gamma).squared_pow(horizon as u32);
    let mut predicted = BTreeMap::new();
    for m in MeasureKind::ALL {
        predicted.insert((m, m), Prediction::Ratio(contraction.clone()));
    }
    if small {
        let mu = params.mu().clone();
        let two = T::two();
        predicted.insert(
            (FuncGap, DistanceSq),
            Prediction::Ratio(two.clone() * contraction.clone() / mu.clone()),
        );
        predicted.insert(
            (ResidualGradSq, DistanceSq),
            Prediction::Ratio(contraction.clone() / (mu.clone() * mu.clone())),
        );
        predicted.insert(
            (ResidualGradSq, FuncGap),
            Prediction::Ratio(contraction / (two * mu)),
        );
    }
    Ok(WorstCaseSpec {
        problem,
        step: StepChoice::Fixed(gamma.clone()),
        x0,
        s0: vec![T::zero(); dim],
        horizon,
        predicted,
        closed_form_iterates: Some(iterates),
    })
}

/// Mixed-measure cells attained by the constrained 1-D instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedTarget {
    DistToFuncGap,
    DistToResidual,
    FuncGapToResidual,
}

impl MixedTarget {
    pub const ALL: [MixedTarget; 3] = [
        MixedTarget::DistToFuncGap,
        MixedTarget::DistToResidual,
        MixedTarget::FuncGapToResidual,
    ];

    pub fn measures(self) -> (MeasureKind, MeasureKind) {
        use MeasureKind::*;
        match self {
            MixedTarget::DistToFuncGap => (DistanceSq, FuncGap),
            MixedTarget::DistToResidual => (DistanceSq, ResidualGradSq),
            MixedTarget::FuncGapToResidual => (FuncGap, ResidualGradSq),
        }
    }
}

/// `min_{x >= 0} (mu/2) x^2 + c x` run with `gamma = 1/L` from `x0 > 0`.
///
/// With `kappa = mu/L`, `c = mu x0 / ((1-kappa)^(-2N) - 1)` maximizes the
/// final function gap; `c = mu x0 / ((1-kappa)^(-N) - 1)` drives `x_N` onto
/// the constraint with `s_N = 0`, which maximizes the final residual.
pub fn appendix_b_instance<T: Scalar>(
    params: &ClassParams<T>,
    horizon: usize,
    x0: &T,
    target: MixedTarget,
) -> Result<WorstCaseSpec<T>> {
    params.require_strongly_convex()?;
    if params.mu() >= params.l() {
        return Err(Error::DegenerateClass);
    }
    if horizon == 0 {
        return Err(Error::ZeroIterations);
    }
    if *x0 <= T::zero() {
        return Err(Error::InvalidArgument("x0 must be > 0".into()));
    }
    let (mu, l) = (params.mu().clone(), params.l().clone());
    let kappa = mu.clone() / l.clone();
    let r = T::one() - kappa;
    let n = horizon as i64;
    let inv_n = powi(&r, -n);
    let inv_2n = inv_n.clone() * inv_n.clone();
    let one = T::one();
    let two = T::two();
    let c = match target {
        MixedTarget::DistToFuncGap => mu.clone() * x0.clone() / (inv_2n.clone() - one.clone()),
        _ => mu.clone() * x0.clone() / (inv_n.clone() - one.clone()),
    };

    let iterates: Vec<Vec<T>> = (0..=horizon)
        .map(|k| {
            let rk = powi(&r, k as i64);
            (rk * (c.clone() + mu.clone() * x0.clone()) - c.clone()) / mu.clone()
        })
        .map(|x| {
            if x < T::zero() && !x.near(&T::zero()) {
                Err(Error::Construction(format!(
                    "iterate {x} leaves the feasible set; c = {c} is too large"
                )))
            } else {
                Ok(vec![max_of(&x, &T::zero())])
            }
        })
        .collect::<Result<_>>()?;

    let f0 = mu.clone() / two.clone() * x0.clone() * x0.clone() + c.clone() * x0.clone();
    if target != MixedTarget::DistToFuncGap {
        // both expressions for the residual-tightening c must agree
        let lhs = c.clone() * c.clone() * (inv_2n.clone() - one.clone());
        let rhs = two.clone() * mu.clone() * f0;
        if !lhs.near(&rhs) {
            return Err(Error::Construction(format!(
                "inconsistent c: c^2 (rho^(-2N) - 1) = {lhs} but 2 mu (F0 - F*) = {rhs}"
            )));
        }
    }

    let ratio = match target {
        MixedTarget::DistToFuncGap => mu.clone() / (two.clone() * (inv_2n - one.clone())),
        MixedTarget::DistToResidual => {
            let d = inv_n - one.clone();
            mu.clone() * mu.clone() / (d.clone() * d)
        }
        MixedTarget::FuncGapToResidual => two * mu.clone() / (inv_2n - one),
    };

    let f = SmoothFunction::diagonal(vec![mu], vec![c], params.clone())?;
    let problem = CompositeProblem::new(f, ProxFunction::nonneg(1))?;
    let mut predicted = BTreeMap::new();
    predicted.insert(target.measures(), Prediction::Ratio(ratio));
    Ok(WorstCaseSpec {
        problem,
        step: StepChoice::Fixed(params.short_step()),
        x0: vec![x0.clone()],
        s0: vec![T::zero()],
        horizon,
        predicted,
        closed_form_iterates: Some(iterates),
    })
}

/// `min_{x >= 0} c x` declared in the smooth convex class with constant `L`,
/// run with `gamma = 1/L` from `x0 >= 0`.
///
/// For `x0 > 0` the three mixed ratios without a bound are recorded as
/// witnesses: `x_N^2/(c x0)`, `x_N^2/c^2` and `x_N/c`.
pub fn unbounded_family<T: Scalar>(c: &T, l: &T, horizon: usize, x0: &T) -> Result<WorstCaseSpec<T>> {
    use MeasureKind::*;
    if *c <= T::zero() {
        return Err(Error::InvalidArgument("c must be > 0".into()));
    }
    if *x0 < T::zero() {
        return Err(Error::InfeasibleStart);
    }
    let params = ClassParams::new(T::zero(), l.clone())?;
    let gamma = params.short_step();
    let f = SmoothFunction::diagonal(vec![T::zero()], vec![c.clone()], params)?;
    let problem = CompositeProblem::new(f, ProxFunction::nonneg(1))?;
    let iterates: Vec<Vec<T>> = (0..=horizon)
        .map(|k| {
            let x = x0.clone() - T::from_int(k as i64) * c.clone() * gamma.clone();
            vec![max_of(&x, &T::zero())]
        })
        .collect();
    let s0 = if x0.is_zero() { vec![-c.clone()] } else { vec![T::zero()] };

    let mut predicted = BTreeMap::new();
    if !x0.is_zero() {
        let xn = iterates[horizon][0].clone();
        predicted.insert(
            (FuncGap, DistanceSq),
            Prediction::Unbounded {
                witness: xn.clone() * xn.clone() / (c.clone() * x0.clone()),
                exponent: 1,
            },
        );
        predicted.insert(
            (ResidualGradSq, DistanceSq),
            Prediction::Unbounded {
                witness: xn.clone() * xn.clone() / (c.clone() * c.clone()),
                exponent: 2,
            },
        );
        predicted.insert(
            (ResidualGradSq, FuncGap),
            Prediction::Unbounded {
                witness: xn / c.clone(),
                exponent: 1,
            },
        );
    }
    Ok(WorstCaseSpec {
        problem,
        step: StepChoice::Fixed(gamma),
        x0: vec![x0.clone()],
        s0,
        horizon,
        predicted,
        closed_form_iterates: Some(iterates),
    })
}

/// `(mu x_1^2 + L x_2^2)/2` from `(1/mu, 1/L)` under exact line search.
///
/// Every step uses `gamma = 2/(L+mu)` and maps `x_k` to
/// `rho*^k (1/mu, (-1)^k / L)`. With `mu = L` the first step lands on the
/// optimum and the predicted ratio is zero.
pub fn els_worst_quadratic<T: Scalar>(params: &ClassParams<T>, horizon: usize) -> Result<WorstCaseSpec<T>> {
    params.require_strongly_convex()?;
    let (mu, l) = (params.mu().clone(), params.l().clone());
    let x0 = vec![T::one() / mu.clone(), T::one() / l.clone()];
    let mut spec = els_worst_quadratic_from(params, x0, horizon)?;
    let (_, rate) = rates::optimal_step(params);
    let iterates = (0..=horizon)
        .map(|k| {
            let scale = powi(&rate.rho, k as i64);
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            vec![scale.clone() / mu.clone(), sign * scale / l.clone()]
        })
        .collect();
    spec.closed_form_iterates = Some(iterates);
    spec.predicted.insert(
        (MeasureKind::FuncGap, MeasureKind::FuncGap),
        Prediction::PerStepRatio(rate.rho_squared),
    );
    Ok(spec)
}

/// Same quadratic from an arbitrary start; no prediction is attached.
pub fn els_worst_quadratic_from<T: Scalar>(
    params: &ClassParams<T>,
    x0: Vec<T>,
    horizon: usize,
) -> Result<WorstCaseSpec<T>> {
    params.require_strongly_convex()?;
    crate::linalg::check_dim(&x0, 2)?;
    let f = SmoothFunction::diagonal(
        vec![params.mu().clone(), params.l().clone()],
        vec![T::zero(), T::zero()],
        params.clone(),
    )?;
    let problem = CompositeProblem::new(f, ProxFunction::zero(2))?;
    Ok(WorstCaseSpec {
        problem,
        step: StepChoice::ExactLineSearch,
        x0,
        s0: vec![T::zero(), T::zero()],
        horizon,
        predicted: BTreeMap::new(),
        closed_form_iterates: None,
    })
}
