//! The proximal gradient method with instrumented traces.
//!
//! Each step computes `x+ = prox(gamma, x - gamma g)` and the subgradient
//! `s+ = (x - x+)/gamma - g` of `h` at `x+`. Records store `x`, `g`, `s` and
//! the three squared measures so that per-step ratios can be read off
//! directly.

use crate::error::{Error, Result};
use crate::linalg::{self, check_dim};
use crate::rates::MeasureKind;
use crate::scalar::{ExtReal, Real, Scalar};
use crate::smooth::CompositeProblem;

#[derive(Debug, Clone, PartialEq)]
pub struct Measures<T> {
    pub dist_sq: Option<T>,
    pub func_gap: Option<T>,
    /// `None` only at record 0 when no initial subgradient was available.
    pub residual_grad_sq: Option<T>,
}

impl<T> Measures<T> {
    pub fn get(&self, kind: MeasureKind) -> Option<&T> {
        match kind {
            MeasureKind::DistanceSq => self.dist_sq.as_ref(),
            MeasureKind::FuncGap => self.func_gap.as_ref(),
            MeasureKind::ResidualGradSq => self.residual_grad_sq.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterateRecord<T> {
    pub x: Vec<T>,
    pub grad_f: Vec<T>,
    pub s: Option<Vec<T>>,
    pub objective: ExtReal<T>,
    pub measures: Measures<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    Fixed,
    ExactLineSearch,
    ResidualLineSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterateTrace<T> {
    pub records: Vec<IterateRecord<T>>,
    /// Step used to go from record `k` to record `k + 1`.
    pub steps: Vec<T>,
    /// `true` where the step exceeds `2/L`.
    pub outside_theory: Vec<bool>,
    pub rule: StepRule,
    pub problem: CompositeProblem<T>,
}

impl<T: Scalar> IterateTrace<T> {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn any_outside_theory(&self) -> bool {
        self.outside_theory.iter().any(|b| *b)
    }

    /// Measure `kind` at record `k`, with the error explaining its absence.
    pub fn measure(&self, kind: MeasureKind, k: usize) -> Result<&T> {
        let rec = self
            .records
            .get(k)
            .ok_or_else(|| Error::InvalidArgument(format!("record {k} beyond horizon")))?;
        rec.measures.get(kind).ok_or(match kind {
            MeasureKind::ResidualGradSq => Error::MissingInitialSubgradient,
            _ => Error::UnknownOptimum,
        })
    }

    /// `m_final(k) / m_init(0)`
    pub fn ratio(&self, init: MeasureKind, fin: MeasureKind, k: usize) -> Result<T> {
        let den = self.measure(init, 0)?;
        let num = self.measure(fin, k)?;
        Ok(num.clone() / den.clone())
    }

    /// Largest squared deviation from the step equations over the trace.
    pub fn reconstruction_error(&self) -> Result<T> {
        let mut worst = T::zero();
        for (k, gamma) in self.steps.iter().enumerate() {
            let (cur, next) = (&self.records[k], &self.records[k + 1]);
            let err = match self.rule {
                StepRule::ResidualLineSearch => {
                    let x = linalg::axpy(&cur.x, &-gamma.clone(), &cur.grad_f);
                    linalg::dist_sq(&x, &next.x)
                }
                _ => {
                    let (x, s) = pgm_step(&self.problem, gamma, &cur.x, &cur.grad_f)?;
                    let s_next = next.s.as_ref().ok_or(Error::MissingInitialSubgradient)?;
                    linalg::dist_sq(&x, &next.x) + linalg::dist_sq(&s, s_next)
                }
            };
            worst = crate::scalar::max_of(&worst, &err);
        }
        Ok(worst)
    }
}

/// One step from `x` with gradient `grad`: returns `(x+, s+)`.
pub fn pgm_step<T: Scalar>(
    problem: &CompositeProblem<T>,
    gamma: &T,
    x: &[T],
    grad: &[T],
) -> Result<(Vec<T>, Vec<T>)> {
    if *gamma <= T::zero() {
        return Err(Error::NonPositiveStep(gamma.to_string()));
    }
    check_dim(grad, x.len())?;
    let y = linalg::axpy(x, &-gamma.clone(), grad);
    let x_next = problem.h().prox(gamma, &y)?;
    let s_next = x
        .iter()
        .zip(&x_next)
        .zip(grad)
        .map(|((a, b), g)| (a.clone() - b.clone()) / gamma.clone() - g.clone())
        .collect();
    Ok((x_next, s_next))
}

/// Subgradient at `x0` closest to `-grad f(x0)`, i.e. the one minimizing the
/// initial residual.
pub fn derive_initial_subgradient<T: Scalar>(problem: &CompositeProblem<T>, x0: &[T]) -> Result<Vec<T>> {
    let g = problem.f().grad(x0)?;
    let target: Vec<T> = g.iter().map(|v| -v.clone()).collect();
    problem.h().closest_subgradient(x0, &target)
}

fn membership_tol<T: Scalar>() -> T {
    if T::is_exact() {
        T::zero()
    } else {
        T::from_f64(1e-9).unwrap()
    }
}

fn make_record<T: Scalar>(problem: &CompositeProblem<T>, x: Vec<T>, s: Option<Vec<T>>) -> Result<IterateRecord<T>> {
    let (fv, grad_f) = problem.f().eval_grad(&x)?;
    let objective = problem.h().value(&x)?.add_finite(&fv);
    let residual_grad_sq = s.as_ref().map(|s| linalg::norm_sq(&linalg::add(&grad_f, s)));
    let measures = Measures {
        dist_sq: problem.dist_sq(&x)?,
        func_gap: problem.func_gap(&x)?,
        residual_grad_sq,
    };
    Ok(IterateRecord {
        x,
        grad_f,
        s,
        objective,
        measures,
    })
}

fn first_record<T: Scalar>(
    problem: &CompositeProblem<T>,
    x0: &[T],
    s0: Option<Vec<T>>,
) -> Result<IterateRecord<T>> {
    check_dim(x0, problem.dim())?;
    if !problem.objective(x0)?.is_finite() {
        return Err(Error::InfeasibleStart);
    }
    let s0 = match s0 {
        Some(s) => {
            if !problem.h().subgradient_membership(x0, &s, &membership_tol())? {
                return Err(Error::InvalidArgument("s0 is not a subgradient of h at x0".into()));
            }
            Some(s)
        }
        None if problem.h().is_zero() => Some(linalg::zeros(problem.dim())),
        None => None,
    };
    make_record(problem, x0.to_vec(), s0)
}

/// `n` fixed-step iterations from `x0`.
///
/// Without `s0` the residual measure at record 0 is absent unless `h = 0`.
pub fn run<T: Scalar>(
    problem: &CompositeProblem<T>,
    gamma: &T,
    x0: &[T],
    n: usize,
    s0: Option<Vec<T>>,
) -> Result<IterateTrace<T>> {
    if *gamma <= T::zero() {
        return Err(Error::NonPositiveStep(gamma.to_string()));
    }
    let mut records = vec![first_record(problem, x0, s0)?];
    for _ in 0..n {
        let cur = records.last().expect("nonempty");
        let (x, s) = pgm_step(problem, gamma, &cur.x, &cur.grad_f)?;
        records.push(make_record(problem, x, Some(s))?);
    }
    let outside = *gamma > problem.params().max_step();
    Ok(IterateTrace {
        records,
        steps: vec![gamma.clone(); n],
        outside_theory: vec![outside; n],
        rule: StepRule::Fixed,
        problem: problem.clone(),
    })
}

/// [`run`] with `s0` chosen by [`derive_initial_subgradient`].
pub fn run_with_derived_s0<T: Scalar>(
    problem: &CompositeProblem<T>,
    gamma: &T,
    x0: &[T],
    n: usize,
) -> Result<IterateTrace<T>> {
    check_dim(x0, problem.dim())?;
    if !problem.objective(x0)?.is_finite() {
        return Err(Error::InfeasibleStart);
    }
    let s0 = derive_initial_subgradient(problem, x0)?;
    run(problem, gamma, x0, n, Some(s0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchStep<T> {
    pub gamma: T,
    pub x_next: Vec<T>,
    pub s_next: Vec<T>,
}

const GRID_POINTS: usize = 64;
const MAX_EXPANSIONS: usize = 60;
const MAX_VALLEYS: usize = 8;
const REL_WIDTH: f64 = 1e-12;

/// Step minimizing `phi(gamma) = F(prox(gamma, x - gamma grad f(x)))`.
///
/// Closed form `<g, g>/<g, A g>` when `h = 0`. Otherwise a grid over
/// `(0, 4/mu]` (`4/L` when `mu = 0`) that includes `2/(L+mu)`, bracket
/// expansion when the grid minimum sits on the upper end, and golden-section
/// refinement of every grid valley. The composite profile can be
/// multimodal; the lowest refined point wins.
pub fn exact_line_search_step<T: Real>(problem: &CompositeProblem<T>, x: &[T]) -> Result<LineSearchStep<T>> {
    let g = problem.f().grad(x)?;
    if !problem.objective(x)?.is_finite() {
        return Err(Error::OutsideDomain);
    }
    let params = problem.params();
    if problem.h().is_zero() {
        let gg = linalg::norm_sq(&g);
        if gg.is_zero() {
            let (x_next, s_next) = pgm_step(problem, &params.short_step(), x, &g)?;
            return Ok(LineSearchStep {
                gamma: params.short_step(),
                x_next,
                s_next,
            });
        }
        let curv = problem.f().quad_form(&g)?;
        if curv <= T::zero() {
            return Err(Error::NoClosedFormOptimum("objective unbounded along -grad".into()));
        }
        let gamma = gg / curv;
        let (x_next, s_next) = pgm_step(problem, &gamma, x, &g)?;
        return Ok(LineSearchStep { gamma, x_next, s_next });
    }

    let phi = |gamma: T| -> Result<T> {
        let y = linalg::axpy(x, &-gamma, &g);
        let p = problem.h().prox(&gamma, &y)?;
        problem
            .objective(&p)?
            .into_finite()
            .ok_or(Error::OutsideDomain)
    };
    let four = T::from_int(4);
    let mut upper = if params.is_strongly_convex() {
        four / *params.mu()
    } else {
        four / *params.l()
    };
    let gamma_star = params.optimal_step();
    let mut grid: Vec<T> = (1..=GRID_POINTS)
        .map(|j| upper * T::from_int(j as i64) / T::from_int(GRID_POINTS as i64))
        .collect();
    if gamma_star < upper {
        grid.push(gamma_star);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    let mut values = grid.iter().map(|g| phi(*g)).collect::<Result<Vec<T>>>()?;

    let argmin = |v: &[T]| {
        v.iter()
            .enumerate()
            .fold(0, |best, (i, val)| if *val < v[best] { i } else { best })
    };
    let mut best = argmin(&values);
    let mut expansions = 0;
    while best == grid.len() - 1 {
        if expansions == MAX_EXPANSIONS {
            return Err(Error::LineSearchFailure {
                reason: "no bracket found; phi keeps decreasing".into(),
                best_step: Scalar::to_f64(&grid[best]),
                best_value: Scalar::to_f64(&values[best]),
            });
        }
        upper = upper * T::two();
        grid.push(upper);
        values.push(phi(upper)?);
        best = argmin(&values);
        expansions += 1;
    }

    // phi is piecewise smooth and may have several valleys; refine each
    let mut chosen = (grid[best], values[best]);
    let mut candidates = vec![gamma_star];
    for i in local_minima(&values, MAX_VALLEYS) {
        let lo = if i == 0 { T::zero() } else { grid[i - 1] };
        let hi = grid[(i + 1).min(grid.len() - 1)];
        candidates.push(golden_section(&phi, lo, hi)?);
    }
    for cand in candidates {
        if cand > T::zero() {
            let v = phi(cand)?;
            if v < chosen.1 {
                chosen = (cand, v);
            }
        }
    }
    let gamma = chosen.0;
    let (x_next, s_next) = pgm_step(problem, &gamma, x, &g)?;
    Ok(LineSearchStep { gamma, x_next, s_next })
}

/// Indices of the `max` lowest grid points not above either neighbour.
fn local_minima<T: Real>(values: &[T], max: usize) -> Vec<usize> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| (i == 0 || values[i] <= values[i - 1]) && (i + 1 == n || values[i] <= values[i + 1]))
        .collect();
    idx.sort_by(|a, b| values[*a].partial_cmp(&values[*b]).expect("finite values"));
    idx.truncate(max);
    idx
}

fn golden_section<T: Real>(phi: &impl Fn(T) -> Result<T>, mut a: T, mut b: T) -> Result<T> {
    let inv_phi = (T::from_int(5).sqrt() - T::one()) / T::two();
    let rel = T::from_f64(REL_WIDTH).unwrap();
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = phi(c)?;
    let mut fd = phi(d)?;
    for _ in 0..200 {
        if b - a <= rel * b.abs().max(T::min_positive_value()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d)?;
        }
    }
    Ok((a + b) / T::two())
}

/// `alpha` minimizing `||grad f(x + alpha grad f(x))||` for `h = 0`:
/// `alpha = -<g, A g> / ||A g||^2`. Returns `(alpha, x+)`.
pub fn residual_line_search_step<T: Scalar>(problem: &CompositeProblem<T>, x: &[T]) -> Result<(T, Vec<T>)> {
    if !problem.h().is_zero() {
        return Err(Error::Unsupported(
            "residual line search is implemented for h = 0 only".into(),
        ));
    }
    let g = problem.f().grad(x)?;
    let ag = problem.f().hess_apply(&g)?;
    let den = linalg::norm_sq(&ag);
    if den.is_zero() {
        return Ok((T::zero(), x.to_vec()));
    }
    let alpha = -linalg::dot(&g, &ag) / den;
    let x_next = linalg::axpy(x, &alpha, &g);
    Ok((alpha, x_next))
}

/// `n` exact-line-search steps from `x0`.
pub fn run_exact_line_search<T: Real>(
    problem: &CompositeProblem<T>,
    x0: &[T],
    n: usize,
    s0: Option<Vec<T>>,
) -> Result<IterateTrace<T>> {
    let mut records = vec![first_record(problem, x0, s0)?];
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let cur = records.last().expect("nonempty");
        let step = exact_line_search_step(problem, &cur.x)?;
        records.push(make_record(problem, step.x_next, Some(step.s_next))?);
        steps.push(step.gamma);
    }
    let max = problem.params().max_step();
    let outside_theory = steps.iter().map(|g| *g > max).collect();
    Ok(IterateTrace {
        records,
        steps,
        outside_theory,
        rule: StepRule::ExactLineSearch,
        problem: problem.clone(),
    })
}

/// `n` residual-line-search steps from `x0` (`h = 0`). `steps` holds the
/// equivalent gradient step `-alpha`.
pub fn run_residual_line_search<T: Scalar>(
    problem: &CompositeProblem<T>,
    x0: &[T],
    n: usize,
) -> Result<IterateTrace<T>> {
    if !problem.h().is_zero() {
        return Err(Error::Unsupported(
            "residual line search is implemented for h = 0 only".into(),
        ));
    }
    let mut records = vec![first_record(problem, x0, None)?];
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let cur = records.last().expect("nonempty");
        let (alpha, x) = residual_line_search_step(problem, &cur.x)?;
        records.push(make_record(problem, x, Some(linalg::zeros(problem.dim())))?);
        steps.push(-alpha);
    }
    let max = problem.params().max_step();
    let outside_theory = steps.iter().map(|g| *g > max).collect();
    Ok(IterateTrace {
        records,
        steps,
        outside_theory,
        rule: StepRule::ResidualLineSearch,
        problem: problem.clone(),
    })
}
