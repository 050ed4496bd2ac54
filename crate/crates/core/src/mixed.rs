//! Conversions between measures under strong convexity, and the mixed
//! bounds obtained by composing them with the per-measure rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pgm::{IterateRecord, IterateTrace};
use crate::rates::{bound_lookup, BoundTable, ClassParams, MeasureKind};
use crate::scalar::{max_of, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureTriple<T> {
    pub dist_sq: T,
    pub func_gap: T,
    pub residual_grad_sq: T,
}

impl<T: Scalar> MeasureTriple<T> {
    /// `None` when a record lacks one of the measures.
    pub fn from_record(rec: &IterateRecord<T>) -> Option<Self> {
        Some(Self {
            dist_sq: rec.measures.dist_sq.clone()?,
            func_gap: rec.measures.func_gap.clone()?,
            residual_grad_sq: rec.measures.residual_grad_sq.clone()?,
        })
    }
}

/// Signed margin of an inequality `lhs <= rhs`, with the magnitude used to
/// make tolerances dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct Slack<T> {
    pub value: T,
    pub scale: T,
}

impl<T: Scalar> Slack<T> {
    fn new(lhs: T, rhs: T) -> Self {
        let scale = max_of(&lhs.abs(), &rhs.abs());
        Self { value: rhs - lhs, scale }
    }

    /// `value / scale`, or `value` itself when both sides vanish.
    pub fn normalized(&self) -> T {
        if self.scale.is_zero() {
            self.value.clone()
        } else {
            self.value.clone() / self.scale.clone()
        }
    }

    pub fn holds(&self, rel_tol: &T) -> bool {
        self.value >= -(rel_tol.clone() * self.scale.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conversion {
    /// `dist_sq <= residual_grad_sq / mu^2`
    ResidualToDistance,
    /// `func_gap <= residual_grad_sq / (2 mu)`
    ResidualToFuncGap,
    /// `dist_sq <= 2 func_gap / mu`
    FuncGapToDistance,
}

/// Slacks of the three conversion inequalities at one point.
pub fn check_proposition<T: Scalar>(
    triple: &MeasureTriple<T>,
    params: &ClassParams<T>,
) -> Result<Vec<(Conversion, Slack<T>)>> {
    params.require_strongly_convex()?;
    let mu = params.mu().clone();
    let two = T::two();
    let t = triple;
    Ok(vec![
        (
            Conversion::ResidualToDistance,
            Slack::new(t.dist_sq.clone(), t.residual_grad_sq.clone() / (mu.clone() * mu.clone())),
        ),
        (
            Conversion::ResidualToFuncGap,
            Slack::new(t.func_gap.clone(), t.residual_grad_sq.clone() / (two.clone() * mu.clone())),
        ),
        (
            Conversion::FuncGapToDistance,
            Slack::new(t.dist_sq.clone(), two * t.func_gap.clone() / mu),
        ),
    ])
}

/// `B * m_init(0) - m_final(k)` for the tabulated factor `B`.
///
/// The trace must use one fixed step inside `[0, 2/L]`.
pub fn check_mixed_bound<T: Scalar>(
    trace: &IterateTrace<T>,
    init: MeasureKind,
    fin: MeasureKind,
    k: usize,
    table: BoundTable,
) -> Result<Slack<T>> {
    let params = trace.problem.params();
    params.require_strongly_convex()?;
    let gamma = trace
        .steps
        .first()
        .ok_or_else(|| Error::InvalidArgument("trace has no steps".into()))?;
    if trace.steps.iter().any(|g| g != gamma) {
        return Err(Error::InvalidArgument("trace does not use a fixed step".into()));
    }
    if !params.step_in_theory(gamma) {
        return Err(Error::InvalidArgument(format!("step {gamma} outside [0, 2/L]")));
    }
    let k32 = u32::try_from(k).map_err(|_| Error::InvalidArgument("k too large".into()))?;
    let bound = bound_lookup(init, fin, params, gamma, k32, table)?;
    let factor = bound
        .value()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("unbounded cell has no slack".into()))?;
    let initial = trace.measure(init, 0)?.clone();
    let fin_value = trace.measure(fin, k)?.clone();
    Ok(Slack::new(fin_value, factor * initial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgm::run;
    use crate::prox::ProxFunction;
    use crate::smooth::{CompositeProblem, SmoothFunction};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn triple_at(f: SmoothFunction<Q>, x: Vec<Q>) -> MeasureTriple<Q> {
        let prob = CompositeProblem::new(f, ProxFunction::zero(x.len())).unwrap();
        let trace = run(&prob, &q(1, 100), &x, 0, None).unwrap();
        MeasureTriple::from_record(&trace.records[0]).unwrap()
    }

    #[test]
    fn proposition_examples() {
        let p = ClassParams::new(q(1, 2), q(3, 1)).unwrap();
        let at_opt = triple_at(SmoothFunction::f_mu(&p, 2), vec![q(0, 1), q(0, 1)]);
        for (_, s) in check_proposition(&at_opt, &p).unwrap() {
            assert_eq!(s.value, q(0, 1));
        }
        let tight = triple_at(SmoothFunction::f_mu(&p, 2), vec![q(1, 1), q(0, 1)]);
        assert_eq!(tight.func_gap, q(1, 4));
        assert_eq!(tight.residual_grad_sq, q(1, 4));
        for (_, s) in check_proposition(&tight, &p).unwrap() {
            assert_eq!(s.value, q(0, 1));
        }
        let loose = triple_at(SmoothFunction::f_l(&p, 2), vec![q(1, 1), q(0, 1)]);
        for (_, s) in check_proposition(&loose, &p).unwrap() {
            assert!(s.value > q(0, 1));
        }
        let flat = ClassParams::new(q(0, 1), q(1, 1)).unwrap();
        assert_eq!(check_proposition(&tight, &flat), Err(Error::RequiresStrongConvexity));
    }

    fn trace_for(f: SmoothFunction<Q>, gamma: Q, n: usize) -> IterateTrace<Q> {
        let prob = CompositeProblem::new(f, ProxFunction::zero(2)).unwrap();
        run(&prob, &gamma, &[q(1, 1), q(1, 2)], n, None).unwrap()
    }

    const MIXED: [(MeasureKind, MeasureKind); 3] = [
        (MeasureKind::FuncGap, MeasureKind::DistanceSq),
        (MeasureKind::ResidualGradSq, MeasureKind::DistanceSq),
        (MeasureKind::ResidualGradSq, MeasureKind::FuncGap),
    ];

    #[test]
    fn f_mu_traces_are_tight() {
        let p = ClassParams::new(q(1, 1), q(4, 1)).unwrap();
        for gamma in [q(1, 10), q(1, 4), q(2, 5)] {
            let trace = trace_for(SmoothFunction::f_mu(&p, 2), gamma, 3);
            for (a, b) in MIXED {
                let s = check_mixed_bound(&trace, a, b, 3, BoundTable::Proven).unwrap();
                assert_eq!(s.value, q(0, 1));
            }
        }
    }

    #[test]
    fn large_step_is_conservative() {
        let p = ClassParams::new(q(1, 1), q(4, 1)).unwrap();
        let trace = trace_for(SmoothFunction::f_l(&p, 2), q(19, 40), 3);
        for (a, b) in MIXED {
            let s = check_mixed_bound(&trace, a, b, 3, BoundTable::Proven).unwrap();
            assert!(s.value > q(0, 1));
        }
    }

    #[test]
    fn missing_initial_subgradient_is_reported() {
        let p = ClassParams::new(q(1, 1), q(2, 1)).unwrap();
        let f = SmoothFunction::diagonal(vec![q(1, 1)], vec![q(1, 15)], p).unwrap();
        let prob = CompositeProblem::new(f, ProxFunction::nonneg(1)).unwrap();
        let trace = run(&prob, &q(1, 2), &[q(1, 1)], 2, None).unwrap();
        assert_eq!(
            check_mixed_bound(&trace, MeasureKind::ResidualGradSq, MeasureKind::DistanceSq, 2, BoundTable::Proven),
            Err(Error::MissingInitialSubgradient)
        );
        let s = check_mixed_bound(&trace, MeasureKind::FuncGap, MeasureKind::DistanceSq, 2, BoundTable::Proven).unwrap();
        assert!(s.holds(&q(0, 1)));
    }

    #[test]
    fn slack_normalization() {
        let s = Slack::new(1.0, 3.0);
        assert_eq!(s.normalized(), 2.0 / 3.0);
        assert_eq!(Slack::new(0.0, 0.0).normalized(), 0.0);
        assert!(!Slack::new(1.0 + 1e-6, 1.0).holds(&1e-9));
        assert!(Slack::new(1.0 + 1e-12, 1.0).holds(&1e-9));
    }
}
