//! Class constants and the closed-form worst-case rates of the proximal
//! gradient method: the contraction factor `rho(gamma)`, the optimal step,
//! and the nine-cell bound tables for every (initial, final) measure pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{max_of, powi, Scalar};

/// Function-class constants `0 <= mu <= L`, `L > 0`.
///
/// `mu = 0` encodes the smooth convex limit and is only accepted by the
/// operations that have a limit table for it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassParams<T> {
    mu: T,
    l: T,
}

impl<T: Scalar> ClassParams<T> {
    pub fn new(mu: T, l: T) -> Result<Self> {
        if mu < T::zero() {
            return Err(Error::InvalidParams(format!("mu = {mu} must be >= 0")));
        }
        if l <= T::zero() {
            return Err(Error::InvalidParams(format!("L = {l} must be > 0")));
        }
        if mu > l {
            return Err(Error::InvalidParams(format!("mu = {mu} exceeds L = {l}")));
        }
        Ok(Self { mu, l })
    }

    pub fn mu(&self) -> &T {
        &self.mu
    }

    pub fn l(&self) -> &T {
        &self.l
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.mu > T::zero()
    }

    pub fn require_strongly_convex(&self) -> Result<()> {
        if self.is_strongly_convex() {
            Ok(())
        } else {
            Err(Error::RequiresStrongConvexity)
        }
    }

    /// Short step `1/L`.
    pub fn short_step(&self) -> T {
        T::one() / self.l.clone()
    }

    /// Largest step covered by the theory, `2/L`.
    pub fn max_step(&self) -> T {
        T::two() / self.l.clone()
    }

    /// `2/(L+mu)`, where the two branches of `rho` meet.
    pub fn optimal_step(&self) -> T {
        T::two() / (self.l.clone() + self.mu.clone())
    }

    /// `0 <= gamma <= 2/L`.
    pub fn step_in_theory(&self, gamma: &T) -> bool {
        *gamma >= T::zero() && *gamma <= self.max_step()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ClassParams<U> {
        ClassParams {
            mu: f(&self.mu),
            l: f(&self.l),
        }
    }
}

/// Per-iteration contraction factor together with its square.
#[derive(Debug, Clone, PartialEq)]
pub struct Rate<T> {
    pub rho: T,
    pub rho_squared: T,
}

impl<T: Scalar> Rate<T> {
    fn from_rho(rho: T) -> Self {
        let rho_squared = rho.clone() * rho.clone();
        Self { rho, rho_squared }
    }

    /// `rho^(2k)`
    pub fn squared_pow(&self, k: u32) -> T {
        powi(&self.rho_squared, k as i64)
    }
}

/// Which term of `max{|1 - L gamma|, |1 - mu gamma|}` is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `|1 - mu gamma|` dominates (small steps).
    Mu,
    /// `|1 - L gamma|` dominates (large steps).
    L,
    /// Both terms coincide.
    Both,
}

/// `rho(gamma) = max{|1 - L gamma|, |1 - mu gamma|}`. Total in `gamma`.
pub fn rho<T: Scalar>(params: &ClassParams<T>, gamma: &T) -> Rate<T> {
    let (l_term, mu_term) = branch_terms(params, gamma);
    Rate::from_rho(max_of(&l_term, &mu_term))
}

pub fn rho_branch<T: Scalar>(params: &ClassParams<T>, gamma: &T) -> Branch {
    let (l_term, mu_term) = branch_terms(params, gamma);
    if l_term.near(&mu_term) {
        Branch::Both
    } else if mu_term > l_term {
        Branch::Mu
    } else {
        Branch::L
    }
}

fn branch_terms<T: Scalar>(params: &ClassParams<T>, gamma: &T) -> (T, T) {
    let l_term = (T::one() - params.l().clone() * gamma.clone()).abs();
    let mu_term = (T::one() - params.mu().clone() * gamma.clone()).abs();
    (l_term, mu_term)
}

/// `gamma* = 2/(L+mu)` and `rho* = (L-mu)/(L+mu)`.
pub fn optimal_step<T: Scalar>(params: &ClassParams<T>) -> (T, Rate<T>) {
    let gamma = params.optimal_step();
    let rho_star = (params.l().clone() - params.mu().clone())
        / (params.l().clone() + params.mu().clone());
    (gamma, Rate::from_rho(rho_star))
}

/// Performance measures. Norms are always squared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// `||x - x*||^2`
    DistanceSq,
    /// `F(x) - F*`
    FuncGap,
    /// `||grad f(x) + s||^2` with `s` the subgradient produced by the prox step.
    ResidualGradSq,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [
        MeasureKind::DistanceSq,
        MeasureKind::FuncGap,
        MeasureKind::ResidualGradSq,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            MeasureKind::DistanceSq => "dist_sq",
            MeasureKind::FuncGap => "func_gap",
            MeasureKind::ResidualGradSq => "residual_grad_sq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Matching upper and lower bounds for every admissible step.
    ProvenTight,
    /// Proven upper bound, tight for `gamma <= 2/(L+mu)` only.
    ProvenUpperTightForSmallStep,
    /// Attained lower bound believed to be the exact worst case.
    ConjecturedTight,
    /// Textbook bound obtained by converting the distance rate; never tight.
    ClassicalNonTight,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundKind<T> {
    Finite(T),
    Unbounded,
}

/// Factor multiplying the initial measure, with its status.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue<T> {
    pub kind: BoundKind<T>,
    pub provenance: Provenance,
}

impl<T: Scalar> BoundValue<T> {
    fn finite(value: T, provenance: Provenance) -> Self {
        Self {
            kind: BoundKind::Finite(value),
            provenance,
        }
    }

    fn unbounded(provenance: Provenance) -> Self {
        Self {
            kind: BoundKind::Unbounded,
            provenance,
        }
    }

    pub fn value(&self) -> Option<&T> {
        match &self.kind {
            BoundKind::Finite(v) => Some(v),
            BoundKind::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self.kind, BoundKind::Unbounded)
    }
}

/// Which table to consult for cells without a proven global bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundTable {
    /// Only proven bounds; the three lower-triangle cells have none.
    Proven,
    /// Also the conjectured-exact values available at `gamma = 1/L`.
    Conjectured,
}

/// Worst-case factor `B` such that `final_k <= B * initial_0`.
///
/// With `mu = 0` only the `gamma = 1/L` limit table exists; any other step
/// is rejected, as is `k = 0`.
pub fn bound_lookup<T: Scalar>(
    init: MeasureKind,
    fin: MeasureKind,
    params: &ClassParams<T>,
    gamma: &T,
    k: u32,
    table: BoundTable,
) -> Result<BoundValue<T>> {
    use MeasureKind::*;
    use Provenance::*;

    if k == 0 {
        return Err(Error::ZeroIterations);
    }
    let short = gamma.near(&params.short_step());
    if !params.is_strongly_convex() {
        if !short {
            return Err(Error::NoKnownBound { init, fin });
        }
        return Ok(smooth_convex_limit(init, fin, params.l(), k));
    }

    let mu = params.mu().clone();
    let rate = rho(params, gamma);
    let contraction = rate.squared_pow(k);
    let two = T::two();
    let bound = match (init, fin) {
        (a, b) if a == b => BoundValue::finite(contraction, ProvenTight),
        (FuncGap, DistanceSq) => {
            BoundValue::finite(two * contraction / mu, ProvenUpperTightForSmallStep)
        }
        (ResidualGradSq, DistanceSq) => {
            BoundValue::finite(contraction / (mu.clone() * mu), ProvenUpperTightForSmallStep)
        }
        (ResidualGradSq, FuncGap) => {
            BoundValue::finite(contraction / (two * mu), ProvenUpperTightForSmallStep)
        }
        _ => {
            if table != BoundTable::Conjectured || !short {
                return Err(Error::NoKnownBound { init, fin });
            }
            // rho = 1 - mu/L at gamma = 1/L
            let inv_k = powi(&rate.rho, -(k as i64));
            let inv_2k = inv_k.clone() * inv_k.clone();
            let value = match (init, fin) {
                (DistanceSq, FuncGap) => mu / (two * (inv_2k - T::one())),
                (DistanceSq, ResidualGradSq) => {
                    let d = inv_k - T::one();
                    mu.clone() * mu / (d.clone() * d)
                }
                (FuncGap, ResidualGradSq) => two * mu / (inv_2k - T::one()),
                _ => unreachable!("upper-triangle cells handled above"),
            };
            BoundValue::finite(value, ConjecturedTight)
        }
    };
    Ok(bound)
}

/// Limit `mu -> 0` of the `gamma = 1/L` table.
fn smooth_convex_limit<T: Scalar>(init: MeasureKind, fin: MeasureKind, l: &T, k: u32) -> BoundValue<T> {
    use MeasureKind::*;
    use Provenance::*;
    let kk = T::from_int(k as i64);
    match (init, fin) {
        (a, b) if a == b => BoundValue::finite(T::one(), ProvenTight),
        (FuncGap, DistanceSq) | (ResidualGradSq, DistanceSq) | (ResidualGradSq, FuncGap) => {
            BoundValue::unbounded(ConjecturedTight)
        }
        (DistanceSq, FuncGap) => {
            BoundValue::finite(l.clone() / (T::from_int(4) * kk), ConjecturedTight)
        }
        (DistanceSq, ResidualGradSq) => {
            BoundValue::finite(l.clone() * l.clone() / (kk.clone() * kk), ConjecturedTight)
        }
        (FuncGap, ResidualGradSq) => BoundValue::finite(l.clone() / kk, ConjecturedTight),
        _ => unreachable!(),
    }
}

/// Bounds obtained from the distance rate through `L`-smoothness and
/// `mu`-strong convexity: `(L/mu) rho^(2k)` for the function gap and
/// `(L/mu) rho^k` for the (unsquared) residual gradient norm ratio.
pub fn classical_nontight_bound<T: Scalar>(
    params: &ClassParams<T>,
    gamma: &T,
    k: u32,
    measure: MeasureKind,
) -> Result<BoundValue<T>> {
    params.require_strongly_convex()?;
    let factor = params.l().clone() / params.mu().clone();
    let rate = rho(params, gamma);
    let value = match measure {
        MeasureKind::FuncGap => factor * rate.squared_pow(k),
        MeasureKind::ResidualGradSq => factor * powi(&rate.rho, k as i64),
        MeasureKind::DistanceSq => {
            return Err(Error::InvalidArgument(
                "the classical comparison bound covers func_gap and residual only".into(),
            ))
        }
    };
    Ok(BoundValue::finite(value, Provenance::ClassicalNonTight))
}
