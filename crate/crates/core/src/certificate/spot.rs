//! Floating-point evaluation of symbolic expressions on data produced by
//! actual proximal gradient steps, an oracle independent of the algebra.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::{Assignment, ScalarSymbol, SymbolicExpr, VectorSymbol};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pgm::pgm_step;
use crate::prox::ProxFamily;
use crate::rates::ClassParams;
use crate::scalar::Scalar;
use crate::smooth::random_composite;

pub const SPOT_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpotConfig {
    pub mu: f64,
    pub l: f64,
    pub gamma: f64,
    pub family: ProxFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpotStats {
    pub max_abs: f64,
    pub min_value: f64,
    /// Largest `sum |c_t| |t|` over the trials.
    pub scale: f64,
}

fn value_of(v: crate::scalar::ExtReal<f64>) -> Result<f64> {
    v.into_finite().ok_or(Error::OutsideDomain)
}

/// Data of one step `x_k -> x_{k+1}` on a random catalog instance.
pub fn catalog_assignment(config: &SpotConfig, seed: u64) -> Result<Assignment> {
    let params = ClassParams::new(config.mu, config.l)?;
    let problem = random_composite(&params, SPOT_DIM, config.family, seed)?;
    let opt = problem
        .optimum()
        .cloned()
        .ok_or(Error::UnknownOptimum)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let start: Vec<f64> = (0..SPOT_DIM).map(|_| rng.gen_range(-3.0..3.0)).collect();
    // one warm-up step makes x_k feasible with a known subgradient s_k
    let g0 = problem.f().grad(&start)?;
    let (xk, sk) = pgm_step(&problem, &config.gamma, &start, &g0)?;
    let gk = problem.f().grad(&xk)?;
    let (xk1, sk1) = pgm_step(&problem, &config.gamma, &xk, &gk)?;
    let gk1 = problem.f().grad(&xk1)?;
    let gs = problem.f().grad(&opt.x)?;
    let ss: Vec<f64> = gs.iter().map(|v| -v).collect();
    let f = problem.f();
    let h = problem.h();
    let mut a = Assignment::default();
    use VectorSymbol::*;
    for (sym, v) in [
        (X, linalg::sub(&xk, &opt.x)),
        (Xk1, linalg::sub(&xk1, &opt.x)),
        (Gk, gk),
        (Gk1, gk1),
        (Gs, gs),
        (Sk, sk),
        (Sk1, sk1),
        (Ss, ss),
    ] {
        a.vectors.insert(sym, v);
    }
    for (sym, v) in [
        (ScalarSymbol::Fk, f.value(&xk)?),
        (ScalarSymbol::Fk1, f.value(&xk1)?),
        (ScalarSymbol::Fs, f.value(&opt.x)?),
        (ScalarSymbol::Hk, value_of(h.value(&xk)?)?),
        (ScalarSymbol::Hk1, value_of(h.value(&xk1)?)?),
        (ScalarSymbol::Hs, value_of(h.value(&opt.x)?)?),
    ] {
        a.scalars.insert(sym, v);
    }
    Ok(a)
}

fn magnitude(expr: &SymbolicExpr<BigRational>, a: &Assignment) -> f64 {
    let scalars: f64 = expr
        .scalar_terms()
        .map(|(s, c)| {
            let v = if *s == ScalarSymbol::One { 1.0 } else { a.scalars.get(s).copied().unwrap_or(0.0) };
            (c.to_f64() * v).abs()
        })
        .sum();
    let gram: f64 = expr
        .gram_terms()
        .map(|((u, v), c)| match (a.vectors.get(u), a.vectors.get(v)) {
            (Some(x), Some(y)) => (c.to_f64() * linalg::dot(x, y)).abs(),
            _ => 0.0,
        })
        .sum();
    scalars + gram
}

/// Evaluates `expr` on `trials` catalog steps.
pub fn numeric_spot_check(
    expr: &SymbolicExpr<BigRational>,
    config: &SpotConfig,
    trials: usize,
    seed: u64,
) -> Result<SpotStats> {
    let mut stats = SpotStats {
        max_abs: 0.0,
        min_value: f64::INFINITY,
        scale: 0.0,
    };
    for t in 0..trials {
        let a = catalog_assignment(config, seed.wrapping_add(t as u64))?;
        let v = expr.evaluate(&a);
        stats.max_abs = stats.max_abs.max(v.abs());
        stats.min_value = stats.min_value.min(v);
        stats.scale = stats.scale.max(magnitude(expr, &a));
    }
    if trials == 0 {
        stats.min_value = 0.0;
    }
    Ok(stats)
}
