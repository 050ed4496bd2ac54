//! The three rate certificates: multipliers on interpolation inequalities
//! whose weighted sum equals the rate inequality plus a sum of squares.

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::expr::{LinComb, ScalarSymbol, SymbolicExpr, VectorSymbol};
use super::field::Field;
use super::interp::{interp_convex, interp_smooth, Point};
use super::poly::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::rates::ClassParams;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `|x_{k+1} - x*|^2 <= rho^2 |x_k - x*|^2`
    Distance,
    /// `|g_{k+1} + s_{k+1}|^2 <= rho^2 |g_k + s_k|^2`
    Residual,
    /// `F(x_{k+1}) - F* <= rho^2 (F(x_k) - F*)`
    FuncValue,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Distance, Theorem::Residual, Theorem::FuncValue];
}

/// Branch of `rho(gamma)`: `1 - gamma mu` below `2/(L+mu)`, `gamma L - 1` above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SmallStep,
    LargeStep,
}

impl Regime {
    pub const ALL: [Regime; 2] = [Regime::SmallStep, Regime::LargeStep];

    /// Regimes valid at `gamma`; both at `2/(L+mu)`.
    pub fn valid_for(params: &ClassParams<BigRational>, gamma: &BigRational) -> Vec<Regime> {
        let opt = params.optimal_step();
        if *gamma < opt {
            vec![Regime::SmallStep]
        } else if *gamma > opt {
            vec![Regime::LargeStep]
        } else {
            vec![Regime::SmallStep, Regime::LargeStep]
        }
    }
}

/// Deliberate corruption of a certificate, for sensitivity tests.
#[derive(Debug, Clone, PartialEq)]
pub enum Mutation {
    Multiplier { index: usize, delta: BigRational },
    SosCoefficient { index: usize, delta: BigRational },
    /// Flips the sign of the regime factor `beta`; no effect where `beta = 0`.
    NegateBeta,
}

#[derive(Debug, Clone)]
pub struct WeightedInequality<F> {
    pub name: String,
    pub weight: F,
    pub inequality: SymbolicExpr<F>,
}

#[derive(Debug, Clone)]
pub struct SosTerm<F> {
    pub coefficient: F,
    pub combination: LinComb<F>,
}

#[derive(Debug, Clone)]
pub struct Certificate<F> {
    pub theorem: Theorem,
    pub regime: Regime,
    pub multipliers: Vec<WeightedInequality<F>>,
    /// Nonnegative iff the claimed rate holds.
    pub target: SymbolicExpr<F>,
    pub sos: Vec<SosTerm<F>>,
    /// Auxiliary quantities whose sign the proof relies on.
    pub side_conditions: Vec<(String, F)>,
}

impl<F: Field> Certificate<F> {
    pub fn weighted_sum(&self) -> SymbolicExpr<F> {
        self.multipliers
            .iter()
            .fold(SymbolicExpr::zero(), |acc, m| acc.add(&m.inequality.scale(&m.weight)))
    }

    pub fn sos_sum(&self) -> SymbolicExpr<F> {
        self.sos.iter().fold(SymbolicExpr::zero(), |acc, t| {
            acc.add(&SymbolicExpr::norm_sq(&t.combination).scale(&t.coefficient))
        })
    }

    /// `sum lambda_i ineq_i + sum c_j |v_j|^2 - target`; zero for a valid proof.
    pub fn residual(&self) -> SymbolicExpr<F> {
        self.weighted_sum().add(&self.sos_sum()).sub(&self.target)
    }
}

/// Rational inputs of a certificate, lifted into the coefficient field.
struct Consts<F> {
    mu: F,
    l: F,
    gamma: F,
    one: F,
    two: F,
}

impl<F: Field> Consts<F> {
    fn new(params: &ClassParams<BigRational>, gamma: F) -> Self {
        let one = F::one();
        Self {
            mu: F::from_rational(params.mu()),
            l: F::from_rational(params.l()),
            gamma,
            two: one.clone() + one.clone(),
            one,
        }
    }

    fn rho(&self, regime: Regime) -> F {
        match regime {
            Regime::SmallStep => self.one.clone() - self.gamma.clone() * self.mu.clone(),
            Regime::LargeStep => self.l.clone() * self.gamma.clone() - self.one.clone(),
        }
    }

    /// `2 - gamma (L + mu)` or its negative, nonnegative inside the regime.
    fn beta(&self, regime: Regime) -> F {
        let b = self.two.clone() - self.gamma.clone() * (self.l.clone() + self.mu.clone());
        match regime {
            Regime::SmallStep => b,
            Regime::LargeStep => -b,
        }
    }

    fn l_minus_mu(&self) -> F {
        self.l.clone() - self.mu.clone()
    }
}

fn alpha_in<F: Field>(c: &Consts<F>, regime: Regime) -> F {
    let (g, l, mu, two) = (c.gamma.clone(), c.l.clone(), c.mu.clone(), c.two.clone());
    match regime {
        Regime::SmallStep => {
            let gm2 = g.clone() * mu.clone() - two.clone();
            -(g.clone() * g * l.clone() * l.clone() * mu.clone()
                + two * l * gm2.clone()
                + mu * gm2.clone() * gm2)
        }
        Regime::LargeStep => {
            let l2 = l.clone() * l.clone();
            let m2 = mu.clone() * mu.clone();
            -(two.clone() * l2.clone()) - two.clone() * m2.clone()
                + two * l.clone() * mu
                + g.clone() * l2 * l.clone()
                + g * l * m2
        }
    }
}

/// `alpha(gamma)` of the function-value certificate in the small-step regime.
pub fn alpha_small(params: &ClassParams<BigRational>, gamma: &BigRational) -> BigRational {
    alpha_in(&Consts::new(params, gamma.clone()), Regime::SmallStep)
}

/// `alpha(gamma)` of the function-value certificate in the large-step regime.
pub fn alpha_large(params: &ClassParams<BigRational>, gamma: &BigRational) -> BigRational {
    alpha_in(&Consts::new(params, gamma.clone()), Regime::LargeStep)
}

fn smooth<F: Field>(
    name: &str,
    weight: F,
    i: Point,
    j: Point,
    params: &ClassParams<BigRational>,
    gamma: &F,
) -> Result<WeightedInequality<F>> {
    Ok(WeightedInequality {
        name: format!("{name}: f interpolation ({}, {})", i.label(), j.label()),
        weight,
        inequality: interp_smooth(i, j, params, gamma)?,
    })
}

fn convex<F: Field>(name: &str, weight: F, i: Point, j: Point, gamma: &F) -> WeightedInequality<F> {
    WeightedInequality {
        name: format!("{name}: h interpolation ({}, {})", i.label(), j.label()),
        weight,
        inequality: interp_convex(i, j, gamma),
    }
}

fn var<F: Field>(v: VectorSymbol) -> LinComb<F> {
    LinComb::var(v)
}

fn comb<F: Field>(terms: &[(VectorSymbol, F)]) -> LinComb<F> {
    terms
        .iter()
        .fold(LinComb::zero(), |acc, (v, c)| acc.plus(*v, c.clone()))
}

fn objective<F: Field>(f: ScalarSymbol, h: ScalarSymbol) -> SymbolicExpr<F> {
    let one = F::one();
    SymbolicExpr::scalar(f, one.clone())
        .add(&SymbolicExpr::scalar(h, one.clone()))
        .sub(&SymbolicExpr::scalar(ScalarSymbol::Fs, one.clone()))
        .sub(&SymbolicExpr::scalar(ScalarSymbol::Hs, one))
}

fn build_distance<F: Field>(
    params: &ClassParams<BigRational>,
    c: &Consts<F>,
    regime: Regime,
    beta: F,
) -> Result<Certificate<F>> {
    use VectorSymbol::*;
    let g = &c.gamma;
    let rho = c.rho(regime);
    let lam_f = c.two.clone() * g.clone() * rho.clone();
    let lam_h = c.two.clone() * g.clone();
    let multipliers = vec![
        smooth("lambda_0", lam_f.clone(), Point::Star, Point::K, params, g)?,
        smooth("lambda_1", lam_f, Point::K, Point::Star, params, g)?,
        convex("lambda_2", lam_h.clone(), Point::Star, Point::K1, g),
        convex("lambda_3", lam_h, Point::K1, Point::Star, g),
    ];
    let xk1 = var::<F>(Xk1).substitute(g);
    let target = SymbolicExpr::norm_sq(&var(X))
        .scale(&(rho.clone() * rho))
        .sub(&SymbolicExpr::norm_sq(&xk1));
    let anchor = match regime {
        Regime::SmallStep => c.mu.clone(),
        Regime::LargeStep => c.l.clone(),
    };
    let sos = vec![
        SosTerm {
            coefficient: g.clone() * g.clone(),
            combination: comb(&[(Gs, c.one.clone()), (Sk1, c.one.clone())]),
        },
        SosTerm {
            coefficient: g.clone() * beta.clone() / c.l_minus_mu(),
            combination: comb(&[(X, anchor), (Gk, -c.one.clone()), (Gs, c.one.clone())]),
        },
    ];
    Ok(Certificate {
        theorem: Theorem::Distance,
        regime,
        multipliers,
        target,
        sos,
        side_conditions: vec![("beta".into(), beta)],
    })
}

fn build_residual<F: Field>(
    params: &ClassParams<BigRational>,
    c: &Consts<F>,
    regime: Regime,
    beta: F,
) -> Result<Certificate<F>> {
    use VectorSymbol::*;
    let g = &c.gamma;
    let one = c.one.clone();
    let rho = c.rho(regime);
    let rho2 = rho.clone() * rho.clone();
    let lam_f = c.two.clone() * rho / g.clone();
    let lam_h = c.two.clone() * rho2.clone() / g.clone();
    let multipliers = vec![
        smooth("lambda_0", lam_f.clone(), Point::K, Point::K1, params, g)?,
        smooth("lambda_1", lam_f, Point::K1, Point::K, params, g)?,
        convex("lambda_2", lam_h.clone(), Point::K, Point::K1, g),
        convex("lambda_3", lam_h, Point::K1, Point::K, g),
    ];
    let target = SymbolicExpr::norm_sq(&comb(&[(Gk, one.clone()), (Sk, one.clone())]))
        .scale(&rho2)
        .sub(&SymbolicExpr::norm_sq(&comb(&[(Gk1, one.clone()), (Sk1, one.clone())])));
    let anchor = match regime {
        Regime::SmallStep => c.mu.clone(),
        Regime::LargeStep => c.l.clone(),
    } * g.clone();
    let sos = vec![
        SosTerm {
            coefficient: rho2,
            combination: comb(&[(Sk, one.clone()), (Sk1, -one.clone())]),
        },
        SosTerm {
            coefficient: beta.clone() / (g.clone() * c.l_minus_mu()),
            combination: comb(&[
                (Gk, one.clone() - anchor.clone()),
                (Gk1, -one),
                (Sk1, -anchor),
            ]),
        },
    ];
    Ok(Certificate {
        theorem: Theorem::Residual,
        regime,
        multipliers,
        target,
        sos,
        side_conditions: vec![("beta".into(), beta)],
    })
}

fn build_funcvalue<F: Field>(
    params: &ClassParams<BigRational>,
    c: &Consts<F>,
    regime: Regime,
    beta: F,
) -> Result<Certificate<F>> {
    use VectorSymbol::*;
    params.require_strongly_convex()?;
    let g = &c.gamma;
    let (one, two, mu, l) = (c.one.clone(), c.two.clone(), c.mu.clone(), c.l.clone());
    let rho = c.rho(regime);
    let rho2 = rho.clone() * rho.clone();
    let multipliers = vec![
        smooth("lambda_0", rho.clone(), Point::K, Point::K1, params, g)?,
        smooth("lambda_1", (one.clone() - rho.clone()) * rho.clone(), Point::Star, Point::K, params, g)?,
        smooth("lambda_2", one.clone() - rho, Point::Star, Point::K1, params, g)?,
        convex("lambda_3", rho2.clone(), Point::K, Point::K1, g),
        convex("lambda_4", one.clone() - rho2.clone(), Point::Star, Point::K1, g),
    ];
    let target = objective(ScalarSymbol::Fk, ScalarSymbol::Hk)
        .scale(&rho2)
        .sub(&objective(ScalarSymbol::Fk1, ScalarSymbol::Hk1));
    let alpha = alpha_in(c, regime);
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("alpha vanishes at this step".into()));
    }
    let lmm = c.l_minus_mu();
    let sos = match regime {
        Regime::SmallStep => {
            let tgm = two.clone() - g.clone() * mu.clone();
            vec![
                SosTerm {
                    coefficient: tgm.clone() * beta.clone() / (two.clone() * alpha.clone()),
                    combination: comb(&[
                        (Gk, one.clone() - g.clone() * mu.clone()),
                        (Gk1, -one.clone()),
                        (Gs, mu.clone() * g.clone()),
                    ]),
                },
                SosTerm {
                    coefficient: g.clone() * l.clone() * mu.clone() * mu.clone() * tgm.clone()
                        / (two.clone() * lmm.clone()),
                    combination: comb(&[
                        (X, one.clone()),
                        (
                            Sk1,
                            -((two.clone() * lmm.clone() + g.clone() * mu.clone() * mu.clone())
                                / (l.clone() * mu.clone() * tgm.clone())),
                        ),
                        (Gk, -(one.clone() / (mu.clone() * tgm.clone()))),
                        (Gk1, -(one.clone() / (mu.clone() * tgm.clone()))),
                        (Gs, one.clone() / l.clone()),
                    ]),
                },
                SosTerm {
                    coefficient: g.clone() * mu.clone() * alpha.clone()
                        / (two * l.clone() * lmm.clone() * tgm.clone()),
                    combination: comb(&[
                        (Sk1, one.clone()),
                        (
                            Gk,
                            (mu.clone() * g.clone() - one.clone()) * l.clone() * beta.clone()
                                / alpha.clone(),
                        ),
                        (Gk1, l * beta.clone() / alpha.clone()),
                        (Gs, lmm * tgm.clone() * tgm / alpha.clone()),
                    ]),
                },
            ]
        }
        Regime::LargeStep => {
            let tgl = two.clone() - g.clone() * l.clone();
            let glm = g.clone() * l.clone() * mu.clone();
            vec![
                SosTerm {
                    coefficient: tgl.clone() * beta.clone() / (two.clone() * g.clone() * alpha.clone()),
                    combination: comb(&[
                        (Gk, one.clone() - g.clone() * l.clone()),
                        (Gk1, -one.clone()),
                        (Gs, g.clone() * l.clone()),
                    ]),
                },
                SosTerm {
                    coefficient: g.clone() * l.clone() * l.clone() * mu.clone() * tgl.clone()
                        / (two.clone() * lmm.clone()),
                    combination: comb(&[
                        (X, one.clone()),
                        (Sk1, -(one.clone() / mu.clone())),
                        (
                            Gk,
                            (one.clone() - g.clone() * l.clone() - g.clone() * mu.clone()) / glm.clone(),
                        ),
                        (Gk1, -(one.clone() / glm)),
                        (Gs, one.clone() / l.clone()),
                    ]),
                },
                SosTerm {
                    coefficient: g.clone() * alpha.clone() / (two * mu.clone() * lmm.clone()),
                    combination: comb(&[
                        (Sk1, one.clone()),
                        (
                            Gk,
                            (g.clone() * l.clone() - one) * l.clone() * beta.clone()
                                / (g.clone() * alpha.clone()),
                        ),
                        (Gk1, l * beta.clone() / (g.clone() * alpha.clone())),
                        (Gs, tgl * lmm * mu / alpha.clone()),
                    ]),
                },
            ]
        }
    };
    Ok(Certificate {
        theorem: Theorem::FuncValue,
        regime,
        multipliers,
        target,
        sos,
        side_conditions: vec![("alpha".into(), alpha), ("beta".into(), beta)],
    })
}

/// Builds the certificate over any coefficient field.
pub fn build_certificate<F: Field>(
    theorem: Theorem,
    params: &ClassParams<BigRational>,
    gamma: F,
    regime: Regime,
    negate_beta: bool,
) -> Result<Certificate<F>> {
    if params.mu() >= params.l() {
        return Err(Error::DegenerateClass);
    }
    let c = Consts::new(params, gamma);
    let beta = if negate_beta { -c.beta(regime) } else { c.beta(regime) };
    match theorem {
        Theorem::Distance => build_distance(params, &c, regime, beta),
        Theorem::Residual => build_residual(params, &c, regime, beta),
        Theorem::FuncValue => build_funcvalue(params, &c, regime, beta),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedValue {
    pub name: String,
    pub value: String,
    pub nonneg: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SosReport {
    pub coefficient: String,
    pub nonneg: bool,
    pub combination: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub theorem: Theorem,
    pub regime: Regime,
    pub mu: String,
    pub l: String,
    pub gamma: String,
    pub multipliers: Vec<SignedValue>,
    pub sos_terms: Vec<SosReport>,
    pub side_conditions: Vec<SignedValue>,
    pub residual_zero: bool,
    /// Nonzero residual coefficients, as `(term, value)`.
    pub offending: Vec<(String, String)>,
    pub verified: bool,
}

impl CertificateReport {
    fn from_certificate(cert: &Certificate<BigRational>, params: &ClassParams<BigRational>, gamma: &BigRational) -> Self {
        let nonneg = |v: &BigRational| !v.is_negative();
        let multipliers: Vec<SignedValue> = cert
            .multipliers
            .iter()
            .map(|m| SignedValue {
                name: m.name.clone(),
                value: m.weight.to_string(),
                nonneg: nonneg(&m.weight),
            })
            .collect();
        let sos_terms: Vec<SosReport> = cert
            .sos
            .iter()
            .map(|t| SosReport {
                coefficient: t.coefficient.to_string(),
                nonneg: nonneg(&t.coefficient),
                combination: t.combination.to_string(),
            })
            .collect();
        let side_conditions: Vec<SignedValue> = cert
            .side_conditions
            .iter()
            .map(|(n, v)| SignedValue {
                name: n.clone(),
                value: v.to_string(),
                nonneg: nonneg(v),
            })
            .collect();
        let residual = cert.residual();
        let residual_zero = residual.is_zero();
        let verified = residual_zero
            && multipliers.iter().all(|m| m.nonneg)
            && sos_terms.iter().all(|t| t.nonneg)
            && side_conditions.iter().all(|s| s.nonneg);
        Self {
            theorem: cert.theorem,
            regime: cert.regime,
            mu: params.mu().to_string(),
            l: params.l().to_string(),
            gamma: gamma.to_string(),
            multipliers,
            sos_terms,
            side_conditions,
            residual_zero,
            offending: residual.describe_terms(),
            verified,
        }
    }

    /// Report for a point where the certificate cannot even be formed.
    fn degenerate(theorem: Theorem, regime: Regime, params: &ClassParams<BigRational>, gamma: &BigRational, why: &str) -> Self {
        Self {
            theorem,
            regime,
            mu: params.mu().to_string(),
            l: params.l().to_string(),
            gamma: gamma.to_string(),
            multipliers: Vec::new(),
            sos_terms: Vec::new(),
            side_conditions: vec![SignedValue {
                name: why.to_string(),
                value: "0".into(),
                nonneg: false,
            }],
            residual_zero: false,
            offending: Vec::new(),
            verified: false,
        }
    }
}

/// Checks the theorem at one rational point, optionally corrupted.
pub fn verify(
    theorem: Theorem,
    params: &ClassParams<BigRational>,
    gamma: &BigRational,
    regime: Regime,
    mutation: Option<&Mutation>,
) -> Result<CertificateReport> {
    if params.mu() >= params.l() {
        return Err(Error::DegenerateClass);
    }
    if !gamma.is_positive() {
        return Err(Error::NonPositiveStep(gamma.to_string()));
    }
    if *gamma > params.max_step() {
        return Err(Error::InvalidArgument(format!("step {gamma} exceeds 2/L")));
    }
    let negate = matches!(mutation, Some(Mutation::NegateBeta));
    let mut cert = match build_certificate(theorem, params, gamma.clone(), regime, negate) {
        Ok(c) => c,
        // alpha can only vanish outside its regime
        Err(Error::InvalidArgument(why)) => {
            return Ok(CertificateReport::degenerate(theorem, regime, params, gamma, &why))
        }
        Err(e) => return Err(e),
    };
    match mutation {
        Some(Mutation::Multiplier { index, delta }) => {
            let m = cert
                .multipliers
                .get_mut(*index)
                .ok_or_else(|| Error::InvalidArgument(format!("no multiplier {index}")))?;
            m.weight = m.weight.clone() + delta.clone();
        }
        Some(Mutation::SosCoefficient { index, delta }) => {
            let t = cert
                .sos
                .get_mut(*index)
                .ok_or_else(|| Error::InvalidArgument(format!("no sum-of-squares term {index}")))?;
            t.coefficient = t.coefficient.clone() + delta.clone();
        }
        Some(Mutation::NegateBeta) | None => {}
    }
    Ok(CertificateReport::from_certificate(&cert, params, gamma))
}

pub fn verify_distance(params: &ClassParams<BigRational>, gamma: &BigRational, regime: Regime) -> Result<CertificateReport> {
    verify(Theorem::Distance, params, gamma, regime, None)
}

pub fn verify_residual(params: &ClassParams<BigRational>, gamma: &BigRational, regime: Regime) -> Result<CertificateReport> {
    verify(Theorem::Residual, params, gamma, regime, None)
}

pub fn verify_funcvalue(params: &ClassParams<BigRational>, gamma: &BigRational, regime: Regime) -> Result<CertificateReport> {
    verify(Theorem::FuncValue, params, gamma, regime, None)
}

/// Number of multipliers and SOS terms of a theorem.
pub fn certificate_shape(theorem: Theorem) -> (usize, usize) {
    match theorem {
        Theorem::Distance | Theorem::Residual => (4, 2),
        Theorem::FuncValue => (5, 3),
    }
}

/// `(mu, L, gamma, regime)` points: `mu / L` in `{1/10, 1/2, 9/10}`,
/// `L` in `{1, 3, 10}`. Per class: `eps`, `1/(2L)`, `3/(4L)`, `1/(L+mu)`,
/// `1/L`, `3/(2L)`, `2/(L+mu)` and `2/L` with `eps = 1/1000` offsets on both
/// sides of the last two, both regimes at `2/(L+mu)`.
pub fn default_grid() -> Vec<(ClassParams<BigRational>, BigRational, Regime)> {
    let eps = BigRational::from_ratio(1, 1000);
    let mut grid = Vec::new();
    for l in [1, 3, 10] {
        let l = BigRational::from_int(l);
        for (n, d) in [(1, 10), (1, 2), (9, 10)] {
            let mu = l.clone() * BigRational::from_ratio(n, d);
            let params = ClassParams::new(mu, l.clone()).expect("grid parameters are valid");
            let opt = params.optimal_step();
            let max = params.max_step();
            let inv = |n: i64, d: i64, base: &BigRational| BigRational::from_ratio(n, d) / base.clone();
            let steps = [
                eps.clone(),
                inv(1, 2, &l),
                inv(3, 4, &l),
                inv(1, 1, &(l.clone() + params.mu().clone())),
                params.short_step(),
                inv(3, 2, &l),
                opt.clone() - eps.clone(),
                opt.clone(),
                opt + eps.clone(),
                max.clone() - eps.clone(),
                max,
            ];
            for gamma in steps {
                for regime in Regime::valid_for(&params, &gamma) {
                    grid.push((params.clone(), gamma.clone(), regime));
                }
            }
        }
    }
    grid
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub theorem: Theorem,
    pub regime: Regime,
    pub mu: String,
    pub l: String,
    pub identically_zero: bool,
    /// Largest numerator degree in `gamma` among the coefficients of the
    /// weighted sum, once the substitution is done.
    pub max_numerator_degree: usize,
    pub max_denominator_degree: usize,
}

/// Checks the identity for every step at once, `gamma` an indeterminate.
/// Signs are not covered; they depend on the step interval.
pub fn verify_identity_all_steps(
    theorem: Theorem,
    params: &ClassParams<BigRational>,
    regime: Regime,
) -> Result<IdentityReport> {
    let gamma = RatFunc::poly(Poly::x());
    let cert = build_certificate(theorem, params, gamma, regime, false)?;
    let sum = cert.weighted_sum();
    let degrees = sum
        .scalar_terms()
        .map(|(_, c)| c)
        .chain(sum.gram_terms().map(|(_, c)| c))
        .map(|c| (c.num().degree().unwrap_or(0), c.den().degree().unwrap_or(0)));
    let (num_deg, den_deg) = degrees.fold((0, 0), |(a, b), (n, d)| (a.max(n), b.max(d)));
    Ok(IdentityReport {
        theorem,
        regime,
        mu: params.mu().to_string(),
        l: params.l().to_string(),
        identically_zero: cert.residual().is_zero(),
        max_numerator_degree: num_deg,
        max_denominator_degree: den_deg,
    })
}
