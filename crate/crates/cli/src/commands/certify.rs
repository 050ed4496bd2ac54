//! Exact certificate reports over a rational grid.

use pgm_tight::certificate::{default_grid, verify, verify_identity_all_steps, Mutation, Regime, Theorem};
use pgm_tight::{ExactParams, Rational};
use rayon::prelude::*;
use serde_json::{Map, Value};

use super::{config, params, put, step};
use crate::args::{CertifyArgs, RegimeArg, TheoremArg};
use crate::num::{arith_for, numeric, usage, Arith, ArgScalar, Policy};
use crate::output::{Report, Verdict};

fn theorems(arg: TheoremArg) -> Vec<Theorem> {
    match arg {
        TheoremArg::Distance => vec![Theorem::Distance],
        TheoremArg::Residual => vec![Theorem::Residual],
        TheoremArg::Funcvalue => vec![Theorem::FuncValue],
        TheoremArg::All => Theorem::ALL.to_vec(),
    }
}

fn regime(arg: RegimeArg) -> Regime {
    match arg {
        RegimeArg::Small => Regime::SmallStep,
        RegimeArg::Large => Regime::LargeStep,
    }
}

pub fn parse_mutation(spec: &str) -> anyhow::Result<Mutation> {
    if spec == "negate-beta" {
        return Ok(Mutation::NegateBeta);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("malformed mutation `{spec}`; expected negate-beta, multiplier:I:DELTA or sos:I:DELTA"));
    let [kind, index, delta] = parts[..] else { return Err(bad()) };
    let index: usize = index.parse().map_err(|_| bad())?;
    let delta = Rational::parse_arg(delta)?;
    match kind {
        "multiplier" => Ok(Mutation::Multiplier { index, delta }),
        "sos" => Ok(Mutation::SosCoefficient { index, delta }),
        _ => Err(bad()),
    }
}

enum Mode {
    Grid,
    Point(ExactParams, Rational),
    AllSteps(Vec<ExactParams>),
}

pub fn run(args: &CertifyArgs) -> anyhow::Result<Report> {
    let c = &args.common;
    arith_for(&numeric(&[c.mu.as_deref(), c.l.as_deref(), c.gamma.as_deref()]), Policy::ExactOnly)?;
    let mutation = args.mutate.as_deref().map(parse_mutation).transpose()?;
    let all_steps = match c.grid.as_deref() {
        None | Some("default") => false,
        Some("all-steps") => true,
        Some(other) => return Err(usage(format!("--grid for certify is `default` or `all-steps`, got `{other}`"))),
    };
    let class = match (c.mu.as_deref(), c.l.as_deref()) {
        (Some(mu), Some(l)) => {
            let p: ExactParams = params(mu, l)?;
            if p.mu() >= p.l() {
                return Err(usage(format!("certificates need mu < L, got mu = {} and L = {}", p.mu(), p.l())));
            }
            Some(p)
        }
        (None, None) => None,
        _ => return Err(usage("give --mu and --L together")),
    };
    let mode = match (class, c.gamma.as_deref(), all_steps) {
        (_, Some(_), true) => return Err(usage("--gamma does not apply to the all-steps identity")),
        (Some(p), None, true) => Mode::AllSteps(vec![p]),
        (None, None, true) => {
            let mut classes: Vec<ExactParams> = Vec::new();
            for (p, _, _) in default_grid() {
                if !classes.contains(&p) {
                    classes.push(p);
                }
            }
            Mode::AllSteps(classes)
        }
        (Some(p), Some(g), false) => {
            let gamma = step(Some(g), &p)?;
            if gamma > p.max_step() {
                return Err(usage(format!("step {gamma} exceeds 2/L = {}", p.max_step())));
            }
            Mode::Point(p, gamma)
        }
        (None, None, false) => Mode::Grid,
        _ => return Err(usage("give --mu, --L and --gamma together, or none of them for the default grid")),
    };
    if mutation.is_some() && matches!(mode, Mode::AllSteps(_)) {
        return Err(usage("mutations apply to per-point certificates only"));
    }

    let thms = theorems(args.theorem);
    let mut cfg = config(Arith::Exact);
    cfg.insert(
        "theorems".into(),
        serde_json::to_value(&thms).expect("theorems serialize"),
    );
    if let Some(m) = &args.mutate {
        cfg.insert("mutation".into(), m.clone().into());
    }
    let mut verdict = Verdict::default();
    let rows = match mode {
        Mode::AllSteps(classes) => {
            cfg.insert("grid".into(), "all-steps".into());
            let regimes = args.regime.map_or(Regime::ALL.to_vec(), |r| vec![regime(r)]);
            let mut jobs: Vec<(ExactParams, Theorem, Regime)> = Vec::new();
            for p in &classes {
                for t in &thms {
                    for r in &regimes {
                        jobs.push((p.clone(), *t, *r));
                    }
                }
            }
            let reports = jobs
                .par_iter()
                .map(|(p, t, r)| verify_identity_all_steps(*t, p, *r))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| usage(e.to_string()))?;
            reports
                .iter()
                .enumerate()
                .map(|(i, rep)| {
                    verdict.check(rep.identically_zero, || {
                        format!("{:?}/{:?} at mu = {}, L = {}: identity fails", rep.theorem, rep.regime, rep.mu, rep.l)
                    });
                    indexed(i, serde_json::to_value(rep).expect("report serializes"))
                })
                .collect()
        }
        mode => {
            let points: Vec<(ExactParams, Rational, Regime)> = match mode {
                Mode::Point(p, gamma) => {
                    put(&mut cfg, "mu", p.mu());
                    put(&mut cfg, "L", p.l());
                    put(&mut cfg, "gamma", &gamma);
                    let regimes = match args.regime {
                        Some(r) => vec![regime(r)],
                        None => Regime::valid_for(&p, &gamma),
                    };
                    regimes.into_iter().map(|r| (p.clone(), gamma.clone(), r)).collect()
                }
                _ => {
                    cfg.insert("grid".into(), "default".into());
                    default_grid()
                }
            };
            let jobs: Vec<(Theorem, &(ExactParams, Rational, Regime))> =
                points.iter().flat_map(|pt| thms.iter().map(move |t| (*t, pt))).collect();
            let reports = jobs
                .par_iter()
                .map(|(t, (p, g, r))| verify(*t, p, g, *r, mutation.as_ref()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| usage(e.to_string()))?;
            reports
                .iter()
                .enumerate()
                .map(|(i, rep)| {
                    verdict.check(rep.verified, || {
                        format!(
                            "{:?}/{:?} at mu = {}, L = {}, gamma = {}: not verified",
                            rep.theorem, rep.regime, rep.mu, rep.l, rep.gamma
                        )
                    });
                    indexed(i, serde_json::to_value(rep).expect("report serializes"))
                })
                .collect()
        }
    };
    Ok(Report {
        command: "certify",
        config: cfg,
        rows,
        verdict,
    })
}

fn indexed(i: usize, report: Value) -> Value {
    let mut row = Map::new();
    row.insert("index".into(), i.into());
    if let Value::Object(fields) = report {
        row.extend(fields);
    }
    Value::Object(row)
}
