//! One run of the method with per-step ratios against the envelope.

use pgm_tight::pgm::{self, derive_initial_subgradient};
use pgm_tight::prox::ProxFamily;
use pgm_tight::rates::{optimal_step, rho};
use pgm_tight::smooth::random_composite;
use pgm_tight::worstcase::quadratic_lower_bound;
use pgm_tight::{MeasureKind, Params, Trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use super::{config, params};
use crate::args::{HKind, Instance, SimulateArgs, Start};
use crate::num::{arith_for, numeric, required, usage, Arith, ArgScalar, Policy};
use crate::output::{opt_num, Report, Verdict};

const DEFAULT_N: usize = 20;
const DEFAULT_DIM: usize = 5;
const REL_TOL: f64 = 1e-8;
/// Measures below this fraction of their initial value are rounding noise.
const NOISE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Rule {
    Fixed(f64),
    Els,
    Rls,
}

impl Rule {
    fn parse(token: Option<&str>, p: &Params) -> anyhow::Result<Self> {
        match token {
            None | Some("opt") => Ok(Rule::Fixed(p.optimal_step())),
            Some("els") => Ok(Rule::Els),
            Some("rls") => Ok(Rule::Rls),
            Some(s) => {
                let g = f64::parse_arg(s)?;
                if g <= 0.0 {
                    return Err(usage(format!("step size must be positive, got {s}")));
                }
                Ok(Rule::Fixed(g))
            }
        }
    }

    /// Bound on the per-step ratio of each measure, where one is claimed.
    fn envelope(self, p: &Params, kind: MeasureKind) -> Option<f64> {
        let star = optimal_step(p).1.rho_squared;
        match self {
            Rule::Fixed(g) if g <= p.max_step() => Some(rho(p, &g).rho_squared),
            Rule::Fixed(_) => None,
            Rule::Els => (kind == MeasureKind::FuncGap).then_some(star),
            Rule::Rls => (kind == MeasureKind::ResidualGradSq).then_some(star),
        }
    }

    fn describe(self) -> Value {
        match self {
            Rule::Fixed(g) => Value::from(g),
            Rule::Els => "els".into(),
            Rule::Rls => "rls".into(),
        }
    }
}

pub fn run(args: &SimulateArgs) -> anyhow::Result<Report> {
    let c = &args.common;
    let mu = required(&c.mu, "--mu")?;
    let l = required(&c.l, "--L")?;
    arith_for(&numeric(&[Some(mu), Some(l), c.gamma.as_deref()]), Policy::FloatOnly)?;
    let p: Params = params(mu, l)?;
    let rule = Rule::parse(c.gamma.as_deref(), &p)?;
    let n = c.n.unwrap_or(DEFAULT_N);
    let dim = c.dim.unwrap_or(DEFAULT_DIM);
    if dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    let seed = c.seed.unwrap_or(0);
    let h = c.h.unwrap_or(HKind::Zero);

    let trace = match args.instance {
        Instance::Qlb => {
            let Rule::Fixed(gamma) = rule else {
                return Err(usage("the worst-case quadratic runs with a fixed step"));
            };
            if h != HKind::Zero {
                return Err(usage("the worst-case quadratic has h = zero"));
            }
            let spec = quadratic_lower_bound(&p, &gamma, dim, n).map_err(|e| usage(e.to_string()))?;
            match args.start {
                Start::Random => spec.run_fixed()?,
                Start::Optimum => pgm::run(&spec.problem, &gamma, &vec![0.0; dim], n, Some(vec![0.0; dim]))?,
            }
        }
        Instance::Random => {
            let problem = random_composite(&p, dim, h.family(), seed).map_err(|e| usage(e.to_string()))?;
            let x0 = match args.start {
                Start::Optimum => problem.optimum().expect("catalog instances know x*").x.clone(),
                Start::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0005_7a47);
                    let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
                    // prox with unit step lands in dom h
                    problem.h().prox(&1.0, &y)?
                }
            };
            match rule {
                Rule::Fixed(gamma) => pgm::run_with_derived_s0(&problem, &gamma, &x0, n)?,
                Rule::Els => {
                    let s0 = derive_initial_subgradient(&problem, &x0)?;
                    pgm::run_exact_line_search(&problem, &x0, n, Some(s0))?
                }
                Rule::Rls => {
                    if h.family() != ProxFamily::Zero {
                        return Err(usage("residual line search needs --h zero"));
                    }
                    pgm::run_residual_line_search(&problem, &x0, n)?
                }
            }
        }
    };

    let (rows, verdict) = rows(&trace, rule, &p);
    let mut cfg = config(Arith::Float);
    cfg.insert("mu".into(), Value::from(*p.mu()));
    cfg.insert("L".into(), Value::from(*p.l()));
    cfg.insert("gamma".into(), rule.describe());
    cfg.insert("N".into(), n.into());
    cfg.insert("dim".into(), dim.into());
    cfg.insert("seed".into(), seed.into());
    cfg.insert("h".into(), h.name().into());
    cfg.insert("instance".into(), format!("{:?}", args.instance).to_lowercase().into());
    cfg.insert("start".into(), format!("{:?}", args.start).to_lowercase().into());
    cfg.insert("x0".into(), trace.records[0].x.clone().into());
    Ok(Report {
        command: "simulate",
        config: cfg,
        rows,
        verdict,
    })
}

fn rows(trace: &Trace, rule: Rule, p: &Params) -> (Vec<Value>, Verdict) {
    let mut verdict = Verdict::default();
    let mut rows = Vec::with_capacity(trace.records.len());
    let initial = |kind| trace.records[0].measures.get(kind).map_or(0.0, |v: &f64| v.abs());
    for (k, rec) in trace.records.iter().enumerate() {
        let mut row = Map::new();
        row.insert("k".into(), k.into());
        row.insert("step".into(), opt_num(k.checked_sub(1).map(|i| &trace.steps[i])));
        for kind in MeasureKind::ALL {
            row.insert(kind.label().into(), opt_num(rec.measures.get(kind)));
        }
        let mut within = None;
        for kind in MeasureKind::ALL {
            let prev = k.checked_sub(1).and_then(|i| trace.records[i].measures.get(kind));
            let cur = rec.measures.get(kind);
            let ratio = match (prev, cur) {
                (Some(a), Some(b)) if *a != 0.0 => Some(b / a),
                _ => None,
            };
            row.insert(format!("ratio_{}", kind.label()), opt_num(ratio.as_ref()));
            let env = rule.envelope(p, kind);
            if let (Some(a), Some(b), Some(env)) = (prev, cur, env) {
                let floor = NOISE * initial(kind).max(1.0);
                let ok = *b <= env * a * (1.0 + REL_TOL) + floor;
                within = Some(within.unwrap_or(true) && ok);
                verdict.check(ok, || format!("step {k}: {} went from {a} to {b}, envelope {env}", kind.label()));
            }
        }
        let envelope = MeasureKind::ALL.iter().find_map(|kind| rule.envelope(p, *kind));
        row.insert("envelope".into(), opt_num(envelope.filter(|_| k > 0).as_ref()));
        row.insert("within_envelope".into(), within.map_or(Value::Null, Value::Bool));
        row.insert(
            "outside_theory".into(),
            k.checked_sub(1).map_or(Value::Null, |i| trace.outside_theory[i].into()),
        );
        rows.push(Value::Object(row));
    }
    (rows, verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelopes_follow_the_rule() {
        let p = Params::new(1.0, 10.0).unwrap();
        let star = (9.0f64 / 11.0).powi(2);
        assert_eq!(Rule::Fixed(0.1).envelope(&p, MeasureKind::DistanceSq), Some(0.81));
        assert_eq!(Rule::Fixed(0.3).envelope(&p, MeasureKind::DistanceSq), None);
        assert_eq!(Rule::Els.envelope(&p, MeasureKind::FuncGap), Some(star));
        assert_eq!(Rule::Els.envelope(&p, MeasureKind::DistanceSq), None);
        assert_eq!(Rule::Rls.envelope(&p, MeasureKind::ResidualGradSq), Some(star));
    }
}
