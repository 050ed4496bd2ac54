//! Attained versus predicted values on the lower-bound instances.

use pgm_tight::worstcase::{
    appendix_b_instance, els_worst_quadratic, quadratic_lower_bound, unbounded_family, MixedTarget, Prediction,
    WorstCaseSpec,
};
use pgm_tight::{ClassParams, MeasureKind, Params, Rational, Scalar};
use serde_json::{json, Value};

use super::{config, params, put, step};
use crate::args::{Generator, TightArgs};
use crate::num::{arith_for, numeric, required, usage, Arith, ArgScalar, Policy};
use crate::output::{exact, num, Report, Verdict};

const GAP_TOL: f64 = 1e-8;
const DEVIATION_TOL: f64 = 1e-12;

pub fn run(args: &TightArgs) -> anyhow::Result<Report> {
    let c = &args.common;
    let nums = numeric(&[c.mu.as_deref(), c.l.as_deref(), c.gamma.as_deref(), args.x0.as_deref()]);
    let mut grid_nums: Vec<&str> = Vec::new();
    if let Some(g) = &c.grid {
        if args.generator != Generator::Unbounded {
            return Err(usage("--grid applies to the unbounded generator only (a list of c values)"));
        }
        grid_nums = g.split(',').map(str::trim).collect();
    }
    let all: Vec<&str> = nums.iter().chain(&grid_nums).copied().collect();
    let policy = if args.generator == Generator::Els { Policy::FloatOnly } else { Policy::Either };
    let arith = arith_for(&all, policy)?;
    match arith {
        Arith::Exact => body::<Rational>(args, arith),
        Arith::Float => body::<f64>(args, arith),
    }
}

struct Row<T> {
    cell: (MeasureKind, MeasureKind),
    step: Option<usize>,
    c: Option<T>,
    predicted: T,
    attained: T,
    deviation: Option<T>,
}

fn rel_gap<T: Scalar>(predicted: &T, attained: &T) -> f64 {
    let diff = (attained.clone() - predicted.clone()).abs();
    if predicted.is_zero() {
        diff.to_f64()
    } else {
        (diff / predicted.abs()).to_f64()
    }
}

fn body<T: ArgScalar>(args: &TightArgs, arith: Arith) -> anyhow::Result<Report> {
    let c = &args.common;
    let mut cfg = config(arith);
    cfg.insert("generator".into(), format!("{:?}", args.generator).to_lowercase().into());
    let x0 = T::parse_arg(args.x0.as_deref().unwrap_or("1"))?;
    let mut extra = Vec::new();
    let rows: Vec<Row<T>> = match args.generator {
        Generator::Qlb => {
            let p: ClassParams<T> = params(required(&c.mu, "--mu")?, required(&c.l, "--L")?)?;
            let gamma = step(c.gamma.as_deref(), &p)?;
            let n = c.n.unwrap_or(10);
            let spec = quadratic_lower_bound(&p, &gamma, c.dim.unwrap_or(1), n).map_err(|e| usage(e.to_string()))?;
            put(&mut cfg, "mu", p.mu());
            put(&mut cfg, "L", p.l());
            put(&mut cfg, "gamma", &gamma);
            cfg.insert("N".into(), n.into());
            final_ratios(&spec, None)?
        }
        Generator::AppendixB => {
            let p: ClassParams<T> = params(required(&c.mu, "--mu")?, required(&c.l, "--L")?)?;
            if let Some(g) = c.gamma.as_deref() {
                if !step(Some(g), &p)?.near(&p.short_step()) {
                    return Err(usage(format!("the constrained instance runs at gamma = 1/L, got {g}")));
                }
            }
            let n = c.n.unwrap_or(2);
            put(&mut cfg, "mu", p.mu());
            put(&mut cfg, "L", p.l());
            put(&mut cfg, "gamma", &p.short_step());
            put(&mut cfg, "x0", &x0);
            cfg.insert("N".into(), n.into());
            let mut rows = Vec::new();
            for target in MixedTarget::ALL {
                let spec = appendix_b_instance(&p, n, &x0, target).map_err(|e| usage(e.to_string()))?;
                rows.extend(final_ratios(&spec, None)?);
            }
            rows
        }
        Generator::Unbounded => {
            if let Some(mu) = c.mu.as_deref() {
                if !T::parse_arg(mu)?.is_zero() {
                    return Err(usage("the unbounded family lives in the smooth convex class; omit --mu or pass 0"));
                }
            }
            let l = T::parse_arg(required(&c.l, "--L")?)?;
            let n = c.n.unwrap_or(5);
            let cs = match &c.grid {
                Some(g) => g.split(',').map(|s| T::parse_arg(s.trim())).collect::<anyhow::Result<Vec<T>>>()?,
                None => [100, 1000, 10000].iter().map(|d| T::from_ratio(1, *d)).collect(),
            };
            put(&mut cfg, "mu", &T::zero());
            put(&mut cfg, "L", &l);
            put(&mut cfg, "gamma", &(T::one() / l.clone()));
            put(&mut cfg, "x0", &x0);
            cfg.insert("N".into(), n.into());
            let mut rows = Vec::new();
            for cval in cs {
                let spec = unbounded_family(&cval, &l, n, &x0).map_err(|e| usage(e.to_string()))?;
                rows.extend(final_ratios(&spec, Some(cval))?);
            }
            extra = growth_checks(&rows);
            rows
        }
        Generator::Els => {
            let p: Params = params(required(&c.mu, "--mu")?, required(&c.l, "--L")?)?;
            let n = c.n.unwrap_or(10);
            let spec = els_worst_quadratic(&p, n).map_err(|e| usage(e.to_string()))?;
            cfg.insert("mu".into(), Value::from(*p.mu()));
            cfg.insert("L".into(), Value::from(*p.l()));
            cfg.insert("N".into(), n.into());
            let per_step = els_rows(&spec)?;
            let rows = per_step.iter().map(|r| row_json(r)).collect();
            return Ok(finish(cfg, rows, &per_step, extra));
        }
    };
    let json_rows = rows.iter().map(row_json).collect();
    Ok(finish(cfg, json_rows, &rows, extra))
}

/// Rows for every predicted `m_final(N) / m_init(0)`.
fn final_ratios<T: Scalar>(spec: &WorstCaseSpec<T>, c: Option<T>) -> anyhow::Result<Vec<Row<T>>> {
    let trace = spec.run_fixed()?;
    let deviation = spec.closed_form_deviation(&trace);
    spec.predicted
        .iter()
        .map(|(&(init, fin), pred)| {
            let predicted = match pred {
                Prediction::Ratio(v) | Prediction::Unbounded { witness: v, .. } => v.clone(),
                Prediction::PerStepRatio(_) => unreachable!("fixed-step instances predict final ratios"),
            };
            Ok(Row {
                cell: (init, fin),
                step: None,
                c: c.clone(),
                predicted,
                attained: trace.ratio(init, fin, spec.horizon)?,
                deviation: deviation.clone(),
            })
        })
        .collect()
}

fn els_rows(spec: &WorstCaseSpec<f64>) -> anyhow::Result<Vec<Row<f64>>> {
    let trace = spec.run()?;
    let deviation = spec.closed_form_deviation(&trace);
    let mut rows = Vec::new();
    for (&cell, pred) in &spec.predicted {
        let Prediction::PerStepRatio(v) = pred else { continue };
        for k in 1..=spec.horizon {
            let a = trace.measure(cell.0, k - 1)?;
            let b = trace.measure(cell.1, k)?;
            rows.push(Row {
                cell,
                step: Some(k),
                c: None,
                predicted: *v,
                attained: b / a,
                deviation,
            });
        }
    }
    Ok(rows)
}

fn row_json<T: Scalar>(r: &Row<T>) -> Value {
    json!({
        "cell": format!("{}->{}", r.cell.0.label(), r.cell.1.label()),
        "init": r.cell.0,
        "final": r.cell.1,
        "step": r.step,
        "c": r.c.as_ref().map(num),
        "predicted": num(&r.predicted),
        "attained": num(&r.attained),
        "rel_gap": rel_gap(&r.predicted, &r.attained),
        "closed_form_deviation": r.deviation.as_ref().map(num),
        "predicted_exact": exact(&r.predicted),
        "attained_exact": exact(&r.attained),
    })
}

/// Witnesses must grow at least tenfold whenever `c` shrinks tenfold.
fn growth_checks<T: Scalar>(rows: &[Row<T>]) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    for (i, cur) in rows.iter().enumerate() {
        let Some(prev) = rows[..i].iter().rev().find(|r| r.cell == cur.cell) else { continue };
        let (Some(c_prev), Some(c_cur)) = (&prev.c, &cur.c) else { continue };
        if !(c_prev.clone() / c_cur.clone()).near(&T::from_int(10)) {
            continue;
        }
        let growth = (cur.attained.clone() / prev.attained.clone()).to_f64();
        out.push((
            growth >= 10.0,
            format!(
                "{}->{}: witness grew {growth}x when c went from {c_prev} to {c_cur}",
                cur.cell.0.label(),
                cur.cell.1.label()
            ),
        ));
    }
    out
}

fn finish<T: Scalar>(
    config: serde_json::Map<String, Value>,
    rows: Vec<Value>,
    data: &[Row<T>],
    extra: Vec<(bool, String)>,
) -> Report {
    let mut verdict = Verdict::default();
    for (ok, msg) in extra {
        verdict.check(ok, || msg);
    }
    for r in data {
        let gap = rel_gap(&r.predicted, &r.attained);
        let cell = format!("{}->{}", r.cell.0.label(), r.cell.1.label());
        verdict.check(gap <= GAP_TOL, || format!("{cell}: predicted {} attained {} (gap {gap:e})", r.predicted, r.attained));
        if let Some(d) = &r.deviation {
            let d = d.to_f64();
            verdict.check(d <= DEVIATION_TOL, || format!("{cell}: iterates deviate from the closed form by {d:e}"));
        }
    }
    Report {
        command: "tight",
        config,
        rows,
        verdict,
    }
}
