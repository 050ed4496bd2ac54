//! The three nine-cell tables: global guarantees at `gamma`, the
//! `gamma = 1/L` lower bounds, and their `mu -> 0` limit.

use pgm_tight::rates::bound_lookup;
use pgm_tight::{BoundTable, ClassParams, MeasureKind, Rational};
use serde_json::{json, Value};

use super::{config, params, put, step};
use crate::args::TablesArgs;
use crate::num::{arith_for, numeric, required, usage, Arith, ArgScalar, Policy};
use crate::output::{exact, Report, Verdict};

pub fn run(args: &TablesArgs) -> anyhow::Result<Report> {
    let c = &args.common;
    let mu = required(&c.mu, "--mu")?;
    let l = required(&c.l, "--L")?;
    match arith_for(&numeric(&[Some(mu), Some(l), c.gamma.as_deref()]), Policy::Either)? {
        Arith::Exact => body::<Rational>(args, mu, l, Arith::Exact),
        Arith::Float => body::<f64>(args, mu, l, Arith::Float),
    }
}

/// Formula of each cell, by table.
fn formula(table: u8, init: MeasureKind, fin: MeasureKind) -> &'static str {
    use MeasureKind::*;
    match (table, init, fin) {
        (3, a, b) if a == b => "1",
        (_, a, b) if a == b => "rho^(2k)",
        (3, FuncGap, DistanceSq) | (3, ResidualGradSq, DistanceSq) | (3, ResidualGradSq, FuncGap) => "Unbounded",
        (_, FuncGap, DistanceSq) => "(2/mu) rho^(2k)",
        (_, ResidualGradSq, DistanceSq) => "rho^(2k)/mu^2",
        (_, ResidualGradSq, FuncGap) => "rho^(2k)/(2 mu)",
        (1, _, _) => "*",
        (2, DistanceSq, FuncGap) => "(mu/2)/(rho^(-2k) - 1)",
        (2, DistanceSq, ResidualGradSq) => "mu^2/(rho^(-k) - 1)^2",
        (2, FuncGap, ResidualGradSq) => "2 mu/(rho^(-2k) - 1)",
        (3, DistanceSq, FuncGap) => "L/(4k)",
        (3, DistanceSq, ResidualGradSq) => "L^2/k^2",
        (3, FuncGap, ResidualGradSq) => "L/k",
        _ => unreachable!("every cell has a formula"),
    }
}

fn body<T: ArgScalar>(args: &TablesArgs, mu: &str, l: &str, arith: Arith) -> anyhow::Result<Report> {
    let c = &args.common;
    let p: ClassParams<T> = params(mu, l)?;
    let gamma = step(c.gamma.as_deref(), &p)?;
    let k = c.n.unwrap_or(1);
    if k == 0 {
        return Err(usage("--N (the iteration count k) must be at least 1"));
    }
    let k32 = u32::try_from(k).map_err(|_| usage("--N is too large"))?;
    let limit = ClassParams::new(T::zero(), p.l().clone()).expect("L > 0 was checked");
    let short = p.short_step();

    let mut rows = Vec::new();
    for table in [1u8, 2, 3] {
        for fin in MeasureKind::ALL {
            for init in MeasureKind::ALL {
                let lookup = match table {
                    1 if p.is_strongly_convex() => Some(bound_lookup(init, fin, &p, &gamma, k32, BoundTable::Proven)),
                    2 if p.is_strongly_convex() => Some(bound_lookup(init, fin, &p, &short, k32, BoundTable::Conjectured)),
                    3 => Some(bound_lookup(init, fin, &limit, &limit.short_step(), k32, BoundTable::Conjectured)),
                    _ => None,
                };
                let (value, value_exact, provenance) = match lookup.and_then(Result::ok) {
                    Some(b) => (
                        b.value().map_or(Value::Null, |v| Value::from(v.to_f64())),
                        b.value().map_or(Value::Null, exact),
                        serde_json::to_value(b.provenance).expect("provenance serializes"),
                    ),
                    None => (Value::Null, Value::Null, Value::from("none")),
                };
                rows.push(json!({
                    "table": table,
                    "init": init,
                    "final": fin,
                    "formula": formula(table, init, fin),
                    "value": value,
                    "value_exact": value_exact,
                    "provenance": provenance,
                }));
            }
        }
    }

    let mut cfg = config(arith);
    put(&mut cfg, "mu", p.mu());
    put(&mut cfg, "L", p.l());
    put(&mut cfg, "gamma", &gamma);
    cfg.insert("k".into(), k.into());
    Ok(Report {
        command: "tables",
        config: cfg,
        rows,
        verdict: Verdict::default(),
    })
}
