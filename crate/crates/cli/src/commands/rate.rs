//! `rho^2(gamma)` rows for plotting, with the four reference steps marked.

use pgm_tight::rates::{rho, rho_branch};
use pgm_tight::{ClassParams, Rational};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{config, params, put, step};
use crate::args::RateArgs;
use crate::num::{arith_for, numeric, required, usage, Arith, ArgScalar, Policy};
use crate::output::{exact, num, Report, Verdict};

const DEFAULT_POINTS: usize = 100;

pub fn run(args: &RateArgs) -> anyhow::Result<Report> {
    let c = &args.common;
    let mu = required(&c.mu, "--mu")?;
    let l = required(&c.l, "--L")?;
    let nums = numeric(&[Some(mu), Some(l), c.gamma.as_deref()]);
    match arith_for(&nums, Policy::Either)? {
        Arith::Exact => body::<Rational>(args, mu, l, Arith::Exact),
        Arith::Float => body::<f64>(args, mu, l, Arith::Float),
    }
}

/// Uniform points on `[0, max(2/L, 1/mu)]` merged with the markers.
fn grid<T: ArgScalar>(p: &ClassParams<T>, points: usize) -> Vec<(T, Vec<&'static str>)> {
    let mu = p.mu().clone();
    let l = p.l().clone();
    let mut upper = p.max_step();
    let mut markers = vec![(T::one() / l.clone(), "1/L"), (p.optimal_step(), "2/(L+mu)")];
    if p.is_strongly_convex() {
        let inv_mu = T::one() / mu;
        if inv_mu > upper {
            upper = inv_mu.clone();
        }
        markers.push((inv_mu, "1/mu"));
    }
    markers.push((p.max_step(), "2/L"));
    let n = T::from_int(points as i64);
    let mut grid: Vec<(T, Vec<&str>)> = (0..=points)
        .map(|j| (upper.clone() * T::from_int(j as i64) / n.clone(), Vec::new()))
        .collect();
    for (gamma, label) in markers {
        match grid.iter_mut().find(|(g, _)| g.near(&gamma)) {
            Some((_, labels)) => labels.push(label),
            None => grid.push((gamma, vec![label])),
        }
    }
    grid.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite grid"));
    grid
}

fn body<T: ArgScalar>(args: &RateArgs, mu: &str, l: &str, arith: Arith) -> anyhow::Result<Report> {
    let c = &args.common;
    let p: ClassParams<T> = params(mu, l)?;
    let single = c.gamma.is_some();
    let points = match &c.grid {
        None => DEFAULT_POINTS,
        Some(s) => s
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| usage(format!("--grid for rate is a positive point count, got `{s}`")))?,
    };
    let grid = if single {
        vec![(step(c.gamma.as_deref(), &p)?, Vec::new())]
    } else {
        grid(&p, points)
    };

    let rates: Vec<(T, T)> = grid
        .par_iter()
        .map(|(gamma, _)| {
            let r = rho(&p, gamma);
            (r.rho, r.rho_squared)
        })
        .collect();
    let rows: Vec<Value> = grid
        .iter()
        .zip(&rates)
        .enumerate()
        .map(|(i, ((gamma, labels), (r, r2)))| {
            json!({
                "index": i,
                "gamma": num(gamma),
                "rho": num(r),
                "rho_sq": num(r2),
                "branch": rho_branch(&p, gamma),
                "marker": labels.join("|"),
                "gamma_exact": exact(gamma),
                "rho_sq_exact": exact(r2),
            })
        })
        .collect();

    let mut verdict = Verdict::default();
    if !single {
        verdict.check(rates[0].1 == T::one(), || format!("rho^2 at gamma = 0 is {}, not 1", rates[0].1));
        if p.is_strongly_convex() {
            let best = (0..rates.len())
                .min_by(|a, b| rates[*a].1.partial_cmp(&rates[*b].1).expect("finite rates"))
                .expect("nonempty grid");
            let rho_star = rho(&p, &p.optimal_step()).rho_squared;
            verdict.check(rates[best].1.near(&rho_star), || {
                format!("grid minimum {} at gamma = {} is below rho*^2 = {rho_star}", rates[best].1, grid[best].0)
            });
        }
    }

    let mut cfg = config(arith);
    put(&mut cfg, "mu", p.mu());
    put(&mut cfg, "L", p.l());
    if single {
        put(&mut cfg, "gamma", &grid[0].0);
    } else {
        cfg.insert("grid_points".into(), points.into());
    }
    Ok(Report {
        command: "rate",
        config: cfg,
        rows,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pgm_tight::Scalar;

    #[test]
    fn markers_merge_with_uniform_points() {
        let p = ClassParams::new(Rational::from_int(1), Rational::from_int(2)).unwrap();
        // upper = 1/mu = 1; 1/L = 1/2 and 2/L = 1 lie on the uniform grid
        let g = grid(&p, 4);
        assert_eq!(g.len(), 6);
        let labels: Vec<String> = g.iter().map(|(_, l)| l.join("|")).collect();
        assert_eq!(labels, vec!["", "", "1/L", "2/(L+mu)", "", "1/mu|2/L"]);
    }
}
