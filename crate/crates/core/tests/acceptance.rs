//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed; the
//! process exits nonzero when any criterion fails.

use std::time::Instant;

use pgm_tight::certificate::{
    certificate_shape, default_grid, verify, Mutation, Regime, Theorem,
};
use pgm_tight::mixed::{check_mixed_bound, check_proposition, MeasureTriple};
use pgm_tight::pgm::{run_exact_line_search, run_residual_line_search, run_with_derived_s0};
use pgm_tight::prox::ProxFamily;
use pgm_tight::rates::{bound_lookup, optimal_step, rho};
use pgm_tight::smooth::{random_composite, random_instance};
use pgm_tight::worstcase::{
    appendix_b_instance, els_worst_quadratic, quadratic_lower_bound, unbounded_family, MixedTarget,
};
use pgm_tight::{BigRational, BoundTable, ClassParams, MeasureKind, Params, Scalar, Trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

/// Outcome of one criterion: failures are collected, not panicked on.
struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    fn ok<T, E: std::fmt::Debug>(&mut self, r: Result<T, E>, ctx: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.require(false, || format!("{ctx}: {e:?}"));
                None
            }
        }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn classes() -> Vec<Params> {
    let mut out = Vec::new();
    for mu in [0.1, 1.0] {
        for l in [1.0, 10.0] {
            if mu < l {
                out.push(ClassParams::new(mu, l).unwrap());
            }
        }
    }
    out
}

fn step_grid(p: &Params) -> [f64; 5] {
    let l = *p.l();
    [0.3 / l, 1.0 / l, p.optimal_step(), 1.5 / l, 1.9 / l]
}

/// Traces kept for the cross-cutting checks of criterion 7.
#[derive(Default)]
struct Collected {
    fixed: Vec<Trace>,
    /// Subset of `fixed` run on `f_mu` with `gamma <= 2/(L+mu)`.
    tight: Vec<Trace>,
    other: Vec<Trace>,
}

const N1: usize = 10;

fn criterion_1(c: &mut Check, col: &mut Collected) {
    for p in classes() {
        for gamma in step_grid(&p) {
            let Some(spec) = c.ok(quadratic_lower_bound(&p, &gamma, 2, N1), "instance") else { continue };
            let Some(trace) = c.ok(spec.run_fixed(), "run") else { continue };
            let expected = rho(&p, &gamma).squared_pow(N1 as u32);
            for m in MeasureKind::ALL {
                let Some(r) = c.ok(trace.ratio(m, m, N1), "ratio") else { continue };
                c.require(rel_err(r, expected) <= 1e-10, || {
                    format!("{m:?} mu={} L={} gamma={gamma}: {r} vs {expected}", p.mu(), p.l())
                });
            }
            if gamma <= p.optimal_step() {
                col.tight.push(trace.clone());
            }
            col.fixed.push(trace);
        }
    }
}

fn per_step_ok(trace: &Trace, bound: f64, tol: f64) -> Result<(), String> {
    for m in MeasureKind::ALL {
        for k in 0..trace.horizon() {
            let a = *trace.measure(m, k).map_err(|e| e.to_string())?;
            let b = *trace.measure(m, k + 1).map_err(|e| e.to_string())?;
            if b > bound * (1.0 + tol) * a {
                return Err(format!("{m:?} step {k}: {b} > {bound} * {a}"));
            }
        }
    }
    Ok(())
}

fn criterion_2(c: &mut Check, col: &mut Collected) {
    let families = [ProxFamily::Zero, ProxFamily::Nonneg, ProxFamily::L1];
    let classes = classes();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..50u64 {
        let p = &classes[i as usize % classes.len()];
        let dim = 1 + (i as usize * 7) % 20;
        let family = families[i as usize % families.len()];
        let Some(problem) = c.ok(random_composite(p, dim, family, 100 + i), "instance") else { continue };
        let x0: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..4.0)).collect();
        for gamma in step_grid(p) {
            let Some(trace) = c.ok(run_with_derived_s0(&problem, &gamma, &x0, 20), "run") else { continue };
            let bound = rho(p, &gamma).rho_squared;
            if let Err(e) = per_step_ok(&trace, bound, 1e-8) {
                c.require(false, || format!("instance {i} ({family:?}, dim {dim}) gamma={gamma}: {e}"));
            }
            col.fixed.push(trace);
        }
    }
}

fn criterion_3(c: &mut Check) -> f64 {
    let start = Instant::now();
    let grid = default_grid();
    c.require(grid.len() >= 100, || format!("grid has {} points", grid.len()));
    for regime in Regime::ALL {
        c.require(
            grid.iter().any(|(p, g, r)| *r == regime && *g == p.optimal_step()),
            || format!("{regime:?} missing at the boundary step"),
        );
    }
    for (p, gamma, regime) in &grid {
        for theorem in Theorem::ALL {
            let Some(r) = c.ok(verify(theorem, p, gamma, *regime, None), "verify") else { continue };
            c.require(r.verified, || format!("{theorem:?} {regime:?} mu={} L={} gamma={gamma}", p.mu(), p.l()));
        }
    }

    // expanded distance proof at mu = 1, L = 2, gamma = 1/2
    c.require(expanded_display_matches(), || "expanded distance display mismatch".into());

    let delta = Q::from_ratio(1, 1000);
    for (p, gamma, regime) in &grid {
        for theorem in Theorem::ALL {
            let (nm, ns) = certificate_shape(theorem);
            let mutations = (0..nm)
                .map(|index| Mutation::Multiplier { index, delta: delta.clone() })
                .chain((0..ns).map(|index| Mutation::SosCoefficient { index, delta: delta.clone() }));
            for m in mutations {
                let Some(r) = c.ok(verify(theorem, p, gamma, *regime, Some(&m)), "mutated verify") else { continue };
                c.require(!r.verified && !r.residual_zero, || {
                    format!("{theorem:?} {m:?} at mu={} L={} gamma={gamma} still verifies", p.mu(), p.l())
                });
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    c.require(secs <= 10.0, || format!("took {secs:.1}s"));
    secs
}

fn expanded_display_matches() -> bool {
    use pgm_tight::certificate::{build_certificate, LinComb, SymbolicExpr, VectorSymbol::*};
    let q = |n: i64, d: i64| Q::from_ratio(n, d);
    let (mu, l, g) = (q(1, 1), q(2, 1), q(1, 2));
    let params = ClassParams::new(mu.clone(), l.clone()).unwrap();
    let Ok(cert) = build_certificate(Theorem::Distance, &params, g.clone(), Regime::SmallStep, false) else {
        return false;
    };
    let g2 = g.clone() * g.clone();
    let m2 = mu.clone() * mu.clone();
    let two = q(2, 1);
    let outer = two.clone() / (l.clone() - mu.clone());
    // absolute-coordinate coefficients folded onto x_k - x*
    let terms = [
        ((Gk, Gk), g.clone() - g2.clone() * mu.clone()),
        ((Gk, Gs), g2.clone() * mu.clone() + g2.clone() * l.clone() - two.clone() * g.clone()),
        ((Gk, Sk1), g2.clone() * l.clone() - g2.clone() * mu.clone()),
        ((Gk, X), g2.clone() * m2.clone() + g2.clone() * mu.clone() * l.clone() - g.clone() * l.clone() - g.clone() * mu.clone()),
        ((Gs, Gs), g.clone() - g2.clone() * mu.clone()),
        ((Gs, Sk1), g2.clone() * l.clone() - g2.clone() * mu.clone()),
        ((Gs, X), two.clone() * g.clone() * mu.clone() - g2.clone() * m2.clone() - g2.clone() * mu.clone() * l.clone()),
        ((Sk1, Sk1), g2.clone() * l.clone() - g2.clone() * mu.clone()),
        ((Sk1, X), g.clone() * mu.clone() - g.clone() * l.clone()),
        ((X, X), g.clone() * mu.clone() * l.clone() - g2 * m2 * l),
    ];
    let display = terms.iter().fold(SymbolicExpr::zero(), |acc, ((u, v), coef)| {
        acc.add(&SymbolicExpr::inner(&LinComb::var(*u), &LinComb::var(*v)).scale(&(coef.clone() * outer.clone())))
    });
    display.add(&cert.weighted_sum()).is_zero()
}

fn criterion_4(c: &mut Check, col: &mut Collected) {
    for (mu, l) in [(1.0, 2.0), (1.0, 10.0), (0.5, 1.0)] {
        let p: Params = ClassParams::new(mu, l).unwrap();
        for n in [1usize, 2, 5] {
            for target in MixedTarget::ALL {
                let Some(spec) = c.ok(appendix_b_instance(&p, n, &1.0, target), "instance") else { continue };
                let Some(trace) = c.ok(spec.run_fixed(), "run") else { continue };
                let dev = spec.closed_form_deviation(&trace).unwrap_or(f64::INFINITY);
                c.require(dev.sqrt() <= 1e-12, || format!("{target:?} mu={mu} L={l} N={n}: iterate deviation {dev}"));
                let (a, b) = target.measures();
                let Some(attained) = c.ok(trace.ratio(a, b, n), "ratio") else { continue };
                let Some(table) = c.ok(bound_lookup(a, b, &p, &(1.0 / l), n as u32, BoundTable::Conjectured), "table") else { continue };
                let predicted = table.value().copied().unwrap_or(f64::NAN);
                c.require(rel_err(attained, predicted) <= 1e-10, || {
                    format!("{target:?} mu={mu} L={l} N={n}: attained {attained}, table {predicted}")
                });
                let own = spec.predicted[&(a, b)].value();
                c.require(rel_err(*own, predicted) <= 1e-10, || format!("{target:?}: instance predicts {own}"));
                col.fixed.push(trace);
            }
        }
    }
    // exact check of the worked value
    let p = ClassParams::new(Q::from_int(1), Q::from_int(2)).unwrap();
    let spec = appendix_b_instance(&p, 2, &Q::from_int(1), MixedTarget::DistToFuncGap).unwrap();
    let trace = spec.run_fixed().unwrap();
    let r = trace.ratio(MeasureKind::DistanceSq, MeasureKind::FuncGap, 2).unwrap();
    c.require(r == Q::from_ratio(1, 30), || format!("worked value {r}, expected 1/30"));
}

fn criterion_5(c: &mut Check, col: &mut Collected) {
    let (l, n) = (1.0, 5usize);
    let limit = l / (4.0 * n as f64);
    let mut scaled = Vec::new();
    for mu in [1e-2, 1e-4, 1e-6] {
        let p: Params = ClassParams::new(mu, l).unwrap();
        let Some(spec) = c.ok(appendix_b_instance(&p, n, &1.0, MixedTarget::DistToFuncGap), "instance") else { continue };
        let Some(trace) = c.ok(spec.run_fixed(), "run") else { continue };
        let Some(attained) = c.ok(trace.ratio(MeasureKind::DistanceSq, MeasureKind::FuncGap, n), "ratio") else { continue };
        let predicted = *spec.predicted[&MixedTarget::DistToFuncGap.measures()].value();
        c.require(rel_err(attained, predicted) <= 1e-8, || format!("mu={mu}: attained {attained} vs {predicted}"));
        scaled.push((attained - limit).abs() / mu);
        col.fixed.push(trace);
    }
    // error / mu should settle to a constant
    for w in scaled.windows(2) {
        c.require(w[0] > 0.0 && (w[1] / w[0] - 1.0).abs() <= 0.1, || format!("error/mu not proportional: {scaled:?}"));
    }
    c.require(scaled.last().map_or(false, |s| s * 1e-6 < 1e-5), || "no convergence to L/(4N)".into());

    let cells = [
        (MeasureKind::FuncGap, MeasureKind::DistanceSq),
        (MeasureKind::ResidualGradSq, MeasureKind::DistanceSq),
        (MeasureKind::ResidualGradSq, MeasureKind::FuncGap),
    ];
    let cs = [1e-2, 1e-3, 1e-4];
    let mut prev: Option<Vec<f64>> = None;
    for cval in cs {
        let Some(spec) = c.ok(unbounded_family(&cval, &l, n, &1.0), "unbounded instance") else { continue };
        let Some(trace) = c.ok(spec.run_fixed(), "run") else { continue };
        let mut witnesses = Vec::new();
        for (a, b) in cells {
            let w = *spec.predicted[&(a, b)].value();
            let Some(attained) = c.ok(trace.ratio(a, b, n), "ratio") else { continue };
            c.require(rel_err(attained, w) <= 1e-10, || format!("{a:?}->{b:?} c={cval}: {attained} vs {w}"));
            witnesses.push(attained);
        }
        if let Some(p) = &prev {
            for (i, (old, new)) in p.iter().zip(&witnesses).enumerate() {
                c.require(*new >= 10.0 * old, || format!("cell {i}: {old} -> {new} when c -> {cval}"));
            }
        }
        prev = Some(witnesses);
    }
}

fn criterion_6(c: &mut Check, col: &mut Collected) {
    for (mu, l) in [(1.0, 10.0), (1.0, 100.0)] {
        let p: Params = ClassParams::new(mu, l).unwrap();
        let bound = optimal_step(&p).1.rho_squared;
        let Some(spec) = c.ok(els_worst_quadratic(&p, 10), "instance") else { continue };
        let Some(trace) = c.ok(spec.run(), "exact line search") else { continue };
        for k in 0..10 {
            let r = trace.measure(MeasureKind::FuncGap, k + 1).unwrap() / trace.measure(MeasureKind::FuncGap, k).unwrap();
            c.require((r - bound).abs() <= 1e-8, || format!("mu={mu} L={l} step {k}: ratio {r} vs {bound}"));
        }
        col.other.push(trace);
    }

    let families = [ProxFamily::Zero, ProxFamily::Nonneg, ProxFamily::L1];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..20u64 {
        let p: Params = ClassParams::new(1.0, [10.0, 100.0][i as usize % 2]).unwrap();
        let bound = optimal_step(&p).1.rho_squared;
        let dim = 2 + i as usize % 9;
        let x0: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..3.0)).collect();
        let family = families[i as usize % 3];
        let Some(problem) = c.ok(random_composite(&p, dim, family, 600 + i), "instance") else { continue };
        let s0 = pgm_tight::pgm::derive_initial_subgradient(&problem, &x0).ok();
        let Some(trace) = c.ok(run_exact_line_search(&problem, &x0, 10, s0), "exact line search") else { continue };
        // gaps below rounding of the objective are not informative
        let floor = 1e-14 * trace.measure(MeasureKind::FuncGap, 0).unwrap().abs().max(1.0);
        for k in 0..10 {
            let a = *trace.measure(MeasureKind::FuncGap, k).unwrap();
            let b = *trace.measure(MeasureKind::FuncGap, k + 1).unwrap();
            c.require(b <= bound * a * (1.0 + 1e-8) + floor, || format!("ELS instance {i} ({family:?}) step {k}: {b} > {bound} * {a}"));
        }
        col.other.push(trace);

        let Some(smooth) = c.ok(random_composite(&p, dim, ProxFamily::Zero, 700 + i), "instance") else { continue };
        let Some(trace) = c.ok(run_residual_line_search(&smooth, &x0, 10), "residual line search") else { continue };
        let floor = 1e-14 * trace.measure(MeasureKind::ResidualGradSq, 0).unwrap().abs().max(1.0);
        for k in 0..10 {
            let a = *trace.measure(MeasureKind::ResidualGradSq, k).unwrap();
            let b = *trace.measure(MeasureKind::ResidualGradSq, k + 1).unwrap();
            c.require(b <= bound * a * (1.0 + 1e-8) + floor, || format!("RLS instance {i} step {k}: {b} > {bound} * {a}"));
        }
        col.other.push(trace);
    }
}

fn criterion_7(c: &mut Check, col: &Collected) -> usize {
    let mut checked = 0;
    let all = col.fixed.iter().chain(&col.other).chain(&col.tight);
    for trace in all {
        let p = trace.problem.params();
        if !p.is_strongly_convex() {
            continue;
        }
        for (k, rec) in trace.records.iter().enumerate() {
            let Some(triple) = MeasureTriple::from_record(rec) else { continue };
            let Some(slacks) = c.ok(check_proposition(&triple, p), "proposition") else { continue };
            for (conv, s) in slacks {
                checked += 1;
                c.require(s.holds(&1e-9), || format!("{conv:?} at record {k}: slack {} (scale {})", s.value, s.scale));
            }
        }
    }
    let cells = [
        (MeasureKind::FuncGap, MeasureKind::DistanceSq),
        (MeasureKind::ResidualGradSq, MeasureKind::DistanceSq),
        (MeasureKind::ResidualGradSq, MeasureKind::FuncGap),
    ];
    for trace in &col.fixed {
        let p = trace.problem.params();
        if !p.is_strongly_convex() || trace.any_outside_theory() || trace.records[0].measures.residual_grad_sq.is_none() {
            continue;
        }
        for k in 1..=trace.horizon() {
            for (a, b) in cells {
                let Some(s) = c.ok(check_mixed_bound(trace, a, b, k, BoundTable::Proven), "mixed bound") else { continue };
                checked += 1;
                c.require(s.holds(&1e-9), || format!("{a:?}->{b:?} k={k}: slack {}", s.value));
            }
        }
    }
    for trace in &col.tight {
        let k = trace.horizon();
        for (a, b) in cells {
            let Some(s) = c.ok(check_mixed_bound(trace, a, b, k, BoundTable::Proven), "mixed bound") else { continue };
            checked += 1;
            c.require(s.normalized().abs() <= 1e-10, || format!("f_mu {a:?}->{b:?}: slack {}", s.normalized()));
        }
    }
    checked
}

fn criterion_8(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let families = [ProxFamily::Zero, ProxFamily::Nonneg, ProxFamily::Box, ProxFamily::L1];
    let tol = 1e-12;
    for t in 0..100 {
        let dim = 1 + t % 6;
        let h = families[t % 4].instantiate::<f64>(dim);
        let gamma = rng.gen_range(0.05..3.0);
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let px = h.prox(&gamma, &x).unwrap();
        let py = h.prox(&gamma, &y).unwrap();
        let lhs = pgm_tight::linalg::dist_sq(&px, &py).sqrt();
        let rhs = pgm_tight::linalg::dist_sq(&x, &y).sqrt();
        c.require(lhs <= rhs + tol, || format!("nonexpansiveness: {lhs} > {rhs}"));

        let s: Vec<f64> = x.iter().zip(&px).map(|(a, b)| (a - b) / gamma).collect();
        let member = h.subgradient_membership(&px, &s, &tol).unwrap_or(false);
        c.require(member, || format!("residual {s:?} not a subgradient at {px:?}"));
    }
    for t in 0..100u64 {
        let p: Params = ClassParams::new(rng.gen_range(0.05..1.0), rng.gen_range(1.5..20.0)).unwrap();
        let dim = 1 + t as usize % 8;
        let family = families[t as usize % 4];
        let problem = random_composite(&p, dim, family, 800 + t).unwrap();
        let gamma = rng.gen_range(0.01..2.0) / p.l();
        let fixed = problem.is_fixed_point(&gamma, &(tol * tol)).unwrap_or(false);
        c.require(fixed, || format!("optimum of instance {t} is not a fixed point"));

        let f = random_instance(&p, dim, 900 + t).unwrap();
        let points: Vec<Vec<f64>> = (0..3).map(|_| (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
        let worst = f.check_interpolation(&p, &points).unwrap();
        let scale = points.iter().map(|x| f.value(x).unwrap().abs() + pgm_tight::linalg::norm_sq(x)).sum::<f64>();
        c.require(worst >= -tol * scale.max(1.0), || format!("interpolation violated: {worst}"));
    }
}

fn main() {
    let mut col = Collected::default();
    let mut results: Vec<(usize, &str, Check, String)> = Vec::new();

    let mut run = |id: usize, name: &'static str, f: &mut dyn FnMut(&mut Check) -> String| {
        let start = Instant::now();
        let mut c = Check::new();
        let note = f(&mut c);
        let note = format!("{note}{:.2}s", start.elapsed().as_secs_f64());
        results.push((id, name, c, note));
    };

    run(1, "diagonal tightness on worst-case quadratics", &mut |c| {
        criterion_1(c, &mut col);
        String::new()
    });
    run(2, "per-step envelope on random composite instances", &mut |c| {
        criterion_2(c, &mut col);
        String::new()
    });
    run(3, "exact certificates, expanded display, mutations", &mut |c| {
        criterion_3(c);
        String::new()
    });
    run(4, "constrained 1-D instance at gamma = 1/L", &mut |c| {
        criterion_4(c, &mut col);
        String::new()
    });
    run(5, "smooth convex limit and unbounded cells", &mut |c| {
        criterion_5(c, &mut col);
        String::new()
    });
    run(6, "exact and residual line search", &mut |c| {
        criterion_6(c, &mut col);
        String::new()
    });
    run(7, "measure conversions and mixed bounds", &mut |c| {
        let n = criterion_7(c, &col);
        format!("{n} slacks, ")
    });
    run(8, "prox and interpolation property suites", &mut |c| {
        criterion_8(c);
        String::new()
    });

    let mut failed = false;
    for (id, name, c, note) in &results {
        let verdict = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id}: {verdict} - {name} ({note})");
        for f in &c.failures {
            println!("    {f}");
        }
        failed |= !c.failures.is_empty();
    }
    if failed {
        std::process::exit(1);
    }
}
