//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use nls_expspline::basis::{eval_basis, nodal_weights, shape, Order};
use nls_expspline::diagnostics::DiagnosticsSeries;
use nls_expspline::experiment::{presets, simulate, RunConfig, RunOutcome, SweepConfig};
use nls_expspline::field::{fit_initial, Mesh};
use nls_expspline::stepper::{assemble, solve_step};

struct Verdict {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Verdict);

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn outcome(cfg: RunConfig) -> RunOutcome {
    let out = simulate(&cfg).expect("valid preset");
    if let Some(e) = &out.failure {
        panic!("{} failed: {e}", cfg.problem.kind());
    }
    out
}

fn rel_dev(series: &[f64], reference: f64) -> f64 {
    series.iter().map(|v| ((v - reference) / reference).abs()).fold(0.0, f64::max)
}

fn c1_single_soliton() -> Verdict {
    let e = outcome(presets::single_soliton()).final_linf.unwrap();
    verdict((0.0045..=0.0070).contains(&e), format!("L∞(t=1) = {e:.6}, want [0.0045, 0.0070]"))
}

fn c2_coarse() -> Verdict {
    let e = outcome(presets::single_soliton_coarse()).final_linf.unwrap();
    verdict((0.15..=0.23).contains(&e), format!("L∞(t=1) = {e:.6}, want [0.15, 0.23]"))
}

fn c3_sweep() -> Verdict {
    let cases = [(presets::single_soliton(), 0.002), (presets::single_soliton_coarse(), 0.008)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (base, limit) in cases {
        let h = base.mesh().unwrap().h;
        let cfg = SweepConfig { base, p_min: 1e-8, p_max: 10.0, grid_points: 19, refine_iters: 20 };
        let res = nls_expspline::experiment::sweep_in_memory(&cfg).unwrap();
        pass &= res.best.linf <= limit;
        parts.push(format!("h={h}: best L∞ = {:.6} at p = {:.3e} (want <= {limit})", res.best.linf, res.best.p));
    }
    verdict(pass, parts.join("; "))
}

fn c4_collision() -> Verdict {
    let out = outcome(presets::collision());
    let times_ok = out.series.len() == 13;
    let d1 = rel_dev(&out.series.c1, 4.0);
    let d2 = rel_dev(&out.series.c2, 14.6658);
    verdict(
        times_ok && d1 <= 5e-4 && d2 <= 1e-2,
        format!(
            "{} samples, max |C1-4|/4 = {d1:.2e} (<= 5e-4), max |C2-14.6658|/14.6658 = {d2:.2e} (<= 1e-2)",
            out.series.len()
        ),
    )
}

fn c5_standing() -> Verdict {
    let mut cfg = presets::maxwellian_standing();
    cfg.diagnostics_every = 10;
    let out = outcome(cfg);
    let d1 = rel_dev(&out.series.c1, 3.9710);
    let d2 = rel_dev(&out.series.c2, -4.9256);
    verdict(d1 <= 1e-3 && d2 <= 5e-3, format!("max C1 dev {d1:.2e} (<= 1e-3), max C2 dev {d2:.2e} (<= 5e-3)"))
}

fn c6_mobile() -> Verdict {
    let mut cfg = presets::maxwellian_mobile();
    cfg.diagnostics_every = 10;
    let out = outcome(cfg);
    let d1 = rel_dev(&out.series.c1, 3.97100);
    let d2 = rel_dev(&out.series.c2, 10.95838);
    let peak = out.final_peaks.iter().copied().max_by(|a, b| a.height.total_cmp(&b.height));
    let x = peak.map_or(f64::NAN, |p| p.position);
    verdict(
        d1 <= 1e-3 && d2 < 1.95e-2 && (x - 24.0).abs() <= 0.5,
        format!("max C1 dev {d1:.2e} (<= 1e-3), max C2 dev {d2:.2e} (< 1.95e-2), dominant peak at t=6: x = {x:.4} (24 ± 0.5)"),
    )
}

fn c7_birth() -> Verdict {
    let weak = outcome(presets::maxwellian_standing_weak());
    let strong = outcome(presets::maxwellian_standing());
    let ratio = weak.max_modulus_final / weak.max_modulus_initial;
    verdict(
        ratio < 0.6 && strong.max_modulus_final >= 1.4,
        format!(
            "A=1: max|U|(6)/max|U|(0) = {ratio:.4} (< 0.6); A=1.78: max|U|(6) = {:.4} (>= 1.4)",
            strong.max_modulus_final
        ),
    )
}

fn c8_bound_states() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [4, 5] {
        let mut cfg = presets::bound_state(m);
        cfg.density = false;
        let out = simulate(&cfg).unwrap();
        let drift = DiagnosticsSeries::max_relative_drift(&out.series.c1);
        let done = out.succeeded() && out.steps_done == out.steps_planned;
        pass &= done && drift <= 0.01;
        parts.push(format!("M={m}: reached t = {:.3}, C1 drift {:.2}% (<= 1%)", out.final_time(), 100.0 * drift));
    }
    verdict(pass, parts.join("; "))
}

/// Property checks on the basis, with `eval_basis` compared to the closed
/// form weights and to itself across junctions.
fn c9_basis() -> Verdict {
    let ps = [1e-6, 1e-3, 0.1, 1.0, 5.0];
    let hs = [0.01, 0.1, 1.0];
    let (mut nodal, mut junction, mut symmetry) = (0.0f64, 0.0f64, 0.0f64);
    let orders = [Order::Value, Order::First, Order::Second];
    for &p in &ps {
        for &h in &hs {
            let sh = shape(p, h).unwrap();
            let w = nodal_weights(&sh);
            let i = 3i64;
            let at = |k: i64, o: Order| eval_basis(i, (i + k) as f64 * h, &sh, 0.0, o);
            let expect = [
                [0.0, w.alpha1, 1.0, w.alpha1, 0.0],
                [0.0, -w.beta1, 0.0, w.beta1, 0.0],
                [0.0, w.gamma1, w.gamma0, w.gamma1, 0.0],
            ];
            for (o, row) in orders.iter().zip(expect) {
                let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (k, want) in (-2..=2).zip(row) {
                    nodal = nodal.max((at(k, *o) - want).abs() / scale);
                }
            }
            let local = p * p * sh.s / sh.denom;
            let eps = 1e-10 * h;
            for k in -2..=2 {
                let x = (i + k) as f64 * h;
                for o in orders {
                    let jump = (eval_basis(i, x + eps, &sh, 0.0, o) - eval_basis(i, x - eps, &sh, 0.0, o)).abs();
                    junction = junction.max(jump / local);
                }
            }
            for f in [0.1, 0.37, 0.5, 0.93, 1.0, 1.41, 1.99] {
                let (l, r) = ((i as f64 - f) * h, (i as f64 + f) * h);
                let v = (eval_basis(i, l, &sh, 0.0, Order::Value) - eval_basis(i, r, &sh, 0.0, Order::Value)).abs();
                let d = (eval_basis(i, l, &sh, 0.0, Order::First) + eval_basis(i, r, &sh, 0.0, Order::First)).abs();
                symmetry = symmetry.max(v).max(d * h);
            }
        }
    }
    // cubic limit: error against (1/4, -3/(4h), 3/(2h²)) shrinks like (ph)²
    let h = 0.05;
    let err = |p: f64| {
        let w = nodal_weights(&shape(p, h).unwrap());
        ((w.alpha1 - 0.25) / 0.25)
            .abs()
            .max((w.beta1 * 4.0 * h / 3.0 + 1.0).abs())
            .max((w.gamma1 * h * h / 1.5 - 1.0).abs())
    };
    let rate = err(0.2 / h) / err(0.1 / h);
    let limit = err(1e-6);
    let pass = nodal <= 1e-10 && junction <= 1e-9 && symmetry <= 1e-12 && (3.8..4.2).contains(&rate) && limit <= 1e-8;
    verdict(
        pass,
        format!(
            "nodal {nodal:.1e} (<= 1e-10), junction {junction:.1e} (<= 1e-9), symmetry {symmetry:.1e}, cubic-limit ratio {rate:.3} (≈4), |w - cubic| at p=1e-6: {limit:.1e}"
        ),
    )
}

/// `N = 4`, `q = 0` step matrix against a dense assembly built directly
/// from `eval_basis`, then banded solve against dense LU.
fn c10_oracle() -> Verdict {
    let (n, a, b, p, dt) = (4usize, -1.0, 1.0, 1.3, 0.01);
    let mesh = Mesh::new(a, b, n).unwrap();
    let sh = shape(p, mesh.h).unwrap();
    let w = sh.nodal_weights();
    let nb = n + 3; // B_{-1} .. B_{N+1}
    let basis = |j: usize, m: usize, o: Order| eval_basis(j as i64 - 1, mesh.knot(m), &sh, a, o);

    // Full CN system in the coefficients (δ_{-1..N+1}, φ_{-1..N+1}).
    let mut full = DMatrix::<f64>::zeros(2 * (n + 1), 2 * nb);
    for m in 0..=n {
        for j in 0..nb {
            let (v, d2) = (basis(j, m, Order::Value), basis(j, m, Order::Second));
            full[(2 * m, j)] = -dt * d2;
            full[(2 * m, nb + j)] = 2.0 * v;
            full[(2 * m + 1, j)] = 2.0 * v;
            full[(2 * m + 1, nb + j)] = dt * d2;
        }
    }
    // U(a) = U(b) = 0 expresses the exterior coefficients in the interior ones.
    let mut t = DMatrix::<f64>::zeros(2 * nb, 2 * (n + 1));
    for comp in 0..2 {
        let col = |i: usize| 2 * i + comp;
        for i in 0..=n {
            t[(comp * nb + i + 1, col(i))] = 1.0;
        }
        let left = basis(0, 0, Order::Value);
        for j in [1, 2] {
            t[(comp * nb, col(j - 1))] = -basis(j, 0, Order::Value) / left;
        }
        let right = basis(nb - 1, n, Order::Value);
        for j in [nb - 2, nb - 3] {
            t[(comp * nb + nb - 1, col(j - 1))] = -basis(j, n, Order::Value) / right;
        }
    }
    let oracle = &full * &t;

    let sys = assemble(&nls_expspline::field::WaveState::zeros(n, 0.0), 0.0, dt, &w);
    let mut matrix_err = 0.0f64;
    for r in 0..sys.dim() {
        for c in 0..sys.dim() {
            matrix_err = matrix_err.max((sys.matrix.get(r, c) - oracle[(r, c)]).abs());
        }
    }

    // Solve with a nonlinear, non-trivial state.
    let u0 = |x: f64| Complex64::from_polar((-(x * x)).exp() * (1.0 - x * x), 1.5 * x);
    let du = |x: f64| {
        let e = (-(x * x)).exp();
        let env = e * (1.0 - x * x);
        let denv = e * (-2.0 * x * (1.0 - x * x) - 2.0 * x);
        Complex64::from_polar(1.0, 1.5 * x) * Complex64::new(denv, 1.5 * env)
    };
    let state = fit_initial(u0, du, &mesh, &sh).unwrap();
    let sys = assemble(&state, 2.0, dt, &w);
    let banded = solve_step(&sys).unwrap();
    let dense = DMatrix::from_fn(sys.dim(), sys.dim(), |r, c| sys.matrix.get(r, c));
    let x = dense.lu().solve(&DVector::from_column_slice(&sys.rhs)).unwrap();
    let solve_err = banded.iter().zip(x.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let scale = x.amax();

    verdict(
        matrix_err <= 1e-12 && solve_err <= 1e-12 * scale.max(1.0),
        format!("max entry diff {matrix_err:.1e} (<= 1e-12), max solve diff {solve_err:.1e} (|x| ~ {scale:.2})"),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 single soliton baseline", c1_single_soliton),
        ("2 coarse-mesh baseline", c2_coarse),
        ("3 p-sweep gains", c3_sweep),
        ("4 collision invariants", c4_collision),
        ("5 standing Maxwellian invariants", c5_standing),
        ("6 mobile Maxwellian invariants and peak", c6_mobile),
        ("7 soliton birth dichotomy", c7_birth),
        ("8 bound state smoke", c8_bound_states),
        ("9 basis property suite", c9_basis),
        ("10 oracle equivalence", c10_oracle),
    ];
    let verdicts: Vec<Verdict> = criteria.par_iter().map(|(_, f)| f()).collect();
    let mut failed = 0;
    for ((name, _), v) in criteria.iter().zip(&verdicts) {
        println!("[{}] criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
