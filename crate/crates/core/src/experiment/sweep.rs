//! Search over the tension parameter `p` for the smallest final error.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::config::{RunConfig, SweepConfig};
use super::run::fmt_f64;
use crate::error::Result;
use crate::simulation::{step_count, Simulation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub p: f64,
    /// Final-time error; infinite when the run failed.
    pub linf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Every evaluation, ordered by `p`.
    pub points: Vec<SweepPoint>,
    pub best: SweepPoint,
}

/// Final `L∞` of `base` run with tension `p`, or infinity if anything fails.
pub fn evaluate(base: &RunConfig, p: f64) -> f64 {
    let go = || -> Result<f64> {
        let mut sim = Simulation::new(base.problem, base.mesh()?, p, base.dt)?;
        sim.advance_by(step_count(base.t_end, base.dt))?;
        Ok(sim.linf_error().unwrap_or(f64::INFINITY))
    };
    match go() {
        Ok(e) if e.is_finite() => e,
        Ok(_) => f64::INFINITY,
        Err(e) => {
            log::warn!("p = {p}: {e}");
            f64::INFINITY
        }
    }
}

/// Log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

fn better(a: &SweepPoint, b: &SweepPoint) -> std::cmp::Ordering {
    a.linf.total_cmp(&b.linf).then(a.p.total_cmp(&b.p))
}

/// Grid search in parallel, then golden-section refinement in `ln p` inside
/// the grid cells adjacent to the best grid point.
pub fn search<F>(cfg: &SweepConfig, objective: F) -> SweepResult
where
    F: Fn(f64) -> f64 + Sync,
{
    let grid = log_grid(cfg.p_min, cfg.p_max, cfg.grid_points);
    let mut points: Vec<SweepPoint> = grid.par_iter().map(|&p| SweepPoint { p, linf: objective(p) }).collect();

    let i_best = (0..points.len()).min_by(|&i, &j| better(&points[i], &points[j])).unwrap_or(0);
    let (mut lo, mut hi) = (grid[i_best.saturating_sub(1)].ln(), grid[(i_best + 1).min(grid.len() - 1)].ln());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let eval = |u: f64, points: &mut Vec<SweepPoint>| {
        let p = u.exp();
        let linf = objective(p);
        points.push(SweepPoint { p, linf });
        linf
    };
    if cfg.refine_iters > 0 {
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut f1 = eval(x1, &mut points);
        let mut f2 = eval(x2, &mut points);
        for _ in 0..cfg.refine_iters {
            if f1 <= f2 {
                hi = x2;
                (x2, f2) = (x1, f1);
                x1 = hi - inv_phi * (hi - lo);
                f1 = eval(x1, &mut points);
            } else {
                lo = x1;
                (x1, f1) = (x2, f2);
                x2 = lo + inv_phi * (hi - lo);
                f2 = eval(x2, &mut points);
            }
        }
    }

    points.sort_by(|a, b| a.p.total_cmp(&b.p));
    let best = *points.iter().min_by(|a, b| better(a, b)).expect("grid is never empty");
    SweepResult { points, best }
}

/// Validates the config and searches with the real solver.
pub fn sweep_in_memory(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    Ok(search(cfg, |p| evaluate(&cfg.base, p)))
}

pub fn sweep_csv(res: &SweepResult) -> String {
    let mut s = String::from("p,linf\n");
    for pt in &res.points {
        let _ = writeln!(s, "{},{}", fmt_f64(pt.p), fmt_f64(pt.linf));
    }
    s
}

pub fn best_text(res: &SweepResult) -> String {
    format!("p = {}\nlinf = {}\nevaluations = {}\n", fmt_f64(res.best.p), fmt_f64(res.best.linf), res.points.len())
}

/// Runs the sweep and writes `sweep.csv`, `sweep_best.txt` and `config.txt`
/// into the output directory of the base run.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    let res = sweep_in_memory(cfg)?;
    write_outputs(cfg, &res, &cfg.base.out_dir)?;
    Ok(res)
}

pub fn write_outputs(cfg: &SweepConfig, res: &SweepResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("sweep.csv"), sweep_csv(res))?;
    fs::write(dir.join("sweep_best.txt"), best_text(res))?;
    fs::write(dir.join("config.txt"), cfg.to_config_string())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::presets;

    fn cfg(lo: f64, hi: f64, n: usize, iters: usize) -> SweepConfig {
        SweepConfig { base: presets::single_soliton(), p_min: lo, p_max: hi, grid_points: n, refine_iters: iters }
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = log_grid(1e-8, 10.0, 19);
        assert_eq!((g[0], g[18]), (1e-8, 10.0));
        assert!((g[8] - 1e-8 * 10f64.powf(8.0 * 9.0 / 18.0)).abs() < 1e-12 * g[8]);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn finds_minimum_of_smooth_objective() {
        let target = 3.7e-3f64;
        let res = search(&cfg(1e-6, 1.0, 7, 40), |p| (p.ln() - target.ln()).powi(2));
        assert!((res.best.p / target - 1.0).abs() < 1e-6, "{:?}", res.best);
        assert_eq!(res.points.len(), 7 + 42);
        assert!(res.points.windows(2).all(|w| w[0].p <= w[1].p));
    }

    #[test]
    fn best_is_minimum_of_records() {
        // rugged objective with failures
        let f = |p: f64| if p > 0.5 { f64::INFINITY } else { (37.0 * p.ln()).sin() + 0.1 * p };
        let res = search(&cfg(1e-4, 10.0, 11, 15), f);
        let min = res.points.iter().map(|p| p.linf).fold(f64::INFINITY, f64::min);
        assert_eq!(res.best.linf, min);
    }

    #[test]
    fn three_point_grid_argmin() {
        let res = search(&cfg(1.0, 10.0, 3, 0), |p| (p - 3.0).abs());
        assert_eq!(res.points.len(), 3);
        assert_eq!(res.best.p, 10f64.sqrt());
    }

    #[test]
    fn all_failures_still_report() {
        let res = search(&cfg(1.0, 10.0, 3, 2), |_| f64::INFINITY);
        assert!(res.best.linf.is_infinite());
        assert_eq!(res.best.p, 1.0);
    }
}
