//! Single runs: time loop, bookkeeping and output files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use super::config::RunConfig;
use crate::diagnostics::{DiagnosticsSeries, Peak};
use crate::error::{Error, Result};
use crate::field::Mesh;
use crate::simulation::{step_count, Simulation};

/// Knot values of `U` at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub mesh: Mesh,
    pub steps_planned: usize,
    pub steps_done: usize,
    pub series: DiagnosticsSeries,
    pub snapshots: Vec<Snapshot>,
    /// `(t, |U(x_0)|, ..., |U(x_N)|)` rows, filled when `density` is on.
    pub density: Vec<(f64, Vec<f64>)>,
    pub final_linf: Option<f64>,
    pub final_linf_complex: Option<f64>,
    pub final_peaks: Vec<Peak>,
    pub max_modulus_initial: f64,
    pub max_modulus_final: f64,
    /// The error that stopped the run early, if any.
    pub failure: Option<Error>,
    pub wall_time: Duration,
}

impl RunOutcome {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }

    pub fn final_time(&self) -> f64 {
        self.series.times.last().copied().unwrap_or(0.0)
    }
}

fn due(step: usize, every: usize, last: usize) -> bool {
    step == 0 || step == last || (every > 0 && step.is_multiple_of(every))
}

struct Recorder<'a> {
    cfg: &'a RunConfig,
    out: RunOutcome,
}

impl Recorder<'_> {
    fn record(&mut self, sim: &Simulation, last: usize) {
        let k = sim.steps_taken();
        let seen = self.out.series.times.last() == Some(&sim.time());
        if due(k, self.cfg.diagnostics_every, last) && !seen {
            let (c1, c2) = sim.invariants();
            self.out.series.push(sim.time(), sim.linf_error(), c1, c2, sim.peaks());
            if self.cfg.density {
                self.out.density.push((sim.time(), sim.knot_values().iter().map(|u| u.norm()).collect()));
            }
        }
        if due(k, self.cfg.snapshot_every, last) && self.out.snapshots.last().map(|s| s.step) != Some(k) {
            self.out.snapshots.push(Snapshot { step: k, t: sim.time(), values: sim.knot_values() });
        }
    }
}

/// Runs the experiment in memory. Numerical failures during stepping are
/// reported in [`RunOutcome::failure`]; configuration problems and a failed
/// initial fit are returned as errors.
pub fn simulate(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let mesh = cfg.mesh()?;
    let mut sim = Simulation::new(cfg.problem, mesh, cfg.p, cfg.dt)?;
    let last = step_count(cfg.t_end, cfg.dt);
    log::info!("{}: N = {}, h = {}, {} steps of {}", cfg.problem.kind(), mesh.n, mesh.h, last, cfg.dt);

    let mut rec = Recorder {
        cfg,
        out: RunOutcome {
            config: cfg.clone(),
            mesh,
            steps_planned: last,
            steps_done: 0,
            series: DiagnosticsSeries::default(),
            snapshots: Vec::new(),
            density: Vec::new(),
            final_linf: None,
            final_linf_complex: None,
            final_peaks: Vec::new(),
            max_modulus_initial: sim.max_modulus(),
            max_modulus_final: 0.0,
            failure: None,
            wall_time: Duration::ZERO,
        },
    };
    rec.record(&sim, last);
    while sim.steps_taken() < last {
        if let Err(e) = sim.advance() {
            log::warn!("step {} failed: {e}", sim.steps_taken() + 1);
            rec.out.failure = Some(e);
            // keep the last good level in the series
            let stop = sim.steps_taken();
            rec.record(&sim, stop);
            break;
        }
        rec.record(&sim, last);
    }

    let mut out = rec.out;
    out.steps_done = sim.steps_taken();
    out.final_linf = sim.linf_error();
    out.final_linf_complex = sim.linf_complex_error();
    out.final_peaks = sim.peaks();
    out.max_modulus_final = sim.max_modulus();
    out.wall_time = started.elapsed();
    Ok(out)
}

/// Runs the experiment and writes its files into `cfg.out_dir`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let out = simulate(cfg)?;
    write_outputs(&out, &cfg.out_dir)?;
    Ok(out)
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_csv(mesh: &Mesh, snap: &Snapshot) -> String {
    let mut s = String::from("x,re,im,abs\n");
    for (i, u) in snap.values.iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{}", fmt_f64(mesh.knot(i)), fmt_f64(u.re), fmt_f64(u.im), fmt_f64(u.norm()));
    }
    s
}

pub fn diagnostics_csv(series: &DiagnosticsSeries) -> String {
    let mut s = String::from("t,linf,c1,c2\n");
    for i in 0..series.len() {
        let linf = series.linf.get(i).map(|&e| fmt_f64(e)).unwrap_or_default();
        let _ =
            writeln!(s, "{},{},{},{}", fmt_f64(series.times[i]), linf, fmt_f64(series.c1[i]), fmt_f64(series.c2[i]));
    }
    s
}

pub fn density_csv(mesh: &Mesh, rows: &[(f64, Vec<f64>)]) -> String {
    let join = |v: &mut dyn Iterator<Item = f64>| v.map(fmt_f64).collect::<Vec<_>>().join(",");
    let mut s = join(&mut mesh.knots().into_iter());
    s.push('\n');
    for (t, m) in rows {
        s.push_str(&join(&mut std::iter::once(*t).chain(m.iter().copied())));
        s.push('\n');
    }
    s
}

pub fn summary_text(out: &RunOutcome) -> String {
    let series = &out.series;
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    match &out.failure {
        None => kv("status", "ok".into()),
        Some(e) => {
            kv("status", "failed".into());
            kv("failed_step", (out.steps_done + 1).to_string());
            kv("error", e.to_string());
        }
    }
    kv("problem", out.config.problem.kind().into());
    kv("q", out.config.problem.q().to_string());
    kv("p", out.config.p.to_string());
    kv("n", out.mesh.n.to_string());
    kv("h", out.mesh.h.to_string());
    kv("dt", out.config.dt.to_string());
    kv("steps", format!("{}/{}", out.steps_done, out.steps_planned));
    kv("t_final", out.final_time().to_string());
    if let (Some(e), Some(ec)) = (out.final_linf, out.final_linf_complex) {
        kv("linf", fmt_f64(e));
        kv("linf_complex", fmt_f64(ec));
    }
    if let (Some(&c1a), Some(&c1b), Some(&c2a), Some(&c2b)) =
        (series.c1.first(), series.c1.last(), series.c2.first(), series.c2.last())
    {
        kv("c1_initial", fmt_f64(c1a));
        kv("c1_final", fmt_f64(c1b));
        kv("c1_max_drift", fmt_f64(DiagnosticsSeries::max_relative_drift(&series.c1)));
        kv("c2_initial", fmt_f64(c2a));
        kv("c2_final", fmt_f64(c2b));
        kv("c2_max_drift", fmt_f64(DiagnosticsSeries::max_relative_drift(&series.c2)));
    }
    if let Some((c1, c2)) = out.config.problem.analytic_invariants() {
        kv("c1_analytic", fmt_f64(c1));
        kv("c2_analytic", fmt_f64(c2));
    }
    kv("max_abs_initial", fmt_f64(out.max_modulus_initial));
    kv("max_abs_final", fmt_f64(out.max_modulus_final));
    let peaks: Vec<String> =
        out.final_peaks.iter().map(|p| format!("{}@{}", fmt_f64(p.height), fmt_f64(p.position))).collect();
    kv("peaks", peaks.join(" "));
    kv("wall_time_s", format!("{:.3}", out.wall_time.as_secs_f64()));
    s
}

pub fn write_outputs(out: &RunOutcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for snap in &out.snapshots {
        fs::write(dir.join(format!("snapshot_{:06}.csv", snap.step)), snapshot_csv(&out.mesh, snap))?;
    }
    fs::write(dir.join("diagnostics.csv"), diagnostics_csv(&out.series))?;
    if out.config.density {
        fs::write(dir.join("density.csv"), density_csv(&out.mesh, &out.density))?;
    }
    fs::write(dir.join("config.txt"), out.config.to_config_string())?;
    fs::write(dir.join("summary.txt"), summary_text(out))?;
    Ok(())
}
