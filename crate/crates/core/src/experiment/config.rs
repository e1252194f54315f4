//! Line-oriented `key = value` configuration.
//!
//! A run is described by layering: an optional preset, then the config file,
//! then command-line overrides. Inside one layer `problem.kind` is applied
//! before the problem parameters, so the order of lines does not matter.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::field::Mesh;
use crate::problems::{ProblemSpec, SolitonParams};

/// Mesh resolution, given either as an interval count or a spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    Intervals(usize),
    Spacing(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub a: f64,
    pub b: f64,
    pub resolution: Resolution,
    pub dt: f64,
    pub t_end: f64,
    pub p: f64,
    /// Steps between snapshots; 0 keeps only the first and last.
    pub snapshot_every: usize,
    /// Steps between diagnostics rows; 0 keeps only the first and last.
    pub diagnostics_every: usize,
    pub out_dir: PathBuf,
    /// Also write `density.csv` at the diagnostics cadence.
    pub density: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub p_min: f64,
    pub p_max: f64,
    pub grid_points: usize,
    pub refine_iters: usize,
}

impl RunConfig {
    pub fn mesh(&self) -> Result<Mesh> {
        match self.resolution {
            Resolution::Intervals(n) => Mesh::new(self.a, self.b, n),
            Resolution::Spacing(h) => Mesh::with_spacing(self.a, self.b, h),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return bad(format!("domain [{}, {}] is empty or not finite", self.a, self.b));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return bad(format!("t_end = {} must be at least dt = {}", self.t_end, self.dt));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return bad(format!("p must be positive, got {}", self.p));
        }
        self.problem.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.mesh().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    /// Canonical `key = value` text; parsing it back gives the same config.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in problem_entries(&self.problem) {
            let _ = writeln!(out, "{k} = {v}");
        }
        let _ = writeln!(out, "a = {:?}", self.a);
        let _ = writeln!(out, "b = {:?}", self.b);
        match self.resolution {
            Resolution::Intervals(n) => writeln!(out, "n = {n}"),
            Resolution::Spacing(h) => writeln!(out, "h = {h:?}"),
        }
        .ok();
        let _ = writeln!(out, "dt = {:?}", self.dt);
        let _ = writeln!(out, "t_end = {:?}", self.t_end);
        let _ = writeln!(out, "p = {:?}", self.p);
        let _ = writeln!(out, "snapshot_every = {}", self.snapshot_every);
        let _ = writeln!(out, "diagnostics_every = {}", self.diagnostics_every);
        let _ = writeln!(out, "out_dir = {}", self.out_dir.display());
        let _ = writeln!(out, "density = {}", self.density);
        out
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !self.base.problem.has_exact() {
            return Err(Error::Config(format!(
                "sweep needs a problem with an exact solution, got {}",
                self.base.problem.kind()
            )));
        }
        if !(self.p_min > 0.0 && self.p_min < self.p_max && self.p_max.is_finite()) {
            return Err(Error::Config(format!("need 0 < p_min < p_max, got [{}, {}]", self.p_min, self.p_max)));
        }
        if self.grid_points < 3 {
            return Err(Error::Config(format!("grid_points must be at least 3, got {}", self.grid_points)));
        }
        Ok(())
    }

    pub fn to_config_string(&self) -> String {
        format!(
            "{}sweep.p_min = {:?}\nsweep.p_max = {:?}\nsweep.grid_points = {}\nsweep.refine_iters = {}\n",
            self.base.to_config_string(),
            self.p_min,
            self.p_max,
            self.grid_points,
            self.refine_iters
        )
    }
}

fn problem_entries(p: &ProblemSpec) -> Vec<(&'static str, String)> {
    let mut v = vec![("problem.kind", p.kind().to_string())];
    match *p {
        ProblemSpec::SingleSoliton { q, alpha, speed } => {
            v.push(("problem.q", format!("{q:?}")));
            v.push(("problem.alpha", format!("{alpha:?}")));
            v.push(("problem.speed", format!("{speed:?}")));
        }
        ProblemSpec::Collision { q, first, second } => {
            v.push(("problem.q", format!("{q:?}")));
            let keys = [
                ["problem.alpha1", "problem.speed1", "problem.x1"],
                ["problem.alpha2", "problem.speed2", "problem.x2"],
            ];
            for (s, names) in [first, second].into_iter().zip(keys) {
                for (k, x) in names.into_iter().zip([s.alpha, s.speed, s.center]) {
                    v.push((k, format!("{x:?}")));
                }
            }
        }
        ProblemSpec::MaxwellianStanding { q, amplitude } | ProblemSpec::MaxwellianMobile { q, amplitude } => {
            v.push(("problem.q", format!("{q:?}")));
            v.push(("problem.amplitude", format!("{amplitude:?}")));
        }
        ProblemSpec::BoundState { m } => v.push(("problem.m", m.to_string())),
    }
    v
}

/// One `key = value` assignment with its origin for error messages.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub origin: String,
}

/// Splits config text into entries, skipping blanks and `#` comments.
pub fn parse_entries(text: &str, source: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let origin = format!("{source}:{}", no + 1);
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{origin}: expected `key = value`, got `{line}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Config(format!("{origin}: empty key or value in `{line}`")));
        }
        out.push(Entry { key: k.to_string(), value: v.to_string(), origin });
    }
    Ok(out)
}

/// Parses one `key=value` override from the command line.
pub fn parse_override(arg: &str) -> Result<Entry> {
    let mut entries = parse_entries(arg, "--set")?;
    match (entries.pop(), entries.is_empty()) {
        (Some(e), true) => Ok(e),
        _ => Err(Error::Config(format!("--set expects key=value, got `{arg}`"))),
    }
}

/// Accumulates layers into run and sweep settings.
#[derive(Debug, Clone, Default)]
pub struct ConfigBuilder {
    problem: Option<ProblemSpec>,
    a: Option<f64>,
    b: Option<f64>,
    resolution: Option<Resolution>,
    dt: Option<f64>,
    t_end: Option<f64>,
    p: Option<f64>,
    snapshot_every: Option<usize>,
    diagnostics_every: Option<usize>,
    out_dir: Option<PathBuf>,
    density: Option<bool>,
    p_min: Option<f64>,
    p_max: Option<f64>,
    grid_points: Option<usize>,
    refine_iters: Option<usize>,
}

pub const DEFAULT_P: f64 = 1.0;
pub const DEFAULT_OUT_DIR: &str = "out";
pub const DEFAULT_P_MIN: f64 = 1e-8;
pub const DEFAULT_P_MAX: f64 = 10.0;
pub const DEFAULT_GRID_POINTS: usize = 19;
pub const DEFAULT_REFINE_ITERS: usize = 20;

fn parse_num<T: std::str::FromStr>(e: &Entry) -> Result<T> {
    e.value.parse().map_err(|_| Error::Config(format!("{}: cannot parse `{}` for `{}`", e.origin, e.value, e.key)))
}

fn default_problem(kind: &str) -> Option<ProblemSpec> {
    let kind = kind.replace('-', "_");
    Some(match kind.as_str() {
        "single_soliton" => ProblemSpec::SingleSoliton { q: 2.0, alpha: 1.0, speed: 4.0 },
        "collision" => ProblemSpec::Collision {
            q: 2.0,
            first: SolitonParams { alpha: 1.0, speed: -4.0, center: 10.0 },
            second: SolitonParams { alpha: 1.0, speed: 4.0, center: -10.0 },
        },
        "maxwellian_standing" => ProblemSpec::MaxwellianStanding { q: 2.0, amplitude: 1.78 },
        "maxwellian_mobile" => ProblemSpec::MaxwellianMobile { q: 2.0, amplitude: 1.78 },
        "bound_state" => ProblemSpec::BoundState { m: 4 },
        _ => return None,
    })
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts from an existing run config, e.g. a preset.
    pub fn from_run(cfg: &RunConfig) -> Self {
        Self {
            problem: Some(cfg.problem),
            a: Some(cfg.a),
            b: Some(cfg.b),
            resolution: Some(cfg.resolution),
            dt: Some(cfg.dt),
            t_end: Some(cfg.t_end),
            p: Some(cfg.p),
            snapshot_every: Some(cfg.snapshot_every),
            diagnostics_every: Some(cfg.diagnostics_every),
            out_dir: Some(cfg.out_dir.clone()),
            density: Some(cfg.density),
            ..Self::default()
        }
    }

    /// Applies one layer of assignments.
    pub fn apply(&mut self, entries: &[Entry]) -> Result<()> {
        let has = |k: &str| entries.iter().any(|e| e.key == k);
        if has("n") && has("h") {
            return Err(Error::Config("set either `n` or `h`, not both".into()));
        }
        let (kinds, rest): (Vec<&Entry>, Vec<&Entry>) = entries.iter().partition(|e| e.key == "problem.kind");
        for e in kinds.into_iter().chain(rest) {
            self.set(e)?;
        }
        Ok(())
    }

    fn set(&mut self, e: &Entry) -> Result<()> {
        match e.key.as_str() {
            "problem.kind" => {
                let p = default_problem(&e.value)
                    .ok_or_else(|| Error::Config(format!("{}: unknown problem kind `{}`", e.origin, e.value)))?;
                self.problem = Some(p);
            }
            k if k.starts_with("problem.") => self.set_problem(&k["problem.".len()..], e)?,
            "a" => self.a = Some(parse_num(e)?),
            "b" => self.b = Some(parse_num(e)?),
            "n" => self.resolution = Some(Resolution::Intervals(parse_num(e)?)),
            "h" => self.resolution = Some(Resolution::Spacing(parse_num(e)?)),
            "dt" => self.dt = Some(parse_num(e)?),
            "t_end" => self.t_end = Some(parse_num(e)?),
            "p" => self.p = Some(parse_num(e)?),
            "snapshot_every" => self.snapshot_every = Some(parse_num(e)?),
            "diagnostics_every" => self.diagnostics_every = Some(parse_num(e)?),
            "out_dir" => self.out_dir = Some(PathBuf::from(&e.value)),
            "density" => self.density = Some(parse_num(e)?),
            "sweep.p_min" => self.p_min = Some(parse_num(e)?),
            "sweep.p_max" => self.p_max = Some(parse_num(e)?),
            "sweep.grid_points" => self.grid_points = Some(parse_num(e)?),
            "sweep.refine_iters" => self.refine_iters = Some(parse_num(e)?),
            other => return Err(Error::Config(format!("{}: unknown key `{other}`", e.origin))),
        }
        Ok(())
    }

    fn set_problem(&mut self, field: &str, e: &Entry) -> Result<()> {
        let problem = self
            .problem
            .as_mut()
            .ok_or_else(|| Error::Config(format!("{}: `{}` given before `problem.kind`", e.origin, e.key)))?;
        let kind = problem.kind();
        let slot: Option<&mut f64> = match (problem, field) {
            (ProblemSpec::BoundState { m }, "m" | "M") => {
                *m = parse_num(e)?;
                return Ok(());
            }
            (ProblemSpec::BoundState { .. }, "q") => {
                return Err(Error::Config(format!("{}: bound state fixes q = 2M², set `problem.m`", e.origin)));
            }
            (
                ProblemSpec::SingleSoliton { q, .. }
                | ProblemSpec::Collision { q, .. }
                | ProblemSpec::MaxwellianStanding { q, .. }
                | ProblemSpec::MaxwellianMobile { q, .. },
                "q",
            ) => Some(q),
            (ProblemSpec::SingleSoliton { alpha, .. }, "alpha") => Some(alpha),
            (ProblemSpec::SingleSoliton { speed, .. }, "speed" | "S") => Some(speed),
            (ProblemSpec::Collision { first, .. }, "alpha1") => Some(&mut first.alpha),
            (ProblemSpec::Collision { first, .. }, "speed1" | "S1") => Some(&mut first.speed),
            (ProblemSpec::Collision { first, .. }, "x1") => Some(&mut first.center),
            (ProblemSpec::Collision { second, .. }, "alpha2") => Some(&mut second.alpha),
            (ProblemSpec::Collision { second, .. }, "speed2" | "S2") => Some(&mut second.speed),
            (ProblemSpec::Collision { second, .. }, "x2") => Some(&mut second.center),
            (
                ProblemSpec::MaxwellianStanding { amplitude, .. } | ProblemSpec::MaxwellianMobile { amplitude, .. },
                "amplitude" | "A",
            ) => Some(amplitude),
            _ => None,
        };
        match slot {
            Some(v) => {
                *v = parse_num(e)?;
                Ok(())
            }
            None => Err(Error::Config(format!("{}: `{}` does not apply to problem kind {kind}", e.origin, e.key))),
        }
    }

    pub fn build_run(&self) -> Result<RunConfig> {
        let need = |name: &str| Error::Config(format!("missing required key `{name}`"));
        let cfg = RunConfig {
            problem: self.problem.ok_or_else(|| need("problem.kind"))?,
            a: self.a.ok_or_else(|| need("a"))?,
            b: self.b.ok_or_else(|| need("b"))?,
            resolution: self.resolution.ok_or_else(|| need("n` or `h"))?,
            dt: self.dt.ok_or_else(|| need("dt"))?,
            t_end: self.t_end.ok_or_else(|| need("t_end"))?,
            p: self.p.unwrap_or(DEFAULT_P),
            snapshot_every: self.snapshot_every.unwrap_or(0),
            diagnostics_every: self.diagnostics_every.unwrap_or(1),
            out_dir: self.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
            density: self.density.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn build_sweep(&self) -> Result<SweepConfig> {
        let cfg = SweepConfig {
            base: self.build_run()?,
            p_min: self.p_min.unwrap_or(DEFAULT_P_MIN),
            p_max: self.p_max.unwrap_or(DEFAULT_P_MAX),
            grid_points: self.grid_points.unwrap_or(DEFAULT_GRID_POINTS),
            refine_iters: self.refine_iters.unwrap_or(DEFAULT_REFINE_ITERS),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Layers a preset, config text (with its source name) and overrides.
pub fn layered(preset: Option<&str>, text: Option<(&str, &str)>, overrides: &[Entry]) -> Result<ConfigBuilder> {
    let mut b = match preset {
        Some(name) => {
            let cfg = super::presets::get(name).ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))?;
            ConfigBuilder::from_run(&cfg)
        }
        None if text.is_none() => return Err(Error::Config("give a config file or a preset".into())),
        None => ConfigBuilder::new(),
    };
    if let Some((body, source)) = text {
        b.apply(&parse_entries(body, source)?)?;
    }
    b.apply(overrides)?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        # soliton
        problem.speed = 3.5   # before the kind on purpose
        problem.kind = single_soliton
        a = -20
        b = 60
        h = 0.05
        dt = 0.005
        t_end = 1
    ";

    fn build(text: &str) -> Result<RunConfig> {
        let mut b = ConfigBuilder::new();
        b.apply(&parse_entries(text, "test")?)?;
        b.build_run()
    }

    #[test]
    fn parses_sample() {
        let cfg = build(SAMPLE).unwrap();
        assert_eq!(cfg.problem, ProblemSpec::SingleSoliton { q: 2.0, alpha: 1.0, speed: 3.5 });
        assert_eq!(cfg.resolution, Resolution::Spacing(0.05));
        assert_eq!(cfg.p, 1.0);
        assert_eq!(cfg.mesh().unwrap().n, 1600);
    }

    #[test]
    fn round_trip() {
        let cfg = build(SAMPLE).unwrap();
        let again = build(&cfg.to_config_string()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(build("a = 1"), Err(Error::Config(_))));
        assert!(build(&format!("{SAMPLE}\nn = 100")).is_err());
        assert!(build(&format!("{SAMPLE}\nbogus = 1")).is_err());
        assert!(build(&format!("{SAMPLE}\nproblem.amplitude = 1")).is_err());
        assert!(build(&format!("{SAMPLE}\ndt = fast")).is_err());
        assert!(build(&format!("{SAMPLE}\np = 0")).is_err());
        assert!(build(&format!("{SAMPLE}\nt_end = 0.001")).is_err());
        assert!(build("just words").is_err());
    }

    #[test]
    fn overrides_layer_on_top() {
        let mut b = ConfigBuilder::new();
        b.apply(&parse_entries(SAMPLE, "f").unwrap()).unwrap();
        // h in the file, n from the command line: different layers, fine
        b.apply(&[parse_override("n=800").unwrap()]).unwrap();
        b.apply(&[parse_override("problem.S=4").unwrap()]).unwrap();
        let cfg = b.build_run().unwrap();
        assert_eq!(cfg.resolution, Resolution::Intervals(800));
        assert_eq!(cfg.problem.q(), 2.0);
        assert!(parse_override("novalue").is_err());
    }

    #[test]
    fn bound_state_keys() {
        let cfg = build("problem.kind = bound_state\nproblem.M = 5\na=-20\nb=20\nn=1334\ndt=0.005\nt_end=1").unwrap();
        assert_eq!(cfg.problem.q(), 50.0);
        assert!(build("problem.kind = bound-state\nproblem.q = 3\na=-20\nb=20\nn=10\ndt=0.1\nt_end=1").is_err());
    }

    #[test]
    fn sweep_defaults_and_checks() {
        let mut b = ConfigBuilder::new();
        b.apply(&parse_entries(SAMPLE, "f").unwrap()).unwrap();
        let sw = b.build_sweep().unwrap();
        assert_eq!((sw.p_min, sw.p_max, sw.grid_points), (1e-8, 10.0, 19));
        b.apply(&[parse_override("sweep.grid_points=2").unwrap()]).unwrap();
        assert!(b.build_sweep().is_err());
        let mut b = ConfigBuilder::new();
        b.apply(&parse_entries("problem.kind=collision\na=-45\nb=45\nn=900\ndt=0.005\nt_end=1", "f").unwrap()).unwrap();
        assert!(b.build_sweep().is_err());
    }
}
