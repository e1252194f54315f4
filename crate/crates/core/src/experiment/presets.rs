//! Built-in experiments.

use std::path::PathBuf;

use super::config::{Resolution, RunConfig};
use crate::problems::{ProblemSpec, SolitonParams};

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: RunConfig,
}

fn base(name: &str, problem: ProblemSpec, a: f64, b: f64, resolution: Resolution, dt: f64, t_end: f64) -> RunConfig {
    RunConfig {
        problem,
        a,
        b,
        resolution,
        dt,
        t_end,
        p: 1.0,
        snapshot_every: 0,
        diagnostics_every: 1,
        out_dir: PathBuf::from("out").join(name),
        density: false,
    }
}

/// Single soliton, `q = 2, S = 4, α = 1`, `h = 0.05`, `Δt = 0.005`, to `t = 1`.
pub fn single_soliton() -> RunConfig {
    let problem = ProblemSpec::SingleSoliton { q: 2.0, alpha: 1.0, speed: 4.0 };
    let mut c = base("single-soliton", problem, -20.0, 60.0, Resolution::Spacing(0.05), 0.005, 1.0);
    c.snapshot_every = 100;
    c.diagnostics_every = 20;
    c
}

/// Same soliton on `h = 0.3125`, `Δt = 0.02`.
pub fn single_soliton_coarse() -> RunConfig {
    let mut c = single_soliton();
    c.resolution = Resolution::Spacing(0.3125);
    c.dt = 0.02;
    c.snapshot_every = 25;
    c.diagnostics_every = 5;
    c.out_dir = PathBuf::from("out/single-soliton-coarse");
    c
}

/// Two unit solitons at `x = ±10` moving towards each other with speed 4.
pub fn collision() -> RunConfig {
    let problem = ProblemSpec::Collision {
        q: 2.0,
        first: SolitonParams { alpha: 1.0, speed: -4.0, center: 10.0 },
        second: SolitonParams { alpha: 1.0, speed: 4.0, center: -10.0 },
    };
    let mut c = base("collision", problem, -45.0, 45.0, Resolution::Intervals(900), 0.005, 6.0);
    c.snapshot_every = 200;
    c.diagnostics_every = 100;
    c
}

fn maxwellian(name: &str, problem: ProblemSpec) -> RunConfig {
    let mut c = base(name, problem, -45.0, 45.0, Resolution::Intervals(1334), 0.005, 6.0);
    c.snapshot_every = 200;
    c.diagnostics_every = 100;
    c
}

pub fn maxwellian_standing() -> RunConfig {
    maxwellian("maxwellian-standing", ProblemSpec::MaxwellianStanding { q: 2.0, amplitude: 1.78 })
}

/// Below the soliton-birth threshold; the pulse disperses.
pub fn maxwellian_standing_weak() -> RunConfig {
    maxwellian("maxwellian-standing-weak", ProblemSpec::MaxwellianStanding { q: 2.0, amplitude: 1.0 })
}

pub fn maxwellian_mobile() -> RunConfig {
    maxwellian("maxwellian-mobile", ProblemSpec::MaxwellianMobile { q: 2.0, amplitude: 1.78 })
}

pub fn maxwellian_mobile_weak() -> RunConfig {
    maxwellian("maxwellian-mobile-weak", ProblemSpec::MaxwellianMobile { q: 2.0, amplitude: 1.0 })
}

/// `sech(x)` with `q = 2M²` on `[-20, 20]`, `N = 1334`, to `t = 1`, with the
/// density matrix enabled.
pub fn bound_state(m: u32) -> RunConfig {
    let name = format!("bound-state-M{m}");
    let mut c = base(&name, ProblemSpec::BoundState { m }, -20.0, 20.0, Resolution::Intervals(1334), 0.005, 1.0);
    c.snapshot_every = 50;
    c.diagnostics_every = 10;
    c.density = true;
    c
}

pub fn all() -> Vec<Preset> {
    vec![
        Preset {
            name: "single-soliton",
            description: "travelling soliton, h=0.05, dt=0.005, t=1",
            config: single_soliton(),
        },
        Preset {
            name: "single-soliton-coarse",
            description: "travelling soliton, h=0.3125, dt=0.02, t=1",
            config: single_soliton_coarse(),
        },
        Preset { name: "collision", description: "two solitons meeting head-on, t=6", config: collision() },
        Preset {
            name: "maxwellian-standing",
            description: "1.78 exp(-x^2), soliton birth, t=6",
            config: maxwellian_standing(),
        },
        Preset {
            name: "maxwellian-standing-weak",
            description: "exp(-x^2), below the birth threshold, t=6",
            config: maxwellian_standing_weak(),
        },
        Preset {
            name: "maxwellian-mobile",
            description: "1.78 exp(-x^2 + 2ix), moving soliton, t=6",
            config: maxwellian_mobile(),
        },
        Preset {
            name: "maxwellian-mobile-weak",
            description: "exp(-x^2 + 2ix), below the birth threshold, t=6",
            config: maxwellian_mobile_weak(),
        },
        Preset { name: "bound-state-M4", description: "sech(x), q=32, t=1", config: bound_state(4) },
        Preset { name: "bound-state-M5", description: "sech(x), q=50, t=1", config: bound_state(5) },
        Preset { name: "bound-state-M6", description: "sech(x), q=72, t=1 (exploratory)", config: bound_state(6) },
        Preset { name: "bound-state-M7", description: "sech(x), q=98, t=1 (exploratory)", config: bound_state(7) },
    ]
}

pub fn get(name: &str) -> Option<RunConfig> {
    all().into_iter().find(|p| p.name == name).map(|p| p.config)
}
