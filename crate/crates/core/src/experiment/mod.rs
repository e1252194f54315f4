//! Configuration-driven experiments: presets, single runs and `p` sweeps.

pub mod config;
pub mod presets;
pub mod run;
pub mod sweep;

pub use config::{ConfigBuilder, Resolution, RunConfig, SweepConfig};
pub use run::{run, simulate, RunOutcome, Snapshot};
pub use sweep::{sweep, sweep_in_memory, SweepPoint, SweepResult};
