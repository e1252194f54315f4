pub mod banded;
pub mod basis;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod field;
pub mod problems;
pub mod simulation;
pub mod stepper;
