//! Time loop over one problem on one mesh.

use num_complex::Complex64;

use crate::basis::{NodalWeights, SplineShape};
use crate::diagnostics::{self, Peak};
use crate::error::{Error, Result};
use crate::field::{fit_initial, Mesh, WaveState};
use crate::problems::ProblemSpec;
use crate::stepper;

#[derive(Debug, Clone)]
pub struct Simulation {
    problem: ProblemSpec,
    mesh: Mesh,
    shape: SplineShape,
    weights: NodalWeights,
    dt: f64,
    state: WaveState,
    steps: usize,
}

impl Simulation {
    /// Fits the initial condition and prepares the stepper.
    pub fn new(problem: ProblemSpec, mesh: Mesh, p: f64, dt: f64) -> Result<Self> {
        problem.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        let shape = SplineShape::new(p, mesh.h)?;
        let state = fit_initial(|x| problem.initial_condition(x), |x| problem.initial_derivative(x), &mesh, &shape)?;
        Ok(Self { problem, mesh, weights: shape.nodal_weights(), shape, dt, state, steps: 0 })
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn shape(&self) -> &SplineShape {
        &self.shape
    }

    pub fn weights(&self) -> &NodalWeights {
        &self.weights
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn state(&self) -> &WaveState {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.state.t
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn advance(&mut self) -> Result<()> {
        let mut next = stepper::step(&self.state, self.problem.q(), self.dt, &self.weights)?;
        self.steps += 1;
        if next.delta.iter().chain(&next.phi).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: self.steps });
        }
        next.t = self.steps as f64 * self.dt;
        self.state = next;
        Ok(())
    }

    pub fn advance_by(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.advance()?;
        }
        Ok(())
    }

    pub fn knot_values(&self) -> Vec<Complex64> {
        self.state.knot_values(&self.weights)
    }

    pub fn linf_error(&self) -> Option<f64> {
        self.problem.has_exact().then(|| {
            diagnostics::linf_error(
                &self.state,
                |x, t| self.problem.exact(x, t).unwrap_or_default(),
                &self.mesh,
                &self.weights,
            )
        })
    }

    pub fn linf_complex_error(&self) -> Option<f64> {
        self.problem.has_exact().then(|| {
            diagnostics::linf_complex_error(
                &self.state,
                |x, t| self.problem.exact(x, t).unwrap_or_default(),
                &self.mesh,
                &self.weights,
            )
        })
    }

    pub fn invariants(&self) -> (f64, f64) {
        diagnostics::invariants(&self.state, self.problem.q(), &self.mesh, &self.weights)
    }

    pub fn peaks(&self) -> Vec<Peak> {
        diagnostics::track_peaks_default(&self.state, &self.mesh, &self.weights)
    }

    pub fn max_modulus(&self) -> f64 {
        self.knot_values().iter().map(|u| u.norm()).fold(0.0, f64::max)
    }
}

/// Number of steps needed to reach `t_end`, `ceil(t_end / dt)` up to
/// round-off in the quotient.
pub fn step_count(t_end: f64, dt: f64) -> usize {
    let ratio = t_end / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}
