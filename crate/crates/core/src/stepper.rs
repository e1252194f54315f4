//! One Crank–Nicolson step of the collocation system for
//!
//! ```text
//! s_t - r_xx - q (r² + s²) r = 0
//! r_t + s_xx + q (r² + s²) s = 0
//! ```
//!
//! with the cubic terms at the new level replaced by their first-order
//! expansion about the old level (`(r³)^{n+1} ≈ 3 r² r^{n+1} - 2 r³` and so
//! on). Each step is a single banded linear solve.
//!
//! Unknowns are interleaved per node, `δ_0, φ_0, δ_1, φ_1, ..., δ_N, φ_N`; the
//! four exterior coefficients are eliminated with `U(x_0) = U(x_N) = 0`.

use crate::banded::{BandLu, BandMatrix};
use crate::basis::NodalWeights;
use crate::error::{Error, Result};
use crate::field::{NodalSample, WaveState};

/// Multipliers of one collocation equation, indexed by offset `-1, 0, +1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RowCoefficients {
    pub lhs_delta: [f64; 3],
    pub lhs_phi: [f64; 3],
    pub rhs_delta: [f64; 3],
    pub rhs_phi: [f64; 3],
}

/// Equation A comes from the `s_t` equation, equation B from the `r_t` one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SchemeCoefficients {
    pub eq_a: RowCoefficients,
    pub eq_b: RowCoefficients,
}

/// Linearised multipliers at one node, frozen at the old-level values in
/// `sample`.
pub fn linearize(sample: &NodalSample, q: f64, dt: f64, w: &NodalWeights) -> SchemeCoefficients {
    let (r, s) = (sample.r, sample.s);
    let (al, ga) = (w.alpha(), w.gamma());
    let rs = dt * q * r * s;
    let mut a = RowCoefficients::default();
    let mut b = RowCoefficients::default();
    for k in 0..3 {
        a.lhs_delta[k] = -dt * (q * (3.0 * r * r + s * s) * al[k] + ga[k]);
        a.lhs_phi[k] = (2.0 - 2.0 * rs) * al[k];
        a.rhs_delta[k] = dt * ga[k] - dt * q * r * r * al[k];
        a.rhs_phi[k] = (2.0 - rs) * al[k];

        b.lhs_delta[k] = (2.0 + 2.0 * rs) * al[k];
        b.lhs_phi[k] = dt * (q * (r * r + 3.0 * s * s) * al[k] + ga[k]);
        b.rhs_delta[k] = (2.0 + rs) * al[k];
        b.rhs_phi[k] = dt * q * s * s * al[k] - dt * ga[k];
    }
    SchemeCoefficients { eq_a: a, eq_b: b }
}

/// Banded system of one step, `2(N+1)` unknowns.
#[derive(Debug, Clone)]
pub struct StepSystem {
    pub matrix: BandMatrix,
    pub rhs: Vec<f64>,
}

impl StepSystem {
    pub fn dim(&self) -> usize {
        self.rhs.len()
    }
}

/// Sub/super-diagonal count of the interleaved step matrix.
pub const STEP_BANDWIDTH: usize = 3;

struct Placer<'a> {
    matrix: &'a mut BandMatrix,
    n: i64,
    inv_alpha1: f64,
}

impl Placer<'_> {
    /// Adds `v` times coefficient `idx` of component `comp` (0 = δ, 1 = φ)
    /// to `row`, rewriting exterior coefficients through the closure.
    fn put(&mut self, row: usize, idx: i64, comp: usize, v: f64) {
        let col = |i: i64| 2 * i as usize + comp;
        if idx == -1 {
            self.matrix.add(row, col(0), -v * self.inv_alpha1);
            self.matrix.add(row, col(1), -v);
        } else if idx == self.n + 1 {
            self.matrix.add(row, col(self.n), -v * self.inv_alpha1);
            self.matrix.add(row, col(self.n - 1), -v);
        } else {
            self.matrix.add(row, col(idx), v);
        }
    }
}

pub fn assemble(state: &WaveState, q: f64, dt: f64, w: &NodalWeights) -> StepSystem {
    let n = state.intervals();
    let dim = 2 * (n + 1);
    let mut old = state.clone();
    old.apply_closure(w);

    let mut matrix = BandMatrix::zeros(dim, STEP_BANDWIDTH, STEP_BANDWIDTH);
    let mut rhs = vec![0.0; dim];
    let mut placer = Placer { matrix: &mut matrix, n: n as i64, inv_alpha1: 1.0 / w.alpha1 };

    for m in 0..=n {
        let sample = old.sample_unchecked(m, w);
        let coef = linearize(&sample, q, dt, w);
        for (row, eq) in [(2 * m, &coef.eq_a), (2 * m + 1, &coef.eq_b)] {
            let mut acc = 0.0;
            for k in 0..3 {
                let idx = m as i64 + k as i64 - 1;
                placer.put(row, idx, 0, eq.lhs_delta[k]);
                placer.put(row, idx, 1, eq.lhs_phi[k]);
                acc += eq.rhs_delta[k] * old.delta[m + k] + eq.rhs_phi[k] * old.phi[m + k];
            }
            rhs[row] = acc;
        }
    }
    StepSystem { matrix, rhs }
}

/// Solves the step system; the result is interleaved `δ_0, φ_0, ...`.
pub fn solve_step(system: &StepSystem) -> Result<Vec<f64>> {
    let lu =
        BandLu::factor(&system.matrix).map_err(|e| Error::SingularSystem { node: e.column / 2, column: e.column })?;
    let mut x = system.rhs.clone();
    lu.solve(&mut x);
    Ok(x)
}

/// Advances `state` by `dt`.
pub fn step(state: &WaveState, q: f64, dt: f64, w: &NodalWeights) -> Result<WaveState> {
    let n = state.intervals();
    let system = assemble(state, q, dt, w);
    let x = solve_step(&system)?;
    let mut next = WaveState::zeros(n, state.t + dt);
    for m in 0..=n {
        next.delta[m + 1] = x[2 * m];
        next.phi[m + 1] = x[2 * m + 1];
    }
    next.apply_closure(w);
    Ok(next)
}
