//! Uniform mesh, spline-coefficient state and field evaluation.

use num_complex::Complex64;

use crate::banded::solve_tridiagonal;
use crate::basis::{eval_basis_offset, NodalWeights, Order, SplineShape};
use crate::error::{Error, Result};

/// `a = x_0 < x_1 < ... < x_N = b`, uniform spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub h: f64,
}

impl Mesh {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("mesh needs a < b, got [{a}, {b}]")));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("mesh needs at least one interval".into()));
        }
        Ok(Self { a, b, n, h: (b - a) / n as f64 })
    }

    /// Mesh with `N = round((b - a) / h)`; the stored spacing is the exact
    /// `(b - a) / N`.
    pub fn with_spacing(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("mesh spacing must be positive, got {h}")));
        }
        let n = ((b - a) / h).round();
        if !(n >= 1.0) {
            return Err(Error::InvalidParameter(format!("spacing {h} too large for [{a}, {b}]")));
        }
        Self::new(a, b, n as usize)
    }

    pub fn knot(&self, i: usize) -> f64 {
        if i == self.n {
            self.b
        } else {
            self.a + (self.b - self.a) * (i as f64 / self.n as f64)
        }
    }

    pub fn knots(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.knot(i)).collect()
    }
}

/// Spline coefficients of `r = Re U` (`delta`) and `s = Im U` (`phi`),
/// indexed `-1 ..= N+1` and stored with an offset of one.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub t: f64,
    pub delta: Vec<f64>,
    pub phi: Vec<f64>,
}

/// Field values and derivatives at one knot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NodalSample {
    pub r: f64,
    pub s: f64,
    pub rx: f64,
    pub sx: f64,
    pub rxx: f64,
    pub sxx: f64,
}

impl NodalSample {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.r, self.s)
    }

    pub fn slope(&self) -> Complex64 {
        Complex64::new(self.rx, self.sx)
    }
}

fn three_term(w: [f64; 3], c: &[f64], m: usize) -> f64 {
    // c is offset by one: knot m uses c[m], c[m + 1], c[m + 2].
    w[0] * c[m] + w[1] * c[m + 1] + w[2] * c[m + 2]
}

impl WaveState {
    pub fn zeros(n: usize, t: f64) -> Self {
        Self { t, delta: vec![0.0; n + 3], phi: vec![0.0; n + 3] }
    }

    /// Number of mesh intervals this state was built for.
    pub fn intervals(&self) -> usize {
        self.delta.len() - 3
    }

    /// Coefficient `delta_i`, `i` in `-1 ..= N+1`.
    pub fn delta_at(&self, i: i64) -> f64 {
        self.delta[(i + 1) as usize]
    }

    pub fn phi_at(&self, i: i64) -> f64 {
        self.phi[(i + 1) as usize]
    }

    pub fn sample_knot(&self, m: usize, w: &NodalWeights) -> Result<NodalSample> {
        let n = self.intervals();
        if m > n {
            return Err(Error::IndexOutOfRange { index: m as i64, lo: 0, hi: n as i64 });
        }
        Ok(self.sample_unchecked(m, w))
    }

    pub(crate) fn sample_unchecked(&self, m: usize, w: &NodalWeights) -> NodalSample {
        let (al, be, ga) = (w.alpha(), w.beta(), w.gamma());
        NodalSample {
            r: three_term(al, &self.delta, m),
            s: three_term(al, &self.phi, m),
            rx: three_term(be, &self.delta, m),
            sx: three_term(be, &self.phi, m),
            rxx: three_term(ga, &self.delta, m),
            sxx: three_term(ga, &self.phi, m),
        }
    }

    /// `U(x_m)` for every knot.
    pub fn knot_values(&self, w: &NodalWeights) -> Vec<Complex64> {
        let al = w.alpha();
        (0..=self.intervals())
            .map(|m| Complex64::new(three_term(al, &self.delta, m), three_term(al, &self.phi, m)))
            .collect()
    }

    /// `U_x(x_m)` for every knot.
    pub fn knot_slopes(&self, w: &NodalWeights) -> Vec<Complex64> {
        let be = w.beta();
        (0..=self.intervals())
            .map(|m| Complex64::new(three_term(be, &self.delta, m), three_term(be, &self.phi, m)))
            .collect()
    }

    /// Residuals of the closure `U(x_0) = U(x_N) = 0`, as `(left, right)`.
    pub fn closure_residual(&self, w: &NodalWeights) -> (Complex64, Complex64) {
        let vals = self.knot_values(w);
        (vals[0], vals[vals.len() - 1])
    }

    /// Overwrites the four boundary coefficients so that `U(x_0) = U(x_N) = 0`.
    pub fn apply_closure(&mut self, w: &NodalWeights) {
        let n = self.intervals();
        for c in [&mut self.delta, &mut self.phi] {
            c[0] = -c[1] / w.alpha1 - c[2];
            c[n + 2] = -c[n + 1] / w.alpha1 - c[n];
        }
    }

    /// `U`, `U_x` or `U_xx` at an arbitrary point of the mesh.
    pub fn eval_field(&self, x: f64, order: Order, mesh: &Mesh, shape: &SplineShape) -> Result<Complex64> {
        if !(x >= mesh.a && x <= mesh.b) {
            return Err(Error::OutOfDomain { x, a: mesh.a, b: mesh.b });
        }
        let u = (x - mesh.a) / mesh.h;
        let base = u.floor() as i64;
        let n = mesh.n as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (base - 1).max(-1)..=(base + 2).min(n + 1) {
            let b = eval_basis_offset(u - i as f64, shape, order);
            if b != 0.0 {
                acc += Complex64::new(self.delta_at(i), self.phi_at(i)) * b;
            }
        }
        Ok(acc)
    }
}

/// Interpolates `f` at every knot and matches `fprime` at both ends.
pub fn fit_initial<F, D>(f: F, fprime: D, mesh: &Mesh, shape: &SplineShape) -> Result<WaveState>
where
    F: Fn(f64) -> Complex64,
    D: Fn(f64) -> Complex64,
{
    let w = shape.nodal_weights();
    let n = mesh.n;
    let values: Vec<Complex64> = (0..=n).map(|i| f(mesh.knot(i))).collect();
    let (da, db) = (fprime(mesh.a), fprime(mesh.b));

    // Eliminating delta_{-1} and delta_{N+1} through the slope rows leaves a
    // tridiagonal system in delta_0..delta_N.
    let mut sub = vec![w.alpha1; n + 1];
    let diag = vec![1.0; n + 1];
    let mut sup = vec![w.alpha1; n + 1];
    sup[0] = 2.0 * w.alpha1;
    sub[n] = 2.0 * w.alpha1;
    sub[0] = 0.0;
    sup[n] = 0.0;

    let solve = |pick: fn(Complex64) -> f64| -> Result<Vec<f64>> {
        let mut rhs: Vec<f64> = values.iter().map(|&v| pick(v)).collect();
        rhs[0] -= w.alpha1 * pick(da) / w.beta1;
        rhs[n] += w.alpha1 * pick(db) / w.beta1;
        solve_tridiagonal(&sub, &diag, &sup, &mut rhs).map_err(|row| Error::SingularFit { row })?;
        let left = rhs[1] + pick(da) / w.beta1;
        let right = rhs[n - 1] - pick(db) / w.beta1;
        let mut c = Vec::with_capacity(n + 3);
        c.push(left);
        c.extend_from_slice(&rhs);
        c.push(right);
        Ok(c)
    };
    Ok(WaveState { t: 0.0, delta: solve(|v| v.re)?, phi: solve(|v| v.im)? })
}
