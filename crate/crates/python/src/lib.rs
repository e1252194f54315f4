//! Python bindings: basis helpers, a steppable `Simulation`, presets, runs
//! and sweeps.

use std::collections::HashMap;
use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nls_expspline::basis::{self, Order};
use nls_expspline::error::Error;
use nls_expspline::experiment::config::{layered, ConfigBuilder, Entry};
use nls_expspline::experiment::{self, presets, RunConfig};
use nls_expspline::problems;
use nls_expspline::simulation::{step_count, Simulation};

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        1 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn order(o: u8) -> PyResult<Order> {
    Order::try_from(o).map_err(py_err)
}

fn builder(
    preset: Option<&str>,
    config: Option<&str>,
    overrides: Option<HashMap<String, Bound<'_, PyAny>>>,
) -> PyResult<ConfigBuilder> {
    let mut entries = Vec::new();
    for (key, v) in overrides.unwrap_or_default() {
        let mut value = v.str()?.to_string();
        if v.is_instance_of::<pyo3::types::PyBool>() {
            value = value.to_lowercase();
        }
        entries.push(Entry { key, value, origin: "overrides".into() });
    }
    layered(preset, config.map(|t| (t, "<config>")), &entries).map_err(py_err)
}

/// `{p, h, s, c, denom}` of the exponential spline with tension `p`.
#[pyfunction]
fn shape(py: Python<'_>, p: f64, h: f64) -> PyResult<Bound<'_, PyDict>> {
    let sh = basis::shape(p, h).map_err(py_err)?;
    let d = PyDict::new(py);
    for (k, v) in [("p", sh.p), ("h", sh.h), ("s", sh.s), ("c", sh.c), ("denom", sh.denom)] {
        d.set_item(k, v)?;
    }
    Ok(d)
}

/// Knot values of the basis function and its first two derivatives.
#[pyfunction]
fn nodal_weights(py: Python<'_>, p: f64, h: f64) -> PyResult<Bound<'_, PyDict>> {
    let w = basis::shape(p, h).map_err(py_err)?.nodal_weights();
    let d = PyDict::new(py);
    for (k, v) in
        [("alpha0", w.alpha0), ("alpha1", w.alpha1), ("beta1", w.beta1), ("gamma1", w.gamma1), ("gamma0", w.gamma0)]
    {
        d.set_item(k, v)?;
    }
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (i, x, p, h, origin = 0.0, order = 0))]
fn eval_basis(i: i64, x: f64, p: f64, h: f64, origin: f64, order: u8) -> PyResult<f64> {
    let sh = basis::shape(p, h).map_err(py_err)?;
    Ok(basis::eval_basis(i, x, &sh, origin, self::order(order)?))
}

#[pyfunction]
fn exact_single_soliton(x: f64, t: f64, alpha: f64, speed: f64, q: f64) -> PyResult<Complex64> {
    problems::exact_single_soliton(x, t, alpha, speed, q).map_err(py_err)
}

/// `(name, description)` of every built-in preset.
#[pyfunction]
fn list_presets() -> Vec<(String, String)> {
    presets::all().into_iter().map(|p| (p.name.to_string(), p.description.to_string())).collect()
}

/// Runs an experiment to completion. Files are written only when `out_dir`
/// is given. Returns the summary fields and the diagnostics series.
#[pyfunction]
#[pyo3(signature = (preset = None, config = None, overrides = None, out_dir = None))]
fn run<'py>(
    py: Python<'py>,
    preset: Option<&str>,
    config: Option<&str>,
    overrides: Option<HashMap<String, Bound<'py, PyAny>>>,
    out_dir: Option<PathBuf>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = builder(preset, config, overrides)?.build_run().map_err(py_err)?;
    if let Some(dir) = &out_dir {
        cfg.out_dir = dir.clone();
    }
    let out = py.detach(|| experiment::simulate(&cfg)).map_err(py_err)?;
    if out_dir.is_some() {
        experiment::run::write_outputs(&out, &cfg.out_dir).map_err(py_err)?;
    }
    let d = PyDict::new(py);
    d.set_item("ok", out.succeeded())?;
    d.set_item("error", out.failure.as_ref().map(|e| e.to_string()))?;
    d.set_item("steps", out.steps_done)?;
    d.set_item("t", out.final_time())?;
    d.set_item("linf", out.final_linf)?;
    d.set_item("linf_complex", out.final_linf_complex)?;
    d.set_item("times", out.series.times.clone())?;
    d.set_item("c1", out.series.c1.clone())?;
    d.set_item("c2", out.series.c2.clone())?;
    d.set_item("peaks", out.final_peaks.iter().map(|p| (p.position, p.height)).collect::<Vec<_>>())?;
    d.set_item("summary", experiment::run::summary_text(&out))?;
    Ok(d)
}

/// Searches `p` for the smallest final error; returns the best pair and
/// every evaluation.
#[pyfunction]
#[pyo3(signature = (preset = None, config = None, overrides = None))]
fn sweep<'py>(
    py: Python<'py>,
    preset: Option<&str>,
    config: Option<&str>,
    overrides: Option<HashMap<String, Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = builder(preset, config, overrides)?.build_sweep().map_err(py_err)?;
    let res = py.detach(|| experiment::sweep_in_memory(&cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("best_p", res.best.p)?;
    d.set_item("best_linf", res.best.linf)?;
    d.set_item("points", res.points.iter().map(|pt| (pt.p, pt.linf)).collect::<Vec<_>>())?;
    Ok(d)
}

/// A simulation that can be advanced step by step from Python.
#[pyclass(name = "Simulation")]
struct PySimulation {
    config: RunConfig,
    inner: Simulation,
}

#[pymethods]
impl PySimulation {
    #[new]
    #[pyo3(signature = (preset = None, config = None, overrides = None))]
    fn new(
        preset: Option<&str>,
        config: Option<&str>,
        overrides: Option<HashMap<String, Bound<'_, PyAny>>>,
    ) -> PyResult<Self> {
        let config = builder(preset, config, overrides)?.build_run().map_err(py_err)?;
        let mesh = config.mesh().map_err(py_err)?;
        let inner = Simulation::new(config.problem, mesh, config.p, config.dt).map_err(py_err)?;
        Ok(Self { config, inner })
    }

    #[pyo3(signature = (steps = 1))]
    fn advance(&mut self, py: Python<'_>, steps: usize) -> PyResult<()> {
        py.detach(|| self.inner.advance_by(steps)).map_err(py_err)
    }

    /// Advances to the configured `t_end`.
    fn run_to_end(&mut self, py: Python<'_>) -> PyResult<()> {
        let remaining = step_count(self.config.t_end, self.config.dt).saturating_sub(self.inner.steps_taken());
        self.advance(py, remaining)
    }

    #[getter]
    fn time(&self) -> f64 {
        self.inner.time()
    }

    #[getter]
    fn steps_taken(&self) -> usize {
        self.inner.steps_taken()
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.inner.dt()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.problem().q()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.problem().kind()
    }

    fn knots(&self) -> Vec<f64> {
        self.inner.mesh().knots()
    }

    fn values(&self) -> Vec<Complex64> {
        self.inner.knot_values()
    }

    /// `U` or a derivative at any point of the domain.
    #[pyo3(signature = (x, order = 0))]
    fn field(&self, x: f64, order: u8) -> PyResult<Complex64> {
        self.inner.state().eval_field(x, self::order(order)?, self.inner.mesh(), self.inner.shape()).map_err(py_err)
    }

    fn invariants(&self) -> (f64, f64) {
        self.inner.invariants()
    }

    fn linf_error(&self) -> Option<f64> {
        self.inner.linf_error()
    }

    fn peaks(&self) -> Vec<(f64, f64)> {
        self.inner.peaks().iter().map(|p| (p.position, p.height)).collect()
    }

    fn max_modulus(&self) -> f64 {
        self.inner.max_modulus()
    }

    fn __repr__(&self) -> String {
        format!("Simulation({}, N={}, t={})", self.inner.problem().kind(), self.inner.mesh().n, self.inner.time())
    }
}

#[pymodule]
fn nls_expspline_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(shape, m)?)?;
    m.add_function(wrap_pyfunction!(nodal_weights, m)?)?;
    m.add_function(wrap_pyfunction!(eval_basis, m)?)?;
    m.add_function(wrap_pyfunction!(exact_single_soliton, m)?)?;
    m.add_function(wrap_pyfunction!(list_presets, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_class::<PySimulation>()?;
    Ok(())
}
