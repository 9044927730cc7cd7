//! Python bindings. Structured results come back as plain dicts and lists.

use lindkrylov::analytics::{self, ChainParams as CoreChain};
use lindkrylov::bilanczos::{eigenvalue_bound_check, TridiagonalData};
use lindkrylov::config::RunConfig;
use lindkrylov::dynamics::{evolve_wavefunctions, EvolveOptions};
use lindkrylov::harness::{self, run_realization};
use lindkrylov::superop::dissipator_eigenvalue;
use lindkrylov::{verify, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn load_config(json: Option<&str>) -> PyResult<RunConfig> {
    let cfg = match json {
        Some(text) => RunConfig::from_json(text).map_err(err)?,
        None => RunConfig::default(),
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

/// Lanczos coefficients `a_n`, `b_n`, `c_n` of one realization.
#[pyclass(name = "TridiagonalData", module = "pylindkrylov")]
#[derive(Clone)]
struct PyTridiagonal {
    inner: TridiagonalData,
}

#[pymethods]
impl PyTridiagonal {
    #[new]
    fn new(a: Vec<Complex64>, b: Vec<Complex64>, c: Vec<Complex64>) -> PyResult<Self> {
        Ok(PyTridiagonal { inner: TridiagonalData::new(a, b, c).map_err(err)? })
    }

    #[getter]
    fn a(&self) -> Vec<Complex64> {
        self.inner.a.clone()
    }

    #[getter]
    fn b(&self) -> Vec<Complex64> {
        self.inner.b.clone()
    }

    #[getter]
    fn c(&self) -> Vec<Complex64> {
        self.inner.c.clone()
    }

    #[getter]
    fn termination(&self) -> String {
        format!("{:?}", self.inner.termination).to_lowercase()
    }

    fn __len__(&self) -> usize {
        self.inner.n_steps()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    /// Imaginary-part bound on the eigenvalues of the truncated chain.
    fn bound_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &eigenvalue_bound_check(&self.inner).map_err(err)?)
    }

    /// Evolve `φ_n(t)` on the first `k_max` sites; returns `{t, k, z, phi}`.
    #[pyo3(signature = (t_grid, k_max=None, tol=1e-10))]
    fn evolve<'py>(&self, py: Python<'py>, t_grid: Vec<f64>, k_max: Option<usize>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let k_max = k_max.unwrap_or(self.inner.n_steps());
        let opts = EvolveOptions { tol, ..Default::default() };
        let traj = evolve_wavefunctions(&self.inner, &t_grid, k_max, &opts).map_err(err)?;
        to_py(py, &traj)
    }

    fn __repr__(&self) -> String {
        format!("TridiagonalData(steps={}, termination={})", self.inner.n_steps(), self.termination())
    }
}

/// Parameters of the solvable non-Hermitian chain.
#[pyclass(name = "ChainParams", module = "pylindkrylov")]
#[derive(Clone, Copy)]
struct PyChain {
    inner: CoreChain,
}

#[pymethods]
impl PyChain {
    #[new]
    #[pyo3(signature = (u, gamma=1.0, eta=1.0))]
    fn new(u: f64, gamma: f64, eta: f64) -> PyResult<Self> {
        Ok(PyChain { inner: CoreChain::new(u, gamma, eta).map_err(err)? })
    }

    fn tridiagonal(&self, length: usize) -> PyTridiagonal {
        PyTridiagonal { inner: self.inner.tridiagonal(length) }
    }

    fn wavefunctions(&self, n_max: usize, t: f64) -> PyResult<Vec<f64>> {
        analytics::wavefunctions_closed_form(&self.inner, n_max, t).map_err(err)
    }

    fn k_complexity(&self, t: f64) -> f64 {
        analytics::k_complexity_closed_form(&self.inner, t)
    }

    fn dissipation_scales<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &analytics::dissipation_scales(&self.inner))
    }

    fn otoc(&self, q: usize, n: usize, t: f64) -> PyResult<f64> {
        analytics::otoc_closed_form(&self.inner, q, n, t).map_err(err)
    }

    fn otoc_scales<'py>(&self, py: Python<'py>, q: usize, n: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &analytics::otoc_scales(&self.inner, q, n).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("ChainParams(u={}, gamma={}, eta={})", self.inner.u, self.inner.gamma, self.inner.eta)
    }
}

/// Default run configuration as a JSON string.
#[pyfunction]
fn default_config() -> String {
    RunConfig::default().to_json()
}

/// Bi-Lanczos on one disorder realization of the config's base point.
#[pyfunction]
#[pyo3(signature = (config=None, realization=0))]
fn lanczos(config: Option<&str>, realization: u64) -> PyResult<PyTridiagonal> {
    let cfg = load_config(config)?;
    let inner = run_realization(&cfg, &cfg.base_point(), realization).map_err(err)?;
    Ok(PyTridiagonal { inner })
}

/// Realization-averaged coefficients and fits at the base point.
#[pyfunction]
#[pyo3(signature = (config=None))]
fn lanczos_average<'py>(py: Python<'py>, config: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = load_config(config)?;
    let (summary, _) = py.allow_threads(|| harness::run_lanczos(&cfg)).map_err(err)?;
    to_py(py, &summary)
}

#[pyfunction]
#[pyo3(signature = (config=None))]
fn sweep<'py>(py: Python<'py>, config: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = load_config(config)?;
    let result = py.allow_threads(|| harness::run_sweep(&cfg)).map_err(err)?;
    to_py(py, &result)
}

#[pyfunction]
#[pyo3(signature = (config=None))]
fn evolve<'py>(py: Python<'py>, config: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = load_config(config)?;
    let result = py.allow_threads(|| harness::run_evolve(&cfg)).map_err(err)?;
    to_py(py, &result)
}

/// Finite-N eigenvalue of the averaged p-body dissipator on a length-`s` string.
#[pyfunction]
fn averaged_dissipator_eigenvalue(n: usize, p: usize, s: usize, m: usize, v: f64) -> PyResult<(Complex64, Complex64)> {
    let e = dissipator_eigenvalue(n, p, s, m, v).map_err(err)?;
    Ok((e.finite_n, e.large_n))
}

/// `(b₁², large-N b₁)` for a `p`-string under SYK_q with rescaled coupling.
#[pyfunction]
fn b1_pbody(n: usize, q: usize, p: usize, coupling: f64) -> PyResult<(f64, f64)> {
    let f = analytics::b1_pbody(n, q, p, coupling).map_err(err)?;
    Ok((f.b1_squared, f.b1_large_n))
}

#[pyfunction]
fn model_autocorrelation(alpha: f64, mu: f64, t: f64) -> f64 {
    analytics::model_autocorrelation(alpha, mu, t)
}

#[pyfunction]
fn spectral_function(alpha: f64, mu: f64, omega: f64) -> Complex64 {
    analytics::spectral_function(alpha, mu, omega)
}

#[pyfunction]
fn pole_location(alpha: f64, mu: f64) -> (Complex64, Complex64) {
    analytics::pole_location(alpha, mu)
}

/// Built-in checks as a list of dicts.
#[pyfunction]
fn verify_suite(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let checks = py.allow_threads(verify::verify_suite);
    to_py(py, &checks)
}

#[pymodule]
fn pylindkrylov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTridiagonal>()?;
    m.add_class::<PyChain>()?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add_function(wrap_pyfunction!(lanczos, m)?)?;
    m.add_function(wrap_pyfunction!(lanczos_average, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(averaged_dissipator_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(b1_pbody, m)?)?;
    m.add_function(wrap_pyfunction!(model_autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_function, m)?)?;
    m.add_function(wrap_pyfunction!(pole_location, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
