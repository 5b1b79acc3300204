//! Python bindings: `import mmin`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mmin_core::bounds::{self, BoundReport, BoundResult, Method};
use mmin_core::harness::{self, GenSpec};
use mmin_core::io::{self, Format};
use mmin_core::matcore::{self, DenseMatrix, DEFAULT_MAX_ITER, DEFAULT_TOL};
use mmin_core::{fixtures, sequences, Error};

create_exception!(mmin, MminError, PyException, "Base class for mmin errors.");
create_exception!(
    mmin,
    InputError,
    MminError,
    "Malformed input or a precondition not met."
);
create_exception!(
    mmin,
    NumericalError,
    MminError,
    "Singular matrix or non-convergent iteration."
);

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        InputError::new_err(e.to_string())
    }
}

fn parse_format(format: Option<&str>) -> PyResult<Option<Format>> {
    format
        .map(|f| f.parse::<Format>().map_err(to_py))
        .transpose()
}

/// Dense square matrix of floats.
#[pyclass(name = "Matrix", module = "mmin", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMatrix {
    inner: DenseMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: DenseMatrix::from_rows(&rows).map_err(to_py)?,
        })
    }

    /// Built-in example matrix: "ex1", "ex2" or "ex3".
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::by_name(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| {
                InputError::new_err(format!(
                    "unknown fixture '{name}'; known: {:?}",
                    fixtures::NAMES
                ))
            })
    }

    /// Reads a matrix file (plain, csv or json) or a fixture name.
    #[staticmethod]
    #[pyo3(signature = (source, format=None))]
    fn load(source: &str, format: Option<&str>) -> PyResult<Self> {
        let doc = io::load(source, parse_format(format)?).map_err(to_py)?;
        Ok(Self { inner: doc.matrix })
    }

    #[staticmethod]
    fn parse(text: &str, format: &str) -> PyResult<Self> {
        let format = format.parse::<Format>().map_err(to_py)?;
        Ok(Self {
            inner: io::parse_str(text, format).map_err(to_py)?,
        })
    }

    #[pyo3(signature = (format="plain"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let format = format.parse::<Format>().map_err(to_py)?;
        Ok(io::render(&self.inner, format))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn to_rows(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }

    fn scaled(&self, c: f64) -> Self {
        Self {
            inner: self.inner.scaled(c),
        }
    }

    fn __getitem__(&self, idx: (usize, usize)) -> PyResult<f64> {
        let n = self.inner.n();
        if idx.0 >= n || idx.1 >= n {
            return Err(pyo3::exceptions::PyIndexError::new_err(format!(
                "index {idx:?} out of range for order {n}"
            )));
        }
        Ok(self.inner[idx])
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "Matrix(n={}, rows={:?})",
            self.inner.n(),
            self.inner.to_rows()
        )
    }
}

/// One row of a bound report.
#[pyclass(name = "Bound", module = "mmin", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyBound {
    method: String,
    kind: String,
    t: Option<usize>,
    value: Option<f64>,
    applicable: bool,
    reason: Option<String>,
}

impl From<&BoundResult> for PyBound {
    fn from(r: &BoundResult) -> Self {
        Self {
            method: r.method.name().to_string(),
            kind: r.kind.to_string(),
            t: r.t,
            value: r.value,
            applicable: r.applicable,
            reason: r.reason.clone(),
        }
    }
}

#[pymethods]
impl PyBound {
    fn __repr__(&self) -> String {
        format!(
            "Bound(method={:?}, t={:?}, value={:?}, applicable={})",
            self.method, self.t, self.value, self.applicable
        )
    }
}

/// Every bound for one matrix, plus the reference value `tau`.
#[pyclass(name = "Report", module = "mmin", frozen)]
struct PyReport {
    inner: BoundReport,
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(to_py)
}

#[pymethods]
impl PyReport {
    #[getter]
    fn tau(&self) -> Option<f64> {
        self.inner.tau
    }

    #[getter]
    fn t_max(&self) -> usize {
        self.inner.t_max
    }

    #[getter]
    fn matrix_id(&self) -> &str {
        &self.inner.matrix_id
    }

    #[getter]
    fn rows(&self) -> Vec<PyBound> {
        self.inner.rows.iter().map(PyBound::from).collect()
    }

    /// Value of `method` at `t` (None for single-value methods), or None
    /// when not applicable.
    #[pyo3(signature = (method_name, t=None))]
    fn value(&self, method_name: &str, t: Option<usize>) -> PyResult<Option<f64>> {
        Ok(self.inner.value(method(method_name)?, t))
    }

    /// Values for t = 1..t_max of a sequence method.
    fn sequence(&self, method_name: &str) -> PyResult<Vec<Option<f64>>> {
        Ok(self.inner.sequence(method(method_name)?))
    }

    fn best_lower(&self) -> Option<f64> {
        self.inner.best_lower()
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(matrix_id={:?}, tau={:?}, t_max={}, rows={})",
            self.inner.matrix_id,
            self.inner.tau,
            self.inner.t_max,
            self.inner.rows.len()
        )
    }
}

/// Sign pattern and dominance flags as a dict.
#[pyfunction]
#[pyo3(signature = (m, eps=None))]
fn classify<'py>(py: Python<'py>, m: &PyMatrix, eps: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let eps = eps.unwrap_or_else(|| matcore::default_eps(&m.inner));
    let c = matcore::classify(&m.inner, eps).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("is_z_matrix", c.is_z_matrix)?;
    d.set_item("positive_diagonal", c.positive_diagonal)?;
    d.set_item("is_sdd", c.is_sdd)?;
    d.set_item("is_wcdd", c.is_wcdd)?;
    d.set_item("is_m_matrix", c.is_m_matrix)?;
    d.set_item("dominance_ratios", c.dominance_ratios)?;
    d.set_item("zero_tolerance", c.zero_tolerance)?;
    Ok(d)
}

#[pyfunction]
fn invert(m: &PyMatrix) -> PyResult<PyMatrix> {
    let inv = matcore::invert(&m.inner).map_err(to_py)?;
    Ok(PyMatrix { inner: inv.inverse })
}

/// Perron root of a nonnegative matrix.
#[pyfunction]
#[pyo3(signature = (m, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER))]
fn spectral_radius(m: &PyMatrix, tol: f64, max_iter: usize) -> PyResult<f64> {
    let est = matcore::spectral_radius_nonneg(&m.inner, tol, max_iter).map_err(to_py)?;
    Ok(est.radius)
}

/// Minimum eigenvalue `1 / rho(A^{-1})` of a nonsingular M-matrix.
#[pyfunction]
#[pyo3(signature = (m, tol=DEFAULT_TOL))]
fn tau(m: &PyMatrix, tol: f64) -> PyResult<f64> {
    matcore::tau_oracle(&m.inner, tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (m, t_max=10, tol=DEFAULT_TOL, matrix_id="matrix"))]
fn report(m: &PyMatrix, t_max: usize, tol: f64, matrix_id: &str) -> PyResult<PyReport> {
    let mut inner = bounds::full_report(&m.inner, t_max, tol).map_err(to_py)?;
    inner.matrix_id = matrix_id.to_string();
    Ok(PyReport { inner })
}

/// Names accepted by `Report.value` and `Report.sequence`.
#[pyfunction]
fn methods() -> Vec<&'static str> {
    Method::ALL.iter().map(|m| m.name()).collect()
}

/// `(tight, loose)` upper bounds on `rho(B o A^{-1})` at depth `t`, or None
/// when the ladder is not applicable.
#[pyfunction]
fn hadamard_upper(a: &PyMatrix, b: &PyMatrix, t: usize) -> PyResult<Option<(f64, f64)>> {
    let inv = matcore::invert(&a.inner).map_err(to_py)?.inverse;
    let ladder = sequences::build_ladder(&a.inner, t).map_err(to_py)?;
    let h = bounds::hadamard_upper(&a.inner, &inv, &b.inner, &ladder, t).map_err(to_py)?;
    Ok(h.map(|h| (h.tight, h.loose)))
}

/// Random strictly diagonally dominant M-matrix.
#[pyfunction]
#[pyo3(signature = (n, seed, density=1.0, margin=harness::DEFAULT_MARGIN, magnitude=1.0))]
fn generate_sdd(
    n: usize,
    seed: u64,
    density: f64,
    margin: f64,
    magnitude: f64,
) -> PyResult<PyMatrix> {
    let spec = GenSpec::sdd(n, seed)
        .with_density(density)
        .with_margin(margin)
        .with_magnitude(magnitude);
    Ok(PyMatrix {
        inner: spec.generate().map_err(to_py)?,
    })
}

/// Random M-matrix with equal diagonal and doubly stochastic inverse.
#[pyfunction]
#[pyo3(signature = (n, seed, strength=4.0))]
fn generate_ds_inverse(n: usize, seed: u64, strength: f64) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: harness::gen_ds_inverse(n, seed, strength).map_err(to_py)?,
    })
}

/// Runs the property suite; returns `{"trials", "failures", "max_gap"}`
/// with failures as `(property, seed, detail)` tuples.
#[pyfunction]
#[pyo3(signature = (trials=200, t_max=5, seed=0, ds_trials=None))]
fn verify<'py>(
    py: Python<'py>,
    trials: usize,
    t_max: usize,
    seed: u64,
    ds_trials: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut specs = GenSpec::sdd_suite(trials, seed);
    specs.extend(GenSpec::ds_suite(ds_trials.unwrap_or(trials / 4), seed));
    let r = py
        .detach(|| harness::check_properties(&specs, t_max))
        .map_err(to_py)?;
    let failures: Vec<(String, Option<u64>, String)> = r
        .failures
        .into_iter()
        .map(|f| (f.property, f.spec.map(|s| s.seed), f.detail))
        .collect();
    let d = PyDict::new(py);
    d.set_item("trials", r.trials)?;
    d.set_item("failures", failures)?;
    d.set_item("max_gap", r.max_gap)?;
    Ok(d)
}

#[pymodule]
fn mmin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("MminError", py.get_type::<MminError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyBound>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(invert, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    m.add_function(wrap_pyfunction!(hadamard_upper, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sdd, m)?)?;
    m.add_function(wrap_pyfunction!(generate_ds_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
