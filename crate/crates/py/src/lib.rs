//! Python bindings: enclosures, sums, closed forms, the identity registry and discovery.

use std::str::FromStr;

use euler_sums::combin;
use euler_sums::constants;
use euler_sums::numeric::{self, Precision};
use euler_sums::relations;
use euler_sums::series::{self, EvalOptions};
use euler_sums::symbolic::{self, Status};
use euler_sums::Error;
use pyo3::exceptions::{PyArithmeticError, PyKeyError, PyNotImplementedError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rug::Rational;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        Error::NotFound(_) => PyKeyError::new_err(e.to_string()),
        Error::Accuracy(_) | Error::Cancelled(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn prec(bits: u32) -> PyResult<Precision> {
    Precision::new(bits).map_err(to_py)
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    // accepts int, str ("1/2") and fractions.Fraction through its str()
    let text = x.str()?.to_string();
    Rational::from_str(text.trim()).map_err(|_| PyValueError::new_err(format!("'{text}' is not a rational number")))
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

/// Midpoint-radius enclosure of a real number.
#[pyclass(name = "Ball", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyBall(numeric::Ball);

#[pymethods]
impl PyBall {
    /// Midpoint as a decimal string with every digit carried.
    #[getter]
    fn mid(&self) -> String {
        self.0.mid().to_string()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.0.rad_f64()
    }

    #[getter]
    fn bits(&self) -> u32 {
        self.0.prec().bits()
    }

    /// Digits justified by the radius, followed by the radius.
    fn decimal(&self, max_digits: Option<usize>) -> String {
        self.0.to_decimal(max_digits.unwrap_or(60))
    }

    fn contains(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.contains_rational(&rational(x)?))
    }

    fn intersects(&self, other: &PyBall) -> bool {
        self.0.intersects(&other.0)
    }

    fn distance(&self, other: &PyBall) -> f64 {
        self.0.mid_distance(&other.0)
    }

    fn __float__(&self) -> f64 {
        self.0.mid_f64()
    }

    fn __repr__(&self) -> String {
        format!("Ball({})", self.0.to_decimal(30))
    }
}

/// `sum_n prod H_n^(h_i) x^n / n^p`, optionally with alternating harmonic numbers.
#[pyclass(name = "SumSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySumSpec(series::SumSpec);

#[pymethods]
impl PySumSpec {
    #[new]
    #[pyo3(signature = (h, p, x, alt = Vec::new()))]
    fn new(h: Vec<u32>, p: u32, x: &Bound<'_, PyAny>, alt: Vec<u32>) -> PyResult<Self> {
        series::SumSpec::with_alt(&h, &alt, p, rational(x)?).map(PySumSpec).map_err(to_py)
    }

    #[getter]
    fn weight(&self) -> u32 {
        self.0.weight()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    #[pyo3(signature = (bits = 256, terms = 1_000_000))]
    fn evaluate(&self, py: Python<'_>, bits: u32, terms: u64) -> PyResult<PyBall> {
        let p = prec(bits)?;
        let s = self.0.to_series();
        py.detach(|| series::evaluate(&s, p, &EvalOptions::with_terms(terms)))
            .map(PyBall)
            .map_err(to_py)
    }

    fn __eq__(&self, other: &PySumSpec) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SumSpec({})", self.0)
    }
}

/// Rational combination of products of basis constants.
#[pyclass(name = "ClosedForm", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyClosedForm(symbolic::ClosedForm);

#[pymethods]
impl PyClosedForm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyClosedForm).map_err(to_py)
    }

    /// Common weight, or `None` for a mixed-weight form.
    #[getter]
    fn weight(&self) -> Option<u32> {
        match self.0.weight() {
            symbolic::Weight::Exact(w) => Some(w),
            symbolic::Weight::Mixed => None,
        }
    }

    fn coefficients<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (m, c) in self.0.terms() {
            let key: Vec<String> = m
                .0
                .iter()
                .map(|(a, e)| if *e == 1 { a.name() } else { format!("{}^{e}", a.name()) })
                .collect();
            d.set_item(key.join("*"), fraction(py, c)?)?;
        }
        Ok(d)
    }

    #[pyo3(signature = (bits = 256))]
    fn evaluate(&self, bits: u32) -> PyResult<PyBall> {
        self.0.evaluate(prec(bits)?).map(PyBall).map_err(to_py)
    }

    fn pretty(&self) -> String {
        self.0.pretty()
    }

    fn __eq__(&self, other: &PyClosedForm) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ClosedForm('{}')", self.0)
    }
}

/// Outcome of one verification.
#[pyclass(name = "VerifyResult", frozen, get_all)]
pub struct PyVerifyResult {
    id: String,
    lhs: String,
    rhs: String,
    status: String,
    verified: bool,
    abs_diff: f64,
    radius: f64,
    heuristic: bool,
    millis: u64,
}

#[pymethods]
impl PyVerifyResult {
    fn __repr__(&self) -> String {
        format!("VerifyResult(id='{}', status='{}', abs_diff={:e})", self.id, self.status, self.abs_diff)
    }
}

impl From<symbolic::VerifyResult> for PyVerifyResult {
    fn from(r: symbolic::VerifyResult) -> Self {
        PyVerifyResult {
            verified: matches!(r.status, Status::Verified { .. }),
            status: r.status.to_string(),
            id: r.id,
            lhs: r.lhs,
            rhs: r.rhs,
            abs_diff: r.abs_diff,
            radius: r.radius,
            heuristic: r.heuristic,
            millis: r.millis,
        }
    }
}

/// A registry entry.
#[pyclass(name = "Identity", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyIdentity(symbolic::Identity);

#[pymethods]
impl PyIdentity {
    #[getter]
    fn id(&self) -> &str {
        &self.0.id
    }

    #[getter]
    fn tag(&self) -> &str {
        &self.0.tag
    }

    #[getter]
    fn lhs(&self) -> &str {
        &self.0.lhs_text
    }

    #[getter]
    fn rhs(&self) -> &str {
        &self.0.rhs_text
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.0.tol
    }

    #[getter]
    fn is_finding(&self) -> bool {
        self.0.expectation == symbolic::Expectation::Finding
    }

    #[getter]
    fn note(&self) -> Option<&str> {
        self.0.note.as_deref()
    }

    #[getter]
    fn weight(&self) -> Option<u32> {
        self.0.weight()
    }

    #[getter]
    fn closed_form(&self) -> Option<PyClosedForm> {
        self.0.closed_form().map(PyClosedForm)
    }

    #[getter]
    fn sum(&self) -> Option<PySumSpec> {
        self.0.sum.clone().map(PySumSpec)
    }

    #[pyo3(signature = (bits = 256, tol = None))]
    fn verify(&self, py: Python<'_>, bits: u32, tol: Option<f64>) -> PyResult<PyVerifyResult> {
        let p = prec(bits)?;
        let tol = tol.unwrap_or(self.0.tol);
        let id = &self.0;
        Ok(py.detach(|| symbolic::verify(id, p, tol)).into())
    }

    fn __repr__(&self) -> String {
        format!("Identity('{}': {} = {})", self.0.id, self.0.lhs_text, self.0.rhs_text)
    }
}

/// Registry entry by id.
#[pyfunction]
fn lookup(id: &str) -> PyResult<PyIdentity> {
    symbolic::lookup(id)
        .map(PyIdentity)
        .ok_or_else(|| PyKeyError::new_err(format!("no registry entry '{id}'")))
}

/// All registry entries, in id order.
#[pyfunction]
fn catalog() -> Vec<PyIdentity> {
    symbolic::catalog().iter().cloned().map(PyIdentity).collect()
}

/// Closed form of a sum over the basis of the given weight, or `None`.
#[pyfunction]
#[pyo3(signature = (spec, weight = None, digits = 200))]
fn discover(py: Python<'_>, spec: &PySumSpec, weight: Option<u32>, digits: u32) -> PyResult<Option<PyClosedForm>> {
    let p = Precision::from_digits(digits).map_err(to_py)?;
    let w = weight.unwrap_or(spec.0.weight());
    let s = &spec.0;
    py.detach(|| relations::discover(s, w, p)).map(|c| c.map(PyClosedForm)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (s, bits = 256))]
fn zeta(s: u32, bits: u32) -> PyResult<PyBall> {
    constants::zeta(s, prec(bits)?).map(PyBall).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, x, bits = 256))]
fn polylog(k: u32, x: &Bound<'_, PyAny>, bits: u32) -> PyResult<PyBall> {
    constants::polylog(k, &rational(x)?, prec(bits)?).map(PyBall).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (bits = 256))]
fn log2(bits: u32) -> PyResult<PyBall> {
    Ok(PyBall(constants::log2(prec(bits)?)))
}

/// `H_n^(p)` as a `fractions.Fraction`.
#[pyfunction]
#[pyo3(signature = (n, p = 1))]
fn harmonic<'py>(py: Python<'py>, n: u32, p: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &combin::harmonic(n, p))
}

/// Unsigned Stirling number of the first kind.
#[pyfunction]
fn stirling1(n: u32, k: u32) -> String {
    combin::stirling1(n, k).to_string()
}

/// `Y_k(n)` of the harmonic numbers, as a `fractions.Fraction`.
#[pyfunction]
fn bell_y<'py>(py: Python<'py>, k: u32, n: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &combin::bell_y(k, n))
}

#[pymodule]
#[pyo3(name = "euler_sums")]
fn euler_sums_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBall>()?;
    m.add_class::<PySumSpec>()?;
    m.add_class::<PyClosedForm>()?;
    m.add_class::<PyIdentity>()?;
    m.add_class::<PyVerifyResult>()?;
    m.add_function(wrap_pyfunction!(lookup, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(discover, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(polylog, m)?)?;
    m.add_function(wrap_pyfunction!(log2, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(stirling1, m)?)?;
    m.add_function(wrap_pyfunction!(bell_y, m)?)?;
    Ok(())
}
