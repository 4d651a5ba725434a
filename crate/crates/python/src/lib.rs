//! Python bindings. Real numbers cross the boundary as decimal strings so no
//! digits are lost; rationals use the `"p/q"` form.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;

use eulersum::contour;
use eulersum::error::Error;
use eulersum::euler_sum;
use eulersum::precision::{self, PrecReal, GUARD_DIGITS};
use eulersum::rational::{self, parse_rational, BigRat};
use eulersum::report;
use eulersum::verify::{self as checks, OutputFormat};

create_exception!(pyeulersum, PoleError, PyValueError, "Argument is at a pole.");
create_exception!(pyeulersum, DomainError, PyValueError, "Argument outside the domain.");
create_exception!(
    pyeulersum,
    PrecisionError,
    PyArithmeticError,
    "Requested digits could not be certified."
);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Pole { .. } => PoleError::new_err(msg),
        Error::Domain(_) => DomainError::new_err(msg),
        Error::Precision(_) => PrecisionError::new_err(msg),
        Error::InvalidInput(_) => PyValueError::new_err(msg),
        Error::Io(_) => PyOSError::new_err(msg),
    }
}

type Res<T> = Result<T, Error>;

fn parse(s: &str, digits: u32) -> Res<PrecReal> {
    PrecReal::parse(s, digits)
}

fn decimal(x: &PrecReal) -> String {
    x.to_decimal(x.digits() as usize)
}

fn rat(text: &str) -> Res<BigRat> {
    parse_rational(text).ok_or_else(|| Error::InvalidInput(format!("not a rational: {text:?}")))
}

/// Runs `f` with the GIL released.
fn compute<T: Send>(py: Python<'_>, f: impl FnOnce() -> Res<T> + Send) -> PyResult<T> {
    py.detach(f).map_err(to_py)
}

// ---------------------------------------------------------------------------
// exact rationals
// ---------------------------------------------------------------------------

/// Bernoulli number B_n as "p/q" (B_1 = -1/2).
#[pyfunction]
fn bernoulli(n: usize) -> String {
    rational::bernoulli(n).to_string()
}

/// A_n as "p/q".
#[pyfunction]
fn a_number(n: usize) -> PyResult<String> {
    if n == 0 {
        return Err(PyValueError::new_err("A_n starts at n = 1"));
    }
    Ok(rational::a_number(n).to_string())
}

/// [A_1, ..., A_n] as "p/q" strings.
#[pyfunction]
fn a_numbers(n: usize) -> Vec<String> {
    rational::a_numbers(n).iter().map(|q| q.to_string()).collect()
}

/// h(-2m) as "p/q".
#[pyfunction]
fn h_neg_even_exact(m: usize) -> PyResult<String> {
    if m == 0 {
        return Err(PyValueError::new_err("m must be >= 1"));
    }
    Ok(rational::h_neg_even_exact(m).to_string())
}

// ---------------------------------------------------------------------------
// special functions
// ---------------------------------------------------------------------------

macro_rules! real_fn {
    ($name:ident, $doc:literal, $f:path) => {
        #[doc = $doc]
        #[pyfunction]
        #[pyo3(signature = (s, precision = 50))]
        fn $name(py: Python<'_>, s: &str, precision: u32) -> PyResult<String> {
            compute(py, || {
                let x = parse(s, precision + GUARD_DIGITS)?;
                Ok(decimal(&$f(&x)?.with_digits(precision)))
            })
        }
    };
}

real_fn!(zeta, "Riemann zeta at real s.", precision::zeta);
real_fn!(zeta_prime, "Derivative of Riemann zeta at real s.", precision::zeta_prime);
real_fn!(digamma, "Digamma psi(s).", precision::digamma);
real_fn!(gamma, "Gamma(s).", precision::gamma);

/// Euler's constant.
#[pyfunction]
#[pyo3(signature = (precision = 50))]
fn euler_gamma(precision: u32) -> String {
    decimal(&precision::euler_gamma(precision + GUARD_DIGITS).with_digits(precision))
}

// ---------------------------------------------------------------------------
// h and F
// ---------------------------------------------------------------------------

/// h(s) by the series, s > 1.
#[pyfunction]
#[pyo3(signature = (s, precision = 50))]
fn h_series(py: Python<'_>, s: &str, precision: u32) -> PyResult<String> {
    compute(py, || {
        Ok(decimal(&euler_sum::h_series(&parse(s, precision + GUARD_DIGITS)?, precision)?))
    })
}

/// h(s) by analytic continuation through F.
#[pyfunction]
#[pyo3(signature = (s, precision = 50))]
fn h_continued(py: Python<'_>, s: &str, precision: u32) -> PyResult<String> {
    compute(py, || {
        Ok(decimal(&euler_sum::h_continued(&parse(s, precision + GUARD_DIGITS)?, precision)?))
    })
}

/// h(s), choosing the series for s > 1.
#[pyfunction]
#[pyo3(signature = (s, precision = 50))]
fn h(py: Python<'_>, s: &str, precision: u32) -> PyResult<String> {
    compute(py, || {
        Ok(decimal(&euler_sum::h_auto(&parse(s, precision + GUARD_DIGITS)?, precision)?))
    })
}

/// F(1-n) = (n-1)! A_n from the circle integral.
#[pyfunction]
#[pyo3(signature = (n, precision = 50))]
fn f_at_nonpositive_integer(py: Python<'_>, n: usize, precision: u32) -> PyResult<String> {
    compute(py, || Ok(decimal(&contour::f_at_nonpositive_integer(n, precision)?.value)))
}

/// F(s) from the real-axis integral, s > 1.
#[pyfunction]
#[pyo3(signature = (s, precision = 50))]
fn f_real_axis(py: Python<'_>, s: &str, precision: u32) -> PyResult<String> {
    compute(py, || {
        Ok(decimal(&contour::f_real_axis(&parse(s, precision + GUARD_DIGITS)?, precision)?.value))
    })
}

/// F(s) on the full Hankel loop.
#[pyfunction]
#[pyo3(signature = (s, precision = 50))]
fn f_hankel(py: Python<'_>, s: &str, precision: u32) -> PyResult<String> {
    compute(py, || {
        Ok(decimal(&contour::f_hankel(&parse(s, precision + GUARD_DIGITS)?, precision)?.value))
    })
}

// ---------------------------------------------------------------------------
// Laurent data
// ---------------------------------------------------------------------------

#[pyclass(name = "LaurentExpansion", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyLaurent {
    center: String,
    pole_order: u32,
    /// c_{-pole_order}, c_{-pole_order+1}, ... as decimal strings.
    coefficients: Vec<String>,
    errors: Vec<String>,
}

#[pymethods]
impl PyLaurent {
    /// c_k as a decimal string.
    fn coefficient(&self, k: i32) -> PyResult<String> {
        usize::try_from(k + self.pole_order as i32)
            .ok()
            .and_then(|i| self.coefficients.get(i).cloned())
            .ok_or_else(|| PyValueError::new_err(format!("c_{k} was not computed")))
    }

    fn __repr__(&self) -> String {
        format!(
            "LaurentExpansion(center={}, pole_order={}, coefficients={:?})",
            self.center, self.pole_order, self.coefficients
        )
    }
}

/// First n_coeffs Laurent coefficients of h at 0 or a negative odd integer.
#[pyfunction]
#[pyo3(signature = (center, n_coeffs = 2, precision = 50))]
fn laurent_at(py: Python<'_>, center: &str, n_coeffs: usize, precision: u32) -> PyResult<PyLaurent> {
    compute(py, || {
        let lx = euler_sum::laurent_at(&rat(center)?, n_coeffs, precision)?;
        Ok(PyLaurent {
            center: rat(center)?.to_string(),
            pole_order: lx.pole_order,
            coefficients: lx.coefficients.iter().map(decimal).collect(),
            errors: lx.errors.iter().map(|e| precision::format_float(e, 3)).collect(),
        })
    })
}

/// Residue of h at 0 or a negative odd integer.
#[pyfunction]
#[pyo3(signature = (center, precision = 50))]
fn residue_at(py: Python<'_>, center: &str, precision: u32) -> PyResult<String> {
    compute(py, || Ok(decimal(&euler_sum::residue_at(&rat(center)?, precision)?)))
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

#[pyclass(name = "RunConfig", get_all, set_all, from_py_object)]
#[derive(Clone)]
struct PyRunConfig {
    precision: u32,
    tolerance_exponent: u32,
    max_n: usize,
    max_m: usize,
    format: String,
}

#[pymethods]
impl PyRunConfig {
    #[new]
    #[pyo3(signature = (precision = 50, tolerance_exponent = 30, max_n = 20, max_m = 3, format = "json".to_string()))]
    fn new(precision: u32, tolerance_exponent: u32, max_n: usize, max_m: usize, format: String) -> Self {
        PyRunConfig {
            precision,
            tolerance_exponent,
            max_n,
            max_m,
            format,
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "RunConfig(precision={}, tolerance_exponent={}, max_n={}, max_m={}, format={:?})",
            self.precision, self.tolerance_exponent, self.max_n, self.max_m, self.format
        )
    }
}

impl PyRunConfig {
    fn to_core(&self) -> Res<checks::RunConfig> {
        Ok(checks::RunConfig {
            precision: self.precision,
            tolerance_exponent: self.tolerance_exponent,
            max_n: self.max_n,
            max_m: self.max_m,
            format: self.format.parse::<OutputFormat>()?,
        })
    }
}

#[pyclass(name = "VerificationReport", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyReport {
    identity_id: String,
    inputs: std::collections::BTreeMap<String, String>,
    lhs: String,
    rhs: String,
    abs_diff: String,
    tolerance: String,
    passed: bool,
    note: Option<String>,
    wall_time_ms: u64,
}

impl From<report::VerificationReport> for PyReport {
    fn from(r: report::VerificationReport) -> Self {
        PyReport {
            identity_id: r.identity_id,
            inputs: r.inputs,
            lhs: r.lhs,
            rhs: r.rhs,
            abs_diff: r.abs_diff,
            tolerance: r.tolerance,
            passed: r.passed,
            note: r.note,
            wall_time_ms: r.wall_time_ms,
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "VerificationReport({} {:?} passed={} abs_diff={})",
            self.identity_id, self.inputs, self.passed, self.abs_diff
        )
    }
}

/// Runs an identity id, a check group, or "all".
#[pyfunction]
#[pyo3(signature = (identity = "all", config = None))]
fn verify(py: Python<'_>, identity: &str, config: Option<PyRunConfig>) -> PyResult<Vec<PyReport>> {
    let config = config.unwrap_or_else(|| PyRunConfig::new(50, 30, 20, 3, "json".into()));
    compute(py, || {
        let reports = checks::verify_named(identity, &config.to_core()?)?;
        Ok(reports.into_iter().map(PyReport::from).collect())
    })
}

/// The same run rendered as JSON, CSV or a text table (per config.format).
#[pyfunction]
#[pyo3(signature = (identity = "all", config = None))]
fn verify_rendered(py: Python<'_>, identity: &str, config: Option<PyRunConfig>) -> PyResult<String> {
    let config = config.unwrap_or_else(|| PyRunConfig::new(50, 30, 20, 3, "json".into()));
    compute(py, || {
        let core = config.to_core()?;
        let reports = checks::verify_named(identity, &core)?;
        let run = checks::Run {
            config: core.clone(),
            reports,
        };
        run.render(core.format)
    })
}

#[pymodule]
fn pyeulersum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PoleError", py.get_type::<PoleError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("PrecisionError", py.get_type::<PrecisionError>())?;
    m.add("GUARD_DIGITS", GUARD_DIGITS)?;
    m.add_class::<PyLaurent>()?;
    m.add_class::<PyRunConfig>()?;
    m.add_class::<PyReport>()?;
    for f in [
        wrap_pyfunction!(bernoulli, m)?,
        wrap_pyfunction!(a_number, m)?,
        wrap_pyfunction!(a_numbers, m)?,
        wrap_pyfunction!(h_neg_even_exact, m)?,
        wrap_pyfunction!(zeta, m)?,
        wrap_pyfunction!(zeta_prime, m)?,
        wrap_pyfunction!(digamma, m)?,
        wrap_pyfunction!(gamma, m)?,
        wrap_pyfunction!(euler_gamma, m)?,
        wrap_pyfunction!(h_series, m)?,
        wrap_pyfunction!(h_continued, m)?,
        wrap_pyfunction!(h, m)?,
        wrap_pyfunction!(f_at_nonpositive_integer, m)?,
        wrap_pyfunction!(f_real_axis, m)?,
        wrap_pyfunction!(f_hankel, m)?,
        wrap_pyfunction!(laurent_at, m)?,
        wrap_pyfunction!(residue_at, m)?,
        wrap_pyfunction!(verify, m)?,
        wrap_pyfunction!(verify_rendered, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}
