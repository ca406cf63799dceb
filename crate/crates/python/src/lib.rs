//! Python module `hhcert`: expressions, intervals, bounds, classifiers and
//! brackets from `hhcert-core`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hhcert_core::bounds::{self, BoundParams, BoundReport, ReportConfig, TheoremId};
use hhcert_core::bracket;
use hhcert_core::classify::{self as sampling, ConvexityClass, PathInterval, SampleConfig, Verdict, Witness};
use hhcert_core::{eval_jet2, special, Error, Expr, MeanPair};

create_exception!(hhcert, HhcertError, PyValueError, "Raised for parse, domain and evaluation errors.");
create_exception!(hhcert, HypothesisFalsifiedError, HhcertError, "Raised when sampling refutes a required convexity.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::HypothesisFalsified(_) => HypothesisFalsifiedError::new_err(e.to_string()),
        e => HhcertError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Expression", frozen)]
struct PyExpression {
    ast: Expr,
    source: String,
}

#[pymethods]
impl PyExpression {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        let ast = hhcert_core::parse(source).map_err(py_err)?;
        Ok(PyExpression { ast, source: source.to_string() })
    }

    #[getter]
    fn source(&self) -> &str {
        &self.source
    }

    fn eval(&self, x: f64) -> PyResult<f64> {
        self.ast.eval(x).map_err(py_err)
    }

    /// `(f(x), f'(x), f''(x))`
    fn jet2(&self, x: f64) -> PyResult<(f64, f64, f64)> {
        let j = eval_jet2(&self.ast, x).map_err(py_err)?;
        Ok((j.v, j.d1, j.d2))
    }

    fn __str__(&self) -> String {
        self.ast.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expression({:?})", self.source)
    }
}

#[pyclass(name = "PathInterval", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPathInterval {
    inner: PathInterval,
}

#[pymethods]
impl PyPathInterval {
    #[new]
    #[pyo3(signature = (a, b, eta = 1.0))]
    fn new(a: f64, b: f64, eta: f64) -> PyResult<Self> {
        Ok(PyPathInterval { inner: PathInterval::new(a, b, eta).map_err(py_err)? })
    }

    /// `eta = cos(phi)` for `phi` in `[0, pi/2)`.
    #[staticmethod]
    fn from_phi(a: f64, b: f64, phi: f64) -> PyResult<Self> {
        Ok(PyPathInterval { inner: PathInterval::from_phi(a, b, phi).map_err(py_err)? })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }

    /// `eta (b - a)`
    #[getter]
    fn width(&self) -> f64 {
        self.inner.width()
    }

    /// `a + eta (b - a)`
    #[getter]
    fn end(&self) -> f64 {
        self.inner.end()
    }

    fn __repr__(&self) -> String {
        format!("PathInterval(a={}, b={}, eta={})", self.inner.a, self.inner.b, self.inner.eta)
    }
}

#[pyclass(name = "Witness", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyWitness {
    u: f64,
    v: f64,
    t: f64,
    lhs: f64,
    rhs: f64,
    gap: f64,
}

impl From<Witness> for PyWitness {
    fn from(w: Witness) -> Self {
        PyWitness { u: w.u, v: w.v, t: w.t, lhs: w.lhs, rhs: w.rhs, gap: w.gap }
    }
}

#[pymethods]
impl PyWitness {
    fn __repr__(&self) -> String {
        format!("Witness(u={}, v={}, t={}, lhs={}, rhs={}, gap={})", self.u, self.v, self.t, self.lhs, self.rhs, self.gap)
    }
}

#[pyclass(name = "Verdict", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyVerdict {
    falsified: bool,
    /// Number of triples checked when not falsified.
    samples: Option<usize>,
    witness: Option<PyWitness>,
}

impl From<Verdict> for PyVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::NotFalsified { samples } => PyVerdict { falsified: false, samples: Some(samples), witness: None },
            Verdict::Falsified(w) => PyVerdict { falsified: true, samples: None, witness: Some(w.into()) },
        }
    }
}

#[pymethods]
impl PyVerdict {
    fn __repr__(&self) -> String {
        match (&self.witness, self.samples) {
            (Some(w), _) => format!("Verdict.Falsified({})", w.__repr__()),
            (None, Some(n)) => format!("Verdict.NotFalsified(samples={n})"),
            (None, None) => "Verdict()".into(),
        }
    }
}

#[pyclass(name = "Defect", frozen, get_all)]
struct PyDefect {
    average: f64,
    endpoint_mean: f64,
    value: f64,
}

#[pyclass(name = "BoundReport", frozen, get_all)]
struct PyBoundReport {
    theorem_id: String,
    hypothesis: String,
    verdict: Option<PyVerdict>,
    bound: Option<f64>,
    defect: Option<f64>,
    margin: Option<f64>,
    status: String,
    notes: Vec<String>,
    error: Option<String>,
}

impl From<BoundReport> for PyBoundReport {
    fn from(r: BoundReport) -> Self {
        PyBoundReport {
            theorem_id: r.theorem_id.as_str().to_string(),
            hypothesis: r.hypothesis,
            verdict: r.hypothesis_verdict.map(Into::into),
            bound: r.bound,
            defect: r.defect,
            margin: r.margin,
            status: format!("{:?}", r.status),
            notes: r.notes,
            error: r.error,
        }
    }
}

#[pymethods]
impl PyBoundReport {
    fn __repr__(&self) -> String {
        format!("BoundReport(theorem_id={:?}, status={:?}, bound={:?}, defect={:?})", self.theorem_id, self.status, self.bound, self.defect)
    }
}

#[pyclass(name = "Bracket", frozen, get_all)]
struct PyBracket {
    lo: f64,
    hi: f64,
    panels: usize,
    hypothesis: PyVerdict,
}

#[pymethods]
impl PyBracket {
    fn __repr__(&self) -> String {
        format!("Bracket(lo={}, hi={}, panels={})", self.lo, self.hi, self.panels)
    }
}

#[pyfunction]
fn parse(source: &str) -> PyResult<PyExpression> {
    PyExpression::new(source)
}

#[pyfunction]
#[pyo3(signature = (f, interval, tol = bounds::DEFAULT_TOL))]
fn defect(f: &PyExpression, interval: PyPathInterval, tol: f64) -> PyResult<PyDefect> {
    let d = bounds::defect(&f.ast, &interval.inner, tol).map_err(py_err)?;
    Ok(PyDefect { average: d.average, endpoint_mean: d.endpoint_mean, value: d.value })
}

#[pyfunction]
#[pyo3(signature = (f, interval, tol = bounds::DEFAULT_TOL))]
fn identity_residual(f: &PyExpression, interval: PyPathInterval, tol: f64) -> PyResult<f64> {
    bounds::identity_residual(&f.ast, &interval.inner, tol).map_err(py_err)
}

/// `(|f''(a)|, |f''(b)|)`
#[pyfunction]
fn endpoint_magnitudes(f: &PyExpression, interval: PyPathInterval) -> PyResult<(f64, f64)> {
    let m = bounds::endpoint_magnitudes(&f.ast, &interval.inner).map_err(py_err)?;
    Ok((m.alpha, m.beta))
}

/// Right-hand side of one theorem for endpoint magnitudes `alpha`, `beta`.
#[pyfunction]
#[pyo3(signature = (theorem_id, alpha, beta, interval, p = 2.0, q = 1.0, s = 1.0))]
fn bound(theorem_id: &str, alpha: f64, beta: f64, interval: PyPathInterval, p: f64, q: f64, s: f64) -> PyResult<f64> {
    let id = TheoremId::from_name(theorem_id)
        .ok_or_else(|| HhcertError::new_err(format!("unknown theorem id `{theorem_id}`")))?;
    id.bound(MeanPair::new(alpha, beta), &interval.inner, &BoundParams { p, q, s }).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (
    f, interval, p = 2.0, q = 1.0, s = 1.0,
    samples = sampling::DEFAULT_SAMPLES, seed = sampling::DEFAULT_SEED, tol = bounds::DEFAULT_TOL,
))]
#[allow(clippy::too_many_arguments)]
fn report_all(
    py: Python<'_>,
    f: &PyExpression,
    interval: PyPathInterval,
    p: f64,
    q: f64,
    s: f64,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Vec<PyBoundReport> {
    let cfg = ReportConfig { sampling: SampleConfig::new(samples, seed), tol };
    let reports = py.detach(|| bounds::report_all(&f.ast, &interval.inner, &BoundParams { p, q, s }, &cfg));
    reports.into_iter().map(Into::into).collect()
}

/// Samples one convexity class of `f`, or of `|f''|` with
/// `second_derivative=True`.
#[pyfunction]
#[pyo3(signature = (
    f, interval, class_name, s = 1.0, samples = sampling::DEFAULT_SAMPLES,
    seed = sampling::DEFAULT_SEED, second_derivative = false,
))]
#[pyo3(name = "classify")]
#[allow(clippy::too_many_arguments)]
fn classify_py(
    py: Python<'_>,
    f: &PyExpression,
    interval: PyPathInterval,
    class_name: &str,
    s: f64,
    samples: usize,
    seed: u64,
    second_derivative: bool,
) -> PyResult<PyVerdict> {
    let class = match class_name {
        "phi_convex" => ConvexityClass::PhiConvex,
        "log_phi_convex" => ConvexityClass::LogPhiConvex,
        "quasi_phi_convex" => ConvexityClass::QuasiPhiConvex,
        "s_convex" => ConvexityClass::SConvex { s },
        other => return Err(HhcertError::new_err(format!("unknown convexity class `{other}`"))),
    };
    let cfg = SampleConfig::new(samples, seed);
    let ast = &f.ast;
    let iv = &interval.inner;
    let v = py.detach(|| {
        if second_derivative {
            sampling::falsify(class, |x| Ok(eval_jet2(ast, x)?.d2.abs()), iv, &cfg)
        } else {
            sampling::falsify(class, |x| ast.eval(x), iv, &cfg)
        }
    });
    Ok(v.map_err(py_err)?.into())
}

#[pyfunction]
#[pyo3(signature = (f, a, b, tol = 1e-8, samples = sampling::DEFAULT_SAMPLES, seed = sampling::DEFAULT_SEED))]
fn bracket_integral(py: Python<'_>, f: &PyExpression, a: f64, b: f64, tol: f64, samples: usize, seed: u64) -> PyResult<PyBracket> {
    let cfg = SampleConfig::new(samples, seed);
    let br = py.detach(|| bracket::bracket_integral(&f.ast, a, b, tol, &cfg)).map_err(py_err)?;
    Ok(PyBracket { lo: br.lo, hi: br.hi, panels: br.panels, hypothesis: br.hypothesis.into() })
}

/// `(value, error_estimate)` of `int_lo^hi f`.
#[pyfunction]
#[pyo3(signature = (f, lo, hi, tol = bounds::DEFAULT_TOL))]
fn integrate(f: &PyExpression, lo: f64, hi: f64, tol: f64) -> PyResult<(f64, f64)> {
    let r = hhcert_core::integrate(|x| f.ast.eval(x), lo, hi, tol).map_err(py_err)?;
    Ok((r.value, r.err_est))
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    special::gamma(x).map_err(py_err)
}

#[pyfunction]
fn beta_tt(p: f64) -> PyResult<f64> {
    special::beta_tt(p).map_err(py_err)
}

#[pyfunction]
fn log_mean(alpha: f64, beta: f64) -> PyResult<f64> {
    special::log_mean(MeanPair::new(alpha, beta)).map_err(py_err)
}

#[pyfunction]
fn kernel_log(alpha: f64, beta: f64) -> PyResult<f64> {
    special::kernel_log(MeanPair::new(alpha, beta)).map_err(py_err)
}

#[pymodule]
fn hhcert(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("HhcertError", py.get_type::<HhcertError>())?;
    m.add("HypothesisFalsifiedError", py.get_type::<HypothesisFalsifiedError>())?;
    m.add("THEOREM_IDS", TheoremId::ALL.map(TheoremId::as_str).to_vec())?;
    m.add_class::<PyExpression>()?;
    m.add_class::<PyPathInterval>()?;
    m.add_class::<PyWitness>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PyDefect>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PyBracket>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(defect, m)?)?;
    m.add_function(wrap_pyfunction!(identity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(endpoint_magnitudes, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(report_all, m)?)?;
    m.add_function(wrap_pyfunction!(classify_py, m)?)?;
    m.add_function(wrap_pyfunction!(bracket_integral, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(beta_tt, m)?)?;
    m.add_function(wrap_pyfunction!(log_mean, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_log, m)?)?;
    Ok(())
}
