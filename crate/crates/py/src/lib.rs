//! Python bindings: strip parameters, analytic models, norm estimation,
//! and the bound/sharpness/finiteness reports.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use preschwarz::functions::{
    auto_n_terms, catalog, check_membership_s, check_membership_v, extremal_s,
    extremal_s_rotated, sample_v_member,
};
use preschwarz::norm;
use preschwarz::{AnalyticModel, DiscPoint, Error, GridSpec, ModelDoc, StripParams as Params};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Params { .. } | Error::Domain(_) | Error::Grid(_) | Error::UnknownFunction(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn disc_point(z: Complex64) -> PyResult<DiscPoint> {
    DiscPoint::new(z).map_err(to_py_err)
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

fn report_to_py<'py, T: serde::Serialize>(py: Python<'py>, report: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(report)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// Validated (alpha, beta) strip parameters.
#[pyclass(name = "StripParams", from_py_object)]
#[derive(Clone)]
struct PyStripParams(Params);

#[pymethods]
impl PyStripParams {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(PyStripParams(Params::new(alpha, beta).map_err(to_py_err)?))
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi()
    }

    /// Strip map value P(z).
    fn eval_p(&self, z: Complex64) -> PyResult<Complex64> {
        Ok(preschwarz::stripmap::eval_p(&self.0, disc_point(z)?))
    }

    fn __repr__(&self) -> String {
        format!("StripParams(alpha={}, beta={})", self.0.alpha(), self.0.beta())
    }
}

/// An analytic function on the disc (catalog entry or constructed series).
#[pyclass(name = "AnalyticModel")]
struct PyModel(AnalyticModel);

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        Ok(PyModel(catalog(name).map_err(to_py_err)?))
    }

    #[staticmethod]
    #[pyo3(signature = (params, n_terms=None))]
    fn extremal(params: &PyStripParams, n_terms: Option<usize>) -> Self {
        let n = n_terms.unwrap_or_else(|| auto_n_terms(&params.0, 0.99));
        PyModel(extremal_s(&params.0, n))
    }

    #[staticmethod]
    #[pyo3(signature = (params, n_terms=None))]
    fn extremal_rotated(params: &PyStripParams, n_terms: Option<usize>) -> Self {
        let n = n_terms.unwrap_or_else(|| auto_n_terms(&params.0, 0.99));
        PyModel(extremal_s_rotated(&params.0, n))
    }

    #[staticmethod]
    #[pyo3(signature = (params, n_terms=None))]
    fn v_sample(params: &PyStripParams, n_terms: Option<usize>) -> PyResult<Self> {
        let n = n_terms.unwrap_or_else(|| auto_n_terms(&params.0, 0.99));
        Ok(PyModel(sample_v_member(&params.0, n).map_err(to_py_err)?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyModel(AnalyticModel::from_doc(&doc).map_err(to_py_err)?))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_doc()).unwrap()
    }

    #[getter]
    fn kind(&self) -> String {
        self.0.kind().to_string()
    }

    fn eval_f(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.eval_f(disc_point(z)?).map_err(to_py_err)
    }

    fn eval_f1(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.eval_f1(disc_point(z)?).map_err(to_py_err)
    }

    fn eval_f2(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.eval_f2(disc_point(z)?).map_err(to_py_err)
    }

    fn pre_schwarzian(&self, z: Complex64) -> PyResult<Complex64> {
        norm::preschwarzian(&self.0, disc_point(z)?).map_err(to_py_err)
    }

    fn hyperbolic_quantity(&self, z: Complex64) -> PyResult<f64> {
        norm::hyperbolic_quantity(&self.0, disc_point(z)?).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("AnalyticModel(kind={:?})", self.0.kind())
    }
}

fn grid(
    radius_levels: usize,
    angles: usize,
    refine_rounds: usize,
    refine_shrink: f64,
) -> PyResult<GridSpec> {
    GridSpec::new(radius_levels, angles, refine_rounds, refine_shrink).map_err(to_py_err)
}

/// Grid estimate of the hyperbolic sup-norm; returns a dict mirroring the
/// JSON report.
#[pyfunction]
#[pyo3(signature = (model, radius_levels=10, angles=128, refine_rounds=3, refine_shrink=0.5))]
fn estimate_norm<'py>(
    py: Python<'py>,
    model: &PyModel,
    radius_levels: usize,
    angles: usize,
    refine_rounds: usize,
    refine_shrink: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let g = grid(radius_levels, angles, refine_rounds, refine_shrink)?;
    let est = norm::estimate_norm(&model.0, &g).map_err(to_py_err)?;
    report_to_py(py, &est)
}

#[pyfunction]
fn bound_theorem1(params: &PyStripParams) -> f64 {
    norm::bound_theorem1(&params.0)
}

#[pyfunction]
fn bound_theorem_a(params: &PyStripParams) -> Complex64 {
    norm::bound_theorem_a(&params.0)
}

#[pyfunction]
fn bound_theorem_b(params: &PyStripParams) -> Complex64 {
    norm::bound_theorem_b(&params.0)
}

#[pyfunction]
fn bound_report<'py>(py: Python<'py>, params: &PyStripParams) -> PyResult<Bound<'py, PyAny>> {
    report_to_py(py, &norm::bound_report(&params.0))
}

#[pyfunction]
#[pyo3(signature = (model, params, class_name="s", radius_levels=7, angles=128))]
fn check_membership<'py>(
    py: Python<'py>,
    model: &PyModel,
    params: &PyStripParams,
    class_name: &str,
    radius_levels: usize,
    angles: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let g = grid(radius_levels, angles, 0, 0.5)?;
    let report = match class_name {
        "s" | "S" => check_membership_s(&model.0, &params.0, &g),
        "v" | "V" => check_membership_v(&model.0, &params.0, &g),
        other => {
            return Err(PyValueError::new_err(format!(
                "class must be 's' or 'v', got {other:?}"
            )))
        }
    }
    .map_err(to_py_err)?;
    report_to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (params, radius_levels=10, angles=128, refine_rounds=3, refine_shrink=0.5))]
fn sharpness_report<'py>(
    py: Python<'py>,
    params: &PyStripParams,
    radius_levels: usize,
    angles: usize,
    refine_rounds: usize,
    refine_shrink: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let g = grid(radius_levels, angles, refine_rounds, refine_shrink)?;
    let report = norm::sharpness_report(&params.0, &g).map_err(to_py_err)?;
    report_to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (params, model, levels=12))]
fn finiteness_experiment<'py>(
    py: Python<'py>,
    params: &PyStripParams,
    model: &PyModel,
    levels: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report =
        norm::finiteness_experiment(&params.0, &model.0, levels).map_err(to_py_err)?;
    report_to_py(py, &report)
}

#[pymodule]
fn preschwarz_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStripParams>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(estimate_norm, m)?)?;
    m.add_function(wrap_pyfunction!(bound_theorem1, m)?)?;
    m.add_function(wrap_pyfunction!(bound_theorem_a, m)?)?;
    m.add_function(wrap_pyfunction!(bound_theorem_b, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(check_membership, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness_report, m)?)?;
    m.add_function(wrap_pyfunction!(finiteness_experiment, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
