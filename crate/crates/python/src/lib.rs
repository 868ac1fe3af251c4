//! Python bindings. Every function returns the same JSON-shaped report as the library, as
//! nested dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::{json, Value};

use liouville_lab::formfam::{contact_grid_check, gt_form};
use liouville_lab::liealg::geiges::geiges_isomorphism as geiges_iso;
use liouville_lab::liealg::{contact_check as contact, liouville_pair_check, LiouvillePair};
use liouville_lab::numfield::{pipeline, Poly};
use liouville_lab::symplin::{
    construct_cotamed, cotamed_exists, equivalence_suite as equivalence, simultaneous_reduce, SkewForm,
};
use liouville_lab::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Numerical(_) | Error::SearchExhausted(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn skew(m: Vec<Vec<f64>>) -> PyResult<SkewForm<f64>> {
    SkewForm::new(m).map_err(err)
}

fn pair(id: &str) -> PyResult<LiouvillePair> {
    LiouvillePair::from_preset(id).map_err(err)
}

/// Exact Liouville-pair certificate for a preset such as `"totreal:2"`.
#[pyfunction]
fn verify_pair(py: Python<'_>, preset: &str) -> PyResult<Py<PyAny>> {
    let p = pair(preset)?;
    let c = liouville_pair_check(&p.algebra, &p.plus, &p.minus).map_err(err)?;
    let kind = c.kind();
    to_py(py, &json!({
        "preset": preset,
        "verdict": c.verdict.as_str(),
        "certificate": format!("{}-{kind}", c.verdict.as_str()),
        "detail": c.to_json(),
    }))
}

/// Exact sign of `α ∧ dα^n` for `form` in `{"plus", "minus"}`.
#[pyfunction]
#[pyo3(signature = (preset, form = "plus"))]
fn contact_check(py: Python<'_>, preset: &str, form: &str) -> PyResult<Py<PyAny>> {
    let p = pair(preset)?;
    let a = match form {
        "plus" => &p.plus,
        "minus" => &p.minus,
        other => return Err(PyValueError::new_err(format!("form must be 'plus' or 'minus', got {other:?}"))),
    };
    to_py(py, &contact(&p.algebra, a).map_err(err)?.to_json())
}

/// Units, log lattice and monodromy of `ℤ[X]/(f)`; `coeffs` in ascending order.
#[pyfunction]
#[pyo3(signature = (coeffs, box_bound = None))]
fn numfield(py: Python<'_>, coeffs: Vec<i64>, box_bound: Option<i64>) -> PyResult<Py<PyAny>> {
    let poly = Poly::new(coeffs).map_err(err)?;
    to_py(py, &pipeline(poly, box_bound).map_err(err)?.to_json())
}

/// A complex structure tamed by both forms, or `None` when the pencil has a real negative eigenvalue.
#[pyfunction]
fn cotame(py: Python<'_>, omega0: Vec<Vec<f64>>, omega1: Vec<Vec<f64>>) -> PyResult<Py<PyAny>> {
    let (a0, a1) = (skew(omega0)?, skew(omega1)?);
    if !cotamed_exists(&a0, &a1).map_err(err)? {
        return Ok(py.None());
    }
    to_py(py, &construct_cotamed(&a0, &a1).map_err(err)?.to_json())
}

#[pyfunction]
#[pyo3(signature = (omega0, omega1, eps = 1e-3))]
fn pencil_reduce(py: Python<'_>, omega0: Vec<Vec<f64>>, omega1: Vec<Vec<f64>>, eps: f64) -> PyResult<Py<PyAny>> {
    let (a0, a1) = (skew(omega0)?, skew(omega1)?);
    to_py(py, &simultaneous_reduce(&a0, &a1, eps).map_err(err)?.to_json())
}

/// Grid check that the Giroux torsion form over a preset pair is contact.
#[pyfunction]
#[pyo3(signature = (preset, k = 1, grid = 1024))]
fn giroux_torsion(py: Python<'_>, preset: &str, k: u32, grid: usize) -> PyResult<Py<PyAny>> {
    let t = gt_form(&pair(preset)?, k).map_err(err)?;
    to_py(py, &contact_grid_check(&t.lambda(), t.interval, grid).map_err(err)?.to_json())
}

#[pyfunction]
fn geiges_isomorphism(py: Python<'_>, n: usize) -> PyResult<Py<PyAny>> {
    let iso = geiges_iso(n).map_err(err)?;
    let mut v = iso.to_json();
    v["passes"] = json!(iso.passes(1e-10));
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (dims, trials = 100, seed = 0))]
fn equivalence_suite(py: Python<'_>, dims: Vec<usize>, trials: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| equivalence(&dims, trials, seed)).map_err(err)?;
    to_py(py, &r.to_json())
}

#[pymodule]
fn liouville_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA", "liouville-lab/1")?;
    m.add_function(wrap_pyfunction!(verify_pair, m)?)?;
    m.add_function(wrap_pyfunction!(contact_check, m)?)?;
    m.add_function(wrap_pyfunction!(numfield, m)?)?;
    m.add_function(wrap_pyfunction!(cotame, m)?)?;
    m.add_function(wrap_pyfunction!(pencil_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(giroux_torsion, m)?)?;
    m.add_function(wrap_pyfunction!(geiges_isomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_suite, m)?)?;
    Ok(())
}
