//! Python bindings: copula evaluation, fitting, bootstrap CI, and the
//! goodness-of-fit test, mirroring the library's main operations.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tiecop::{
    bootstrap_ci, fit_average_rank, fit_censoring, fit_random_break, gof_test, kendall_tau_b,
    CensoredData, Error, Family, Fit, Seed, TieStrategy,
};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Numerical(_) | Error::BootstrapUnstable { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn family(name: &str) -> PyResult<Family> {
    name.parse().map_err(to_py_err)
}

fn data(x: Vec<f64>, y: Vec<f64>) -> PyResult<CensoredData> {
    CensoredData::from_raw(&x, &y).map_err(to_py_err)
}

fn fit_dict<'py>(py: Python<'py>, fit: &Fit) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("family", fit.family.name())?;
    d.set_item("theta", fit.theta)?;
    d.set_item("tau", fit.tau)?;
    d.set_item("loglik", fit.loglik)?;
    d.set_item("converged", fit.converged)?;
    Ok(d)
}

/// Copula CDF C(u, v).
#[pyfunction]
fn cdf(family_name: &str, theta: f64, u: f64, v: f64) -> PyResult<f64> {
    let fam = family(family_name)?;
    fam.check_theta(theta).map_err(to_py_err)?;
    Ok(fam.cdf(theta, u, v))
}

/// Copula density c(u, v).
#[pyfunction]
fn pdf(family_name: &str, theta: f64, u: f64, v: f64) -> PyResult<f64> {
    let fam = family(family_name)?;
    fam.check_theta(theta).map_err(to_py_err)?;
    Ok(fam.pdf(theta, u, v))
}

/// Conditional distribution dC/du (u, v).
#[pyfunction]
fn dcdu(family_name: &str, theta: f64, u: f64, v: f64) -> PyResult<f64> {
    let fam = family(family_name)?;
    fam.check_theta(theta).map_err(to_py_err)?;
    Ok(fam.dcdu(theta, u, v))
}

/// Kendall tau for a parameter value.
#[pyfunction]
fn theta_to_tau(family_name: &str, theta: f64) -> PyResult<f64> {
    family(family_name)?.theta_to_tau(theta).map_err(to_py_err)
}

/// Parameter value for a Kendall tau.
#[pyfunction]
fn tau_to_theta(family_name: &str, tau: f64) -> PyResult<f64> {
    family(family_name)?.tau_to_theta(tau).map_err(to_py_err)
}

/// Draw n pairs from the copula; returns a list of (u, v) tuples.
#[pyfunction]
#[pyo3(signature = (family_name, theta, n, seed = 0))]
fn sample(family_name: &str, theta: f64, n: usize, seed: u64) -> PyResult<Vec<(f64, f64)>> {
    let mut rng = Seed(seed).rng();
    family(family_name)?
        .sample(theta, n, &mut rng)
        .map_err(to_py_err)
}

/// Kendall's tau-b of two margins (tie-corrected).
#[pyfunction]
fn tau_b(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    kendall_tau_b(&x, &y).map_err(to_py_err)
}

/// Fit a copula family to raw bivariate data.
///
/// method: "censoring" (tie-aware, default), "average-rank", "random-break".
#[pyfunction]
#[pyo3(signature = (x, y, family_name, method = "censoring", tau0 = None, m = 100, seed = 0))]
fn fit<'py>(
    py: Python<'py>,
    x: Vec<f64>,
    y: Vec<f64>,
    family_name: &str,
    method: &str,
    tau0: Option<f64>,
    m: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let fam = family(family_name)?;
    let d = data(x, y)?;
    let fit = match method {
        "censoring" => fit_censoring(fam, &d, tau0),
        "average-rank" => fit_average_rank(fam, &d, tau0),
        "random-break" => fit_random_break(fam, &d, m, Seed(seed), tau0),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown method '{other}' (expected censoring, average-rank, random-break)"
            )))
        }
    }
    .map_err(to_py_err)?;
    fit_dict(py, &fit)
}

/// Percentile bootstrap confidence interval (tie-preserving resample).
#[pyfunction]
#[pyo3(signature = (x, y, family_name, b = 1000, alpha = 0.05, seed = 0, tau0 = None))]
fn ci<'py>(
    py: Python<'py>,
    x: Vec<f64>,
    y: Vec<f64>,
    family_name: &str,
    b: usize,
    alpha: f64,
    seed: u64,
    tau0: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let fam = family(family_name)?;
    let d = data(x, y)?;
    let ci = bootstrap_ci(fam, &d, b, alpha, Seed(seed), tau0).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("fit", fit_dict(py, &ci.fit)?)?;
    out.set_item("tau_lo", ci.tau_lo)?;
    out.set_item("tau_hi", ci.tau_hi)?;
    out.set_item("theta_lo", ci.theta_lo)?;
    out.set_item("theta_hi", ci.theta_hi)?;
    out.set_item("alpha", ci.alpha)?;
    out.set_item("b", ci.b)?;
    out.set_item("b_failed", ci.b_failed)?;
    Ok(out)
}

/// Goodness-of-fit test with the tie-preserving bootstrap.
#[pyfunction]
#[pyo3(signature = (x, y, family_name, b = 1000, seed = 0, plus_one = false, tau0 = None))]
fn gof<'py>(
    py: Python<'py>,
    x: Vec<f64>,
    y: Vec<f64>,
    family_name: &str,
    b: usize,
    seed: u64,
    plus_one: bool,
    tau0: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let fam = family(family_name)?;
    let d = data(x, y)?;
    let rep = gof_test(fam, &d, b, Seed(seed), TieStrategy::Match, plus_one, tau0)
        .map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("fit", fit_dict(py, &rep.fit)?)?;
    out.set_item("statistic", rep.statistic)?;
    out.set_item("p_value", rep.p_value)?;
    out.set_item("b", rep.b)?;
    out.set_item("b_failed", rep.b_failed)?;
    Ok(out)
}

#[pymodule]
fn tiecop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(cdf, m)?)?;
    m.add_function(wrap_pyfunction!(pdf, m)?)?;
    m.add_function(wrap_pyfunction!(dcdu, m)?)?;
    m.add_function(wrap_pyfunction!(theta_to_tau, m)?)?;
    m.add_function(wrap_pyfunction!(tau_to_theta, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(tau_b, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(ci, m)?)?;
    m.add_function(wrap_pyfunction!(gof, m)?)?;
    Ok(())
}
