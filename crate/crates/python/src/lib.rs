//! Python bindings for `ybhom`.

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::ybhom::homology::{homology_dims, r_ranks, VModuleSpec};
use ::ybhom::kernel::{hilbert_check, kernel_dim_direct, kernel_dims_recurrence, verify_decomposition, KernelTower};
use ::ybhom::scalar::RatFunc as CoreRatFunc;
use ::ybhom::tensor::RankMode;
use ::ybhom::ybop::{check_phi_formula, check_ybe, YBData as CoreYBData};

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An element of Q(y), always in lowest terms.
#[pyclass(name = "RatFunc", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct RatFunc(CoreRatFunc);

#[pymethods]
impl RatFunc {
    /// Parses expressions such as "1 - y^2" or "(1+y^2)/(1-y)".
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        CoreRatFunc::parse(text).map(RatFunc).map_err(value_error)
    }

    #[staticmethod]
    fn quantum_int(k: usize) -> Self {
        RatFunc(::ybhom::scalar::quantum_int(k))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Value at an integer point, as a string "p" or "p/q".
    fn eval(&self, point: i64) -> PyResult<String> {
        let at = BigRational::from_integer(BigInt::from(point));
        self.0.eval_at(&at).map(|v| v.to_string()).map_err(value_error)
    }

    fn inv(&self) -> PyResult<Self> {
        self.0.inv().map(RatFunc).map_err(value_error)
    }

    fn __add__(&self, other: &RatFunc) -> Self {
        RatFunc(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &RatFunc) -> Self {
        RatFunc(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &RatFunc) -> Self {
        RatFunc(&self.0 * &other.0)
    }

    fn __truediv__(&self, other: &RatFunc) -> PyResult<Self> {
        self.0.checked_div(&other.0).map(RatFunc).map_err(value_error)
    }

    fn __neg__(&self) -> Self {
        RatFunc(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RatFunc('{}')", self.0)
    }
}

fn parse_mode(mode: &str) -> PyResult<RankMode> {
    mode.parse::<RankMode>().map_err(PyValueError::new_err)
}

/// The operator R_m with its derived maps, cached per degree.
#[pyclass(name = "YBData", frozen)]
struct YBData(CoreYBData);

#[pymethods]
impl YBData {
    #[new]
    #[pyo3(signature = (m, rank_mode="exact"))]
    fn new(m: usize, rank_mode: &str) -> PyResult<Self> {
        CoreYBData::with_mode(m, parse_mode(rank_mode)?).map(YBData).map_err(value_error)
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn dim(&self, n: usize) -> usize {
        self.0.dim(n)
    }

    /// R_m as a dense matrix of strings.
    fn r_matrix(&self) -> Vec<Vec<String>> {
        let r = self.0.r();
        (0..r.rows()).map(|i| (0..r.cols()).map(|j| r.get(i, j).to_string()).collect()).collect()
    }

    fn check_ybe(&self) -> PyResult<bool> {
        check_ybe(self.0.r()).map_err(value_error)
    }

    fn kernel_dim(&self, py: Python<'_>, n: usize) -> PyResult<usize> {
        py.detach(|| kernel_dim_direct(&self.0, n)).map_err(value_error)
    }

    /// Dimensions of the generator complements for degrees 0..=n_max.
    fn tilde_dims(&self, py: Python<'_>, n_max: usize) -> PyResult<Vec<usize>> {
        let tower = py.detach(|| KernelTower::build(&self.0, n_max)).map_err(value_error)?;
        Ok(tower.degrees().iter().map(|d| d.b()).collect())
    }

    fn sigma_identities_hold(&self, py: Python<'_>, n: usize) -> PyResult<bool> {
        py.detach(|| self.0.check_sigma_identities(n)).map(|r| r.ok()).map_err(value_error)
    }

    fn phi_formula_holds(&self, py: Python<'_>, n: usize) -> PyResult<bool> {
        let m = self.0.m();
        py.detach(|| check_phi_formula(&self.0, n)).map(|r| r.ok(m)).map_err(value_error)
    }

    fn decomposition_holds(&self, py: Python<'_>, n: usize) -> PyResult<bool> {
        py.detach(|| verify_decomposition(&self.0, n)).map(|r| r.ok()).map_err(value_error)
    }

    /// Number of rank computations whose evaluated and exact ranks disagreed.
    fn rank_mismatches(&self) -> usize {
        self.0.ranker().stats().mismatches.len()
    }
}

/// A coefficient module: finite (matrices A_i) or the truncated polynomial ring.
#[pyclass(name = "Module", frozen)]
struct Module(VModuleSpec);

#[pymethods]
impl Module {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        VModuleSpec::parse_json(text).map(Module).map_err(value_error)
    }

    #[staticmethod]
    fn free(m: usize, truncation: usize) -> PyResult<Self> {
        VModuleSpec::free(m, truncation).map(Module).map_err(value_error)
    }

    #[staticmethod]
    fn triangular_example() -> Self {
        Module(VModuleSpec::triangular_example())
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn is_free(&self) -> bool {
        self.0.is_free()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(value_error)
    }

    /// `(n, module_degree, dim_H)` for every computed piece.
    fn homology(&self, py: Python<'_>, yb: &YBData, n_max: usize) -> PyResult<Vec<(usize, usize, usize)>> {
        let rep = py.detach(|| homology_dims(&self.0, &yb.0, n_max)).map_err(value_error)?;
        Ok(rep.records.iter().map(|r| (r.n, r.module_degree, r.dim_h)).collect())
    }

    fn r_ranks(&self, yb: &YBData) -> PyResult<Vec<usize>> {
        r_ranks(&self.0, &yb.0).map_err(value_error)
    }
}

/// M(n) for n = 0..=n_max from the binomial recurrence.
#[pyfunction]
fn kernel_dims(m: usize, n_max: usize) -> PyResult<Vec<i128>> {
    kernel_dims_recurrence(m, n_max).map_err(value_error)
}

#[pyfunction]
fn hilbert_identity_holds(m: usize, degree_bound: usize) -> PyResult<bool> {
    hilbert_check(m, degree_bound).map(|r| r.identity_ok && r.inverse_matches_m).map_err(value_error)
}

/// Runs the command-line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let res = py.detach(|| ::ybhom::cli::run(std::iter::once("ybhom".to_string()).chain(args)));
    (res.code, res.stdout, res.stderr)
}

#[pymodule]
#[pyo3(name = "ybhom")]
fn ybhom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<RatFunc>()?;
    m.add_class::<YBData>()?;
    m.add_class::<Module>()?;
    m.add_function(wrap_pyfunction!(kernel_dims, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_identity_holds, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
