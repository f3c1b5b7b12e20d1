//! Python bindings for the `iwr` crate, importable as `pyiwr`.
//!
//! Integers cross the boundary as Python `int` (arbitrary precision);
//! every library error surfaces as `ValueError`.

use iwr::classes::classify_gram as classify_gram_rs;
use iwr::conic::compose as compose_rs;
use iwr::enumerate::{count as count_rs, enumerate_iwr as enumerate_rs};
use iwr::optimize::{optimize as optimize_rs, table1 as table1_rs, trivial_bound};
use iwr::zeta::{epstein_lattice, epstein_zeta as epstein_zeta_rs, packing_density, snr};
use iwr::{DeterminantSpec, GramMatrix};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: iwr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spec(m: BigInt, d: BigInt) -> PyResult<DeterminantSpec> {
    DeterminantSpec::new(m, d).map_err(err)
}

/// Similarity class `(p, r, q, D)` with `p² + D·r² = q²`.
#[pyclass(name = "SimilarityClass", module = "pyiwr", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyClass(iwr::SimilarityClass);

#[pymethods]
impl PyClass {
    #[new]
    #[pyo3(signature = (p, r, q, d))]
    fn new(p: BigInt, r: BigInt, q: BigInt, d: BigInt) -> PyResult<Self> {
        iwr::SimilarityClass::new(p, r, q, d).map(PyClass).map_err(err)
    }

    /// The class with `cos θ = p/q` of type `D`; `r` is derived.
    #[staticmethod]
    fn from_pqd(p: BigInt, q: BigInt, d: BigInt) -> PyResult<Self> {
        iwr::SimilarityClass::from_pqd(p, q, d).map(PyClass).map_err(err)
    }

    #[getter]
    fn p(&self) -> BigInt {
        self.0.p().clone()
    }

    #[getter]
    fn r(&self) -> BigInt {
        self.0.r().clone()
    }

    #[getter]
    fn q(&self) -> BigInt {
        self.0.q().clone()
    }

    #[getter(D)]
    fn d(&self) -> BigInt {
        self.0.d().clone()
    }

    fn minimal_lattice(&self) -> PyLattice {
        PyLattice(self.0.minimal_lattice())
    }

    fn compose(&self, other: PyRef<'_, PyClass>) -> PyResult<PyClass> {
        compose_rs(&self.0, &other.0).map(PyClass).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "SimilarityClass(p={}, r={}, q={}, D={})",
            self.0.p(),
            self.0.r(),
            self.0.q(),
            self.0.d()
        )
    }
}

/// The lattice `√(k/q)·Ω_D(p, q)`.
#[pyclass(name = "IwrLattice", module = "pyiwr", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyLattice(iwr::IwrLattice);

#[pymethods]
impl PyLattice {
    #[new]
    fn new(class: PyRef<'_, PyClass>, k: BigInt) -> PyResult<Self> {
        iwr::IwrLattice::new(class.0.clone(), k).map(PyLattice).map_err(err)
    }

    #[getter]
    fn class_(&self) -> PyClass {
        PyClass(self.0.class().clone())
    }

    #[getter]
    fn k(&self) -> BigInt {
        self.0.k().clone()
    }

    #[getter]
    fn minimum(&self) -> BigInt {
        self.0.minimum()
    }

    /// `(M, D)` with determinant `M·√D`.
    #[getter]
    fn determinant(&self) -> (BigInt, BigInt) {
        let det = self.0.determinant();
        (det.m().clone(), det.d().clone())
    }

    /// `[[a, b], [b, c]]`.
    #[getter]
    fn gram(&self) -> [[BigInt; 2]; 2] {
        self.0.gram().rows()
    }

    /// `k/q` as `(numerator, denominator)` in lowest terms.
    #[getter]
    fn scale_sq(&self) -> (BigInt, BigInt) {
        let s = self.0.scale_sq();
        (s.numer().clone(), s.denom().clone())
    }

    #[getter]
    fn packing_density(&self) -> f64 {
        packing_density(&self.0)
    }

    /// `(value, abs_error_bound)` of the Epstein zeta function at `s`.
    #[pyo3(signature = (s, eps = 1e-6))]
    fn epstein(&self, s: f64, eps: f64) -> PyResult<(f64, f64)> {
        let z = epstein_lattice(&self.0, s, eps).map_err(err)?;
        Ok((z.value, z.abs_error_bound))
    }

    /// Signal-to-noise ratio in dB.
    #[pyo3(signature = (eps = 1e-6))]
    fn snr(&self, eps: f64) -> PyResult<f64> {
        snr(&self.0, eps).map_err(err)
    }

    fn __repr__(&self) -> String {
        let c = self.0.class();
        format!(
            "IwrLattice(p={}, r={}, q={}, D={}, k={})",
            c.p(),
            c.r(),
            c.q(),
            c.d(),
            self.0.k()
        )
    }
}

/// `(class, k)` of the integral Gram matrix `[[a, b], [b, c]]`.
#[pyfunction]
fn classify_gram(a: BigInt, b: BigInt, c: BigInt) -> PyResult<(PyClass, BigInt)> {
    let g = GramMatrix::new(a, b, c).map_err(err)?;
    let (class, k) = classify_gram_rs(&g).map_err(err)?;
    Ok((PyClass(class), k))
}

#[pyfunction]
#[pyo3(signature = (m, d, include_square_class = false))]
fn enumerate_iwr(m: BigInt, d: BigInt, include_square_class: bool) -> PyResult<Vec<PyLattice>> {
    let list = enumerate_rs(&spec(m, d)?, include_square_class).map_err(err)?;
    Ok(list.into_iter().map(PyLattice).collect())
}

/// Per-divisor counts as a dict with keys `rows`, `total`,
/// `total_with_square_class`, `bound` (a `(num, den)` pair) and `diagnostic`.
#[pyfunction]
fn count<'py>(py: Python<'py>, m: BigInt, d: BigInt) -> PyResult<Bound<'py, PyDict>> {
    let report = count_rs(&spec(m, d)?).map_err(err)?;
    let rows: Vec<(BigInt, usize, usize, usize)> = report
        .rows
        .iter()
        .map(|row| (row.r.clone(), row.f, row.f1, row.f2))
        .collect();
    let out = PyDict::new(py);
    out.set_item("rows", rows)?;
    out.set_item("total", report.total)?;
    out.set_item("total_with_square_class", report.total_with_square_class)?;
    out.set_item(
        "bound",
        (report.bound.numer().clone(), report.bound.denom().clone()),
    )?;
    out.set_item("diagnostic", report.diagnostic)?;
    Ok(out)
}

/// `(lattice, maximizers, trivial_bound)` for the largest minimum.
#[pyfunction]
fn optimize(m: BigInt, d: BigInt) -> PyResult<(PyLattice, Vec<PyClass>, f64)> {
    let spec = spec(m, d)?;
    let opt = optimize_rs(&spec).map_err(err)?;
    let maximizers = opt.maximizers.into_iter().map(PyClass).collect();
    Ok((PyLattice(opt.lattice), maximizers, trivial_bound(&spec).value))
}

#[pyfunction]
fn compose(a: PyRef<'_, PyClass>, b: PyRef<'_, PyClass>) -> PyResult<PyClass> {
    compose_rs(&a.0, &b.0).map(PyClass).map_err(err)
}

/// `(value, abs_error_bound, truncation_radius)` for the WR form of minimum
/// `t` and determinant `delta`.
#[pyfunction]
#[pyo3(signature = (t, delta, s, eps = 1e-6))]
fn epstein_zeta(t: f64, delta: f64, s: f64, eps: f64) -> PyResult<(f64, f64, u64)> {
    let z = epstein_zeta_rs(t, delta, s, eps).map_err(err)?;
    Ok((z.value, z.abs_error_bound, z.truncation_radius))
}

/// The recomputed table of maximizers: one dict per row with keys `M`, `D`,
/// `lattice`, `published_min_norm` and `discrepancy` (`None` when the row agrees).
#[pyfunction]
fn table1<'py>(py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    table1_rs()
        .map_err(err)?
        .into_iter()
        .map(|row| {
            let out = PyDict::new(py);
            out.set_item("M", row.published.m)?;
            out.set_item("D", row.published.d)?;
            out.set_item("lattice", PyLattice(row.optimum.lattice))?;
            out.set_item("published_min_norm", row.published.min_norm)?;
            out.set_item("discrepancy", row.discrepancy)?;
            Ok(out)
        })
        .collect()
}

#[pymodule]
pub fn pyiwr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyClass>()?;
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(classify_gram, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_iwr, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(epstein_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    Ok(())
}
