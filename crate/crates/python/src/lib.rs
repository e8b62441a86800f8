use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use fgcode::bitio::{BitReader, BitWriter};
use fgcode::container;
use fgcode::eval::{self, Comparison, ExperimentConfig};
use fgcode::oracle;

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Phase-1 parameters (m, m2) derived from p.
#[pyclass(name = "GeometricParams", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyGeometricParams(fgcode::GeometricParams);

#[pymethods]
impl PyGeometricParams {
    #[new]
    fn new(p: f64) -> PyResult<Self> {
        fgcode::GeometricParams::derive(p)
            .map(Self)
            .map_err(value_error)
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p
    }

    #[getter]
    fn m(&self) -> u64 {
        self.0.m
    }

    #[getter]
    fn m2(&self) -> u64 {
        self.0.m2
    }

    fn layout(&self, n: u64) -> PyCodeLayout {
        PyCodeLayout(self.0.layout(n))
    }

    fn __repr__(&self) -> String {
        format!("GeometricParams(p={}, m={}, m2={})", self.0.p, self.0.m, self.0.m2)
    }
}

/// Layout for a fixed (m, m2, n); encodes and decodes single values.
#[pyclass(name = "CodeLayout", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyCodeLayout(fgcode::CodeLayout);

#[pymethods]
impl PyCodeLayout {
    #[new]
    fn new(m: u64, m2: u64, n: u64) -> PyResult<Self> {
        fgcode::CodeLayout::new(m, m2, n)
            .map(Self)
            .map_err(value_error)
    }

    #[getter]
    fn n(&self) -> u64 {
        self.0.n
    }
    #[getter]
    fn m(&self) -> u64 {
        self.0.m
    }
    #[getter]
    fn m2(&self) -> u64 {
        self.0.m2
    }
    #[getter]
    fn m1(&self) -> u64 {
        self.0.m1
    }
    #[getter]
    fn d_t(&self) -> u64 {
        self.0.d_t
    }
    #[getter]
    fn h(&self) -> u32 {
        self.0.h
    }
    #[getter]
    fn s(&self) -> u64 {
        self.0.s
    }
    #[getter]
    fn h1(&self) -> u32 {
        self.0.h1
    }
    #[getter]
    fn s1(&self) -> u64 {
        self.0.s1
    }
    #[getter]
    fn e_n(&self) -> u32 {
        self.0.e_n
    }

    /// Codeword of `i` as a string of '0'/'1'.
    fn encode(&self, i: u64) -> PyResult<String> {
        self.0.encode(i).map(|cw| cw.bits()).map_err(value_error)
    }

    fn encode_branchfree(&self, i: u64) -> PyResult<String> {
        fgcode::branchfree::encode_branchfree(&self.0, i)
            .map(|cw| cw.bits())
            .map_err(value_error)
    }

    fn codeword_length(&self, i: u64) -> PyResult<u64> {
        self.0.codeword_length(i).map_err(value_error)
    }

    fn expected_length(&self, p: f64) -> PyResult<f64> {
        self.0.expected_length(p).map_err(value_error)
    }

    /// Packs `values` into MSB-first bytes; returns (bytes, bit length).
    fn encode_values<'py>(&self, py: Python<'py>, values: Vec<u64>) -> PyResult<(Bound<'py, PyBytes>, u64)> {
        let mut w = BitWriter::new();
        for v in values {
            self.0.encode_to(&mut w, v).map_err(value_error)?;
        }
        let len = w.bit_len();
        Ok((PyBytes::new(py, &w.flush()), len))
    }

    fn decode_values(&self, data: &[u8], count: usize) -> Vec<u64> {
        let mut r = BitReader::new(data);
        (0..count).map(|_| self.0.decode(&mut r)).collect()
    }

    fn __repr__(&self) -> String {
        let l = &self.0;
        format!(
            "CodeLayout(n={}, m={}, m2={}, m1={}, d_t={}, h1={}, s1={}, e_n={})",
            l.n, l.m, l.m2, l.m1, l.d_t, l.h1, l.s1, l.e_n
        )
    }
}

#[pyfunction]
fn compute_m(p: f64) -> PyResult<u64> {
    fgcode::codes::compute_m(p).map_err(value_error)
}

#[pyfunction]
fn entropy(p: f64, n: u64) -> PyResult<f64> {
    oracle::entropy(p, n).map_err(value_error)
}

#[pyfunction]
fn huffman_expected_length(p: f64, n: u64) -> PyResult<f64> {
    oracle::huffman_expected_length(p, n).map_err(value_error)
}

#[pyfunction]
fn weight_balanced_expected_length(p: f64, n: u64) -> PyResult<f64> {
    oracle::weight_balanced_expected_length(p, n).map_err(value_error)
}

#[pyfunction]
fn golomb_expected_length_bounded(p: f64, n: u64, m: u64) -> PyResult<f64> {
    fgcode::codes::golomb_expected_length_bounded(p, n, m).map_err(value_error)
}

#[pyfunction]
fn horibe_bound(p: f64, n: u64) -> PyResult<f64> {
    oracle::horibe_bound(p, n).map_err(value_error)
}

/// Encodes to an FGC1 container. Pass `n` for a constant bound or `bounds`
/// for one bound per value.
#[pyfunction]
#[pyo3(signature = (p, values, n=None, bounds=None))]
fn encode_container<'py>(
    py: Python<'py>,
    p: f64,
    values: Vec<u64>,
    n: Option<u64>,
    bounds: Option<Vec<u64>>,
) -> PyResult<Bound<'py, PyBytes>> {
    let g = fgcode::GeometricParams::derive(p).map_err(value_error)?;
    let bytes = match (n, bounds) {
        (Some(n), None) => container::encode_constant(g.m, g.m2, n, &values),
        (None, Some(b)) => container::encode_sidecar(g.m, g.m2, &values, &b),
        _ => return Err(PyValueError::new_err("give exactly one of n or bounds")),
    }
    .map_err(|e| PyIOError::new_err(e.to_string()))?;
    Ok(PyBytes::new(py, &bytes))
}

#[pyfunction]
#[pyo3(signature = (data, bounds=None))]
fn decode_container(data: &[u8], bounds: Option<Vec<u64>>) -> PyResult<Vec<u64>> {
    container::decode(data, bounds.as_deref())
        .map(|(_, values)| values)
        .map_err(|e| PyIOError::new_err(e.to_string()))
}

/// Runs an experiment; returns (report text, aggregate ratio, total cases).
#[pyfunction]
#[pyo3(signature = (comparison, num_p, seed=0, draws=10, format="csv"))]
fn run_experiment(
    py: Python<'_>,
    comparison: &str,
    num_p: u64,
    seed: u64,
    draws: u64,
    format: &str,
) -> PyResult<(String, f64, u64)> {
    let comparison: Comparison = comparison.parse().map_err(PyValueError::new_err)?;
    let format: eval::ReportFormat = format.parse().map_err(PyValueError::new_err)?;
    let cfg = ExperimentConfig {
        num_p,
        draws_per_p: draws,
        seed,
        comparison,
    };
    let report = py.detach(move || eval::run_experiment(&cfg)).map_err(value_error)?;
    Ok((
        eval::emit_report(&report, format),
        report.aggregate_ratio,
        report.total_cases,
    ))
}

#[pymodule]
fn pyfgcode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGeometricParams>()?;
    m.add_class::<PyCodeLayout>()?;
    m.add_function(wrap_pyfunction!(compute_m, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(huffman_expected_length, m)?)?;
    m.add_function(wrap_pyfunction!(weight_balanced_expected_length, m)?)?;
    m.add_function(wrap_pyfunction!(golomb_expected_length_bounded, m)?)?;
    m.add_function(wrap_pyfunction!(horibe_bound, m)?)?;
    m.add_function(wrap_pyfunction!(encode_container, m)?)?;
    m.add_function(wrap_pyfunction!(decode_container, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
