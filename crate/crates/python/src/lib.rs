//! Python bindings. Errors from bad input raise `ValueError`; solver
//! non-convergence raises `RuntimeError`.

use efsqd::ansatz::{self, AmplitudeData, AnsatzConfig};
use efsqd::bench::{self, CircuitKind};
use efsqd::hamiltonian::{self, Configuration};
use efsqd::sampler::{self, SamplingMode, SamplingOptions};
use efsqd::sqd::{self, RecoveryConfig};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::collections::BTreeMap;

/// `(label, (re, im), probability)` of one branch.
type BranchRow = (String, (f64, f64), f64);

fn py_err(e: efsqd::Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

#[pyclass(name = "Hamiltonian", frozen)]
struct PyHamiltonian(hamiltonian::ActiveSpaceHamiltonian);

#[pymethods]
impl PyHamiltonian {
    #[staticmethod]
    fn from_fcidump(path: &str) -> PyResult<Self> {
        hamiltonian::read_fcidump(path).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        hamiltonian::parse_fcidump(text).map(Self).map_err(py_err)
    }

    #[getter]
    fn norb(&self) -> usize {
        self.0.norb()
    }

    #[getter]
    fn n_alpha(&self) -> usize {
        self.0.n_alpha()
    }

    #[getter]
    fn n_beta(&self) -> usize {
        self.0.n_beta()
    }

    #[getter]
    fn core_energy(&self) -> f64 {
        self.0.core_energy()
    }

    fn hf_energy(&self) -> f64 {
        self.0.diagonal_element(&Configuration::hartree_fock(self.0.n_alpha(), self.0.n_beta()))
    }

    /// `⟨m|H|n⟩` for determinants given as `(alpha_bits, beta_bits)`.
    fn matrix_element(&self, m: (u64, u64), n: (u64, u64)) -> PyResult<f64> {
        self.0.slater_condon_element(&m.into(), &n.into()).map_err(py_err)
    }

    fn fci_energy(&self, py: Python<'_>) -> PyResult<f64> {
        py.detach(|| bench::fci_ground_state(&self.0)).map(|s| s.energy).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Hamiltonian(norb={}, n_alpha={}, n_beta={})", self.0.norb(), self.0.n_alpha(), self.0.n_beta())
    }
}

#[pyclass(name = "EFState", frozen)]
struct PyEFState(ansatz::EFState);

#[pymethods]
impl PyEFState {
    #[staticmethod]
    fn hartree_fock(norb: usize, n_alpha: usize, n_beta: usize) -> PyResult<Self> {
        ansatz::EFState::hartree_fock(norb, n_alpha, n_beta).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        ansatz::EFState::from_json(text).map(Self).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(py_err)
    }

    #[getter]
    fn n_det(&self) -> usize {
        self.0.n_det()
    }

    #[getter]
    fn coefficients(&self) -> Vec<(f64, f64)> {
        self.0.coefficients.iter().map(|c| (c.re, c.im)).collect()
    }

    /// Energy from the branch algebra on M-qubit registers.
    fn energy(&self, py: Python<'_>, ham: &PyHamiltonian) -> PyResult<f64> {
        py.detach(|| ansatz::ef_energy(&self.0, &ham.0)).map_err(py_err)
    }

    /// Energy of the assembled 2M-qubit state.
    fn direct_energy(&self, py: Python<'_>, ham: &PyHamiltonian) -> PyResult<f64> {
        py.detach(|| bench::direct_ef_expectation(&self.0, &ham.0)).map_err(py_err)
    }

    /// `[(label, (re, im), probability)]` for every branch.
    fn branch_weights(&self) -> PyResult<Vec<BranchRow>> {
        let w = ansatz::branch_weights(&self.0).map_err(py_err)?;
        Ok(w.branches
            .iter()
            .zip(w.weights.iter().zip(&w.probabilities))
            .map(|(b, (r, p))| (sampler::branch_label(b), (r.re, r.im), *p))
            .collect())
    }
}

#[pyclass(name = "SampleCounts", frozen)]
struct PySampleCounts(sampler::SampleCounts);

#[pymethods]
impl PySampleCounts {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        sampler::SampleCounts::parse(text).map(Self).map_err(py_err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn total(&self) -> u64 {
        self.0.total()
    }

    /// `{(alpha_bits, beta_bits): count}`.
    fn counts(&self) -> BTreeMap<(u64, u64), u64> {
        self.0.counts.iter().map(|(c, n)| ((c.alpha(), c.beta()), *n)).collect()
    }

    fn postselection_fraction(&self, n_alpha: usize, n_beta: usize) -> f64 {
        sampler::postselection_fraction(&self.0, n_alpha, n_beta)
    }

    fn __len__(&self) -> usize {
        self.0.counts.len()
    }
}

#[pyclass(name = "SQDResult", frozen)]
struct PySQDResult(sqd::SQDResult);

#[pymethods]
impl PySQDResult {
    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy
    }

    #[getter]
    fn converged(&self) -> bool {
        self.0.converged
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.0.iterations.len()
    }

    #[getter]
    fn max_dimension(&self) -> usize {
        self.0.max_dimension()
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(py_err)
    }
}

#[pyfunction]
#[pyo3(signature = (ham, n_det=2, layers=0, optimize_iters=20, seed=0, amplitudes=None))]
fn build_ansatz(
    py: Python<'_>,
    ham: &PyHamiltonian,
    n_det: usize,
    layers: usize,
    optimize_iters: usize,
    seed: u64,
    amplitudes: Option<&str>,
) -> PyResult<PyEFState> {
    let amps = match amplitudes {
        Some(p) => AmplitudeData::read(p).map_err(py_err)?,
        None => AmplitudeData::mp2(&ham.0),
    };
    let cfg = AnsatzConfig { n_det, layers, optimize_iters, seed, ..AnsatzConfig::default() };
    py.detach(|| ansatz::build_ef_state(&ham.0, &amps, &cfg)).map(|b| PyEFState(b.state)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (state, shots, seed=0, mode="direct", noise=0.0))]
fn sample(py: Python<'_>, state: &PyEFState, shots: u64, seed: u64, mode: &str, noise: f64) -> PyResult<PySampleCounts> {
    let mode: SamplingMode = mode.parse().map_err(py_err)?;
    let opts = SamplingOptions { shots, seed, mode, noise };
    py.detach(|| {
        let w = ansatz::branch_weights(&state.0)?;
        sampler::run_ef_sampling(&state.0, &w, &opts)
    })
    .map(PySampleCounts)
    .map_err(py_err)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (ham, samples, batches=5, samples_per_batch=1000, iterations=5, cartesian=false, seed=0))]
fn run_sqd(
    py: Python<'_>,
    ham: &PyHamiltonian,
    samples: &PySampleCounts,
    batches: usize,
    samples_per_batch: usize,
    iterations: usize,
    cartesian: bool,
    seed: u64,
) -> PyResult<PySQDResult> {
    let cfg = RecoveryConfig {
        batches,
        samples_per_batch,
        max_recovery_iterations: iterations,
        cartesian,
        seed,
        ..RecoveryConfig::default()
    };
    py.detach(|| sqd::run_sqd(&ham.0, &samples.0, &cfg)).map(PySQDResult).map_err(py_err)
}

#[pyfunction]
fn estimate_resources<'py>(
    py: Python<'py>,
    kind: &str,
    norb: u64,
    n_alpha: u64,
    n_beta: u64,
    layers: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let kind: CircuitKind = kind.parse().map_err(PyValueError::new_err)?;
    let r = bench::estimate_resources(kind, norb, n_alpha, n_beta, layers);
    let d = PyDict::new(py);
    d.set_item("kind", kind.as_str())?;
    d.set_item("qubits", r.qubits)?;
    d.set_item("ancillas", r.ancillas)?;
    d.set_item("xxyy_gates", r.xxyy_gates)?;
    d.set_item("nn_gates", r.nn_gates)?;
    d.set_item("depth", r.depth)?;
    Ok(d)
}

#[pymodule]
fn pyefsqd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHamiltonian>()?;
    m.add_class::<PyEFState>()?;
    m.add_class::<PySampleCounts>()?;
    m.add_class::<PySQDResult>()?;
    m.add_function(wrap_pyfunction!(build_ansatz, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(run_sqd, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_resources, m)?)?;
    m.add("HARTREE_TO_KCAL_PER_MOL", efsqd::HARTREE_TO_KCAL_PER_MOL)?;
    Ok(())
}
