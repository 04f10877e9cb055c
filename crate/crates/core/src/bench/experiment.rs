//! End-to-end driver: ansatz, branch weights, sampling and SQD for each
//! geometry of a reaction profile, with reaction and activation energies.

use super::oracle::{fci_ground_state, FCI_LIMIT};
use crate::ansatz::{branch_weights, build_ef_state, ef_energy, sector_configurations, AmplitudeData, AnsatzConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::{read_fcidump, ActiveSpaceHamiltonian, Configuration};
use crate::sampler::{postselection_fraction, run_ef_sampling, SamplingMode, SamplingOptions};
use crate::sqd::{run_sqd, RecoveryConfig, SQDResult};
use crate::HARTREE_TO_KCAL_PER_MOL;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Orbitals up to which the branch-algebra energy of the ansatz is reported.
const EF_ENERGY_MAX_ORBITALS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryInput {
    pub label: String,
    pub fcidump: PathBuf,
    /// Amplitude file; MP2 amplitudes are used when absent.
    #[serde(default)]
    pub amplitudes: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub geometries: Vec<GeometryInput>,
    #[serde(default)]
    pub ansatz: AnsatzConfig,
    pub shots: u64,
    #[serde(default = "default_mode")]
    pub sampling_mode: SamplingMode,
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub recovery: RecoveryConfig,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Replaces the seeds inside `ansatz` and `recovery`.
    #[serde(default)]
    pub seed: u64,
}

fn default_mode() -> SamplingMode {
    SamplingMode::Direct
}

impl ExperimentConfig {
    /// Reads a JSON config; relative paths are taken from the file's directory.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for g in &mut cfg.geometries {
            if g.fcidump.is_relative() {
                g.fcidump = base.join(&g.fcidump);
            }
            if let Some(a) = &mut g.amplitudes {
                if a.is_relative() {
                    *a = base.join(&*a);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.geometries.is_empty() {
            return Err(Error::Invalid("experiment needs at least one geometry".into()));
        }
        if self.shots == 0 {
            return Err(Error::Invalid("shots must be positive".into()));
        }
        for g in &self.geometries {
            let files = std::iter::once(&g.fcidump).chain(g.amplitudes.as_ref());
            for f in files {
                if !f.is_file() {
                    return Err(Error::Invalid(format!("geometry '{}': file {} not found", g.label, f.display())));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSummary {
    pub n_det: usize,
    pub lucj_layers: usize,
    pub branches: usize,
    pub noci_energy: f64,
    pub noci_dropped: usize,
    pub optimizer_converged: bool,
    pub ef_energy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingSummary {
    pub shots: u64,
    pub distinct: usize,
    pub postselection_fraction: f64,
    pub mode: SamplingMode,
    pub noise: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub label: String,
    pub fcidump: String,
    pub amplitude_source: String,
    pub norb: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub hf_energy: Option<f64>,
    pub fci_energy: Option<f64>,
    pub ansatz: Option<AnsatzSummary>,
    pub sampling: Option<SamplingSummary>,
    pub sqd: Option<SQDResult>,
    /// Set when a stage failed; later stages are then absent.
    pub error: Option<StageFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    /// Numerical non-convergence rather than bad input.
    pub convergence: bool,
    pub message: String,
}

impl From<&Error> for StageFailure {
    fn from(e: &Error) -> Self {
        Self { convergence: !e.is_input_error(), message: e.to_string() }
    }
}

impl GeometryReport {
    pub fn sqd_energy(&self) -> Option<f64> {
        self.sqd.as_ref().map(|r| r.energy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyDifference {
    pub sqd_hartree: Option<f64>,
    pub sqd_kcal_per_mol: Option<f64>,
    pub fci_hartree: Option<f64>,
    pub fci_kcal_per_mol: Option<f64>,
}

impl EnergyDifference {
    fn between(from: &GeometryReport, to: &GeometryReport) -> Self {
        let diff = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(a, b)| b - a);
        let sqd = diff(from.sqd_energy(), to.sqd_energy());
        let fci = diff(from.fci_energy, to.fci_energy);
        Self {
            sqd_hartree: sqd,
            sqd_kcal_per_mol: sqd.map(|e| e * HARTREE_TO_KCAL_PER_MOL),
            fci_hartree: fci,
            fci_kcal_per_mol: fci.map(|e| e * HARTREE_TO_KCAL_PER_MOL),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub config: ExperimentConfig,
    pub geometries: Vec<GeometryReport>,
    /// `E_TS − E_R`, present with at least two geometries.
    pub activation_energy: Option<EnergyDifference>,
    /// `E_P − E_R`, present with three geometries.
    pub reaction_energy: Option<EnergyDifference>,
    pub hartree_to_kcal_per_mol: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// True when every geometry reached an SQD energy.
    pub fn complete(&self) -> bool {
        self.geometries.iter().all(|g| g.error.is_none() && g.sqd.is_some())
    }
}

/// Everything a single geometry needs, already loaded.
pub struct GeometryRun<'a> {
    pub ham: &'a ActiveSpaceHamiltonian,
    pub amplitudes: &'a AmplitudeData,
}

/// Runs all stages for one geometry. Failures are recorded in the report.
pub fn run_geometry(run: &GeometryRun<'_>, cfg: &ExperimentConfig, report: &mut GeometryReport) {
    if let Err(e) = run_stages(run, cfg, report) {
        report.error = Some((&e).into());
    }
}

fn run_stages(run: &GeometryRun<'_>, cfg: &ExperimentConfig, report: &mut GeometryReport) -> Result<()> {
    let ham = run.ham;
    let m = ham.norb();
    report.hf_energy = Some(ham.diagonal_element(&Configuration::hartree_fock(ham.n_alpha(), ham.n_beta())));
    if sector_configurations(ham).map(|c| c.len() <= FCI_LIMIT).unwrap_or(false) {
        report.fci_energy = Some(fci_ground_state(ham)?.energy);
    }
    let ansatz_cfg = AnsatzConfig { seed: cfg.seed, ..cfg.ansatz.clone() };
    let build = build_ef_state(ham, run.amplitudes, &ansatz_cfg)?;
    let weights = branch_weights(&build.state)?;
    let ef = if m <= EF_ENERGY_MAX_ORBITALS { Some(ef_energy(&build.state, ham)?) } else { None };
    report.ansatz = Some(AnsatzSummary {
        n_det: build.state.n_det(),
        lucj_layers: build.state.lucj_alpha.len(),
        branches: weights.branches.len(),
        noci_energy: build.noci_energy,
        noci_dropped: build.noci_dropped,
        optimizer_converged: build.optimizer_converged,
        ef_energy: ef,
    });
    let opts = SamplingOptions { shots: cfg.shots, seed: cfg.seed, mode: cfg.sampling_mode, noise: cfg.noise };
    let samples = run_ef_sampling(&build.state, &weights, &opts)?;
    report.sampling = Some(SamplingSummary {
        shots: samples.total(),
        distinct: samples.counts.len(),
        postselection_fraction: postselection_fraction(&samples, ham.n_alpha(), ham.n_beta()),
        mode: cfg.sampling_mode,
        noise: cfg.noise,
    });
    let rec = RecoveryConfig { seed: cfg.seed, ..cfg.recovery.clone() };
    report.sqd = Some(run_sqd(ham, &samples, &rec)?);
    Ok(())
}

fn empty_report(g: &GeometryInput) -> GeometryReport {
    GeometryReport {
        label: g.label.clone(),
        fcidump: g.fcidump.display().to_string(),
        amplitude_source: g.amplitudes.as_ref().map_or("mp2".to_owned(), |p| p.display().to_string()),
        norb: 0,
        n_alpha: 0,
        n_beta: 0,
        hf_energy: None,
        fci_energy: None,
        ansatz: None,
        sampling: None,
        sqd: None,
        error: None,
    }
}

fn load_and_run(g: &GeometryInput, cfg: &ExperimentConfig) -> GeometryReport {
    let mut report = empty_report(g);
    let loaded = read_fcidump(&g.fcidump).and_then(|ham| {
        let amps = match &g.amplitudes {
            Some(p) => AmplitudeData::read(p)?,
            None => AmplitudeData::mp2(&ham),
        };
        if (amps.norb, amps.n_alpha, amps.n_beta) != (ham.norb(), ham.n_alpha(), ham.n_beta()) {
            return Err(Error::Dimension(format!(
                "amplitudes for ({}, {}, {}) but Hamiltonian has ({}, {}, {})",
                amps.norb,
                amps.n_alpha,
                amps.n_beta,
                ham.norb(),
                ham.n_alpha(),
                ham.n_beta()
            )));
        }
        Ok((ham, amps))
    });
    match loaded {
        Ok((ham, amps)) => {
            report.norb = ham.norb();
            report.n_alpha = ham.n_alpha();
            report.n_beta = ham.n_beta();
            run_geometry(&GeometryRun { ham: &ham, amplitudes: &amps }, cfg, &mut report);
        }
        Err(e) => report.error = Some((&e).into()),
    }
    report
}

/// Geometries are processed concurrently; the first is the reactant, the
/// second the transition state and the third the product.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let geometries: Vec<GeometryReport> = cfg.geometries.par_iter().map(|g| load_and_run(g, cfg)).collect();
    let activation = (geometries.len() >= 2).then(|| EnergyDifference::between(&geometries[0], &geometries[1]));
    let reaction = (geometries.len() >= 3).then(|| EnergyDifference::between(&geometries[0], &geometries[2]));
    Ok(ExperimentReport {
        seed: cfg.seed,
        config: cfg.clone(),
        geometries,
        activation_energy: activation,
        reaction_energy: reaction,
        hartree_to_kcal_per_mol: HARTREE_TO_KCAL_PER_MOL,
    })
}
