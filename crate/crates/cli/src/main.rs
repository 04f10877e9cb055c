use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use efsqd::ansatz::{branch_weights, build_ef_state, ef_energy, sector_configurations, AmplitudeData, AnsatzConfig, EFState};
use efsqd::bench::{
    direct_ef_expectation, emit_report, estimate_resources, fci_ground_state, run_experiment, trace_csv, trace_rows,
    CircuitKind, ExperimentConfig, ReportFormat,
};
use efsqd::fock::Sparsity;
use efsqd::hamiltonian::{read_fcidump, Configuration};
use efsqd::sampler::{postselection_fraction, run_ef_sampling, SampleCounts, SamplingMode, SamplingOptions};
use efsqd::sqd::{run_sqd, RecoveryConfig};
use efsqd::HARTREE_TO_KCAL_PER_MOL;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "efsqd", version, about = "Entanglement-forged sample-based quantum diagonalization")]
struct Cli {
    /// Master seed for every stochastic stage [default: 0; for `experiment`, the config's seed].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core). Results do not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output file (directory for `experiment`). Defaults to stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read an FCIDUMP and print a summary.
    Parse {
        fcidump: PathBuf,
    },
    /// Build an EF state from amplitudes and write it as JSON.
    Ansatz(AnsatzArgs),
    /// Sample configurations from an EF state.
    Sample(SampleArgs),
    /// Run SQD with configuration recovery on sampled counts.
    Sqd(SqdArgs),
    /// Qubit, gate and depth counts for LUCJ and forged circuits.
    Resources(ResourceArgs),
    /// Full pipeline over a set of geometries described by a JSON config.
    Experiment(ExperimentArgs),
    /// Exact reference energies.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct AnsatzArgs {
    fcidump: PathBuf,
    /// Amplitude file; MP2 amplitudes when omitted.
    #[arg(long)]
    amplitudes: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    n_det: usize,
    /// LUCJ layers per spin (0 keeps all).
    #[arg(long, default_value_t = 0)]
    layers: usize,
    /// dense, nn, or banded:B.
    #[arg(long, default_value = "dense", value_parser = parse_sparsity)]
    sparsity: Sparsity,
    #[arg(long, default_value_t = 20)]
    optimize_iters: usize,
    /// Use random fields for every determinant instead of starting from HF.
    #[arg(long)]
    no_hf: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Direct,
    Ancilla,
}

impl From<Mode> for SamplingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Direct => SamplingMode::Direct,
            Mode::Ancilla => SamplingMode::Ancilla,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    /// EFState JSON.
    state: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, value_enum, default_value = "direct")]
    mode: Mode,
    /// Per-bit flip probability.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
}

#[derive(Args)]
struct SqdArgs {
    fcidump: PathBuf,
    counts: PathBuf,
    #[arg(long, default_value_t = 5)]
    batches: usize,
    #[arg(long, default_value_t = 1000)]
    samples_per_batch: usize,
    #[arg(long, default_value_t = 5)]
    iterations: usize,
    #[arg(long, default_value_t = 0.0)]
    penalty: f64,
    /// Expand each batch to all pairings of its α and β strings.
    #[arg(long)]
    cartesian: bool,
    #[arg(long, default_value_t = 1000)]
    davidson_max_iter: usize,
    /// Also write the per-batch energy trace as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ResourceArgs {
    /// lucj, ef-ind or ef-super; all kinds when omitted.
    #[arg(long)]
    kind: Option<CircuitKind>,
    #[arg(long)]
    norb: u64,
    #[arg(long)]
    n_alpha: u64,
    #[arg(long)]
    n_beta: u64,
    #[arg(long, default_value_t = 1)]
    layers: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Both,
}

#[derive(Args)]
struct ExperimentArgs {
    config: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    format: OutFormat,
}

#[derive(Args)]
struct OracleArgs {
    fcidump: PathBuf,
    /// EFState JSON to evaluate directly and through the branch algebra.
    #[arg(long)]
    state: Option<PathBuf>,
}

fn parse_sparsity(s: &str) -> std::result::Result<Sparsity, String> {
    match s {
        "dense" => Ok(Sparsity::Dense),
        "nn" | "nearest-neighbor" => Ok(Sparsity::NearestNeighbor),
        _ => s
            .strip_prefix("banded:")
            .and_then(|b| b.parse().ok())
            .map(Sparsity::Banded)
            .ok_or_else(|| format!("unknown sparsity '{s}' (dense, nn, banded:B)")),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.output.as_deref();
    match cli.command {
        Command::Parse { fcidump } => {
            let ham = read_fcidump(&fcidump).with_context(|| format!("reading {}", fcidump.display()))?;
            let hf = ham.diagonal_element(&Configuration::hartree_fock(ham.n_alpha(), ham.n_beta()));
            let dim = sector_configurations(&ham).map(|c| c.len()).ok();
            let summary = json!({
                "norb": ham.norb(),
                "n_alpha": ham.n_alpha(),
                "n_beta": ham.n_beta(),
                "core_energy": ham.core_energy(),
                "hf_energy": hf,
                "sector_dimension": dim,
            });
            emit(out, &pretty(&summary))
        }
        Command::Ansatz(a) => {
            let ham = read_fcidump(&a.fcidump).with_context(|| format!("reading {}", a.fcidump.display()))?;
            let amps = match &a.amplitudes {
                Some(p) => AmplitudeData::read(p).with_context(|| format!("reading {}", p.display()))?,
                None => AmplitudeData::mp2(&ham),
            };
            let cfg = AnsatzConfig {
                n_det: a.n_det,
                layers: a.layers,
                sparsity: a.sparsity,
                include_hf: !a.no_hf,
                optimize_iters: a.optimize_iters,
                seed: cli.seed.unwrap_or(0),
                ..AnsatzConfig::default()
            };
            let build = build_ef_state(&ham, &amps, &cfg)?;
            eprintln!(
                "NOCI energy {:.10}  determinants {}  dropped {}  optimizer converged {}",
                build.noci_energy,
                build.state.n_det(),
                build.noci_dropped,
                build.optimizer_converged
            );
            emit(out, &(build.state.to_json()? + "\n"))
        }
        Command::Sample(s) => {
            let state = EFState::read(&s.state).with_context(|| format!("reading {}", s.state.display()))?;
            let weights = branch_weights(&state)?;
            let opts = SamplingOptions { shots: s.shots, seed: cli.seed.unwrap_or(0), mode: s.mode.into(), noise: s.noise };
            let counts = run_ef_sampling(&state, &weights, &opts)?;
            eprintln!(
                "{} shots, {} distinct, postselection fraction {:.4}",
                counts.total(),
                counts.counts.len(),
                postselection_fraction(&counts, state.n_alpha, state.n_beta)
            );
            emit(out, &counts.to_text())
        }
        Command::Sqd(s) => {
            let ham = read_fcidump(&s.fcidump).with_context(|| format!("reading {}", s.fcidump.display()))?;
            let samples = SampleCounts::read(&s.counts).with_context(|| format!("reading {}", s.counts.display()))?;
            let cfg = RecoveryConfig {
                batches: s.batches,
                samples_per_batch: s.samples_per_batch,
                max_recovery_iterations: s.iterations,
                penalty: s.penalty,
                cartesian: s.cartesian,
                davidson_max_iter: s.davidson_max_iter,
                seed: cli.seed.unwrap_or(0),
                ..RecoveryConfig::default()
            };
            let result = run_sqd(&ham, &samples, &cfg)?;
            if let Some(p) = &s.csv {
                std::fs::write(p, trace_csv(&trace_rows("sqd", &result, None))?)?;
            }
            eprintln!("SQD energy {:.10} (converged {})", result.energy, result.converged);
            emit(out, &(result.to_json()? + "\n"))
        }
        Command::Resources(r) => {
            let kinds: Vec<CircuitKind> = r.kind.map_or(CircuitKind::ALL.to_vec(), |k| vec![k]);
            let rows: Vec<_> =
                kinds.into_iter().map(|k| estimate_resources(k, r.norb, r.n_alpha, r.n_beta, r.layers)).collect();
            emit(out, &(serde_json::to_string_pretty(&rows)? + "\n"))
        }
        Command::Experiment(e) => {
            let mut cfg = ExperimentConfig::read(&e.config).with_context(|| format!("reading {}", e.config.display()))?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let dir = out.map(Path::to_path_buf).or_else(|| cfg.output_dir.clone());
            let report = run_experiment(&cfg)?;
            match dir {
                Some(dir) => {
                    let formats: &[ReportFormat] = match e.format {
                        OutFormat::Json => &[ReportFormat::Json],
                        OutFormat::Csv => &[ReportFormat::Csv],
                        OutFormat::Both => &[ReportFormat::Json, ReportFormat::Csv],
                    };
                    for &f in formats {
                        let path = emit_report(&report, f, &dir)?;
                        eprintln!("wrote {}", path.display());
                    }
                }
                None => emit(None, &(report.to_json()? + "\n"))?,
            }
            for (name, d) in [("activation", report.activation_energy), ("reaction", report.reaction_energy)] {
                if let Some(d) = d {
                    eprintln!(
                        "{name}: SQD {} kcal/mol, FCI {} kcal/mol",
                        fmt_opt(d.sqd_kcal_per_mol),
                        fmt_opt(d.fci_kcal_per_mol)
                    );
                }
            }
            if let Some((g, f)) = report.geometries.iter().find_map(|g| g.error.as_ref().map(|f| (g, f))) {
                let msg = format!("geometry '{}': {}", g.label, f.message);
                let err = if f.convergence { efsqd::Error::Convergence(msg) } else { efsqd::Error::Invalid(msg) };
                return Err(err.into());
            }
            Ok(())
        }
        Command::Oracle(o) => {
            let ham = read_fcidump(&o.fcidump).with_context(|| format!("reading {}", o.fcidump.display()))?;
            let fci = fci_ground_state(&ham)?;
            let mut v = json!({
                "fci_energy": fci.energy,
                "sector_dimension": fci.configurations.len(),
                "hartree_to_kcal_per_mol": HARTREE_TO_KCAL_PER_MOL,
            });
            if let Some(p) = &o.state {
                let state = EFState::read(p).with_context(|| format!("reading {}", p.display()))?;
                v["direct_ef_energy"] = json!(direct_ef_expectation(&state, &ham)?);
                v["branch_ef_energy"] = json!(ef_energy(&state, &ham)?);
            }
            emit(out, &pretty(&v))
        }
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("n/a".to_owned(), |x| format!("{x:.4}"))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<efsqd::Error>() {
        Some(e) if !e.is_input_error() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
