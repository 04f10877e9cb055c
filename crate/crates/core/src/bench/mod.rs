//! Resource formulas, exact oracles and the experiment driver.

mod experiment;
mod oracle;
mod report;
mod resources;

pub use experiment::{
    run_experiment, run_geometry, AnsatzSummary, EnergyDifference, ExperimentConfig, ExperimentReport, GeometryInput,
    GeometryReport, GeometryRun, SamplingSummary, StageFailure,
};
pub use oracle::{direct_ef_expectation, fci_ground_state, FciSolution, FCI_LIMIT};
pub use report::{emit_report, experiment_trace_rows, trace_csv, trace_rows, ReportFormat, TraceRow, TRACE_HEADER};
pub use resources::{estimate_resources, CircuitKind, RawCounts, ResourceEstimate};
