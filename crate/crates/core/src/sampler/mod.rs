//! Sampling configurations from forged wavefunctions.

mod counts;
mod ef;

pub use counts::{postselection_fraction, SampleCounts, SampleMetadata};
pub use ef::{
    allocate_shots, branch_label, inject_bit_flips, run_ef_sampling, sample_distribution, SamplingMode, SamplingOptions,
};
