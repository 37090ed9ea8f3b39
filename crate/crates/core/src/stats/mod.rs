//! Rank–frequency and vocabulary-coverage statistics.

mod coverage;
mod export;
mod fit;
mod frequency;

pub use coverage::{
    compare_methods, coverage_report, coverage_report_from_trace, recompute_coverage, ComparisonRow, Recomputed,
    CoverageReport,
};
pub use export::{write_coverage, write_rank_frequency, ExportHeader, EXPORT_FORMAT_VERSION};
pub use fit::{zipf_fit, ZipfFit, DEFAULT_FIT_RANKS, MIN_FIT_TYPES};
pub use frequency::{frequency_table, FrequencyTable};
