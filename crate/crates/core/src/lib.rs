//! Calibration-set curation by vocabulary coverage.
//!
//! * [`corpus`]: loading, tokenization, sanitization and interning.
//! * [`select`]: greedy maximal-marginal coverage, the random baseline, and
//!   multi-domain pool-then-k-centers selection.
//! * [`stats`]: rank–frequency tables, Zipf exponent fits, coverage reports.
//! * [`manifest`]: reproducible, versioned records of selection runs.
//! * [`synth`] and [`bench`]: synthetic Zipf corpora and scaling runs.

pub mod bench;
pub mod corpus;
pub mod error;
pub mod manifest;
pub mod select;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
