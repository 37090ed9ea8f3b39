use std::io::{self, Write};

use super::FrequencyTable;

pub const EXPORT_FORMAT_VERSION: u32 = 1;

/// Provenance written as the single comment line heading every export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportHeader {
    pub dataset: String,
    pub method: String,
    pub k: usize,
    pub tokenizer_hash: String,
}

impl ExportHeader {
    fn line(&self, columns: &str) -> String {
        format!(
            "# format_version={} dataset={} method={} k={} tokenizer={} columns={}",
            EXPORT_FORMAT_VERSION,
            self.dataset.replace(char::is_whitespace, "_"),
            self.method,
            self.k,
            self.tokenizer_hash,
            columns
        )
    }
}

/// `rank,count` rows, rank starting at 1.
pub fn write_rank_frequency<W: Write>(
    mut out: W,
    header: &ExportHeader,
    table: &FrequencyTable,
) -> io::Result<()> {
    writeln!(out, "{}", header.line("rank,count"))?;
    for (i, t) in table.ranks.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, table.counts[t])?;
    }
    Ok(())
}

/// `step,fraction` rows, step starting at 1.
pub fn write_coverage<W: Write>(mut out: W, header: &ExportHeader, curve: &[f64]) -> io::Result<()> {
    writeln!(out, "{}", header.line("step,fraction"))?;
    for (i, f) in curve.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, f)?;
    }
    Ok(())
}
