use serde::{Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::select::{coverage_fraction, CoveredSet, SelectionResult};

/// Vocabulary coverage of one selection against its source dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub dataset: String,
    pub method: String,
    /// Sample budget.
    pub k: usize,
    pub covered: usize,
    /// `covered / |full_vocab|` of the source dataset.
    pub fraction: f64,
    pub curve: Vec<f64>,
}

/// Per-pick gains and cumulative coverage, recomputed from the indices alone.
pub struct Recomputed {
    pub gains: Vec<usize>,
    pub curve: Vec<f64>,
    pub covered: usize,
    pub(crate) set: CoveredSet,
}

pub fn recompute_coverage(dataset: &Dataset, indices: &[usize]) -> Result<Recomputed> {
    let mut seen = vec![false; dataset.len()];
    let mut set = CoveredSet::new(dataset.interner.len());
    let total = dataset.full_vocab.len();
    let mut gains = Vec::with_capacity(indices.len());
    let mut curve = Vec::with_capacity(indices.len());
    for &i in indices {
        match seen.get_mut(i) {
            None => {
                return Err(Error::Integrity(format!(
                    "index {i} out of range for dataset {:?} (n={})",
                    dataset.name,
                    dataset.len()
                )))
            }
            Some(true) => return Err(Error::Integrity(format!("index {i} selected twice"))),
            Some(flag) => *flag = true,
        }
        gains.push(set.insert_all(&dataset.samples[i].vocab));
        curve.push(coverage_fraction(set.len(), total));
    }
    Ok(Recomputed {
        gains,
        curve,
        covered: set.len(),
        set,
    })
}

/// Report for a selection, after checking its stored trace against an
/// independent recomputation.
pub fn coverage_report(result: &SelectionResult, dataset: &Dataset) -> Result<CoverageReport> {
    let report = coverage_report_from_trace(
        dataset,
        result.method.as_str(),
        result.k,
        &result.indices,
        &result.gains,
        &result.coverage,
    )?;
    let recomputed = recompute_coverage(dataset, &result.indices)?;
    if recomputed.set.to_vocabulary() != result.covered_final {
        return Err(Error::Integrity("covered vocabulary differs from recomputation".into()));
    }
    Ok(report)
}

/// As [`coverage_report`], for a trace read back from a manifest.
pub fn coverage_report_from_trace(
    dataset: &Dataset,
    method: &str,
    k: usize,
    indices: &[usize],
    gains: &[usize],
    curve: &[f64],
) -> Result<CoverageReport> {
    let recomputed = recompute_coverage(dataset, indices)?;
    if recomputed.gains != gains {
        return Err(Error::Integrity(format!(
            "stored gains of {method} selection differ from recomputation"
        )));
    }
    if recomputed.curve != curve {
        return Err(Error::Integrity(format!(
            "stored coverage curve of {method} selection differs from recomputation"
        )));
    }
    let fraction = if indices.is_empty() {
        0.0
    } else {
        coverage_fraction(recomputed.covered, dataset.full_vocab.len())
    };
    Ok(CoverageReport {
        dataset: dataset.name.clone(),
        method: method.to_owned(),
        k,
        covered: recomputed.covered,
        fraction,
        curve: recomputed.curve,
    })
}

/// One aggregated row per method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: String,
    pub k: usize,
    pub runs: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Position in the input of the first report for this method.
    pub curve_ref: usize,
}

/// Aggregate reports by method, best mean fraction first (ties by name).
pub fn compare_methods(reports: &[CoverageReport]) -> Result<Vec<ComparisonRow>> {
    let Some(first) = reports.first() else {
        return Ok(Vec::new());
    };
    if let Some(other) = reports.iter().find(|r| r.dataset != first.dataset) {
        return Err(Error::usage(format!(
            "cannot compare reports from different datasets ({:?} vs {:?})",
            first.dataset, other.dataset
        )));
    }
    if let Some(other) = reports.iter().find(|r| r.k != first.k) {
        return Err(Error::usage(format!(
            "cannot compare reports with different budgets (k={} vs k={})",
            first.k, other.k
        )));
    }

    let mut rows: Vec<ComparisonRow> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    for (pos, r) in reports.iter().enumerate() {
        match rows.iter().position(|row| row.method == r.method) {
            Some(i) => {
                let row = &mut rows[i];
                row.runs += 1;
                row.min = row.min.min(r.fraction);
                row.max = row.max.max(r.fraction);
                sums[i] += r.fraction;
            }
            None => {
                rows.push(ComparisonRow {
                    method: r.method.clone(),
                    k: r.k,
                    runs: 1,
                    mean: 0.0,
                    min: r.fraction,
                    max: r.fraction,
                    curve_ref: pos,
                });
                sums.push(r.fraction);
            }
        }
    }
    for (row, sum) in rows.iter_mut().zip(sums) {
        row.mean = sum / row.runs as f64;
    }
    rows.sort_by(|a, b| b.mean.total_cmp(&a.mean).then_with(|| a.method.cmp(&b.method)));
    Ok(rows)
}
