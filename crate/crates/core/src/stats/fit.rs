use super::FrequencyTable;
use crate::error::{Error, Result};

pub const DEFAULT_FIT_RANKS: usize = 10_000;
pub const MIN_FIT_TYPES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfFit {
    /// Negated least-squares slope of log(count) on log(rank).
    pub exponent: f64,
    /// Inclusive rank range used by the fit.
    pub fit_range: (usize, usize),
    pub r_squared: f64,
}

/// Ordinary least squares on the log–log rank–frequency curve over ranks
/// `1..=min(types, max_rank)`.
pub fn zipf_fit(table: &FrequencyTable, max_rank: usize) -> Result<ZipfFit> {
    if table.types() < MIN_FIT_TYPES {
        return Err(Error::Diagnostic(format!(
            "Zipf fit needs at least {MIN_FIT_TYPES} distinct tokens, found {}",
            table.types()
        )));
    }
    if max_rank < 2 {
        return Err(Error::usage("Zipf fit range must cover at least two ranks"));
    }
    let r_max = table.types().min(max_rank);
    let points: Vec<(f64, f64)> = table
        .ranks
        .iter()
        .take(r_max)
        .enumerate()
        .map(|(i, t)| (((i + 1) as f64).ln(), (table.counts[t] as f64).ln()))
        .collect();

    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ZipfFit {
        exponent: -slope,
        fit_range: (1, r_max),
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::corpus::TokenId;

    fn table(counts: impl IntoIterator<Item = u64>) -> FrequencyTable {
        FrequencyTable::from_counts(
            counts
                .into_iter()
                .enumerate()
                .map(|(i, c)| (TokenId(i as u32), c))
                .collect::<HashMap<_, _>>(),
        )
    }

    #[test]
    fn flat_counts_have_zero_exponent() {
        let fit = zipf_fit(&table(std::iter::repeat(50).take(200)), DEFAULT_FIT_RANKS).unwrap();
        assert!(fit.exponent.abs() < 0.01);
    }

    #[test]
    fn too_few_types() {
        let err = zipf_fit(&table([5, 4, 3]), DEFAULT_FIT_RANKS).unwrap_err();
        assert!(matches!(err, Error::Diagnostic(_)));
    }

    #[test]
    fn fit_range_is_capped() {
        let counts = (1..=500u64).map(|r| 1_000_000 / (r * r));
        let fit = zipf_fit(&table(counts), 100).unwrap();
        assert_eq!(fit.fit_range, (1, 100));
        assert!((fit.exponent - 2.0).abs() < 0.02);
    }
}
