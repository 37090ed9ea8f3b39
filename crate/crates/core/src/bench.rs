//! Wall-time and evaluation-count measurements across dataset sizes and budgets.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::select::{
    full_scan_evaluations, select_random, select_zipcal_with, GainEngine, Method, SelectionResult,
    ZipcalOptions,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<GainEngine>,
    /// Fastest of the repeated runs, selection loop only.
    pub wall_time_secs: f64,
    pub evaluation_count: u64,
    /// Closed-form count for full-scan greedy runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_evaluations: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub sizes: Vec<usize>,
    pub budgets: Vec<usize>,
    pub method: Method,
    pub options: ZipcalOptions,
    pub seed: u64,
    pub repeats: usize,
}

impl BenchPlan {
    pub fn zipcal(sizes: Vec<usize>, budgets: Vec<usize>) -> Self {
        BenchPlan {
            sizes,
            budgets,
            method: Method::Zipcal,
            options: ZipcalOptions::default(),
            seed: 0,
            repeats: 1,
        }
    }
}

/// Run every (n, k) pair of `plan` on prefixes of `corpus`.
pub fn run_bench(corpus: &Dataset, plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    if plan.repeats < 1 {
        return Err(Error::usage("repeats must be at least 1"));
    }
    let mut records = Vec::new();
    for &n in &plan.sizes {
        if n > corpus.len() {
            return Err(Error::usage(format!(
                "bench size n={n} exceeds corpus size {}",
                corpus.len()
            )));
        }
        let prefix = corpus.prefix(n);
        for &k in &plan.budgets {
            let mut best: Option<SelectionResult> = None;
            for _ in 0..plan.repeats {
                let run = match plan.method {
                    Method::Zipcal => select_zipcal_with(&prefix, k, &plan.options)?,
                    Method::Random => select_random(&prefix, k, plan.seed)?,
                };
                if best.as_ref().is_none_or(|b| run.wall_time < b.wall_time) {
                    best = Some(run);
                }
            }
            let best = best.expect("at least one repeat");
            let zipcal = plan.method == Method::Zipcal;
            records.push(BenchRecord {
                n,
                k,
                method: plan.method,
                engine: zipcal.then_some(plan.options.engine),
                wall_time_secs: best.wall_time.as_secs_f64(),
                evaluation_count: best.evaluations,
                expected_evaluations: (zipcal && plan.options.pool.is_none())
                    .then(|| full_scan_evaluations(n, k)),
            });
        }
    }
    Ok(records)
}

/// `wall_time(2n) / wall_time(n)` for every doubling present at budget `k`.
pub fn doubling_ratios(records: &[BenchRecord], k: usize) -> Vec<(usize, f64)> {
    let at_k: Vec<&BenchRecord> = records.iter().filter(|r| r.k == k).collect();
    at_k.iter()
        .filter_map(|small| {
            at_k.iter()
                .find(|big| big.n == 2 * small.n)
                .map(|big| (small.n, big.wall_time_secs / small.wall_time_secs))
        })
        .collect()
}

pub fn write_bench_table<W: Write>(mut out: W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(out, "n,k,method,engine,wall_time_secs,evaluation_count,expected_evaluations")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{:.6},{},{}",
            r.n,
            r.k,
            r.method.as_str(),
            match r.engine {
                Some(GainEngine::Scan) => "scan",
                Some(GainEngine::Incremental) => "incremental",
                None => "",
            },
            r.wall_time_secs,
            r.evaluation_count,
            r.expected_evaluations.map(|e| e.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::ZipfCorpus;

    #[test]
    fn counts_follow_closed_form() {
        let corpus = ZipfCorpus::new(1.1, 500, 16, 0).generate(400).unwrap();
        let records = run_bench(&corpus, &BenchPlan::zipcal(vec![100, 200, 400], vec![8, 32])).unwrap();
        assert_eq!(records.len(), 6);
        for r in &records {
            assert_eq!(Some(r.evaluation_count), r.expected_evaluations);
        }
        let c = |n| records.iter().find(|r| r.n == n && r.k == 8).unwrap().evaluation_count;
        assert_eq!(c(400) - c(200), 2 * (c(200) - c(100)));
        assert_eq!(doubling_ratios(&records, 8).len(), 2);
    }

    #[test]
    fn oversized_plan_is_rejected() {
        let corpus = ZipfCorpus::new(1.1, 50, 4, 0).generate(10).unwrap();
        assert!(run_bench(&corpus, &BenchPlan::zipcal(vec![11], vec![2])).is_err());
    }
}
