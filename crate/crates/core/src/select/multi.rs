//! Hierarchical selection over several domains: a greedy coverage pool per
//! domain, consolidated by greedy k-centers over hashed embeddings.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    embed_sample, kcenters_select, select_zipcal_with, SelectionResult, ZipcalOptions,
    DEFAULT_EMBEDDING_DIM,
};
use crate::corpus::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiConfig {
    /// Final budget.
    pub k: usize,
    /// Seed for the first k-centers pick.
    pub seed: u64,
    pub dims: usize,
    /// Per-domain pool budget; defaults to `k`.
    pub pool_size: Option<usize>,
    pub zipcal: ZipcalOptions,
}

impl MultiConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        MultiConfig {
            k,
            seed,
            dims: DEFAULT_EMBEDDING_DIM,
            pool_size: None,
            zipcal: ZipcalOptions::default(),
        }
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size.unwrap_or(self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DomainSample {
    pub domain: String,
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainPool {
    pub domain: String,
    pub result: SelectionResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSelectionResult {
    pub final_indices: Vec<DomainSample>,
    pub pool_results: Vec<DomainPool>,
    /// Distance of each k-centers pick (after the first) to the earlier picks.
    pub radii: Vec<f64>,
    pub seed: u64,
    pub wall_time: Duration,
}

impl MultiSelectionResult {
    /// Total stage-one candidate evaluations across domains.
    pub fn pool_evaluations(&self) -> u64 {
        self.pool_results.iter().map(|p| p.result.evaluations).sum()
    }
}

pub fn select_multidomain(datasets: &[Dataset], config: &MultiConfig) -> Result<MultiSelectionResult> {
    if datasets.is_empty() {
        return Err(Error::usage("multi-domain selection needs at least one dataset"));
    }
    if config.k < 1 {
        return Err(Error::usage("k must be at least 1"));
    }
    let start = Instant::now();
    let pool_size = config.pool_size();

    let pool_results: Vec<DomainPool> = datasets
        .par_iter()
        .map(|ds| {
            select_zipcal_with(ds, pool_size, &config.zipcal)
                .map(|result| DomainPool {
                    domain: ds.name.clone(),
                    result,
                })
                .map_err(|e| match e {
                    Error::Usage(msg) => Error::Usage(format!("domain {:?}: {msg}", ds.name)),
                    other => other,
                })
        })
        .collect::<Result<_>>()?;

    let members: Vec<(usize, usize)> = pool_results
        .iter()
        .enumerate()
        .flat_map(|(d, p)| p.result.indices.iter().map(move |&id| (d, id)))
        .collect();
    let embeddings = members
        .par_iter()
        .map(|&(d, id)| embed_sample(&datasets[d].samples[id], &datasets[d].interner, config.dims))
        .collect::<Result<Vec<_>>>()?;

    let centers = kcenters_select(&embeddings, config.k, config.seed)?;
    let final_indices = centers
        .indices
        .iter()
        .map(|&p| {
            let (d, id) = members[p];
            DomainSample {
                domain: datasets[d].name.clone(),
                id,
            }
        })
        .collect();

    Ok(MultiSelectionResult {
        final_indices,
        pool_results,
        radii: centers.radii,
        seed: config.seed,
        wall_time: start.elapsed(),
    })
}
