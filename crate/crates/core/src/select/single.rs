//! Greedy maximal-marginal vocabulary coverage and the uniform random baseline.

use std::time::{Duration, Instant};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{coverage_fraction, CoveredSet, GreedyKey};
use crate::corpus::{Dataset, Vocabulary};
use crate::error::{Error, Result};

/// Candidate scans shorter than this stay on the calling thread.
const PAR_MIN_LEN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Zipcal,
    Random,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Zipcal => "zipcal",
            Method::Random => "random",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zipcal" => Ok(Method::Zipcal),
            "random" => Ok(Method::Random),
            other => Err(Error::usage(format!(
                "unknown method {other:?} (expected zipcal or random)"
            ))),
        }
    }
}

/// How candidate gains are evaluated. Both engines pick identical samples
/// and perform the same number of candidate evaluations per iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GainEngine {
    /// Recompute `|V(s) \ covered|` for every candidate on every iteration.
    Scan,
    /// Keep per-sample gains current through a token → samples inverted
    /// index; an evaluation reads the maintained gain.
    #[default]
    Incremental,
}

impl std::str::FromStr for GainEngine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scan" => Ok(GainEngine::Scan),
            "incremental" => Ok(GainEngine::Incremental),
            other => Err(Error::usage(format!(
                "unknown engine {other:?} (expected scan or incremental)"
            ))),
        }
    }
}

/// Per-iteration candidate subsampling. With a pool the gain sequence is no
/// longer guaranteed to be non-increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePool {
    pub size: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZipcalOptions {
    pub engine: GainEngine,
    pub pool: Option<CandidatePool>,
}

/// Outcome of one selection run.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub method: Method,
    /// Requested budget; `indices.len()` is `min(k, n)`.
    pub k: usize,
    pub indices: Vec<usize>,
    /// Marginal gain of each pick, in pick order.
    pub gains: Vec<usize>,
    /// Cumulative covered fraction of the dataset vocabulary after each pick.
    pub coverage: Vec<f64>,
    pub covered_final: Vocabulary,
    pub seed: Option<u64>,
    /// Candidate gain evaluations performed by the selection loop.
    pub evaluations: u64,
    pub wall_time: Duration,
}

/// `|sample_vocab \ covered|`.
pub fn marginal_gain(sample_vocab: &Vocabulary, covered: &Vocabulary) -> usize {
    sample_vocab.difference_len(covered)
}

/// Closed-form candidate-evaluation count of a full-scan greedy run:
/// `Σ_{i=1..k} (n − i + 1) = kn − k(k+1)/2 + k`, with `k` clamped to `n`.
pub fn full_scan_evaluations(n: usize, k: usize) -> u64 {
    let (n, k) = (n as u64, k.min(n) as u64);
    k * n - k * (k + 1) / 2 + k
}

/// Greedy selection with default options (full scan, incremental engine).
pub fn select_zipcal(dataset: &Dataset, k: usize) -> Result<SelectionResult> {
    select_zipcal_with(dataset, k, &ZipcalOptions::default())
}

/// Greedy selection: each iteration picks the unselected sample with the
/// largest marginal gain; ties go to the larger vocabulary, then the lower
/// id. A budget above `n` selects every sample.
pub fn select_zipcal_with(
    dataset: &Dataset,
    k: usize,
    options: &ZipcalOptions,
) -> Result<SelectionResult> {
    if k < 1 {
        return Err(Error::usage("k must be at least 1"));
    }
    if dataset.is_empty() {
        return Err(Error::usage(format!("dataset {:?} is empty", dataset.name)));
    }
    if let Some(pool) = options.pool {
        if pool.size < 1 {
            return Err(Error::usage("candidate pool size must be at least 1"));
        }
    }

    let start = Instant::now();
    let mut state = GreedyState::new(dataset, options.engine);
    let n = dataset.len();
    let rounds = k.min(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut pool_rng = options.pool.map(|p| ChaCha8Rng::seed_from_u64(p.seed));

    let mut indices = Vec::with_capacity(rounds);
    let mut gains = Vec::with_capacity(rounds);
    let mut coverage = Vec::with_capacity(rounds);
    let mut evaluations = 0u64;
    let total = dataset.full_vocab.len();

    for _ in 0..rounds {
        let best = match (options.pool, pool_rng.as_mut()) {
            (Some(pool), Some(rng)) if pool.size < remaining.len() => {
                let picks = index::sample(rng, remaining.len(), pool.size);
                evaluations += pool.size as u64;
                picks
                    .iter()
                    .map(|p| state.key(remaining[p]))
                    .max()
                    .expect("pool is non-empty")
            }
            _ => {
                evaluations += remaining.len() as u64;
                state.argmax(&remaining)
            }
        };
        let pos = remaining
            .binary_search(&best.id)
            .expect("winner is an unselected sample");
        remaining.remove(pos);
        state.commit(best.id);
        indices.push(best.id);
        gains.push(best.gain);
        coverage.push(coverage_fraction(state.covered.len(), total));
    }

    Ok(SelectionResult {
        method: Method::Zipcal,
        k,
        indices,
        gains,
        coverage,
        covered_final: state.covered.to_vocabulary(),
        seed: options.pool.map(|p| p.seed),
        evaluations,
        wall_time: start.elapsed(),
    })
}

/// Uniform sampling of `k` distinct samples without replacement.
pub fn select_random(dataset: &Dataset, k: usize, seed: u64) -> Result<SelectionResult> {
    if k < 1 {
        return Err(Error::usage("k must be at least 1"));
    }
    if k > dataset.len() {
        return Err(Error::usage(format!(
            "random selection of k={k} exceeds dataset size n={}",
            dataset.len()
        )));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = index::sample(&mut rng, dataset.len(), k).into_vec();

    let mut covered = CoveredSet::new(dataset.interner.len());
    let total = dataset.full_vocab.len();
    let mut gains = Vec::with_capacity(k);
    let mut coverage = Vec::with_capacity(k);
    for &i in &indices {
        gains.push(covered.insert_all(&dataset.samples[i].vocab));
        coverage.push(coverage_fraction(covered.len(), total));
    }
    Ok(SelectionResult {
        method: Method::Random,
        k,
        indices,
        gains,
        coverage,
        covered_final: covered.to_vocabulary(),
        seed: Some(seed),
        evaluations: k as u64,
        wall_time: start.elapsed(),
    })
}

struct GreedyState<'a> {
    dataset: &'a Dataset,
    covered: CoveredSet,
    incremental: Option<Incremental>,
}

/// Maintained gains plus a CSR inverted index from token to samples.
struct Incremental {
    gains: Vec<u32>,
    offsets: Vec<usize>,
    postings: Vec<u32>,
}

impl Incremental {
    fn build(dataset: &Dataset) -> Self {
        let universe = dataset.interner.len();
        let mut offsets = vec![0usize; universe + 1];
        for s in &dataset.samples {
            for t in s.vocab.iter() {
                offsets[t.index() + 1] += 1;
            }
        }
        for i in 0..universe {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut postings = vec![0u32; offsets[universe]];
        for s in &dataset.samples {
            for t in s.vocab.iter() {
                postings[fill[t.index()]] = s.id as u32;
                fill[t.index()] += 1;
            }
        }
        let gains = dataset.samples.iter().map(|s| s.vocab.len() as u32).collect();
        Incremental {
            gains,
            offsets,
            postings,
        }
    }
}

impl<'a> GreedyState<'a> {
    fn new(dataset: &'a Dataset, engine: GainEngine) -> Self {
        let incremental = match engine {
            GainEngine::Scan => None,
            GainEngine::Incremental => Some(Incremental::build(dataset)),
        };
        GreedyState {
            dataset,
            covered: CoveredSet::new(dataset.interner.len()),
            incremental,
        }
    }

    fn key(&self, id: usize) -> GreedyKey {
        let vocab = &self.dataset.samples[id].vocab;
        let gain = match &self.incremental {
            Some(inc) => inc.gains[id] as usize,
            None => self.covered.gain(vocab),
        };
        GreedyKey {
            gain,
            vocab_len: vocab.len(),
            id,
        }
    }

    fn argmax(&self, candidates: &[usize]) -> GreedyKey {
        candidates
            .par_iter()
            .with_min_len(PAR_MIN_LEN)
            .map(|&id| self.key(id))
            .max()
            .expect("at least one candidate remains")
    }

    fn commit(&mut self, id: usize) {
        let vocab = &self.dataset.samples[id].vocab;
        match &mut self.incremental {
            None => {
                self.covered.insert_all(vocab);
            }
            Some(inc) => {
                for t in vocab.iter() {
                    if self.covered.insert(t) {
                        let (lo, hi) = (inc.offsets[t.index()], inc.offsets[t.index() + 1]);
                        for &s in &inc.postings[lo..hi] {
                            inc.gains[s as usize] -= 1;
                        }
                    }
                }
            }
        }
    }
}
