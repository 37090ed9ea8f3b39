//! Calibration-set selectors: greedy vocabulary coverage for one domain and
//! pool-then-k-centers for several.

mod embed;
mod kcenters;
mod multi;
mod single;

use std::cmp::Ordering;

pub use embed::{embed_sample, EmbeddingVector, DEFAULT_EMBEDDING_DIM};
pub use kcenters::{covering_radius, euclidean, kcenters_select, KCenters};
pub use multi::{select_multidomain, DomainPool, DomainSample, MultiConfig, MultiSelectionResult};
pub use single::{
    full_scan_evaluations, marginal_gain, select_random, select_zipcal, select_zipcal_with,
    CandidatePool, GainEngine, Method, SelectionResult, ZipcalOptions,
};

use crate::corpus::{TokenId, Vocabulary};

/// `covered / total`; an empty reference vocabulary counts as fully covered.
pub fn coverage_fraction(covered: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        covered as f64 / total as f64
    }
}

/// Greedy ranking: larger gain, then larger vocabulary, then lower id.
///
/// A total order, so a parallel `max` reduction yields the same winner as a
/// sequential scan regardless of how candidates are split across workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct GreedyKey {
    pub gain: usize,
    pub vocab_len: usize,
    pub id: usize,
}

impl Ord for GreedyKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .cmp(&other.gain)
            .then(self.vocab_len.cmp(&other.vocab_len))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for GreedyKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bitset over one intern table's identifiers.
#[derive(Debug, Clone)]
pub(crate) struct CoveredSet {
    words: Vec<u64>,
    count: usize,
}

impl CoveredSet {
    pub fn new(universe: usize) -> Self {
        CoveredSet {
            words: vec![0; universe.div_ceil(64)],
            count: 0,
        }
    }

    #[inline]
    pub fn contains(&self, id: TokenId) -> bool {
        let i = id.index();
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns true if `id` was newly added.
    #[inline]
    pub fn insert(&mut self, id: TokenId) -> bool {
        let i = id.index();
        let bit = 1u64 << (i % 64);
        let word = &mut self.words[i / 64];
        if *word & bit == 0 {
            *word |= bit;
            self.count += 1;
            true
        } else {
            false
        }
    }

    /// Adds every id of `vocab`; returns how many were new.
    pub fn insert_all(&mut self, vocab: &Vocabulary) -> usize {
        vocab.iter().filter(|&t| self.insert(t)).count()
    }

    pub fn gain(&self, vocab: &Vocabulary) -> usize {
        vocab.iter().filter(|&t| !self.contains(t)).count()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn to_vocabulary(&self) -> Vocabulary {
        let ids = self
            .words
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| {
                (0..64)
                    .filter(move |b| bits >> b & 1 == 1)
                    .map(move |b| TokenId((w * 64 + b) as u32))
            })
            .collect();
        Vocabulary::from_sorted_unchecked(ids)
    }
}
