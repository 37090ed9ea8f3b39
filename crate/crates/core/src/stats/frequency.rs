use std::collections::HashMap;

use crate::corpus::{Sample, TokenId};

/// Token occurrence counts with a deterministic rank order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyTable {
    pub counts: HashMap<TokenId, u64>,
    /// Ids by descending count; equal counts by ascending id.
    pub ranks: Vec<TokenId>,
    pub total: u64,
}

impl FrequencyTable {
    pub fn from_counts(mut counts: HashMap<TokenId, u64>) -> Self {
        counts.retain(|_, c| *c > 0);
        let mut ranks: Vec<TokenId> = counts.keys().copied().collect();
        ranks.sort_unstable_by(|a, b| counts[b].cmp(&counts[a]).then(a.cmp(b)));
        let total = counts.values().sum();
        FrequencyTable {
            counts,
            ranks,
            total,
        }
    }

    /// Counts in rank order.
    pub fn ranked_counts(&self) -> Vec<u64> {
        self.ranks.iter().map(|t| self.counts[t]).collect()
    }

    pub fn types(&self) -> usize {
        self.ranks.len()
    }
}

/// Multiset counts of sanitized tokens across the samples' truncated sequences.
pub fn frequency_table<'a, I>(samples: I) -> FrequencyTable
where
    I: IntoIterator<Item = &'a Sample>,
{
    let mut counts: HashMap<TokenId, u64> = HashMap::new();
    for s in samples {
        for &t in &s.tokens {
            *counts.entry(t).or_default() += 1;
        }
    }
    FrequencyTable::from_counts(counts)
}
