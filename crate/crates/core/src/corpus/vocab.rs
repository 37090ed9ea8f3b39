use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::TokenId;

/// A set of interned token identifiers, stored sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vocabulary(Vec<TokenId>);

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sorted_unchecked(ids: Vec<TokenId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        Vocabulary(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: TokenId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = TokenId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[TokenId] {
        &self.0
    }

    /// `|self \ other|`, by a merge walk over both sorted lists.
    pub fn difference_len(&self, other: &Vocabulary) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut missing) = (0, 0, 0);
        while i < a.len() {
            if j == b.len() {
                missing += a.len() - i;
                break;
            }
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    missing += 1;
                    i += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                Ordering::Greater => j += 1,
            }
        }
        missing
    }

    pub fn union_with(&mut self, other: &Vocabulary) {
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    merged.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    merged.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    merged.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        self.0 = merged;
    }

    pub fn is_subset(&self, other: &Vocabulary) -> bool {
        self.difference_len(other) == 0
    }
}

impl FromIterator<TokenId> for Vocabulary {
    fn from_iter<I: IntoIterator<Item = TokenId>>(iter: I) -> Self {
        let mut ids: Vec<TokenId> = iter.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        Vocabulary(ids)
    }
}
