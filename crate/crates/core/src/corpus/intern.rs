use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Identifier of a sanitized token within one run's intern table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenId(pub u32);

impl TokenId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bijective map between sanitized token strings and dense identifiers.
///
/// Identifiers are assigned in insertion order, so feeding tokens in a fixed
/// order (document index, then position) yields the same table on every run.
#[derive(Debug, Clone, Default)]
pub struct Interner {
    ids: HashMap<String, TokenId>,
    strings: Vec<String>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, token: &str) -> TokenId {
        if let Some(&id) = self.ids.get(token) {
            return id;
        }
        let id = TokenId(u32::try_from(self.strings.len()).expect("intern table overflow"));
        self.strings.push(token.to_owned());
        self.ids.insert(token.to_owned(), id);
        id
    }

    pub fn get(&self, token: &str) -> Option<TokenId> {
        self.ids.get(token).copied()
    }

    pub fn resolve(&self, id: TokenId) -> &str {
        &self.strings[id.index()]
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TokenId, &str)> {
        self.strings
            .iter()
            .enumerate()
            .map(|(i, s)| (TokenId(i as u32), s.as_str()))
    }
}
