//! Seeded synthetic corpora with Zipf-distributed token ranks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use rayon::prelude::*;

use crate::corpus::{Dataset, Interner, Sample, TokenId, Tokenizer, TokenizerConfig};
use crate::error::{Error, Result};

/// Documents of `tokens_per_sample` i.i.d. tokens whose ranks follow
/// Zipf(`exponent`) over `types` types. Token of rank `r` is spelled `w{r}`.
///
/// Document `i` draws from its own ChaCha stream, so a corpus of `n`
/// documents is a prefix of every larger corpus with the same parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfCorpus {
    pub exponent: f64,
    pub types: usize,
    pub tokens_per_sample: usize,
    pub seed: u64,
}

impl ZipfCorpus {
    pub fn new(exponent: f64, types: usize, tokens_per_sample: usize, seed: u64) -> Self {
        ZipfCorpus {
            exponent,
            types,
            tokens_per_sample,
            seed,
        }
    }

    pub fn name(&self) -> String {
        format!(
            "zipf-s{}-v{}-l{}-seed{}",
            self.exponent, self.types, self.tokens_per_sample, self.seed
        )
    }

    /// Whitespace tokenizer under which the rendered texts reproduce the
    /// generated dataset exactly.
    pub fn tokenizer(&self) -> Result<Tokenizer> {
        Tokenizer::new(TokenizerConfig::whitespace().with_context_window(self.tokens_per_sample))
    }

    fn distribution(&self) -> Result<Zipf<f64>> {
        if self.types < 1 || self.tokens_per_sample < 1 {
            return Err(Error::usage("synthetic corpus needs types >= 1 and tokens_per_sample >= 1"));
        }
        if !(self.exponent > 0.0) {
            return Err(Error::usage("Zipf exponent must be positive"));
        }
        Zipf::new(self.types as f64, self.exponent)
            .map_err(|e| Error::usage(format!("invalid Zipf parameters: {e}")))
    }

    /// 1-based ranks of document `doc`.
    pub fn document_ranks(&self, doc: usize) -> Result<Vec<u32>> {
        let dist = self.distribution()?;
        Ok(self.ranks_with(&dist, doc))
    }

    fn ranks_with(&self, dist: &Zipf<f64>, doc: usize) -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(doc as u64);
        (0..self.tokens_per_sample)
            .map(|_| dist.sample(&mut rng) as u32)
            .collect()
    }

    /// Build `n` documents directly as interned samples (texts left empty).
    pub fn generate(&self, n: usize) -> Result<Dataset> {
        let dist = self.distribution()?;
        let tok = self.tokenizer()?;
        let docs: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|doc| self.ranks_with(&dist, doc))
            .collect();

        let mut interner = Interner::new();
        let mut rank_ids = vec![u32::MAX; self.types + 1];
        let samples = docs
            .into_iter()
            .enumerate()
            .map(|(id, ranks)| {
                let tokens: Vec<TokenId> = ranks
                    .iter()
                    .map(|&r| {
                        let slot = &mut rank_ids[r as usize];
                        if *slot == u32::MAX {
                            *slot = interner.intern(&format!("w{r}")).0;
                        }
                        TokenId(*slot)
                    })
                    .collect();
                Sample {
                    id,
                    text: String::new(),
                    raw_len: tokens.len(),
                    vocab: tokens.iter().copied().collect(),
                    tokens,
                }
            })
            .collect();
        Ok(Dataset::from_samples(
            self.name(),
            samples,
            interner,
            tok.config_hash().to_owned(),
        ))
    }

    /// Render `n` documents as whitespace-separated text lines.
    pub fn generate_texts(&self, n: usize) -> Result<Vec<String>> {
        let dist = self.distribution()?;
        Ok((0..n)
            .into_par_iter()
            .map(|doc| {
                self.ranks_with(&dist, doc)
                    .iter()
                    .map(|r| format!("w{r}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect())
    }
}
