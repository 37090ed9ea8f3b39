use std::hash::Hasher;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use crate::corpus::{Interner, Sample};
use crate::error::{Error, Result};

pub const DEFAULT_EMBEDDING_DIM: usize = 256;

/// Fixed-dimension sample representation used for k-centers distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    pub values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn zeros(dims: usize) -> Self {
        EmbeddingVector {
            values: vec![0.0; dims],
        }
    }

    pub fn dims(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Signed feature hashing of the sample's sanitized term frequencies.
///
/// Each token string is hashed with 64-bit FNV-1a; the low bits (mod `dims`)
/// choose the bucket and the top bit the sign. The accumulated vector is
/// L2-normalized unless it is zero.
pub fn embed_sample(sample: &Sample, interner: &Interner, dims: usize) -> Result<EmbeddingVector> {
    if dims < 2 {
        return Err(Error::usage("embedding dimension must be at least 2"));
    }
    let mut out = EmbeddingVector::zeros(dims);
    for &t in &sample.tokens {
        let mut h = FnvHasher::default();
        h.write(interner.resolve(t).as_bytes());
        let h = h.finish();
        let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
        out.values[(h % dims as u64) as usize] += sign;
    }
    let norm = out.norm();
    if norm > 0.0 {
        out.values.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(out)
}
