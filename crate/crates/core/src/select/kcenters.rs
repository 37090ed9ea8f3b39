use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::EmbeddingVector;
use crate::error::{Error, Result};

const PAR_MIN_LEN: usize = 1024;

/// Farthest-point picks in order, and the distance each pick had to the
/// centers chosen before it (one entry per pick after the first).
#[derive(Debug, Clone, PartialEq)]
pub struct KCenters {
    pub indices: Vec<usize>,
    pub radii: Vec<f64>,
}

pub fn euclidean(a: &EmbeddingVector, b: &EmbeddingVector) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Largest distance from any pool point to its nearest center.
pub fn covering_radius(pool: &[EmbeddingVector], centers: &[usize]) -> f64 {
    pool.iter()
        .map(|p| {
            centers
                .iter()
                .map(|&c| euclidean(p, &pool[c]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Greedy k-centers: a seeded uniform first center, then repeatedly the
/// unselected point farthest from its nearest center (lowest index on ties).
pub fn kcenters_select(pool: &[EmbeddingVector], k: usize, seed: u64) -> Result<KCenters> {
    if pool.is_empty() {
        return Err(Error::usage("k-centers pool is empty"));
    }
    if k < 1 {
        return Err(Error::usage("k must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.random_range(0..pool.len());

    let mut selected = vec![false; pool.len()];
    selected[first] = true;
    let mut nearest: Vec<f64> = pool.iter().map(|p| euclidean(p, &pool[first])).collect();
    let mut indices = vec![first];
    let mut radii = Vec::new();

    for _ in 1..k.min(pool.len()) {
        let (best, dist) = nearest
            .par_iter()
            .with_min_len(PAR_MIN_LEN)
            .enumerate()
            .filter(|(i, _)| !selected[*i])
            .map(|(i, &d)| (i, d))
            .max_by(|a, b| farther(*a, *b))
            .expect("an unselected point remains");
        selected[best] = true;
        indices.push(best);
        radii.push(dist);
        let center = &pool[best];
        nearest
            .par_iter_mut()
            .with_min_len(PAR_MIN_LEN)
            .zip(pool.par_iter())
            .for_each(|(d, p)| *d = d.min(euclidean(p, center)));
    }
    Ok(KCenters { indices, radii })
}

/// Orders by distance, then prefers the lower index.
fn farther(a: (usize, f64), b: (usize, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then(b.0.cmp(&a.0))
}
