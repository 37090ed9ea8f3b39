#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zipcal_core::corpus::{Dataset, Tokenizer, TokenizerConfig};
use zipcal_core::select::EmbeddingVector;

pub fn whitespace() -> Tokenizer {
    Tokenizer::new(TokenizerConfig::whitespace()).unwrap()
}

/// One document per token list, tokens joined by spaces.
pub fn dataset_of(name: &str, docs: &[Vec<String>]) -> Dataset {
    let texts = docs.iter().map(|d| d.join(" ")).collect();
    Dataset::from_texts(name, texts, &whitespace())
}

/// Sanitized token strings of every sample, as plain sets.
pub fn string_sets(ds: &Dataset) -> Vec<BTreeSet<String>> {
    ds.samples
        .iter()
        .map(|s| s.vocab.iter().map(|t| ds.interner.resolve(t).to_owned()).collect())
        .collect()
}

/// Small random instance: `n` documents over a Zipf-like draw from
/// `universe` types, each of 0..=max_len tokens.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, universe: usize, max_len: usize) -> Vec<Vec<String>> {
    (0..n)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            (0..len)
                .map(|_| {
                    // inverse-rank weighting
                    let u: f64 = rng.random();
                    let r = ((universe as f64).powf(u)).floor() as usize;
                    format!("t{}", r.min(universe - 1))
                })
                .collect()
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive maximum coverage over all size-`k` subsets.
pub fn optimal_coverage(sets: &[BTreeSet<String>], k: usize) -> usize {
    subsets(sets.len(), k.min(sets.len()))
        .iter()
        .map(|s| s.iter().flat_map(|&i| sets[i].iter()).collect::<HashSet<_>>().len())
        .max()
        .unwrap_or(0)
}

/// Greedy picks recomputed step by step from plain string sets, with the
/// gain → |vocab| → lower id preference.
pub fn brute_force_greedy(sets: &[BTreeSet<String>], k: usize) -> Vec<(usize, usize)> {
    let mut covered: HashSet<&String> = HashSet::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for _ in 0..k.min(sets.len()) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, s) in sets.iter().enumerate() {
            if chosen.iter().any(|c| c.0 == i) {
                continue;
            }
            let gain = s.iter().filter(|t| !covered.contains(t)).count();
            let better = match best {
                None => true,
                Some((bg, bl, _)) => gain > bg || (gain == bg && s.len() > bl),
            };
            if better {
                best = Some((gain, s.len(), i));
            }
        }
        let (gain, _, i) = best.unwrap();
        covered.extend(sets[i].iter());
        chosen.push((i, gain));
    }
    chosen
}

pub fn dist(a: &EmbeddingVector, b: &EmbeddingVector) -> f64 {
    let mut s = 0.0;
    for i in 0..a.values.len() {
        let d = a.values[i] - b.values[i];
        s += d * d;
    }
    s.sqrt()
}

/// Optimal k-centers radius by enumerating every center subset.
pub fn optimal_radius(pool: &[EmbeddingVector], k: usize) -> f64 {
    subsets(pool.len(), k.min(pool.len()))
        .iter()
        .map(|centers| {
            pool.iter()
                .map(|p| centers.iter().map(|&c| dist(p, &pool[c])).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dims: usize) -> Vec<EmbeddingVector> {
    (0..n)
        .map(|_| EmbeddingVector {
            values: (0..dims).map(|_| rng.random_range(-1.0..1.0)).collect(),
        })
        .collect()
}

/// Two same-sized domains over disjoint alphabets, mirror images of each other.
pub fn disjoint_domains(n: usize) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let domain = |prefix: &str| -> Vec<Vec<String>> {
        (0..n)
            .map(|j| {
                (0..6)
                    .map(|o| format!("{prefix}{}", (j * 3 + o) % (n + 5)))
                    .chain(std::iter::once(format!("{prefix}common")))
                    .collect()
            })
            .collect()
    };
    (domain("a"), domain("b"))
}
