//! Versioned JSON records of selection runs.
//!
//! Field names are stable within a `format_version`. Everything except the
//! `timing` object is a deterministic function of the inputs and settings,
//! so two runs with the same configuration produce byte-identical output
//! once timing is cleared (see [`SelectionManifest::stable_json`]).
//!
//! Single-domain manifest (`kind = "single"`):
//!
//! | field            | meaning                                              |
//! |------------------|------------------------------------------------------|
//! | `dataset`        | dataset name                                         |
//! | `tokenizer_hash` | hash of the tokenizer config used to build the data  |
//! | `n`, `vocab_size`| dataset size and full vocabulary size                |
//! | `k`              | requested budget                                     |
//! | `method`         | `zipcal` or `random`                                 |
//! | `engine`, `pool` | greedy gain engine and optional candidate pool       |
//! | `seed`           | random seed, when one was used                       |
//! | `indices`        | selected sample ids in pick order                    |
//! | `gains`          | marginal vocabulary gain of each pick                |
//! | `coverage`       | cumulative covered fraction after each pick          |
//! | `evaluations`    | candidate gain evaluations in the selection loop     |
//! | `texts`          | optional raw texts of the selected samples           |
//! | `timing`         | `wall_time_secs` of the selection loop               |
//!
//! The multi-domain manifest (`kind = "multi"`) carries one `domains` entry
//! per input dataset with that domain's pool trace, plus the final
//! `selected` list of `{domain, id}` pairs and the k-centers `radii`.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::select::{
    CandidatePool, DomainSample, GainEngine, Method, MultiConfig, MultiSelectionResult,
    SelectionResult,
};

pub const MANIFEST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionManifest {
    pub format_version: u32,
    pub kind: String,
    pub dataset: String,
    pub tokenizer_hash: String,
    pub n: usize,
    pub vocab_size: usize,
    pub k: usize,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<GainEngine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool: Option<CandidatePool>,
    pub seed: Option<u64>,
    pub indices: Vec<usize>,
    pub gains: Vec<usize>,
    pub coverage: Vec<f64>,
    pub evaluations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub texts: Option<Vec<String>>,
    pub timing: Timing,
}

impl SelectionManifest {
    pub fn new(
        dataset: &Dataset,
        result: &SelectionResult,
        engine: Option<GainEngine>,
        pool: Option<CandidatePool>,
    ) -> Self {
        SelectionManifest {
            format_version: MANIFEST_FORMAT_VERSION,
            kind: "single".into(),
            dataset: dataset.name.clone(),
            tokenizer_hash: dataset.tokenizer_hash.clone(),
            n: dataset.len(),
            vocab_size: dataset.full_vocab.len(),
            k: result.k,
            method: result.method,
            engine: (result.method == Method::Zipcal).then_some(engine).flatten(),
            pool: (result.method == Method::Zipcal).then_some(pool).flatten(),
            seed: result.seed,
            indices: result.indices.clone(),
            gains: result.gains.clone(),
            coverage: result.coverage.clone(),
            evaluations: result.evaluations,
            texts: None,
            timing: Timing {
                wall_time_secs: result.wall_time.as_secs_f64(),
            },
        }
    }

    /// Attach the selected raw texts, in pick order.
    pub fn with_texts(mut self, dataset: &Dataset) -> Self {
        self.texts = Some(
            self.indices
                .iter()
                .map(|&i| dataset.samples[i].text.clone())
                .collect(),
        );
        self
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// JSON with the timing object zeroed.
    pub fn stable_json(&self) -> String {
        let mut copy = self.clone();
        copy.timing = Timing::default();
        to_json(&copy)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let m: SelectionManifest = read_json(path)?;
        check_header(path, m.format_version, &m.kind, "single")?;
        Ok(m)
    }

    /// Fails unless `dataset` was built with the tokenizer this manifest records.
    pub fn verify_dataset(&self, dataset: &Dataset) -> Result<()> {
        verify_hash(&self.tokenizer_hash, dataset)?;
        if dataset.len() != self.n {
            return Err(Error::Integrity(format!(
                "manifest expects n={} samples, dataset {:?} has {}",
                self.n,
                dataset.name,
                dataset.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub dataset: String,
    pub n: usize,
    pub vocab_size: usize,
    pub indices: Vec<usize>,
    pub gains: Vec<usize>,
    pub coverage: Vec<f64>,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiManifest {
    pub format_version: u32,
    pub kind: String,
    pub tokenizer_hash: String,
    pub k: usize,
    pub seed: u64,
    pub dims: usize,
    pub pool_size: usize,
    pub engine: GainEngine,
    pub domains: Vec<DomainSection>,
    pub selected: Vec<DomainSample>,
    pub radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub texts: Option<Vec<String>>,
    pub timing: Timing,
}

impl MultiManifest {
    pub fn new(datasets: &[Dataset], config: &MultiConfig, result: &MultiSelectionResult) -> Self {
        let domains = datasets
            .iter()
            .zip(&result.pool_results)
            .map(|(ds, pool)| DomainSection {
                dataset: ds.name.clone(),
                n: ds.len(),
                vocab_size: ds.full_vocab.len(),
                indices: pool.result.indices.clone(),
                gains: pool.result.gains.clone(),
                coverage: pool.result.coverage.clone(),
                evaluations: pool.result.evaluations,
            })
            .collect();
        MultiManifest {
            format_version: MANIFEST_FORMAT_VERSION,
            kind: "multi".into(),
            tokenizer_hash: datasets
                .first()
                .map(|d| d.tokenizer_hash.clone())
                .unwrap_or_default(),
            k: config.k,
            seed: result.seed,
            dims: config.dims,
            pool_size: config.pool_size(),
            engine: config.zipcal.engine,
            domains,
            selected: result.final_indices.clone(),
            radii: result.radii.clone(),
            texts: None,
            timing: Timing {
                wall_time_secs: result.wall_time.as_secs_f64(),
            },
        }
    }

    pub fn with_texts(mut self, datasets: &[Dataset]) -> Self {
        self.texts = Some(
            self.selected
                .iter()
                .map(|s| {
                    let ds = datasets
                        .iter()
                        .find(|d| d.name == s.domain)
                        .expect("selected domain is one of the inputs");
                    ds.samples[s.id].text.clone()
                })
                .collect(),
        );
        self
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn stable_json(&self) -> String {
        let mut copy = self.clone();
        copy.timing = Timing::default();
        to_json(&copy)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let m: MultiManifest = read_json(path)?;
        check_header(path, m.format_version, &m.kind, "multi")?;
        Ok(m)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("manifest serializes");
    s.push('\n');
    s
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_owned(),
        line: e.line(),
        message: e.to_string(),
    })
}

fn check_header(path: &Path, version: u32, kind: &str, expected: &str) -> Result<()> {
    if version != MANIFEST_FORMAT_VERSION {
        return Err(Error::Integrity(format!(
            "{}: unsupported manifest format_version {version}",
            path.display()
        )));
    }
    if kind != expected {
        return Err(Error::Integrity(format!(
            "{}: expected a {expected:?} manifest, found {kind:?}",
            path.display()
        )));
    }
    Ok(())
}

pub fn verify_hash(expected: &str, dataset: &Dataset) -> Result<()> {
    if expected != dataset.tokenizer_hash {
        return Err(Error::Integrity(format!(
            "tokenizer hash mismatch for dataset {:?}: manifest {expected}, dataset {}",
            dataset.name, dataset.tokenizer_hash
        )));
    }
    Ok(())
}
