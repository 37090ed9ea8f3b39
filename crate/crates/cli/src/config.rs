//! Run configuration: config file values override command-line flags, which
//! override built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use zipcal_core::corpus::{DatasetFormat, Tokenizer, TokenizerConfig};
use zipcal_core::select::{CandidatePool, GainEngine, Method, ZipcalOptions, DEFAULT_EMBEDDING_DIM};
use zipcal_core::{Error, Result};

pub const DEFAULT_K: usize = 128;

/// Every setting a command may read. Unset fields fall through to the next
/// layer of precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSettings {
    pub datasets: Option<Vec<PathBuf>>,
    pub format: Option<String>,
    pub text_field: Option<String>,
    pub tokenizer: Option<PathBuf>,
    pub k: Option<usize>,
    pub w: Option<usize>,
    pub seed: Option<u64>,
    pub method: Option<String>,
    pub engine: Option<String>,
    /// Per-domain pool budget for multi-domain selection.
    pub pool_size: Option<usize>,
    /// Per-iteration candidate subsampling for single-domain greedy.
    pub candidate_pool: Option<usize>,
    pub dim: Option<usize>,
    pub out: Option<PathBuf>,
    pub emit_texts: Option<bool>,
}

impl RunSettings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut s: RunSettings =
            toml::from_str(&text).map_err(|e| Error::usage(format!("{}: {e}", path.display())))?;
        // paths in the file are relative to the file
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        s.datasets = s.datasets.map(|v| v.into_iter().map(rebase).collect());
        s.tokenizer = s.tokenizer.map(rebase);
        s.out = s.out.map(rebase);
        Ok(s)
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: RunSettings) -> RunSettings {
        RunSettings {
            datasets: self.datasets.or(lower.datasets),
            format: self.format.or(lower.format),
            text_field: self.text_field.or(lower.text_field),
            tokenizer: self.tokenizer.or(lower.tokenizer),
            k: self.k.or(lower.k),
            w: self.w.or(lower.w),
            seed: self.seed.or(lower.seed),
            method: self.method.or(lower.method),
            engine: self.engine.or(lower.engine),
            pool_size: self.pool_size.or(lower.pool_size),
            candidate_pool: self.candidate_pool.or(lower.candidate_pool),
            dim: self.dim.or(lower.dim),
            out: self.out.or(lower.out),
            emit_texts: self.emit_texts.or(lower.emit_texts),
        }
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub datasets: Vec<PathBuf>,
    pub format: DatasetFormat,
    pub tokenizer: Tokenizer,
    pub k: usize,
    pub seed: u64,
    pub method: Method,
    pub zipcal: ZipcalOptions,
    pub pool_size: Option<usize>,
    pub dim: usize,
    pub out: PathBuf,
    pub emit_texts: bool,
}

impl RunConfig {
    pub fn resolve(config_file: Option<&Path>, flags: RunSettings) -> Result<RunConfig> {
        let settings = match config_file {
            Some(path) => RunSettings::from_file(path)?.over(flags),
            None => flags,
        };

        let k = settings.k.unwrap_or(DEFAULT_K);
        if k < 1 {
            return Err(Error::usage("k: must be at least 1"));
        }
        let mut tok_config = match &settings.tokenizer {
            Some(path) => TokenizerConfig::from_file(path)?,
            None => TokenizerConfig::default(),
        };
        if let Some(w) = settings.w {
            if w < 1 {
                return Err(Error::usage("w: must be at least 1"));
            }
            tok_config.context_window = w;
        }
        let tokenizer = Tokenizer::new(tok_config)?;

        let seed = settings.seed.unwrap_or(0);
        let method: Method = settings.method.as_deref().unwrap_or("zipcal").parse()?;
        let engine: GainEngine = settings.engine.as_deref().unwrap_or("incremental").parse()?;
        let pool = match settings.candidate_pool {
            Some(0) => return Err(Error::usage("candidate_pool: must be at least 1")),
            Some(size) => Some(CandidatePool { size, seed }),
            None => None,
        };
        if settings.pool_size == Some(0) {
            return Err(Error::usage("pool_size: must be at least 1"));
        }
        let dim = settings.dim.unwrap_or(DEFAULT_EMBEDDING_DIM);
        if dim < 2 {
            return Err(Error::usage("dim: must be at least 2"));
        }
        let format = DatasetFormat::parse(
            settings.format.as_deref().unwrap_or("plain-lines"),
            settings.text_field.as_deref().unwrap_or("text"),
        )?;
        let out = settings.out.unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;

        Ok(RunConfig {
            datasets: settings.datasets.unwrap_or_default(),
            format,
            tokenizer,
            k,
            seed,
            method,
            zipcal: ZipcalOptions { engine, pool },
            pool_size: settings.pool_size,
            dim,
            out,
            emit_texts: settings.emit_texts.unwrap_or(false),
        })
    }
}
