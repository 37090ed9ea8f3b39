use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::{Interner, TokenId, Tokenizer, Vocabulary};
use crate::error::{Error, Result};

/// Input file layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetFormat {
    /// One UTF-8 document per line.
    PlainLines,
    /// One JSON object per line; the document is the string at `text_field`.
    JsonLines { text_field: String },
}

impl DatasetFormat {
    pub fn parse(name: &str, text_field: &str) -> Result<Self> {
        match name {
            "plain" | "plain-lines" | "lines" => Ok(DatasetFormat::PlainLines),
            "jsonl" | "json-lines" | "records" => Ok(DatasetFormat::JsonLines {
                text_field: text_field.to_owned(),
            }),
            other => Err(Error::usage(format!(
                "unknown dataset format {other:?} (expected plain-lines or jsonl)"
            ))),
        }
    }
}

/// One document of a dataset.
#[derive(Debug, Clone)]
pub struct Sample {
    /// Zero-based position in the dataset.
    pub id: usize,
    pub text: String,
    /// Sanitized token ids in document order, after truncation to the
    /// context window. Dropped tokens (special or empty after sanitizing)
    /// are omitted.
    pub tokens: Vec<TokenId>,
    /// Number of raw tokens kept by truncation, before sanitization drops.
    pub raw_len: usize,
    pub vocab: Vocabulary,
}

impl Sample {
    pub fn dropped(&self) -> usize {
        self.raw_len - self.tokens.len()
    }
}

/// An immutable collection of samples sharing one intern table.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub samples: Vec<Sample>,
    pub full_vocab: Vocabulary,
    pub interner: Interner,
    /// Hash of the tokenizer configuration the samples were built with.
    pub tokenizer_hash: String,
}

impl Dataset {
    /// Tokenize documents in parallel, then intern sequentially in document
    /// order so identifiers do not depend on worker scheduling.
    pub fn from_texts(name: impl Into<String>, texts: Vec<String>, tok: &Tokenizer) -> Dataset {
        let sanitized: Vec<(usize, Vec<String>)> = texts
            .par_iter()
            .map(|text| {
                let raw = tok.tokenize(text);
                let kept = raw.iter().filter_map(|t| tok.sanitize(t)).collect();
                (raw.len(), kept)
            })
            .collect();

        let mut interner = Interner::new();
        let samples = texts
            .into_iter()
            .zip(sanitized)
            .enumerate()
            .map(|(id, (text, (raw_len, kept)))| {
                let tokens: Vec<TokenId> = kept.iter().map(|t| interner.intern(t)).collect();
                let vocab = tokens.iter().copied().collect();
                Sample {
                    id,
                    text,
                    tokens,
                    raw_len,
                    vocab,
                }
            })
            .collect();
        Dataset::from_samples(name, samples, interner, tok.config_hash().to_owned())
    }

    /// Assemble a dataset from prebuilt samples; `full_vocab` is derived.
    pub fn from_samples(
        name: impl Into<String>,
        samples: Vec<Sample>,
        interner: Interner,
        tokenizer_hash: String,
    ) -> Dataset {
        let full_vocab = union_of(&samples, interner.len());
        Dataset {
            name: name.into(),
            samples,
            full_vocab,
            interner,
            tokenizer_hash,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Keep the first `n` samples; ids are unchanged, the vocabulary shrinks.
    pub fn prefix(&self, n: usize) -> Dataset {
        let samples: Vec<Sample> = self.samples.iter().take(n).cloned().collect();
        Dataset::from_samples(
            format!("{}[..{}]", self.name, samples.len()),
            samples,
            self.interner.clone(),
            self.tokenizer_hash.clone(),
        )
    }
}

fn union_of(samples: &[Sample], universe: usize) -> Vocabulary {
    let mut seen = vec![false; universe];
    for s in samples {
        for id in s.vocab.iter() {
            seen[id.index()] = true;
        }
    }
    let ids = seen
        .iter()
        .enumerate()
        .filter(|(_, &hit)| hit)
        .map(|(i, _)| TokenId(i as u32))
        .collect();
    Vocabulary::from_sorted_unchecked(ids)
}

/// Interned vocabulary of one token sequence.
pub fn build_vocab<S: AsRef<str>>(tokens: &[S], tok: &Tokenizer, intern: &mut Interner) -> Vocabulary {
    tokens
        .iter()
        .filter_map(|t| tok.sanitize(t.as_ref()))
        .map(|t| intern.intern(&t))
        .collect()
}

/// Read a dataset file. Zero-length lines are skipped; every other line
/// becomes a sample, even one whose tokens all sanitize away.
pub fn load_dataset(path: &Path, format: &DatasetFormat, tok: &Tokenizer) -> Result<Dataset> {
    let raw = fs::read(path).map_err(|e| Error::io(path, e))?;
    let content = String::from_utf8(raw).map_err(|e| {
        let line = 1 + e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        Error::Parse {
            path: path.to_owned(),
            line,
            message: "invalid UTF-8".into(),
        }
    })?;

    let mut texts = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let text = match format {
            DatasetFormat::PlainLines => line.to_owned(),
            DatasetFormat::JsonLines { text_field } => {
                record_text(line, text_field).map_err(|message| Error::Parse {
                    path: path.to_owned(),
                    line: lineno + 1,
                    message,
                })?
            }
        };
        texts.push(text);
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(Dataset::from_texts(name, texts, tok))
}

fn record_text(line: &str, field: &str) -> std::result::Result<String, String> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| format!("malformed record: {e}"))?;
    match value.get(field) {
        Some(serde_json::Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(format!("field {field:?} is not a string")),
        None => Err(format!("record has no field {field:?}")),
    }
}
