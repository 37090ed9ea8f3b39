use std::borrow::Cow;
use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_segmentation::UnicodeSegmentation;

use crate::error::{Error, Result};

/// How raw text is segmented into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenizerMode {
    /// Unicode word boundaries (UAX #29); punctuation and whitespace are dropped.
    #[default]
    UnicodeWord,
    Whitespace,
    /// Greedy longest-match segmentation against a vocabulary file, one entry
    /// per line. Word-internal pieces are looked up with a `##` prefix first.
    ExternalVocab,
}

/// Tokenization and sanitization settings.
///
/// Serialized as TOML; every field is optional in the file and falls back
/// to the defaults below:
///
/// | field             | default                                   |
/// |-------------------|-------------------------------------------|
/// | `mode`            | `"unicode-word"`                          |
/// | `lowercase`       | `true`                                    |
/// | `special_tokens`  | `["<bos>", "<eos>", "<pad>", "<unk>"]`    |
/// | `subword_markers` | `["##", "▁", "Ġ"]`                        |
/// | `context_window`  | `2048`                                    |
/// | `vocab_file`      | unset (required for `external-vocab`)     |
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TokenizerConfig {
    pub mode: TokenizerMode,
    pub lowercase: bool,
    pub special_tokens: BTreeSet<String>,
    pub subword_markers: BTreeSet<String>,
    pub context_window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vocab_file: Option<PathBuf>,
}

pub const DEFAULT_CONTEXT_WINDOW: usize = 2048;

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            mode: TokenizerMode::UnicodeWord,
            lowercase: true,
            special_tokens: ["<bos>", "<eos>", "<pad>", "<unk>"]
                .into_iter()
                .map(String::from)
                .collect(),
            subword_markers: ["##", "\u{2581}", "\u{0120}"]
                .into_iter()
                .map(String::from)
                .collect(),
            context_window: DEFAULT_CONTEXT_WINDOW,
            vocab_file: None,
        }
    }
}

impl TokenizerConfig {
    pub fn whitespace() -> Self {
        TokenizerConfig {
            mode: TokenizerMode::Whitespace,
            ..Default::default()
        }
    }

    pub fn with_context_window(mut self, w: usize) -> Self {
        self.context_window = w;
        self
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let config: TokenizerConfig =
            toml::from_str(s).map_err(|e| Error::usage(format!("tokenizer config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text)?;
        // Relative vocab paths are resolved against the config file location.
        if let (Some(vocab), Some(dir)) = (config.vocab_file.as_ref(), path.parent()) {
            if vocab.is_relative() {
                config.vocab_file = Some(dir.join(vocab));
            }
        }
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("tokenizer config is always representable as TOML")
    }

    pub fn validate(&self) -> Result<()> {
        if self.context_window == 0 {
            return Err(Error::usage("context_window must be at least 1"));
        }
        if self.special_tokens.iter().any(String::is_empty) {
            return Err(Error::usage("special_tokens must not contain the empty string"));
        }
        if self.subword_markers.iter().any(String::is_empty) {
            return Err(Error::usage("subword_markers must not contain the empty string"));
        }
        if self.mode == TokenizerMode::ExternalVocab && self.vocab_file.is_none() {
            return Err(Error::usage("external-vocab mode requires vocab_file"));
        }
        Ok(())
    }
}

/// A validated tokenizer, with the external vocabulary loaded when needed.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    config: TokenizerConfig,
    vocab: Option<PieceVocab>,
    hash: String,
}

#[derive(Debug, Clone)]
struct PieceVocab {
    pieces: HashSet<String>,
    max_chars: usize,
}

impl PieceVocab {
    fn from_lines(text: &str) -> Self {
        let pieces: HashSet<String> = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
        let max_chars = pieces.iter().map(|p| p.chars().count()).max().unwrap_or(0);
        PieceVocab { pieces, max_chars }
    }
}

impl Tokenizer {
    pub fn new(config: TokenizerConfig) -> Result<Self> {
        config.validate()?;
        let vocab_text = match (&config.mode, &config.vocab_file) {
            (TokenizerMode::ExternalVocab, Some(path)) => {
                Some(std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
            }
            _ => None,
        };
        Ok(Self::assemble(config, vocab_text.as_deref()))
    }

    /// External-vocab tokenizer over in-memory vocabulary lines.
    pub fn with_vocab_lines(mut config: TokenizerConfig, vocab_lines: &str) -> Result<Self> {
        config.mode = TokenizerMode::ExternalVocab;
        config.vocab_file.get_or_insert_with(|| PathBuf::from("<memory>"));
        config.validate()?;
        Ok(Self::assemble(config, Some(vocab_lines)))
    }

    fn assemble(config: TokenizerConfig, vocab_text: Option<&str>) -> Self {
        let vocab = vocab_text.map(PieceVocab::from_lines);
        let hash = config_hash(&config, vocab.as_ref());
        Tokenizer {
            config,
            vocab,
            hash,
        }
    }

    pub fn config(&self) -> &TokenizerConfig {
        &self.config
    }

    /// Hex SHA-256 over the canonical config (vocabulary contents included,
    /// file path excluded).
    pub fn config_hash(&self) -> &str {
        &self.hash
    }

    /// Segment `text` and keep the first `context_window` tokens. No
    /// lowercasing or filtering happens here.
    pub fn tokenize<'a>(&self, text: &'a str) -> Vec<Cow<'a, str>> {
        let w = self.config.context_window;
        let mut out = Vec::new();
        for chunk in split_specials(text, &self.config.special_tokens) {
            if out.len() >= w {
                break;
            }
            match chunk {
                Chunk::Special(s) => out.push(Cow::Borrowed(s)),
                Chunk::Text(s) => match self.config.mode {
                    TokenizerMode::UnicodeWord => {
                        out.extend(s.unicode_words().take(w - out.len()).map(Cow::Borrowed))
                    }
                    TokenizerMode::Whitespace => {
                        out.extend(s.split_whitespace().take(w - out.len()).map(Cow::Borrowed))
                    }
                    TokenizerMode::ExternalVocab => {
                        let vocab = self.vocab.as_ref().expect("vocab loaded in constructor");
                        for word in s.split_whitespace() {
                            if out.len() >= w {
                                break;
                            }
                            segment_word(word, vocab, &mut out, w);
                        }
                    }
                },
            }
        }
        out.truncate(w);
        out
    }

    pub fn sanitize(&self, token: &str) -> Option<String> {
        sanitize(token, &self.config)
    }
}

/// Tokenize with a fresh tokenizer; convenience for one-off calls.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Result<Vec<String>> {
    let tok = Tokenizer::new(config.clone())?;
    Ok(tok.tokenize(text).into_iter().map(Cow::into_owned).collect())
}

/// Map a raw token to its vocabulary form, or `None` if it must be dropped.
///
/// Special tokens are dropped; otherwise subword-marker prefixes are
/// stripped and the token lowercased, repeating until stable. A result that
/// is empty or itself special is dropped. The fixpoint makes the function
/// idempotent on every surviving token.
pub fn sanitize(token: &str, config: &TokenizerConfig) -> Option<String> {
    if config.special_tokens.contains(token) {
        return None;
    }
    let mut current = token.to_owned();
    loop {
        let mut next = strip_markers(&current, &config.subword_markers).to_owned();
        if config.lowercase {
            next = next.to_lowercase();
        }
        if next == current {
            break;
        }
        current = next;
    }
    if current.is_empty() || config.special_tokens.contains(&current) {
        None
    } else {
        Some(current)
    }
}

fn strip_markers<'a>(mut token: &'a str, markers: &BTreeSet<String>) -> &'a str {
    'outer: loop {
        for marker in markers {
            if let Some(rest) = token.strip_prefix(marker.as_str()) {
                token = rest;
                continue 'outer;
            }
        }
        return token;
    }
}

enum Chunk<'a> {
    Special(&'a str),
    Text(&'a str),
}

/// Split `text` around literal special-token occurrences (leftmost, then
/// longest), so that segmenters never break a special token apart.
fn split_specials<'a>(text: &'a str, specials: &BTreeSet<String>) -> Vec<Chunk<'a>> {
    let mut chunks = Vec::new();
    let mut rest = text;
    loop {
        let next = specials
            .iter()
            .filter_map(|s| rest.find(s.as_str()).map(|pos| (pos, s.len())))
            .min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match next {
            Some((pos, len)) => {
                if pos > 0 {
                    chunks.push(Chunk::Text(&rest[..pos]));
                }
                chunks.push(Chunk::Special(&rest[pos..pos + len]));
                rest = &rest[pos + len..];
            }
            None => {
                if !rest.is_empty() {
                    chunks.push(Chunk::Text(rest));
                }
                return chunks;
            }
        }
    }
}

fn segment_word<'a>(word: &'a str, vocab: &PieceVocab, out: &mut Vec<Cow<'a, str>>, w: usize) {
    let bounds: Vec<usize> = word
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(word.len()))
        .collect();
    let n_chars = bounds.len() - 1;
    let mut start = 0;
    while start < n_chars && out.len() < w {
        let longest = (start + 1..=n_chars.min(start + vocab.max_chars.max(1)))
            .rev()
            .find_map(|end| {
                let piece = &word[bounds[start]..bounds[end]];
                if start > 0 {
                    let continuation = format!("##{piece}");
                    if vocab.pieces.contains(&continuation) {
                        return Some((end, Cow::Owned(continuation)));
                    }
                }
                vocab
                    .pieces
                    .contains(piece)
                    .then_some((end, Cow::Borrowed(piece)))
            });
        // Unknown characters pass through one at a time.
        let (end, piece) =
            longest.unwrap_or((start + 1, Cow::Borrowed(&word[bounds[start]..bounds[start + 1]])));
        out.push(piece);
        start = end;
    }
}

fn config_hash(config: &TokenizerConfig, vocab: Option<&PieceVocab>) -> String {
    let mut canonical = config.clone();
    canonical.vocab_file = None;
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(&canonical).expect("config serializes"));
    if let Some(vocab) = vocab {
        let mut pieces: Vec<&String> = vocab.pieces.iter().collect();
        pieces.sort();
        for p in pieces {
            hasher.update(b"\n");
            hasher.update(p.as_bytes());
        }
    }
    hex::encode(hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(tok: &Tokenizer, text: &str) -> Vec<String> {
        tok.tokenize(text).into_iter().map(Cow::into_owned).collect()
    }

    #[test]
    fn unicode_word_split() {
        let tok = Tokenizer::new(TokenizerConfig::default()).unwrap();
        assert_eq!(toks(&tok, "The cat"), ["The", "cat"]);
        assert_eq!(toks(&tok, "Hello, world!"), ["Hello", "world"]);
        assert!(toks(&tok, "").is_empty());
    }

    #[test]
    fn specials_survive_segmentation() {
        let tok = Tokenizer::new(TokenizerConfig::default()).unwrap();
        assert_eq!(toks(&tok, "end.<eos>next"), ["end", "<eos>", "next"]);
    }

    #[test]
    fn truncation_keeps_prefix() {
        let tok = Tokenizer::new(TokenizerConfig::whitespace().with_context_window(3)).unwrap();
        assert_eq!(toks(&tok, "a b c d e"), ["a", "b", "c"]);
    }

    #[test]
    fn sanitize_rules() {
        let config = TokenizerConfig::default();
        assert_eq!(sanitize("The", &config).as_deref(), Some("the"));
        assert_eq!(sanitize("<eos>", &config), None);
        assert_eq!(sanitize("<EOS>", &config), None);
        assert_eq!(sanitize("##ing", &config).as_deref(), Some("ing"));
        assert_eq!(sanitize("####ing", &config).as_deref(), Some("ing"));
        assert_eq!(sanitize("\u{2581}Hello", &config).as_deref(), Some("hello"));
        assert_eq!(sanitize("##", &config), None);
        let keep_case = TokenizerConfig {
            lowercase: false,
            ..TokenizerConfig::default()
        };
        assert_eq!(sanitize("The", &keep_case).as_deref(), Some("The"));
    }

    #[test]
    fn external_vocab_longest_match() {
        let tok = Tokenizer::with_vocab_lines(
            TokenizerConfig::default(),
            "play\nplayer\n##ing\n##s\nun\n##play\n",
        )
        .unwrap();
        assert_eq!(toks(&tok, "playing players"), ["play", "##ing", "player", "##s"]);
        assert_eq!(toks(&tok, "unplayx"), ["un", "##play", "x"]);
        assert_eq!(toks(&tok, "a<eos>"), ["a", "<eos>"]);
    }

    #[test]
    fn config_validation() {
        assert!(Tokenizer::new(TokenizerConfig::default().with_context_window(0)).is_err());
        let mut bad = TokenizerConfig::default();
        bad.special_tokens.insert(String::new());
        assert!(matches!(bad.validate(), Err(Error::Usage(_))));
        let ext = TokenizerConfig {
            mode: TokenizerMode::ExternalVocab,
            ..TokenizerConfig::default()
        };
        assert!(ext.validate().is_err());
    }

    #[test]
    fn toml_round_trip_and_defaults() {
        let config = TokenizerConfig::from_toml_str("mode = \"whitespace\"\ncontext_window = 16\n")
            .unwrap();
        assert_eq!(config.mode, TokenizerMode::Whitespace);
        assert_eq!(config.context_window, 16);
        assert!(config.lowercase);
        assert_eq!(config.special_tokens.len(), 4);
        let again = TokenizerConfig::from_toml_str(&config.to_toml_string()).unwrap();
        assert_eq!(again, config);
        assert!(TokenizerConfig::from_toml_str("bogus = 1").is_err());
    }

    #[test]
    fn hash_tracks_config() {
        let a = Tokenizer::new(TokenizerConfig::default()).unwrap();
        let b = Tokenizer::new(TokenizerConfig::default()).unwrap();
        let c = Tokenizer::new(TokenizerConfig::whitespace()).unwrap();
        assert_eq!(a.config_hash(), b.config_hash());
        assert_ne!(a.config_hash(), c.config_hash());
        assert_eq!(a.config_hash().len(), 64);
    }
}
