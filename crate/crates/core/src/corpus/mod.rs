//! Dataset ingestion: tokenization, sanitization and vocabulary construction.

mod dataset;
mod intern;
mod tokenizer;
mod vocab;

pub use dataset::{build_vocab, load_dataset, Dataset, DatasetFormat, Sample};
pub use intern::{Interner, TokenId};
pub use tokenizer::{sanitize, tokenize, Tokenizer, TokenizerConfig, TokenizerMode};
pub use vocab::Vocabulary;
