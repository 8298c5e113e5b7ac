//! Identification of bigram noun-noun multiword expressions (MWEs) in
//! chunk-annotated Bengali text.
//!
//! The pipeline runs in stages, each with its own module:
//!
//! * [`corpus`] segments raw documents into sentences and reads chunked sentences.
//! * [`stemmer`] conflates inflected forms with a longest-match suffix stripper.
//! * [`candidates`] extracts noun-noun candidates from NP chunks and from
//!   heuristics over the raw text (hyphens, quotes, brackets, OOV, reduplication).
//! * [`assoc`] counts stemmed bigrams and scores candidates with nine association measures.
//! * [`wordnet`] computes gloss and hypernym based similarities of translated components.
//! * [`features`] assembles the 28-slot feature vectors and the experiment masks.
//! * [`forest`] is a random forest classifier with out-of-bag error and JSON models.
//! * [`eval`] runs k-fold cross-validation and reports weighted F-measures.
//! * [`pipeline`] holds the JSON configuration and wires the stages together.

pub mod assoc;
pub mod candidates;
pub mod corpus;
mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod pipeline;
mod rng;
pub mod stemmer;
pub mod wordnet;

pub use error::{Error, Result};

use std::collections::BTreeSet;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

/// NFC-normalizes a string. All text entering the pipeline passes through here.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Reads a UTF-8 file, NFC-normalized.
pub fn read_text(path: &Path) -> Result<String> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(nfc(&raw))
}

/// Reads a one-entry-per-line word list: `#` comments and blank lines are ignored,
/// entries are trimmed.
pub fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(nfc)
        .collect()
}

pub fn load_word_list(path: &Path) -> Result<BTreeSet<String>> {
    Ok(parse_word_list(&read_text(path)?))
}
