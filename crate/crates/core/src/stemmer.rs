//! Lightweight longest-match suffix stripping.
//!
//! A single pass removes at most one suffix: the longest listed suffix that
//! leaves a stem of at least [`MIN_STEM_CHARS`] code points.

use std::path::Path;

use crate::{load_word_list, parse_word_list, Result};

pub const MIN_STEM_CHARS: usize = 2;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuffixList {
    /// Longest first (by code points), ties in lexicographic order.
    suffixes: Vec<String>,
}

impl SuffixList {
    pub fn new<I, S>(suffixes: I) -> SuffixList
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut suffixes: Vec<String> = suffixes
            .into_iter()
            .map(Into::into)
            .filter(|s| !s.is_empty())
            .collect();
        suffixes.sort_by(|a, b| {
            b.chars()
                .count()
                .cmp(&a.chars().count())
                .then_with(|| a.cmp(b))
        });
        suffixes.dedup();
        SuffixList { suffixes }
    }

    /// Parses the suffix file format (one per line, `#` comments).
    pub fn parse(text: &str) -> SuffixList {
        SuffixList::new(parse_word_list(text))
    }

    pub fn load(path: &Path) -> Result<SuffixList> {
        Ok(SuffixList::new(load_word_list(path)?))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.suffixes.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.suffixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.suffixes.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemResult {
    pub stem: String,
    pub stripped_suffix: String,
    pub was_inflected: bool,
}

pub fn stem(word: &str, suffixes: &SuffixList) -> StemResult {
    let word_chars = word.chars().count();
    for suffix in suffixes.iter() {
        let suffix_chars = suffix.chars().count();
        if suffix_chars + MIN_STEM_CHARS > word_chars {
            continue;
        }
        if let Some(stem) = word.strip_suffix(suffix) {
            return StemResult {
                stem: stem.to_string(),
                stripped_suffix: suffix.to_string(),
                was_inflected: true,
            };
        }
    }
    StemResult {
        stem: word.to_string(),
        stripped_suffix: String::new(),
        was_inflected: false,
    }
}

/// A suffix list bound to the [`stem`] function. The default stemmer has an
/// empty list and is the identity.
#[derive(Clone, Debug, Default)]
pub struct Stemmer {
    suffixes: SuffixList,
}

impl Stemmer {
    pub fn new(suffixes: SuffixList) -> Stemmer {
        Stemmer { suffixes }
    }

    pub fn stem(&self, word: &str) -> StemResult {
        stem(word, &self.suffixes)
    }

    pub fn stem_str(&self, word: &str) -> String {
        self.stem(word).stem
    }

    pub fn suffixes(&self) -> &SuffixList {
        &self.suffixes
    }
}
