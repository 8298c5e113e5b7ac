//! Candidate extraction.
//!
//! Two sources feed the candidate set. The chunk rule takes every adjacent
//! noun-noun pair (`NN`, `NNP`, `XC`) inside one NP chunk. The heuristics run on
//! unchunked sentences and pick up hyphenated tokens, reduplicated words, pairs
//! enclosed in single quotes or round brackets, and pairs of out-of-vocabulary
//! words. Numeric pairs are never candidates.
//!
//! Candidates are keyed by their stemmed pair, so inflected variants pool into
//! one candidate type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ChunkedSentence, PosTag, Sentence};
use crate::stemmer::Stemmer;
use crate::{nfc, read_text, Error, Result};

pub type CandidateKey = (String, String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NounTag {
    Xc,
    Nn,
    Nnp,
}

impl NounTag {
    pub fn from_pos(tag: PosTag) -> Option<NounTag> {
        match tag {
            PosTag::Xc => Some(NounTag::Xc),
            PosTag::Nn => Some(NounTag::Nn),
            PosTag::Nnp => Some(NounTag::Nnp),
            PosTag::Other => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NounTag::Xc => "XC",
            NounTag::Nn => "NN",
            NounTag::Nnp => "NNP",
        }
    }
}

fn tag_str(tag: Option<NounTag>) -> &'static str {
    tag.map_or("NA", NounTag::as_str)
}

fn parse_tag(s: &str) -> Option<Option<NounTag>> {
    match s {
        "XC" => Some(Some(NounTag::Xc)),
        "NN" => Some(Some(NounTag::Nn)),
        "NNP" => Some(Some(NounTag::Nnp)),
        "NA" => Some(None),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub from_chunk_rule: bool,
    pub hyphenated: bool,
    pub quoted: bool,
    pub bracketed: bool,
    pub oov: bool,
    pub reduplicated: bool,
}

const FLAG_NAMES: [&str; 6] = ["chunk", "hyphenated", "quoted", "bracketed", "oov", "reduplicated"];

impl Flags {
    fn bits(&self) -> [bool; 6] {
        [
            self.from_chunk_rule,
            self.hyphenated,
            self.quoted,
            self.bracketed,
            self.oov,
            self.reduplicated,
        ]
    }

    fn from_bits(b: [bool; 6]) -> Flags {
        Flags {
            from_chunk_rule: b[0],
            hyphenated: b[1],
            quoted: b[2],
            bracketed: b[3],
            oov: b[4],
            reduplicated: b[5],
        }
    }

    pub fn union(self, other: Flags) -> Flags {
        let (a, b) = (self.bits(), other.bits());
        Flags::from_bits(std::array::from_fn(|i| a[i] || b[i]))
    }

    pub fn any(&self) -> bool {
        self.bits().iter().any(|b| *b)
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .bits()
            .iter()
            .zip(FLAG_NAMES)
            .filter(|(set, _)| **set)
            .map(|(_, n)| n)
            .collect();
        if names.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

impl FromStr for Flags {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Flags, String> {
        let mut bits = [false; 6];
        if s != "-" {
            for name in s.split(',') {
                let i = FLAG_NAMES
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| format!("unknown flag `{name}`"))?;
                bits[i] = true;
            }
        }
        Ok(Flags::from_bits(bits))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub w1: String,
    pub w2: String,
    pub stem1: String,
    pub stem2: String,
    pub occurrences: u64,
    pub flags: Flags,
    /// `None` is the `NA` tag of heuristic-only candidates.
    pub tag1: Option<NounTag>,
    pub tag2: Option<NounTag>,
}

impl Candidate {
    pub fn key(&self) -> CandidateKey {
        (self.stem1.clone(), self.stem2.clone())
    }

    /// Folds another occurrence group of the same key into this one.
    ///
    /// Counts add and flags OR. Surfaces and tags come from the chunk-rule side
    /// when exactly one side is chunk-derived; otherwise the smaller value wins,
    /// which keeps the operation commutative.
    pub fn absorb(&mut self, other: Candidate) {
        debug_assert_eq!(self.key(), other.key());
        let mine = self.flags.from_chunk_rule;
        let theirs = other.flags.from_chunk_rule;
        if mine == theirs {
            if (&other.w1, &other.w2) < (&self.w1, &self.w2) {
                self.w1 = other.w1;
                self.w2 = other.w2;
            }
            if (other.tag1, other.tag2) < (self.tag1, self.tag2) {
                self.tag1 = other.tag1;
                self.tag2 = other.tag2;
            }
        } else if theirs {
            self.w1 = other.w1;
            self.w2 = other.w2;
            self.tag1 = other.tag1;
            self.tag2 = other.tag2;
        }
        self.occurrences += other.occurrences;
        self.flags = self.flags.union(other.flags);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Negative => "negative",
            Label::Positive => "positive",
        }
    }

    pub fn from_bool(positive: bool) -> Label {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Label, String> {
        match s {
            "positive" => Ok(Label::Positive),
            "negative" => Ok(Label::Negative),
            _ => Err(format!("unknown label `{s}`")),
        }
    }
}

/// True for a token made of ASCII or Bengali (U+09E6..U+09EF) digits only.
pub fn is_digit_token(w: &str) -> bool {
    !w.is_empty()
        && w
            .chars()
            .all(|c| c.is_ascii_digit() || ('\u{09E6}'..='\u{09EF}').contains(&c))
}

pub fn is_number(w: &str, number_lexicon: &BTreeSet<String>) -> bool {
    is_digit_token(w) || number_lexicon.contains(w)
}

/// A "binary number expression": both tokens numeric.
pub fn is_number_pair(w1: &str, w2: &str, number_lexicon: &BTreeSet<String>) -> bool {
    is_number(w1, number_lexicon) && is_number(w2, number_lexicon)
}

const OPEN_QUOTES: [&str; 2] = ["'", "\u{2018}"];
const CLOSE_QUOTES: [&str; 2] = ["'", "\u{2019}"];

/// Characters split off the edges of whitespace tokens before the heuristics run.
fn is_edge_punct(c: char) -> bool {
    (c.is_ascii_punctuation() && c != '-')
        || matches!(
            c,
            '\u{2018}' | '\u{2019}' | '\u{201C}' | '\u{201D}' | '\u{0964}' | '\u{0965}' | '\u{2026}'
        )
}

/// Splits leading and trailing punctuation off each token into separate items,
/// so `(nano` becomes `(`, `nano`.
pub fn split_edge_punct(tokens: &[String]) -> Vec<String> {
    let mut items = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let core = tok.trim_matches(is_edge_punct);
        if core.is_empty() {
            items.extend(tok.chars().map(String::from));
            continue;
        }
        let start = tok.len() - tok.trim_start_matches(is_edge_punct).len();
        items.extend(tok[..start].chars().map(String::from));
        items.push(core.to_string());
        items.extend(tok[start + core.len()..].chars().map(String::from));
    }
    items
}

fn is_word(item: &str) -> bool {
    item.chars().any(char::is_alphanumeric)
}

/// Candidate extraction configuration: stemmer, number lexicon and the optional
/// vocabulary used by the OOV rule. Without a vocabulary the OOV rule is off.
#[derive(Clone, Debug, Default)]
pub struct Extractor {
    pub stemmer: Stemmer,
    pub numbers: BTreeSet<String>,
    pub vocab: Option<BTreeSet<String>>,
}

impl Extractor {
    fn candidate(&self, w1: &str, w2: &str, flags: Flags, tags: (Option<NounTag>, Option<NounTag>)) -> Candidate {
        Candidate {
            w1: w1.to_string(),
            w2: w2.to_string(),
            stem1: self.stemmer.stem_str(w1),
            stem2: self.stemmer.stem_str(w2),
            occurrences: 1,
            flags,
            tag1: tags.0,
            tag2: tags.1,
        }
    }

    /// A word is in vocabulary if its surface or its stem is listed.
    pub fn is_oov(&self, w: &str) -> bool {
        let Some(vocab) = &self.vocab else {
            return false;
        };
        w.chars().any(char::is_alphabetic)
            && !vocab.contains(w)
            && !vocab.contains(&self.stemmer.stem_str(w))
    }

    pub fn extract_chunk_candidates(&self, sentences: &[ChunkedSentence]) -> Vec<Candidate> {
        let mut acc = Accumulator::default();
        for sentence in sentences {
            for chunk in sentence.np_chunks() {
                let toks = &sentence.tokens[chunk];
                for pair in toks.windows(2) {
                    let (a, b) = (&pair[0], &pair[1]);
                    let (Some(t1), Some(t2)) = (NounTag::from_pos(a.pos_tag), NounTag::from_pos(b.pos_tag)) else {
                        continue;
                    };
                    if is_number_pair(&a.surface, &b.surface, &self.numbers) {
                        continue;
                    }
                    let flags = Flags {
                        from_chunk_rule: true,
                        ..Flags::default()
                    };
                    acc.add(self.candidate(&a.surface, &b.surface, flags, (Some(t1), Some(t2))));
                }
            }
        }
        acc.finish()
    }

    pub fn extract_heuristic_candidates(&self, sentences: &[Sentence]) -> Vec<Candidate> {
        let mut acc = Accumulator::default();
        for sentence in sentences {
            for c in self.sentence_heuristics(&sentence.tokens) {
                acc.add(c);
            }
        }
        acc.finish()
    }

    fn sentence_heuristics(&self, tokens: &[String]) -> Vec<Candidate> {
        let items = split_edge_punct(tokens);
        let mut out = Vec::new();
        let na = (None, None);

        for item in &items {
            let mut parts = item.split('-');
            if let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) {
                if is_word(a) && is_word(b) && !is_number_pair(a, b, &self.numbers) {
                    let flags = Flags {
                        hyphenated: true,
                        ..Flags::default()
                    };
                    out.push(self.candidate(a, b, flags, na));
                }
            }
        }

        // Flags per adjacent word position (index of the first word).
        let mut positions: BTreeMap<usize, Flags> = BTreeMap::new();
        for i in 0..items.len().saturating_sub(1) {
            let (a, b) = (&items[i], &items[i + 1]);
            if !is_word(a) || !is_word(b) {
                continue;
            }
            let mut flags = Flags::default();
            if a == b {
                flags.reduplicated = true;
            }
            if self.is_oov(a) && self.is_oov(b) {
                flags.oov = true;
            }
            if i > 0 && i + 2 < items.len() {
                let (open, close) = (items[i - 1].as_str(), items[i + 2].as_str());
                if OPEN_QUOTES.contains(&open) && CLOSE_QUOTES.contains(&close) {
                    flags.quoted = true;
                }
                if open == "(" && close == ")" {
                    flags.bracketed = true;
                }
            }
            if flags.any() {
                positions.insert(i, flags);
            }
        }
        for (i, flags) in positions {
            let (a, b) = (&items[i], &items[i + 1]);
            if !is_number_pair(a, b, &self.numbers) {
                out.push(self.candidate(a, b, flags, na));
            }
        }
        out
    }
}

#[derive(Default)]
struct Accumulator {
    map: BTreeMap<CandidateKey, Candidate>,
}

impl Accumulator {
    fn add(&mut self, c: Candidate) {
        match self.map.get_mut(&c.key()) {
            Some(existing) => existing.absorb(c),
            None => {
                self.map.insert(c.key(), c);
            }
        }
    }

    fn finish(self) -> Vec<Candidate> {
        self.map.into_values().collect()
    }
}

/// Union keyed by stemmed pair, sorted by key.
pub fn merge_candidates(a: Vec<Candidate>, b: Vec<Candidate>) -> Vec<Candidate> {
    let mut acc = Accumulator::default();
    for c in a.into_iter().chain(b) {
        acc.add(c);
    }
    acc.finish()
}

/// Manually identified MWEs, stored as stemmed keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldList {
    entries: BTreeSet<CandidateKey>,
}

impl GoldList {
    pub fn new(entries: impl IntoIterator<Item = CandidateKey>) -> GoldList {
        GoldList {
            entries: entries.into_iter().collect(),
        }
    }

    /// Parses `tok1 tok2` lines and stems both tokens.
    pub fn parse(text: &str, stemmer: &Stemmer, origin: &str) -> Result<GoldList> {
        let mut entries = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::parse(origin, i + 1, "expected two space-separated tokens"));
            }
            entries.insert((stemmer.stem_str(&nfc(toks[0])), stemmer.stem_str(&nfc(toks[1]))));
        }
        Ok(GoldList { entries })
    }

    pub fn load(path: &Path, stemmer: &Stemmer) -> Result<GoldList> {
        GoldList::parse(&read_text(path)?, stemmer, &path.display().to_string())
    }

    pub fn contains(&self, key: &CandidateKey) -> bool {
        self.entries.contains(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn label_candidates(cands: Vec<Candidate>, gold: &GoldList) -> Vec<(Candidate, Label)> {
    cands
        .into_iter()
        .map(|c| {
            let label = Label::from_bool(gold.contains(&c.key()));
            (c, label)
        })
        .collect()
}

pub const CANDIDATE_TSV_HEADER: &str = "w1\tw2\tstem1\tstem2\toccurrences\tflags\ttags\tlabel";

/// Candidate dump. Unlabeled rows carry `?` in the label column.
pub fn write_candidate_tsv(rows: &[(Candidate, Option<Label>)]) -> String {
    let mut out = String::from(CANDIDATE_TSV_HEADER);
    out.push('\n');
    for (c, label) in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{},{}\t{}\n",
            c.w1,
            c.w2,
            c.stem1,
            c.stem2,
            c.occurrences,
            c.flags,
            tag_str(c.tag1),
            tag_str(c.tag2),
            label.map_or("?", Label::as_str)
        ));
    }
    out
}

pub fn parse_candidate_tsv(text: &str, origin: &str) -> Result<Vec<(Candidate, Option<Label>)>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() || (i == 0 && line == CANDIDATE_TSV_HEADER) {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 8 {
            return Err(Error::parse(origin, lineno, format!("expected 8 fields, found {}", f.len())));
        }
        let occurrences = f[4]
            .parse::<u64>()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| Error::parse(origin, lineno, "occurrences must be a positive integer"))?;
        let flags = f[5].parse::<Flags>().map_err(|e| Error::parse(origin, lineno, e))?;
        let (t1, t2) = f[6]
            .split_once(',')
            .and_then(|(a, b)| Some((parse_tag(a)?, parse_tag(b)?)))
            .ok_or_else(|| Error::parse(origin, lineno, format!("bad tags `{}`", f[6])))?;
        let label = match f[7] {
            "?" => None,
            s => Some(s.parse::<Label>().map_err(|e| Error::parse(origin, lineno, e))?),
        };
        if f[..4].iter().any(|s| s.is_empty()) {
            return Err(Error::parse(origin, lineno, "empty word or stem"));
        }
        rows.push((
            Candidate {
                w1: nfc(f[0]),
                w2: nfc(f[1]),
                stem1: nfc(f[2]),
                stem2: nfc(f[3]),
                occurrences,
                flags,
                tag1: t1,
                tag2: t2,
            },
            label,
        ));
    }
    Ok(rows)
}
