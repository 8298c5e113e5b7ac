//! The 28-slot feature vector and the experiment masks.
//!
//! | slots  | content |
//! |--------|---------|
//! | 0..=8  | phi, pmi, salience, log likelihood, poisson-stirling, chi, t-score, co-occurrence, significance |
//! | 9..=13 | lin, wup, path, vector, vector pairs |
//! | 14     | average component length (code points) |
//! | 15..=19| hyphenated, within quote, within bracket, OOV, reduplicated |
//! | 20, 21 | first / second word inflected |
//! | 22..=24| first word tag one-hot (XC, NN, NNP) |
//! | 25..=27| second word tag one-hot (XC, NN, NNP) |
//!
//! Heuristic-only candidates carry no tag and are encoded as NN.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::assoc::{AssociationScores, CorpusCounts};
use crate::candidates::{Candidate, CandidateKey, Label, NounTag};
use crate::stemmer::Stemmer;
use crate::wordnet::{translate, BilingualDictionary, WnSimilarityScores, WordNet};
use crate::{nfc, Error, Result};

pub const NUM_FEATURES: usize = 28;

pub const SLOT_NAMES: [&str; NUM_FEATURES] = [
    "phi",
    "pmi",
    "salience",
    "log_likelihood",
    "poisson_stirling",
    "chi",
    "t_score",
    "cooccurrence",
    "significance",
    "lin",
    "wup",
    "path",
    "vector",
    "vector_pairs",
    "avg_word_length",
    "hyphenated",
    "within_quote",
    "within_bracket",
    "oov",
    "reduplicated",
    "first_word_inflected",
    "second_word_inflected",
    "tag1_xc",
    "tag1_nn",
    "tag1_nnp",
    "tag2_xc",
    "tag2_nn",
    "tag2_nnp",
];

pub const ASSOC_SLOTS: std::ops::Range<usize> = 0..9;
pub const WORDNET_SLOTS: std::ops::Range<usize> = 9..14;
pub const AVG_LENGTH_SLOT: usize = 14;
pub const REDUPLICATION_SLOT: usize = 19;
const BINARY_SLOTS: std::ops::Range<usize> = 15..22;
const TAG1_SLOTS: std::ops::Range<usize> = 22..25;
const TAG2_SLOTS: std::ops::Range<usize> = 25..28;

/// Short hex digest of slot names, stored in models and checked at prediction time.
pub fn layout_hash_of<S: AsRef<str>>(names: &[S]) -> String {
    let mut h = Sha256::new();
    for n in names {
        h.update(n.as_ref().as_bytes());
        h.update(b"\n");
    }
    hex::encode(&h.finalize()[..8])
}

pub fn layout_hash() -> String {
    layout_hash_of(&SLOT_NAMES)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: [f64; NUM_FEATURES],
    pub label: Option<Label>,
    pub key: CandidateKey,
}

impl FeatureVector {
    /// Checks finiteness, binary slots and one-hot groups.
    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("slot {} is not finite", SLOT_NAMES[i])));
        }
        if let Some(i) = BINARY_SLOTS
            .chain(TAG1_SLOTS)
            .chain(TAG2_SLOTS)
            .find(|i| self.values[*i] != 0.0 && self.values[*i] != 1.0)
        {
            return Err(Error::invalid(format!("slot {} must be 0 or 1", SLOT_NAMES[i])));
        }
        for group in [TAG1_SLOTS, TAG2_SLOTS] {
            if self.values[group].iter().sum::<f64>() != 1.0 {
                return Err(Error::invalid("tag one-hot group does not sum to 1"));
            }
        }
        Ok(())
    }
}

fn one_hot(tag: Option<NounTag>) -> [f64; 3] {
    match tag.unwrap_or(NounTag::Nn) {
        NounTag::Xc => [1.0, 0.0, 0.0],
        NounTag::Nn => [0.0, 1.0, 0.0],
        NounTag::Nnp => [0.0, 0.0, 1.0],
    }
}

fn bit(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// WordNet graph plus the dictionary that translates candidate words into it.
#[derive(Clone, Debug)]
pub struct WordNetResources {
    pub wordnet: WordNet,
    pub dictionary: BilingualDictionary,
}

impl WordNetResources {
    pub fn score(&self, w1: &str, w2: &str, stemmer: &Stemmer) -> WnSimilarityScores {
        match (
            translate(w1, &self.dictionary, stemmer),
            translate(w2, &self.dictionary, stemmer),
        ) {
            (Some(t1), Some(t2)) => self.wordnet.similarity(t1, t2),
            _ => WnSimilarityScores::missing(),
        }
    }
}

/// Frozen resources for featurization. Without WordNet the similarity slots are 0.
#[derive(Clone, Debug)]
pub struct Featurizer {
    pub counts: CorpusCounts,
    pub stemmer: Stemmer,
    pub wordnet: Option<WordNetResources>,
}

impl Featurizer {
    pub fn featurize(&self, c: &Candidate, label: Option<Label>) -> Result<FeatureVector> {
        let mut v = [0.0; NUM_FEATURES];
        let assoc = if self.counts.total_bigrams == 0 {
            AssociationScores::default()
        } else {
            AssociationScores::for_pair(&self.counts, &c.stem1, &c.stem2)?
        };
        v[ASSOC_SLOTS].copy_from_slice(&assoc.to_array());
        if let Some(wn) = &self.wordnet {
            v[WORDNET_SLOTS].copy_from_slice(&wn.score(&c.w1, &c.w2, &self.stemmer).to_array());
        }
        v[AVG_LENGTH_SLOT] = (c.w1.chars().count() + c.w2.chars().count()) as f64 / 2.0;
        let (s1, s2) = (self.stemmer.stem(&c.w1), self.stemmer.stem(&c.w2));
        let reduplicated = c.flags.reduplicated || c.stem1 == c.stem2 || c.w1 == c.w2;
        v[BINARY_SLOTS].copy_from_slice(&[
            bit(c.flags.hyphenated),
            bit(c.flags.quoted),
            bit(c.flags.bracketed),
            bit(c.flags.oov),
            bit(reduplicated),
            bit(s1.was_inflected),
            bit(s2.was_inflected),
        ]);
        v[TAG1_SLOTS].copy_from_slice(&one_hot(c.tag1));
        v[TAG2_SLOTS].copy_from_slice(&one_hot(c.tag2));
        let fv = FeatureVector {
            values: v,
            label,
            key: c.key(),
        };
        fv.validate()?;
        Ok(fv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Proposed,
    Baseline1,
    Baseline2,
    Baseline3,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Proposed, Preset::Baseline1, Preset::Baseline2, Preset::Baseline3];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Proposed => "proposed",
            Preset::Baseline1 => "baseline1",
            Preset::Baseline2 => "baseline2",
            Preset::Baseline3 => "baseline3",
        }
    }

    /// Row label used in comparison tables.
    pub fn description(self) -> &'static str {
        match self {
            Preset::Proposed => "Proposed system",
            Preset::Baseline1 => "Baseline system 1 (association measure features)",
            Preset::Baseline2 => "Baseline system 2 (WordNet similarity features only)",
            Preset::Baseline3 => "Baseline system 3 (without WordNet and reduplication features)",
        }
    }

    pub fn mask(self) -> FeatureMask {
        let active: Vec<usize> = match self {
            Preset::Proposed => (0..NUM_FEATURES).collect(),
            Preset::Baseline1 => ASSOC_SLOTS.collect(),
            Preset::Baseline2 => WORDNET_SLOTS.collect(),
            Preset::Baseline3 => (0..NUM_FEATURES)
                .filter(|i| !WORDNET_SLOTS.contains(i) && *i != REDUPLICATION_SLOT)
                .collect(),
        };
        FeatureMask {
            name: self.as_str().to_string(),
            active,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown preset `{s}` (expected proposed, baseline1, baseline2 or baseline3)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureMask {
    pub name: String,
    /// Sorted, distinct slot indices.
    pub active: Vec<usize>,
}

impl FeatureMask {
    pub fn new(name: impl Into<String>, mut active: Vec<usize>) -> Result<FeatureMask> {
        active.sort_unstable();
        active.dedup();
        if active.is_empty() {
            return Err(Error::invalid("feature mask is empty"));
        }
        if let Some(i) = active.iter().find(|i| **i >= NUM_FEATURES) {
            return Err(Error::invalid(format!("feature index {i} out of range")));
        }
        Ok(FeatureMask {
            name: name.into(),
            active,
        })
    }

    pub fn all() -> FeatureMask {
        Preset::Proposed.mask()
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }
}

pub fn preset_mask(name: &str) -> Result<FeatureMask> {
    Ok(name.parse::<Preset>()?.mask())
}

/// Feature matrix TSV: a header of slot names plus `label` and `key`, then one
/// row per candidate. The key column holds `stem1 stem2`.
pub fn write_matrix(rows: &[FeatureVector]) -> String {
    let mut out = SLOT_NAMES.join("\t");
    out.push_str("\tlabel\tkey\n");
    for r in rows {
        for v in &r.values {
            out.push_str(&format!("{v}\t"));
        }
        out.push_str(r.label.map_or("?", Label::as_str));
        out.push('\t');
        out.push_str(&r.key.0);
        out.push(' ');
        out.push_str(&r.key.1);
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str, origin: &str) -> Result<Vec<FeatureVector>> {
    let mut lines = text.lines().enumerate();
    let header: Vec<&str> = lines
        .next()
        .map(|(_, l)| l.split('\t').collect())
        .unwrap_or_default();
    if header.len() != NUM_FEATURES + 2 || header[NUM_FEATURES..] != ["label", "key"] {
        return Err(Error::parse(origin, 1, "header must list the slot names, `label` and `key`"));
    }
    if header[..NUM_FEATURES] != SLOT_NAMES {
        return Err(Error::LayoutMismatch {
            expected: layout_hash(),
            found: layout_hash_of(&header[..NUM_FEATURES]),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != NUM_FEATURES + 2 {
            return Err(Error::parse(origin, lineno, format!("expected {} fields, found {}", NUM_FEATURES + 2, f.len())));
        }
        let mut values = [0.0; NUM_FEATURES];
        for (slot, s) in values.iter_mut().zip(&f[..NUM_FEATURES]) {
            *slot = s
                .parse()
                .map_err(|_| Error::parse(origin, lineno, format!("bad number `{s}`")))?;
        }
        let label = match f[NUM_FEATURES] {
            "?" => None,
            s => Some(s.parse::<Label>().map_err(|e| Error::parse(origin, lineno, e))?),
        };
        let key = f[NUM_FEATURES + 1]
            .split_once(' ')
            .map(|(a, b)| (nfc(a), nfc(b)))
            .ok_or_else(|| Error::parse(origin, lineno, "key must be `stem1 stem2`"))?;
        let fv = FeatureVector { values, label, key };
        fv.validate().map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
        rows.push(fv);
    }
    Ok(rows)
}
