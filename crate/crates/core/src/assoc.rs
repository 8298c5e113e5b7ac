//! Corpus-wide bigram statistics and association measures.
//!
//! Counts are taken over every within-sentence adjacent pair of stemmed
//! tokens. For a pair `(w1, w2)` the 2x2 contingency table is
//!
//! ```text
//!             w2      !w2
//!   w1       n11      n12   | n1p
//!  !w1       n21      n22   | n2p
//!            np1      np2   | N
//! ```
//!
//! with expected counts `mij = row_i * col_j / N`. Information-type measures use
//! log base 2, likelihood-type measures the natural log. Measures that need
//! `n11 >= 1` score 0 for unseen pairs so that feature vectors stay finite.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Sentence;
use crate::stemmer::Stemmer;
use crate::{nfc, read_text, Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusCounts {
    pub bigram_count: BTreeMap<(String, String), u64>,
    pub first_marginal: BTreeMap<String, u64>,
    pub second_marginal: BTreeMap<String, u64>,
    pub unigram_count: BTreeMap<String, u64>,
    /// Total number of bigrams, `N`.
    pub total_bigrams: u64,
    pub total_tokens: u64,
}

impl CorpusCounts {
    pub fn add_sentence(&mut self, stems: &[String]) {
        for s in stems {
            *self.unigram_count.entry(s.clone()).or_insert(0) += 1;
        }
        self.total_tokens += stems.len() as u64;
        for pair in stems.windows(2) {
            self.add_bigram(&pair[0], &pair[1], 1);
        }
    }

    fn add_bigram(&mut self, a: &str, b: &str, n: u64) {
        *self
            .bigram_count
            .entry((a.to_string(), b.to_string()))
            .or_insert(0) += n;
        *self.first_marginal.entry(a.to_string()).or_insert(0) += n;
        *self.second_marginal.entry(b.to_string()).or_insert(0) += n;
        self.total_bigrams += n;
    }

    /// Adds another set of counts. Associative and commutative, so per-shard
    /// counts can be reduced in any grouping.
    pub fn merge(&mut self, other: &CorpusCounts) {
        for ((a, b), n) in &other.bigram_count {
            self.add_bigram(a, b, *n);
        }
        for (w, n) in &other.unigram_count {
            *self.unigram_count.entry(w.clone()).or_insert(0) += n;
        }
        self.total_tokens += other.total_tokens;
    }

    pub fn bigram(&self, w1: &str, w2: &str) -> u64 {
        // BTreeMap<(String, String)> cannot be queried with borrowed halves.
        self.bigram_count
            .get(&(w1.to_string(), w2.to_string()))
            .copied()
            .unwrap_or(0)
    }

    pub fn unigram(&self, w: &str) -> u64 {
        self.unigram_count.get(w).copied().unwrap_or(0)
    }

    /// Dump format: a `#counts<TAB>N<TAB>total_tokens` header, then a `#unigrams`
    /// section of `stem<TAB>count` lines and a `#bigrams` section of
    /// `stem1<TAB>stem2<TAB>count` lines. Marginals are rebuilt on load.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("#counts\t{}\t{}\n#unigrams\n", self.total_bigrams, self.total_tokens);
        for (w, n) in &self.unigram_count {
            out.push_str(&format!("{w}\t{n}\n"));
        }
        out.push_str("#bigrams\n");
        for ((a, b), n) in &self.bigram_count {
            out.push_str(&format!("{a}\t{b}\t{n}\n"));
        }
        out
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<CorpusCounts> {
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .map(|(_, l)| l.split('\t').collect::<Vec<_>>())
            .filter(|f| f.len() == 3 && f[0] == "#counts")
            .ok_or_else(|| Error::parse(origin, 1, "missing #counts header"))?;
        let parse_n = |s: &str, line: usize| {
            s.parse::<u64>()
                .map_err(|_| Error::parse(origin, line, format!("bad count `{s}`")))
        };
        let declared_n = parse_n(header[1], 1)?;
        let declared_tokens = parse_n(header[2], 1)?;

        let mut counts = CorpusCounts::default();
        let mut section = "";
        for (i, line) in lines {
            let lineno = i + 1;
            if line == "#unigrams" || line == "#bigrams" {
                section = line;
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            match (section, f.len()) {
                ("#unigrams", 2) => {
                    *counts.unigram_count.entry(nfc(f[0])).or_insert(0) += parse_n(f[1], lineno)?;
                }
                ("#bigrams", 3) => {
                    let n = parse_n(f[2], lineno)?;
                    counts.add_bigram(&nfc(f[0]), &nfc(f[1]), n);
                }
                _ => return Err(Error::parse(origin, lineno, "unexpected line")),
            }
        }
        counts.total_tokens = declared_tokens;
        if counts.total_bigrams != declared_n {
            return Err(Error::parse(
                origin,
                1,
                format!("header N = {declared_n} but bigram counts sum to {}", counts.total_bigrams),
            ));
        }
        Ok(counts)
    }

    pub fn load(path: &Path) -> Result<CorpusCounts> {
        CorpusCounts::from_tsv(&read_text(path)?, &path.display().to_string())
    }
}

/// Stems every token and counts unigrams and adjacent bigrams.
pub fn build_counts(sentences: &[Sentence], stemmer: &Stemmer) -> CorpusCounts {
    let mut counts = CorpusCounts::default();
    for s in sentences {
        let stems: Vec<String> = s.tokens.iter().map(|t| stemmer.stem_str(t)).collect();
        counts.add_sentence(&stems);
    }
    counts
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub n11: u64,
    pub n12: u64,
    pub n21: u64,
    pub n22: u64,
    pub n1p: u64,
    pub np1: u64,
    pub n2p: u64,
    pub np2: u64,
    pub n: u64,
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl ContingencyTable {
    /// Builds the table from the joint count, both marginals and the total.
    pub fn from_marginals(n11: u64, n1p: u64, np1: u64, n: u64) -> Result<ContingencyTable> {
        if n == 0 {
            return Err(Error::EmptyCorpus);
        }
        if n11 > n1p || n11 > np1 || n1p > n || np1 > n || n1p + np1 - n11 > n {
            return Err(Error::invalid(format!(
                "inconsistent table n11={n11} n1p={n1p} np1={np1} N={n}"
            )));
        }
        let (n12, n21) = (n1p - n11, np1 - n11);
        let n22 = n + n11 - n1p - np1;
        let (n2p, np2) = (n - n1p, n - np1);
        let total = n as f64;
        let expected = |row: u64, col: u64| row as f64 * col as f64 / total;
        Ok(ContingencyTable {
            n11,
            n12,
            n21,
            n22,
            n1p,
            np1,
            n2p,
            np2,
            n,
            m11: expected(n1p, np1),
            m12: expected(n1p, np2),
            m21: expected(n2p, np1),
            m22: expected(n2p, np2),
        })
    }

    fn cells(&self) -> [(u64, f64); 4] {
        [
            (self.n11, self.m11),
            (self.n12, self.m12),
            (self.n21, self.m21),
            (self.n22, self.m22),
        ]
    }
}

pub fn contingency(counts: &CorpusCounts, w1: &str, w2: &str) -> Result<ContingencyTable> {
    ContingencyTable::from_marginals(
        counts.bigram(w1, w2),
        counts.first_marginal.get(w1).copied().unwrap_or(0),
        counts.second_marginal.get(w2).copied().unwrap_or(0),
        counts.total_bigrams,
    )
}

/// The seven measures computed from a contingency table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TableScores {
    pub phi: f64,
    pub pmi: f64,
    pub salience: f64,
    pub log_likelihood: f64,
    pub poisson_stirling: f64,
    pub chi: f64,
    pub t_score: f64,
}

pub fn score_bigram(t: &ContingencyTable) -> Result<TableScores> {
    if t.n == 0 || t.n1p == 0 || t.np1 == 0 {
        return Err(Error::invalid(format!(
            "scoring needs N, n1p, np1 >= 1 (N={}, n1p={}, np1={})",
            t.n, t.n1p, t.np1
        )));
    }
    let n11 = t.n11 as f64;

    let chi = t
        .cells()
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|(o, m)| (*o as f64 - m).powi(2) / m)
        .sum();
    let log_likelihood = 2.0
        * t.cells()
            .iter()
            .filter(|(o, _)| *o > 0)
            .map(|(o, m)| *o as f64 * (*o as f64 / m).ln())
            .sum::<f64>();

    let denom = t.n1p as f64 * t.n2p as f64 * t.np1 as f64 * t.np2 as f64;
    let phi = if denom > 0.0 {
        (n11 * t.n22 as f64 - t.n12 as f64 * t.n21 as f64).powi(2) / denom
    } else {
        0.0
    };

    let (pmi, t_score, poisson_stirling, salience) = if t.n11 == 0 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let pmi = (n11 / t.m11).log2();
        (
            pmi,
            (n11 - t.m11) / n11.sqrt(),
            n11 * ((n11 / t.m11).ln() - 1.0),
            pmi * (n11 + 1.0).log2(),
        )
    };

    Ok(TableScores {
        phi,
        pmi,
        salience,
        log_likelihood,
        poisson_stirling,
        chi,
        t_score,
    })
}

fn check_overlap(f1: u64, f2: u64, f12: u64) -> Result<()> {
    if f12 > f1 || f12 > f2 {
        return Err(Error::invalid(format!(
            "joint count {f12} exceeds a unigram count ({f1}, {f2})"
        )));
    }
    Ok(())
}

/// Jaccard overlap of the occurrence sets, `f12 / (f1 + f2 - f12)`.
pub fn cooccurrence(f1: u64, f2: u64, f12: u64) -> Result<f64> {
    check_overlap(f1, f2, f12)?;
    let denom = f1 + f2 - f12;
    Ok(if denom == 0 { 0.0 } else { f12 as f64 / denom as f64 })
}

/// Cosine of the occurrence indicator vectors, `f12 / sqrt(f1 * f2)`.
pub fn significance(f1: u64, f2: u64, f12: u64) -> Result<f64> {
    check_overlap(f1, f2, f12)?;
    if f1 == 0 || f2 == 0 {
        return Err(Error::invalid("significance needs both unigram counts >= 1"));
    }
    Ok(f12 as f64 / (f1 as f64 * f2 as f64).sqrt())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AssociationScores {
    pub phi: f64,
    pub pmi: f64,
    pub salience: f64,
    pub log_likelihood: f64,
    pub poisson_stirling: f64,
    pub chi: f64,
    pub t_score: f64,
    pub cooccurrence: f64,
    pub significance: f64,
}

impl AssociationScores {
    pub fn new(table: TableScores, cooccurrence: f64, significance: f64) -> AssociationScores {
        AssociationScores {
            phi: table.phi,
            pmi: table.pmi,
            salience: table.salience,
            log_likelihood: table.log_likelihood,
            poisson_stirling: table.poisson_stirling,
            chi: table.chi,
            t_score: table.t_score,
            cooccurrence,
            significance,
        }
    }

    /// Scores a stemmed pair against corpus counts. Pairs whose stems never
    /// start/end a bigram in the corpus score all zeros.
    pub fn for_pair(counts: &CorpusCounts, w1: &str, w2: &str) -> Result<AssociationScores> {
        let table = contingency(counts, w1, w2)?;
        let table_scores = if table.n1p == 0 || table.np1 == 0 {
            TableScores::default()
        } else {
            score_bigram(&table)?
        };
        let (f1, f2) = (counts.unigram(w1), counts.unigram(w2));
        // Bigram counts can only exceed unigram counts for inconsistent dumps.
        let f12 = table.n11.min(f1).min(f2);
        let significance = if f1 == 0 || f2 == 0 {
            0.0
        } else {
            significance(f1, f2, f12)?
        };
        Ok(AssociationScores::new(
            table_scores,
            cooccurrence(f1, f2, f12)?,
            significance,
        ))
    }

    /// Scores in feature-slot order.
    pub fn to_array(&self) -> [f64; 9] {
        [
            self.phi,
            self.pmi,
            self.salience,
            self.log_likelihood,
            self.poisson_stirling,
            self.chi,
            self.t_score,
            self.cooccurrence,
            self.significance,
        ]
    }
}
