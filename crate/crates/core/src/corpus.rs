//! Raw documents, sentence segmentation and the chunked sentence format.
//!
//! Chunk files are a three-column TSV, one token per line: surface, POS tag,
//! chunk label (`B-NP`, `I-NP` or `O`), for example `rAjya NN B-NP` with tabs.
//!
//! Sentences are separated by blank lines. Only `NN`, `NNP` and `XC` survive
//! as POS tags, everything else becomes [`PosTag::Other`].

use std::fmt;
use std::ops::Range;
use std::path::Path;

use crate::{nfc, read_text, Error, Result};

/// Dari (U+0964), the Bengali full stop.
pub const DARI: char = '\u{0964}';

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub source_doc: String,
    pub index: usize,
}

impl Sentence {
    /// Tokenizes `text` into a sentence. Returns `None` if there are no tokens.
    pub fn from_text(text: &str, source_doc: &str, index: usize) -> Option<Sentence> {
        let tokens = tokenize(text);
        if tokens.is_empty() {
            return None;
        }
        Some(Sentence {
            tokens,
            source_doc: source_doc.to_string(),
            index,
        })
    }
}

fn is_delimiter(c: char) -> bool {
    c == DARI || c == '?' || c == '!'
}

/// Splits text on Dari, `?` and `!`. Delimiters are dropped, segments trimmed,
/// empty segments discarded.
pub fn segment_sentences(text: &str) -> Vec<String> {
    text.split(is_delimiter)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence.split_whitespace().map(str::to_string).collect()
}

/// Segments and tokenizes one document.
pub fn document_sentences(doc: &Document) -> Vec<Sentence> {
    segment_sentences(&doc.text)
        .iter()
        .enumerate()
        .filter_map(|(i, s)| Sentence::from_text(s, &doc.id, i))
        .collect()
}

/// Loads every `*.txt` file of a directory, sorted by document id (the file stem).
/// Files that are empty after trimming are skipped.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<Document>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut docs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") || !path.is_file() {
            continue;
        }
        let id = match path.file_stem().and_then(|s| s.to_str()) {
            Some(stem) => stem.to_string(),
            None => continue,
        };
        let text = read_text(&path)?;
        if text.trim().is_empty() {
            log::warn!("skipping empty document {}", path.display());
            continue;
        }
        docs.push(Document { id, text });
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

/// Writes sentences in the sentence-file format: a `## doc:<id>` line before each
/// document, then one sentence per line with space-separated tokens.
pub fn write_sentence_file(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    let mut current: Option<&str> = None;
    for s in sentences {
        if current != Some(s.source_doc.as_str()) {
            out.push_str("## doc:");
            out.push_str(&s.source_doc);
            out.push('\n');
            current = Some(&s.source_doc);
        }
        out.push_str(&s.tokens.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the sentence-file format. Lines before any `## doc:` marker belong to
/// document `""`; blank lines are ignored.
pub fn parse_sentence_file(text: &str) -> Vec<Sentence> {
    let mut doc = String::new();
    let mut index = 0;
    let mut out = Vec::new();
    for line in text.lines() {
        if let Some(id) = line.strip_prefix("## doc:") {
            doc = id.trim().to_string();
            index = 0;
            continue;
        }
        if let Some(s) = Sentence::from_text(&nfc(line), &doc, index) {
            out.push(s);
            index += 1;
        }
    }
    out
}

pub fn load_sentence_file(path: &Path) -> Result<Vec<Sentence>> {
    Ok(parse_sentence_file(&read_text(path)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosTag {
    Nn,
    Nnp,
    Xc,
    Other,
}

impl PosTag {
    pub fn parse(s: &str) -> PosTag {
        match s {
            "NN" => PosTag::Nn,
            "NNP" => PosTag::Nnp,
            "XC" => PosTag::Xc,
            _ => PosTag::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Nn => "NN",
            PosTag::Nnp => "NNP",
            PosTag::Xc => "XC",
            PosTag::Other => "OTHER",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChunkLabel {
    BeginNp,
    InsideNp,
    Outside,
}

impl ChunkLabel {
    pub fn parse(s: &str) -> Option<ChunkLabel> {
        match s {
            "B-NP" => Some(ChunkLabel::BeginNp),
            "I-NP" => Some(ChunkLabel::InsideNp),
            "O" => Some(ChunkLabel::Outside),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ChunkLabel::BeginNp => "B-NP",
            ChunkLabel::InsideNp => "I-NP",
            ChunkLabel::Outside => "O",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkedToken {
    pub surface: String,
    pub pos_tag: PosTag,
    pub chunk_label: ChunkLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkedSentence {
    pub tokens: Vec<ChunkedToken>,
    /// 0-based sentence position within the chunk file.
    pub source: usize,
}

impl ChunkedSentence {
    /// Validates the BIO sequence: `I-NP` may only continue an NP.
    pub fn new(tokens: Vec<ChunkedToken>, source: usize) -> Result<ChunkedSentence> {
        let mut prev = ChunkLabel::Outside;
        for (i, t) in tokens.iter().enumerate() {
            if t.chunk_label == ChunkLabel::InsideNp && prev == ChunkLabel::Outside {
                return Err(Error::invalid(format!(
                    "token {} `{}`: I-NP without a preceding NP label",
                    i, t.surface
                )));
            }
            prev = t.chunk_label;
        }
        Ok(ChunkedSentence { tokens, source })
    }

    /// Token ranges of the chunks. Every token belongs to exactly one range:
    /// an NP chunk (`B-NP I-NP*`) or a single `O` token.
    pub fn chunks(&self) -> Vec<Range<usize>> {
        let mut out: Vec<Range<usize>> = Vec::new();
        for (i, t) in self.tokens.iter().enumerate() {
            match t.chunk_label {
                ChunkLabel::InsideNp if !out.is_empty() => out.last_mut().unwrap().end = i + 1,
                _ => out.push(i..i + 1),
            }
        }
        out
    }

    /// Ranges of the NP chunks only.
    pub fn np_chunks(&self) -> Vec<Range<usize>> {
        self.chunks()
            .into_iter()
            .filter(|r| self.tokens[r.start].chunk_label != ChunkLabel::Outside)
            .collect()
    }

    pub fn surfaces(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.surface.clone()).collect()
    }
}

impl fmt::Display for ChunkedSentence {
    /// Chunk-file lines for this sentence, without the separating blank line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tokens {
            writeln!(
                f,
                "{}\t{}\t{}",
                t.surface,
                t.pos_tag.as_str(),
                t.chunk_label.as_str()
            )?;
        }
        Ok(())
    }
}

pub fn write_chunk_file(sentences: &[ChunkedSentence]) -> String {
    sentences
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses chunk-file text. `origin` names the source in error messages.
pub fn parse_chunks(text: &str, origin: &str) -> Result<Vec<ChunkedSentence>> {
    let mut sentences = Vec::new();
    let mut tokens: Vec<ChunkedToken> = Vec::new();
    let mut prev = ChunkLabel::Outside;

    for (lineno, raw) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !tokens.is_empty() {
                let idx = sentences.len();
                sentences.push(ChunkedSentence {
                    tokens: std::mem::take(&mut tokens),
                    source: idx,
                });
            }
            prev = ChunkLabel::Outside;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                origin,
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let surface = fields[0].trim();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(Error::parse(origin, lineno, "empty or space-containing surface"));
        }
        let chunk_label = ChunkLabel::parse(fields[2].trim()).ok_or_else(|| {
            Error::parse(origin, lineno, format!("unknown chunk label `{}`", fields[2]))
        })?;
        if chunk_label == ChunkLabel::InsideNp && prev == ChunkLabel::Outside {
            return Err(Error::parse(origin, lineno, "I-NP without a preceding NP label"));
        }
        prev = chunk_label;
        tokens.push(ChunkedToken {
            surface: nfc(surface),
            pos_tag: PosTag::parse(fields[1].trim()),
            chunk_label,
        });
    }
    if !tokens.is_empty() {
        let idx = sentences.len();
        sentences.push(ChunkedSentence { tokens, source: idx });
    }
    Ok(sentences)
}

pub fn parse_chunk_file(path: &Path) -> Result<Vec<ChunkedSentence>> {
    let text = read_text(path)?;
    parse_chunks(&text, &path.display().to_string())
}
