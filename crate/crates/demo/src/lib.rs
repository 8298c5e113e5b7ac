//! Browser bindings. Every export takes plain values and returns a JSON string:
//! the result on success, `{"error": "..."}` otherwise.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use mwe_core::assoc::{cooccurrence, score_bigram, significance, AssociationScores, ContingencyTable};
use mwe_core::candidates::{Extractor, Label};
use mwe_core::corpus::{document_sentences, parse_chunks, Document};
use mwe_core::features::{FeatureMask, FeatureVector, NUM_FEATURES, SLOT_NAMES};
use mwe_core::forest::{Forest, TrainConfig};
use mwe_core::pipeline::extract_candidates;
use mwe_core::stemmer::{Stemmer, SuffixList};
use mwe_core::parse_word_list;

/// Slots with continuous values, the ones offered as surface axes.
pub const CONTINUOUS_SLOTS: usize = 15;
const MAX_RESOLUTION: u32 = 100;
const MAX_TREES: u32 = 200;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Names of the slots usable as surface axes.
#[wasm_bindgen]
pub fn axis_slots() -> String {
    json!(SLOT_NAMES[..CONTINUOUS_SLOTS]).to_string()
}

/// All nine association measures for the table with joint count `n11`,
/// marginals `n1p` and `np1`, and `n` bigrams in total.
#[wasm_bindgen]
pub fn score_table(n11: u32, n1p: u32, np1: u32, n: u32) -> String {
    respond(score(n11.into(), n1p.into(), np1.into(), n.into()))
}

fn score(n11: u64, n1p: u64, np1: u64, n: u64) -> Result<Value, String> {
    let table = ContingencyTable::from_marginals(n11, n1p, np1, n).map_err(|e| e.to_string())?;
    let scores = AssociationScores::new(
        score_bigram(&table).map_err(|e| e.to_string())?,
        cooccurrence(n1p, np1, n11).map_err(|e| e.to_string())?,
        significance(n1p, np1, n11).map_err(|e| e.to_string())?,
    );
    Ok(json!({ "table": table, "scores": scores }))
}

/// Candidate extraction from chunk-file text and raw running text. The word
/// lists are newline-separated; an empty lexicon turns the OOV rule off.
#[wasm_bindgen]
pub fn extract(chunk_text: &str, raw_text: &str, suffixes: &str, numbers: &str, lexicon: &str) -> String {
    respond(extract_inner(chunk_text, raw_text, suffixes, numbers, lexicon))
}

fn extract_inner(chunk_text: &str, raw_text: &str, suffixes: &str, numbers: &str, lexicon: &str) -> Result<Value, String> {
    let chunks = parse_chunks(chunk_text, "chunks").map_err(|e| e.to_string())?;
    let sentences = document_sentences(&Document {
        id: "input".into(),
        text: raw_text.to_string(),
    });
    let lexicon = parse_word_list(lexicon);
    let extractor = Extractor {
        stemmer: Stemmer::new(SuffixList::new(parse_word_list(suffixes))),
        numbers: parse_word_list(numbers),
        vocab: (!lexicon.is_empty()).then_some(lexicon),
    };
    let rows: Vec<Value> = extract_candidates(&extractor, &chunks, &sentences)
        .iter()
        .map(|c| {
            json!({
                "w1": c.w1,
                "w2": c.w2,
                "stem1": c.stem1,
                "stem2": c.stem2,
                "occurrences": c.occurrences,
                "flags": c.flags.to_string(),
                "tag1": c.tag1.map_or("NA", |t| t.as_str()),
                "tag2": c.tag2.map_or("NA", |t| t.as_str()),
            })
        })
        .collect();
    Ok(json!({ "sentences": sentences.len(), "candidates": rows }))
}

/// Trains a forest on labeled points over two slots and samples its positive
/// vote fraction on a `resolution` x `resolution` grid over the unit square.
/// `points_json` is `[{"x": .., "y": .., "positive": bool}, ..]`. Grid rows run
/// from y = 0 upwards.
#[wasm_bindgen]
pub fn decision_surface(points_json: &str, x_slot: u32, y_slot: u32, trees: u32, seed: u32, resolution: u32) -> String {
    respond(surface(points_json, x_slot as usize, y_slot as usize, trees, seed, resolution))
}

#[derive(serde::Deserialize)]
struct Point {
    x: f64,
    y: f64,
    positive: bool,
}

fn vector(x_slot: usize, y_slot: usize, x: f64, y: f64) -> [f64; NUM_FEATURES] {
    let mut v = [0.0; NUM_FEATURES];
    // Both words tagged NN.
    v[23] = 1.0;
    v[26] = 1.0;
    v[x_slot] = x;
    v[y_slot] = y;
    v
}

fn surface(points_json: &str, x_slot: usize, y_slot: usize, trees: u32, seed: u32, resolution: u32) -> Result<Value, String> {
    let points: Vec<Point> = serde_json::from_str(points_json).map_err(|e| format!("points: {e}"))?;
    if x_slot == y_slot || x_slot >= CONTINUOUS_SLOTS || y_slot >= CONTINUOUS_SLOTS {
        return Err(format!("axes must be two different slots below {CONTINUOUS_SLOTS}"));
    }
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(format!("resolution must be in 2..={MAX_RESOLUTION}"));
    }
    if !(1..=MAX_TREES).contains(&trees) {
        return Err(format!("trees must be in 1..={MAX_TREES}"));
    }
    let data: Vec<FeatureVector> = points
        .iter()
        .enumerate()
        .map(|(i, p)| FeatureVector {
            values: vector(x_slot, y_slot, p.x, p.y),
            label: Some(Label::from_bool(p.positive)),
            key: (format!("p{i}"), String::new()),
        })
        .collect();
    let mask = FeatureMask::new("demo", vec![x_slot, y_slot]).map_err(|e| e.to_string())?;
    let config = TrainConfig {
        num_trees: trees as usize,
        seed: seed.into(),
        ..TrainConfig::default()
    };
    let forest = Forest::train(&data, &mask, &config).map_err(|e| e.to_string())?;
    let step = 1.0 / resolution as f64;
    let grid: Vec<Vec<f64>> = (0..resolution)
        .map(|row| {
            let y = (row as f64 + 0.5) * step;
            (0..resolution)
                .map(|col| forest.proba_values(&vector(x_slot, y_slot, (col as f64 + 0.5) * step, y)))
                .collect()
        })
        .collect();
    let training_errors = data
        .iter()
        .filter(|v| forest.predict_values(&v.values) != v.label.unwrap())
        .count();
    Ok(json!({
        "x": SLOT_NAMES[x_slot],
        "y": SLOT_NAMES[y_slot],
        "features_per_node": forest.header.features_per_node,
        "oob_error": forest.oob_error(),
        "oob_instances": forest.header.oob_instances,
        "training_errors": training_errors,
        "tree_depths": forest.trees.iter().map(|t| t.depth()).collect::<Vec<_>>(),
        "grid": grid,
    }))
}
