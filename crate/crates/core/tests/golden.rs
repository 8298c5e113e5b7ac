//! Golden-file tests on the shipped fixtures.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use mwe_core::candidates::{parse_candidate_tsv, write_candidate_tsv};
use mwe_core::corpus::{load_sentence_file, parse_chunk_file};
use mwe_core::features::{parse_matrix, write_matrix, SLOT_NAMES};
use mwe_core::pipeline::{corpus_counts, extract_candidates, featurize_all, label_all, PipelineConfig, Resources};
use mwe_core::read_text;
use mwe_core::wordnet::{BilingualDictionary, InformationContent, WordNet, WordNetGraph};

fn testdata(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata").join(rel)
}

fn golden_rows() -> (Resources, Vec<(mwe_core::candidates::Candidate, Option<mwe_core::candidates::Label>)>) {
    let cfg = PipelineConfig::load(&testdata("golden/config.json")).unwrap();
    let res = Resources::load(&cfg.paths).unwrap();
    let chunks = parse_chunk_file(cfg.paths.chunk_file.as_ref().unwrap()).unwrap();
    let sentences = load_sentence_file(cfg.paths.sentence_file.as_ref().unwrap()).unwrap();
    let cands = extract_candidates(&res.extractor(), &chunks, &sentences);
    let rows = label_all(cands, res.gold.as_ref());
    (res, rows)
}

#[test]
fn candidate_tsv_matches_hand_enumeration() {
    let (_, rows) = golden_rows();
    let expected = read_text(&testdata("golden/expected_candidates.tsv")).unwrap();
    assert_eq!(write_candidate_tsv(&rows), expected);
    let parsed = parse_candidate_tsv(&expected, "expected").unwrap();
    assert_eq!(parsed, rows);
}

#[test]
fn feature_matrix_matches_oracle() {
    let cfg = PipelineConfig::load(&testdata("golden/config.json")).unwrap();
    let (res, rows) = golden_rows();
    let sentences = load_sentence_file(cfg.paths.sentence_file.as_ref().unwrap()).unwrap();
    let featurizer = res.featurizer(corpus_counts(&sentences, &res.stemmer));
    let ours = featurize_all(&featurizer, &rows).unwrap();
    let oracle = parse_matrix(&read_text(&testdata("golden/expected_features.tsv")).unwrap(), "oracle").unwrap();
    assert_eq!(ours.len(), oracle.len());
    for (a, b) in ours.iter().zip(&oracle) {
        assert_eq!(a.key, b.key);
        assert_eq!(a.label, b.label);
        for ((name, x), y) in SLOT_NAMES.iter().zip(&a.values).zip(&b.values) {
            assert!((x - y).abs() <= 1e-9, "{} {}: slot {name} ours {x} oracle {y}", a.key.0, a.key.1);
        }
    }
    assert_eq!(parse_matrix(&write_matrix(&ours), "ours").unwrap(), ours);
}

fn toy_wordnet() -> WordNet {
    let graph = WordNetGraph::load(&testdata("wordnet/index.noun"), &testdata("wordnet/data.noun")).unwrap();
    let ic = InformationContent::load(&graph, &testdata("wordnet/ic.txt")).unwrap();
    WordNet::new(graph).with_ic(ic)
}

#[test]
fn toy_wordnet_measures() {
    let wn = toy_wordnet();
    assert_eq!(wn.graph.len(), 8);
    assert_eq!(wn.similarity("house", "house").path, 1.0);
    assert_eq!(wn.similarity("house", "place").path, 0.5);
    assert!((wn.similarity("person", "place").wup - 2.0 / 3.0).abs() < 1e-12);
    // Synonyms share a synset.
    let s = wn.similarity("person", "individual");
    assert_eq!((s.path, s.wup, s.lin), (1.0, 1.0, 1.0));
    // "bank" has a sense under place; the best pair is used.
    assert_eq!(wn.similarity("bank", "house").path, 1.0 / 3.0);
    assert!(wn.similarity("house", "unicorn").missing);
}

#[test]
fn dictionary_fixture() {
    let d = BilingualDictionary::load(&testdata("wordnet/dictionary.tsv")).unwrap();
    assert_eq!(d.lookup("bAri").unwrap(), ["house", "home"]);
    let heads: BTreeSet<&str> = d.headwords().collect();
    assert!(heads.contains("mAnuSh") && heads.contains("pradhAn"));
}

#[test]
fn corpus_fixture_runs_end_to_end() {
    let cfg = PipelineConfig::load(&testdata("corpus/config.json")).unwrap();
    let res = Resources::load(&cfg.paths).unwrap();
    let docs = mwe_core::corpus::load_corpus_dir(cfg.paths.corpus_dir.as_ref().unwrap()).unwrap();
    assert_eq!(docs.len(), 24);
    let sentences = mwe_core::pipeline::segment_documents(&docs);
    let chunks = parse_chunk_file(cfg.paths.chunk_file.as_ref().unwrap()).unwrap();
    assert_eq!(chunks.len(), sentences.len());
    let rows = label_all(extract_candidates(&res.extractor(), &chunks, &sentences), res.gold.as_ref());
    let positives = rows.iter().filter(|(_, l)| l.unwrap().is_positive()).count();
    assert!(positives >= 15 && rows.len() - positives >= 50, "{positives} of {}", rows.len());
    let fv = featurize_all(&res.featurizer(corpus_counts(&sentences, &res.stemmer)), &rows).unwrap();
    // Some WordNet slots must be populated.
    assert!(fv.iter().any(|v| v.values[10] > 0.0));
}
