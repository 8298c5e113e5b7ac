//! Configuration file and stage wiring shared by the command line and tests.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::assoc::{build_counts, CorpusCounts};
use crate::candidates::{
    label_candidates, merge_candidates, split_edge_punct, Candidate, Extractor, GoldList, Label,
};
use crate::corpus::{document_sentences, ChunkedSentence, Document, Sentence};
use crate::eval::DEFAULT_FOLDS;
use crate::features::{FeatureVector, Featurizer, WordNetResources};
use crate::forest::TrainConfig;
use crate::stemmer::{Stemmer, SuffixList};
use crate::wordnet::{BilingualDictionary, InformationContent, WordNet, WordNetGraph};
use crate::{load_word_list, read_text, Error, Result};

/// Resource locations. Relative paths are resolved against the config file's directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub corpus_dir: Option<PathBuf>,
    pub chunk_file: Option<PathBuf>,
    pub sentence_file: Option<PathBuf>,
    pub gold_list: Option<PathBuf>,
    pub suffix_list: Option<PathBuf>,
    pub number_lexicon: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub wordnet_index: Option<PathBuf>,
    pub wordnet_data: Option<PathBuf>,
    pub ic_file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainDefaults {
    pub num_trees: usize,
    pub seed: u64,
    pub k: usize,
    pub features_per_node: Option<usize>,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

impl Default for TrainDefaults {
    fn default() -> TrainDefaults {
        let c = TrainConfig::default();
        TrainDefaults {
            num_trees: c.num_trees,
            seed: c.seed,
            k: DEFAULT_FOLDS,
            features_per_node: c.features_per_node,
            min_leaf: c.min_leaf,
            max_depth: c.max_depth,
        }
    }
}

impl TrainDefaults {
    pub fn forest_config(&self) -> TrainConfig {
        TrainConfig {
            num_trees: self.num_trees,
            features_per_node: self.features_per_node,
            seed: self.seed,
            min_leaf: self.min_leaf,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub train: TrainDefaults,
    pub preset: Option<String>,
}

impl PipelineConfig {
    pub fn parse(text: &str, base: &Path) -> Result<PipelineConfig> {
        let mut cfg: PipelineConfig =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
        cfg.paths.resolve(base);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let base = path.parent().unwrap_or(Path::new("."));
        PipelineConfig::parse(&read_text(path)?, base)
    }
}

impl Paths {
    fn fields_mut(&mut self) -> [&mut Option<PathBuf>; 11] {
        [
            &mut self.corpus_dir,
            &mut self.chunk_file,
            &mut self.sentence_file,
            &mut self.gold_list,
            &mut self.suffix_list,
            &mut self.number_lexicon,
            &mut self.dictionary,
            &mut self.lexicon,
            &mut self.wordnet_index,
            &mut self.wordnet_data,
            &mut self.ic_file,
        ]
    }

    pub fn resolve(&mut self, base: &Path) {
        for p in self.fields_mut().into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

/// Loaded lexical resources.
#[derive(Clone, Debug, Default)]
pub struct Resources {
    pub stemmer: Stemmer,
    pub numbers: BTreeSet<String>,
    pub dictionary: Option<BilingualDictionary>,
    /// Dictionary headwords plus the lexicon; `None` turns the OOV rule off.
    pub vocab: Option<BTreeSet<String>>,
    pub gold: Option<GoldList>,
    pub wordnet: Option<WordNet>,
}

impl Resources {
    pub fn load(paths: &Paths) -> Result<Resources> {
        let stemmer = match &paths.suffix_list {
            Some(p) => Stemmer::new(SuffixList::load(p)?),
            None => {
                log::warn!("no suffix list configured; words are not stemmed");
                Stemmer::default()
            }
        };
        let numbers = match &paths.number_lexicon {
            Some(p) => load_word_list(p)?,
            None => BTreeSet::new(),
        };
        let dictionary = paths.dictionary.as_deref().map(BilingualDictionary::load).transpose()?;
        let lexicon = paths.lexicon.as_deref().map(load_word_list).transpose()?;
        let vocab = match (&dictionary, lexicon) {
            (None, None) => {
                log::warn!("no dictionary or lexicon configured; the OOV rule is disabled");
                None
            }
            (d, l) => {
                let mut v = l.unwrap_or_default();
                if let Some(d) = d {
                    v.extend(d.headwords().map(str::to_string));
                }
                Some(v)
            }
        };
        let gold = paths.gold_list.as_deref().map(|p| GoldList::load(p, &stemmer)).transpose()?;
        let wordnet = match (&paths.wordnet_index, &paths.wordnet_data) {
            (Some(index), Some(data)) => {
                let graph = WordNetGraph::load(index, data)?;
                let ic = match &paths.ic_file {
                    Some(p) => InformationContent::load(&graph, p)?,
                    None => {
                        log::warn!("no information content file; lin uses uniform synset counts");
                        InformationContent::uniform(&graph)
                    }
                };
                Some(WordNet::new(graph).with_ic(ic))
            }
            _ => {
                log::warn!("WordNet files not configured; similarity features are zero");
                None
            }
        };
        Ok(Resources {
            stemmer,
            numbers,
            dictionary,
            vocab,
            gold,
            wordnet,
        })
    }

    pub fn extractor(&self) -> Extractor {
        Extractor {
            stemmer: self.stemmer.clone(),
            numbers: self.numbers.clone(),
            vocab: self.vocab.clone(),
        }
    }

    pub fn wordnet_resources(&self) -> Option<WordNetResources> {
        match (&self.wordnet, &self.dictionary) {
            (Some(wordnet), Some(dictionary)) => Some(WordNetResources {
                wordnet: wordnet.clone(),
                dictionary: dictionary.clone(),
            }),
            (Some(_), None) => {
                log::warn!("WordNet loaded without a bilingual dictionary; similarity features are zero");
                None
            }
            _ => None,
        }
    }

    pub fn featurizer(&self, counts: CorpusCounts) -> Featurizer {
        Featurizer {
            counts,
            stemmer: self.stemmer.clone(),
            wordnet: self.wordnet_resources(),
        }
    }
}

pub fn segment_documents(docs: &[Document]) -> Vec<Sentence> {
    docs.iter().flat_map(document_sentences).collect()
}

/// Runs both extractors and merges their output.
pub fn extract_candidates(extractor: &Extractor, chunks: &[ChunkedSentence], sentences: &[Sentence]) -> Vec<Candidate> {
    merge_candidates(
        extractor.extract_chunk_candidates(chunks),
        extractor.extract_heuristic_candidates(sentences),
    )
}

/// Labels against the gold list when one is given.
pub fn label_all(cands: Vec<Candidate>, gold: Option<&GoldList>) -> Vec<(Candidate, Option<Label>)> {
    match gold {
        Some(g) => label_candidates(cands, g)
            .into_iter()
            .map(|(c, l)| (c, Some(l)))
            .collect(),
        None => cands.into_iter().map(|c| (c, None)).collect(),
    }
}

/// Corpus counts over stemmed tokens. Edge punctuation is split off first,
/// as in the heuristic extractor, so `(nano` counts as `(` and `nano`.
pub fn corpus_counts(sentences: &[Sentence], stemmer: &Stemmer) -> CorpusCounts {
    let split: Vec<Sentence> = sentences
        .iter()
        .map(|s| Sentence {
            tokens: split_edge_punct(&s.tokens),
            source_doc: s.source_doc.clone(),
            index: s.index,
        })
        .collect();
    build_counts(&split, stemmer)
}

pub fn featurize_all(featurizer: &Featurizer, rows: &[(Candidate, Option<Label>)]) -> Result<Vec<FeatureVector>> {
    rows.iter().map(|(c, l)| featurizer.featurize(c, *l)).collect()
}
