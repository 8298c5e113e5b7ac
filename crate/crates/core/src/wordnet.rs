//! Noun WordNet graph, bilingual dictionary and five pairwise similarity measures.
//!
//! The graph is read from the standard `index.noun` / `data.noun` files. Only
//! hypernym pointers (`@` and `@i`) are kept. Synsets without hypernyms hang off
//! a virtual root, which has depth 1.
//!
//! For two words every measure is the maximum over all pairs of their synsets:
//!
//! * `path`: inverse of the number of nodes on the shortest hypernym path
//!   between the synsets (both endpoints counted).
//! * `wup`: `2 * depth(lcs) / (depth(s1) + depth(s2))`, where the depth of a
//!   synset is the number of nodes on its longest hypernym chain to the root and
//!   the lcs is the deepest common subsumer.
//! * `lin`: `2 * IC(lcs) / (IC(s1) + IC(s2))` with the most informative common
//!   subsumer, `IC(s) = -ln(freq(s) / freq(root))`.
//! * `vector`: cosine of the bag-of-words gloss vectors.
//! * `vector_pairs`: mean of the gloss cosine and the cosine of the
//!   hypernym glosses.
//!
//! The gloss measures are first-order: they compare gloss words directly.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::stemmer::Stemmer;
use crate::{nfc, parse_word_list, read_text, Error, Result};

pub const DEFAULT_STOPWORDS: &str = include_str!("../resources/stopwords_en.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synset {
    pub offset: u64,
    pub lemmas: Vec<String>,
    pub hypernyms: Vec<u64>,
    pub gloss: String,
}

/// Node id inside the graph; the virtual root is `synsets.len()`.
type Node = usize;

#[derive(Clone, Debug)]
pub struct WordNetGraph {
    synsets: Vec<Synset>,
    by_offset: HashMap<u64, Node>,
    lemma_index: BTreeMap<String, Vec<u64>>,
    parents: Vec<Vec<Node>>,
    depth: Vec<usize>,
}

/// Lemma lookup form: lowercase with underscores for spaces.
pub fn lemma_key(word: &str) -> String {
    word.trim().to_lowercase().split_whitespace().collect::<Vec<_>>().join("_")
}

impl WordNetGraph {
    pub fn load(index_path: &Path, data_path: &Path) -> Result<WordNetGraph> {
        let data = read_text(data_path)?;
        let index = read_text(index_path)?;
        WordNetGraph::parse(
            &index,
            &data,
            &index_path.display().to_string(),
            &data_path.display().to_string(),
        )
    }

    pub fn parse(index_text: &str, data_text: &str, index_origin: &str, data_origin: &str) -> Result<WordNetGraph> {
        let mut synsets = Vec::new();
        for (i, line) in data_text.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            synsets.push(parse_data_line(line).map_err(|m| Error::parse(data_origin, i + 1, m))?);
        }
        let mut by_offset = HashMap::new();
        for (node, s) in synsets.iter().enumerate() {
            if by_offset.insert(s.offset, node).is_some() {
                return Err(Error::invalid(format!("{data_origin}: duplicate synset offset {}", s.offset)));
            }
        }
        let mut parents = Vec::with_capacity(synsets.len());
        for s in &synsets {
            let mut ps = Vec::new();
            for h in &s.hypernyms {
                let p = *by_offset.get(h).ok_or_else(|| {
                    Error::invalid(format!("{data_origin}: synset {} has dangling hypernym {h}", s.offset))
                })?;
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
            parents.push(ps);
        }

        let mut lemma_index: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for (i, line) in index_text.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            let (lemma, offsets) = parse_index_line(line).map_err(|m| Error::parse(index_origin, i + 1, m))?;
            for off in &offsets {
                if !by_offset.contains_key(off) {
                    return Err(Error::parse(index_origin, i + 1, format!("unknown synset offset {off}")));
                }
            }
            lemma_index.entry(lemma).or_default().extend(offsets);
        }

        let depth = longest_depths(&parents)?;
        Ok(WordNetGraph {
            synsets,
            by_offset,
            lemma_index,
            parents,
            depth,
        })
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, offset: u64) -> Option<&Synset> {
        self.by_offset.get(&offset).map(|n| &self.synsets[*n])
    }

    /// Offsets of the senses of `word`, in index order.
    pub fn senses(&self, word: &str) -> &[u64] {
        self.lemma_index
            .get(&lemma_key(word))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    fn root(&self) -> Node {
        self.synsets.len()
    }

    fn parents_of(&self, node: Node) -> &[Node] {
        if node == self.root() {
            &[]
        } else {
            &self.parents[node]
        }
    }

    fn depth_of(&self, node: Node) -> usize {
        if node == self.root() {
            1
        } else {
            self.depth[node]
        }
    }

    /// Depth of a synset; the virtual root has depth 1.
    pub fn depth(&self, offset: u64) -> Option<usize> {
        self.by_offset.get(&offset).map(|n| self.depth[*n])
    }

    /// All ancestors of `node` including itself and the root, with the
    /// shortest upward distance to each.
    fn ancestors(&self, node: Node) -> HashMap<Node, usize> {
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(node, 0);
        queue.push_back(node);
        while let Some(n) = queue.pop_front() {
            let d = dist[&n];
            let ps = self.parents_of(n);
            if ps.is_empty() && n != self.root() {
                dist.entry(self.root()).or_insert_with(|| {
                    queue.push_back(self.root());
                    d + 1
                });
            }
            for &p in ps {
                dist.entry(p).or_insert_with(|| {
                    queue.push_back(p);
                    d + 1
                });
            }
        }
        dist
    }
}

fn parse_data_line(line: &str) -> std::result::Result<Synset, String> {
    let (head, gloss) = match line.split_once('|') {
        Some((h, g)) => (h, g.trim()),
        None => (line, ""),
    };
    let f: Vec<&str> = head.split_whitespace().collect();
    let get = |i: usize| f.get(i).copied().ok_or_else(|| "truncated synset line".to_string());
    let offset: u64 = get(0)?.parse().map_err(|_| format!("bad offset `{}`", f[0]))?;
    let w_cnt = usize::from_str_radix(get(3)?, 16).map_err(|_| "bad word count".to_string())?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for k in 0..w_cnt {
        lemmas.push(nfc(&get(4 + 2 * k)?.to_lowercase()));
    }
    let p_pos = 4 + 2 * w_cnt;
    let p_cnt: usize = get(p_pos)?.parse().map_err(|_| "bad pointer count".to_string())?;
    let mut hypernyms = Vec::new();
    for k in 0..p_cnt {
        let base = p_pos + 1 + 4 * k;
        let symbol = get(base)?;
        let target: u64 = get(base + 1)?
            .parse()
            .map_err(|_| format!("bad pointer offset `{}`", f[base + 1]))?;
        let pos = get(base + 2)?;
        get(base + 3)?;
        if (symbol == "@" || symbol == "@i") && pos == "n" {
            hypernyms.push(target);
        }
    }
    Ok(Synset {
        offset,
        lemmas,
        hypernyms,
        gloss: gloss.to_string(),
    })
}

fn parse_index_line(line: &str) -> std::result::Result<(String, Vec<u64>), String> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() < 4 {
        return Err("truncated index line".into());
    }
    let synset_cnt: usize = f[2].parse().map_err(|_| "bad synset count".to_string())?;
    let p_cnt: usize = f[3].parse().map_err(|_| "bad pointer count".to_string())?;
    let first = 4 + p_cnt + 2;
    if f.len() != first + synset_cnt {
        return Err(format!(
            "expected {} fields, found {}",
            first + synset_cnt,
            f.len()
        ));
    }
    let offsets = f[first..]
        .iter()
        .map(|s| s.parse::<u64>().map_err(|_| format!("bad offset `{s}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((nfc(&f[0].to_lowercase()), offsets))
}

/// Longest-chain depths (root = 1, top-level synsets = 2). Fails on cycles.
fn longest_depths(parents: &[Vec<Node>]) -> Result<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        New,
        Active,
        Done,
    }
    let n = parents.len();
    let mut state = vec![State::New; n];
    let mut depth = vec![0usize; n];
    for start in 0..n {
        if state[start] == State::Done {
            continue;
        }
        // Iterative DFS; each frame holds the node and the next parent to visit.
        let mut stack = vec![(start, 0usize)];
        state[start] = State::Active;
        while let Some(top) = stack.last_mut() {
            let node = top.0;
            if let Some(&p) = parents[node].get(top.1) {
                top.1 += 1;
                match state[p] {
                    State::Active => {
                        return Err(Error::invalid(format!("hypernym cycle through synset #{p}")));
                    }
                    State::New => {
                        state[p] = State::Active;
                        stack.push((p, 0));
                    }
                    State::Done => {}
                }
            } else {
                depth[node] = 1 + parents[node].iter().map(|p| depth[*p]).max().unwrap_or(1);
                state[node] = State::Done;
                stack.pop();
            }
        }
    }
    Ok(depth)
}

/// Cumulative synset frequencies: each synset's own count plus those of all
/// its descendants (each descendant counted once).
#[derive(Clone, Debug)]
pub struct InformationContent {
    freq: Vec<f64>,
}

impl InformationContent {
    /// Every synset has own count 1.
    pub fn uniform(graph: &WordNetGraph) -> InformationContent {
        InformationContent::from_own_counts(graph, &vec![1.0; graph.len()])
    }

    /// `counts` maps offsets to own counts; unlisted synsets count 0.
    pub fn from_counts(graph: &WordNetGraph, counts: &BTreeMap<u64, f64>) -> Result<InformationContent> {
        let mut own = vec![0.0; graph.len()];
        for (off, c) in counts {
            let node = graph
                .by_offset
                .get(off)
                .ok_or_else(|| Error::invalid(format!("IC count for unknown synset {off}")))?;
            own[*node] = *c;
        }
        Ok(InformationContent::from_own_counts(graph, &own))
    }

    fn from_own_counts(graph: &WordNetGraph, own: &[f64]) -> InformationContent {
        let mut freq = vec![0.0; graph.len() + 1];
        for (node, c) in own.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            for anc in graph.ancestors(node).keys() {
                freq[*anc] += c;
            }
        }
        InformationContent { freq }
    }

    /// Parses `offset<TAB>count` lines (`#` comments allowed).
    pub fn parse(graph: &WordNetGraph, text: &str, origin: &str) -> Result<InformationContent> {
        let mut counts = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed = line.split_once('\t').and_then(|(o, c)| {
                let c: f64 = c.trim().parse().ok()?;
                (c.is_finite() && c >= 0.0).then_some((o.trim().parse::<u64>().ok()?, c))
            });
            let (off, c) = parsed.ok_or_else(|| Error::parse(origin, i + 1, "expected offset<TAB>count"))?;
            *counts.entry(off).or_insert(0.0) += c;
        }
        InformationContent::from_counts(graph, &counts)
    }

    pub fn load(graph: &WordNetGraph, path: &Path) -> Result<InformationContent> {
        InformationContent::parse(graph, &read_text(path)?, &path.display().to_string())
    }

    /// `None` when the synset has zero frequency.
    fn ic(&self, node: Node) -> Option<f64> {
        let root = *self.freq.last().unwrap_or(&0.0);
        let f = self.freq.get(node).copied().unwrap_or(0.0);
        (f > 0.0 && root > 0.0).then(|| -(f / root).ln())
    }
}

/// `source<TAB>target1,target2,...`; the first target is the translation used.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BilingualDictionary {
    entries: BTreeMap<String, Vec<String>>,
}

impl BilingualDictionary {
    pub fn parse(text: &str, origin: &str) -> Result<BilingualDictionary> {
        let mut entries: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (src, targets) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected source<TAB>targets"))?;
            let src = nfc(src.trim());
            let targets: Vec<String> = targets
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(nfc)
                .collect();
            if src.is_empty() || targets.is_empty() {
                return Err(Error::parse(origin, i + 1, "empty source or target list"));
            }
            entries.entry(src).or_default().extend(targets);
        }
        Ok(BilingualDictionary { entries })
    }

    pub fn load(path: &Path) -> Result<BilingualDictionary> {
        BilingualDictionary::parse(&read_text(path)?, &path.display().to_string())
    }

    pub fn lookup(&self, word: &str) -> Option<&[String]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn headwords(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// First translation of `word`, retrying with its stem when the surface form
/// has no entry.
pub fn translate<'d>(word: &str, dict: &'d BilingualDictionary, stemmer: &Stemmer) -> Option<&'d str> {
    dict.lookup(word)
        .or_else(|| dict.lookup(&stemmer.stem_str(word)))
        .and_then(|ts| ts.first())
        .map(String::as_str)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WnSimilarityScores {
    pub lin: f64,
    pub wup: f64,
    pub path: f64,
    pub vector: f64,
    pub vector_pairs: f64,
    pub missing: bool,
}

impl WnSimilarityScores {
    pub fn missing() -> WnSimilarityScores {
        WnSimilarityScores {
            missing: true,
            ..WnSimilarityScores::default()
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.lin, self.wup, self.path, self.vector, self.vector_pairs]
    }
}

type Bag = BTreeMap<String, f64>;

fn bag_of_words(text: &str, stopwords: &BTreeSet<String>) -> Bag {
    let mut bag = Bag::new();
    for w in text
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty() && !stopwords.contains(*w))
    {
        *bag.entry(w.to_string()).or_insert(0.0) += 1.0;
    }
    bag
}

/// Cosine of two bags. The dot product walks the shared keys in sorted order,
/// so `cosine(a, b) == cosine(b, a)` bit for bit.
fn cosine(a: &Bag, b: &Bag) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let dot: f64 = a
        .iter()
        .filter_map(|(k, x)| b.get(k).map(|y| x * y))
        .sum();
    let na = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.values().map(|x| x * x).sum::<f64>().sqrt();
    // Clamp rounding overshoot on identical bags.
    (dot / (na * nb)).min(1.0)
}

/// A loaded graph with its information content and gloss stopwords.
#[derive(Clone, Debug)]
pub struct WordNet {
    pub graph: WordNetGraph,
    pub ic: InformationContent,
    pub stopwords: BTreeSet<String>,
}

impl WordNet {
    /// Uniform information content and the bundled stopword list.
    pub fn new(graph: WordNetGraph) -> WordNet {
        let ic = InformationContent::uniform(&graph);
        WordNet {
            graph,
            ic,
            stopwords: parse_word_list(DEFAULT_STOPWORDS),
        }
    }

    pub fn with_ic(mut self, ic: InformationContent) -> WordNet {
        self.ic = ic;
        self
    }

    fn gloss_bag(&self, node: Node) -> Bag {
        if node == self.graph.root() {
            return Bag::new();
        }
        bag_of_words(&self.graph.synsets[node].gloss, &self.stopwords)
    }

    fn hypernym_bag(&self, node: Node) -> Bag {
        let text: Vec<&str> = self
            .graph
            .parents_of(node)
            .iter()
            .map(|p| self.graph.synsets[*p].gloss.as_str())
            .collect();
        bag_of_words(&text.join(" "), &self.stopwords)
    }

    fn synset_pair(&self, s1: Node, s2: Node) -> [f64; 5] {
        let g = &self.graph;
        let (a1, a2) = (g.ancestors(s1), g.ancestors(s2));
        let mut shortest = usize::MAX;
        let mut deepest = 0usize;
        let mut best_ic = 0.0f64;
        for (node, d1) in &a1 {
            if let Some(d2) = a2.get(node) {
                shortest = shortest.min(d1 + d2);
                deepest = deepest.max(g.depth_of(*node));
                best_ic = best_ic.max(self.ic.ic(*node).unwrap_or(0.0));
            }
        }
        // The root is common to every pair.
        let path = 1.0 / (shortest + 1) as f64;
        let wup = 2.0 * deepest as f64 / (g.depth_of(s1) + g.depth_of(s2)) as f64;
        let lin = match (self.ic.ic(s1), self.ic.ic(s2)) {
            (Some(i1), Some(i2)) if i1 > 0.0 && i2 > 0.0 => (2.0 * best_ic / (i1 + i2)).min(1.0),
            _ => 0.0,
        };
        let vector = cosine(&self.gloss_bag(s1), &self.gloss_bag(s2));
        let hyper = cosine(&self.hypernym_bag(s1), &self.hypernym_bag(s2));
        [lin, wup, path, vector, (vector + hyper) / 2.0]
    }

    /// Similarity of two English words. A word with no synsets yields flagged zeros.
    pub fn similarity(&self, w1: &str, w2: &str) -> WnSimilarityScores {
        let nodes = |w: &str| -> Vec<Node> {
            self.graph
                .senses(w)
                .iter()
                .map(|o| self.graph.by_offset[o])
                .collect()
        };
        let (n1, n2) = (nodes(w1), nodes(w2));
        if n1.is_empty() || n2.is_empty() {
            return WnSimilarityScores::missing();
        }
        let mut best = [0.0f64; 5];
        for &s1 in &n1 {
            for &s2 in &n2 {
                let scores = self.synset_pair(s1, s2);
                for (b, s) in best.iter_mut().zip(scores) {
                    *b = b.max(s);
                }
            }
        }
        WnSimilarityScores {
            lin: best[0],
            wup: best[1],
            path: best[2],
            vector: best[3],
            vector_pairs: best[4],
            missing: false,
        }
    }
}
