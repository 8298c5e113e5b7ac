//! Random forest classifier: bootstrap-bagged binary trees grown with entropy
//! information gain over a random subset of the active features at each node.
//!
//! Trees are stored as flat node arrays. Node 0 is the root and every child
//! index is larger than its parent's, so routing always terminates.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::candidates::Label;
use crate::features::{layout_hash, layout_hash_of, FeatureMask, FeatureVector, NUM_FEATURES, SLOT_NAMES};
use crate::rng::{below, derived, StdRng, RNG_ID};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Splits must reduce entropy by more than this; smaller gains are rounding noise.
const MIN_GAIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub num_trees: usize,
    /// Features sampled per node. `None` means `floor(log2 M) + 1`.
    pub features_per_node: Option<usize>,
    pub seed: u64,
    pub min_leaf: usize,
    /// Number of split levels allowed below the root. `None` is unlimited.
    pub max_depth: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            num_trees: 10,
            features_per_node: None,
            seed: 1,
            min_leaf: 1,
            max_depth: None,
        }
    }
}

pub fn default_features_per_node(active: usize) -> usize {
    active.max(1).ilog2() as usize + 1
}

impl TrainConfig {
    pub fn resolve_k(&self, active: usize) -> Result<usize> {
        let k = self.features_per_node.unwrap_or_else(|| default_features_per_node(active).min(active));
        if k == 0 || k > active {
            return Err(Error::invalid(format!(
                "features_per_node must be in 1..={active}, got {k}"
            )));
        }
        Ok(k)
    }

    fn validate(&self) -> Result<()> {
        if self.num_trees == 0 {
            return Err(Error::invalid("num_trees must be at least 1"));
        }
        if self.min_leaf == 0 {
            return Err(Error::invalid("min_leaf must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub negative: u64,
    pub positive: u64,
}

impl ClassCounts {
    /// Majority class; a tie goes to negative.
    pub fn majority(&self) -> Label {
        Label::from_bool(self.positive > self.negative)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        class: Label,
        class_counts: ClassCounts,
    },
    /// Values `<= threshold` go to `left`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(class: Label) -> Tree {
        Tree {
            nodes: vec![Node::Leaf {
                class,
                class_counts: ClassCounts::default(),
            }],
        }
    }

    pub fn predict(&self, values: &[f64; NUM_FEATURES]) -> Label {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { class, .. } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if values[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::Split { left, right, .. } = n {
                depth[*left] = depth[i] + 1;
                depth[*right] = depth[i] + 1;
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    fn validate(&self, active: &[usize]) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::Model("empty tree".into()));
        }
        let mut seen = vec![false; self.nodes.len()];
        seen[0] = true;
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::Split {
                feature,
                threshold,
                left,
                right,
            } = n
            {
                if active.binary_search(feature).is_err() {
                    return Err(Error::Model(format!("split on inactive feature {feature}")));
                }
                if !threshold.is_finite() {
                    return Err(Error::Model("non-finite threshold".into()));
                }
                for c in [*left, *right] {
                    if c <= i || c >= self.nodes.len() || seen[c] {
                        return Err(Error::Model(format!("bad child index {c} at node {i}")));
                    }
                    seen[c] = true;
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Model("unreachable tree node".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelHeader {
    pub format_version: u32,
    pub rng_id: String,
    pub seed: u64,
    pub num_trees: usize,
    pub features_per_node: usize,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    pub feature_layout_hash: String,
    pub slot_names: Vec<String>,
    pub mask_name: String,
    pub active_features: Vec<usize>,
    pub oob_error: f64,
    /// Training instances that were out of bag for at least one tree.
    pub oob_instances: usize,
    pub training_instances: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Forest {
    pub header: ModelHeader,
    pub trees: Vec<Tree>,
}

#[derive(Serialize)]
struct Body<'a> {
    header: &'a ModelHeader,
    trees: &'a [Tree],
}

#[derive(Serialize)]
struct ModelFileOut<'a> {
    header: &'a ModelHeader,
    trees: &'a [Tree],
    checksum: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFileIn {
    header: ModelHeader,
    trees: Vec<Tree>,
    checksum: String,
}

#[derive(Deserialize)]
struct VersionProbe {
    header: VersionOnly,
}

#[derive(Deserialize)]
struct VersionOnly {
    format_version: u32,
}

fn checksum(header: &ModelHeader, trees: &[Tree]) -> Result<String> {
    let bytes = serde_json::to_vec(&Body { header, trees })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn current_layout() -> &'static str {
    static HASH: OnceLock<String> = OnceLock::new();
    HASH.get_or_init(layout_hash)
}

fn entropy(pos: usize, n: usize) -> f64 {
    if pos == 0 || pos == n {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    let q = 1.0 - p;
    -(p * p.log2() + q * q.log2())
}

/// A point strictly between `lo` and `hi` when one exists, else `lo`, so that
/// `lo <= t < hi` always holds.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo / 2.0 + hi / 2.0;
    if m >= lo && m < hi {
        m
    } else {
        lo
    }
}

struct Grower<'a> {
    x: &'a [[f64; NUM_FEATURES]],
    y: &'a [bool],
    active: &'a [usize],
    k: usize,
    min_leaf: usize,
    max_depth: Option<usize>,
}

struct BestSplit {
    gain: f64,
    feature: usize,
    threshold: f64,
}

impl Grower<'_> {
    fn counts(&self, samples: &[usize]) -> ClassCounts {
        let positive = samples.iter().filter(|&&i| self.y[i]).count() as u64;
        ClassCounts {
            negative: samples.len() as u64 - positive,
            positive,
        }
    }

    /// Draws `k` distinct active features by partial Fisher-Yates and searches
    /// them in sorted order. When none of them splits, the remaining features
    /// are drawn one at a time until one does or the pool is exhausted.
    fn choose_split(&self, samples: &[usize], counts: ClassCounts, rng: &mut StdRng) -> Option<BestSplit> {
        let mut pool = self.active.to_vec();
        for i in 0..self.k {
            let j = i + below(rng, pool.len() - i);
            pool.swap(i, j);
        }
        let mut window = pool[..self.k].to_vec();
        window.sort_unstable();
        if let Some(split) = self.best_split(samples, &window, counts) {
            return Some(split);
        }
        for i in self.k..pool.len() {
            let j = i + below(rng, pool.len() - i);
            pool.swap(i, j);
            if let Some(split) = self.best_split(samples, &pool[i..=i], counts) {
                return Some(split);
            }
        }
        None
    }

    fn best_split(&self, samples: &[usize], features: &[usize], counts: ClassCounts) -> Option<BestSplit> {
        let n = samples.len();
        let pos = counts.positive as usize;
        let parent = entropy(pos, n);
        let mut best: Option<BestSplit> = None;
        let mut vals: Vec<(f64, bool)> = Vec::with_capacity(n);
        for &f in features {
            vals.clear();
            vals.extend(samples.iter().map(|&i| (self.x[i][f], self.y[i])));
            vals.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_pos = 0;
            for i in 0..n - 1 {
                left_pos += vals[i].1 as usize;
                let nl = i + 1;
                let nr = n - nl;
                if vals[i].0 == vals[i + 1].0 || nl < self.min_leaf || nr < self.min_leaf {
                    continue;
                }
                let children = (nl as f64 * entropy(left_pos, nl) + nr as f64 * entropy(pos - left_pos, nr)) / n as f64;
                let gain = parent - children;
                if gain > MIN_GAIN && best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(BestSplit {
                        gain,
                        feature: f,
                        threshold: midpoint(vals[i].0, vals[i + 1].0),
                    });
                }
            }
        }
        best
    }

    fn grow(&self, bootstrap: Vec<usize>, rng: &mut StdRng) -> Tree {
        let placeholder = Node::Leaf {
            class: Label::Negative,
            class_counts: ClassCounts::default(),
        };
        let mut nodes = vec![placeholder.clone()];
        let mut stack = vec![(0usize, bootstrap, 0usize)];
        while let Some((idx, samples, depth)) = stack.pop() {
            let counts = self.counts(&samples);
            let can_split = counts.positive > 0
                && counts.negative > 0
                && samples.len() >= 2 * self.min_leaf
                && self.max_depth.is_none_or(|d| depth < d);
            let split = if can_split {
                self.choose_split(&samples, counts, rng)
            } else {
                None
            };
            let Some(split) = split else {
                nodes[idx] = Node::Leaf {
                    class: counts.majority(),
                    class_counts: counts,
                };
                continue;
            };
            let (l, r): (Vec<usize>, Vec<usize>) = samples
                .into_iter()
                .partition(|&i| self.x[i][split.feature] <= split.threshold);
            let left = nodes.len();
            nodes.push(placeholder.clone());
            nodes.push(placeholder.clone());
            nodes[idx] = Node::Split {
                feature: split.feature,
                threshold: split.threshold,
                left,
                right: left + 1,
            };
            stack.push((left + 1, r, depth + 1));
            stack.push((left, l, depth + 1));
        }
        Tree { nodes }
    }
}

impl Forest {
    /// Trains on labeled vectors using only the features in `mask`.
    pub fn train(data: &[FeatureVector], mask: &FeatureMask, config: &TrainConfig) -> Result<Forest> {
        config.validate()?;
        if data.is_empty() {
            return Err(Error::invalid("cannot train on an empty dataset"));
        }
        let active = FeatureMask::new(mask.name.clone(), mask.active.clone())?.active;
        let k = config.resolve_k(active.len())?;
        let x: Vec<[f64; NUM_FEATURES]> = data.iter().map(|v| v.values).collect();
        let y = data
            .iter()
            .map(|v| {
                v.label
                    .map(Label::is_positive)
                    .ok_or_else(|| Error::invalid(format!("unlabeled training instance {} {}", v.key.0, v.key.1)))
            })
            .collect::<Result<Vec<bool>>>()?;
        if y.iter().all(|&p| p) || y.iter().all(|&p| !p) {
            log::warn!("training data has a single class; every tree will be a single leaf");
        }
        let grower = Grower {
            x: &x,
            y: &y,
            active: &active,
            k,
            min_leaf: config.min_leaf,
            max_depth: config.max_depth,
        };
        let n = data.len();
        let mut trees = Vec::with_capacity(config.num_trees);
        let mut in_bag = Vec::with_capacity(config.num_trees);
        for t in 0..config.num_trees {
            let mut rng = derived(config.seed, t as u64);
            let bootstrap: Vec<usize> = (0..n).map(|_| below(&mut rng, n)).collect();
            let mut bag = vec![false; n];
            for &i in &bootstrap {
                bag[i] = true;
            }
            trees.push(grower.grow(bootstrap, &mut rng));
            in_bag.push(bag);
        }
        let (oob_error, oob_instances) = oob_estimate(&trees, &in_bag, &x, &y);
        Ok(Forest {
            header: ModelHeader {
                format_version: FORMAT_VERSION,
                rng_id: RNG_ID.to_string(),
                seed: config.seed,
                num_trees: config.num_trees,
                features_per_node: k,
                min_leaf: config.min_leaf,
                max_depth: config.max_depth,
                feature_layout_hash: current_layout().to_string(),
                slot_names: SLOT_NAMES.iter().map(|s| s.to_string()).collect(),
                mask_name: mask.name.clone(),
                active_features: active,
                oob_error,
                oob_instances,
                training_instances: n,
            },
            trees,
        })
    }

    pub fn oob_error(&self) -> f64 {
        self.header.oob_error
    }

    pub fn check_layout(&self, hash: &str) -> Result<()> {
        if self.header.feature_layout_hash != hash {
            return Err(Error::LayoutMismatch {
                expected: self.header.feature_layout_hash.clone(),
                found: hash.to_string(),
            });
        }
        Ok(())
    }

    /// Number of trees voting positive.
    pub fn positive_votes(&self, values: &[f64; NUM_FEATURES]) -> usize {
        self.trees.iter().filter(|t| t.predict(values).is_positive()).count()
    }

    /// Majority vote without the layout check. A tie goes to negative.
    pub fn predict_values(&self, values: &[f64; NUM_FEATURES]) -> Label {
        Label::from_bool(2 * self.positive_votes(values) > self.trees.len())
    }

    pub fn proba_values(&self, values: &[f64; NUM_FEATURES]) -> f64 {
        self.positive_votes(values) as f64 / self.trees.len() as f64
    }

    pub fn predict(&self, v: &FeatureVector) -> Result<Label> {
        self.check_layout(current_layout())?;
        Ok(self.predict_values(&v.values))
    }

    /// Fraction of trees voting positive.
    pub fn predict_proba(&self, v: &FeatureVector) -> Result<f64> {
        self.check_layout(current_layout())?;
        Ok(self.proba_values(&v.values))
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFileOut {
            header: &self.header,
            trees: &self.trees,
            checksum: checksum(&self.header, &self.trees)?,
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Forest> {
        let probe: VersionProbe =
            serde_json::from_str(text).map_err(|e| Error::Model(format!("unreadable model file: {e}")))?;
        if probe.header.format_version != FORMAT_VERSION {
            return Err(Error::Model(format!(
                "unsupported model format version {} (expected {FORMAT_VERSION})",
                probe.header.format_version
            )));
        }
        let file: ModelFileIn =
            serde_json::from_str(text).map_err(|e| Error::Model(format!("unreadable model file: {e}")))?;
        if checksum(&file.header, &file.trees)? != file.checksum {
            return Err(Error::Model("model checksum mismatch".into()));
        }
        let h = &file.header;
        if h.trees_mismatch(file.trees.len()) {
            return Err(Error::Model(format!(
                "header says {} trees, file has {}",
                h.num_trees,
                file.trees.len()
            )));
        }
        if layout_hash_of(&h.slot_names) != h.feature_layout_hash || h.slot_names.len() != NUM_FEATURES {
            return Err(Error::Model("slot names do not match the layout hash".into()));
        }
        let active = FeatureMask::new(h.mask_name.clone(), h.active_features.clone())
            .map_err(|e| Error::Model(e.to_string()))?
            .active;
        if active != h.active_features {
            return Err(Error::Model("active features must be sorted and distinct".into()));
        }
        for t in &file.trees {
            t.validate(&active)?;
        }
        Ok(Forest {
            header: file.header,
            trees: file.trees,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Forest> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Forest::from_json(&text)
    }
}

impl ModelHeader {
    fn trees_mismatch(&self, n: usize) -> bool {
        self.num_trees != n || n == 0
    }
}

/// Error of the majority vote of out-of-bag trees, over instances that were
/// out of bag at least once. Returns `(error, instances evaluated)`.
fn oob_estimate(trees: &[Tree], in_bag: &[Vec<bool>], x: &[[f64; NUM_FEATURES]], y: &[bool]) -> (f64, usize) {
    let mut evaluated = 0;
    let mut wrong = 0;
    for (i, (values, &truth)) in x.iter().zip(y).enumerate() {
        let mut votes = 0;
        let mut positive = 0;
        for (tree, bag) in trees.iter().zip(in_bag) {
            if !bag[i] {
                votes += 1;
                positive += tree.predict(values).is_positive() as usize;
            }
        }
        if votes > 0 {
            evaluated += 1;
            if (2 * positive > votes) != truth {
                wrong += 1;
            }
        }
    }
    if evaluated == 0 {
        (0.0, 0)
    } else {
        (wrong as f64 / evaluated as f64, evaluated)
    }
}

/// Fraction of distinct instances in one bootstrap draw of size `n`.
pub fn bootstrap_unique_fraction(seed: u64, n: usize) -> f64 {
    let mut rng = derived(seed, 0);
    let mut bag = vec![false; n];
    for _ in 0..n {
        bag[below(&mut rng, n)] = true;
    }
    bag.iter().filter(|b| **b).count() as f64 / n as f64
}
