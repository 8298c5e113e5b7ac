//! k-fold cross-validation with pooled confusion matrices and class-size
//! weighted F-measure.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::candidates::Label;
use crate::features::{FeatureMask, FeatureVector, Preset};
use crate::forest::{Forest, TrainConfig};
use crate::rng::{seeded, shuffle};
use crate::{Error, Result};

pub const DEFAULT_FOLDS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Fold id of each instance.
    pub assignments: Vec<usize>,
}

/// Shuffles `0..n` with `seed` and deals the shuffled order round-robin into `k` folds.
pub fn kfold_split(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds the {n} instances")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut seeded(seed), &mut order);
    let mut assignments = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        assignments[i] = pos % k;
    }
    Ok(FoldPlan { k, seed, assignments })
}

impl FoldPlan {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.assignments[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.assignments[i] != fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Positive class = noun-noun MWE.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> ConfusionMatrix {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    pub fn record(&mut self, truth: Label, predicted: Label) {
        match (truth, predicted) {
            (Label::Positive, Label::Positive) => self.tp += 1,
            (Label::Negative, Label::Positive) => self.fp += 1,
            (Label::Positive, Label::Negative) => self.fn_ += 1,
            (Label::Negative, Label::Negative) => self.tn += 1,
        }
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub support: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl ClassMetrics {
    /// Metrics of one class given its true positives, false positives and false negatives.
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> ClassMetrics {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f_measure = if precision + recall > 0.0 {
            (2.0 * precision * recall) / (precision + recall)
        } else {
            0.0
        };
        ClassMetrics {
            precision,
            recall,
            f_measure,
            support: tp + fn_,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub positive: ClassMetrics,
    pub negative: ClassMetrics,
    pub weighted_f: f64,
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    if cm.total() == 0 {
        return Err(Error::invalid("confusion matrix is empty"));
    }
    let positive = ClassMetrics::from_counts(cm.tp, cm.fp, cm.fn_);
    let negative = ClassMetrics::from_counts(cm.tn, cm.fn_, cm.fp);
    let weighted_f = (positive.f_measure * positive.support as f64 + negative.f_measure * negative.support as f64)
        / (positive.support + negative.support) as f64;
    Ok(Metrics {
        positive,
        negative,
        weighted_f,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub oob_error: f64,
    pub confusion: ConfusionMatrix,
    pub weighted_f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerClass {
    pub positive: ClassMetrics,
    pub negative: ClassMetrics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub preset: String,
    pub description: String,
    pub k: usize,
    pub seed: u64,
    pub active_features: Vec<usize>,
    pub train_config: TrainConfig,
    pub per_class: PerClass,
    pub weighted_f: f64,
    pub pooled_confusion: ConfusionMatrix,
    pub per_fold: Vec<FoldResult>,
}

/// Trains on each fold's complement, predicts the fold, and scores the pooled
/// confusion matrix. Every fold trains with `config.seed`.
pub fn cross_validate(
    data: &[FeatureVector],
    mask: &FeatureMask,
    config: &TrainConfig,
    plan: &FoldPlan,
) -> Result<EvaluationReport> {
    if plan.len() != data.len() {
        return Err(Error::invalid(format!(
            "fold plan covers {} instances but the dataset has {}",
            plan.len(),
            data.len()
        )));
    }
    let labels = data
        .iter()
        .map(|v| v.label.ok_or_else(|| Error::invalid(format!("unlabeled instance {} {}", v.key.0, v.key.1))))
        .collect::<Result<Vec<Label>>>()?;
    if !labels.iter().any(|l| l.is_positive()) || labels.iter().all(|l| l.is_positive()) {
        return Err(Error::invalid("cross-validation needs both positive and negative instances"));
    }
    let mut pooled = ConfusionMatrix::default();
    let mut per_fold = Vec::with_capacity(plan.k);
    for fold in 0..plan.k {
        let train: Vec<FeatureVector> = plan.train_indices(fold).into_iter().map(|i| data[i].clone()).collect();
        let test = plan.test_indices(fold);
        let forest = Forest::train(&train, mask, config)?;
        let mut cm = ConfusionMatrix::default();
        for &i in &test {
            cm.record(labels[i], forest.predict_values(&data[i].values));
        }
        pooled.add(&cm);
        per_fold.push(FoldResult {
            fold,
            train_size: train.len(),
            test_size: test.len(),
            oob_error: forest.oob_error(),
            confusion: cm,
            weighted_f: metrics(&cm)?.weighted_f,
        });
    }
    let m = metrics(&pooled)?;
    Ok(EvaluationReport {
        preset: mask.name.clone(),
        description: mask
            .name
            .parse::<Preset>()
            .map(|p| p.description().to_string())
            .unwrap_or_else(|_| mask.name.clone()),
        k: plan.k,
        seed: plan.seed,
        active_features: mask.active.clone(),
        train_config: config.clone(),
        per_class: PerClass {
            positive: m.positive,
            negative: m.negative,
        },
        weighted_f: m.weighted_f,
        pooled_confusion: pooled,
        per_fold,
    })
}

pub fn run_experiment(
    preset: Preset,
    data: &[FeatureVector],
    config: &TrainConfig,
    plan: &FoldPlan,
) -> Result<EvaluationReport> {
    cross_validate(data, &preset.mask(), config, plan)
}

/// Runs each preset against one shared fold plan drawn with `config.seed`.
pub fn run_experiments(
    presets: &[Preset],
    data: &[FeatureVector],
    config: &TrainConfig,
    k: usize,
) -> Result<Vec<EvaluationReport>> {
    let plan = kfold_split(data.len(), k, config.seed)?;
    presets
        .iter()
        .map(|&p| {
            log::info!("running {p} ({} features, {k} folds)", p.mask().len());
            run_experiment(p, data, config, &plan)
        })
        .collect()
}

/// Two-column comparison table: system and weighted-average F-measure.
pub fn render_table(reports: &[EvaluationReport]) -> String {
    let header = "Systems";
    let width = reports
        .iter()
        .map(|r| r.description.chars().count())
        .chain([header.len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{header:<width$}  F-measure (weighted average)");
    for r in reports {
        let _ = writeln!(out, "{:<width$}  {:.3}", r.description, r.weighted_f);
    }
    out
}

/// Per-class breakdown of one report.
pub fn render_report(r: &EvaluationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} ({} features, k={}, seed={})",
        r.description,
        r.active_features.len(),
        r.k,
        r.seed
    );
    let _ = writeln!(out, "  class     precision  recall  f-measure  support");
    for (name, c) in [("positive", &r.per_class.positive), ("negative", &r.per_class.negative)] {
        let _ = writeln!(
            out,
            "  {name:<8}  {:>9.4}  {:>6.4}  {:>9.4}  {:>7}",
            c.precision, c.recall, c.f_measure, c.support
        );
    }
    let cm = &r.pooled_confusion;
    let _ = writeln!(out, "  weighted F = {:.4}", r.weighted_f);
    let _ = writeln!(out, "  pooled confusion: tp={} fp={} fn={} tn={}", cm.tp, cm.fp, cm.fn_, cm.tn);
    out
}
