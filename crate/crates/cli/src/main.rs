//! `mwe <command> --config <path> [flags]`
//!
//! Exit codes: 0 success, 1 data or validation failure, 2 usage or IO failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mwe_core::candidates::{parse_candidate_tsv, write_candidate_tsv, Label};
use mwe_core::corpus::{load_corpus_dir, load_sentence_file, parse_chunk_file, write_sentence_file, Sentence};
use mwe_core::eval::{metrics, render_report, render_table, run_experiments, ConfusionMatrix, PerClass};
use mwe_core::features::{parse_matrix, write_matrix, FeatureVector, Preset};
use mwe_core::forest::Forest;
use mwe_core::pipeline::{
    corpus_counts, extract_candidates, featurize_all, label_all, segment_documents, Paths, PipelineConfig, Resources,
};
use mwe_core::read_text;

#[derive(Parser)]
#[command(name = "mwe", version, about = "Noun-noun multiword expression identification")]
struct Cli {
    /// JSON pipeline configuration. Relative paths inside it resolve against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split raw documents into one tokenized sentence per line.
    Segment {
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Extract candidate bigrams from the chunk file and the raw sentences.
    Candidates {
        #[command(flatten)]
        sources: Sources,
        #[arg(long)]
        chunk_file: Option<PathBuf>,
        #[arg(long)]
        gold_list: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute the feature matrix for a candidate file.
    Featurize {
        #[arg(long)]
        candidates: PathBuf,
        #[command(flatten)]
        sources: Sources,
        /// Emit rows whose label is `?`.
        #[arg(long)]
        allow_unlabeled: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Train a forest and write the model file.
    Train {
        /// Labeled feature matrix. Built from the configured corpus when omitted.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = parse_preset)]
        preset: Option<Preset>,
        #[command(flatten)]
        train: TrainFlags,
    },
    /// Classify every row of a feature matrix.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score a trained model on a held-out labeled matrix.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        report_json: Option<PathBuf>,
    },
    /// Cross-validate one or more presets on a shared fold plan.
    Experiment {
        /// Labeled feature matrix. Built from the configured corpus when omitted.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// `all` or a comma-separated list of presets.
        #[arg(long, value_parser = parse_presets)]
        preset: Option<PresetList>,
        /// Number of folds.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        train: TrainFlags,
        #[arg(long)]
        report_json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Sources {
    /// Pre-segmented sentence file. Takes precedence over the corpus directory.
    #[arg(long)]
    sentence_file: Option<PathBuf>,
    #[arg(long)]
    corpus_dir: Option<PathBuf>,
}

#[derive(Args)]
struct TrainFlags {
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    features_per_node: Option<usize>,
    #[arg(long)]
    min_leaf: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Preset::ALL.iter().map(|p| p.as_str()).collect();
        format!("unknown preset `{s}` (expected one of {})", names.join(", "))
    })
}

#[derive(Clone)]
struct PresetList(Vec<Preset>);

fn parse_presets(s: &str) -> Result<PresetList, String> {
    if s == "all" {
        return Ok(PresetList(Preset::ALL.to_vec()));
    }
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim) {
        let p = parse_preset(name)?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(PresetList(out))
}

enum CliError {
    Usage(String),
    Data(String),
    Write(PathBuf, std::io::Error),
    Core(mwe_core::Error),
}

impl From<mwe_core::Error> for CliError {
    fn from(e: mwe_core::Error) -> CliError {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Data(_) => 1,
            CliError::Core(e) if e.is_data_error() => 1,
            _ => 2,
        }
    }

    fn report(&self) {
        match self {
            CliError::Usage(m) => eprintln!("error: {m}"),
            CliError::Data(m) => eprintln!("error: {m}"),
            CliError::Write(p, e) => eprintln!("error: cannot write {}: {e}", p.display()),
            CliError::Core(e @ mwe_core::Error::LayoutMismatch { .. }) => {
                eprintln!("error: {e}");
                eprintln!("note: the model and the matrix were built with different feature layouts; re-run `featurize` and `train` with this version");
            }
            CliError::Core(e) => eprintln!("error: {e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            log::LevelFilter::Info
        } else {
            log::LevelFilter::Warn
        })
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(path: Option<&Path>) -> CliResult<PipelineConfig> {
    match path {
        None => Ok(PipelineConfig::default()),
        Some(p) => PipelineConfig::load(p).map_err(|e| match e {
            e @ mwe_core::Error::Io { .. } => CliError::Core(e),
            e => CliError::Usage(format!("{}: {e}", p.display())),
        }),
    }
}

fn set(slot: &mut Option<PathBuf>, flag: Option<PathBuf>) {
    if flag.is_some() {
        *slot = flag;
    }
}

fn require<'a>(p: &'a Option<PathBuf>, what: &str, flag: &str) -> CliResult<&'a Path> {
    p.as_deref()
        .ok_or_else(|| CliError::Usage(format!("no {what} given: set it in the config or pass --{flag}")))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Write(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(mwe_core::Error::from)?;
    text.push('\n');
    emit(Some(path), &text)
}

fn load_sentences(paths: &Paths) -> CliResult<Vec<Sentence>> {
    if let Some(p) = &paths.sentence_file {
        return Ok(load_sentence_file(p)?);
    }
    if let Some(d) = &paths.corpus_dir {
        return Ok(segment_documents(&load_corpus_dir(d)?));
    }
    Err(CliError::Usage(
        "no sentence source given: set paths.sentence_file or paths.corpus_dir, or pass --sentence-file or --corpus-dir".into(),
    ))
}

fn load_matrix(path: &Path) -> CliResult<Vec<FeatureVector>> {
    Ok(parse_matrix(&read_text(path)?, &path.display().to_string())?)
}

/// Runs segmentation, extraction, labeling and featurization from the config.
fn build_matrix(paths: &Paths) -> CliResult<Vec<FeatureVector>> {
    let chunk_file = require(&paths.chunk_file, "chunk file", "chunk-file")?;
    if paths.gold_list.is_none() {
        return Err(CliError::Usage(
            "building a training matrix needs paths.gold_list; pass --matrix to use a prepared one".into(),
        ));
    }
    let res = Resources::load(paths)?;
    let sentences = load_sentences(paths)?;
    let chunks = parse_chunk_file(chunk_file)?;
    let rows = label_all(extract_candidates(&res.extractor(), &chunks, &sentences), res.gold.as_ref());
    log::info!("{} candidates from {} sentences", rows.len(), sentences.len());
    Ok(featurize_all(&res.featurizer(corpus_counts(&sentences, &res.stemmer)), &rows)?)
}

fn matrix_or_build(matrix: Option<&Path>, paths: &Paths) -> CliResult<Vec<FeatureVector>> {
    match matrix {
        Some(p) => load_matrix(p),
        None => build_matrix(paths),
    }
}

fn apply_train_flags(cfg: &mut PipelineConfig, f: &TrainFlags) {
    let t = &mut cfg.train;
    if let Some(v) = f.trees {
        t.num_trees = v;
    }
    if let Some(v) = f.seed {
        t.seed = v;
    }
    if f.features_per_node.is_some() {
        t.features_per_node = f.features_per_node;
    }
    if let Some(v) = f.min_leaf {
        t.min_leaf = v;
    }
    if f.max_depth.is_some() {
        t.max_depth = f.max_depth;
    }
}

fn config_presets(cfg: &PipelineConfig) -> CliResult<Option<Vec<Preset>>> {
    cfg.preset
        .as_deref()
        .map(|s| parse_presets(s).map(|l| l.0).map_err(|m| CliError::Usage(format!("config: {m}"))))
        .transpose()
}

#[derive(Serialize)]
struct HeldOutReport {
    preset: String,
    model_seed: u64,
    instances: usize,
    per_class: PerClass,
    weighted_f: f64,
    confusion: ConfusionMatrix,
}

fn run(cli: Cli) -> CliResult<()> {
    let mut cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Segment { corpus_dir, output } => {
            set(&mut cfg.paths.corpus_dir, corpus_dir);
            let dir = require(&cfg.paths.corpus_dir, "corpus directory", "corpus-dir")?;
            let sentences = segment_documents(&load_corpus_dir(dir)?);
            emit(output.as_deref(), &write_sentence_file(&sentences))
        }
        Command::Candidates {
            sources,
            chunk_file,
            gold_list,
            output,
        } => {
            set(&mut cfg.paths.sentence_file, sources.sentence_file);
            set(&mut cfg.paths.corpus_dir, sources.corpus_dir);
            set(&mut cfg.paths.chunk_file, chunk_file);
            set(&mut cfg.paths.gold_list, gold_list);
            let chunks = parse_chunk_file(require(&cfg.paths.chunk_file, "chunk file", "chunk-file")?)?;
            let sentences = load_sentences(&cfg.paths)?;
            let res = Resources::load(&cfg.paths)?;
            let rows = label_all(extract_candidates(&res.extractor(), &chunks, &sentences), res.gold.as_ref());
            emit(output.as_deref(), &write_candidate_tsv(&rows))
        }
        Command::Featurize {
            candidates,
            sources,
            allow_unlabeled,
            output,
        } => {
            set(&mut cfg.paths.sentence_file, sources.sentence_file);
            set(&mut cfg.paths.corpus_dir, sources.corpus_dir);
            let rows = parse_candidate_tsv(&read_text(&candidates)?, &candidates.display().to_string())?;
            let unlabeled = rows.iter().filter(|(_, l)| l.is_none()).count();
            if unlabeled > 0 && !allow_unlabeled {
                return Err(CliError::Data(format!(
                    "{unlabeled} of {} candidates are unlabeled; pass --allow-unlabeled to featurize them anyway",
                    rows.len()
                )));
            }
            let sentences = load_sentences(&cfg.paths)?;
            let res = Resources::load(&cfg.paths)?;
            let matrix = featurize_all(&res.featurizer(corpus_counts(&sentences, &res.stemmer)), &rows)?;
            emit(output.as_deref(), &write_matrix(&matrix))
        }
        Command::Train {
            matrix,
            model,
            preset,
            train,
        } => {
            apply_train_flags(&mut cfg, &train);
            let preset = match preset {
                Some(p) => p,
                None => match config_presets(&cfg)?.as_deref() {
                    Some([p]) => *p,
                    Some(_) => return Err(CliError::Usage("train takes a single preset".into())),
                    None => Preset::Proposed,
                },
            };
            let data = matrix_or_build(matrix.as_deref(), &cfg.paths)?;
            let forest = Forest::train(&data, &preset.mask(), &cfg.train.forest_config())?;
            forest.save(&model)?;
            let h = &forest.header;
            println!(
                "trained {} trees on {} instances ({}, K={}, seed={}); OOB error {:.4} over {} instances",
                h.num_trees,
                h.training_instances,
                h.mask_name,
                h.features_per_node,
                h.seed,
                h.oob_error,
                h.oob_instances
            );
            Ok(())
        }
        Command::Predict { model, matrix, output } => {
            let forest = Forest::load(&model)?;
            let data = load_matrix(&matrix)?;
            let mut out = String::from("key\tlabel\tvote_fraction\n");
            for v in &data {
                let p = forest.predict_proba(v)?;
                let label = forest.predict(v)?;
                let _ = writeln!(out, "{} {}\t{}\t{p}", v.key.0, v.key.1, label.as_str());
            }
            emit(output.as_deref(), &out)
        }
        Command::Evaluate {
            model,
            matrix,
            report_json,
        } => {
            let forest = Forest::load(&model)?;
            let data = load_matrix(&matrix)?;
            let mut cm = ConfusionMatrix::default();
            for (i, v) in data.iter().enumerate() {
                let truth: Label = v
                    .label
                    .ok_or_else(|| CliError::Data(format!("{}: row {} is unlabeled", matrix.display(), i + 2)))?;
                cm.record(truth, forest.predict(v)?);
            }
            let m = metrics(&cm)?;
            let report = HeldOutReport {
                preset: forest.header.mask_name.clone(),
                model_seed: forest.header.seed,
                instances: data.len(),
                per_class: PerClass {
                    positive: m.positive,
                    negative: m.negative,
                },
                weighted_f: m.weighted_f,
                confusion: cm,
            };
            print!("{}", render_held_out(&report));
            if let Some(p) = report_json {
                write_json(&p, &report)?;
            }
            Ok(())
        }
        Command::Experiment {
            matrix,
            preset,
            k,
            train,
            report_json,
        } => {
            apply_train_flags(&mut cfg, &train);
            let presets = match preset {
                Some(p) => p.0,
                None => config_presets(&cfg)?.unwrap_or_else(|| Preset::ALL.to_vec()),
            };
            let k = k.unwrap_or(cfg.train.k);
            let data = matrix_or_build(matrix.as_deref(), &cfg.paths)?;
            let reports = run_experiments(&presets, &data, &cfg.train.forest_config(), k)?;
            for r in &reports {
                println!("{}", render_report(r));
            }
            print!("{}", render_table(&reports));
            if let Some(p) = report_json {
                write_json(&p, &reports)?;
            }
            Ok(())
        }
    }
}

fn render_held_out(r: &HeldOutReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} model on {} held-out instances", r.preset, r.instances);
    let _ = writeln!(out, "  class     precision  recall  f-measure  support");
    for (name, c) in [("positive", &r.per_class.positive), ("negative", &r.per_class.negative)] {
        let _ = writeln!(
            out,
            "  {name:<8}  {:>9.4}  {:>6.4}  {:>9.4}  {:>7}",
            c.precision, c.recall, c.f_measure, c.support
        );
    }
    let cm = &r.confusion;
    let _ = writeln!(out, "  weighted F = {:.4}", r.weighted_f);
    let _ = writeln!(out, "  confusion: tp={} fp={} fn={} tn={}", cm.tp, cm.fp, cm.fn_, cm.tn);
    out
}
