//! Subcommand implementations.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ties_core::embedding::{embed_document, load_lexicon, EmbeddingLexicon};
use ties_core::evalharness::{self, FeatureRow, Model, SplitSpec, TrainConfig};
use ties_core::textprep::{load_corpus, load_stopwords};
use ties_core::{
    bottleneck, distance_matrix, rips_persistence, smooth, ties_features, wasserstein,
    DiagramMetric, DocumentFeatures, HomologyDim, LabeledDocument, TokenStream, TokenizeOptions,
};

use crate::args::{DistArgs, EvalArgs, PhArgs, TrainArgs};
use crate::config::{ExtractConfig, FeatureFormat};
use crate::formats;

// ----------------------------------------------------------------- extract

/// Whether an extract run had document-level skips (exit code 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractOutcome {
    Clean,
    SkippedSome,
}

#[derive(Debug, Serialize)]
struct Skip {
    id: String,
    reason: String,
}

#[derive(Debug, Default)]
struct StageTimers {
    tokenize_embed: AtomicU64,
    smooth: AtomicU64,
    distance: AtomicU64,
    features: AtomicU64,
}

impl StageTimers {
    fn seconds(&self) -> StageSeconds {
        let s = |a: &AtomicU64| a.load(Ordering::Relaxed) as f64 * 1e-9;
        StageSeconds {
            tokenize_embed: s(&self.tokenize_embed),
            smooth: s(&self.smooth),
            distance: s(&self.distance),
            features: s(&self.features),
        }
    }
}

/// Cumulative per-stage CPU seconds, summed across workers.
#[derive(Debug, Serialize)]
struct StageSeconds {
    tokenize_embed: f64,
    smooth: f64,
    distance: f64,
    features: f64,
}

#[derive(Debug, Serialize)]
struct RunReport {
    corpus: String,
    lexicon: String,
    window_kind: String,
    window_size: usize,
    metric: String,
    workers: usize,
    documents_read: usize,
    features_written: usize,
    skipped: Vec<Skip>,
    stage_seconds: StageSeconds,
    wall_seconds: f64,
}

fn timed<T>(slot: &AtomicU64, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    slot.fetch_add(start.elapsed().as_nanos() as u64, Ordering::Relaxed);
    out
}

fn stage<T>(r: ties_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn process_document(
    doc: &LabeledDocument,
    lexicon: &EmbeddingLexicon,
    cfg: &ExtractConfig,
    opts: &TokenizeOptions,
    timers: &StageTimers,
) -> std::result::Result<DocumentFeatures, String> {
    let (matrix, oov) = timed(&timers.tokenize_embed, || {
        let stream = TokenStream::from_document(doc, opts);
        stage(embed_document(&stream, lexicon))
    })?;
    let smoothed = timed(&timers.smooth, || stage(smooth(&matrix, cfg.window)))?;
    if smoothed.rows() < 10 * cfg.window.size() {
        log::warn!(
            "document {}: only {} smoothed positions for window {} (estimates will be noisy)",
            doc.id,
            smoothed.rows(),
            cfg.window.size()
        );
    }
    let phi = timed(&timers.distance, || stage(distance_matrix(&smoothed)))?;
    let sensitivity = timed(&timers.features, || stage(ties_features(&phi, cfg.metric)))?;
    let meta = ties_core::pipeline::DocumentMeta {
        tokens: matrix.rows(),
        smoothed_len: smoothed.rows(),
        dim: lexicon.dimension(),
        oov,
        degenerate_dims: phi.degenerate_dims().to_vec(),
    };
    Ok(DocumentFeatures {
        id: doc.id.clone(),
        labels: doc.labels.clone(),
        sensitivity,
        meta,
    })
}

pub fn cmd_extract(cfg: &ExtractConfig) -> Result<ExtractOutcome> {
    let wall = Instant::now();
    let lexicon = load_lexicon(&cfg.lexicon)?;
    let stopwords = cfg
        .stopwords
        .as_deref()
        .map(load_stopwords)
        .transpose()?;
    let opts = TokenizeOptions {
        lowercase: cfg.lowercase,
        stopwords,
    };

    let mut docs: Vec<LabeledDocument> = Vec::new();
    let mut skips: Vec<Skip> = Vec::new();
    for record in load_corpus(&cfg.corpus, cfg.corpus_format)? {
        match record {
            Ok(doc) => docs.push(doc),
            Err(e) => skips.push(Skip {
                id: e.location.clone(),
                reason: e.message.clone(),
            }),
        }
    }
    let documents_read = docs.len() + skips.len();

    let timers = StageTimers::default();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .context("building worker pool")?;
    let results: Vec<std::result::Result<DocumentFeatures, String>> = pool.install(|| {
        docs.par_iter()
            .map(|doc| process_document(doc, &lexicon, cfg, &opts, &timers))
            .collect()
    });

    let mut rows: Vec<DocumentFeatures> = Vec::with_capacity(docs.len());
    for (doc, result) in docs.iter().zip(results) {
        match result {
            Ok(features) => rows.push(features),
            Err(reason) => skips.push(Skip {
                id: doc.id.clone(),
                reason,
            }),
        }
    }

    match cfg.feature_format {
        FeatureFormat::Csv => formats::write_features_csv(&cfg.features_out, &rows)?,
        FeatureFormat::Jsonl => formats::write_features_jsonl(&cfg.features_out, &rows)?,
    }

    let report = RunReport {
        corpus: cfg.corpus.display().to_string(),
        lexicon: cfg.lexicon.display().to_string(),
        window_kind: cfg.window.kind().to_string(),
        window_size: cfg.window.size(),
        metric: cfg.metric.to_string(),
        workers: cfg.workers,
        documents_read,
        features_written: rows.len(),
        skipped: skips,
        stage_seconds: timers.seconds(),
        wall_seconds: wall.elapsed().as_secs_f64(),
    };
    if let Some(path) = &cfg.report {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing report {}", path.display()))?;
    }

    println!(
        "extracted {} of {} documents -> {} ({} skipped)",
        report.features_written,
        report.documents_read,
        cfg.features_out.display(),
        report.skipped.len()
    );
    for skip in &report.skipped {
        log::warn!("skipped {}: {}", skip.id, skip.reason);
    }
    if report.skipped.is_empty() {
        Ok(ExtractOutcome::Clean)
    } else {
        Ok(ExtractOutcome::SkippedSome)
    }
}

// ---------------------------------------------------------------- ph, dist

pub fn cmd_ph(args: &PhArgs) -> Result<()> {
    let matrix = formats::read_matrix_csv(&args.matrix)?;
    let diagram = rips_persistence(&matrix, HomologyDim::from_index(args.max_hdim)?)?;
    formats::write_diagram_csv(&args.out, &diagram)?;
    println!(
        "{} diagram points -> {}",
        diagram.points().len(),
        args.out.display()
    );
    Ok(())
}

pub fn cmd_dist(args: &DistArgs) -> Result<()> {
    let hdim = HomologyDim::from_index(args.hdim)?;
    let metric: DiagramMetric = args.metric.parse()?;
    let bars = |path: &Path| -> Result<Vec<(f64, f64)>> {
        Ok(formats::read_diagram_csv(path)?
            .into_iter()
            .filter(|p| p.hdim == hdim && !p.is_essential())
            .map(|p| (p.birth, p.death))
            .collect())
    };
    let a = bars(&args.diagram_a)?;
    let b = bars(&args.diagram_b)?;
    let value = match metric {
        DiagramMetric::W1 => wasserstein(&a, &b, 1),
        DiagramMetric::W2 => wasserstein(&a, &b, 2),
        DiagramMetric::Bottleneck => bottleneck(&a, &b),
    };
    println!("{}", formats::format_float(value));
    Ok(())
}

// -------------------------------------------------------------- train, eval

/// Everything needed to reproduce an evaluation: the partition recipe, the
/// training settings, and the fitted weights.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub n_rows: usize,
    pub split: SplitSpec,
    pub train_config: TrainConfig,
    pub model: Model,
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let rows = formats::read_features(&args.features)?;
    let spec = SplitSpec::new(args.fraction, args.seed)?;
    let (train_idx, test_idx) = evalharness::split(rows.len(), &spec)?;

    let alphabet: BTreeSet<String> = rows
        .iter()
        .flat_map(|r| r.labels.iter().cloned())
        .collect();
    if alphabet.is_empty() {
        bail!(
            "{}: no labels anywhere in the feature file",
            args.features.display()
        );
    }

    let train_rows: Vec<&FeatureRow> = train_idx.iter().map(|&i| &rows[i]).collect();
    let cfg = TrainConfig {
        l2: args.l2,
        learning_rate: args.learning_rate,
        max_epochs: args.max_epochs,
        tolerance: args.tolerance,
    };
    let model = evalharness::train(&train_rows, &alphabet, &cfg)?;

    let file = ModelFile {
        n_rows: rows.len(),
        split: spec,
        train_config: cfg,
        model,
    };
    std::fs::write(&args.out, serde_json::to_string_pretty(&file)?)
        .with_context(|| format!("writing model {}", args.out.display()))?;
    println!(
        "trained {} one-vs-rest classifiers on {} rows ({} held out) -> {}",
        file.model.labels.len(),
        train_idx.len(),
        test_idx.len(),
        args.out.display()
    );
    Ok(())
}

fn partition_rows<'a>(
    rows: &'a [FeatureRow],
    model_file: &ModelFile,
    on: &str,
) -> Result<Vec<&'a FeatureRow>> {
    if rows.len() != model_file.n_rows {
        bail!(
            "model was trained from {} rows but this feature file has {}; \
             the stored split would select different documents",
            model_file.n_rows,
            rows.len()
        );
    }
    let (train_idx, test_idx) = evalharness::split(rows.len(), &model_file.split)?;
    let indices: Vec<usize> = match on {
        "test" => test_idx,
        "train" => train_idx,
        "all" => (0..rows.len()).collect(),
        other => bail!("unknown partition {other:?} (expected test, train, or all)"),
    };
    Ok(indices.iter().map(|&i| &rows[i]).collect())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let rows = formats::read_features(&args.features)?;
    let text = std::fs::read_to_string(&args.model)
        .with_context(|| format!("reading model {}", args.model.display()))?;
    let model_file: ModelFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing model {}", args.model.display()))?;

    let selected = partition_rows(&rows, &model_file, &args.on)?;
    let known: BTreeSet<&str> = model_file.model.label_names().into_iter().collect();
    for row in &selected {
        if let Some(unknown) = row.labels.iter().find(|l| !known.contains(l.as_str())) {
            bail!(
                "row {}: label {unknown:?} was never seen in training",
                row.id
            );
        }
    }

    let metrics = evalharness::evaluate(&model_file.model, &selected, args.threshold);
    let json = serde_json::to_string_pretty(&metrics)?;
    match args.json.as_deref() {
        Some(p) if p == Path::new("-") => println!("{json}"),
        Some(p) => {
            std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?;
            print_metrics_table(&metrics, &args.on, selected.len());
        }
        None => print_metrics_table(&metrics, &args.on, selected.len()),
    }
    Ok(())
}

fn print_metrics_table(metrics: &evalharness::Metrics, on: &str, n_rows: usize) {
    println!("partition: {on} ({n_rows} rows)");
    println!(
        "{:<16} {:>9} {:>9} {:>9} {:>9} {:>8}",
        "label", "precision", "recall", "f1", "accuracy", "support"
    );
    for m in &metrics.per_label {
        println!(
            "{:<16} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>8}",
            m.label, m.precision, m.recall, m.f1, m.accuracy, m.support
        );
    }
    println!(
        "{:<16} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
        "micro", metrics.precision, metrics.recall, metrics.f1, metrics.accuracy
    );
}
