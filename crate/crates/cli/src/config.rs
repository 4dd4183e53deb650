//! Extract-run configuration: optional TOML file merged with CLI flags.
//! Flags win over the file; worker count also honors TIES_WORKERS between
//! the two.

use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use ties_core::textprep::CorpusFormat;
use ties_core::{DiagramMetric, WindowKind, WindowSpec};

use crate::args::ExtractArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub corpus: CorpusSection,
    #[serde(default)]
    pub lexicon: LexiconSection,
    #[serde(default)]
    pub tokenizer: TokenizerSection,
    #[serde(default)]
    pub window: WindowSection,
    #[serde(default)]
    pub metric: MetricSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconSection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenizerSection {
    pub lowercase: Option<bool>,
    pub stopwords: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub size: Option<usize>,
    pub kind: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    pub name: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub features: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub workers: Option<usize>,
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

/// Feature file serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureFormat {
    Csv,
    Jsonl,
}

/// Fully resolved settings for one extract run.
#[derive(Debug)]
pub struct ExtractConfig {
    pub corpus: PathBuf,
    pub corpus_format: CorpusFormat,
    pub lexicon: PathBuf,
    pub lowercase: bool,
    pub stopwords: Option<PathBuf>,
    pub window: WindowSpec,
    pub metric: DiagramMetric,
    pub features_out: PathBuf,
    pub feature_format: FeatureFormat,
    pub report: Option<PathBuf>,
    pub workers: usize,
}

pub fn parse_corpus_format(s: &str) -> Result<CorpusFormat> {
    match s {
        "jsonl" => Ok(CorpusFormat::Jsonl),
        "dir" | "directory" => Ok(CorpusFormat::Directory),
        other => bail!("unknown corpus format {other:?} (expected jsonl or dir)"),
    }
}

pub fn parse_window_kind(s: &str) -> Result<WindowKind> {
    match s {
        "arithmetic" => Ok(WindowKind::Arithmetic),
        "exponential" => Ok(WindowKind::Exponential),
        other => bail!("unknown window kind {other:?} (expected arithmetic or exponential)"),
    }
}

pub fn parse_feature_format(s: &str) -> Result<FeatureFormat> {
    match s {
        "csv" => Ok(FeatureFormat::Csv),
        "jsonl" => Ok(FeatureFormat::Jsonl),
        other => bail!("unknown feature format {other:?} (expected csv or jsonl)"),
    }
}

fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var("TIES_WORKERS") {
        Ok(raw) => {
            let n: usize = raw
                .parse()
                .with_context(|| format!("TIES_WORKERS={raw:?} is not a worker count"))?;
            if n == 0 {
                bail!("TIES_WORKERS must be at least 1");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

/// Merge the config file (if any) with flags. Every flag wins over its file
/// counterpart; TIES_WORKERS sits between the --workers flag and the file.
pub fn resolve_extract(args: &ExtractArgs) -> Result<ExtractConfig> {
    let file = match &args.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let corpus = args
        .corpus
        .clone()
        .or(file.corpus.path)
        .context("no corpus path (--corpus or [corpus] path)")?;
    let corpus_format = match args.format.as_deref().or(file.corpus.format.as_deref()) {
        Some(s) => parse_corpus_format(s)?,
        None => CorpusFormat::Jsonl,
    };
    let lexicon = args
        .lexicon
        .clone()
        .or(file.lexicon.path)
        .context("no lexicon path (--lexicon or [lexicon] path)")?;
    let lowercase = args
        .lowercase
        .or(file.tokenizer.lowercase)
        .unwrap_or(true);
    let stopwords = args.stopwords.clone().or(file.tokenizer.stopwords);

    let window_size = args.window_size.or(file.window.size).unwrap_or(3);
    let window_kind = match args
        .window_kind
        .as_deref()
        .or(file.window.kind.as_deref())
    {
        Some(s) => parse_window_kind(s)?,
        None => WindowKind::Arithmetic,
    };
    let window = WindowSpec::new(window_kind, window_size)?;

    let metric = match args.metric.as_deref().or(file.metric.name.as_deref()) {
        Some(s) => s.parse::<DiagramMetric>()?,
        None => DiagramMetric::W1,
    };

    let features_out = args
        .out
        .clone()
        .or(file.output.features)
        .context("no feature output path (--out or [output] features)")?;
    let feature_format = match args
        .out_format
        .as_deref()
        .or(file.output.format.as_deref())
    {
        Some(s) => parse_feature_format(s)?,
        None => infer_feature_format(&features_out),
    };
    let report = args.report.clone().or(file.output.report);

    let workers = match args.workers.or(workers_from_env()?).or(file.run.workers) {
        Some(0) => bail!("--workers must be at least 1"),
        Some(n) => n,
        None => thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };

    Ok(ExtractConfig {
        corpus,
        corpus_format,
        lexicon,
        lowercase,
        stopwords,
        window,
        metric,
        features_out,
        feature_format,
        report,
        workers,
    })
}

fn infer_feature_format(path: &Path) -> FeatureFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") => FeatureFormat::Jsonl,
        _ => FeatureFormat::Csv,
    }
}
