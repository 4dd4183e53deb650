//! Corpus ingestion and token stream production.
//!
//! Documents come from JSONL files (one object per line with `id`, `text`
//! and optional `labels`) or from a directory of `*.txt` files. Tokenization
//! splits on Unicode whitespace, trims leading/trailing punctuation, and
//! optionally lowercases and removes stopwords.

use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One corpus record: an identifier, raw text, and a (possibly empty) label set.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LabeledDocument {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub labels: BTreeSet<String>,
}

/// Ordered tokens of one document, in surface order. Never contains empty strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub source_id: String,
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn from_document(doc: &LabeledDocument, opts: &TokenizeOptions) -> Self {
        TokenStream {
            source_id: doc.id.clone(),
            tokens: tokenize(&doc.text, opts),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Tokenizer options. The default performs no lowercasing and removes nothing.
#[derive(Debug, Clone, Default)]
pub struct TokenizeOptions {
    pub lowercase: bool,
    pub stopwords: Option<HashSet<String>>,
}

/// Split `text` on Unicode whitespace, trim leading/trailing punctuation from
/// each chunk, then apply case folding and stopword removal (in that order).
/// Chunks that are empty after trimming are dropped.
pub fn tokenize(text: &str, opts: &TokenizeOptions) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|chunk| {
            let trimmed = chunk.trim_matches(|c: char| !c.is_alphanumeric());
            if trimmed.is_empty() {
                return None;
            }
            let token = if opts.lowercase {
                trimmed.to_lowercase()
            } else {
                trimmed.to_string()
            };
            match &opts.stopwords {
                Some(stop) if stop.contains(&token) => None,
                _ => Some(token),
            }
        })
        .collect()
}

/// Load a stopword file: UTF-8, one token per line, `#` lines are comments.
pub fn load_stopwords(path: impl AsRef<Path>) -> Result<HashSet<String>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut words = HashSet::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let word = line.trim();
        if word.is_empty() || word.starts_with('#') {
            continue;
        }
        words.insert(word.to_string());
    }
    Ok(words)
}

/// Corpus on-disk layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One JSON object per line: `{"id": ..., "text": ..., "labels": [...]}`.
    Jsonl,
    /// Each `*.txt` file is one document; id is the filename stem, no labels.
    Directory,
}

/// A malformed record encountered while streaming a corpus. Processing
/// continues past these.
#[derive(Debug, Clone)]
pub struct RecordError {
    /// JSONL line number (1-based) or the offending file name in directory mode.
    pub location: String,
    pub message: String,
}

impl std::fmt::Display for RecordError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Open a corpus for streaming. Unreadable paths are fatal; malformed records
/// are yielded as `Err` items with their location and do not stop the stream.
pub fn load_corpus(
    path: impl AsRef<Path>,
    format: CorpusFormat,
) -> Result<CorpusReader> {
    let path = path.as_ref();
    match format {
        CorpusFormat::Jsonl => {
            let file = File::open(path).map_err(|e| Error::io(path, e))?;
            Ok(CorpusReader::Jsonl {
                lines: BufReader::new(file).lines(),
                line_no: 0,
            })
        }
        CorpusFormat::Directory => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| Error::io(path, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
                .collect();
            files.sort();
            Ok(CorpusReader::Directory { files, next: 0 })
        }
    }
}

/// Streaming corpus iterator returned by [`load_corpus`].
pub enum CorpusReader {
    Jsonl {
        lines: std::io::Lines<BufReader<File>>,
        line_no: usize,
    },
    Directory {
        files: Vec<PathBuf>,
        next: usize,
    },
}

impl Iterator for CorpusReader {
    type Item = std::result::Result<LabeledDocument, RecordError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            CorpusReader::Jsonl { lines, line_no } => loop {
                let line = lines.next()?;
                *line_no += 1;
                let line = match line {
                    Ok(line) => line,
                    Err(e) => {
                        return Some(Err(RecordError {
                            location: format!("line {}", line_no),
                            message: e.to_string(),
                        }))
                    }
                };
                if line.trim().is_empty() {
                    continue;
                }
                return Some(parse_jsonl_record(&line, *line_no));
            },
            CorpusReader::Directory { files, next } => {
                let path = files.get(*next)?.clone();
                *next += 1;
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                match std::fs::read_to_string(&path) {
                    Ok(text) => Some(Ok(LabeledDocument {
                        id,
                        text,
                        labels: BTreeSet::new(),
                    })),
                    Err(e) => Some(Err(RecordError {
                        location: path.display().to_string(),
                        message: e.to_string(),
                    })),
                }
            }
        }
    }
}

fn parse_jsonl_record(
    line: &str,
    line_no: usize,
) -> std::result::Result<LabeledDocument, RecordError> {
    let location = format!("line {}", line_no);
    let value: serde_json::Value = serde_json::from_str(line)
        .map_err(|e| RecordError {
            location: location.clone(),
            message: format!("invalid JSON: {}", e),
        })?;
    let obj = value.as_object().ok_or_else(|| RecordError {
        location: location.clone(),
        message: "record is not a JSON object".to_string(),
    })?;
    let id = obj
        .get("id")
        .and_then(|v| v.as_str())
        .ok_or_else(|| RecordError {
            location: location.clone(),
            message: "missing string field \"id\"".to_string(),
        })?
        .to_string();
    let text = obj
        .get("text")
        .and_then(|v| v.as_str())
        .ok_or_else(|| RecordError {
            location: location.clone(),
            message: "missing string field \"text\"".to_string(),
        })?
        .to_string();
    let mut labels = BTreeSet::new();
    if let Some(raw) = obj.get("labels") {
        let arr = raw.as_array().ok_or_else(|| RecordError {
            location: location.clone(),
            message: "\"labels\" must be an array of strings".to_string(),
        })?;
        for item in arr {
            let label = item.as_str().ok_or_else(|| RecordError {
                location: location.clone(),
                message: "\"labels\" must be an array of strings".to_string(),
            })?;
            labels.insert(label.to_string());
        }
    }
    Ok(LabeledDocument { id, text, labels })
}
