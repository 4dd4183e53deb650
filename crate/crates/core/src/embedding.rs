//! Pre-trained embedding lexicon loading and token-to-matrix mapping.
//!
//! The lexicon format is the whitespace-separated text layout used by the
//! common pre-trained distributions: one token per line followed by its
//! vector components, with an optional leading `V D` count header.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::textprep::TokenStream;

/// An immutable token -> vector map with a fixed dimension `D`.
/// Vectors are stored contiguously at 64-bit precision.
#[derive(Debug)]
pub struct EmbeddingLexicon {
    dimension: usize,
    index: HashMap<String, usize>,
    tokens: Vec<String>,
    vectors: Vec<f64>,
    duplicate_count: usize,
}

impl EmbeddingLexicon {
    /// Build a lexicon from (token, vector) pairs. Mostly useful for tests and
    /// synthetic corpora; files go through [`load_lexicon`].
    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut lex = EmbeddingLexicon {
            dimension: 0,
            index: HashMap::new(),
            tokens: Vec::new(),
            vectors: Vec::new(),
            duplicate_count: 0,
        };
        for (token, vector) in entries {
            let token = token.into();
            if lex.dimension == 0 {
                lex.dimension = vector.len();
            }
            if vector.len() != lex.dimension {
                return Err(Error::ContractViolation(format!(
                    "vector for '{}' has {} entries, expected {}",
                    token,
                    vector.len(),
                    lex.dimension
                )));
            }
            if !vector.iter().all(|v| v.is_finite()) {
                return Err(Error::ContractViolation(format!(
                    "vector for '{}' has non-finite entries",
                    token
                )));
            }
            lex.insert(token, &vector);
        }
        Ok(lex)
    }

    fn insert(&mut self, token: String, vector: &[f64]) {
        if self.index.contains_key(&token) {
            self.duplicate_count += 1;
            log::warn!("duplicate lexicon token '{}' ignored (keeping first)", token);
            return;
        }
        let row = self.tokens.len();
        self.index.insert(token.clone(), row);
        self.tokens.push(token);
        self.vectors.extend_from_slice(vector);
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of duplicate tokens dropped during load.
    pub fn duplicate_count(&self) -> usize {
        self.duplicate_count
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&row| {
            &self.vectors[row * self.dimension..(row + 1) * self.dimension]
        })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// Write the lexicon back out in the text format, tokens in load order.
    pub fn dump(&self, mut out: impl Write) -> std::io::Result<()> {
        for (row, token) in self.tokens.iter().enumerate() {
            write!(out, "{}", token)?;
            for v in &self.vectors[row * self.dimension..(row + 1) * self.dimension] {
                write!(out, " {}", v)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Parse a lexicon file. The dimension is inferred from the first data line;
/// every later line must match it or loading fails with that line number.
/// An optional first line of exactly two integers is treated as a count
/// header and skipped.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<EmbeddingLexicon> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_lexicon_from(BufReader::new(file))
}

/// Same as [`load_lexicon`] but over any buffered reader.
pub fn load_lexicon_from(reader: impl BufRead) -> Result<EmbeddingLexicon> {
    let mut lex = EmbeddingLexicon {
        dimension: 0,
        index: HashMap::new(),
        tokens: Vec::new(),
        vectors: Vec::new(),
        duplicate_count: 0,
    };
    let mut vector = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::LexiconParse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields.next().expect("non-empty line has a first field");
        vector.clear();
        let mut bad_field = None;
        for field in fields {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => vector.push(v),
                _ => {
                    bad_field = Some(field.to_string());
                    break;
                }
            }
        }
        // Header detection: a first line of exactly two integer fields.
        if lex.dimension == 0 && lex.tokens.is_empty() && vector.len() == 1 && bad_field.is_none()
        {
            let looks_integral = |s: &str| s.parse::<u64>().is_ok();
            if looks_integral(token) && line.split_whitespace().nth(1).is_some_and(looks_integral)
            {
                continue;
            }
        }
        if let Some(field) = bad_field {
            return Err(Error::LexiconParse {
                line: line_no,
                message: format!("cannot parse '{}' as a finite number", field),
            });
        }
        if vector.is_empty() {
            return Err(Error::LexiconParse {
                line: line_no,
                message: "line has a token but no vector components".to_string(),
            });
        }
        if lex.dimension == 0 {
            lex.dimension = vector.len();
        } else if vector.len() != lex.dimension {
            return Err(Error::LexiconParse {
                line: line_no,
                message: format!(
                    "expected {} components, found {}",
                    lex.dimension,
                    vector.len()
                ),
            });
        }
        lex.insert(token.to_string(), &vector);
    }
    Ok(lex)
}

/// The `T x D` embedding matrix of one document, rows in token order.
#[derive(Debug, Clone, PartialEq)]
pub struct DocMatrix {
    rows: usize,
    dim: usize,
    values: Vec<f64>,
}

impl DocMatrix {
    pub fn from_rows(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut values = Vec::with_capacity(rows.len() * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::ContractViolation(format!(
                    "row has {} entries, expected {}",
                    row.len(),
                    dim
                )));
            }
            values.extend_from_slice(row);
        }
        Ok(DocMatrix {
            rows: rows.len(),
            dim,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t * self.dim..(t + 1) * self.dim]
    }

    pub fn get(&self, t: usize, d: usize) -> f64 {
        self.values[t * self.dim + d]
    }
}

/// Map a token stream to its document matrix, dropping out-of-vocabulary
/// tokens. Returns the matrix and the OOV count; a document with zero
/// in-vocabulary tokens is an error carrying the document id.
pub fn embed_document(
    tokens: &TokenStream,
    lexicon: &EmbeddingLexicon,
) -> Result<(DocMatrix, usize)> {
    let dim = lexicon.dimension();
    let mut values = Vec::new();
    let mut kept = 0usize;
    let mut oov = 0usize;
    for token in &tokens.tokens {
        match lexicon.get(token) {
            Some(vector) => {
                values.extend_from_slice(vector);
                kept += 1;
            }
            None => oov += 1,
        }
    }
    if kept == 0 {
        return Err(Error::DegenerateDocument {
            id: tokens.source_id.clone(),
        });
    }
    Ok((
        DocMatrix {
            rows: kept,
            dim,
            values,
        },
        oov,
    ))
}
