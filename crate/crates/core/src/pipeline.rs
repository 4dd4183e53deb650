//! Per-document pipeline: token stream -> embedded matrix -> smoothed
//! series -> dimension distance matrix -> sensitivity features.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram_metric::DiagramMetric;
use crate::embedding::{embed_document, EmbeddingLexicon};
use crate::error::Result;
use crate::features::{ties_features, TiesSensitivity};
use crate::geometry::distance_matrix;
use crate::signal::{smooth, WindowSpec};
use crate::textprep::{LabeledDocument, TokenStream, TokenizeOptions};

/// Run-level knobs shared by every document of a batch.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub tokenize: TokenizeOptions,
    pub window: WindowSpec,
    pub metric: DiagramMetric,
}

/// Per-document counters carried alongside the feature vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentMeta {
    /// Embedded (in-vocabulary) token count T.
    pub tokens: usize,
    /// Smoothed length: T - window + 1.
    pub smoothed_len: usize,
    /// Embedding dimension D.
    pub dim: usize,
    /// Tokens dropped for being out of vocabulary.
    pub oov: usize,
    /// 1-based embedding dimensions whose smoothed column was identically zero.
    pub degenerate_dims: Vec<usize>,
}

/// The pipeline output for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentFeatures {
    pub id: String,
    pub labels: BTreeSet<String>,
    pub sensitivity: TiesSensitivity,
    pub meta: DocumentMeta,
}

/// Run one document through the full pipeline.
pub fn extract_document(
    doc: &LabeledDocument,
    lexicon: &EmbeddingLexicon,
    opts: &PipelineOptions,
) -> Result<DocumentFeatures> {
    let stream = TokenStream::from_document(doc, &opts.tokenize);
    let (matrix, oov) = embed_document(&stream, lexicon)?;
    let smoothed = smooth(&matrix, opts.window)?;
    let phi = distance_matrix(&smoothed)?;
    let sensitivity = ties_features(&phi, opts.metric)?;
    Ok(DocumentFeatures {
        id: doc.id.clone(),
        labels: doc.labels.clone(),
        sensitivity,
        meta: DocumentMeta {
            tokens: matrix.rows(),
            smoothed_len: smoothed.rows(),
            dim: phi.size(),
            oov,
            degenerate_dims: phi.degenerate_dims().to_vec(),
        },
    })
}
