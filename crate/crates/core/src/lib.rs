//! Topological feature extraction from word-embedding representations of text.
//!
//! A document is treated as a `T x D` matrix of token embeddings, smoothed
//! with a sliding window, and reduced to a `D x D` dissimilarity matrix
//! between embedding dimensions. Vietoris-Rips persistent homology of that
//! matrix yields persistence diagrams in homology dimensions 0 and 1, and
//! the final feature vector records how much each diagram moves (in
//! Wasserstein or bottleneck distance) when one embedding dimension is
//! removed: two arrays of length `D`, one per homology dimension.
//!
//! The crate also ships a small evaluation harness (train/test split,
//! one-vs-rest logistic regression, micro-averaged metrics) for desk-scale
//! classification experiments on the extracted features.

pub mod diagram_metric;
pub mod embedding;
pub mod error;
pub mod evalharness;
pub mod features;
pub mod geometry;
pub mod persistence;
pub mod pipeline;
pub mod signal;
pub mod textprep;

mod assignment;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use diagram_metric::{bottleneck, diagram_distance, wasserstein, DiagramMetric};
pub use embedding::{DocMatrix, EmbeddingLexicon};
pub use error::{Error, Result};
pub use features::{ties_features, TiesSensitivity};
pub use geometry::{distance_matrix, phi, DistanceMatrix};
pub use persistence::{
    mst_deaths, remove_dimension, rips_persistence, DiagramPoint, HomologyDim,
    PersistenceDiagram,
};
pub use pipeline::{extract_document, DocumentFeatures, PipelineOptions};
pub use signal::{smooth, SmoothedMatrix, WindowKind, WindowSpec};
pub use textprep::{tokenize, LabeledDocument, TokenStream, TokenizeOptions};
