//! Per-dimension topological sensitivity features.
//!
//! For each embedding dimension `d`, the feature pair measures how much the
//! dimension-0 and dimension-1 persistence diagrams move (in a chosen
//! diagram distance over finite bars) when dimension `d` is deleted from
//! the distance matrix. A document thus becomes two length-`D` vectors, one
//! per homology dimension.

use rayon::prelude::*;

use crate::diagram_metric::{diagram_distance, DiagramMetric};
use crate::geometry::DistanceMatrix;
use crate::persistence::{remove_dimension, rips_persistence, HomologyDim};
use crate::error::Result;

/// Leave-one-out sensitivity vectors: `v0[d]` and `v1[d]` are the diagram
/// shifts caused by deleting embedding dimension `d+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiesSensitivity {
    pub v0: Vec<f64>,
    pub v1: Vec<f64>,
}

impl TiesSensitivity {
    pub fn dim(&self) -> usize {
        self.v0.len()
    }

    /// The persisted feature layout: v0 then v1.
    pub fn concatenated(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.v0.len() + self.v1.len());
        out.extend_from_slice(&self.v0);
        out.extend_from_slice(&self.v1);
        out
    }
}

/// Compute both sensitivity vectors for a distance matrix. The full diagram
/// is computed once; the D leave-one-out diagrams run in parallel, with
/// output order fixed by dimension index.
pub fn ties_features(phi: &DistanceMatrix, metric: DiagramMetric) -> Result<TiesSensitivity> {
    let full = rips_persistence(phi, HomologyDim::One)?;
    let d = phi.size();
    let pairs: Vec<(f64, f64)> = (1..=d)
        .into_par_iter()
        .map(|dim| -> Result<(f64, f64)> {
            let reduced = remove_dimension(phi, dim)?;
            let diagram = rips_persistence(&reduced, HomologyDim::One)?;
            Ok((
                diagram_distance(&full, &diagram, HomologyDim::Zero, metric),
                diagram_distance(&full, &diagram, HomologyDim::One, metric),
            ))
        })
        .collect::<Result<_>>()?;
    let (v0, v1) = pairs.into_iter().unzip();
    Ok(TiesSensitivity { v0, v1 })
}
