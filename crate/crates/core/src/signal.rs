//! Sliding-window aggregation of the embedded token series.
//!
//! Each output row is the weighted sum over a full window of input rows
//! (valid mode: partial windows at the edges are dropped), so a `T x D`
//! input yields a `(T - window + 1) x D` output.

use serde::{Deserialize, Serialize};

use crate::embedding::DocMatrix;
use crate::error::{Error, Result};

/// Window weighting scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    /// Unit weights: plain summation over the window.
    Arithmetic,
    /// Geometric decay from the center: weight 2^{-|s|} at offset s.
    Exponential,
}

impl std::fmt::Display for WindowKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WindowKind::Arithmetic => write!(f, "arithmetic"),
            WindowKind::Exponential => write!(f, "exponential"),
        }
    }
}

/// A validated smoothing window: an odd size and a weighting scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    kind: WindowKind,
    size: usize,
}

impl WindowSpec {
    /// Window sizes must be odd and at least 1.
    pub fn new(kind: WindowKind, size: usize) -> Result<Self> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(Error::InvalidWindow(size));
        }
        Ok(WindowSpec { kind, size })
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Half-width: offsets run over -half..=half.
    pub fn half(&self) -> usize {
        (self.size - 1) / 2
    }

    /// The window weights at offsets -half..=half, in order.
    pub fn weights(&self) -> Vec<f64> {
        let half = self.half() as i64;
        (-half..=half)
            .map(|s| match self.kind {
                WindowKind::Arithmetic => 1.0,
                WindowKind::Exponential => (2.0f64).powi(-(s.abs() as i32)),
            })
            .collect()
    }
}

/// The smoothed series: `(T - window + 1) x D`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedMatrix {
    rows: usize,
    dim: usize,
    values: Vec<f64>,
}

impl SmoothedMatrix {
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

    pub fn column(&self, d: usize) -> Vec<f64> {
        (0..self.rows).map(|t| self.get(t, d)).collect()
    }

    /// Build directly from row-major values; used by tests and synthetic
    /// inputs that skip the smoothing stage.
    pub fn from_raw(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 || !values.len().is_multiple_of(dim) {
            return Err(Error::ContractViolation(format!(
                "{} values do not form rows of width {}",
                values.len(),
                dim
            )));
        }
        Ok(SmoothedMatrix {
            rows: values.len() / dim,
            dim,
            values,
        })
    }
}

/// Weighted sliding-window sum over full windows only.
pub fn smooth(x: &DocMatrix, w: WindowSpec) -> Result<SmoothedMatrix> {
    if x.rows() < w.size() {
        return Err(Error::DocumentTooShort {
            rows: x.rows(),
            window: w.size(),
        });
    }
    let dim = x.dim();
    let out_rows = x.rows() - w.size() + 1;
    let weights = w.weights();
    let mut values = vec![0.0f64; out_rows * dim];
    for t in 0..out_rows {
        let out = &mut values[t * dim..(t + 1) * dim];
        for (s, &weight) in weights.iter().enumerate() {
            let row = x.row(t + s);
            for d in 0..dim {
                out[d] += weight * row[d];
            }
        }
    }
    Ok(SmoothedMatrix {
        rows: out_rows,
        dim,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn column_matrix(values: &[f64]) -> DocMatrix {
        DocMatrix::from_rows(1, values.iter().map(|&v| vec![v]).collect()).unwrap()
    }

    #[test]
    fn rejects_even_and_zero_sizes() {
        assert!(WindowSpec::new(WindowKind::Arithmetic, 0).is_err());
        assert!(WindowSpec::new(WindowKind::Arithmetic, 2).is_err());
        assert!(WindowSpec::new(WindowKind::Exponential, 4).is_err());
        assert!(WindowSpec::new(WindowKind::Arithmetic, 1).is_ok());
    }

    #[test]
    fn arithmetic_window_sums() {
        let x = column_matrix(&[1.0, 2.0, 3.0, 4.0]);
        let w = WindowSpec::new(WindowKind::Arithmetic, 3).unwrap();
        let y = smooth(&x, w).unwrap();
        assert_eq!(y.rows(), 2);
        assert_eq!(y.column(0), vec![6.0, 9.0]);
    }

    #[test]
    fn constant_column_scales_by_window_size() {
        let x = column_matrix(&[2.5; 9]);
        for size in [1usize, 3, 5, 7] {
            let w = WindowSpec::new(WindowKind::Arithmetic, size).unwrap();
            let y = smooth(&x, w).unwrap();
            assert_eq!(y.rows(), 9 - size + 1);
            for t in 0..y.rows() {
                assert_eq!(y.get(t, 0), size as f64 * 2.5);
            }
        }
    }

    #[test]
    fn exponential_impulse_response() {
        let mut values = vec![0.0; 13];
        values[6] = 1.0;
        let x = column_matrix(&values);
        let w = WindowSpec::new(WindowKind::Exponential, 7).unwrap();
        let y = smooth(&x, w).unwrap();
        assert_eq!(y.rows(), 7);
        let expected = [0.125, 0.25, 0.5, 1.0, 0.5, 0.25, 0.125];
        // Output row t covers input rows t..t+6, so the impulse at input
        // row 6 appears at offset 6-t.
        for (t, &e) in expected.iter().enumerate() {
            assert_eq!(y.get(6 - t, 0), e, "row {}", 6 - t);
        }
        assert_eq!(y.column(0), expected.to_vec());
    }

    #[test]
    fn window_one_is_identity() {
        let x = column_matrix(&[3.0, -1.0, 0.5]);
        for kind in [WindowKind::Arithmetic, WindowKind::Exponential] {
            let w = WindowSpec::new(kind, 1).unwrap();
            let y = smooth(&x, w).unwrap();
            assert_eq!(y.column(0), vec![3.0, -1.0, 0.5]);
        }
    }

    #[test]
    fn short_document_errors() {
        let x = column_matrix(&[1.0, 2.0]);
        let w = WindowSpec::new(WindowKind::Arithmetic, 3).unwrap();
        match smooth(&x, w).unwrap_err() {
            Error::DocumentTooShort { rows, window } => {
                assert_eq!((rows, window), (2, 3));
            }
            other => panic!("unexpected error {:?}", other),
        }
    }

    #[test]
    fn exponential_weights_sum() {
        let w = WindowSpec::new(WindowKind::Exponential, 7).unwrap();
        let total: f64 = w.weights().iter().sum();
        assert_eq!(total, 2.75);
    }

    proptest! {
        #[test]
        fn linearity(
            a in -4.0f64..4.0,
            b in -4.0f64..4.0,
            xs in proptest::collection::vec(-10.0f64..10.0, 7..24),
            seed in 0u64..1000,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let ys: Vec<f64> = (0..xs.len()).map(|_| rng.random_range(-10.0..10.0)).collect();
            let combined: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| a * x + b * y).collect();
            for (kind, size) in [
                (WindowKind::Arithmetic, 3),
                (WindowKind::Exponential, 5),
                (WindowKind::Arithmetic, 7),
            ] {
                let w = WindowSpec::new(kind, size).unwrap();
                let sx = smooth(&column_matrix(&xs), w).unwrap();
                let sy = smooth(&column_matrix(&ys), w).unwrap();
                let sc = smooth(&column_matrix(&combined), w).unwrap();
                for t in 0..sc.rows() {
                    assert_abs_diff_eq!(
                        sc.get(t, 0),
                        a * sx.get(t, 0) + b * sy.get(t, 0),
                        epsilon = 1e-9
                    );
                }
            }
        }

        #[test]
        fn output_length_is_valid_mode(
            len in 1usize..40,
            half in 0usize..4,
        ) {
            let size = 2 * half + 1;
            let xs: Vec<f64> = (0..len).map(|i| i as f64).collect();
            let w = WindowSpec::new(WindowKind::Arithmetic, size).unwrap();
            let result = smooth(&column_matrix(&xs), w);
            if len >= size {
                prop_assert_eq!(result.unwrap().rows(), len - size + 1);
            } else {
                prop_assert!(result.is_err());
            }
        }
    }
}
