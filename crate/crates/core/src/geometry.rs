//! Pairwise dissimilarity between embedding dimensions of a smoothed document.
//!
//! For columns `xi`, `xj` of the smoothed matrix the dissimilarity is
//! `(1/T) * (|xi| |xj| - xi . xj)` with `T` the smoothed length — zero when
//! the columns are positively collinear, growing with both magnitude and
//! angular separation. It is symmetric and nonnegative but not a metric;
//! downstream consumers treat it as a general dissimilarity.

use crate::error::{Error, Result};
use crate::signal::SmoothedMatrix;

/// Symmetric `D x D` dissimilarity matrix over embedding dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    values: Vec<f64>,
    dim_labels: Vec<usize>,
    degenerate_dims: Vec<usize>,
}

impl DistanceMatrix {
    /// Wrap an explicit symmetric matrix. Checks symmetry, zero diagonal,
    /// nonnegativity, and finiteness; labels default to 1..=D.
    pub fn from_values(size: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != size * size {
            return Err(Error::ContractViolation(format!(
                "{} values do not form a {size}x{size} matrix",
                values.len()
            )));
        }
        for i in 0..size {
            if values[i * size + i] != 0.0 {
                return Err(Error::ContractViolation(format!(
                    "nonzero diagonal at {i}"
                )));
            }
            for j in 0..size {
                let v = values[i * size + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::ContractViolation(format!(
                        "entry ({i},{j}) = {v} is not a finite nonnegative value"
                    )));
                }
                if values[j * size + i] != v {
                    return Err(Error::ContractViolation(format!(
                        "asymmetry at ({i},{j})"
                    )));
                }
            }
        }
        Ok(DistanceMatrix {
            size,
            values,
            dim_labels: (1..=size).collect(),
            degenerate_dims: Vec::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.size..(i + 1) * self.size]
    }

    /// Original embedding-dimension index (1-based) behind each row/column.
    pub fn dim_labels(&self) -> &[usize] {
        &self.dim_labels
    }

    /// Labels of all-zero columns in the source matrix, if any.
    pub fn degenerate_dims(&self) -> &[usize] {
        &self.degenerate_dims
    }

    /// The matrix with row/column `d` (0-based) deleted; labels follow.
    pub fn remove_dimension(&self, d: usize) -> DistanceMatrix {
        assert!(d < self.size, "dimension {d} out of range");
        let n = self.size - 1;
        let mut values = Vec::with_capacity(n * n);
        for i in (0..self.size).filter(|&i| i != d) {
            for j in (0..self.size).filter(|&j| j != d) {
                values.push(self.get(i, j));
            }
        }
        let keep = |v: &Vec<usize>| {
            v.iter()
                .enumerate()
                .filter(|&(i, _)| i != d)
                .map(|(_, &x)| x)
                .collect()
        };
        DistanceMatrix {
            size: n,
            values,
            dim_labels: keep(&self.dim_labels),
            degenerate_dims: self.degenerate_dims.clone(),
        }
    }
}

/// Dissimilarity between two equal-length series: `(|xi||xj| - xi.xj) / T`.
/// Computed through the equivalent residual form
/// `||xj| xi - |xi| xj|^2 / (2 |xi||xj| T)`, a quotient of nonnegative sums
/// that avoids the cancellation the direct difference suffers when the
/// series are nearly parallel. Exactly zero for a series against itself.
pub fn phi(xi: &[f64], xj: &[f64]) -> Result<f64> {
    if xi.len() != xj.len() || xi.is_empty() {
        return Err(Error::ContractViolation(format!(
            "series lengths {} and {} (both must be equal and nonzero)",
            xi.len(),
            xj.len()
        )));
    }
    let nsq_i: f64 = xi.iter().map(|&v| v * v).sum();
    let nsq_j: f64 = xj.iter().map(|&v| v * v).sum();
    Ok(phi_from_norms(xi, xj, nsq_i, nsq_j))
}

fn phi_from_norms(xi: &[f64], xj: &[f64], nsq_i: f64, nsq_j: f64) -> f64 {
    if nsq_i == 0.0 || nsq_j == 0.0 {
        return 0.0;
    }
    let ni = nsq_i.sqrt();
    let nj = nsq_j.sqrt();
    let mut rsq = 0.0;
    for (&a, &b) in xi.iter().zip(xj) {
        let r = nj * a - ni * b;
        rsq += r * r;
    }
    rsq / (2.0 * ni * nj) / xi.len() as f64
}

/// All pairwise dissimilarities between the columns of a smoothed document.
/// All-zero columns are permitted but reported (and logged) as degenerate.
pub fn distance_matrix(x: &SmoothedMatrix) -> Result<DistanceMatrix> {
    let d = x.dim();
    if d < 2 {
        return Err(Error::TooFewDimensions { got: d, min: 2 });
    }
    let t = x.rows();
    if t == 0 {
        return Err(Error::ContractViolation(
            "smoothed matrix has no rows".to_string(),
        ));
    }
    let columns: Vec<Vec<f64>> = (0..d).map(|i| x.column(i)).collect();
    let norms_sq: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|&v| v * v).sum())
        .collect();
    let mut values = vec![0.0f64; d * d];
    for i in 0..d {
        for j in (i + 1)..d {
            let v = phi_from_norms(&columns[i], &columns[j], norms_sq[i], norms_sq[j]);
            values[i * d + j] = v;
            values[j * d + i] = v;
        }
    }
    let degenerate: Vec<usize> = (0..d).filter(|&i| norms_sq[i] == 0.0).map(|i| i + 1).collect();
    for &label in &degenerate {
        log::warn!("embedding dimension {} is identically zero", label);
    }
    Ok(DistanceMatrix {
        size: d,
        values,
        dim_labels: (1..=d).collect(),
        degenerate_dims: degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::DocMatrix;
    use crate::signal::{smooth, WindowKind, WindowSpec};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phi_hand_values() {
        assert_eq!(phi(&[1.0, 2.0], &[2.0, 1.0]).unwrap(), 0.5);
        assert_eq!(phi(&[2.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn phi_self_is_exactly_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x: Vec<f64> = (0..17).map(|_| rng.random_range(-5.0..5.0)).collect();
            assert_eq!(phi(&x, &x).unwrap(), 0.0);
        }
    }

    #[test]
    fn phi_length_mismatch() {
        assert!(phi(&[1.0], &[1.0, 2.0]).is_err());
        assert!(phi(&[], &[]).is_err());
    }

    fn smoothed(dim: usize, rows: Vec<Vec<f64>>) -> SmoothedMatrix {
        SmoothedMatrix::from_raw(dim, rows.into_iter().flatten().collect()).unwrap()
    }

    #[test]
    fn two_column_example() {
        let x = smoothed(2, vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
        let m = distance_matrix(&x).unwrap();
        assert_eq!(m.row(0), &[0.0, 0.5]);
        assert_eq!(m.row(1), &[0.5, 0.0]);
    }

    #[test]
    fn duplicate_columns_are_at_distance_zero() {
        let x = smoothed(3, vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 1.0]]);
        let m = distance_matrix(&x).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
        assert!(m.get(0, 2) > 0.0);
    }

    #[test]
    fn zero_column_is_flagged() {
        let x = smoothed(2, vec![vec![1.0, 0.0], vec![2.0, 0.0]]);
        let m = distance_matrix(&x).unwrap();
        assert_eq!(m.degenerate_dims(), &[2]);
        assert_eq!(m.get(0, 1), 0.0);
    }

    #[test]
    fn one_column_is_rejected() {
        let x = smoothed(1, vec![vec![1.0], vec![2.0]]);
        match distance_matrix(&x).unwrap_err() {
            Error::TooFewDimensions { got, min } => assert_eq!((got, min), (1, 2)),
            other => panic!("unexpected error {:?}", other),
        }
    }

    #[test]
    fn remove_dimension_drops_row_and_column() {
        let m = DistanceMatrix::from_values(
            3,
            vec![0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 2.0, 3.0, 0.0],
        )
        .unwrap();
        let r = m.remove_dimension(1);
        assert_eq!(r.size(), 2);
        assert_eq!(r.get(0, 1), 2.0);
        assert_eq!(r.dim_labels(), &[1, 3]);
    }

    #[test]
    fn from_values_rejects_asymmetry() {
        assert!(DistanceMatrix::from_values(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_values(2, vec![0.5, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_values(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
    }

    fn random_smoothed(rng: &mut ChaCha8Rng, rows: usize, dim: usize) -> SmoothedMatrix {
        let values = (0..rows * dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        SmoothedMatrix::from_raw(dim, values).unwrap()
    }

    #[test]
    fn homogeneity_degree_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            // Short columns can land nearly parallel by chance, where the
            // α² comparison is ill-conditioned in the inputs themselves.
            let rows = rng.random_range(8..40);
            let dim = rng.random_range(2..10);
            let x = random_smoothed(&mut rng, rows, dim);
            let alpha: f64 = rng.random_range(0.1..4.0);
            let scaled = SmoothedMatrix::from_raw(
                dim,
                (0..rows)
                    .flat_map(|t| x.row(t).iter().map(|&v| alpha * v).collect::<Vec<_>>())
                    .collect(),
            )
            .unwrap();
            let m = distance_matrix(&x).unwrap();
            let ms = distance_matrix(&scaled).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    let expect = alpha * alpha * m.get(i, j);
                    let got = ms.get(i, j);
                    let scale = expect.abs().max(1e-300);
                    assert!(
                        (got - expect).abs() / scale < 1e-12 || (got - expect).abs() < 1e-300,
                        "({i},{j}): {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn size_insensitive_under_tiling() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let dim = 4;
        let block: Vec<Vec<f64>> = (0..600)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let w = WindowSpec::new(WindowKind::Arithmetic, 3).unwrap();
        let reference = {
            let x = DocMatrix::from_rows(dim, block.clone()).unwrap();
            distance_matrix(&smooth(&x, w).unwrap()).unwrap()
        };
        for k in 2..=8usize {
            let tiled: Vec<Vec<f64>> = std::iter::repeat_n(block.clone(), k).flatten().collect();
            let x = DocMatrix::from_rows(dim, tiled).unwrap();
            let m = distance_matrix(&smooth(&x, w).unwrap()).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    if i == j {
                        continue;
                    }
                    let rel = (m.get(i, j) - reference.get(i, j)).abs() / reference.get(i, j);
                    assert!(rel < 0.02, "k={k} ({i},{j}): rel deviation {rel}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn symmetric_nonnegative_zero_diagonal(
            seed in 0u64..500,
            rows in 1usize..32,
            dim in 2usize..8,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_smoothed(&mut rng, rows, dim);
            let m = distance_matrix(&x).unwrap();
            for i in 0..dim {
                prop_assert_eq!(m.get(i, i), 0.0);
                for j in 0..dim {
                    prop_assert!(m.get(i, j) >= 0.0);
                    prop_assert!(m.get(i, j).is_finite());
                    prop_assert_eq!(m.get(i, j), m.get(j, i));
                }
            }
        }

        #[test]
        fn permutation_equivariance(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows = rng.random_range(2..24);
            let dim = rng.random_range(2..8);
            let x = random_smoothed(&mut rng, rows, dim);
            let mut perm: Vec<usize> = (0..dim).collect();
            for i in (1..dim).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let permuted = SmoothedMatrix::from_raw(
                dim,
                (0..rows)
                    .flat_map(|t| perm.iter().map(|&p| x.get(t, p)).collect::<Vec<_>>())
                    .collect(),
            ).unwrap();
            let m = distance_matrix(&x).unwrap();
            let mp = distance_matrix(&permuted).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    prop_assert_eq!(mp.get(i, j), m.get(perm[i], perm[j]));
                }
            }
        }
    }
}
