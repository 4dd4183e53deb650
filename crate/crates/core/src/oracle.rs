//! Slow reference implementations used to cross-check the fast paths.
//!
//! Everything here favors obviousness over speed: the persistence oracle
//! reduces the full boundary matrix over every simplex of dimension <= 2
//! with no threshold and no clearing, and the matching oracle enumerates
//! every partial matching between two small diagrams. Test-only; exposed
//! behind the `oracle` feature so integration suites can call it.

use rand::Rng;

use crate::geometry::DistanceMatrix;
use crate::persistence::{DiagramPoint, HomologyDim, PersistenceDiagram};

/// Random symmetric dissimilarity matrix with off-diagonal entries in
/// `(lo, hi)`; the standard fixture for oracle-equivalence sweeps.
pub fn random_distance_matrix(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DistanceMatrix {
    let mut values = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.random_range(lo..hi);
            values[i * n + j] = w;
            values[j * n + i] = w;
        }
    }
    DistanceMatrix::from_values(n, values).expect("construction is valid")
}

/// Random finite bar list with up to `max_points` points (possibly empty),
/// births in [0, 3) and strictly positive persistence.
pub fn random_bars(rng: &mut impl Rng, max_points: usize) -> Vec<(f64, f64)> {
    let count = rng.random_range(0..=max_points);
    (0..count)
        .map(|_| {
            let birth = rng.random_range(0.0..3.0);
            let death = birth + rng.random_range(0.01..3.0);
            (birth, death)
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Simplex {
    dim: u8,
    vertices: [u32; 3],
}

/// Persistence of the full Rips filtration (dimensions 0 and 1) by plain
/// column reduction of the complete boundary matrix — every vertex, edge,
/// and triangle, globally ordered by (filtration value, dimension,
/// lexicographic vertex tuple). Zero-persistence pairs are discarded to
/// match the production engine's contract.
pub fn brute_force_persistence(phi: &DistanceMatrix) -> PersistenceDiagram {
    let n = phi.size();
    let mut cells: Vec<(f64, Simplex)> = Vec::new();
    for i in 0..n as u32 {
        cells.push((0.0, Simplex { dim: 0, vertices: [i, 0, 0] }));
    }
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            let w = phi.get(i as usize, j as usize);
            cells.push((w, Simplex { dim: 1, vertices: [i, j, 0] }));
            for k in (j + 1)..n as u32 {
                let t = w
                    .max(phi.get(i as usize, k as usize))
                    .max(phi.get(j as usize, k as usize));
                cells.push((t, Simplex { dim: 2, vertices: [i, j, k] }));
            }
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let position: std::collections::HashMap<Simplex, usize> = cells
        .iter()
        .enumerate()
        .map(|(pos, &(_, s))| (s, pos))
        .collect();

    let boundary = |s: &Simplex| -> Vec<usize> {
        let mut rows: Vec<usize> = match s.dim {
            0 => Vec::new(),
            1 => {
                let [i, j, _] = s.vertices;
                vec![
                    position[&Simplex { dim: 0, vertices: [i, 0, 0] }],
                    position[&Simplex { dim: 0, vertices: [j, 0, 0] }],
                ]
            }
            _ => {
                let [i, j, k] = s.vertices;
                vec![
                    position[&Simplex { dim: 1, vertices: [i, j, 0] }],
                    position[&Simplex { dim: 1, vertices: [i, k, 0] }],
                    position[&Simplex { dim: 1, vertices: [j, k, 0] }],
                ]
            }
        };
        rows.sort_unstable();
        rows
    };

    let mut columns: Vec<Vec<usize>> = cells.iter().map(|(_, s)| boundary(s)).collect();
    let mut pivot_owner: Vec<Option<usize>> = vec![None; cells.len()];
    let mut points = Vec::new();
    for col in 0..columns.len() {
        while let Some(&low) = columns[col].last() {
            match pivot_owner[low] {
                Some(owner) => {
                    let merged = xor(&columns[col], &columns[owner]);
                    columns[col] = merged;
                }
                None => {
                    pivot_owner[low] = Some(col);
                    let birth = cells[low].0;
                    let death = cells[col].0;
                    if death > birth {
                        let hdim = match cells[low].1.dim {
                            0 => HomologyDim::Zero,
                            _ => HomologyDim::One,
                        };
                        points.push(DiagramPoint { hdim, birth, death });
                    }
                    break;
                }
            }
        }
    }
    // Essential classes: positive cells that never became a pivot.
    for (idx, &(birth, s)) in cells.iter().enumerate() {
        if s.dim < 2 && columns[idx].is_empty() && pivot_owner[idx].is_none() {
            let hdim = if s.dim == 0 { HomologyDim::Zero } else { HomologyDim::One };
            points.push(DiagramPoint { hdim, birth, death: f64::INFINITY });
        }
    }
    PersistenceDiagram::from_points(n, points)
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn ground_cost(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn diagonal_cost(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

enum Aggregate {
    Power(u32),
    Max,
}

fn search(
    a: &[(f64, f64)],
    b: &[(f64, f64)],
    idx: usize,
    used: &mut [bool],
    agg: &Aggregate,
) -> f64 {
    if idx == a.len() {
        let mut total = 0.0f64;
        for (j, &u) in used.iter().enumerate() {
            if !u {
                let c = diagonal_cost(b[j]);
                total = match agg {
                    Aggregate::Power(q) => total + c.powi(*q as i32),
                    Aggregate::Max => total.max(c),
                };
            }
        }
        return total;
    }
    let step = |cost: f64, rest: f64| match agg {
        Aggregate::Power(q) => rest + cost.powi(*q as i32),
        Aggregate::Max => rest.max(cost),
    };
    let mut best = step(diagonal_cost(a[idx]), search(a, b, idx + 1, used, agg));
    for j in 0..b.len() {
        if !used[j] {
            used[j] = true;
            let candidate = step(ground_cost(a[idx], b[j]), search(a, b, idx + 1, used, agg));
            used[j] = false;
            best = best.min(candidate);
        }
    }
    best
}

/// Exact q-Wasserstein between two small bar lists by enumerating every
/// partial matching. Exponential — keep the inputs at a handful of points.
pub fn exhaustive_wasserstein(a: &[(f64, f64)], b: &[(f64, f64)], q: u32) -> f64 {
    assert!(q == 1 || q == 2, "supported exponents are 1 and 2");
    let mut used = vec![false; b.len()];
    let total = search(a, b, 0, &mut used, &Aggregate::Power(q));
    if q == 1 {
        total
    } else {
        total.sqrt()
    }
}

/// Exact bottleneck distance between two small bar lists by enumeration.
pub fn exhaustive_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut used = vec![false; b.len()];
    search(a, b, 0, &mut used, &Aggregate::Max)
}
