//! Vietoris–Rips persistent homology in dimensions 0 and 1.
//!
//! H0 comes from a union-find sweep over edges in filtration order: finite
//! bar deaths are exactly the minimum-spanning-tree edge weights, plus one
//! essential bar for the surviving component. H1 pairs come from column
//! reduction of the triangle boundary matrix over the 2-element field,
//! truncated at the enclosing radius `r_enc = min_i max_j phi(i,j)` — past
//! that value the complex is a cone with apex at the minimizing vertex, so
//! every 1-cycle is already dead and the truncation is lossless.
//!
//! Simplices are ordered by (filtration value, dimension, lexicographic
//! vertex tuple); this total order fixes every tie, so diagrams are
//! reproducible across runs and platforms.

use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;

/// Homology dimension: components (0) or loops (1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HomologyDim {
    Zero,
    One,
}

impl HomologyDim {
    pub fn index(self) -> u8 {
        match self {
            HomologyDim::Zero => 0,
            HomologyDim::One => 1,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            0 => Ok(HomologyDim::Zero),
            1 => Ok(HomologyDim::One),
            other => Err(Error::InvalidOrder(other)),
        }
    }
}

impl std::fmt::Display for HomologyDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// One diagram point. `death` is `f64::INFINITY` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    pub hdim: HomologyDim,
    pub birth: f64,
    pub death: f64,
}

impl DiagramPoint {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// A persistence diagram in canonical order: by homology dimension, then
/// birth, then death (essential classes last within their dimension).
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
    n_points: usize,
}

impl PersistenceDiagram {
    /// Assemble a diagram from raw points (sorted canonically on entry).
    /// `n_points` records the size of the matrix the diagram came from.
    pub fn from_points(n_points: usize, mut points: Vec<DiagramPoint>) -> Self {
        points.sort_by(|a, b| {
            a.hdim
                .cmp(&b.hdim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        PersistenceDiagram { points, n_points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// The finite (birth, death) bars of one homology dimension.
    pub fn finite_bars(&self, hdim: HomologyDim) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.hdim == hdim && !p.is_essential())
            .map(|p| (p.birth, p.death))
            .collect()
    }

    pub fn essential_count(&self, hdim: HomologyDim) -> usize {
        self.points
            .iter()
            .filter(|p| p.hdim == hdim && p.is_essential())
            .count()
    }
}

fn validate(phi: &DistanceMatrix) -> Result<()> {
    let n = phi.size();
    if n == 0 {
        return Err(Error::ContractViolation(
            "persistence input matrix is empty".to_string(),
        ));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let a = phi.get(i, j);
            let b = phi.get(j, i);
            if (a - b).abs() > 1e-9 {
                return Err(Error::ContractViolation(format!(
                    "asymmetry at ({i},{j}): {a} vs {b}"
                )));
            }
            if a < -1e-9 || !a.is_finite() {
                return Err(Error::ContractViolation(format!(
                    "entry ({i},{j}) = {a} out of range"
                )));
            }
        }
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        true
    }
}

/// Symmetric difference of two ascending index lists.
fn xor_columns(a: &[u32], b: &[u32]) -> Vec<u32> {
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

/// Persistent homology of the Rips filtration of `phi`, up to `max_hdim`.
pub fn rips_persistence(
    phi: &DistanceMatrix,
    max_hdim: HomologyDim,
) -> Result<PersistenceDiagram> {
    validate(phi)?;
    let n = phi.size();
    let mut points = Vec::new();

    let mut edges: Vec<(f64, u32, u32)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((phi.get(i, j), i as u32, j as u32));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut uf = UnionFind::new(n);
    for &(w, i, j) in &edges {
        if uf.union(i, j) && w > 0.0 {
            points.push(DiagramPoint {
                hdim: HomologyDim::Zero,
                birth: 0.0,
                death: w,
            });
        }
    }
    points.push(DiagramPoint {
        hdim: HomologyDim::Zero,
        birth: 0.0,
        death: f64::INFINITY,
    });

    if max_hdim == HomologyDim::One && n >= 3 {
        points.extend(loop_pairs(phi, &edges));
    }

    Ok(PersistenceDiagram::from_points(n, points))
}

fn loop_pairs(phi: &DistanceMatrix, edges: &[(f64, u32, u32)]) -> Vec<DiagramPoint> {
    let n = phi.size();
    let r_enc = (0..n)
        .map(|i| (0..n).map(|j| phi.get(i, j)).fold(0.0f64, f64::max))
        .fold(f64::INFINITY, f64::min);

    // Edge ids follow the global simplex order restricted to edges; only
    // edges up to the enclosing radius can participate in a pair.
    let mut edge_id = vec![u32::MAX; n * n];
    let mut kept = Vec::new();
    for &(w, i, j) in edges {
        if w <= r_enc {
            edge_id[i as usize * n + j as usize] = kept.len() as u32;
            kept.push(w);
        }
    }

    let mut triangles: Vec<(f64, u32, u32, u32)> = Vec::new();
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            let wij = phi.get(i as usize, j as usize);
            if wij > r_enc {
                continue;
            }
            for k in (j + 1)..n as u32 {
                let w = wij
                    .max(phi.get(i as usize, k as usize))
                    .max(phi.get(j as usize, k as usize));
                if w <= r_enc {
                    triangles.push((w, i, j, k));
                }
            }
        }
    }
    triangles.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2, a.3).cmp(&(b.1, b.2, b.3))));

    let mut pivot: Vec<u32> = vec![u32::MAX; kept.len()];
    let mut store: Vec<Vec<u32>> = Vec::new();
    let mut out = Vec::new();
    for &(death, i, j, k) in &triangles {
        let mut col = vec![
            edge_id[i as usize * n + j as usize],
            edge_id[i as usize * n + k as usize],
            edge_id[j as usize * n + k as usize],
        ];
        col.sort_unstable();
        while let Some(&low) = col.last() {
            let owner = pivot[low as usize];
            if owner == u32::MAX {
                pivot[low as usize] = store.len() as u32;
                let birth = kept[low as usize];
                if death > birth {
                    out.push(DiagramPoint {
                        hdim: HomologyDim::One,
                        birth,
                        death,
                    });
                }
                store.push(col);
                break;
            }
            col = xor_columns(&col, &store[owner as usize]);
        }
    }
    out
}

/// Multiset of minimum-spanning-tree edge weights of the complete graph on
/// `phi`, by a dense greedy tree-growing pass. This is deliberately a
/// different algorithm from the filtration sweep above so the two can check
/// each other.
pub fn mst_deaths(phi: &DistanceMatrix) -> Vec<f64> {
    let n = phi.size();
    if n <= 1 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    in_tree[0] = true;
    let mut best: Vec<f64> = (0..n).map(|j| phi.get(0, j)).collect();
    let mut deaths = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick = usize::MAX;
        let mut weight = f64::INFINITY;
        for j in 0..n {
            if !in_tree[j] && best[j] < weight {
                weight = best[j];
                pick = j;
            }
        }
        in_tree[pick] = true;
        deaths.push(weight);
        for j in 0..n {
            if !in_tree[j] {
                let w = phi.get(pick, j);
                if w < best[j] {
                    best[j] = w;
                }
            }
        }
    }
    deaths.sort_by(f64::total_cmp);
    deaths
}

/// The principal submatrix with the `d`-th (1-based) row and column removed.
/// The result must still describe at least two points.
pub fn remove_dimension(phi: &DistanceMatrix, d: usize) -> Result<DistanceMatrix> {
    if phi.size() < 3 {
        return Err(Error::TooFewDimensions {
            got: phi.size(),
            min: 3,
        });
    }
    if d == 0 || d > phi.size() {
        return Err(Error::ContractViolation(format!(
            "dimension index {d} out of range 1..={}",
            phi.size()
        )));
    }
    Ok(phi.remove_dimension(d - 1))
}
