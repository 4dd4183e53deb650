//! Distances between persistence diagrams: exact q-Wasserstein (q = 1, 2)
//! and bottleneck, both with the L-infinity ground metric and the usual
//! diagonal-projection escape for unmatched points.

use serde::{Deserialize, Serialize};

use crate::assignment::min_cost_assignment;
use crate::persistence::{HomologyDim, PersistenceDiagram};

/// Which diagram distance to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramMetric {
    W1,
    W2,
    Bottleneck,
}

impl std::fmt::Display for DiagramMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiagramMetric::W1 => write!(f, "w1"),
            DiagramMetric::W2 => write!(f, "w2"),
            DiagramMetric::Bottleneck => write!(f, "bottleneck"),
        }
    }
}

impl std::str::FromStr for DiagramMetric {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "w1" => Ok(DiagramMetric::W1),
            "w2" => Ok(DiagramMetric::W2),
            "bottleneck" => Ok(DiagramMetric::Bottleneck),
            other => Err(crate::error::Error::ContractViolation(format!(
                "unknown metric '{other}' (expected w1, w2, or bottleneck)"
            ))),
        }
    }
}

fn ground(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn to_diagonal(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Exact q-Wasserstein distance between two finite bar lists. Unmatched
/// points pay their L-infinity distance to the diagonal; solved as a
/// square assignment problem of side `a.len() + b.len()`.
pub fn wasserstein(a: &[(f64, f64)], b: &[(f64, f64)], q: u32) -> f64 {
    assert!(q == 1 || q == 2, "supported Wasserstein exponents are 1 and 2");
    let (m, n) = (a.len(), b.len());
    let size = m + n;
    if size == 0 {
        return 0.0;
    }
    let pw = |c: f64| c.powi(q as i32);
    let mut cost = vec![0.0f64; size * size];
    for i in 0..size {
        for j in 0..size {
            cost[i * size + j] = match (i < m, j < n) {
                (true, true) => pw(ground(a[i], b[j])),
                (true, false) => pw(to_diagonal(a[i])),
                (false, true) => pw(to_diagonal(b[j])),
                (false, false) => 0.0,
            };
        }
    }
    let (total, _) = min_cost_assignment(size, &cost);
    let total = total.max(0.0);
    if q == 1 {
        total
    } else {
        total.sqrt()
    }
}

/// Exact bottleneck distance: the smallest cost `c` such that every point
/// can be matched (to a point of the other diagram or to the diagonal) with
/// no pair costing more than `c`. Binary search over candidate costs with a
/// bipartite feasibility matching at each step.
pub fn bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (m, n) = (a.len(), b.len());
    if m == 0 && n == 0 {
        return 0.0;
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(m * n + m + n);
    for &p in a {
        candidates.push(to_diagonal(p));
        for &r in b {
            candidates.push(ground(p, r));
        }
    }
    for &r in b {
        candidates.push(to_diagonal(r));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let feasible = |c: f64| -> bool {
        // Rows: points of `a` then diagonal proxies for `b`; columns: points
        // of `b` then diagonal proxies for `a`. Same augmented shape as the
        // Wasserstein matrix, with edges where the cost is within `c`.
        let size = m + n;
        let allowed = |i: usize, j: usize| -> bool {
            match (i < m, j < n) {
                (true, true) => ground(a[i], b[j]) <= c,
                (true, false) => to_diagonal(a[i]) <= c,
                (false, true) => to_diagonal(b[j]) <= c,
                (false, false) => true,
            }
        };
        let mut matched_row_of: Vec<Option<usize>> = vec![None; size];
        fn try_assign(
            i: usize,
            size: usize,
            allowed: &dyn Fn(usize, usize) -> bool,
            visited: &mut [bool],
            matched_row_of: &mut [Option<usize>],
        ) -> bool {
            for j in 0..size {
                if allowed(i, j) && !visited[j] {
                    visited[j] = true;
                    if matched_row_of[j].is_none()
                        || try_assign(
                            matched_row_of[j].unwrap(),
                            size,
                            allowed,
                            visited,
                            matched_row_of,
                        )
                    {
                        matched_row_of[j] = Some(i);
                        return true;
                    }
                }
            }
            false
        }
        for i in 0..size {
            let mut visited = vec![false; size];
            if !try_assign(i, size, &allowed, &mut visited, &mut matched_row_of) {
                return false;
            }
        }
        true
    };

    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    if feasible(candidates[lo]) {
        return candidates[lo];
    }
    debug_assert!(feasible(candidates[hi]));
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    candidates[hi]
}

/// Distance between the finite bars of one homology dimension of two
/// diagrams; essential classes are stripped before matching.
pub fn diagram_distance(
    a: &PersistenceDiagram,
    b: &PersistenceDiagram,
    hdim: HomologyDim,
    metric: DiagramMetric,
) -> f64 {
    let fa = a.finite_bars(hdim);
    let fb = b.finite_bars(hdim);
    match metric {
        DiagramMetric::W1 => wasserstein(&fa, &fb, 1),
        DiagramMetric::W2 => wasserstein(&fa, &fb, 2),
        DiagramMetric::Bottleneck => bottleneck(&fa, &fb),
    }
}
