//! L(d,1)-labelings: adjacent vertices differ by at least `d`, vertices at
//! distance two differ by at least one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
    #[error("labeling has {labels} labels but the graph has {vertices} vertices")]
    LengthMismatch { labels: usize, vertices: usize },
    #[error("separation d must be at least 1")]
    ZeroSeparation,
}

/// Labels indexed by flat vertex index, together with the separation `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling {
    pub d: u32,
    pub labels: Vec<u32>,
}

impl Labeling {
    pub fn new(d: u32, labels: Vec<u32>) -> Result<Self, LabelingError> {
        if d == 0 {
            return Err(LabelingError::ZeroSeparation);
        }
        Ok(Labeling { d, labels })
    }

    pub fn span(&self) -> u32 {
        span_of(&self.labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, v: usize) -> u32 {
        self.labels[v]
    }
}

pub(crate) fn span_of(labels: &[u32]) -> u32 {
    match (labels.iter().min(), labels.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    /// 1 for adjacent pairs, 2 for pairs at distance two.
    pub distance: u8,
    pub gap: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    /// Every violating pair with `u < v`, ordered by `(u, v)`.
    pub violations: Vec<Violation>,
    pub span: u32,
}

impl ValidityReport {
    fn from_violations(mut violations: Vec<Violation>, labels: &[u32]) -> Self {
        violations.sort_unstable();
        ValidityReport {
            valid: violations.is_empty(),
            violations,
            span: span_of(labels),
        }
    }
}

fn check_lengths(graph: &Graph, labeling: &Labeling) -> Result<(), LabelingError> {
    if labeling.len() != graph.vertex_count() {
        return Err(LabelingError::LengthMismatch {
            labels: labeling.len(),
            vertices: graph.vertex_count(),
        });
    }
    Ok(())
}

/// Checks every edge and every distance-two pair and reports all violations.
pub fn verify_labeling(graph: &Graph, labeling: &Labeling) -> Result<ValidityReport, LabelingError> {
    check_lengths(graph, labeling)?;
    let labels = &labeling.labels;
    let gap = |u: usize, v: usize| labels[u].abs_diff(labels[v]);
    let mut violations: Vec<Violation> = graph
        .edges()
        .filter(|&(u, v)| gap(u, v) < labeling.d)
        .map(|(u, v)| Violation {
            u,
            v,
            distance: 1,
            gap: gap(u, v),
        })
        .collect();
    violations.extend(
        graph
            .distance_two_pairs()
            .into_iter()
            .filter(|&(u, v)| gap(u, v) == 0)
            .map(|(u, v)| Violation {
                u,
                v,
                distance: 2,
                gap: 0,
            }),
    );
    Ok(ValidityReport::from_violations(violations, labels))
}

/// Reference verifier built on full all-pairs BFS. Slow; used to cross-check
/// [`verify_labeling`].
pub fn naive_verify(graph: &Graph, labeling: &Labeling) -> Result<ValidityReport, LabelingError> {
    check_lengths(graph, labeling)?;
    let labels = &labeling.labels;
    let mut violations = Vec::new();
    for u in 0..graph.vertex_count() {
        let dist = graph.bfs_distances(u);
        for (v, dv) in dist.into_iter().enumerate().skip(u + 1) {
            let gap = labels[u].abs_diff(labels[v]);
            let required = match dv {
                Some(1) => labeling.d,
                Some(2) => 1,
                _ => continue,
            };
            if gap < required {
                violations.push(Violation {
                    u,
                    v,
                    distance: dv.unwrap_or_default() as u8,
                    gap,
                });
            }
        }
    }
    Ok(ValidityReport::from_violations(violations, labels))
}

/// The lower bound `Δ + 2d - 2` on the minimum span, valid when `1 <= d <= Δ`
/// and some vertex of maximum degree has only maximum-degree neighbors.
pub fn lemma1_lower_bound(graph: &Graph, d: u32) -> Option<u32> {
    let max_degree = graph.max_degree();
    if d == 0 || max_degree == 0 || d as usize > max_degree {
        return None;
    }
    let applies = (0..graph.vertex_count()).any(|v| {
        graph.degree(v) == max_degree
            && graph
                .neighbors(v)
                .iter()
                .all(|&w| graph.degree(w) == max_degree)
    });
    applies.then(|| max_degree as u32 + 2 * d - 2)
}
