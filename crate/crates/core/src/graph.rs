//! Simple undirected graphs, cycle/path generators, direct and Cartesian
//! products, and graph bundles of cycles over cycles twisted by a cyclic shift.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("path needs at least 1 vertex")]
    EmptyPath,
    #[error("product factors must be nonempty")]
    EmptyFactor,
    #[error("edge {0}-{1} is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge {u}-{v} references a vertex outside 0..{vertex_count}")]
    VertexOutOfRange {
        u: usize,
        v: usize,
        vertex_count: usize,
    },
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
}

/// An undirected simple graph. Neighbor lists are sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate edges collapse; self-loops are rejected.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut sets = vec![BTreeSet::new(); vertex_count];
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::VertexOutOfRange { u, v, vertex_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            sets[u].insert(v);
            sets[v].insert(u);
        }
        Ok(Graph {
            adjacency: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|ns| ns.binary_search(&v).is_ok())
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adjacency.first()?.len();
        self.adjacency
            .iter()
            .all(|ns| ns.len() == first)
            .then_some(first)
    }

    /// Shortest-path distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All unordered pairs `(u, v)`, `u < v`, at distance exactly two, sorted.
    ///
    /// Computed by two-step neighborhood expansion; no BFS beyond depth two.
    pub fn distance_two_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        let mut seen = vec![usize::MAX; self.vertex_count()];
        for u in 0..self.vertex_count() {
            let mut found = Vec::new();
            seen[u] = u;
            for &w in &self.adjacency[u] {
                seen[w] = u;
            }
            for &w in &self.adjacency[u] {
                for &x in &self.adjacency[w] {
                    if seen[x] != u {
                        seen[x] = u;
                        if u < x {
                            found.push(x);
                        }
                    }
                }
            }
            found.sort_unstable();
            pairs.extend(found.into_iter().map(|x| (u, x)));
        }
        pairs
    }
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::CycleTooSmall(n));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::EmptyPath);
    }
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

/// Direct (tensor) product. Vertex `(g, h)` is flattened to `g * |V(H)| + h`.
pub fn direct_product(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    if g.is_empty() || h.is_empty() {
        return Err(GraphError::EmptyFactor);
    }
    let width = h.vertex_count();
    let mut edges = Vec::with_capacity(2 * g.edge_count() * h.edge_count());
    for (g1, g2) in g.edges() {
        for (h1, h2) in h.edges() {
            edges.push((g1 * width + h1, g2 * width + h2));
            edges.push((g1 * width + h2, g2 * width + h1));
        }
    }
    Graph::from_edges(g.vertex_count() * width, edges)
}

/// Cartesian product. Vertex `(g, h)` is flattened to `g * |V(H)| + h`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    if g.is_empty() || h.is_empty() {
        return Err(GraphError::EmptyFactor);
    }
    let width = h.vertex_count();
    let mut edges = Vec::new();
    for (g1, g2) in g.edges() {
        for x in 0..width {
            edges.push((g1 * width + x, g2 * width + x));
        }
    }
    for base in 0..g.vertex_count() {
        for (h1, h2) in h.edges() {
            edges.push((base * width + h1, base * width + h2));
        }
    }
    Graph::from_edges(g.vertex_count() * width, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Direct,
    Cartesian,
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Direct => "direct",
            ProductKind::Cartesian => "cartesian",
        })
    }
}

impl FromStr for ProductKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(ProductKind::Direct),
            "cartesian" => Ok(ProductKind::Cartesian),
            other => Err(format!("unknown product kind {other:?}")),
        }
    }
}

/// A bundle of the fibre cycle `C_n` over the base cycle `C_m`, where every base
/// edge carries the identity except `(m-1, 0)`, which carries the shift by `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BundleSpec {
    pub kind: ProductKind,
    pub m: usize,
    pub n: usize,
    pub ell: usize,
}

impl BundleSpec {
    pub fn new(kind: ProductKind, m: usize, n: usize, ell: usize) -> Result<Self, GraphError> {
        let spec = BundleSpec { kind, m, n, ell };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.m < 3 {
            return Err(GraphError::InvalidBundle(format!(
                "base order m = {} must be at least 3",
                self.m
            )));
        }
        if self.n < 3 {
            return Err(GraphError::InvalidBundle(format!(
                "fibre order n = {} must be at least 3",
                self.n
            )));
        }
        if self.ell >= self.n {
            return Err(GraphError::InvalidBundle(format!(
                "shift ell = {} must lie in [0, {})",
                self.ell, self.n
            )));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.m * self.n
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        VertexCoord { i, j }.to_index(self.n)
    }

    pub fn coord(&self, index: usize) -> VertexCoord {
        VertexCoord::from_index(index, self.n)
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} bundle C{} over C{} with shift {}",
            self.kind, self.n, self.m, self.ell
        )
    }
}

/// Base coordinate `i` and fibre coordinate `j` of a bundle vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexCoord {
    pub i: usize,
    pub j: usize,
}

impl VertexCoord {
    pub fn to_index(self, n: usize) -> usize {
        self.i * n + self.j
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        VertexCoord {
            i: index / n,
            j: index % n,
        }
    }
}

/// Constructs the bundle as the product of `P_m` with `C_n` plus one twisted
/// copy of `K_2 × C_n` (or `K_2 □ C_n`) between fibres `m-1` and `0`.
pub fn build_bundle(spec: &BundleSpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let BundleSpec { kind, m, n, ell } = *spec;
    let at = |i: usize, j: isize| i * n + (j.rem_euclid(n as isize) as usize);
    let mut edges = Vec::with_capacity(2 * m * n);
    for i in 0..m {
        for j in 0..n as isize {
            let here = at(i, j);
            match kind {
                ProductKind::Direct => {
                    if i + 1 < m {
                        edges.push((here, at(i + 1, j - 1)));
                        edges.push((here, at(i + 1, j + 1)));
                    }
                }
                ProductKind::Cartesian => {
                    edges.push((here, at(i, j + 1)));
                    if i + 1 < m {
                        edges.push((here, at(i + 1, j)));
                    }
                }
            }
        }
    }
    let shift = ell as isize;
    for u in 0..n as isize {
        let tail = at(m - 1, u);
        match kind {
            ProductKind::Direct => {
                edges.push((tail, at(0, u - 1 + shift)));
                edges.push((tail, at(0, u + 1 + shift)));
            }
            ProductKind::Cartesian => edges.push((tail, at(0, u + shift))),
        }
    }
    Graph::from_edges(m * n, edges)
}
