//! Finite metric graphs, electrocution of subset families, electric
//! geodesics and their electro-ambient representatives, and numerical
//! hyperbolicity and quasiconvexity estimates.
//!
//! Weights are `f64`. Integer and dyadic weights (including the `1/2` cone
//! spokes) are represented exactly, so distances built from them compare
//! exactly; otherwise ties are decided with a relative tolerance of `1e−9`.

mod delta;
mod parse;
mod paths;

pub use delta::{four_point_delta, quasiconvexity_constant, DeltaMode, HyperbolicityEstimate};
pub use parse::{parse_graph, GraphFile};
pub use paths::{
    all_pairs_distances, distances_from, distances_from_set, electro_ambient, shortest_path,
    tracking_constant, PathRecord, Step,
};

use serde::Serialize;
use thiserror::Error;

/// Largest vertex count accepted by the exhaustive four-point scan.
pub const EXHAUSTIVE_DELTA_LIMIT: usize = 80;

/// Length of each cone spoke; two members of a subset are at distance 1.
pub const SPOKE: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoarseError {
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {u}-{v} has weight {weight}, weights must be finite and positive")]
    BadWeight { u: usize, v: usize, weight: f64 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected (vertex {0} unreachable from 0)")]
    Disconnected(usize),
    #[error("graph has no vertices")]
    Empty,
    #[error("subset {0} is empty")]
    EmptySubset(usize),
    #[error("subset needs at least two vertices")]
    SubsetTooSmall,
    #[error("exhaustive four-point scan limited to {limit} vertices, graph has {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("backtracking repair did not settle within {0} iterations")]
    RepairLimit(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub(crate) fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// A connected, undirected graph with positive edge lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraph {
    adj: Vec<Vec<(usize, f64)>>,
    labels: Option<Vec<String>>,
}

impl MetricGraph {
    /// Builds a graph from `(u, v, w)` triples. Parallel edges keep the
    /// shortest weight.
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, CoarseError> {
        if n == 0 {
            return Err(CoarseError::Empty);
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(CoarseError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(CoarseError::SelfLoop(u));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(CoarseError::BadWeight { u, v, weight: w });
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            list.dedup_by_key(|e| e.0);
        }
        let g = MetricGraph { adj, labels: None };
        g.check_connected()?;
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, CoarseError> {
        if labels.len() != self.len() {
            return Err(CoarseError::VertexOutOfRange {
                vertex: labels.len(),
                n: self.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn check_connected(&self) -> Result<(), CoarseError> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(CoarseError::Disconnected(v)),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Neighbors with edge weights, sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj[u]
            .binary_search_by_key(&v, |e| e.0)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    /// Each edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for &(v, w) in list {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<(), CoarseError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(CoarseError::VertexOutOfRange {
                vertex: v,
                n: self.len(),
            })
        }
    }
}

/// Subsets `H_1, …, H_k` of the vertex set, with optional declared
/// quasiconvexity and separation constants.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SubsetFamily {
    subsets: Vec<Vec<usize>>,
    pub declared_quasiconvexity: Option<f64>,
    pub declared_separation: Option<f64>,
}

impl SubsetFamily {
    pub fn empty() -> Self {
        SubsetFamily::default()
    }

    /// Members are sorted and deduplicated. Emptiness is checked when the
    /// family is electrocuted.
    pub fn new(subsets: Vec<Vec<usize>>) -> Self {
        let subsets = subsets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        SubsetFamily {
            subsets,
            ..SubsetFamily::default()
        }
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn contains(&self, k: usize, v: usize) -> bool {
        self.subsets[k].binary_search(&v).is_ok()
    }

    /// Smallest base distance between members of two different subsets,
    /// `None` for fewer than two subsets.
    pub fn separation(&self, g: &MetricGraph) -> Result<Option<f64>, CoarseError> {
        let mut best: Option<f64> = None;
        for (k, s) in self.subsets.iter().enumerate() {
            if s.is_empty() {
                return Err(CoarseError::EmptySubset(k));
            }
            let d = distances_from_set(g, s)?;
            for other in &self.subsets[k + 1..] {
                for &v in other {
                    best = Some(best.map_or(d[v], |b| b.min(d[v])));
                }
            }
        }
        Ok(best)
    }
}

/// A base graph with one apex per subset joined to each member by a spoke
/// of length `1/2`. Apex `k` has vertex id `base.len() + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElectricGraph {
    base: MetricGraph,
    family: SubsetFamily,
    coned: MetricGraph,
}

pub fn electrocute(g: &MetricGraph, f: &SubsetFamily) -> Result<ElectricGraph, CoarseError> {
    let n = g.len();
    let mut edges = g.edges();
    for (k, s) in f.subsets().iter().enumerate() {
        if s.is_empty() {
            return Err(CoarseError::EmptySubset(k));
        }
        for &v in s {
            g.check_vertex(v)?;
            edges.push((v, n + k, SPOKE));
        }
    }
    let coned = MetricGraph::new(n + f.len(), &edges)?;
    Ok(ElectricGraph {
        base: g.clone(),
        family: f.clone(),
        coned,
    })
}

impl ElectricGraph {
    pub fn base(&self) -> &MetricGraph {
        &self.base
    }

    pub fn family(&self) -> &SubsetFamily {
        &self.family
    }

    /// The graph including apex vertices.
    pub fn coned(&self) -> &MetricGraph {
        &self.coned
    }

    /// The subset whose apex is vertex `v`, if any.
    pub fn apex_subset(&self, v: usize) -> Option<usize> {
        v.checked_sub(self.base.len())
    }

    pub fn apex(&self, k: usize) -> usize {
        self.base.len() + k
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<f64, CoarseError> {
        self.base.check_vertex(u)?;
        self.base.check_vertex(v)?;
        Ok(distances_from(&self.coned, u)?[v])
    }

    /// Electric shortest path between base vertices, with each
    /// `member → apex → member` pair of spokes recorded as one hop.
    pub fn shortest_path(&self, u: usize, v: usize) -> Result<PathRecord, CoarseError> {
        self.base.check_vertex(u)?;
        self.base.check_vertex(v)?;
        let raw = shortest_path(&self.coned, u, v)?;
        Ok(paths::collapse_apexes(self, &raw))
    }
}
