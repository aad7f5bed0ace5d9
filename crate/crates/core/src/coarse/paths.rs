use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use super::{electrocute, same_length, CoarseError, ElectricGraph, MetricGraph, SubsetFamily};

/// How one step of a path was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// An edge of the graph the path lives in.
    Base { weight: f64 },
    /// Two spokes through the apex of a subset, length 1.
    Apex { subset: usize },
    /// A base edge inserted in place of a hop through `subset`.
    Splice { subset: usize, weight: f64 },
}

impl Step {
    pub fn length(&self) -> f64 {
        match *self {
            Step::Base { weight } | Step::Splice { weight, .. } => weight,
            Step::Apex { .. } => 2.0 * super::SPOKE,
        }
    }
}

/// A path `vertices[0] → … → vertices[last]`; `steps[i]` joins
/// `vertices[i]` and `vertices[i + 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathRecord {
    pub vertices: Vec<usize>,
    pub steps: Vec<Step>,
    pub length: f64,
}

impl PathRecord {
    fn from_parts(vertices: Vec<usize>, steps: Vec<Step>) -> Self {
        let length = steps.iter().map(Step::length).sum();
        PathRecord {
            vertices,
            steps,
            length,
        }
    }

    pub fn uses_apex(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, Step::Apex { .. }))
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    // reversed so that the max-heap pops the closest vertex first
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distance from the nearest of `sources` to every vertex.
pub fn distances_from_set(g: &MetricGraph, sources: &[usize]) -> Result<Vec<f64>, CoarseError> {
    let mut dist = vec![f64::INFINITY; g.len()];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        g.check_vertex(s)?;
        dist[s] = 0.0;
        heap.push(Entry(0.0, s));
    }
    while let Some(Entry(d, x)) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &(y, w) in g.neighbors(x) {
            let nd = d + w;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Entry(nd, y));
            }
        }
    }
    Ok(dist)
}

pub fn distances_from(g: &MetricGraph, source: usize) -> Result<Vec<f64>, CoarseError> {
    distances_from_set(g, &[source])
}

/// Row `u` holds the distances from `u`.
pub fn all_pairs_distances(g: &MetricGraph) -> Vec<Vec<f64>> {
    (0..g.len())
        .into_par_iter()
        .map(|u| distances_from(g, u).expect("vertex in range"))
        .collect()
}

/// The lexicographically smallest vertex sequence among shortest paths.
pub fn shortest_path(g: &MetricGraph, u: usize, v: usize) -> Result<PathRecord, CoarseError> {
    g.check_vertex(u)?;
    let to_target = distances_from(g, v)?;
    let mut vertices = vec![u];
    let mut steps = Vec::new();
    let mut x = u;
    while x != v {
        let &(y, w) = g
            .neighbors(x)
            .iter()
            .find(|&&(y, w)| to_target[y] < to_target[x] && same_length(w + to_target[y], to_target[x]))
            .expect("a connected graph has a next step towards the target");
        vertices.push(y);
        steps.push(Step::Base { weight: w });
        x = y;
    }
    Ok(PathRecord::from_parts(vertices, steps))
}

pub(super) fn collapse_apexes(eg: &ElectricGraph, raw: &PathRecord) -> PathRecord {
    let mut vertices = vec![raw.vertices[0]];
    let mut steps = Vec::new();
    let mut i = 1;
    while i < raw.vertices.len() {
        let x = raw.vertices[i];
        match eg.apex_subset(x) {
            Some(k) => {
                // an apex is never an endpoint, so the next vertex exists
                vertices.push(raw.vertices[i + 1]);
                steps.push(Step::Apex { subset: k });
                i += 2;
            }
            None => {
                vertices.push(x);
                steps.push(raw.steps[i - 1]);
                i += 1;
            }
        }
    }
    PathRecord::from_parts(vertices, steps)
}

/// First subset (by id) that the path enters, leaves and enters again,
/// with the first and last positions of the path inside it.
fn find_backtrack(path: &PathRecord, f: &SubsetFamily) -> Option<(usize, usize, usize)> {
    (0..f.len()).find_map(|k| {
        let inside: Vec<bool> = path.vertices.iter().map(|&x| f.contains(k, x)).collect();
        let first = inside.iter().position(|&b| b)?;
        let last = inside.iter().rposition(|&b| b)?;
        inside[first..last]
            .iter()
            .any(|b| !b)
            .then_some((k, first, last))
    })
}

/// Electric geodesic with backtracking spliced out, then each hop through
/// an apex replaced by a base shortest path between its endpoints.
pub fn electro_ambient(
    g: &MetricGraph,
    f: &SubsetFamily,
    u: usize,
    v: usize,
) -> Result<PathRecord, CoarseError> {
    let eg = electrocute(g, f)?;
    let mut path = eg.shortest_path(u, v)?;
    let mut repairs = 0;
    while let Some((k, i, j)) = find_backtrack(&path, f) {
        repairs += 1;
        if repairs > g.len() {
            return Err(CoarseError::RepairLimit(g.len()));
        }
        let mut vertices = path.vertices[..=i].to_vec();
        vertices.extend_from_slice(&path.vertices[j..]);
        let mut steps = path.steps[..i].to_vec();
        steps.push(Step::Apex { subset: k });
        steps.extend_from_slice(&path.steps[j..]);
        path = PathRecord::from_parts(vertices, steps);
    }
    let mut vertices = vec![path.vertices[0]];
    let mut steps = Vec::new();
    for (i, step) in path.steps.iter().enumerate() {
        let (p, q) = (path.vertices[i], path.vertices[i + 1]);
        match *step {
            Step::Apex { subset } => {
                let inner = shortest_path(g, p, q)?;
                vertices.extend_from_slice(&inner.vertices[1..]);
                steps.extend(inner.steps.iter().map(|s| Step::Splice {
                    subset,
                    weight: s.length(),
                }));
            }
            other => {
                vertices.push(q);
                steps.push(other);
            }
        }
    }
    Ok(PathRecord::from_parts(vertices, steps))
}

/// Largest base distance from a vertex of the base geodesic `u → v` to the
/// electro-ambient representative.
pub fn tracking_constant(
    g: &MetricGraph,
    f: &SubsetFamily,
    u: usize,
    v: usize,
) -> Result<f64, CoarseError> {
    let geodesic = shortest_path(g, u, v)?;
    let rep = electro_ambient(g, f, u, v)?;
    let d = distances_from_set(g, &rep.vertices)?;
    Ok(geodesic.vertices.iter().map(|&x| d[x]).fold(0.0, f64::max))
}
