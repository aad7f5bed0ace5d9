use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    all_pairs_distances, distances_from, distances_from_set, shortest_path, CoarseError,
    MetricGraph, EXHAUSTIVE_DELTA_LIMIT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    /// Every 4-subset of vertices.
    Exhaustive,
    /// `count` random 4-subsets drawn with a seeded generator.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HyperbolicityEstimate {
    pub delta: f64,
    pub exhaustive: bool,
    /// Number of 4-tuples examined.
    pub tuples: u64,
}

/// Half the gap between the two largest of the three pair sums.
fn defect(d: [[f64; 4]; 4]) -> f64 {
    let mut sums = [
        d[0][1] + d[2][3],
        d[0][2] + d[1][3],
        d[0][3] + d[1][2],
    ];
    sums.sort_by(|a, b| b.total_cmp(a));
    (sums[0] - sums[1]) / 2.0
}

pub fn four_point_delta(
    g: &MetricGraph,
    mode: DeltaMode,
) -> Result<HyperbolicityEstimate, CoarseError> {
    let n = g.len();
    match mode {
        DeltaMode::Exhaustive => {
            if n > EXHAUSTIVE_DELTA_LIMIT {
                return Err(CoarseError::TooLarge {
                    n,
                    limit: EXHAUSTIVE_DELTA_LIMIT,
                });
            }
            let d = all_pairs_distances(g);
            let delta = (0..n)
                .into_par_iter()
                .map(|a| {
                    let mut best = 0.0f64;
                    for b in a + 1..n {
                        for c in b + 1..n {
                            for e in c + 1..n {
                                let q = [a, b, c, e];
                                best = best.max(defect(q.map(|x| q.map(|y| d[x][y]))));
                            }
                        }
                    }
                    best
                })
                .reduce(|| 0.0, f64::max);
            let n = n as u64;
            let tuples = if n < 4 {
                0
            } else {
                n * (n - 1) * (n - 2) * (n - 3) / 24
            };
            Ok(HyperbolicityEstimate {
                delta,
                exhaustive: true,
                tuples,
            })
        }
        DeltaMode::Sampled { count, seed } => {
            if n < 4 {
                return Ok(HyperbolicityEstimate {
                    delta: 0.0,
                    exhaustive: false,
                    tuples: 0,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let quads: Vec<[usize; 4]> = (0..count)
                .map(|_| {
                    let s = sample(&mut rng, n, 4);
                    [s.index(0), s.index(1), s.index(2), s.index(3)]
                })
                .collect();
            let delta = quads
                .par_iter()
                .map(|q| {
                    let rows: Vec<Vec<f64>> = q[..3]
                        .iter()
                        .map(|&x| distances_from(g, x).expect("sampled in range"))
                        .collect();
                    let dist = |i: usize, j: usize| {
                        let (lo, hi) = (i.min(j), i.max(j));
                        if lo == hi {
                            0.0
                        } else {
                            rows[lo][q[hi]]
                        }
                    };
                    defect(std::array::from_fn(|i| std::array::from_fn(|j| dist(i, j))))
                })
                .reduce(|| 0.0, f64::max);
            Ok(HyperbolicityEstimate {
                delta,
                exhaustive: false,
                tuples: count as u64,
            })
        }
    }
}

/// Largest distance to `subset` from a vertex of a shortest path between
/// two of its members.
pub fn quasiconvexity_constant(g: &MetricGraph, subset: &[usize]) -> Result<f64, CoarseError> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() < 2 {
        return Err(CoarseError::SubsetTooSmall);
    }
    let to_subset = distances_from_set(g, &s)?;
    let pairs: Vec<(usize, usize)> = (0..s.len())
        .flat_map(|i| (i + 1..s.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let p = shortest_path(g, s[i], s[j])?;
            Ok(p.vertices.iter().map(|&x| to_subset[x]).fold(0.0, f64::max))
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
