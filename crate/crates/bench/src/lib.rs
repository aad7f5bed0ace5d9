//! Shared fixtures for the benchmarks.

use ctlab_core::coarse::{MetricGraph, SubsetFamily};
use ctlab_core::kleinian::{solve_fiber_representation, Monodromy, Representation, SolverOptions};
use ctlab_core::ladder::{leaf_path, Ladder, SplitModel, SplitSpec};
use ctlab_core::lamination::{sample_leaves, stable_slope};
use ctlab_core::words::ReducedWord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn figure_eight_representation() -> Representation {
    solve_fiber_representation(&Monodromy::figure_eight(), &SolverOptions::default())
        .expect("the figure-eight fiber group solves")
}

/// A random spanning tree plus `n / 2` chords, weights in quarter units.
pub fn random_graph(n: usize, seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n + n / 2);
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, f64::from(rng.gen_range(1..=8)) / 4.0));
    }
    for _ in 0..n / 2 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((a, b, f64::from(rng.gen_range(1..=8)) / 4.0));
        }
    }
    MetricGraph::new(n, &edges).expect("spanning tree keeps it connected")
}

/// `k` random subsets of two to six vertices.
pub fn random_family(n: usize, k: usize, seed: u64) -> SubsetFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SubsetFamily::new(
        (0..k)
            .map(|_| {
                let size = rng.gen_range(2..=6);
                (0..size).map(|_| rng.gen_range(0..n)).collect()
            })
            .collect(),
    )
}

pub fn monodromy_model(blocks: usize, radius: usize) -> SplitModel {
    let spec = SplitSpec::monodromy_stack(blocks, radius, 42);
    SplitModel::build(&spec.monodromy.automorphism(), &spec).expect("feasible spec")
}

/// Endpoints of a stable leaf's tile path inside the model's ball.
pub fn leaf_ends(model: &SplitModel) -> (ReducedWord, ReducedWord) {
    let leaf = sample_leaves(&stable_slope(&model.spec().monodromy), 1, 1).expect("irrational")[0];
    let path = leaf_path(&leaf, model.radius()).expect("leaf path");
    (path[0].clone(), path[path.len() - 1].clone())
}

pub fn leaf_ladder(model: &SplitModel) -> Ladder<'_> {
    let (p, q) = leaf_ends(model);
    Ladder::build(model, &p, &q).expect("ladder")
}
