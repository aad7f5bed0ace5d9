//! Graph-file commands: hyperbolicity, electric distances, tracking.

use ctlab_core::coarse::{
    all_pairs_distances, electrocute, four_point_delta, quasiconvexity_constant,
    tracking_constant, DeltaMode, GraphFile, EXHAUSTIVE_DELTA_LIMIT,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoarseOp {
    Delta,
    Electrocute,
    Track,
}

/// `Some((count, seed))` for a sampled run, `None` for an exhaustive one.
pub type SampleSpec = Option<(usize, u64)>;

/// Runs one coarse operation; the verdict is whether every reported
/// constant is finite.
pub fn run_coarse(op: CoarseOp, file: &GraphFile, sampling: SampleSpec) -> Result<(Value, bool), CliError> {
    let g = &file.graph;
    let f = &file.family;
    match op {
        CoarseOp::Delta => {
            let mode = match sampling {
                Some((count, seed)) => DeltaMode::Sampled { count, seed },
                None if g.len() <= EXHAUSTIVE_DELTA_LIMIT => DeltaMode::Exhaustive,
                None => {
                    return Err(CliError::Input(format!(
                        "{} vertices is too many for an exhaustive scan; pass --samples and --seed",
                        g.len()
                    )))
                }
            };
            let est = four_point_delta(g, mode)?;
            // a single vertex has no geodesics to measure
            let qc = f
                .subsets()
                .iter()
                .map(|s| (s.len() > 1).then(|| quasiconvexity_constant(g, s)).transpose())
                .collect::<Result<Vec<_>, _>>()?;
            let pass = est.delta.is_finite() && qc.iter().flatten().all(|c| c.is_finite());
            Ok((
                json!({
                    "operation": "delta",
                    "vertices": g.len(),
                    "delta": est.delta,
                    "exhaustive": est.exhaustive,
                    "tuples": est.tuples,
                    "subset_quasiconvexity": qc,
                    "separation": f.separation(g)?,
                }),
                pass,
            ))
        }
        CoarseOp::Electrocute => {
            let eg = electrocute(g, f)?;
            let n = g.len();
            let distances: Vec<Vec<f64>> = all_pairs_distances(eg.coned())
                .into_iter()
                .take(n)
                .map(|mut row| {
                    row.truncate(n);
                    row
                })
                .collect();
            let pass = distances.iter().flatten().all(|d| d.is_finite());
            Ok((
                json!({
                    "operation": "electrocute",
                    "vertices": n,
                    "subsets": f.len(),
                    "distances": distances,
                }),
                pass,
            ))
        }
        CoarseOp::Track => {
            let n = g.len();
            let pairs: Vec<(usize, usize)> = match sampling {
                None => (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect(),
                Some((count, seed)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..count)
                        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                        .collect()
                }
            };
            let mut worst: Option<(f64, usize, usize)> = None;
            for &(u, v) in &pairs {
                let t = tracking_constant(g, f, u, v)?;
                if worst.is_none_or(|(w, _, _)| t > w) {
                    worst = Some((t, u, v));
                }
            }
            let constant = worst.map_or(0.0, |w| w.0);
            Ok((
                json!({
                    "operation": "track",
                    "vertices": n,
                    "subsets": f.len(),
                    "pairs": pairs.len(),
                    "tracking_constant": constant,
                    "worst_pair": worst.map(|(_, u, v)| [u, v]),
                }),
                constant.is_finite(),
            ))
        }
    }
}
