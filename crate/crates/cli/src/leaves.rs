//! Endpoint gaps of lamination leaves against transverse control pairs.

use ctlab_core::kleinian::{
    ct_batch, solve_fiber_representation, CtStatus, Monodromy, Representation, SolverOptions,
};
use ctlab_core::lamination::{crosses_lamination, sample_leaves, stable_slope, LeafVerdict};
use ctlab_core::words::{word_at_parameter, BoundaryWord, ReducedWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::CliError;

/// Random boundary points are drawn as parameters `num / 2^53`.
const PARAMETER_BITS: u32 = 53;
/// Draws allowed per requested control pair before giving up.
const CONTROL_ATTEMPTS: usize = 50;
/// Share of leaves and of controls that must meet their test.
pub const PASS_FRACTION: f64 = 0.95;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub monodromy: Monodromy,
    pub leaves: usize,
    pub depth: usize,
    /// Shallower depth at which leaf gaps are measured for the shrink factor.
    pub baseline_depth: usize,
    pub tol: f64,
    pub ratio: f64,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.depth == 0 || self.baseline_depth == 0 {
            return Err(CliError::Input("depths must be positive".into()));
        }
        if self.baseline_depth > self.depth {
            return Err(CliError::Input(format!(
                "baseline depth {} exceeds depth {}",
                self.baseline_depth, self.depth
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.ratio.is_nan() || self.ratio <= 0.0 {
            return Err(CliError::Input("tolerance and ratio must be positive".into()));
        }
        Ok(())
    }
}

/// Chordal gap between the images of two boundary points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairGap {
    pub gap: f64,
    /// At least one of the two images did not settle within tolerance.
    pub undecided: bool,
    /// Both words agree to the full depth, so the pair is one point.
    pub degenerate: bool,
}

/// Gap between the depth-`depth` images of `u` and `v`.
pub fn pair_gap(
    rep: &Representation,
    u: &BoundaryWord,
    v: &BoundaryWord,
    depth: usize,
    tol: f64,
) -> Result<PairGap, CliError> {
    let samples = ct_batch(rep, &[u.clone(), v.clone()], depth, tol);
    let [a, b]: [_; 2] = samples.try_into().expect("two samples");
    let (a, b) = (a?, b?);
    Ok(PairGap {
        gap: a.approximant.chordal(&b.approximant),
        undecided: a.status == CtStatus::Undecided || b.status == CtStatus::Undecided,
        degenerate: a.prefix == b.prefix,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafRecord {
    pub intercept: String,
    pub forward: String,
    pub backward: String,
    pub gap: PairGap,
    pub baseline_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ControlRecord {
    pub first: String,
    pub second: String,
    pub gap: PairGap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafReport {
    pub monodromy: String,
    pub slope: String,
    pub depth: usize,
    pub baseline_depth: usize,
    pub tol: f64,
    pub ratio: f64,
    pub seed: u64,
    pub commutator_residual: f64,
    pub leaves: Vec<LeafRecord>,
    pub controls: Vec<ControlRecord>,
    /// Control pairs requested but not found among the random draws.
    pub controls_missing: usize,
    pub undecided_leaves: usize,
    pub undecided_controls: usize,
    pub degenerate_controls: usize,
    pub median_leaf_gap: Option<f64>,
    pub median_baseline_gap: Option<f64>,
    /// Median baseline gap over median gap.
    pub median_shrink: Option<f64>,
    pub leaf_fraction_below_tol: Option<f64>,
    pub control_fraction_above: Option<f64>,
    pub pass_leaves: bool,
    pub pass_controls: bool,
    pub pass: bool,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

fn fraction(hits: usize, total: usize) -> Option<f64> {
    (total > 0).then(|| hits as f64 / total as f64)
}

/// Random boundary words of length `depth` whose chord the lamination
/// verdict calls transverse.
fn transverse_pairs(
    monodromy: &Monodromy,
    count: usize,
    depth: usize,
    seed: u64,
) -> Result<Vec<(ReducedWord, ReducedWord)>, CliError> {
    let slope = stable_slope(monodromy);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let den = 1u64 << PARAMETER_BITS;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count * CONTROL_ATTEMPTS {
        if out.len() == count {
            break;
        }
        let u = word_at_parameter(rng.gen_range(0..den), den, depth)?;
        let v = word_at_parameter(rng.gen_range(0..den), den, depth)?;
        if crosses_lamination(&u, &v, &slope, depth) == LeafVerdict::Transverse {
            out.push((u, v));
        }
    }
    Ok(out)
}

pub fn verify_leaves(cfg: &VerifyConfig) -> Result<LeafReport, CliError> {
    cfg.validate()?;
    let rep = solve_fiber_representation(&cfg.monodromy, &SolverOptions::default())?;
    let slope = stable_slope(&cfg.monodromy);
    let leaves = sample_leaves(&slope, cfg.leaves, cfg.seed)?;

    let mut leaf_records = Vec::with_capacity(leaves.len());
    for leaf in &leaves {
        let (fwd, bwd) = leaf.endpoints();
        let gap = pair_gap(&rep, &fwd, &bwd, cfg.depth, cfg.tol)?;
        let baseline = pair_gap(&rep, &fwd, &bwd, cfg.baseline_depth, cfg.tol)?;
        leaf_records.push(LeafRecord {
            intercept: leaf.intercept().to_string(),
            forward: fwd.prefix(cfg.depth)?.to_string(),
            backward: bwd.prefix(cfg.depth)?.to_string(),
            gap,
            baseline_gap: baseline.gap,
        });
    }

    let pairs = transverse_pairs(&cfg.monodromy, cfg.leaves, cfg.depth, cfg.seed)?;
    let mut controls = Vec::with_capacity(pairs.len());
    for (u, v) in pairs {
        let gap = pair_gap(
            &rep,
            &BoundaryWord::stored(u.clone()),
            &BoundaryWord::stored(v.clone()),
            cfg.depth,
            cfg.tol,
        )?;
        controls.push(ControlRecord {
            first: u.to_string(),
            second: v.to_string(),
            gap,
        });
    }

    let gaps: Vec<f64> = leaf_records.iter().map(|r| r.gap.gap).collect();
    let baseline: Vec<f64> = leaf_records.iter().map(|r| r.baseline_gap).collect();
    let median_leaf_gap = median(&gaps);
    let median_baseline_gap = median(&baseline);
    let median_shrink = match (median_baseline_gap, median_leaf_gap) {
        (Some(b), Some(g)) if g > 0.0 => Some(b / g),
        _ => None,
    };
    let below = gaps.iter().filter(|&&g| g < cfg.tol).count();
    let threshold = median_leaf_gap.map_or(0.0, |m| cfg.ratio * m);
    let above = controls
        .iter()
        .filter(|c| !c.gap.degenerate && c.gap.gap > threshold)
        .count();
    let leaf_fraction_below_tol = fraction(below, gaps.len());
    let control_fraction_above = fraction(above, controls.len());
    let controls_missing = cfg.leaves - controls.len();
    let pass_leaves = leaf_fraction_below_tol.is_none_or(|f| f >= PASS_FRACTION);
    let pass_controls =
        controls_missing == 0 && control_fraction_above.is_none_or(|f| f >= PASS_FRACTION);

    Ok(LeafReport {
        monodromy: cfg.monodromy.to_string(),
        slope: slope.to_string(),
        depth: cfg.depth,
        baseline_depth: cfg.baseline_depth,
        tol: cfg.tol,
        ratio: cfg.ratio,
        seed: cfg.seed,
        commutator_residual: rep.commutator_residual(),
        undecided_leaves: leaf_records.iter().filter(|r| r.gap.undecided).count(),
        undecided_controls: controls.iter().filter(|c| c.gap.undecided).count(),
        degenerate_controls: controls.iter().filter(|c| c.gap.degenerate).count(),
        leaves: leaf_records,
        controls,
        controls_missing,
        median_leaf_gap,
        median_baseline_gap,
        median_shrink,
        leaf_fraction_below_tol,
        control_fraction_above,
        pass_leaves,
        pass_controls,
        pass: pass_leaves && pass_controls,
    })
}
