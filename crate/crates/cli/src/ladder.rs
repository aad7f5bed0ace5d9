//! The audit suite over one split model and the ladder of a stable leaf.

use ctlab_core::ladder::{
    coarse_separation_audit, hyperbolicity_audit, ladder_quasiconvexity_audit, leaf_diameter_growth,
    leaf_path, lipschitz_audit, midpoint_escape_audit, qi_ray, ray_asymptoticity_audit,
    AuditReport, Ladder, Sampling, SeparationBounds, SplitModel, SplitSpec,
};
use ctlab_core::lamination::{sample_leaves, stable_slope, Leaf};
use ctlab_core::words::ReducedWord;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::CliError;

/// Verdict thresholds. Each default is twice the constant measured by the
/// exhaustive identity run at radius 3, and at least 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub lipschitz: f64,
    pub quasiconvexity: f64,
    pub separation: SeparationBounds,
    /// Word-metric diameter allowed for the part of the leaf in one tube.
    pub component: Option<f64>,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            lipschitz: 2.0,
            quasiconvexity: 2.0,
            separation: SeparationBounds { c1: 2.0, k1: 2.0 },
            component: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    /// Scan every pair instead of sampling.
    pub exhaustive: bool,
    pub thresholds: Thresholds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub audits: Map<String, Value>,
    pub ladder: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Suite {
    pub reports: Vec<AuditReport>,
    pub summary: Summary,
}

/// A seeded leaf of the stable lamination of the model's monodromy, its
/// tile path inside the sheet ball, and the ladder over that path.
pub fn stable_leaf_ladder(
    model: &SplitModel,
    seed: u64,
) -> Result<(Leaf, Vec<ReducedWord>, Ladder<'_>), CliError> {
    let leaf = sample_leaves(&stable_slope(&model.spec().monodromy), 1, seed)?[0];
    let path = leaf_path(&leaf, model.radius())?;
    let ladder = Ladder::build(model, &path[0], &path[path.len() - 1])?;
    Ok((leaf, path, ladder))
}

pub fn build_model(spec: &SplitSpec) -> Result<SplitModel, CliError> {
    Ok(SplitModel::build(&spec.monodromy.automorphism(), spec)?)
}

/// Builds the model and runs every audit over the ladder of a seeded
/// stable leaf through the origin.
pub fn audit_suite(spec: &SplitSpec, cfg: &SuiteConfig) -> Result<Suite, CliError> {
    spec.validate()?;
    let model = build_model(spec)?;
    let (leaf, path, ladder) = stable_leaf_ladder(&model, cfg.seed)?;
    let (p, q) = (&path[0], &path[path.len() - 1]);
    let sampling = if cfg.exhaustive {
        Sampling::Exhaustive
    } else {
        Sampling::Sampled {
            count: cfg.samples,
            seed: cfg.seed,
        }
    };
    let t = cfg.thresholds;
    let origin = model.vertex_of(0, &ReducedWord::identity())?;
    let ray = qi_ray(&ladder, origin)?;
    // a second ray from the neighbour of the origin on λ_0
    let base = ladder.level_vertices(0);
    let at = base.iter().position(|&v| v == origin).expect("leaf paths pass the origin");
    let neighbour = base[if at + 1 < base.len() { at + 1 } else { at.saturating_sub(1) }];
    let other = qi_ray(&ladder, neighbour)?;
    let radii: Vec<usize> = (model.radius().saturating_sub(3).max(1)..=model.radius()).collect();
    let ns: Vec<usize> = (0..model.radius()).step_by(2).collect();
    let component = t
        .component
        .unwrap_or(2.0 * spec.component_radius as f64);

    let reports = vec![
        hyperbolicity_audit(&model, cfg.samples, cfg.seed),
        lipschitz_audit(&ladder, sampling, t.lipschitz),
        ladder_quasiconvexity_audit(&ladder, sampling, t.quasiconvexity),
        coarse_separation_audit(&ladder, &ray, sampling, t.separation)?,
        ray_asymptoticity_audit(&model, &ray, &other, model.blocks() / 2),
        leaf_diameter_growth(&model, &path, &radii, component)?,
        midpoint_escape_audit(&ladder, &ns),
    ];
    let audits: Map<String, Value> = reports
        .iter()
        .map(|r| (r.audit.clone(), Value::Bool(r.pass)))
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    let levels: Vec<usize> = (0..ladder.levels()).map(|i| ladder.level(i).len()).collect();
    Ok(Suite {
        reports,
        summary: Summary {
            audits,
            ladder: json!({
                "leaf_intercept": leaf.intercept().to_string(),
                "first": p.to_string(),
                "last": q.to_string(),
                "level_sizes": levels,
                "ray": ray.points,
                "ray_quality": ray.quality,
            }),
            pass,
        },
    })
}
