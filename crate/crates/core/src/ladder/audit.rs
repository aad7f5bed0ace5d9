//! Empirical constants of ladders and split models, reported as
//! reproducible JSON documents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{Ladder, LadderError, QiRay, SplitModel};
use crate::coarse::{four_point_delta, DeltaMode};
use crate::words::ReducedWord;

const SLACK: f64 = 1e-9;

/// One audit: its parameters, measured constants and verdict. Keys are
/// serialized in sorted order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub audit: String,
    pub constants: Map<String, Value>,
    pub params: Map<String, Value>,
    pub pass: bool,
    pub samples: usize,
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

impl AuditReport {
    fn new(audit: &str, params: Value, constants: Value, samples: usize, pass: bool) -> Self {
        AuditReport {
            audit: audit.to_string(),
            constants: object(constants),
            params: object(params),
            pass,
            samples,
        }
    }

    pub fn constant(&self, key: &str) -> Option<f64> {
        self.constants.get(key).and_then(Value::as_f64)
    }

    /// A list-valued constant; missing entries come back as `None`.
    pub fn profile(&self, key: &str) -> Option<Vec<Option<f64>>> {
        self.constants
            .get(key)?
            .as_array()
            .map(|a| a.iter().map(Value::as_f64).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl Sampling {
    fn params(&self) -> Value {
        match *self {
            Sampling::Exhaustive => json!({"mode": "exhaustive"}),
            Sampling::Sampled { count, seed } => {
                json!({"mode": "sampled", "count": count, "seed": seed})
            }
        }
    }

    /// Ordered pairs from `left × right` (all of them, or a seeded sample);
    /// `same` drops pairs of a vertex with itself.
    fn pairs(&self, left: &[usize], right: &[usize], same: bool) -> Vec<(usize, usize)> {
        if left.is_empty() || right.is_empty() {
            return Vec::new();
        }
        match *self {
            Sampling::Exhaustive => left
                .iter()
                .flat_map(|&u| right.iter().map(move |&v| (u, v)))
                .filter(|(u, v)| !same || u < v)
                .collect(),
            Sampling::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count)
                    .map(|_| {
                        (
                            left[rng.gen_range(0..left.len())],
                            right[rng.gen_range(0..right.len())],
                        )
                    })
                    .collect()
            }
        }
    }
}

fn model_params(m: &SplitModel) -> Value {
    json!({
        "blocks": m.blocks(),
        "radius": m.radius(),
        "monodromy": m.spec().monodromy.to_string(),
        "kinds": m.spec().kinds,
        "tubes": m.tubes().len(),
        "seed": m.spec().seed,
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

/// Smallest `C` with `d_G(Πx, Πy) ≤ C·d_G(x, y) + C` over the pairs, that is
/// the largest `d_G(Πx, Πy) / (d_G(x, y) + 1)`.
pub fn lipschitz_audit(ladder: &Ladder, sampling: Sampling, bound: f64) -> AuditReport {
    let model = ladder.model();
    let all: Vec<usize> = (0..model.vertex_count()).collect();
    let pairs = sampling.pairs(&all, &all, true);
    let proj = |v: usize| ladder.project(v).expect("sheet vertex");
    let measured: Vec<(f64, f64)> = match sampling {
        Sampling::Exhaustive => {
            let rows: Vec<Vec<f64>> = all.par_iter().map(|&v| model.distances_from(v)).collect();
            pairs
                .par_iter()
                .map(|&(x, y)| (rows[x][y], rows[proj(x)][proj(y)]))
                .collect()
        }
        Sampling::Sampled { .. } => pairs
            .par_iter()
            .map(|&(x, y)| {
                let d = model.distances_from(x)[y];
                let dp = model.distances_from(proj(x))[proj(y)];
                (d, dp)
            })
            .collect(),
    };
    let c = measured
        .iter()
        .map(|&(d, dp)| dp / (d + 1.0))
        .fold(0.0, f64::max);
    let ratio = measured
        .iter()
        .filter(|(d, _)| *d > 0.0)
        .map(|&(d, dp)| dp / d)
        .fold(0.0, f64::max);
    let max_projected = measured.iter().map(|p| p.1).fold(0.0, f64::max);
    AuditReport::new(
        "lipschitz",
        merge(model_params(model), merge(sampling.params(), json!({"bound": bound}))),
        json!({"C": c, "max_ratio": ratio, "max_projected_distance": max_projected}),
        measured.len(),
        c <= bound,
    )
}

/// Largest `d_G` distance to `B_λ` from a vertex of a `d_G` geodesic between
/// two points of `B_λ`.
pub fn ladder_quasiconvexity_audit(ladder: &Ladder, sampling: Sampling, bound: f64) -> AuditReport {
    let model = ladder.model();
    let b = ladder.vertices();
    let to_ladder = model.distances_from_set(&b);
    let pairs = sampling.pairs(&b, &b, true);
    let k = pairs
        .par_iter()
        .map(|&(u, v)| {
            model
                .geodesic(u, v)
                .iter()
                .map(|&x| to_ladder[x])
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    AuditReport::new(
        "ladder_quasiconvexity",
        merge(model_params(model), merge(sampling.params(), json!({"bound": bound}))),
        json!({"K": k}),
        pairs.len(),
        k <= bound,
    )
}

/// Four-point `δ` of the graph metric on sampled quadruples.
pub fn hyperbolicity_audit(model: &SplitModel, count: usize, seed: u64) -> AuditReport {
    let est = four_point_delta(model.metric().coned(), DeltaMode::Sampled { count, seed })
        .expect("sampled scans have no size limit");
    AuditReport::new(
        "hyperbolicity",
        merge(model_params(model), json!({"count": count, "seed": seed})),
        json!({"delta": est.delta}),
        count,
        est.delta.is_finite(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparationBounds {
    /// Bound on the distance from cross geodesics to the ray.
    pub c1: f64,
    /// Bound on the distance from adjacent cross points to a common ray point.
    pub k1: f64,
}

/// Splits each `λ_i` at `r(i)` and measures how close `d_G` geodesics from
/// `B_λ^−` to `B_λ^+` pass to the ray.
///
/// For each pair the geodesic is retracted onto `B_λ`; at the first step
/// `p → q` that leaves `B_λ^−` the report records `d_G(p, q)` as `K0` and
/// `min_z max(d_G(p, z), d_G(q, z))` over ray points `z` as `K1`.
pub fn coarse_separation_audit(
    ladder: &Ladder,
    ray: &QiRay,
    sampling: Sampling,
    bounds: SeparationBounds,
) -> Result<AuditReport, LadderError> {
    let model = ladder.model();
    if ray.points.len() != ladder.levels() {
        return Err(LadderError::NotOnLadder(ray.points.len().min(ladder.levels())));
    }
    let mut cut = Vec::with_capacity(ladder.levels());
    for (i, &p) in ray.points.iter().enumerate() {
        match ladder.position(p) {
            Some((level, k)) if level == i => cut.push(k),
            _ => return Err(LadderError::NotOnLadder(i)),
        }
    }
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for (i, &k) in cut.iter().enumerate() {
        let level = ladder.level_vertices(i);
        minus.extend_from_slice(&level[..k]);
        plus.extend_from_slice(&level[k + 1..]);
    }
    let side = |v: usize| -> Option<i8> {
        let (i, k) = ladder.position(v)?;
        Some((k as i64 - cut[i] as i64).signum() as i8)
    };
    let to_ray = model.distances_from_set(&ray.points);
    let pairs = sampling.pairs(&minus, &plus, false);
    let measured: Vec<(f64, f64, f64)> = pairs
        .par_iter()
        .map(|&(u, v)| {
            let path = model.geodesic(u, v);
            let c1 = path.iter().map(|&x| to_ray[x]).fold(f64::INFINITY, f64::min);
            let dotted: Vec<usize> = path
                .iter()
                .filter(|&&x| x < model.vertex_count())
                .map(|&x| ladder.project(x).expect("sheet vertex"))
                .collect();
            let m = dotted
                .windows(2)
                .position(|w| side(w[1]).is_some_and(|s| s >= 0))
                .expect("the path ends in B_λ^+");
            let (p, q) = (dotted[m], dotted[m + 1]);
            let (dp, dq) = (model.distances_from(p), model.distances_from(q));
            let k1 = ray
                .points
                .iter()
                .map(|&z| dp[z].max(dq[z]))
                .fold(f64::INFINITY, f64::min);
            (c1, k1, dp[q])
        })
        .collect();
    let c1 = measured.iter().map(|t| t.0).fold(0.0, f64::max);
    let k1 = measured.iter().map(|t| t.1).fold(0.0, f64::max);
    let k0 = measured.iter().map(|t| t.2).fold(0.0, f64::max);
    // both halves include the ray itself
    let with_ray = |side: &[usize]| -> Vec<usize> {
        side.iter().chain(&ray.points).copied().collect()
    };
    let from_plus = model.distances_from_set(&with_ray(&plus));
    let from_minus = model.distances_from_set(&with_ray(&minus));
    let far_minus = minus.iter().map(|&x| from_plus[x]).fold(0.0, f64::max);
    let far_plus = plus.iter().map(|&x| from_minus[x]).fold(0.0, f64::max);
    let pass = !measured.is_empty() && c1 <= bounds.c1 && k1 <= bounds.k1;
    Ok(AuditReport::new(
        "coarse_separation",
        merge(
            model_params(model),
            merge(
                sampling.params(),
                json!({"bound_c1": bounds.c1, "bound_k1": bounds.k1, "ray_quality": ray.quality}),
            ),
        ),
        json!({
            "C1": c1,
            "K1": k1,
            "K0": k0,
            "far_minus": far_minus,
            "far_plus": far_plus,
            "minus_size": minus.len(),
            "plus_size": plus.len(),
        }),
        measured.len(),
        pass,
    ))
}

/// `α(n) = d_G(r1(n), r2(n))`; passes when `α` does not increase from
/// level `window` on.
pub fn ray_asymptoticity_audit(
    model: &SplitModel,
    r1: &QiRay,
    r2: &QiRay,
    window: usize,
) -> AuditReport {
    let alpha: Vec<f64> = r1
        .points
        .par_iter()
        .zip(&r2.points)
        .map(|(&x, &y)| model.distance(x, y))
        .collect();
    let tail = alpha.get(window..).unwrap_or(&[]);
    let pass = tail.windows(2).all(|w| w[1] <= w[0] + SLACK);
    let tail_max = tail.iter().copied().fold(0.0, f64::max);
    AuditReport::new(
        "ray_asymptoticity",
        merge(
            model_params(model),
            json!({"window": window, "quality_1": r1.quality, "quality_2": r2.quality}),
        ),
        json!({"alpha": alpha, "alpha_tail_max": tail_max}),
        alpha.len(),
        pass,
    )
}

/// `d_G`-diameters of the parts of a sheet-0 path within each radius, and
/// the largest word-metric diameter of its intersection with a tube.
pub fn leaf_diameter_growth(
    model: &SplitModel,
    path: &[ReducedWord],
    radii: &[usize],
    component_bound: f64,
) -> Result<AuditReport, LadderError> {
    if let Some(&r) = radii.iter().find(|&&r| r > model.radius()) {
        return Err(LadderError::RadiusTooLarge {
            radius: r,
            model: model.radius(),
        });
    }
    let inside: Vec<(usize, usize)> = path
        .iter()
        .filter(|w| w.len() <= model.radius())
        .map(|w| Ok((w.len(), model.vertex_of(0, w)?)))
        .collect::<Result<_, LadderError>>()?;
    let rows: Vec<Vec<f64>> = inside
        .par_iter()
        .map(|&(_, v)| model.distances_from(v))
        .collect();
    let diameters: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let mut best = 0.0f64;
            for (i, &(li, _)) in inside.iter().enumerate() {
                for &(lj, vj) in &inside {
                    if li <= r && lj <= r {
                        best = best.max(rows[i][vj]);
                    }
                }
            }
            best
        })
        .collect();
    let mut component = 0usize;
    for tube in model.tubes().iter().filter(|t| t.start == 0) {
        let hit: Vec<usize> = inside
            .iter()
            .map(|&(_, v)| v)
            .filter(|v| tube.levels[0].binary_search(v).is_ok())
            .collect();
        for &x in &hit {
            for &y in &hit {
                component = component.max(model.sheet_distance(x, y));
            }
        }
    }
    let increasing = diameters.windows(2).all(|w| w[1] > w[0]);
    Ok(AuditReport::new(
        "leaf_diameter_growth",
        merge(
            model_params(model),
            json!({"radii": radii, "component_bound": component_bound, "path_length": path.len()}),
        ),
        json!({"diameters": diameters, "max_component_diameter": component}),
        inside.len(),
        increasing && component as f64 <= component_bound,
    ))
}

/// For each `N`, the least `d_G` distance from the origin to a geodesic
/// between two points of `λ_0` at word length at least `N`.
///
/// The verdict uses pairs on one side of the origin's projection to `λ_0`;
/// the profile over all pairs is reported alongside.
pub fn midpoint_escape_audit(ladder: &Ladder, ns: &[usize]) -> AuditReport {
    let model = ladder.model();
    let level: Vec<usize> = ladder.level(0).to_vec();
    let origin_local = model.local(&ReducedWord::identity()).expect("identity is in the ball");
    let origin = model.vertex(0, origin_local);
    let foot = ladder
        .position(ladder.project(origin).expect("sheet vertex"))
        .expect("projection lies on the ladder")
        .1;
    let from_origin = model.distances_from(origin);
    let n = level.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let escape: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| {
            model
                .geodesic(model.vertex(0, level[a]), model.vertex(0, level[b]))
                .iter()
                .map(|&x| from_origin[x])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let len = |k: usize| model.word(level[k]).len();
    let profile = |same_side: bool| -> Vec<Option<f64>> {
        ns.iter()
            .map(|&big_n| {
                pairs
                    .iter()
                    .zip(&escape)
                    .filter(|((a, b), _)| len(*a) >= big_n && len(*b) >= big_n)
                    .filter(|((a, b), _)| !same_side || (*b <= foot) || (*a >= foot))
                    .map(|(_, &e)| e)
                    .reduce(f64::min)
            })
            .collect()
    };
    let same = profile(true);
    let all = profile(false);
    let pass = same.iter().all(Option::is_some)
        && same
            .windows(2)
            .all(|w| w[1].unwrap_or(f64::NAN) >= w[0].unwrap_or(f64::NAN) - SLACK);
    AuditReport::new(
        "midpoint_escape",
        merge(model_params(model), json!({"N": ns, "base_length": n})),
        json!({"M": same, "M_all_pairs": all}),
        pairs.len(),
        pass,
    )
}
