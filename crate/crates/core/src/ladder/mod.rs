//! Synthetic split-geometry models: stacks of Cayley-graph balls of the free
//! group glued by automorphisms, with tubes of split components coned off.
//! Ladders over a base geodesic, their sheetwise retraction, rays on them,
//! and the audits that measure the coarse constants of the construction.

mod audit;
mod build;
mod spec;

pub use audit::{
    coarse_separation_audit, hyperbolicity_audit, ladder_quasiconvexity_audit,
    leaf_diameter_growth, lipschitz_audit, midpoint_escape_audit, ray_asymptoticity_audit,
    AuditReport, Sampling, SeparationBounds,
};
pub use build::{leaf_path, qi_ray, tree_geodesic, twin_ladder_ray, Ladder, QiRay};
pub use spec::{BlockKind, SplitSpec};

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coarse::{
    distances_from, distances_from_set, electrocute, shortest_path, CoarseError, ElectricGraph,
    MetricGraph, SubsetFamily,
};
use crate::kleinian::KleinianError;
use crate::lamination::LaminationError;
use crate::words::{reduced_words_up_to, Automorphism, ReducedWord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LadderError {
    #[error("split spec line {line}: {message}")]
    Spec { line: usize, message: String },
    #[error("infeasible split spec: {0}")]
    Infeasible(String),
    #[error("word {0} is not in the sheet ball")]
    NotInSheet(ReducedWord),
    #[error("vertex {0} is not a sheet vertex")]
    NotSheetVertex(usize),
    #[error("ray point at level {0} is not on the ladder")]
    NotOnLadder(usize),
    #[error("the ladder misses the ball at level {0}")]
    LevelOutsideBall(usize),
    #[error("ladders do not intersect at level {0}")]
    EmptyIntersection(usize),
    #[error("ladders are built over different models")]
    DifferentModels,
    #[error("radius {radius} exceeds the model radius {model}")]
    RadiusTooLarge { radius: usize, model: usize },
    #[error(transparent)]
    Coarse(#[from] CoarseError),
    #[error(transparent)]
    Kleinian(#[from] KleinianError),
    #[error(transparent)]
    Lamination(#[from] LaminationError),
}

/// A tube: connected subsets of consecutive sheets `start..=end`, coned off
/// together as one split component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tube {
    pub start: usize,
    pub end: usize,
    /// Sheet-local vertex ids, one list per level `start..=end`.
    pub levels: Vec<Vec<usize>>,
}

/// Sheets `0..=N`, each the ball of radius `R` in the Cayley tree of
/// `F(a, b)`, with sheet `i` glued to sheet `i + 1` along `Φ_i`, and the
/// tubes of the split blocks.
#[derive(Clone, Debug)]
pub struct SplitModel {
    spec: SplitSpec,
    words: Vec<ReducedWord>,
    index: HashMap<ReducedWord, usize>,
    auto: Automorphism,
    /// `gluing[i][x]` is the local id of `Φ_i(x)` in sheet `i + 1`, when it
    /// lies in the ball.
    gluing: Vec<Vec<Option<usize>>>,
    tubes: Vec<Tube>,
    metric: ElectricGraph,
}

fn ball_around(center: &ReducedWord, r: usize, radius: usize) -> Vec<ReducedWord> {
    reduced_words_up_to(r)
        .iter()
        .map(|y| center.concat(y))
        .filter(|w| w.len() <= radius)
        .collect()
}

impl SplitModel {
    /// Builds the model; split blocks glue by `auto`, thick blocks by the
    /// identity. A vertex gets a vertical edge only when the image of its
    /// word stays inside the ball.
    pub fn build(auto: &Automorphism, spec: &SplitSpec) -> Result<Self, LadderError> {
        spec.validate()?;
        let radius = spec.radius;
        let words = reduced_words_up_to(radius);
        let index: HashMap<ReducedWord, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let identity: Vec<Option<usize>> = (0..words.len()).map(Some).collect();
        let twisted: Vec<Option<usize>> =
            words.iter().map(|w| index.get(&auto.apply(w)).copied()).collect();
        let gluing: Vec<Vec<Option<usize>>> = spec
            .kinds
            .iter()
            .map(|k| match k {
                BlockKind::Thick => identity.clone(),
                BlockKind::Split => twisted.clone(),
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let r = spec.component_radius;
        let centers: Vec<usize> = (0..words.len())
            .filter(|&i| words[i].len() + r <= radius)
            .collect();
        let mut tubes = Vec::new();
        for start in 0..spec.blocks {
            if spec.kinds[start] != BlockKind::Split {
                continue;
            }
            let room = spec.kinds[start..]
                .iter()
                .take_while(|k| **k == BlockKind::Split)
                .count();
            let (lo, hi) = (spec.tube_span.0, spec.tube_span.1.min(room));
            if lo > hi {
                return Err(LadderError::Infeasible(format!(
                    "a tube starting at block {start} cannot span {lo} split blocks"
                )));
            }
            for _ in 0..spec.components {
                let span = rng.gen_range(lo..=hi);
                let mut c = centers[rng.gen_range(0..centers.len())];
                let mut levels = Vec::with_capacity(span + 1);
                for level in start..=start + span {
                    let mut ids: Vec<usize> = ball_around(&words[c], r, radius)
                        .iter()
                        .map(|w| index[w])
                        .collect();
                    ids.sort_unstable();
                    levels.push(ids);
                    if level < start + span {
                        // the next cross-section sits at the ball point nearest the image
                        c = index[&auto.apply(&words[c]).prefix(radius)];
                    }
                }
                tubes.push(Tube {
                    start,
                    end: start + span,
                    levels,
                });
            }
        }

        let size = words.len();
        let mut edges = Vec::new();
        for sheet in 0..=spec.blocks {
            let off = sheet * size;
            for (i, w) in words.iter().enumerate().skip(1) {
                edges.push((off + index[&w.prefix(w.len() - 1)], off + i, 1.0));
            }
            if let Some(glue) = gluing.get(sheet) {
                for (x, y) in glue.iter().enumerate() {
                    if let Some(y) = y {
                        edges.push((off + x, off + size + y, 1.0));
                    }
                }
            }
        }
        let base = MetricGraph::new(size * (spec.blocks + 1), &edges)?;
        let family = SubsetFamily::new(
            tubes
                .iter()
                .map(|t| {
                    t.levels
                        .iter()
                        .enumerate()
                        .flat_map(|(k, ids)| ids.iter().map(move |&x| (t.start + k) * size + x))
                        .collect()
                })
                .collect(),
        );
        let metric = electrocute(&base, &family)?;
        Ok(SplitModel {
            spec: spec.clone(),
            words,
            index,
            auto: auto.clone(),
            gluing,
            tubes,
            metric,
        })
    }

    pub fn spec(&self) -> &SplitSpec {
        &self.spec
    }

    pub fn blocks(&self) -> usize {
        self.spec.blocks
    }

    pub fn radius(&self) -> usize {
        self.spec.radius
    }

    pub fn sheet_size(&self) -> usize {
        self.words.len()
    }

    /// Number of sheet vertices (apexes excluded).
    pub fn vertex_count(&self) -> usize {
        self.sheet_size() * (self.blocks() + 1)
    }

    pub fn tubes(&self) -> &[Tube] {
        &self.tubes
    }

    pub fn word(&self, local: usize) -> &ReducedWord {
        &self.words[local]
    }

    pub fn local(&self, w: &ReducedWord) -> Result<usize, LadderError> {
        self.index
            .get(w)
            .copied()
            .ok_or_else(|| LadderError::NotInSheet(w.clone()))
    }

    pub fn vertex(&self, sheet: usize, local: usize) -> usize {
        sheet * self.sheet_size() + local
    }

    pub fn vertex_of(&self, sheet: usize, w: &ReducedWord) -> Result<usize, LadderError> {
        Ok(self.vertex(sheet, self.local(w)?))
    }

    /// `(sheet, local id)` of a sheet vertex.
    pub fn locate(&self, v: usize) -> Result<(usize, usize), LadderError> {
        if v >= self.vertex_count() {
            return Err(LadderError::NotSheetVertex(v));
        }
        Ok((v / self.sheet_size(), v % self.sheet_size()))
    }

    /// `Φ_i` on local ids; `None` when the image leaves the ball.
    pub fn glue(&self, block: usize, local: usize) -> Option<usize> {
        self.gluing[block][local]
    }

    /// `Φ_i` on words of the whole group.
    pub fn glue_word(&self, block: usize, w: &ReducedWord) -> ReducedWord {
        match self.spec.kinds[block] {
            BlockKind::Thick => w.clone(),
            BlockKind::Split => self.auto.apply(w),
        }
    }

    /// The graph metric: sheets, verticals and coned-off tubes.
    pub fn metric(&self) -> &ElectricGraph {
        &self.metric
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        self.distances_from(x)[y]
    }

    /// `d_G` from `x` to every vertex, apexes included.
    pub fn distances_from(&self, x: usize) -> Vec<f64> {
        distances_from(self.metric.coned(), x).expect("vertex in range")
    }

    pub fn distances_from_set(&self, xs: &[usize]) -> Vec<f64> {
        distances_from_set(self.metric.coned(), xs).expect("vertices in range")
    }

    /// Vertices of the `d_G` shortest path with the smallest vertex
    /// sequence, apexes included.
    pub fn geodesic(&self, x: usize, y: usize) -> Vec<usize> {
        shortest_path(self.metric.coned(), x, y)
            .expect("vertices in range")
            .vertices
    }

    /// Word-metric distance within one sheet.
    pub fn sheet_distance(&self, x: usize, y: usize) -> usize {
        self.words[x].inverse().concat(&self.words[y]).len()
    }
}
