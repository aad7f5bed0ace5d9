use std::collections::HashSet;

use serde::Serialize;

use super::{LadderError, SplitModel};
use crate::lamination::Leaf;
use crate::words::{cutting_sequence, Direction, ReducedWord};

/// Vertices of the tree geodesic from `p` to `q` in the Cayley tree.
pub fn tree_geodesic(p: &ReducedWord, q: &ReducedWord) -> Vec<ReducedWord> {
    let meet = p.common_prefix_len(q);
    let mut out: Vec<ReducedWord> = (meet..=p.len()).rev().map(|k| p.prefix(k)).collect();
    out.extend((meet + 1..=q.len()).map(|k| q.prefix(k)));
    out
}

/// The tiles crossed by a leaf within word length `radius`, as a path in the
/// Cayley tree from the backward end through the identity to the forward end.
pub fn leaf_path(leaf: &Leaf, radius: usize) -> Result<Vec<ReducedWord>, LadderError> {
    let fwd = cutting_sequence(&leaf.slope(), &leaf.intercept(), radius, Direction::Forward)
        .map_err(crate::lamination::LaminationError::from)?;
    let bwd = cutting_sequence(&leaf.slope(), &leaf.intercept(), radius, Direction::Backward)
        .map_err(crate::lamination::LaminationError::from)?;
    Ok(tree_geodesic(&bwd, &fwd))
}

/// The sets `λ_i` over a base geodesic `λ_0` with the sheetwise nearest
/// point projections onto them.
#[derive(Clone, Debug)]
pub struct Ladder<'m> {
    model: &'m SplitModel,
    /// Local ids of `λ_i`, ordered from the image of the first endpoint of
    /// `λ_0` to the image of the second.
    levels: Vec<Vec<usize>>,
    /// `projection[i][x]` is the local id of the projection of `x` onto `λ_i`.
    projection: Vec<Vec<usize>>,
}

/// Median of three words in the Cayley tree: the deepest pairwise meet.
fn median(x: &ReducedWord, p: &ReducedWord, q: &ReducedWord) -> ReducedWord {
    let candidates = [
        x.prefix(x.common_prefix_len(p)),
        x.prefix(x.common_prefix_len(q)),
        p.prefix(p.common_prefix_len(q)),
    ];
    candidates
        .into_iter()
        .max_by_key(|w| w.len())
        .expect("three candidates")
}

impl<'m> Ladder<'m> {
    /// `λ_0` is the tree geodesic from `p` to `q` in sheet 0. Level `i` is
    /// the part inside the ball of the tree geodesic joining `Φ^i(p)` and
    /// `Φ^i(q)`, the images being taken in the whole group.
    pub fn build(
        model: &'m SplitModel,
        p: &ReducedWord,
        q: &ReducedWord,
    ) -> Result<Self, LadderError> {
        model.local(p)?;
        model.local(q)?;
        let (mut wp, mut wq) = (p.clone(), q.clone());
        let mut levels = Vec::with_capacity(model.blocks() + 1);
        let mut projection = Vec::with_capacity(model.blocks() + 1);
        for sheet in 0..=model.blocks() {
            let path: Vec<usize> = tree_geodesic(&wp, &wq)
                .iter()
                .filter(|w| w.len() <= model.radius())
                .map(|w| model.local(w))
                .collect::<Result<_, _>>()?;
            let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
                return Err(LadderError::LevelOutsideBall(sheet));
            };
            let (ea, eb) = (model.word(first).clone(), model.word(last).clone());
            projection.push(
                (0..model.sheet_size())
                    .map(|x| model.local(&median(model.word(x), &ea, &eb)))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            levels.push(path);
            if sheet < model.blocks() {
                wp = model.glue_word(sheet, &wp);
                wq = model.glue_word(sheet, &wq);
            }
        }
        Ok(Ladder {
            model,
            levels,
            projection,
        })
    }

    pub fn model(&self) -> &'m SplitModel {
        self.model
    }

    /// Local ids of `λ_i` in path order.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i]
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    /// Global ids of `λ_i` in path order.
    pub fn level_vertices(&self, i: usize) -> Vec<usize> {
        self.levels[i]
            .iter()
            .map(|&x| self.model.vertex(i, x))
            .collect()
    }

    /// Global ids of `B_λ`, the union of all `λ_i`.
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.levels()).flat_map(|i| self.level_vertices(i)).collect()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.model
            .locate(v)
            .is_ok_and(|(i, x)| self.levels[i].contains(&x))
    }

    /// Position of a global vertex along its level, if it lies on `λ_i`.
    pub fn position(&self, v: usize) -> Option<(usize, usize)> {
        let (i, x) = self.model.locate(v).ok()?;
        self.levels[i].iter().position(|&y| y == x).map(|k| (i, k))
    }

    /// The retraction `Π_λ`: nearest point projection of a sheet vertex onto
    /// the `λ_i` of its own sheet.
    pub fn project(&self, v: usize) -> Result<usize, LadderError> {
        let (i, x) = self.model.locate(v)?;
        Ok(self.model.vertex(i, self.projection[i][x]))
    }
}

/// A sequence with one point on each `λ_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QiRay {
    /// Global vertex ids, `points[i]` on level `i`.
    pub points: Vec<usize>,
    /// Largest `d_G` between consecutive points.
    pub quality: f64,
}

impl QiRay {
    pub fn new(model: &SplitModel, points: Vec<usize>) -> Self {
        let quality = points
            .windows(2)
            .map(|w| model.distance(w[0], w[1]))
            .fold(0.0, f64::max);
        QiRay { points, quality }
    }
}

fn nearest_on(model: &SplitModel, from: usize, candidates: &[usize]) -> usize {
    let d = model.distances_from(from);
    *candidates
        .iter()
        .min_by(|&&x, &&y| d[x].total_cmp(&d[y]).then(x.cmp(&y)))
        .expect("levels are nonempty")
}

/// Extends `start ∈ λ_j` up and down the ladder, each time to the
/// `d_G`-nearest point of the adjacent level (smallest id on ties).
pub fn qi_ray(ladder: &Ladder, start: usize) -> Result<QiRay, LadderError> {
    let model = ladder.model();
    let (j, _) = ladder
        .position(start)
        .ok_or_else(|| LadderError::NotOnLadder(model.locate(start).map_or(0, |p| p.0)))?;
    let mut points = vec![0; ladder.levels()];
    points[j] = start;
    for i in j + 1..ladder.levels() {
        points[i] = nearest_on(model, points[i - 1], &ladder.level_vertices(i));
    }
    for i in (0..j).rev() {
        points[i] = nearest_on(model, points[i + 1], &ladder.level_vertices(i));
    }
    Ok(QiRay::new(model, points))
}

/// The ray through the intersections `λ_i ∩ μ_i`. Each intersection is a
/// segment of the tree; its middle vertex is taken, the smaller id when the
/// segment has two middle vertices.
pub fn twin_ladder_ray(l1: &Ladder, l2: &Ladder) -> Result<QiRay, LadderError> {
    let model = l1.model();
    if !std::ptr::eq(model, l2.model()) {
        return Err(LadderError::DifferentModels);
    }
    let mut points = Vec::with_capacity(l1.levels());
    for i in 0..l1.levels() {
        let other: HashSet<usize> = l2.level(i).iter().copied().collect();
        let common: Vec<usize> = l1
            .level(i)
            .iter()
            .copied()
            .filter(|x| other.contains(x))
            .collect();
        if common.is_empty() {
            return Err(LadderError::EmptyIntersection(i));
        }
        let n = common.len();
        let mid = if n % 2 == 1 {
            common[n / 2]
        } else {
            common[n / 2 - 1].min(common[n / 2])
        };
        points.push(model.vertex(i, mid));
    }
    Ok(QiRay::new(model, points))
}
