//! Leaves linked through lifts of a transversal, and pole witnesses.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Leaf, LaminationError};
use crate::words::{cutting_sequence, BoundaryWord, Direction, QuadNumber, ReducedWord};

/// A segment `P → Q` inside the closed unit square of the base tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transversal {
    p: [QuadNumber; 2],
    q: [QuadNumber; 2],
}

impl Transversal {
    pub fn new(p: [QuadNumber; 2], q: [QuadNumber; 2]) -> Result<Self, LaminationError> {
        let zero = QuadNumber::integer(0);
        let one = QuadNumber::integer(1);
        let inside = |v: &[QuadNumber; 2]| v.iter().all(|c| *c >= zero && *c <= one);
        if p == q || !inside(&p) || !inside(&q) {
            return Err(LaminationError::InvalidTransversal);
        }
        Ok(Transversal { p, q })
    }

    /// The vertical segment `x = 1/2`, `1/4 ≤ y ≤ 3/4`.
    pub fn standard() -> Self {
        let r = |n, d| QuadNumber::rational(n, d).expect("nonzero");
        Transversal {
            p: [r(1, 2), r(1, 4)],
            q: [r(1, 2), r(3, 4)],
        }
    }

    /// Whether the line `y = s x + c` meets the segment (endpoints included).
    fn meets(&self, s: QuadNumber, c: QuadNumber) -> bool {
        let side = |v: &[QuadNumber; 2]| (s * v[0] + c - v[1]).signum();
        let (a, b) = (side(&self.p), side(&self.q));
        a != b || a == std::cmp::Ordering::Equal
    }
}

/// A group element `g` such that some leaf of a class crosses both `h·t` and
/// `g·h·t`, so the class is carried towards the pole `{g^∞, g^−∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleWitness {
    pub element: ReducedWord,
    /// Common prefix length of `g^k·ξ` with `g^∞` for `k = 1, 2, 3, 4`,
    /// where `ξ` is a forward endpoint of a class member.
    pub approach: Vec<usize>,
    /// Whether the translated lifts `g·ℓ` of all members join the class
    /// when linked through the lifts seen at this depth.
    pub invariant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafClass {
    /// Indices into the input leaf list, increasing.
    pub members: Vec<usize>,
    pub pole: Option<PoleWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafClassPartition {
    pub depth: usize,
    /// Classes ordered by their smallest member.
    pub classes: Vec<LeafClass>,
}

impl LeafClassPartition {
    pub fn pole_found(&self) -> bool {
        self.classes.iter().any(|c| c.pole.is_some())
    }

    /// Class index of each leaf.
    pub fn labels(&self, leaves: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; leaves];
        for (k, c) in self.classes.iter().enumerate() {
            for &m in &c.members {
                out[m] = k;
            }
        }
        out
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) {
        let (a, b) = (self.find(x), self.find(y));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.0[hi] = lo;
        }
    }
}

/// The tiles (group elements) where a leaf crosses the lift of `t`, among
/// the first `depth` tiles of the leaf in each direction: the base tile and
/// the tiles `h` with `|h| < depth` on its path.
fn crossing_tiles(
    leaf: &Leaf,
    t: &Transversal,
    depth: usize,
) -> Result<Vec<ReducedWord>, LaminationError> {
    let s = leaf.slope().value();
    let c = leaf.intercept();
    let j0 = c.floor();
    let mut tiles = Vec::new();
    let visit = |w: &ReducedWord, tiles: &mut Vec<ReducedWord>| {
        let (i, j) = w.abelianization();
        // the leaf in tile (i, j0 + j) seen in local coordinates
        let local =
            s * QuadNumber::integer(i as i128) + c - QuadNumber::integer(j0 + j as i128);
        if t.meets(s, local) {
            tiles.push(w.clone());
        }
    };
    if depth == 0 {
        return Ok(tiles);
    }
    visit(&ReducedWord::identity(), &mut tiles);
    for dir in [Direction::Forward, Direction::Backward] {
        let w = cutting_sequence(&leaf.slope(), &c, depth - 1, dir)?;
        for k in 1..depth {
            visit(&w.prefix(k), &mut tiles);
        }
    }
    Ok(tiles)
}

/// Links leaves that cross a common lift `h·t` with `|h| < depth` and looks
/// for pole witnesses of length at most `depth` in every class. Depth 0
/// looks at no lifts and returns singletons.
pub fn leaf_class_partition(
    leaves: &[Leaf],
    t: &Transversal,
    depth: usize,
) -> Result<LeafClassPartition, LaminationError> {
    let tiles: Vec<Vec<ReducedWord>> = leaves
        .iter()
        .map(|l| crossing_tiles(l, t, depth))
        .collect::<Result<_, _>>()?;
    let mut uf = UnionFind((0..leaves.len()).collect());
    let mut owner: BTreeMap<&ReducedWord, usize> = BTreeMap::new();
    for (k, ts) in tiles.iter().enumerate() {
        for h in ts {
            match owner.get(h) {
                Some(&o) => uf.union(o, k),
                None => {
                    owner.insert(h, k);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..leaves.len() {
        let r = uf.find(k);
        groups.entry(r).or_default().push(k);
    }
    let mut classes = Vec::new();
    for members in groups.into_values() {
        let pole = find_pole(leaves, &tiles, &members, depth)?;
        classes.push(LeafClass { members, pole });
    }
    classes.sort_by_key(|c| c.members[0]);
    Ok(LeafClassPartition { depth, classes })
}

/// Links the lifts `ℓ_k` of the members together with their translates
/// `g·ℓ_k` (which cross the lifts `g·h·t`) and checks that everything ends up
/// in one class.
fn translates_stay_linked(tiles: &[Vec<ReducedWord>], members: &[usize], g: &ReducedWord) -> bool {
    let n = members.len();
    let mut uf = UnionFind((0..2 * n).collect());
    let mut owner: BTreeMap<ReducedWord, usize> = BTreeMap::new();
    for (slot, &k) in members.iter().enumerate() {
        let moved = tiles[k].iter().map(|h| (g.concat(h), n + slot));
        for (h, id) in tiles[k].iter().map(|h| (h.clone(), slot)).chain(moved) {
            match owner.get(&h) {
                Some(&o) => uf.union(o, id),
                None => {
                    owner.insert(h, id);
                }
            }
        }
    }
    let root = uf.find(0);
    (0..2 * n).all(|i| uf.find(i) == root)
}

fn find_pole(
    leaves: &[Leaf],
    tiles: &[Vec<ReducedWord>],
    members: &[usize],
    depth: usize,
) -> Result<Option<PoleWitness>, LaminationError> {
    // shortlex-minimal g = h2·h1⁻¹ over pairs of lifts crossed by one leaf
    let mut best: Option<(ReducedWord, usize)> = None;
    for &m in members {
        for h1 in &tiles[m] {
            for h2 in &tiles[m] {
                let g = h2.concat(&h1.inverse());
                if g.is_empty() || g.len() > depth {
                    continue;
                }
                if best.as_ref().is_none_or(|(b, _)| g.shortlex_cmp(b).is_lt()) {
                    best = Some((g, m));
                }
            }
        }
    }
    let Some((g, m)) = best else {
        return Ok(None);
    };
    let invariant = translates_stay_linked(tiles, members, &g);
    let pole = BoundaryWord::attracting_end(&g)?;
    let (forward, _) = leaves[m].endpoints();
    let span = depth.max(4) * 8;
    let xi = forward.prefix(span)?;
    let target = pole.prefix(span)?;
    let approach = (1..=4)
        .map(|k| g.pow(k).concat(&xi).common_prefix_len(&target))
        .collect();
    Ok(Some(PoleWitness {
        element: g,
        approach,
        invariant,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::sample_leaves;
    use crate::words::{reduced_words_up_to, Slope};

    fn q(p: i128, d: i128) -> QuadNumber {
        QuadNumber::rational(p, d).unwrap()
    }

    /// Brute force: a class has a pole witness of length ≤ n iff some
    /// member crosses both `h·t` and `g·h·t` for a word `g` with `|g| ≤ n`.
    #[test]
    fn golden_slope_has_a_pole_at_depth_six() {
        let s = Slope::golden_conjugate();
        let leaves = sample_leaves(&s, 12, 5).unwrap();
        let t = Transversal::standard();
        let p = leaf_class_partition(&leaves, &t, 6).unwrap();
        assert!(p.pole_found());
        let words = reduced_words_up_to(6);
        for class in &p.classes {
            if let Some(w) = &class.pole {
                let m = class.members.iter().copied().find(|&m| {
                    let ts = crossing_tiles(&leaves[m], &t, 6).unwrap();
                    ts.iter().any(|h| ts.contains(&w.element.concat(h)))
                });
                assert!(m.is_some());
                assert!(w.approach.windows(2).all(|a| a[0] < a[1]), "{:?}", w.approach);
                assert!(w.invariant);
                // nothing shorter in shortlex order works for this class
                for g in words.iter().filter(|g| g.shortlex_cmp(&w.element).is_lt()) {
                    if g.is_empty() {
                        continue;
                    }
                    for &m in &class.members {
                        let ts = crossing_tiles(&leaves[m], &t, 6).unwrap();
                        assert!(!ts.iter().any(|h| ts.contains(&g.concat(h))), "{g}");
                    }
                }
            }
        }
    }

    #[test]
    fn deeper_searches_only_merge_classes() {
        let s = Slope::golden_conjugate();
        let leaves = sample_leaves(&s, 25, 8).unwrap();
        let t = Transversal::standard();
        let mut prev: Option<Vec<usize>> = None;
        for depth in 0..=8 {
            let p = leaf_class_partition(&leaves, &t, depth).unwrap();
            let labels = p.labels(leaves.len());
            if let Some(prev) = prev {
                for i in 0..leaves.len() {
                    for j in 0..leaves.len() {
                        if prev[i] == prev[j] {
                            assert_eq!(labels[i], labels[j], "depth {depth}");
                        }
                    }
                }
            }
            prev = Some(labels);
        }
    }

    #[test]
    fn depth_zero_gives_singletons() {
        let leaves = sample_leaves(&Slope::golden_conjugate(), 10, 3).unwrap();
        let p = leaf_class_partition(&leaves, &Transversal::standard(), 0).unwrap();
        assert_eq!(p.classes.len(), 10);
        assert!(!p.pole_found());
        // one layer already links the leaves through the base transversal
        let p = leaf_class_partition(&leaves, &Transversal::standard(), 1).unwrap();
        assert!(p.classes.len() < 10);
    }

    #[test]
    fn transversal_validation() {
        let z = QuadNumber::integer(0);
        assert!(Transversal::new([z, z], [z, z]).is_err());
        assert!(Transversal::new([z, z], [q(3, 2), z]).is_err());
        assert!(Transversal::new([z, z], [q(1, 2), q(1, 2)]).is_ok());
    }
}
