//! Approximating the boundary map on words.
//!
//! The image of a boundary point `ξ` is approximated by `ρ(ξ_n)(i)`, the
//! orbit of the base point `i` under the length-`n` prefix. The gap between
//! the depth-`n` and depth-`(n − stride)` approximants is reported as the
//! convergence estimate.

use rayon::prelude::*;

use super::{KleinianError, Representation};
use crate::hyp::{RiemannPoint, SpherePoint, Tolerance};
use crate::words::{BoundaryWord, Letter, ReducedWord};

/// Default spacing between the two approximants compared by the estimate.
pub const DEFAULT_STRIDE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtStatus {
    Converged,
    Undecided,
}

/// One approximation of a boundary image.
#[derive(Clone, Debug, PartialEq)]
pub struct CtSample {
    pub prefix: ReducedWord,
    /// The depth-`n` approximant, kept even when undecided.
    pub approximant: SpherePoint,
    /// Chordal distance between the depth-`n` and depth-`(n − stride)`
    /// approximants.
    pub estimate: f64,
    pub status: CtStatus,
    /// For eventually periodic words, the chordal distance to the image
    /// predicted by the fixed point of the period.
    pub fixed_point_gap: Option<f64>,
}

impl CtSample {
    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    /// The image, only when the estimate is within tolerance.
    pub fn point(&self) -> Option<SpherePoint> {
        (self.status == CtStatus::Converged).then_some(self.approximant)
    }
}

fn base_point() -> RiemannPoint {
    RiemannPoint::new(0.0, 1.0)
}

pub fn ct_image(
    rep: &Representation,
    xi: &BoundaryWord,
    depth: usize,
    tol: f64,
) -> Result<CtSample, KleinianError> {
    ct_image_with_stride(rep, xi, depth, DEFAULT_STRIDE, tol)
}

pub fn ct_image_with_stride(
    rep: &Representation,
    xi: &BoundaryWord,
    depth: usize,
    stride: usize,
    tol: f64,
) -> Result<CtSample, KleinianError> {
    let prefix = xi.prefix(depth)?;
    let gens = Letter::ALL.map(|l| rep.generator(l));
    let earlier_depth = depth.saturating_sub(stride.max(1));
    let mut m = crate::hyp::MobiusMap::identity();
    let mut earlier = m;
    for (k, l) in prefix.letters().iter().enumerate() {
        if k == earlier_depth {
            earlier = m;
        }
        m = m.compose(&gens[l.cyclic_index()]);
    }
    if earlier_depth == depth {
        earlier = m;
    }
    let approximant = m.apply(base_point()).to_sphere();
    let estimate = approximant.chordal(&earlier.apply(base_point()).to_sphere());
    let status = if estimate.is_finite() && estimate < tol {
        CtStatus::Converged
    } else {
        CtStatus::Undecided
    };
    let fixed_point_gap = periodic_limit(rep, xi)?.map(|p| approximant.chordal(&p));
    Ok(CtSample {
        prefix,
        approximant,
        estimate,
        status,
        fixed_point_gap,
    })
}

/// For `ξ = u·v^∞`, the point `ρ(u)(p)` with `p` the forward limit of `ρ(v)`.
/// `None` for words without periodic structure or elliptic periods.
pub fn periodic_limit(
    rep: &Representation,
    xi: &BoundaryWord,
) -> Result<Option<SpherePoint>, KleinianError> {
    let Some((head, period)) = xi.periodic_parts() else {
        return Ok(None);
    };
    let class = rep.evaluate(period).classify(&Tolerance::default())?;
    Ok(class
        .forward_limit()
        .map(|p| rep.evaluate(head).apply(p).to_sphere()))
}

/// Approximates many images in parallel; results keep the input order.
pub fn ct_batch(
    rep: &Representation,
    words: &[BoundaryWord],
    depth: usize,
    tol: f64,
) -> Vec<Result<CtSample, KleinianError>> {
    words
        .par_iter()
        .map(|xi| ct_image(rep, xi, depth, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kleinian::{solve_fiber_representation, Monodromy, SolverOptions};
    use crate::words::{Direction, QuadNumber, Slope};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn rep() -> &'static Representation {
        static REP: OnceLock<Representation> = OnceLock::new();
        REP.get_or_init(|| {
            solve_fiber_representation(&Monodromy::figure_eight(), &SolverOptions::default())
                .unwrap()
        })
    }

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn powers_of_a_converge_to_its_fixed_point() {
        let xi = BoundaryWord::attracting_end(&w("a")).unwrap();
        let sample = ct_image(rep(), &xi, 60, 1e-6).unwrap();
        assert_eq!(sample.status, CtStatus::Converged);
        // normal position puts the attracting fixed point of ρ(a) at 1
        let one = RiemannPoint::new(1.0, 0.0).to_sphere();
        assert!(sample.point().unwrap().chordal(&one) < 1e-6);
        assert!(sample.fixed_point_gap.unwrap() < 1e-6);
    }

    #[test]
    fn periodic_words_agree_with_fixed_point_formula() {
        for (u, v) in [("", "ab"), ("B", "aab"), ("ba", "abAB"), ("A", "bbA")] {
            let xi = BoundaryWord::periodic(&w(u), &w(v)).unwrap();
            let sample = ct_image(rep(), &xi, 200, 1e-3).unwrap();
            let gap = sample.fixed_point_gap.unwrap();
            assert!(gap < 1e-2, "{u}·({v})^∞: gap {gap}");
        }
    }

    #[test]
    fn shared_prefix_equivariance() {
        // ξ = u·η, so ρ(ξ_n)(i) = ρ(u) ρ(η_{n−|u|})(i)
        let u = w("baB");
        let eta = BoundaryWord::cutting(
            Slope::golden_conjugate(),
            QuadNumber::rational(2, 7).unwrap(),
            Direction::Forward,
        );
        let eta_prefix = eta.prefix(27).unwrap();
        assert_eq!(u.concat(&eta_prefix).len(), 30);
        let xi = BoundaryWord::stored(u.concat(&eta_prefix));
        let lhs = ct_image(rep(), &xi, 30, 1.0).unwrap().approximant;
        let inner = ct_image(rep(), &BoundaryWord::stored(eta_prefix), 27, 1.0)
            .unwrap()
            .approximant;
        let rhs = rep().evaluate(&u).apply_sphere(&inner);
        assert!(lhs.chordal(&rhs) < 1e-9);
    }

    #[test]
    fn undecided_samples_do_not_report_points() {
        let xi = BoundaryWord::stored(w("abab"));
        let s = ct_image(rep(), &xi, 4, 1e-12).unwrap();
        assert_eq!(s.status, CtStatus::Undecided);
        assert!(s.point().is_none());
        assert!(s.estimate >= 0.0);
        assert!(ct_image(rep(), &xi, 5, 1e-3).is_err());
    }

    #[test]
    fn boundary_map_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = 1e-3;
        let gs: Vec<ReducedWord> = crate::words::reduced_words_up_to(4)
            .into_iter()
            .filter(|g| !g.is_empty())
            .collect();
        for _ in 0..50 {
            let mut letters = vec![Letter::ALL[rng.gen_range(0..4)]];
            while letters.len() < 40 {
                let l = Letter::ALL[rng.gen_range(0..4)];
                if l != letters[letters.len() - 1].inverse() {
                    letters.push(l);
                }
            }
            let base = ReducedWord::reduce(letters);
            let xi = BoundaryWord::stored(base);
            let g = &gs[rng.gen_range(0..gs.len())];
            let moved = ct_image(rep(), &xi.translate(g), 25, tol).unwrap();
            let here = ct_image(rep(), &xi, 25, tol).unwrap();
            // ρ(g) applied to the image of ξ, compared with the image of g·ξ
            let pushed = rep().evaluate(g).apply_sphere(&here.approximant);
            let gap = moved.approximant.chordal(&pushed);
            assert!(gap < 10.0 * tol, "g = {g}: gap {gap}");
        }
    }

    #[test]
    fn batch_preserves_order() {
        let words: Vec<BoundaryWord> = ["a", "b", "ab", "aab"]
            .iter()
            .map(|s| BoundaryWord::attracting_end(&w(s)).unwrap())
            .collect();
        let batch = ct_batch(rep(), &words, 30, 1e-3);
        for (xi, got) in words.iter().zip(batch) {
            assert_eq!(got.unwrap(), ct_image(rep(), xi, 30, 1e-3).unwrap());
        }
    }
}
