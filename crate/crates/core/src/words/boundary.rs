//! Points of the boundary circle of `F(a, b)` as infinite reduced words,
//! together with their circular order.
//!
//! The Cayley tree is embedded in the plane with the edges at every vertex in
//! counterclockwise order `a, b, A, B`. Reading a word letter by letter, the
//! first letter picks one of four branches and every later letter one of the
//! three branches that follow the incoming edge counterclockwise. This turns
//! each infinite word into a base-(4, 3, 3, …) expansion of a number in
//! `[0, 1)`, and the order of those numbers is the circular order of the
//! boundary cut at a fixed point.

use std::cmp::Ordering;

use super::{cutting_sequence, Direction, Letter, QuadNumber, ReducedWord, Slope, WordError};

#[derive(Clone, Debug, PartialEq)]
enum Source {
    Stored(ReducedWord),
    /// `head · period^∞`, already normalized so the infinite word is reduced.
    Periodic {
        head: ReducedWord,
        period: ReducedWord,
    },
    Cutting {
        slope: Slope,
        intercept: QuadNumber,
        direction: Direction,
    },
    Translate {
        by: ReducedWord,
        inner: Box<BoundaryWord>,
    },
}

/// A point of the boundary given by a rule that produces as many letters as
/// requested, or by a stored finite prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryWord {
    source: Source,
}

impl BoundaryWord {
    /// A stored prefix; only `w.len()` letters are available.
    pub fn stored(w: ReducedWord) -> Self {
        BoundaryWord {
            source: Source::Stored(w),
        }
    }

    /// The eventually periodic point `head · period^∞`.
    pub fn periodic(head: &ReducedWord, period: &ReducedWord) -> Result<Self, WordError> {
        if period.is_empty() {
            return Err(WordError::TrivialPeriod);
        }
        // period = t · core · t⁻¹, so head · period^∞ = (head · t) · core^∞
        let (t, core) = period.cyclic_decomposition();
        let mut head = head.concat(&t).letters().to_vec();
        let mut core = core.letters().to_vec();
        while let (Some(&last), Some(&first)) = (head.last(), core.first()) {
            if last != first.inverse() {
                break;
            }
            head.pop();
            core.rotate_left(1);
        }
        Ok(BoundaryWord {
            source: Source::Periodic {
                head: ReducedWord::from_reduced_vec(head),
                period: ReducedWord::from_reduced_vec(core),
            },
        })
    }

    /// The forward limit `g^∞` of a nontrivial element.
    pub fn attracting_end(g: &ReducedWord) -> Result<Self, WordError> {
        Self::periodic(&ReducedWord::identity(), g)
    }

    /// The cutting sequence of the line `y = s·x + c` in the given direction.
    pub fn cutting(slope: Slope, intercept: QuadNumber, direction: Direction) -> Self {
        BoundaryWord {
            source: Source::Cutting {
                slope,
                intercept,
                direction,
            },
        }
    }

    /// The image `g · ξ` under the left action of the group.
    pub fn translate(&self, g: &ReducedWord) -> Self {
        if g.is_empty() {
            return self.clone();
        }
        match &self.source {
            Source::Translate { by, inner } => inner.translate(&g.concat(by)),
            Source::Periodic { head, period } => {
                Self::periodic(&g.concat(head), period).expect("period is nontrivial")
            }
            Source::Stored(w) => {
                // only the letters that survive cancellation are meaningful
                BoundaryWord {
                    source: Source::Translate {
                        by: g.clone(),
                        inner: Box::new(Self::stored(w.clone())),
                    },
                }
            }
            Source::Cutting { .. } => BoundaryWord {
                source: Source::Translate {
                    by: g.clone(),
                    inner: Box::new(self.clone()),
                },
            },
        }
    }

    /// Number of letters that can be produced, `None` when unbounded.
    pub fn available_depth(&self) -> Option<usize> {
        match &self.source {
            Source::Stored(w) => Some(w.len()),
            Source::Periodic { .. } | Source::Cutting { .. } => None,
            Source::Translate { by, inner } => inner
                .available_depth()
                .map(|_| self.bounded_product(by, inner).map_or(0, |p| p.len())),
        }
    }

    /// `(head, period)` when the point is eventually periodic.
    pub fn periodic_parts(&self) -> Option<(&ReducedWord, &ReducedWord)> {
        match &self.source {
            Source::Periodic { head, period } => Some((head, period)),
            _ => None,
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Result<ReducedWord, WordError> {
        match &self.source {
            Source::Stored(w) => {
                if n > w.len() {
                    Err(WordError::DepthUnavailable {
                        requested: n,
                        available: w.len(),
                    })
                } else {
                    Ok(w.prefix(n))
                }
            }
            Source::Periodic { head, period } => {
                let mut v: Vec<Letter> = head.letters().iter().copied().take(n).collect();
                v.extend(period.letters().iter().copied().cycle().take(n - v.len()));
                Ok(ReducedWord::from_reduced_vec(v))
            }
            Source::Cutting {
                slope,
                intercept,
                direction,
            } => cutting_sequence(slope, intercept, n, *direction),
            Source::Translate { by, inner } => {
                let product = match inner.available_depth() {
                    None => by.concat(&inner.prefix(n + by.len())?),
                    Some(_) => self.bounded_product(by, inner)?,
                };
                if product.len() < n {
                    return Err(WordError::DepthUnavailable {
                        requested: n,
                        available: product.len(),
                    });
                }
                Ok(product.prefix(n))
            }
        }
    }

    /// `by · w` for a stored `w`, empty when cancellation eats all of `w`
    /// (the letters would then depend on the unknown continuation).
    fn bounded_product(
        &self,
        by: &ReducedWord,
        inner: &BoundaryWord,
    ) -> Result<ReducedWord, WordError> {
        let avail = inner.available_depth().unwrap_or(0);
        let w = inner.prefix(avail)?;
        let product = by.concat(&w);
        let cancelled = (by.len() + w.len() - product.len()) / 2;
        if cancelled >= w.len() {
            Ok(ReducedWord::identity())
        } else {
            Ok(product)
        }
    }
}

impl From<ReducedWord> for BoundaryWord {
    fn from(w: ReducedWord) -> Self {
        BoundaryWord::stored(w)
    }
}

/// Mixed-radix digits of a word: the first in `0..4`, the rest in `0..3`.
pub fn boundary_digits(w: &ReducedWord) -> Vec<u8> {
    let mut out = Vec::with_capacity(w.len());
    let mut prev: Option<Letter> = None;
    for &l in w.letters() {
        let d = match prev {
            None => l.cyclic_index(),
            Some(p) => (l.cyclic_index() + 3 - p.inverse().cyclic_index()) % 4,
        };
        out.push(d as u8);
        prev = Some(l);
    }
    out
}

/// Position in `[0, 1)` of the boundary arc coded by the prefix `w`
/// (its left end).
pub fn boundary_parameter(w: &ReducedWord) -> f64 {
    let mut t = 0.0;
    let mut scale = 0.25;
    for d in boundary_digits(w) {
        t += d as f64 * scale;
        scale /= 3.0;
    }
    t
}

/// The length-`depth` prefix of the boundary point at parameter
/// `num / den`, computed with exact integer arithmetic.
pub fn word_at_parameter(num: u64, den: u64, depth: usize) -> Result<ReducedWord, WordError> {
    if den == 0 || num >= den {
        return Err(WordError::InvalidNumber(format!(
            "parameter {num}/{den} is not in [0, 1)"
        )));
    }
    let den = den as u128;
    let mut r = num as u128;
    let mut out: Vec<Letter> = Vec::with_capacity(depth);
    for k in 0..depth {
        let radix = if k == 0 { 4 } else { 3 };
        let d = (r * radix / den) as usize;
        r = r * radix - d as u128 * den;
        let l = match out.last() {
            None => Letter::ALL[d],
            Some(p) => Letter::ALL[(p.inverse().cyclic_index() + 1 + d) % 4],
        };
        out.push(l);
    }
    Ok(ReducedWord::from_reduced_vec(out))
}

/// Order of two boundary points from their prefixes; `None` when one prefix
/// extends the other, so the order is not determined at this depth.
pub fn compare_boundary(x: &ReducedWord, y: &ReducedWord) -> Option<Ordering> {
    let k = x.common_prefix_len(y);
    if k == x.len() || k == y.len() {
        return None;
    }
    let dx = boundary_digits(&x.prefix(k + 1));
    let dy = boundary_digits(&y.prefix(k + 1));
    Some(dx[k].cmp(&dy[k]))
}

/// Whether the chords `p0 p1` and `q0 q1` of the boundary circle cross.
/// `None` when some pair of endpoints cannot be separated at the given
/// prefixes.
pub fn chords_cross(
    p: (&ReducedWord, &ReducedWord),
    q: (&ReducedWord, &ReducedWord),
) -> Option<bool> {
    let (lo, hi) = match compare_boundary(p.0, p.1)? {
        Ordering::Less => (p.0, p.1),
        _ => (p.1, p.0),
    };
    let inside = |w: &ReducedWord| -> Option<bool> {
        Some(
            compare_boundary(lo, w)? == Ordering::Less
                && compare_boundary(w, hi)? == Ordering::Less,
        )
    };
    Some(inside(q.0)? != inside(q.1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn periodic_normalization() {
        let x = BoundaryWord::periodic(&w("aB"), &w("bab")).unwrap();
        // aB · (bab)^∞ = a · (abb)^∞ after one cancellation
        let naive = w("aB").concat(&w("bab").pow(10));
        assert_eq!(x.prefix(12).unwrap(), naive.prefix(12));
        let y = BoundaryWord::periodic(&w("A"), &w("aab")).unwrap();
        let naive = w("A").concat(&w("aab").pow(10));
        assert_eq!(y.prefix(15).unwrap(), naive.prefix(15));
        assert!(BoundaryWord::periodic(&w("a"), &w("")).is_err());
    }

    #[test]
    fn translation_matches_reduced_products() {
        let xi = BoundaryWord::cutting(
            Slope::golden_conjugate(),
            QuadNumber::rational(1, 3).unwrap(),
            Direction::Forward,
        );
        let long = xi.prefix(40).unwrap();
        for g in ["A", "BA", "ab", "BAB", "aab"] {
            let t = xi.translate(&w(g)).prefix(20).unwrap();
            assert_eq!(t, w(g).concat(&long).prefix(20), "g = {g}");
        }
        let stored = BoundaryWord::stored(w("abab"));
        assert_eq!(stored.available_depth(), Some(4));
        assert!(stored.prefix(5).is_err());
        let shifted = stored.translate(&w("B"));
        assert_eq!(shifted.available_depth(), Some(5));
        assert_eq!(shifted.prefix(5).unwrap(), w("Babab"));
        let cancelled = stored.translate(&w("BA"));
        assert_eq!(cancelled.prefix(2).unwrap(), w("ab"));
    }

    #[test]
    fn digits_and_parameters() {
        assert_eq!(boundary_digits(&w("a")), vec![0]);
        assert_eq!(boundary_digits(&w("B")), vec![3]);
        // after a, the incoming edge is A; ccw after A come B, a, b
        assert_eq!(boundary_digits(&w("aB")), vec![0, 0]);
        assert_eq!(boundary_digits(&w("aa")), vec![0, 1]);
        assert_eq!(boundary_digits(&w("ab")), vec![0, 2]);
        assert_eq!(boundary_parameter(&w("b")), 0.25);
        for (n, d) in [(0, 1), (1, 3), (5, 7), (123, 1000)] {
            let x = word_at_parameter(n, d, 25).unwrap();
            let t = boundary_parameter(&x);
            assert!((t - n as f64 / d as f64).abs() < 1e-10, "{n}/{d}: {t}");
        }
        assert!(word_at_parameter(1, 1, 3).is_err());
    }

    #[test]
    fn chord_crossing_examples() {
        // a^∞ < b^∞ < A^∞ < B^∞ around the circle
        let (a, b, ai, bi) = (w("aaaa"), w("bbbb"), w("AAAA"), w("BBBB"));
        assert_eq!(chords_cross((&a, &ai), (&b, &bi)), Some(true));
        assert_eq!(chords_cross((&a, &b), (&ai, &bi)), Some(false));
        assert_eq!(chords_cross((&a, &b), (&w("aa"), &bi)), None);
    }

    fn word_strategy(len: usize) -> impl Strategy<Value = ReducedWord> {
        proptest::collection::vec(0usize..4, len).prop_map(|v| {
            ReducedWord::reduce(v.into_iter().map(|i| Letter::ALL[i]))
        })
    }

    proptest! {
        #[test]
        fn order_agrees_with_parameters(x in word_strategy(30), y in word_strategy(30)) {
            if let Some(o) = compare_boundary(&x, &y) {
                let (tx, ty) = (boundary_parameter(&x), boundary_parameter(&y));
                if (tx - ty).abs() > 1e-12 {
                    prop_assert_eq!(o, tx.partial_cmp(&ty).unwrap());
                }
            }
        }

        #[test]
        fn parameter_inverse_round_trip(x in word_strategy(12)) {
            prop_assume!(!x.is_empty());
            // the left end of a cylinder is exactly representable in base 4·3^k
            let digits = boundary_digits(&x);
            let mut num: u64 = 0;
            let mut den: u64 = 1;
            for (k, d) in digits.iter().enumerate() {
                let radix = if k == 0 { 4 } else { 3 };
                num = num * radix + *d as u64;
                den *= radix;
            }
            let y = word_at_parameter(num, den, x.len()).unwrap();
            prop_assert_eq!(y, x);
        }
    }
}
