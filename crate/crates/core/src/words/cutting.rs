//! Cutting sequences of straight lines across the unit grid.
//!
//! The line `y = s·x + c` is traced from the point just to the right of
//! `x = 0`, which lies in the square `[0,1] × [⌊c⌋, ⌊c⌋+1]`. Crossing a
//! vertical grid line emits `a` (moving in `+x`) or `A`; crossing a
//! horizontal one emits `b` (moving in `+y`) or `B`. Passing through a
//! lattice point is an error, never a tie-break.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Letter, QuadNumber, ReducedWord, Slope, WordError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Along `(1, s)`.
    Forward,
    /// Along `(-1, -s)`.
    Backward,
}

impl Direction {
    pub fn sign(self) -> i128 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// First `depth` letters of the cutting sequence of `y = s·x + c`.
pub fn cutting_sequence(
    slope: &Slope,
    intercept: &QuadNumber,
    depth: usize,
    direction: Direction,
) -> Result<ReducedWord, WordError> {
    if intercept.is_integer() {
        return Err(WordError::GridIncidence {
            x: 0,
            y: intercept.floor(),
        });
    }
    let s = slope.value();
    let dx = direction.sign();
    let dy = dx
        * match s.signum() {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => 0,
        };
    let (va, ha) = match (dx > 0, dy > 0) {
        (true, _) if dy == 0 => (Letter::A, Letter::B),
        (true, true) => (Letter::A, Letter::B),
        (true, false) => (Letter::A, Letter::BInv),
        (false, true) => (Letter::AInv, Letter::B),
        (false, false) => (Letter::AInv, Letter::BInv),
    };
    // next vertical line x = i and next horizontal line y = j
    let mut i: i128 = if dx > 0 { 1 } else { 0 };
    let mut j: i128 = if dy > 0 {
        intercept.floor() + 1
    } else {
        intercept.floor()
    };
    let mut out = Vec::with_capacity(depth);
    while out.len() < depth {
        if dy == 0 {
            out.push(va);
            i += dx;
            continue;
        }
        // v = y(i) - j; the vertical line comes first iff dy·v < 0
        let v = s * QuadNumber::integer(i) + *intercept - QuadNumber::integer(j);
        match v.signum() {
            Ordering::Equal => return Err(WordError::GridIncidence { x: i, y: j }),
            sign => {
                let vertical_first = (sign == Ordering::Less) == (dy > 0);
                if vertical_first {
                    out.push(va);
                    i += dx;
                } else {
                    out.push(ha);
                    j += dy;
                }
            }
        }
    }
    Ok(ReducedWord::from_reduced_vec(out))
}

/// Lower Christoffel word of slope `p/q`: `q` letters `a` and `|p|` letters
/// `b` (or `B` for negative `p`), the coding of one period of a line of
/// slope `p/q` pushed just below the lattice.
pub fn christoffel_word(p: i64, q: i64) -> Result<ReducedWord, WordError> {
    if q <= 0 || num_integer::gcd(p, q) != 1 {
        return Err(WordError::InvalidNumber(format!(
            "{p}/{q} is not a positive-denominator fraction in lowest terms"
        )));
    }
    let up = if p >= 0 { Letter::B } else { Letter::BInv };
    let p = p.abs();
    let n = p + q;
    let letters = (1..=n)
        .map(|k| {
            if (k * p) / n == ((k - 1) * p) / n {
                Letter::A
            } else {
                up
            }
        })
        .collect();
    Ok(ReducedWord::from_reduced_vec(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i128, q: i128) -> QuadNumber {
        QuadNumber::rational(p, q).unwrap()
    }

    /// Float mechanical-word oracle for positive slopes: between x = k-1 and
    /// x = k the line crosses ⌊s k + c⌋ - ⌊s (k-1) + c⌋ horizontal lines,
    /// then the vertical line x = k.
    fn forward_oracle(s: f64, c: f64, depth: usize) -> String {
        let mut out = String::new();
        let mut k = 1.0;
        while out.len() < depth {
            let hs = (s * k + c).floor() - (s * (k - 1.0) + c).floor();
            for _ in 0..hs as usize {
                out.push('b');
            }
            out.push('a');
            k += 1.0;
        }
        out.truncate(depth);
        out
    }

    #[test]
    fn diagonal_line() {
        let s = Slope::rational(1, 1).unwrap();
        let c = rat(1, 3);
        let f = cutting_sequence(&s, &c, 4, Direction::Forward).unwrap();
        assert_eq!(f.to_string(), forward_oracle(1.0, 1.0 / 3.0, 4));
        // y = x + 1/3 meets y = 1 before x = 1
        assert_eq!(f.to_string(), "baba");
        let b = cutting_sequence(&s, &c, 4, Direction::Backward).unwrap();
        assert_eq!(b.to_string(), "ABAB");
    }

    #[test]
    fn golden_prefix_matches_oracle_and_is_balanced() {
        let s = Slope::golden_conjugate();
        for (p, q) in [(1, 3), (2, 7), (5, 11), (1, 1000)] {
            let c = rat(p, q);
            let f = cutting_sequence(&s, &c, 8, Direction::Forward).unwrap();
            let oracle = forward_oracle(s.to_f64(), c.to_f64(), 8);
            assert_eq!(f.to_string(), oracle);
            let long = cutting_sequence(&s, &c, 200, Direction::Forward).unwrap();
            assert!(is_balanced(&long));
            assert!(long.starts_with(&f));
        }
    }

    fn is_balanced(w: &ReducedWord) -> bool {
        let l = w.letters();
        (1..l.len()).all(|m| {
            let counts: Vec<usize> = l
                .windows(m)
                .map(|f| f.iter().filter(|x| **x == Letter::A || **x == Letter::AInv).count())
                .collect();
            counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1
        })
    }

    #[test]
    fn lattice_hits_are_errors() {
        let s = Slope::rational(1, 2).unwrap();
        // y = x/2 + 1/2 passes through (1, 1)
        let err = cutting_sequence(&s, &rat(1, 2), 5, Direction::Forward).unwrap_err();
        assert_eq!(err, WordError::GridIncidence { x: 1, y: 1 });
        let err = cutting_sequence(&s, &rat(2, 1), 1, Direction::Forward).unwrap_err();
        assert_eq!(err, WordError::GridIncidence { x: 0, y: 2 });
    }

    #[test]
    fn negative_slopes_use_inverse_b() {
        let s = Slope::quadratic(-1, -1, 2, 5).unwrap();
        let f = cutting_sequence(&s, &rat(1, 2), 20, Direction::Forward).unwrap();
        assert!(f.letters().iter().all(|l| matches!(l, Letter::A | Letter::BInv)));
        let b = cutting_sequence(&s, &rat(1, 2), 20, Direction::Backward).unwrap();
        assert!(b.letters().iter().all(|l| matches!(l, Letter::AInv | Letter::B)));
        assert_eq!(b.first(), Some(Letter::AInv));
    }

    #[test]
    fn christoffel_examples() {
        assert_eq!(christoffel_word(0, 1).unwrap().to_string(), "a");
        assert_eq!(christoffel_word(1, 1).unwrap().to_string(), "ab");
        let w = christoffel_word(2, 3).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.abelianization(), (3, 2));
        assert!(christoffel_word(2, 4).is_err());
    }

    #[test]
    fn christoffel_is_a_period_of_line_crossings() {
        // one period of a line of slope p/q just below the lattice is a
        // cyclic rotation of the Christoffel word
        for (p, q) in [(1, 1), (2, 3), (3, 2), (1, 4), (5, 3)] {
            let s = Slope::rational(p as i128, q as i128).unwrap();
            let c = rat(-1, 2 * q as i128 + 1);
            let f = cutting_sequence(&s, &c, (p + q) as usize, Direction::Forward)
                .unwrap()
                .to_string();
            let w = christoffel_word(p, q).unwrap().to_string();
            assert!(format!("{w}{w}").contains(&f), "{p}/{q}: {f} vs {w}");
        }
    }
}
