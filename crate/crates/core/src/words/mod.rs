//! Word algebra in the free group `F(a, b)` and codings of its boundary.
//!
//! `F(a, b)` is the fundamental group of the once-punctured torus: `a` is
//! dual to the vertical side of the unit square and `b` to the horizontal
//! side. A straight line in the plane avoiding the integer lattice is coded
//! by the sides it crosses, which gives a reduced word (see [`cutting`]).

mod boundary;
mod cutting;
mod quad;

pub use boundary::{
    boundary_digits, boundary_parameter, chords_cross, compare_boundary, word_at_parameter,
    BoundaryWord,
};
pub use cutting::{christoffel_word, cutting_sequence, Direction};
pub use quad::{continued_fraction, QuadNumber, Slope};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WordError {
    #[error("invalid letter {0:?} (expected one of a, b, A, B)")]
    InvalidLetter(char),
    #[error("invalid number: {0}")]
    InvalidNumber(String),
    #[error("line passes through the lattice point ({x}, {y})")]
    GridIncidence { x: i128, y: i128 },
    #[error("requested {requested} letters but only {available} are available")]
    DepthUnavailable { requested: usize, available: usize },
    #[error("periodic part of a boundary word must be nontrivial")]
    TrivialPeriod,
    #[error("matrix {0:?} is not in SL(2, Z)")]
    NotUnimodular([[i64; 2]; 2]),
}

/// A generator of `F(a, b)` or its inverse; `A = a⁻¹`, `B = b⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    AInv,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::AInv => 'A',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Result<Letter, WordError> {
        match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            'A' => Ok(Letter::AInv),
            'B' => Ok(Letter::BInv),
            other => Err(WordError::InvalidLetter(other)),
        }
    }

    /// Image in `Z^2 = H_1`.
    pub fn abelian(self) -> (i64, i64) {
        match self {
            Letter::A => (1, 0),
            Letter::AInv => (-1, 0),
            Letter::B => (0, 1),
            Letter::BInv => (0, -1),
        }
    }

    /// Position in the counterclockwise order `a, b, A, B` of the four
    /// sides of a square (right, top, left, bottom).
    pub fn cyclic_index(self) -> usize {
        match self {
            Letter::A => 0,
            Letter::B => 1,
            Letter::AInv => 2,
            Letter::BInv => 3,
        }
    }
}

/// A freely reduced word. Serialized as its letter string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct ReducedWord(Vec<Letter>);

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Vec::new())
    }

    /// Free reduction with a stack.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        ReducedWord(out)
    }

    pub fn letter(l: Letter) -> Self {
        ReducedWord(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Self {
        ReducedWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// The reduced product `self · other`.
    pub fn concat(&self, other: &ReducedWord) -> Self {
        let k = self
            .0
            .iter()
            .rev()
            .zip(other.0.iter())
            .take_while(|(x, y)| x.inverse() == **y)
            .count();
        let mut v = Vec::with_capacity(self.len() + other.len() - 2 * k);
        v.extend_from_slice(&self.0[..self.len() - k]);
        v.extend_from_slice(&other.0[k..]);
        ReducedWord(v)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(ReducedWord::identity(), |acc, _| acc.concat(&base))
    }

    pub fn prefix(&self, n: usize) -> Self {
        ReducedWord(self.0[..n.min(self.len())].to_vec())
    }

    pub fn starts_with(&self, other: &ReducedWord) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn common_prefix_len(&self, other: &ReducedWord) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(x, y)| x == y)
            .count()
    }

    pub fn abelianization(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(x, y), l| {
            let (dx, dy) = l.abelian();
            (x + dx, y + dy)
        })
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = t · core · t⁻¹` with `core` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (ReducedWord, ReducedWord) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (
            ReducedWord(self.0[..k].to_vec()),
            ReducedWord(self.0[k..n - k].to_vec()),
        )
    }

    /// Shortlex key with letters ordered `a < b < A < B`.
    pub fn shortlex_cmp(&self, other: &ReducedWord) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }

    pub(crate) fn from_reduced_vec(v: Vec<Letter>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[1] != w[0].inverse()));
        ReducedWord(v)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl From<ReducedWord> for String {
    fn from(w: ReducedWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for ReducedWord {
    type Error = WordError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for ReducedWord {
    type Err = WordError;

    /// Parses letters `a b A B` (whitespace ignored) and reduces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReducedWord::reduce(letters))
    }
}

/// All reduced words of length at most `max_len`, in shortlex order.
pub fn reduced_words_up_to(max_len: usize) -> Vec<ReducedWord> {
    let mut out = vec![ReducedWord::identity()];
    let mut layer = vec![ReducedWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 3 + 4);
        for w in &layer {
            for l in Letter::ALL {
                if w.last() != Some(l.inverse()) {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(ReducedWord(v));
                }
            }
        }
        next.sort_by(|x, y| x.shortlex_cmp(y));
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// An endomorphism of `F(a, b)` given by the images of `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    image_a: ReducedWord,
    image_b: ReducedWord,
}

impl Automorphism {
    pub fn new(image_a: ReducedWord, image_b: ReducedWord) -> Self {
        Automorphism { image_a, image_b }
    }

    pub fn identity() -> Self {
        Self::new(ReducedWord::letter(Letter::A), ReducedWord::letter(Letter::B))
    }

    /// `a ↦ a, b ↦ ab`, acting on homology by `[[1,1],[0,1]]`.
    pub fn left_twist() -> Self {
        Self::new(ReducedWord::letter(Letter::A), "ab".parse().unwrap())
    }

    /// `a ↦ ab, b ↦ b`, acting on homology by `[[1,0],[1,1]]`.
    pub fn right_twist() -> Self {
        Self::new("ab".parse().unwrap(), ReducedWord::letter(Letter::B))
    }

    /// `a ↦ A, b ↦ B`, acting on homology by `-I`.
    pub fn inversion() -> Self {
        Self::new(
            ReducedWord::letter(Letter::AInv),
            ReducedWord::letter(Letter::BInv),
        )
    }

    pub fn image(&self, l: Letter) -> ReducedWord {
        match l {
            Letter::A => self.image_a.clone(),
            Letter::B => self.image_b.clone(),
            Letter::AInv => self.image_a.inverse(),
            Letter::BInv => self.image_b.inverse(),
        }
    }

    pub fn apply(&self, w: &ReducedWord) -> ReducedWord {
        let (ia, ib) = (self.image(Letter::A), self.image(Letter::B));
        let (iai, ibi) = (ia.inverse(), ib.inverse());
        let letters = w.letters().iter().flat_map(|l| {
            match l {
                Letter::A => &ia,
                Letter::B => &ib,
                Letter::AInv => &iai,
                Letter::BInv => &ibi,
            }
            .letters()
            .iter()
            .copied()
        });
        ReducedWord::reduce(letters)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism::new(self.apply(&other.image_a), self.apply(&other.image_b))
    }

    pub fn pow(&self, k: usize) -> Automorphism {
        (0..k).fold(Automorphism::identity(), |acc, _| self.compose(&acc))
    }

    /// Action on `H_1 = Z^2`; columns are the images of `a` and `b`.
    pub fn abelianization(&self) -> [[i64; 2]; 2] {
        let (p, r) = self.image_a.abelianization();
        let (q, s) = self.image_b.abelianization();
        [[p, q], [r, s]]
    }

    /// An automorphism with the given action on homology, built from a
    /// Euclidean factorization into `[[1,1],[0,1]]`, `[[1,0],[1,1]]` and `-I`.
    pub fn from_sl2z(m: [[i64; 2]; 2]) -> Result<Automorphism, WordError> {
        let [[a0, b0], [c0, d0]] = m;
        if a0 * d0 - b0 * c0 != 1 {
            return Err(WordError::NotUnimodular(m));
        }
        let (mut a, mut b, mut c, mut d) = (a0, b0, c0, d0);
        // Left multiplications applied so far: (is_left_twist, exponent).
        let mut ops: Vec<(bool, i64)> = Vec::new();
        while c != 0 {
            if a == 0 {
                // c = ±1 here; L^{c} makes the corner entry 1
                let k = -c;
                a -= k * c;
                b -= k * d;
                ops.push((true, -k));
            } else if a.abs() > c.abs() {
                let k = a / c;
                a -= k * c;
                b -= k * d;
                ops.push((true, -k));
            } else {
                let k = c / a;
                c -= k * a;
                d -= k * b;
                ops.push((false, -k));
            }
        }
        // Now E·M = ε [[1, εb],[0, 1]] with ε = a = d = ±1.
        let eps = a;
        let mut tail = Automorphism::left_twist().signed_pow(eps * b);
        if eps < 0 {
            tail = Automorphism::inversion().compose(&tail);
        }
        // M = op_1⁻¹ ⋯ op_n⁻¹ · tail
        let mut phi = tail;
        for &(left, k) in ops.iter().rev() {
            let gen = if left {
                Automorphism::left_twist()
            } else {
                Automorphism::right_twist()
            };
            phi = gen.signed_pow(-k).compose(&phi);
        }
        debug_assert_eq!(phi.abelianization(), m);
        Ok(phi)
    }

    fn signed_pow(&self, k: i64) -> Automorphism {
        let base = if k >= 0 {
            self.clone()
        } else {
            self.inverse_twist()
        };
        base.pow(k.unsigned_abs() as usize)
    }

    /// Inverse of one of the elementary twists.
    fn inverse_twist(&self) -> Automorphism {
        if *self == Automorphism::left_twist() {
            Automorphism::new(ReducedWord::letter(Letter::A), "Ab".parse().unwrap())
        } else if *self == Automorphism::right_twist() {
            Automorphism::new("aB".parse().unwrap(), ReducedWord::letter(Letter::B))
        } else {
            panic!("inverse only tabulated for elementary twists")
        }
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a ↦ {}, b ↦ {}", self.image_a, self.image_b)
    }
}
