//! Exact arithmetic in real quadratic fields `Q(√D)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::WordError;

/// The real number `(a + b√d) / c` with `c > 0` and `gcd(a, b, c) = 1`.
///
/// Rational values are stored with `b = 0` and `d = 0`, so they combine with
/// numbers of any field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadNumber {
    a: i128,
    b: i128,
    c: i128,
    d: i128,
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn is_square(n: i128) -> bool {
    n >= 0 && isqrt(n).pow(2) == n
}

fn mul(x: i128, y: i128) -> i128 {
    x.checked_mul(y).expect("quadratic arithmetic overflowed i128")
}

fn add(x: i128, y: i128) -> i128 {
    x.checked_add(y).expect("quadratic arithmetic overflowed i128")
}

/// Sign of `x + y√d` for `d > 0` not a square.
fn surd_sign(x: i128, y: i128, d: i128) -> Ordering {
    if y == 0 || d == 0 {
        return x.cmp(&0);
    }
    match (x.cmp(&0), y.cmp(&0)) {
        (Ordering::Less | Ordering::Equal, Ordering::Less) => Ordering::Less,
        (Ordering::Greater | Ordering::Equal, Ordering::Greater) => Ordering::Greater,
        (Ordering::Greater, Ordering::Less) => mul(x, x).cmp(&mul(mul(y, y), d)),
        (Ordering::Less, Ordering::Greater) => mul(mul(y, y), d).cmp(&mul(x, x)),
        (_, Ordering::Equal) => unreachable!(),
    }
}

impl QuadNumber {
    pub fn integer(n: i128) -> Self {
        QuadNumber {
            a: n,
            b: 0,
            c: 1,
            d: 0,
        }
    }

    /// The rational `p / q`.
    pub fn rational(p: i128, q: i128) -> Result<Self, WordError> {
        if q == 0 {
            return Err(WordError::InvalidNumber("zero denominator".into()));
        }
        Ok(Self::normalized(p, 0, q, 0))
    }

    /// `(a + b√d) / c`; `d` must be a positive non-square whenever `b ≠ 0`.
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Result<Self, WordError> {
        if c == 0 {
            return Err(WordError::InvalidNumber("zero denominator".into()));
        }
        if b != 0 && (d <= 1 || is_square(d)) {
            return Err(WordError::InvalidNumber(format!(
                "radicand {d} must be a positive non-square"
            )));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(mut a: i128, mut b: i128, mut c: i128, mut d: i128) -> Self {
        if b == 0 {
            d = 0;
        } else {
            // pull square factors out of the radicand
            let mut f = 2;
            while f * f <= d {
                while d % (f * f) == 0 {
                    d /= f * f;
                    b = mul(b, f);
                }
                f += 1;
            }
        }
        if c < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if g > 1 {
            a /= g;
            b /= g;
            c /= g;
        }
        QuadNumber { a, b, c, d }
    }

    pub fn parts(&self) -> (i128, i128, i128, i128) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn is_integer(&self) -> bool {
        self.b == 0 && self.c == 1
    }

    pub fn radicand(&self) -> Option<i128> {
        (self.b != 0).then_some(self.d)
    }

    pub fn signum(&self) -> Ordering {
        surd_sign(self.a, self.b, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.c as f64
    }

    pub fn floor(&self) -> i128 {
        let mut f = self.to_f64().floor() as i128;
        while *self < Self::integer(f) {
            f -= 1;
        }
        while *self >= Self::integer(f + 1) {
            f += 1;
        }
        f
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // c / (a + b√d) = c (a - b√d) / (a² - b² d)
        let den = mul(self.a, self.a) - mul(mul(self.b, self.b), self.d);
        Some(Self::normalized(
            mul(self.c, self.a),
            -mul(self.c, self.b),
            den,
            self.d,
        ))
    }

    /// Field conjugate `(a - b√d) / c`.
    pub fn conjugate(&self) -> Self {
        QuadNumber {
            b: -self.b,
            ..*self
        }
    }

    fn common_radicand(&self, other: &Self) -> i128 {
        match (self.b, other.b) {
            (0, _) => other.d,
            (_, 0) => self.d,
            _ => {
                assert_eq!(
                    self.d, other.d,
                    "mixing numbers from different quadratic fields"
                );
                self.d
            }
        }
    }
}

impl Add for QuadNumber {
    type Output = QuadNumber;

    fn add(self, o: QuadNumber) -> QuadNumber {
        let d = self.common_radicand(&o);
        QuadNumber::normalized(
            add(mul(self.a, o.c), mul(o.a, self.c)),
            add(mul(self.b, o.c), mul(o.b, self.c)),
            mul(self.c, o.c),
            d,
        )
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;

    fn neg(self) -> QuadNumber {
        QuadNumber {
            a: -self.a,
            b: -self.b,
            ..self
        }
    }
}

impl Sub for QuadNumber {
    type Output = QuadNumber;

    fn sub(self, o: QuadNumber) -> QuadNumber {
        self + (-o)
    }
}

impl Mul for QuadNumber {
    type Output = QuadNumber;

    fn mul(self, o: QuadNumber) -> QuadNumber {
        let d = self.common_radicand(&o);
        QuadNumber::normalized(
            add(mul(self.a, o.a), mul(mul(self.b, o.b), d)),
            add(mul(self.a, o.b), mul(self.b, o.a)),
            mul(self.c, o.c),
            d,
        )
    }
}

impl Div for QuadNumber {
    type Output = QuadNumber;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: QuadNumber) -> QuadNumber {
        self * o.recip().expect("division by zero")
    }
}

impl PartialOrd for QuadNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum()
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.b, self.c) {
            (0, 1) => write!(f, "{}", self.a),
            (0, c) => write!(f, "{}/{}", self.a, c),
            (b, 1) => write!(f, "{}{:+}*sqrt({})", self.a, b, self.d),
            (b, c) => write!(f, "({}{:+}*sqrt({}))/{}", self.a, b, self.d, c),
        }
    }
}

/// A slope `s` of a line with direction vector `(1, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope(QuadNumber);

impl Slope {
    pub fn new(value: QuadNumber) -> Self {
        Slope(value)
    }

    pub fn rational(p: i128, q: i128) -> Result<Self, WordError> {
        QuadNumber::rational(p, q).map(Slope)
    }

    /// `(a + b√d) / c` with `b ≠ 0`.
    pub fn quadratic(a: i128, b: i128, c: i128, d: i128) -> Result<Self, WordError> {
        if b == 0 {
            return Err(WordError::InvalidNumber(
                "quadratic slope needs a nonzero surd part".into(),
            ));
        }
        QuadNumber::new(a, b, c, d).map(Slope)
    }

    /// `(√5 - 1) / 2`, the slope of the expanding direction of `[[2,1],[1,1]]`.
    pub fn golden_conjugate() -> Self {
        Slope(QuadNumber::new(-1, 1, 2, 5).expect("valid"))
    }

    pub fn value(&self) -> QuadNumber {
        self.0
    }

    pub fn is_irrational(&self) -> bool {
        !self.0.is_rational()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The first `count` partial quotients (fewer for a rational that terminates).
pub fn continued_fraction(x: QuadNumber, count: usize) -> Vec<i128> {
    let mut out = Vec::with_capacity(count);
    let mut x = x;
    while out.len() < count {
        let a = x.floor();
        out.push(a);
        let frac = x - QuadNumber::integer(a);
        match frac.recip() {
            Some(next) => x = next,
            None => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i128, b: i128, c: i128, d: i128) -> QuadNumber {
        QuadNumber::new(a, b, c, d).unwrap()
    }

    #[test]
    fn continued_fraction_examples() {
        // golden ratio: x = 1 + 1/x exactly
        assert_eq!(continued_fraction(q(1, 1, 2, 5), 8), vec![1; 8]);
        assert_eq!(
            continued_fraction(QuadNumber::rational(7, 3).unwrap(), 5),
            vec![2, 3]
        );
        let mut sqrt2 = vec![1];
        sqrt2.extend(std::iter::repeat_n(2, 9));
        assert_eq!(continued_fraction(q(0, 1, 1, 2), 10), sqrt2);
        let mut gc = vec![0];
        gc.extend(std::iter::repeat_n(1, 7));
        assert_eq!(continued_fraction(Slope::golden_conjugate().value(), 8), gc);
    }

    #[test]
    fn field_identities() {
        let phi = q(1, 1, 2, 5);
        // φ² = φ + 1
        assert_eq!(phi * phi, phi + QuadNumber::integer(1));
        assert_eq!(phi.recip().unwrap(), phi - QuadNumber::integer(1));
        assert_eq!(q(0, 2, 1, 12), q(0, 4, 1, 3));
        assert!(QuadNumber::new(1, 1, 1, 4).is_err());
        assert!(QuadNumber::rational(1, 0).is_err());
    }

    #[test]
    fn floor_near_integers() {
        // √2 ≈ 1.41421356
        assert_eq!(q(0, 1, 1, 2).floor(), 1);
        assert_eq!(q(0, -1, 1, 2).floor(), -2);
        assert_eq!(QuadNumber::rational(-1, 3).unwrap().floor(), -1);
        assert_eq!(QuadNumber::integer(-4).floor(), -4);
    }

    proptest! {
        #[test]
        fn order_matches_floats(a in -1000i128..1000, b in -50i128..50, c in 1i128..200,
                                x in -1000i128..1000, y in -50i128..50, z in 1i128..200) {
            let u = q(a, b, c, 7);
            let v = q(x, y, z, 7);
            let (fu, fv) = (u.to_f64(), v.to_f64());
            prop_assume!((fu - fv).abs() > 1e-9);
            prop_assert_eq!(u < v, fu < fv);
            prop_assert_eq!(u.floor() as f64, fu.floor());
        }
    }
}
