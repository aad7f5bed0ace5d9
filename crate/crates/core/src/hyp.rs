//! Hyperbolic plane and Riemann sphere geometry.
//!
//! The hyperbolic plane is modelled by the upper half-plane, its ideal
//! boundary by `R ∪ {∞}`, and the Riemann sphere by the unit sphere in `R^3`
//! via stereographic projection. Comparisons on the sphere use the chordal
//! metric, which stays bounded near `∞`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numerical tolerances shared by the geometric predicates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Generic tolerance for geometric predicates.
    pub eps: f64,
    /// Margin on `|tr^2 - 4|` used to call a map parabolic.
    pub classify_margin: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: 1e-9,
            classify_margin: 1e-6,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypError {
    #[error("matrix is singular (determinant {0:e})")]
    Singular(f64),
    #[error("point {0} is not in the open upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("geodesic endpoints coincide")]
    DegenerateGeodesic,
    #[error("map is indistinguishable from the identity; classification is indeterminate")]
    Indeterminate,
    #[error("vector {0:?} cannot be normalized onto the sphere")]
    ZeroVector([f64; 3]),
}

/// A point of the Riemann sphere `C ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RiemannPoint {
    Finite(Complex64),
    Infinity,
}

impl RiemannPoint {
    pub fn new(re: f64, im: f64) -> Self {
        RiemannPoint::Finite(Complex64::new(re, im))
    }

    pub fn to_sphere(self) -> SpherePoint {
        SpherePoint::from_riemann(self)
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            RiemannPoint::Finite(z) => Some(z),
            RiemannPoint::Infinity => None,
        }
    }

    /// Chordal distance, i.e. the Euclidean distance of the stereographic images.
    pub fn chordal(self, other: RiemannPoint) -> f64 {
        self.to_sphere().chordal(&other.to_sphere())
    }
}

impl From<Complex64> for RiemannPoint {
    fn from(z: Complex64) -> Self {
        RiemannPoint::Finite(z)
    }
}

impl From<IdealPoint> for RiemannPoint {
    fn from(p: IdealPoint) -> Self {
        match p {
            IdealPoint::Real(x) => RiemannPoint::Finite(Complex64::new(x, 0.0)),
            IdealPoint::Infinity => RiemannPoint::Infinity,
        }
    }
}

impl fmt::Display for RiemannPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiemannPoint::Finite(z) => write!(f, "{z}"),
            RiemannPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// A point of the ideal boundary `R ∪ {∞}` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IdealPoint {
    Real(f64),
    Infinity,
}

/// A point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanePoint(Complex64);

impl PlanePoint {
    pub fn new(z: Complex64) -> Result<Self, HypError> {
        if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
            Ok(PlanePoint(z))
        } else {
            Err(HypError::NotInUpperHalfPlane(z))
        }
    }

    /// The basepoint `i`.
    pub fn i() -> Self {
        PlanePoint(Complex64::new(0.0, 1.0))
    }

    pub fn z(self) -> Complex64 {
        self.0
    }
}

/// A unit vector of `R^3`, the stereographic image of a point of `C ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint([f64; 3]);

impl SpherePoint {
    pub fn new(v: [f64; 3]) -> Result<Self, HypError> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n.is_nan() || n <= 0.0 || !n.is_finite() {
            return Err(HypError::ZeroVector(v));
        }
        Ok(SpherePoint([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn north() -> Self {
        SpherePoint([0.0, 0.0, 1.0])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    /// Inverse stereographic projection; `∞` goes to the north pole.
    pub fn from_riemann(p: RiemannPoint) -> Self {
        match p {
            RiemannPoint::Infinity => Self::north(),
            RiemannPoint::Finite(z) => {
                let r2 = z.norm_sqr();
                if !r2.is_finite() {
                    return Self::north();
                }
                let d = 1.0 + r2;
                SpherePoint([2.0 * z.re / d, 2.0 * z.im / d, (r2 - 1.0) / d])
            }
        }
    }

    pub fn to_riemann(&self) -> RiemannPoint {
        let [x, y, z] = self.0;
        let w = 1.0 - z;
        if w <= 1e-300 {
            RiemannPoint::Infinity
        } else {
            RiemannPoint::Finite(Complex64::new(x / w, y / w))
        }
    }

    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        let [a, b, c] = self.0;
        let [x, y, z] = other.0;
        ((a - x).powi(2) + (b - y).powi(2) + (c - z).powi(2)).sqrt()
    }
}

/// Geodesic of the upper half-plane given by its two ideal endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic2 {
    start: IdealPoint,
    end: IdealPoint,
}

impl Geodesic2 {
    pub fn new(start: IdealPoint, end: IdealPoint) -> Result<Self, HypError> {
        if start == end {
            return Err(HypError::DegenerateGeodesic);
        }
        Ok(Geodesic2 { start, end })
    }

    pub fn start(&self) -> IdealPoint {
        self.start
    }

    pub fn end(&self) -> IdealPoint {
        self.end
    }

    /// A real Möbius map of determinant 1 sending `start` to 0 and `end` to ∞.
    fn straightening(&self) -> MobiusMap {
        let one = 1.0;
        let (a, b, c, d) = match (self.start, self.end) {
            (IdealPoint::Real(p), IdealPoint::Infinity) => (one, -p, 0.0, one),
            (IdealPoint::Infinity, IdealPoint::Real(q)) => (0.0, -one, one, -q),
            (IdealPoint::Real(p), IdealPoint::Real(q)) => {
                if q > p {
                    // (z - p) / (q - z)
                    (one, -p, -one, q)
                } else {
                    // (z - p) / (z - q)
                    (one, -p, one, -q)
                }
            }
            (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!("validated endpoints"),
        };
        MobiusMap::from_real(a, b, c, d).expect("straightening map has nonzero determinant")
    }

    /// The point of the geodesic at signed arc length `t` from the point
    /// nearest to `i` after straightening. Used to walk along the geodesic.
    pub fn point_at(&self, t: f64) -> PlanePoint {
        let inv = self.straightening().inverse();
        let w = Complex64::new(0.0, t.exp());
        inv.apply_plane(PlanePoint(w))
            .expect("real map preserves the upper half-plane")
    }
}

/// Fractional linear map `z ↦ (az + b)/(cz + d)` with `ad - bc = 1`,
/// stored in a canonical sign representative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

fn pack(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpack(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

const SIGN_TIE: f64 = 1e-12;

impl MobiusMap {
    pub fn identity() -> Self {
        Self::from_entries_unchecked(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    fn from_entries_unchecked(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        MobiusMap {
            a: pack(a),
            b: pack(b),
            c: pack(c),
            d: pack(d),
        }
    }

    /// Builds the map and rescales it to determinant 1.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, HypError> {
        let det = a * d - b * c;
        let scale = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
        if det.norm().is_nan()
            || det.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE)
            || !det.norm().is_finite()
        {
            return Err(HypError::Singular(det.norm()));
        }
        let s = det.sqrt();
        Ok(Self::from_entries_unchecked(a / s, b / s, c / s, d / s).canonical())
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, HypError> {
        Self::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    /// Canonical sign: nonnegative real part of the trace, ties broken by
    /// requiring the first nonzero entry to have argument in `[0, π)`.
    fn canonical(self) -> Self {
        let tr = self.trace();
        let flip = if tr.re < -SIGN_TIE {
            true
        } else if tr.re > SIGN_TIE {
            false
        } else {
            let first = self
                .entries()
                .into_iter()
                .find(|e| e.norm() > SIGN_TIE)
                .unwrap_or(Complex64::new(1.0, 0.0));
            first.im < 0.0 || (first.im == 0.0 && first.re < 0.0)
        };
        if flip {
            self.negated()
        } else {
            self
        }
    }

    fn negated(self) -> Self {
        let [a, b, c, d] = self.entries();
        Self::from_entries_unchecked(-a, -b, -c, -d)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [unpack(self.a), unpack(self.b), unpack(self.c), unpack(self.d)]
    }

    pub fn trace(&self) -> Complex64 {
        unpack(self.a) + unpack(self.d)
    }

    pub fn determinant(&self) -> Complex64 {
        let [a, b, c, d] = self.entries();
        a * d - b * c
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.entries();
        Self::from_entries_unchecked(d, -b, -c, a).canonical()
    }

    /// Product without renormalizing the determinant (it stays 1 up to rounding).
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let [a, b, c, d] = self.entries();
        let [p, q, r, s] = other.entries();
        Self::from_entries_unchecked(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)
            .canonical()
    }

    /// Max-entry distance between the two projective representatives.
    pub fn projective_distance(&self, other: &MobiusMap) -> f64 {
        let x = self.entries();
        let y = other.entries();
        let plus = (0..4).map(|k| (x[k] - y[k]).norm()).fold(0.0, f64::max);
        let minus = (0..4).map(|k| (x[k] + y[k]).norm()).fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn is_identity(&self, eps: f64) -> bool {
        self.projective_distance(&MobiusMap::identity()) < eps
    }

    pub fn is_real(&self, eps: f64) -> bool {
        self.entries().iter().all(|e| e.im.abs() <= eps)
    }

    pub fn apply(&self, p: RiemannPoint) -> RiemannPoint {
        let [a, b, c, d] = self.entries();
        match p {
            RiemannPoint::Infinity => {
                if c == Complex64::new(0.0, 0.0) {
                    RiemannPoint::Infinity
                } else {
                    RiemannPoint::Finite(a / c)
                }
            }
            RiemannPoint::Finite(z) => {
                let den = c * z + d;
                if den == Complex64::new(0.0, 0.0) {
                    RiemannPoint::Infinity
                } else {
                    let w = (a * z + b) / den;
                    if w.re.is_finite() && w.im.is_finite() {
                        RiemannPoint::Finite(w)
                    } else {
                        RiemannPoint::Infinity
                    }
                }
            }
        }
    }

    pub fn apply_sphere(&self, p: &SpherePoint) -> SpherePoint {
        self.apply(p.to_riemann()).to_sphere()
    }

    /// Action on the upper half-plane. `None` when the image leaves it, which
    /// only happens for maps that are not real.
    pub fn apply_plane(&self, z: PlanePoint) -> Option<PlanePoint> {
        match self.apply(RiemannPoint::Finite(z.0)) {
            RiemannPoint::Finite(w) => PlanePoint::new(w).ok(),
            RiemannPoint::Infinity => None,
        }
    }

    /// Action on `R ∪ {∞}`; meaningful for real maps.
    pub fn apply_ideal(&self, p: IdealPoint) -> IdealPoint {
        match self.apply(p.into()) {
            RiemannPoint::Finite(w) => IdealPoint::Real(w.re),
            RiemannPoint::Infinity => IdealPoint::Infinity,
        }
    }

    /// Fixed points: roots of `c z^2 + (d - a) z - b = 0` on the sphere.
    pub fn fixed_points(&self) -> Vec<RiemannPoint> {
        let [a, b, c, d] = self.entries();
        let scale = self.entries().iter().map(|e| e.norm()).fold(0.0, f64::max);
        if c.norm() <= 1e-14 * scale {
            let mut out = vec![RiemannPoint::Infinity];
            if (d - a).norm() > 1e-14 * scale {
                out.push(RiemannPoint::Finite(b / (d - a)));
            }
            return out;
        }
        let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
        let z1 = (a - d + disc) / (2.0 * c);
        let z2 = (a - d - disc) / (2.0 * c);
        if disc.norm() <= 1e-14 * scale {
            vec![RiemannPoint::Finite(z1)]
        } else {
            vec![RiemannPoint::Finite(z1), RiemannPoint::Finite(z2)]
        }
    }

    /// Modulus of the derivative at a fixed point (`< 1` means attracting).
    fn multiplier_at(&self, p: RiemannPoint) -> f64 {
        let [a, _, c, d] = self.entries();
        match p {
            // In the chart w = 1/z the map near ∞ is w ↦ d w / (a + b w) + ..., multiplier d/a.
            RiemannPoint::Infinity => (d / a).norm(),
            RiemannPoint::Finite(z) => 1.0 / (c * z + d).norm_sqr(),
        }
    }

    /// Elliptic / parabolic / loxodromic classification.
    pub fn classify(&self, tol: &Tolerance) -> Result<Classification, HypError> {
        if self.is_identity(tol.eps) {
            return Err(HypError::Indeterminate);
        }
        let tr = self.trace();
        let defect = tr * tr - 4.0;
        if defect.norm() < tol.classify_margin {
            let fixed = self.fixed_points();
            return Ok(Classification::Parabolic { fixed: fixed[0] });
        }
        if tr.im.abs() < tol.classify_margin && tr.re.abs() < 2.0 {
            let f = self.fixed_points();
            return Ok(Classification::Elliptic {
                fixed: [f[0], *f.get(1).unwrap_or(&f[0])],
            });
        }
        let f = self.fixed_points();
        let (p, q) = (f[0], *f.get(1).unwrap_or(&f[0]));
        let (attracting, repelling) = if self.multiplier_at(p) < self.multiplier_at(q) {
            (p, q)
        } else {
            (q, p)
        };
        Ok(Classification::Loxodromic {
            attracting,
            repelling,
        })
    }
}

impl Mul for MobiusMap {
    type Output = MobiusMap;

    fn mul(self, rhs: MobiusMap) -> MobiusMap {
        self.compose(&rhs)
    }
}

impl Mul for &MobiusMap {
    type Output = MobiusMap;

    fn mul(self, rhs: &MobiusMap) -> MobiusMap {
        self.compose(rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classification {
    Elliptic {
        fixed: [RiemannPoint; 2],
    },
    Parabolic {
        fixed: RiemannPoint,
    },
    Loxodromic {
        attracting: RiemannPoint,
        repelling: RiemannPoint,
    },
}

impl Classification {
    /// The limit of forward iterates: attracting point, or the parabolic point.
    pub fn forward_limit(&self) -> Option<RiemannPoint> {
        match *self {
            Classification::Parabolic { fixed } => Some(fixed),
            Classification::Loxodromic { attracting, .. } => Some(attracting),
            Classification::Elliptic { .. } => None,
        }
    }
}

/// Hyperbolic distance in the upper half-plane.
pub fn hyp_distance(z: PlanePoint, w: PlanePoint) -> f64 {
    let num = (z.0 - w.0).norm();
    let den = 2.0 * (z.0.im * w.0.im).sqrt();
    2.0 * (num / den).asinh()
}

/// Closed-form nearest-point projection onto a geodesic: straighten the
/// geodesic to the imaginary axis, where the foot of `w` is `i|w|`.
pub fn nearest_point_projection(z: PlanePoint, g: &Geodesic2) -> PlanePoint {
    let t = g.straightening();
    let w = t.apply_plane(z).expect("real map preserves the upper half-plane");
    let foot = PlanePoint(Complex64::new(0.0, w.0.norm()));
    t.inverse()
        .apply_plane(foot)
        .expect("real map preserves the upper half-plane")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pp(re: f64, im: f64) -> PlanePoint {
        PlanePoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn identity_fixes_i() {
        let p = RiemannPoint::new(0.0, 1.0);
        assert_eq!(MobiusMap::identity().apply(p), p);
    }

    #[test]
    fn translation_fixes_infinity() {
        let t = MobiusMap::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(t.apply(RiemannPoint::Infinity), RiemannPoint::Infinity);
    }

    #[test]
    fn inversion_fixes_i() {
        let s = MobiusMap::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        let out = s.apply(RiemannPoint::new(0.0, 1.0)).finite().unwrap();
        assert_abs_diff_eq!(out.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn normalization_and_sign() {
        let m = MobiusMap::new(c(-2.0, 0.0), c(1.0, 1.0), c(0.0, 3.0), c(-4.0, 1.0)).unwrap();
        assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(m.trace().re >= 0.0);
        let neg = MobiusMap::new(c(2.0, 0.0), c(-1.0, -1.0), c(0.0, -3.0), c(4.0, -1.0)).unwrap();
        assert_eq!(m, neg);
        assert!(MobiusMap::from_real(1.0, 2.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyp_distance(pp(0.0, 1.0), pp(0.0, 1.0)), 0.0);
        // ∫_1^2 dy / y = ln 2
        assert_abs_diff_eq!(hyp_distance(pp(0.0, 1.0), pp(0.0, 2.0)), 2f64.ln(), epsilon = 1e-14);
        assert_eq!(
            hyp_distance(pp(0.0, 1.0), pp(1.0, 1.0)),
            hyp_distance(pp(1.0, 1.0), pp(0.0, 1.0))
        );
    }

    /// Golden-section search for the minimum of the distance along the geodesic.
    fn projection_oracle(z: PlanePoint, g: &Geodesic2) -> PlanePoint {
        let f = |t: f64| hyp_distance(z, g.point_at(t));
        let (mut lo, mut hi) = (-40.0f64, 40.0f64);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - r * (hi - lo);
        let mut x2 = lo + r * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..200 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = f(x2);
            }
        }
        g.point_at((lo + hi) / 2.0)
    }

    #[test]
    fn projection_examples() {
        let axis = Geodesic2::new(IdealPoint::Real(0.0), IdealPoint::Infinity).unwrap();
        let on = nearest_point_projection(pp(0.0, 1.0), &axis);
        assert_abs_diff_eq!(on.z().re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(on.z().im, 1.0, epsilon = 1e-15);

        let p = nearest_point_projection(pp(1.0, 1.0), &axis);
        let oracle = projection_oracle(pp(1.0, 1.0), &axis);
        assert_abs_diff_eq!(p.z().re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.z().im, 2f64.sqrt(), epsilon = 1e-12);
        assert!(hyp_distance(p, oracle) < 1e-7);

        let again = nearest_point_projection(p, &axis);
        assert!(hyp_distance(p, again) < 1e-12);
    }

    #[test]
    fn projection_matches_oracle_on_finite_geodesics() {
        let cases = [
            (IdealPoint::Real(-1.0), IdealPoint::Real(3.0), pp(0.5, 0.2)),
            (IdealPoint::Real(2.0), IdealPoint::Real(-0.5), pp(-3.0, 4.0)),
            (IdealPoint::Infinity, IdealPoint::Real(1.5), pp(0.1, 0.7)),
        ];
        for (s, e, z) in cases {
            let g = Geodesic2::new(s, e).unwrap();
            let p = nearest_point_projection(z, &g);
            let o = projection_oracle(z, &g);
            assert!(hyp_distance(p, o) < 1e-6, "{s:?} {e:?} {z:?}");
        }
    }

    #[test]
    fn classify_examples() {
        let tol = Tolerance::default();
        let t = MobiusMap::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            t.classify(&tol).unwrap(),
            Classification::Parabolic {
                fixed: RiemannPoint::Infinity
            }
        );
        // z ↦ 4z has eigenvectors (1,0) for 2 and (0,1) for 1/2.
        let dil = MobiusMap::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        match dil.classify(&tol).unwrap() {
            Classification::Loxodromic {
                attracting,
                repelling,
            } => {
                assert_eq!(attracting, RiemannPoint::Infinity);
                assert!(repelling.finite().unwrap().norm() < 1e-15);
            }
            other => panic!("expected loxodromic, got {other:?}"),
        }
        let rot = MobiusMap::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(matches!(rot.classify(&tol), Ok(Classification::Elliptic { .. })));
        let near_id = MobiusMap::from_real(1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(near_id.classify(&tol), Err(HypError::Indeterminate));
    }

    #[test]
    fn sphere_round_trip() {
        for p in [RiemannPoint::new(0.3, -2.0), RiemannPoint::new(0.0, 0.0)] {
            let back = p.to_sphere().to_riemann();
            assert!(p.chordal(back) < 1e-14);
        }
        assert_eq!(SpherePoint::from_riemann(RiemannPoint::Infinity), SpherePoint::north());
        assert_eq!(SpherePoint::north().to_riemann(), RiemannPoint::Infinity);
        assert!(SpherePoint::new([0.0, 0.0, 0.0]).is_err());
    }

    fn complex() -> impl Strategy<Value = Complex64> {
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
    }

    fn mobius() -> impl Strategy<Value = MobiusMap> {
        (complex(), complex(), complex(), complex())
            .prop_filter_map("singular", |(a, b, c, d)| {
                let m = MobiusMap::new(a, b, c, d).ok()?;
                // keep the entries moderate so round-off stays small
                (m.entries().iter().all(|e| e.norm() < 1e3)).then_some(m)
            })
    }

    fn real_mobius() -> impl Strategy<Value = MobiusMap> {
        (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_filter_map(
            "orientation",
            |(a, b, c, d)| {
                let det = a * d - b * c;
                (det > 0.05).then(|| MobiusMap::from_real(a, b, c, d).unwrap())
            },
        )
    }

    fn plane_point() -> impl Strategy<Value = PlanePoint> {
        (-3.0f64..3.0, 0.05f64..3.0).prop_map(|(x, y)| pp(x, y))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn composition_is_action(m in mobius(), n in mobius(), z in complex()) {
            let p = RiemannPoint::Finite(z);
            let lhs = m.apply(n.apply(p));
            let rhs = (m * n).apply(p);
            prop_assert!(lhs.chordal(rhs) < 1e-9);
        }

        #[test]
        fn projection_is_nonexpanding(z in plane_point(), w in plane_point(), p in -3.0f64..3.0, q in -3.0f64..3.0) {
            prop_assume!((p - q).abs() > 1e-3);
            let g = Geodesic2::new(IdealPoint::Real(p), IdealPoint::Real(q)).unwrap();
            let a = nearest_point_projection(z, &g);
            let b = nearest_point_projection(w, &g);
            prop_assert!(hyp_distance(a, b) <= hyp_distance(z, w) + 1e-9);
        }

        #[test]
        fn real_maps_are_isometries(m in real_mobius(), z in plane_point(), w in plane_point()) {
            let d0 = hyp_distance(z, w);
            let d1 = hyp_distance(m.apply_plane(z).unwrap(), m.apply_plane(w).unwrap());
            prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0));
        }
    }
}
