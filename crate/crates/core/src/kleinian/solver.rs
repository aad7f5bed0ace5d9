//! Trace-coordinate solver for the fiber representation.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{KleinianError, Monodromy};
use crate::hyp::{Classification, MobiusMap, RiemannPoint, Tolerance};
use crate::words::{reduced_words_up_to, Automorphism, Letter, ReducedWord};

type Sl2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Traces `(tr ρ(a), tr ρ(b), tr ρ(ab))` of a representation with
/// parabolic commutator, so `x² + y² + z² = xyz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkovTriple {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl MarkovTriple {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        MarkovTriple { x, y, z }
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new(x.into(), y.into(), z.into())
    }

    /// `|x² + y² + z² − xyz|`.
    pub fn markov_residual(&self) -> f64 {
        let MarkovTriple { x, y, z } = *self;
        (x * x + y * y + z * z - x * y * z).norm()
    }

    pub fn is_real(&self, eps: f64) -> bool {
        [self.x, self.y, self.z].iter().all(|t| t.im.abs() <= eps)
    }

    fn as_vector(&self) -> Vector3<Complex64> {
        Vector3::new(self.x, self.y, self.z)
    }

    fn from_vector(v: &Vector3<Complex64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Matrices `A = [[x, 1], [−1, 0]]`, `B = [[0, s], [−1/s, y]]` with
    /// `s² + zs + 1 = 0`, so that `tr A = x`, `tr B = y`, `tr AB = z`.
    fn matrices(&self) -> (Sl2, Sl2) {
        let s = (-self.z + (self.z * self.z - 4.0).sqrt()) / 2.0;
        let a = Sl2::new(self.x, ONE, -ONE, ZERO);
        let b = Sl2::new(ZERO, s, -ONE / s, self.y);
        (a, b)
    }

    /// Representative modulo the sign symmetries `(−x,−y,z)`, `(−x,y,−z)`,
    /// `(x,−y,−z)` and complex conjugation, with `Re x, Re y ≥ 0` and
    /// `Im x ≥ 0`.
    fn canonical(self) -> Self {
        let MarkovTriple { mut x, mut y, mut z } = self;
        if x.re < 0.0 {
            x = -x;
            z = -z;
        }
        if y.re < 0.0 {
            y = -y;
            z = -z;
        }
        if x.im < 0.0 {
            x = x.conj();
            y = y.conj();
            z = z.conj();
        }
        MarkovTriple { x, y, z }
    }

    fn sort_key(&self) -> [f64; 6] {
        let r = |v: f64| (v * 1e9).round() / 1e9;
        [
            r(self.x.re),
            r(self.x.im),
            r(self.y.re),
            r(self.y.im),
            r(self.z.re),
            r(self.z.im),
        ]
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

fn word_matrix(a: &Sl2, b: &Sl2, w: &ReducedWord) -> Sl2 {
    let ai = inverse(a);
    let bi = inverse(b);
    w.letters().iter().fold(Sl2::identity(), |m, l| {
        m * match l {
            Letter::A => a,
            Letter::B => b,
            Letter::AInv => &ai,
            Letter::BInv => &bi,
        }
    })
}

fn inverse(m: &Sl2) -> Sl2 {
    Sl2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

fn to_mobius(m: &Sl2) -> Result<MobiusMap, KleinianError> {
    Ok(MobiusMap::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])?)
}

/// Normalizes the determinant of a 2×2 complex matrix to 1.
fn unimodular(e: [Complex64; 4]) -> Result<Sl2, KleinianError> {
    let m = Sl2::new(e[0], e[1], e[2], e[3]);
    let det = m.determinant();
    if det.norm() < 1e-14 {
        return Err(KleinianError::Degenerate("singular generator".into()));
    }
    Ok(m / det.sqrt())
}

/// The images `ρ(a)`, `ρ(b)` in `SL(2, C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    a: Sl2,
    b: Sl2,
    triple: MarkovTriple,
    conjugacy_residual: Option<f64>,
}

impl Representation {
    /// Lifts a trace triple to matrices and conjugates them into normal
    /// position: the commutator's fixed point at `∞`, the repelling and
    /// attracting fixed points of `ρ(a)` at `0` and `1`.
    ///
    /// Real triples give Fuchsian groups and are rejected.
    pub fn from_triple(triple: MarkovTriple, tol: &Tolerance) -> Result<Self, KleinianError> {
        if triple.is_real(1e-8) {
            return Err(KleinianError::FuchsianBranch(triple));
        }
        let (a, b) = triple.matrices();
        let rep = Representation {
            a,
            b,
            triple,
            conjugacy_residual: None,
        };
        rep.normalized(tol)
    }

    /// A representation from explicit generator entries `[a, b, c, d]`;
    /// determinants are rescaled to 1 and no normalization is applied.
    pub fn from_matrices(a: [Complex64; 4], b: [Complex64; 4]) -> Result<Self, KleinianError> {
        let (a, b) = (unimodular(a)?, unimodular(b)?);
        let triple = MarkovTriple::new(a.trace(), b.trace(), (a * b).trace());
        Ok(Representation {
            a,
            b,
            triple,
            conjugacy_residual: None,
        })
    }

    fn normalized(self, tol: &Tolerance) -> Result<Self, KleinianError> {
        let k = self.signed_matrix(&"abAB".parse().expect("valid"));
        let fixed = to_mobius(&k)?.fixed_points();
        let cusp = match fixed.as_slice() {
            [RiemannPoint::Finite(p)] => *p,
            [RiemannPoint::Finite(p), RiemannPoint::Finite(q)] => (p + q) / 2.0,
            _ => {
                return Err(KleinianError::Degenerate(
                    "commutator fixed point is already at infinity".into(),
                ))
            }
        };
        let (att, rep) = match to_mobius(&self.a)?.classify(tol)? {
            Classification::Loxodromic {
                attracting: RiemannPoint::Finite(p),
                repelling: RiemannPoint::Finite(q),
            } => (p, q),
            other => {
                return Err(KleinianError::Degenerate(format!(
                    "generator a is not loxodromic with finite fixed points: {other:?}"
                )))
            }
        };
        let gap = (att - cusp).norm().min((rep - cusp).norm());
        if gap < 1e-9 {
            return Err(KleinianError::Degenerate(
                "commutator shares a fixed point with a".into(),
            ));
        }
        // z ↦ (z − rep)(att − cusp) / ((z − cusp)(att − rep))
        let c = unimodular([
            att - cusp,
            -rep * (att - cusp),
            att - rep,
            -cusp * (att - rep),
        ])?;
        let ci = inverse(&c);
        Ok(Representation {
            a: c * self.a * ci,
            b: c * self.b * ci,
            ..self
        })
    }

    pub fn triple(&self) -> MarkovTriple {
        self.triple
    }

    /// Residual recorded by the solver, if this came from one.
    pub fn conjugacy_residual(&self) -> Option<f64> {
        self.conjugacy_residual
    }

    pub fn generator(&self, l: Letter) -> MobiusMap {
        self.evaluate(&ReducedWord::letter(l))
    }

    /// Entries `[a, b, c, d]` of the chosen `SL(2, C)` lift of `ρ(l)`.
    pub fn generator_entries(&self, l: Letter) -> [Complex64; 4] {
        let m = word_matrix(&self.a, &self.b, &ReducedWord::letter(l));
        [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
    }

    fn signed_matrix(&self, w: &ReducedWord) -> Sl2 {
        word_matrix(&self.a, &self.b, w)
    }

    /// Trace of the `SL(2, C)` lift (sign included).
    pub fn signed_trace(&self, w: &ReducedWord) -> Complex64 {
        self.signed_matrix(w).trace()
    }

    /// `ρ(w)` as a Möbius map.
    pub fn evaluate(&self, w: &ReducedWord) -> MobiusMap {
        to_mobius(&self.signed_matrix(w)).expect("products of unimodular matrices are invertible")
    }

    /// `|tr ρ([a, b]) + 2|`.
    pub fn commutator_residual(&self) -> f64 {
        (self.signed_trace(&"abAB".parse().expect("valid")) + 2.0).norm()
    }
}

/// Settings for the Newton search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub seed: u64,
    /// Number of random starting points per sign pattern.
    pub starts: usize,
    pub max_iterations: usize,
    /// Accept a root when the residual norm falls below this.
    pub accept: f64,
    pub tolerance: Tolerance,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            seed: 0x5eed,
            starts: 48,
            max_iterations: 80,
            accept: 1e-11,
            tolerance: Tolerance::default(),
        }
    }
}

const SIGNS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

struct System {
    image_a: ReducedWord,
    image_b: ReducedWord,
    signs: (f64, f64),
}

impl System {
    fn residual(&self, v: &Vector3<Complex64>) -> Vector3<Complex64> {
        let t = MarkovTriple::from_vector(v);
        let (a, b) = t.matrices();
        let (x, y, z) = (v[0], v[1], v[2]);
        Vector3::new(
            x * x + y * y + z * z - x * y * z,
            word_matrix(&a, &b, &self.image_a).trace() - self.signs.0 * x,
            word_matrix(&a, &b, &self.image_b).trace() - self.signs.1 * y,
        )
    }

    /// Central differences; the residual is a polynomial in `(x, y, z)`,
    /// so complex difference quotients give the holomorphic Jacobian.
    fn jacobian(&self, v: &Vector3<Complex64>) -> Matrix3<Complex64> {
        let h = 1e-7;
        let mut j = Matrix3::zeros();
        for k in 0..3 {
            let mut e = Vector3::zeros();
            e[k] = Complex64::new(h, 0.0);
            let d = (self.residual(&(v + e)) - self.residual(&(v - e))) / Complex64::new(2.0 * h, 0.0);
            j.set_column(k, &d);
        }
        j
    }

    fn newton(&self, mut v: Vector3<Complex64>, opts: &SolverOptions) -> (Vector3<Complex64>, f64) {
        let mut r = self.residual(&v).norm();
        for _ in 0..opts.max_iterations {
            if !r.is_finite() || r < 1e-14 {
                break;
            }
            let step = match self.jacobian(&v).lu().solve(&self.residual(&v)) {
                Some(s) => s,
                None => break,
            };
            let mut damping = 1.0;
            let mut improved = false;
            for _ in 0..12 {
                let trial = v - step * Complex64::new(damping, 0.0);
                let tr = self.residual(&trial).norm();
                if tr.is_finite() && tr < r {
                    v = trial;
                    r = tr;
                    improved = true;
                    break;
                }
                damping /= 2.0;
            }
            if !improved {
                break;
            }
        }
        (v, r)
    }
}

/// Finds the fiber representation for the monodromy: a non-real Markov
/// triple fixed by the trace action, lifted and normalized.
pub fn solve_fiber_representation(
    m: &Monodromy,
    opts: &SolverOptions,
) -> Result<Representation, KleinianError> {
    let phi = m.automorphism();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut roots: Vec<MarkovTriple> = Vec::new();
    let mut best = f64::INFINITY;
    for signs in SIGNS {
        let system = System {
            image_a: phi.image(Letter::A),
            image_b: phi.image(Letter::B),
            signs,
        };
        for _ in 0..opts.starts {
            let mut c = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let start = Vector3::new(c(), c(), c());
            let (v, r) = system.newton(start, opts);
            best = best.min(r);
            if r < opts.accept {
                let t = MarkovTriple::from_vector(&v).canonical();
                let close = |u: &MarkovTriple| (u.as_vector() - t.as_vector()).norm() < 1e-6;
                if t.as_vector().norm() > 1e-6 && !roots.iter().any(close) {
                    roots.push(t);
                }
            }
        }
    }
    if roots.is_empty() {
        return Err(KleinianError::NoConvergence { residual: best });
    }
    let mut candidates = Vec::new();
    let mut fuchsian = None;
    for t in roots {
        match Representation::from_triple(t, &opts.tolerance) {
            Ok(mut rep) => {
                let residual = verify_monodromy_conjugacy(&rep, m);
                if residual < 1e-6 {
                    rep.conjugacy_residual = Some(residual);
                    let violations = jorgensen_spot_check(&rep, 2).violations;
                    candidates.push((violations, rep));
                }
            }
            Err(KleinianError::FuchsianBranch(t)) => fuchsian = Some(t),
            Err(_) => {}
        }
    }
    candidates.sort_by(|(v1, r1), (v2, r2)| {
        v1.cmp(v2).then_with(|| {
            let (k1, k2) = (r1.triple.sort_key(), r2.triple.sort_key());
            k1.partial_cmp(&k2).unwrap_or(Ordering::Equal)
        })
    });
    match candidates.into_iter().next() {
        Some((_, rep)) => Ok(rep),
        None => match fuchsian {
            Some(t) => Err(KleinianError::FuchsianBranch(t)),
            None => Err(KleinianError::NoConvergence { residual: best }),
        },
    }
}

/// How far `ρ ∘ φ` is from being conjugate to `ρ` in `PSL(2, C)`, measured on
/// the traces of `a`, `b` and `ab`; the best sign lift is used.
pub fn verify_monodromy_conjugacy(rep: &Representation, m: &Monodromy) -> f64 {
    residual_for(rep, &m.automorphism())
}

fn residual_for(rep: &Representation, phi: &Automorphism) -> f64 {
    let ab: ReducedWord = "ab".parse().expect("valid");
    let gens = [ReducedWord::letter(Letter::A), ReducedWord::letter(Letter::B), ab];
    SIGNS
        .iter()
        .map(|&(sa, sb)| {
            let signs = [sa, sb, sa * sb];
            gens.iter()
                .zip(signs)
                .map(|(g, s)| (rep.signed_trace(&phi.apply(g)) - s * rep.signed_trace(g)).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Outcome of testing `|tr² g − 4| + |tr [g, h] − 2| ≥ 1` on short words.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JorgensenReport {
    pub pairs_checked: usize,
    pub violations: usize,
    pub min_value: f64,
}

/// Checks the inequality on pairs of words of length `1..=max_len`, skipping
/// pairs that generate an elementary group (`tr [g, h] ≈ 2`). Violations
/// would rule out discreteness; passing proves nothing.
pub fn jorgensen_spot_check(rep: &Representation, max_len: usize) -> JorgensenReport {
    let words: Vec<ReducedWord> = reduced_words_up_to(max_len)
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let mats: Vec<Sl2> = words.iter().map(|w| rep.signed_matrix(w)).collect();
    let mut report = JorgensenReport {
        pairs_checked: 0,
        violations: 0,
        min_value: f64::INFINITY,
    };
    for (i, g) in mats.iter().enumerate() {
        for h in mats.iter().skip(i + 1) {
            let comm = g * h * inverse(g) * inverse(h);
            let tc = comm.trace() - 2.0;
            if tc.norm() < 1e-6 {
                continue;
            }
            let tg = g.trace();
            let value = (tg * tg - 4.0).norm() + tc.norm();
            report.pairs_checked += 1;
            report.min_value = report.min_value.min(value);
            if value < 1.0 - 1e-9 {
                report.violations += 1;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The figure-eight triple solved by hand: the trace action of
    /// `a ↦ aab, b ↦ ab` is `(x, y, z) ↦ (xz − y, z, …)`, so a fixed triple
    /// has `y = z`, `x = z/(z − 1)` and the Markov identity reduces to
    /// `z² − 3z + 3 = 0`.
    fn figure_eight_oracle() -> MarkovTriple {
        let r = 3f64.sqrt() / 2.0;
        MarkovTriple::new(
            Complex64::new(1.5, r),
            Complex64::new(1.5, -r),
            Complex64::new(1.5, -r),
        )
    }

    fn solved() -> &'static Representation {
        static REP: std::sync::OnceLock<Representation> = std::sync::OnceLock::new();
        REP.get_or_init(|| {
            solve_fiber_representation(&Monodromy::figure_eight(), &SolverOptions::default())
                .unwrap()
        })
    }

    #[test]
    fn figure_eight_matches_hand_solution() {
        let rep = solved();
        let t = rep.triple();
        let o = figure_eight_oracle();
        assert!((t.as_vector() - o.as_vector()).norm() < 1e-9, "{t}");
        assert!(t.markov_residual() < 1e-9);
        assert!(rep.commutator_residual() < 1e-9);
        assert!(rep.conjugacy_residual().unwrap() < 1e-6);
        // x = (3 + √−3)/2 lies in Q(√−3): 2x − 3 squares to −3
        let w = t.x * 2.0 - 3.0;
        assert!((w * w + 3.0).norm() < 1e-9);
    }

    #[test]
    fn normal_position() {
        let rep = solved();
        let tol = Tolerance::default();
        let k = rep.evaluate(&"abAB".parse().unwrap());
        let fixed = k.fixed_points();
        assert!(fixed.iter().all(|p| p.chordal(RiemannPoint::Infinity) < 1e-6));
        match rep.generator(Letter::A).classify(&tol).unwrap() {
            Classification::Loxodromic {
                attracting,
                repelling,
            } => {
                assert!(attracting.chordal(RiemannPoint::new(1.0, 0.0)) < 1e-9);
                assert!(repelling.chordal(RiemannPoint::new(0.0, 0.0)) < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn real_triples_are_fuchsian() {
        let t = MarkovTriple::real(3.0, 3.0, 3.0);
        assert!(t.markov_residual() < 1e-12);
        assert!(matches!(
            Representation::from_triple(t, &Tolerance::default()),
            Err(KleinianError::FuchsianBranch(_))
        ));
    }

    #[test]
    fn other_monodromies_solve() {
        for m in [[[3, 1], [2, 1]], [[1, 1], [1, 2]], [[-2, -1], [-1, -1]], [[3, 2], [1, 1]]] {
            let m = Monodromy::new(m).unwrap();
            let rep = solve_fiber_representation(&m, &SolverOptions::default()).unwrap();
            assert!(rep.commutator_residual() < 1e-9, "{m}");
            assert!(verify_monodromy_conjugacy(&rep, &m) < 1e-6, "{m}");
            assert!(!rep.triple().is_real(1e-6));
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let rep = solved();
        let m = Monodromy::figure_eight();
        assert!(verify_monodromy_conjugacy(rep, &m) < 1e-6);
        let mut a = rep.generator_entries(Letter::A);
        for e in a.iter_mut() {
            *e += Complex64::new(1e-3, 0.0);
        }
        let bumped = Representation::from_matrices(a, rep.generator_entries(Letter::B)).unwrap();
        assert!(verify_monodromy_conjugacy(&bumped, &m) > 1e-4);
    }

    #[test]
    fn evaluation_examples() {
        let rep = solved();
        assert!(rep.evaluate(&ReducedWord::identity()).is_identity(1e-12));
        assert!(rep.evaluate(&"aA".parse().unwrap()).is_identity(1e-12));
        let report = jorgensen_spot_check(rep, 2);
        assert!(report.pairs_checked > 0);
        assert_eq!(report.violations, 0, "{report:?}");
    }

    fn word() -> impl Strategy<Value = ReducedWord> {
        proptest::collection::vec(0usize..4, 0..12)
            .prop_map(|v| ReducedWord::reduce(v.into_iter().map(|i| Letter::ALL[i])))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn evaluation_is_a_homomorphism(u in word(), v in word()) {
            let rep = solved();
            let lhs = rep.evaluate(&u.concat(&v));
            let rhs = rep.evaluate(&u).compose(&rep.evaluate(&v));
            let scale = lhs.entries().iter().map(|e| e.norm()).fold(1.0, f64::max);
            prop_assert!(lhs.projective_distance(&rhs) < 1e-9 * scale);
        }
    }
}
