//! Fiber representations of punctured-torus bundles and approximations of
//! their boundary maps.
//!
//! A monodromy `M ∈ SL(2, Z)` with `|tr M| > 2` determines a hyperbolic
//! mapping torus whose fiber group is a representation `ρ: F(a, b) → PSL(2, C)`
//! with parabolic commutator. The representation is found in trace
//! coordinates `(tr ρ(a), tr ρ(b), tr ρ(ab))` as a fixed point of the trace
//! action of `M`, and then lifted to matrices in a normalized position.

mod ct;
mod solver;

pub use ct::{ct_batch, ct_image, ct_image_with_stride, periodic_limit, CtSample, CtStatus};
pub use solver::{
    jorgensen_spot_check, solve_fiber_representation, verify_monodromy_conjugacy,
    JorgensenReport, MarkovTriple, Representation, SolverOptions,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyp::HypError;
use crate::words::{Automorphism, WordError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KleinianError {
    #[error("invalid monodromy {matrix:?}: {reason}")]
    InvalidMonodromy { matrix: [[i64; 2]; 2], reason: String },
    #[error("trace triple {0} is real: this is a Fuchsian branch, not a degenerate group")]
    FuchsianBranch(MarkovTriple),
    #[error("root finder did not converge (best residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("degenerate representation: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An element of `SL(2, Z)` with `|trace| > 2`, acting on the homology of
/// the punctured torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monodromy([[i64; 2]; 2]);

impl Monodromy {
    pub fn new(matrix: [[i64; 2]; 2]) -> Result<Self, KleinianError> {
        let [[a, b], [c, d]] = matrix;
        if a * d - b * c != 1 {
            return Err(KleinianError::InvalidMonodromy {
                matrix,
                reason: "determinant is not 1".into(),
            });
        }
        if (a + d).abs() <= 2 {
            return Err(KleinianError::InvalidMonodromy {
                matrix,
                reason: "|trace| must exceed 2".into(),
            });
        }
        Ok(Monodromy(matrix))
    }

    /// `[[2,1],[1,1]]`, the monodromy of the figure-eight knot complement.
    pub fn figure_eight() -> Self {
        Monodromy([[2, 1], [1, 1]])
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.0
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    /// An automorphism of `F(a, b)` acting on homology by this matrix.
    pub fn automorphism(&self) -> Automorphism {
        Automorphism::from_sl2z(self.0).expect("validated on construction")
    }
}

impl fmt::Display for Monodromy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl FromStr for Monodromy {
    type Err = KleinianError;

    /// Parses `"a,b,c,d"` (row-major).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| {
                KleinianError::Word(WordError::InvalidNumber(format!("monodromy {s:?}: {e}")))
            })?;
        match entries[..] {
            [a, b, c, d] => Monodromy::new([[a, b], [c, d]]),
            _ => Err(KleinianError::Word(WordError::InvalidNumber(format!(
                "monodromy {s:?} needs four comma-separated integers"
            )))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monodromy_validation() {
        assert!(Monodromy::new([[1, 0], [0, 1]]).is_err());
        assert!(Monodromy::new([[1, 1], [0, 1]]).is_err());
        assert!(Monodromy::new([[2, 0], [0, 1]]).is_err());
        let m: Monodromy = "2, 1, 1, 1".parse().unwrap();
        assert_eq!(m, Monodromy::figure_eight());
        assert_eq!(m.to_string(), "2,1,1,1");
        assert!("2,1,1".parse::<Monodromy>().is_err());
        assert!("2,x,1,1".parse::<Monodromy>().is_err());
        assert_eq!(m.automorphism().abelianization(), m.matrix());
    }
}
