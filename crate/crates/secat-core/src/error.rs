//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("input vectors are linearly dependent")]
    DependentInput,

    #[error("generator '{0}' must have positive degree, got {1}")]
    NonPositiveDegree(String, i64),

    #[error("duplicate generator name '{0}'")]
    DuplicateGenerator(String),

    #[error("differential of '{name}' is not homogeneous of degree {expected}")]
    InhomogeneousDifferential { name: String, expected: i64 },

    #[error("d² ≠ 0: d(d {name}) contains the monomial {witness}")]
    DifferentialNotSquareZero { name: String, witness: String },

    #[error("degree {0} exceeds the cap {1}")]
    DegreeBeyondCap(i64, i64),

    #[error("elements belong to different algebras")]
    MismatchedAlgebras,

    #[error("morphism does not commute with differentials in degree {degree}: witness {witness}")]
    NotChainMap { degree: i64, witness: String },

    #[error("ideal is not closed under the differential: d of '{witness}' in degree {degree} leaves the ideal")]
    IdealNotDStable { degree: i64, witness: String },

    #[error("map is not surjective in degree {0}")]
    NotSurjective(i64),

    #[error("linear system has no solution")]
    Inconsistent,

    #[error("semifree factorization did not stabilize within {0} stages")]
    StageBudgetExhausted(usize),

    #[error("{0}")]
    Hypothesis(String),
}
