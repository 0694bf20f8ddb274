use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("both entries of the pair are zero")]
    ZeroPair,
    #[error("the vector is zero")]
    ZeroVector,
    #[error("{0} is a perfect square")]
    SquareInput(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("lattice basis is degenerate: {0}")]
    DegenerateBasis(String),
    #[error("lattice search exhausted its budget of {budget} rounds")]
    SearchExhausted { budget: u32 },
    #[error("polynomial does not vanish at the given point")]
    NotOnCurve,
    #[error("degenerate curve parameters (a, b) = ({a}, {b})")]
    DegenerateParameters { a: i64, b: i64 },
    #[error("the boundary contains the curve")]
    BoundaryContainsCurve,
    #[error("base parameter does not map to an integral point")]
    NotIntegralBase,
    #[error("integral reparametrization not verified after {rounds} rounds (last scale {scale})")]
    VerificationFailed { scale: BigInt, rounds: u32 },
    #[error("norm-one unit group is finite for discriminant {disc}")]
    NoRealUnits { disc: i64 },
    #[error("the curve is reducible for (a, b) = ({a}, {b})")]
    ReducibleCurve { a: i64, b: i64 },
    #[error("the point is a blown-up center")]
    BlownUpCenter,
    #[error("residue class does not satisfy a0*b0 - a1*b1 = +-1 mod q")]
    InvalidResidue,
    #[error("need at least 3 points with distance below 1, got {0}")]
    TooFewPoints(usize),
    #[error("pseudoeffective cone is not simplicial for the chosen cone")]
    NotSimplicial,
    #[error("line bundle is not nef")]
    NotNef,
    #[error("line bundle is not ample")]
    NotAmple,
    #[error("collection is not central primitive")]
    NotCentral,
    #[error("point lies outside the affine chart")]
    OutsideChart,
    #[error("boundary ray {0} does not belong to a central primitive collection")]
    UnsupportedBoundary(usize),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
