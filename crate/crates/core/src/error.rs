use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    TruncationMismatch { left: i64, right: i64 },

    #[error("branch counts differ: {left} vs {right}")]
    BranchMismatch { left: usize, right: usize },

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("no generators given for a {b}-branch germ")]
    EmptyGenerators { b: usize },

    #[error("generator {index} has a constant term and does not lie in the maximal ideal")]
    ConstantTerm { index: usize },

    #[error(
        "gap sequence does not vanish on a window [j, {order}) with {order} >= 2j; raise the truncation"
    )]
    StabilisationFailure { order: usize },

    #[error("generators {0:?} have gcd > 1, the semigroup has infinitely many gaps")]
    InfiniteGaps(Vec<u64>),

    #[error("residue pairing is not perfect: dim = {dimension}, delta = {delta}")]
    PerfectnessViolation { dimension: usize, delta: usize },

    #[error("differential does not descend to the germ")]
    NotASection,

    #[error("stratum signature sums to {sum}, expected 2g - 2 = {expected}")]
    SignatureMismatch { sum: i64, expected: i64 },

    #[error("degenerate crimping parameters: {symbol}: {reason}")]
    DegenerateParams { symbol: String, reason: String },

    #[error("missing crimping parameter {0}")]
    MissingParam(String),

    #[error("{family} needs at least {min} branches, got {b}")]
    TooFewBranches {
        family: &'static str,
        min: usize,
        b: usize,
    },

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("could not realise gap profile {profile:?} on {b} branches within the attempt budget")]
    SamplerExhausted { profile: Vec<usize>, b: usize },

    #[error("linear form l is not identically zero (adjoint multiplicities {0:?})")]
    LNotZero(Vec<usize>),

    #[error("inconsistent theta data: {0}")]
    InconsistentThetaData(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
