use alloc::string::String;

/// Errors raised by the algebraic kernels.
///
/// Verification mismatches are not errors; they are reported as data by
/// [`crate::verify`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("prime {0} outside the supported range p < 2^31")]
    PrimeOutOfRange(u64),
    #[error("extension degree {0} outside the supported range 1..=24")]
    DegreeGuardExceeded(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree {from} does not divide degree {to}")]
    IncompatibleDegrees { from: usize, to: usize },
    #[error("operands live in different polynomial rings or fields")]
    MixedContexts,
    #[error("operands are over different base fields")]
    MixedFields,
    #[error("Gröbner step budget of {0} S-polynomial reductions exceeded")]
    StepGuardExceeded(usize),
    #[error("no assignment given for variable `{0}`")]
    MissingAssignment(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("presentation is not finite-dimensional")]
    NotFinite,
    #[error("the zero ring has no local factors")]
    ZeroRing,
    #[error("the base algebra must be a non-zero finite algebra")]
    EmptyBase,
    #[error("{relations} relations in {variables} variables do not form a square system")]
    NotSquareSystem { relations: usize, variables: usize },
    #[error("search space of {0} candidates exceeds the enumeration guard")]
    SearchGuardExceeded(u128),
    #[error("base algebra is not local with residue field k")]
    NotLocalBase,
    #[error("the given functions do not generate the unit ideal")]
    NotCovering,
    #[error("fiber is positive-dimensional")]
    PositiveDimensionalFiber,
    #[error("algebra is not zero-dimensional")]
    NotZeroDimensional,
    #[error("no fiber supplied for geometric point {0}")]
    MissingFiber(usize),
    #[error("Γ-sets are realized in different ambient fields")]
    AmbientMismatch,
    #[error("randomized splitting made no progress after {0} attempts")]
    SplittingFailed(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
