use thiserror::Error;

/// Library-wide error type. Validation failures that the caller asked to
/// *diagnose* (verify_* operations) are reported as structured reports, not
/// errors; errors are reserved for violated preconditions.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("table is not abelian: witness ({0}, {1})")]
    NotAbelian(usize, usize),
    #[error("identity element is not at index 0")]
    IdentityNotZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {0} out of range for carrier of order {1}")]
    IndexOutOfRange(usize, usize),
    #[error("order {0} exceeds the configured bound {1}")]
    OrderTooLarge(usize, usize),
    #[error("prime {0} does not divide the order {1}")]
    PrimeDoesNotDivideOrder(u64, usize),
    #[error("subset is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("invalid brace tables: {0}")]
    InvalidBrace(String),
    #[error("invalid action pair: {0}")]
    InvalidActionPair(String),
    #[error("the pair of actions is not good: witness (h1, h2, y) = ({0}, {1}, {2})")]
    NotGoodPair(usize, usize, usize),
    #[error("the embedded ideal is not a trivial brace: witness ({0}, {1})")]
    IdealNotTrivialBrace(usize, usize),
    #[error("map is not a brace automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("element is moved by nu, hence not in the fixed subgroup I_nu")]
    NotInFixedSubgroup,
    #[error("cochain is not normalized")]
    NotNormalized,
    #[error("pair (beta, tau) does not lie in C^2_N: {0}")]
    NotInC2N(String),
    #[error("(beta, tau) is not a 2-cocycle: {0}")]
    NotACocycle(String),
    #[error("extensions do not share the same ends: {0}")]
    MismatchedEnds(String),
    #[error("pair of automorphisms is not compatible with the actions: {0}")]
    NotCompatible(String),
    #[error("not a pair of brace automorphisms: {0}")]
    NotAutomorphisms(String),
    #[error("automorphism does not normalize the embedded ideal: witness {0}")]
    DoesNotNormalizeIdeal(usize),
    #[error("subset is not a left ideal: {0}")]
    NotALeftIdeal(String),
    #[error("morphism pair is not compatible with the action pairs: {0}")]
    IncompatiblePair(String),
    #[error("extension does not split as an extension of abelian groups")]
    NotAdditivelySplit,
    #[error("automorphism does not preserve the Sylow {0}-subgroup")]
    SylowNotPreserved(u64),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("cross-reference error: {0}")]
    CrossReferenceError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
