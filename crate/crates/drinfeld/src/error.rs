//! Error type shared across the workbench.
//!
//! Every fallible operation in this crate returns [`Result`]. The variants
//! split into three families that callers (notably the CLI) treat differently:
//!
//! * configuration / domain errors — bad field parameters, reducible moduli,
//!   malformed inputs, weights with no forms;
//! * precision exhaustion — an exact computation that cannot be completed at
//!   the precision supplied, reported with the precision that would suffice;
//! * internal inconsistencies — conditions the underlying theory guarantees,
//!   asserted at runtime so a violation is loud rather than silent.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the workbench, exactly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The base field would have even characteristic; the whole theory here
    /// requires q odd, and contexts refuse to construct.
    #[error("q = {q} is even; this workbench requires odd q")]
    EvenCharacteristic { q: u64 },

    /// Field construction with a composite (or unsupported) characteristic.
    #[error("{p} is not a supported prime characteristic")]
    NotPrime { p: u64 },

    /// Division by zero in a field or fraction field.
    #[error("division by zero")]
    DivisionByZero,

    /// Inverting a truncated series whose constant term vanishes.
    #[error("cannot invert a series with zero constant term")]
    NonUnitSeries,

    /// An exact computation ran out of series coefficients.
    #[error("insufficient precision: need at least {needed} coefficients, have {available}")]
    PrecisionExhausted { needed: usize, available: usize },

    /// Adding isobaric forms of different weight or type.
    #[error("grade mismatch: ({k1}, {l1}) vs ({k2}, {l2})")]
    GradeMismatch { k1: i64, l1: i64, k2: i64, l2: i64 },

    /// No (mu, gamma) decomposition exists: no form of this weight and type.
    #[error("no form of weight {k} and type {l} exists")]
    NoSuchForm { k: i64, l: i64 },

    /// An isobaric form violating its own weight/type arithmetic.
    #[error("malformed isobaric form: {0}")]
    MalformedForm(String),

    /// Symbolic Serre operators are only defined for order n < q.
    #[error("Serre operator order {n} is not below q = {q}")]
    SerreOrderTooLarge { n: u64, q: u64 },

    /// Determinant of a matrix whose permutation products are not all
    /// homogeneous of one common weight and type.
    #[error("determinant entries are not weight/type homogeneous")]
    InhomogeneousDeterminant,

    /// zeta_ratio(k) only exists for k divisible by q − 1.
    #[error("zeta ratio index {k} is not divisible by q - 1")]
    ZetaIndex { k: u64 },

    /// A u-series that is not the expansion of any form of the stated grade.
    #[error("series is not modular of weight {k} and type {l} (nonzero residual)")]
    NotModular { k: i64, l: i64 },

    /// Reduction mod pi of a coefficient with a pole at pi.
    #[error("coefficient is not integral at pi: {0}")]
    NotIntegralAtPi(String),

    /// A modulus that must be monic is not.
    #[error("polynomial is not monic")]
    NotMonic,

    /// A modulus that must be irreducible factors.
    #[error("polynomial is reducible")]
    Reducible,

    /// A condition guaranteed by the theory failed to hold; a bug, not a
    /// user error.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Text that does not parse in the exchange formats.
    #[error("parse error: {0}")]
    Parse(String),

    /// A structurally invalid argument (bad exponent, empty matrix, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
