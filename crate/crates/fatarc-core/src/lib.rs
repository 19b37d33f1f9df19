//! Exact algebra for arc schemes of affine schemes along fat points.
//!
//! The crate is organized bottom-up:
//!
//! * [`polycore`] — exact scalars (ℚ and 𝔽ₚ), sparse monomials, term orders,
//!   multivariate polynomials, parsing and printing.
//! * [`linalg`] — dense exact linear algebra over any field-like scalar
//!   (rank, inverse, solving), used for change of basis and series fits.
//! * [`ideals`] — Gröbner kernel: Buchberger with pair pruning, normal forms,
//!   elimination, intersection, radical membership, Krull dimension,
//!   staircases and colengths.
//! * [`fatpoints`] — fat points (Artinian local quotients supported at the
//!   origin), certified good ordered bases, products, jets.
//! * [`arcs`] — generic arc expansion along a fat point, arc schemes and
//!   deformed arc schemes, constructible motifs and their arc transforms,
//!   dimension/defect reports, image closures.
//! * [`frobchar`] — bracket powers and Frobenius transforms in positive
//!   characteristic, relative Frobenius, adjunction counting.
//! * [`classes`] — finite-field and finite-ring point counting, fat-point
//!   fingerprints, Laurent 𝕃-values, inclusion–exclusion.
//! * [`series`] — truncated Igusa, auto-Igusa, Hilbert, Hilbert–Kunz and
//!   Milnor series with certified coefficient data and closed-form fits.
//! * [`motint`] — step functions on a scheme and split motivic integrals,
//!   global and chart-local.
//!
//! All arithmetic is exact; nothing in the crate touches floating point.
//! Budgeted operations fail deterministically with [`Error::ResourceLimit`]
//! or [`Error::BudgetExceeded`] instead of returning partial answers.

pub mod polycore;
pub mod linalg;
pub mod ideals;
pub mod fatpoints;
pub mod arcs;
pub mod frobchar;
pub mod classes;
pub mod series;
pub mod motint;

/// Crate-wide error type. Every fallible operation returns [`Result`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("scalar division by zero")]
    DivisionByZero,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("not finite length")]
    NotFiniteLength,
    #[error("not supported at origin: variable `{0}` is not nilpotent on the fat point")]
    NotSupportedAtOrigin(String),
    #[error("fat point ideal is the unit ideal (empty scheme)")]
    EmptyFatPoint,
    #[error("filtration violated: {0}")]
    FiltrationViolated(String),
    #[error("point does not lie on the scheme: `{0}` does not vanish there")]
    PointNotOnScheme(String),
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("operation requires positive characteristic")]
    CharacteristicZero,
    #[error("characteristic mismatch: {0}")]
    CharacteristicMismatch(String),
    #[error("enumeration budget exceeded: needs {needed} evaluations, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("unsupported finite field size q = {0}")]
    UnsupportedFieldSize(u64),
    #[error("coefficient does not reduce modulo {0}")]
    BadReduction(u64),
    #[error("not certified: {0}")]
    NotCertified(String),
    #[error("realization mismatch: {0}")]
    RealizationMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource budgets threaded through every potentially expensive operation.
/// Exceeding a budget is a deterministic error, never a truncated answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of S-pairs a single Gröbner basis run may process.
    pub max_gb_pairs: usize,
    /// Maximum number of tuples a point-counting enumeration may visit.
    pub max_enumeration: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_gb_pairs: 100_000, max_enumeration: 10_000_000 }
    }
}
