use thiserror::Error;

/// Library-wide error type.  Every variant carries enough context to be
/// rendered as a machine-readable `{code, message, context}` object by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mismatched quaternion algebras")]
    MismatchedAlgebras,
    #[error("order basis is not closed under multiplication (product of basis elements {0} and {1} leaves the lattice)")]
    OrderNotClosed(usize, usize),
    #[error("order basis does not contain 1")]
    OrderMissingOne,
    #[error("order basis is singular")]
    OrderSingular,
    #[error("structure constants a, b must be negative (algebra ramified at infinity)")]
    NotDefinite,
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("enumeration budget exceeded: {required} classes required, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("non-Galois-invariant sum: root-of-unity sum did not reduce to a rational integer")]
    NonGaloisInvariant,
    #[error("L-value not a Bernoulli period (parity mismatch: chi(-1) != (-1)^n at n = {0})")]
    ParityMismatch(i64),
    #[error("gamma factor at nonpositive integer argument {0}")]
    GammaPole(i64),
    #[error("degenerate Gram matrix")]
    DegenerateGram,
    #[error("rank mismatch: expected rank {expected}, matrix has rank {actual}")]
    RankMismatch { expected: u8, actual: u8 },
    #[error("matrix is not in the expected lattice")]
    LatticeMembership,
    #[error("Z in singular position for g (vanishing automorphy denominator)")]
    SingularPosition,
    #[error("input matrix is not symplectic-similitude")]
    NotSymplectic,
    #[error("missing Fourier coefficients for {count} fiber indices, first: {first}")]
    MissingCoefficient { count: usize, first: String },
    #[error("Satake parameter b0 must be nonzero")]
    ZeroSatake,
    #[error("Euler factor vanishes at the evaluation point for q = {0}")]
    PoleAtEvaluation(u64),
    #[error("level M = {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable error code for the CLI surface.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MismatchedAlgebras => "mismatched_algebras",
            Error::OrderNotClosed(..) => "order_not_closed",
            Error::OrderMissingOne => "order_missing_one",
            Error::OrderSingular => "order_singular",
            Error::NotDefinite => "not_definite",
            Error::ValuationOfZero => "valuation_of_zero",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NonGaloisInvariant => "non_galois_invariant",
            Error::ParityMismatch(_) => "parity_mismatch",
            Error::GammaPole(_) => "gamma_pole",
            Error::DegenerateGram => "degenerate_gram",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::LatticeMembership => "lattice_membership",
            Error::SingularPosition => "singular_position",
            Error::NotSymplectic => "not_symplectic",
            Error::MissingCoefficient { .. } => "missing_coefficient",
            Error::ZeroSatake => "zero_satake",
            Error::PoleAtEvaluation(_) => "pole_at_evaluation",
            Error::NotSquarefree(_) => "not_squarefree",
            Error::DivisionByZero(_) => "division_by_zero",
            Error::Invalid(_) => "invalid_input",
        }
    }
}
