use thiserror::Error;

/// Errors raised by the core library.
///
/// Every message starts with the variant name so that diagnostics can be
/// matched by name from the command line.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NegativeMass: weight {index} is {value}")]
    NegativeMass { index: usize, value: f64 },
    #[error("NonFiniteMass: weight {index} is {value}")]
    NonFiniteMass { index: usize, value: f64 },
    #[error("ZeroTotal: weights sum to zero")]
    ZeroTotal,
    #[error("NotNormalized: weights sum to {sum}, expected 1 within {tolerance:e}")]
    NotNormalized { sum: f64, tolerance: f64 },
    #[error("TooFewOutcomes: an outcome space needs at least 2 outcomes, got {0}")]
    TooFewOutcomes(usize),
    #[error("DuplicateLabel: outcome label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("LengthMismatch: expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("SpaceMismatch: operands are defined on different outcome spaces")]
    SpaceMismatch,
    #[error("ZeroMarketMass: market assigns zero mass to outcome {index}")]
    ZeroMarketMass { index: usize },
    #[error("ZeroBeliefMass: belief assigns zero mass to outcome {index}")]
    ZeroBeliefMass { index: usize },
    #[error("NonPositiveAlpha: divergence order must be > 0, got {0}")]
    NonPositiveAlpha(f64),
    #[error("UnsortedAlphas: alpha grid must be strictly increasing")]
    UnsortedAlphas,
    #[error("UnsortedGrid: risk-aversion grid must be strictly increasing and positive")]
    UnsortedGrid,
    #[error("NonFinitePhi: phi is not finite at ratio {ratio}")]
    NonFinitePhi { ratio: f64 },
    #[error("InvalidRiskAversion: risk aversion must be finite and > 0, got {0}")]
    InvalidRiskAversion(f64),
    #[error("InvalidPayoff: payoff value {index} is {value}, expected finite and > 0")]
    InvalidPayoff { index: usize, value: f64 },
    #[error("DegenerateRatio: belief ratio is constant across outcomes")]
    DegenerateRatio,
    #[error("TargetOutOfRange: target rate {target} outside [{min}, {max}]")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },
    #[error("EmptyPool: no investors supplied")]
    EmptyPool,
    #[error("InvalidBudget: budget of {name:?} must be finite and > 0, got {budget}")]
    InvalidBudget { name: String, budget: f64 },
    #[error("UnsupportedRiskAversion: investor {name:?} has R = {r}; market formation requires R = 1")]
    UnsupportedRiskAversion { name: String, r: f64 },
    #[error("InvalidScenario: {0}")]
    InvalidScenario(String),
    #[error("TooFewPaths: a standard error needs at least 2 paths, got {0}")]
    TooFewPaths(usize),
    #[error("EmptyEvidence: evidence sequence is empty")]
    EmptyEvidence,
    #[error("NonFiniteEvidence: evidence entry {index} is {value}")]
    NonFiniteEvidence { index: usize, value: f64 },
    #[error("InvalidThreshold: threshold must be finite and > 0, got {0}")]
    InvalidThreshold(f64),
    #[error("InvalidBinaryDisagreement: probabilities must lie strictly inside (0, 1), got b_in = {b_in}, m_in = {m_in}")]
    InvalidBinaryDisagreement { b_in: f64, m_in: f64 },
    #[error("NotFlatMarket: flat market requires m_in = 0.5, got {0}")]
    NotFlatMarket(f64),
}

impl Error {
    /// Variant name, as printed at the start of the message.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NegativeMass { .. } => "NegativeMass",
            Error::NonFiniteMass { .. } => "NonFiniteMass",
            Error::ZeroTotal => "ZeroTotal",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::TooFewOutcomes(_) => "TooFewOutcomes",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::ZeroMarketMass { .. } => "ZeroMarketMass",
            Error::ZeroBeliefMass { .. } => "ZeroBeliefMass",
            Error::NonPositiveAlpha(_) => "NonPositiveAlpha",
            Error::UnsortedAlphas => "UnsortedAlphas",
            Error::UnsortedGrid => "UnsortedGrid",
            Error::NonFinitePhi { .. } => "NonFinitePhi",
            Error::InvalidRiskAversion(_) => "InvalidRiskAversion",
            Error::InvalidPayoff { .. } => "InvalidPayoff",
            Error::DegenerateRatio => "DegenerateRatio",
            Error::TargetOutOfRange { .. } => "TargetOutOfRange",
            Error::EmptyPool => "EmptyPool",
            Error::InvalidBudget { .. } => "InvalidBudget",
            Error::UnsupportedRiskAversion { .. } => "UnsupportedRiskAversion",
            Error::InvalidScenario(_) => "InvalidScenario",
            Error::TooFewPaths(_) => "TooFewPaths",
            Error::EmptyEvidence => "EmptyEvidence",
            Error::NonFiniteEvidence { .. } => "NonFiniteEvidence",
            Error::InvalidThreshold(_) => "InvalidThreshold",
            Error::InvalidBinaryDisagreement { .. } => "InvalidBinaryDisagreement",
            Error::NotFlatMarket(_) => "NotFlatMarket",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
