//! Probabilistic disagreement as an investment opportunity.
//!
//! Two parties disagree about the distribution of some outcome: a market
//! maker quotes fair prices from `m`, a bettor believes `b`. This crate
//! measures the disagreement with the Rényi divergence family, builds the
//! bettor's CRRA-optimal payoff, evaluates its expected growth rate in closed
//! form, forms markets from pools of Kelly investors, and checks the rate
//! laws by seeded Monte Carlo repetition of the bet.
//!
//! All divergences and rates are in nats.
//!
//! ```
//! use disagree_core::{make_distribution, expected_rate_closed_form, RiskAversion};
//!
//! let b = make_distribution(&[0.6, 0.4], false).unwrap();
//! let m = make_distribution(&[0.5, 0.5], false).unwrap();
//! let rate = expected_rate_closed_form(&b, &m, RiskAversion::new(2.0).unwrap()).unwrap();
//! assert!((rate - 0.0151445).abs() < 1e-7);
//! ```

pub mod distribution;
pub mod divergence;
pub mod error;
pub mod market;
pub mod neuro;
pub mod performance;
pub mod portfolio;
pub mod simulate;

pub use distribution::{
    belief_ratio, make_distribution, sample_outcome, Distribution, OutcomeSpace, RatioFunction,
    RngState, NORMALIZATION_TOLERANCE,
};
pub use divergence::{
    divergence_profile, phi_divergence, relative_entropy, renyi_divergence, DivergenceProfile,
    ExtendedRate,
};
pub use error::{Error, Result};
pub use market::{form_market, per_investor_rates, Investor};
pub use neuro::{
    accumulate_llr, binary_payoff_log_ratio, likelihood_from_flat_prior, threshold_decision,
    BinaryDisagreement, Choice, Decision, EvidenceSequence,
};
pub use performance::{
    compound_growth, expected_rate_closed_form, general_rate_law, implied_risk_aversion,
    rate_curve, rate_drop, RateCurve,
};
pub use portfolio::{
    crra_utility, elasticity_residual, expected_rate, expected_utility, is_natural,
    optimal_payoff, optimal_payoff_with, price, Payoff, RiskAversion, ZeroBelief,
    NATURAL_RANGE, PAYOFF_FLOOR,
};
pub use simulate::{run_repeated_game, summarize, ConvergenceReport, Scenario, SimResult};
