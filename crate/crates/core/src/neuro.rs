//! Binary evidence accumulation and its link to optimal payoffs.
//!
//! Shapes are treated as conditionally independent given where the reward
//! sits, so the log-likelihood ratio of a sequence is the running sum of
//! per-shape contributions. Per-shape values are supplied by the caller.

use serde::Serialize;

use crate::distribution::{make_distribution, Distribution};
use crate::error::{Error, Result};
use crate::portfolio::RiskAversion;

/// Per-shape log-likelihood-ratio contributions, "in" minus "out", in nats.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct EvidenceSequence(Vec<f64>);

impl EvidenceSequence {
    pub fn new(shape_llrs: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = shape_llrs.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteEvidence { index, value });
        }
        Ok(EvidenceSequence(shape_llrs))
    }

    pub fn shape_llrs(&self) -> &[f64] {
        &self.0
    }
}

/// Running log-likelihood ratio after each shape.
pub fn accumulate_llr(evidence: &EvidenceSequence) -> Result<Vec<f64>> {
    if evidence.0.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    Ok(evidence
        .0
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    In,
    Out,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decision {
    pub choice: Choice,
    /// 1-based step at which the threshold was first reached.
    pub step: Option<usize>,
    /// Accumulated LLR at that step.
    pub llr: Option<f64>,
}

/// Stops at the first step whose accumulated evidence reaches `theta` in
/// absolute value.
pub fn threshold_decision(trajectory: &[f64], theta: f64) -> Result<Decision> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::InvalidThreshold(theta));
    }
    let hit = trajectory.iter().enumerate().find(|(_, v)| v.abs() >= theta);
    Ok(match hit {
        Some((k, &v)) => Decision {
            choice: if v > 0.0 { Choice::In } else { Choice::Out },
            step: Some(k + 1),
            llr: Some(v),
        },
        None => Decision { choice: Choice::Undecided, step: None, llr: None },
    })
}

/// Belief and market probabilities of the "reward in" outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinaryDisagreement {
    b_in: f64,
    m_in: f64,
}

impl BinaryDisagreement {
    pub fn new(b_in: f64, m_in: f64) -> Result<Self> {
        let inside = |x: f64| x > 0.0 && x < 1.0;
        if inside(b_in) && inside(m_in) {
            Ok(BinaryDisagreement { b_in, m_in })
        } else {
            Err(Error::InvalidBinaryDisagreement { b_in, m_in })
        }
    }

    pub fn b_in(&self) -> f64 {
        self.b_in
    }

    pub fn m_in(&self) -> f64 {
        self.m_in
    }

    /// `(belief, market)` on the outcome space `[in, out]`.
    pub fn to_distributions(&self) -> Result<(Distribution, Distribution)> {
        Ok((
            make_distribution(&[self.b_in, 1.0 - self.b_in], false)?,
            make_distribution(&[self.m_in, 1.0 - self.m_in], false)?,
        ))
    }
}

/// `ln F(in)/F(out) = (1/R)·ln f(in)/f(out)` for the optimal payoff.
pub fn binary_payoff_log_ratio(d: &BinaryDisagreement, r: RiskAversion) -> f64 {
    let log_f_in = d.b_in.ln() - d.m_in.ln();
    let log_f_out = (-d.b_in).ln_1p() - (-d.m_in).ln_1p();
    (log_f_in - log_f_out) / r.value()
}

/// Likelihoods `(f_in, f_out)` when the market is flat (the prior), so that
/// `b = f·m` is Bayes' rule.
pub fn likelihood_from_flat_prior(d: &BinaryDisagreement) -> Result<(f64, f64)> {
    if d.m_in != 0.5 {
        return Err(Error::NotFlatMarket(d.m_in));
    }
    Ok((2.0 * d.b_in, 2.0 * (1.0 - d.b_in)))
}
