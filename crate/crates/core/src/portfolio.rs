//! Pricing, CRRA-optimal payoffs, logarithmic rates and expected utility.

use std::sync::Arc;

use serde::Serialize;

use crate::distribution::{ensure_same_space, Distribution, OutcomeSpace};
use crate::error::{Error, Result};

/// Mass substituted for zero-belief outcomes when building a payoff, so that
/// every payoff stays strictly positive.
pub const PAYOFF_FLOOR: f64 = 1e-12;

/// Bounds of the empirically natural range of relative risk aversion.
pub const NATURAL_RANGE: (f64, f64) = (1.0, 2.5);

/// Arrow-Pratt relative risk aversion `R = -F U''(F) / U'(F)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct RiskAversion(f64);

impl RiskAversion {
    /// The growth-optimizing (Kelly) investor.
    pub const KELLY: RiskAversion = RiskAversion(1.0);

    pub fn new(r: f64) -> Result<Self> {
        if r > 0.0 && r.is_finite() {
            Ok(RiskAversion(r))
        } else {
            Err(Error::InvalidRiskAversion(r))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Rényi order `1/R` paired with this risk aversion.
    pub fn order(self) -> f64 {
        1.0 / self.0
    }

    pub fn is_kelly(self) -> bool {
        self.0 == 1.0
    }

    /// `1 <= R <= 2.5`
    pub fn is_natural(self) -> bool {
        is_natural(self.0)
    }
}

pub fn is_natural(r: f64) -> bool {
    (NATURAL_RANGE.0..=NATURAL_RANGE.1).contains(&r)
}

/// Reward per unit invested, one strictly positive value per outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Payoff {
    #[serde(skip)]
    space: Arc<OutcomeSpace>,
    values: Vec<f64>,
}

impl Payoff {
    pub fn new(space: Arc<OutcomeSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: values.len() });
        }
        if let Some((index, &value)) =
            values.iter().enumerate().find(|(_, &v)| !(v.is_finite() && v > 0.0))
        {
            return Err(Error::InvalidPayoff { index, value });
        }
        Ok(Payoff { space, values })
    }

    /// Payoff paying `value` on every outcome.
    pub fn constant(space: Arc<OutcomeSpace>, value: f64) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![value; n])
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Fair price `Σ F(x) m(x)` quoted by the market maker.
pub fn price(payoff: &Payoff, m: &Distribution) -> Result<f64> {
    ensure_same_space(&payoff.space, m.space())?;
    Ok(payoff.values.iter().zip(m.mass()).map(|(f, mx)| f * mx).sum())
}

/// What to do with outcomes the believer considers impossible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroBelief {
    /// Substitute this mass (then renormalize) before building the payoff.
    Floor(f64),
    /// Fail with [`Error::ZeroBeliefMass`].
    Reject,
}

impl Default for ZeroBelief {
    fn default() -> Self {
        ZeroBelief::Floor(PAYOFF_FLOOR)
    }
}

/// Utility-maximizing payoff `F = f^{1/R} / Price[f^{1/R}]` with `f = b/m`,
/// flooring zero beliefs at [`PAYOFF_FLOOR`].
pub fn optimal_payoff(b: &Distribution, m: &Distribution, r: RiskAversion) -> Result<Payoff> {
    optimal_payoff_with(b, m, r, ZeroBelief::default())
}

pub fn optimal_payoff_with(
    b: &Distribution,
    m: &Distribution,
    r: RiskAversion,
    zero_belief: ZeroBelief,
) -> Result<Payoff> {
    ensure_same_space(b.space(), m.space())?;
    if let Some(index) = m.first_zero() {
        return Err(Error::ZeroMarketMass { index });
    }
    let floored;
    let b = match (b.first_zero(), zero_belief) {
        (None, _) => b,
        (Some(index), ZeroBelief::Reject) => return Err(Error::ZeroBeliefMass { index }),
        (Some(_), ZeroBelief::Floor(floor)) => {
            floored = b.floored(floor);
            &floored
        }
    };

    let log_ratio: Vec<f64> =
        b.mass().iter().zip(m.mass()).map(|(bx, mx)| bx.ln() - mx.ln()).collect();
    if log_ratio.windows(2).all(|w| w[0] == w[1]) {
        // No disagreement: the only price-1 optimum is the riskless payoff.
        return Payoff::constant(Arc::clone(b.space()), 1.0);
    }

    // Shift exponents by their max before exponentiating; the shift cancels
    // in the normalization.
    let scaled: Vec<f64> = log_ratio.iter().map(|lf| lf / r.value()).collect();
    let top = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = scaled.iter().map(|s| (s - top).exp()).collect();
    let raw_price: f64 = raw.iter().zip(m.mass()).map(|(w, mx)| w * mx).sum();
    Payoff::new(Arc::clone(b.space()), raw.iter().map(|w| w / raw_price).collect())
}

/// Expected logarithmic rate `Σ p(x) ln(F(x) / Price[F])` under `p`.
pub fn expected_rate(payoff: &Payoff, m: &Distribution, p: &Distribution) -> Result<f64> {
    ensure_same_space(&payoff.space, p.space())?;
    let log_price = price(payoff, m)?.ln();
    Ok(payoff
        .values
        .iter()
        .zip(p.mass())
        .filter(|(_, &px)| px > 0.0)
        .map(|(f, px)| px * (f.ln() - log_price))
        .sum())
}

/// CRRA utility: `ln F` for `R = 1`, `F^{1-R} / (1-R)` otherwise.
pub fn crra_utility(value: f64, r: RiskAversion) -> f64 {
    if r.is_kelly() {
        value.ln()
    } else {
        let k = 1.0 - r.value();
        value.powf(k) / k
    }
}

/// `Σ b(x) U(F(x))` for the CRRA utility of `r`.
pub fn expected_utility(payoff: &Payoff, b: &Distribution, r: RiskAversion) -> Result<f64> {
    ensure_same_space(&payoff.space, b.space())?;
    Ok(payoff
        .values
        .iter()
        .zip(b.mass())
        .filter(|(_, &bx)| bx > 0.0)
        .map(|(&f, bx)| bx * crra_utility(f, r))
        .sum())
}

/// Largest deviation of the pairwise log-slope `Δ ln F / Δ ln f` from `1/R`,
/// over all outcome pairs with distinct belief ratios.
pub fn elasticity_residual(
    payoff: &Payoff,
    b: &Distribution,
    m: &Distribution,
    r: RiskAversion,
) -> Result<f64> {
    ensure_same_space(b.space(), m.space())?;
    ensure_same_space(&payoff.space, m.space())?;
    if let Some(index) = m.first_zero() {
        return Err(Error::ZeroMarketMass { index });
    }
    if let Some(index) = b.first_zero() {
        return Err(Error::ZeroBeliefMass { index });
    }
    let log_ratio: Vec<f64> =
        b.mass().iter().zip(m.mass()).map(|(bx, mx)| (bx / mx).ln()).collect();
    let log_payoff: Vec<f64> = payoff.values.iter().map(|f| f.ln()).collect();
    let target = r.order();

    let mut worst: Option<f64> = None;
    for x in 0..log_ratio.len() {
        for y in x + 1..log_ratio.len() {
            let dlf = log_ratio[x] - log_ratio[y];
            if dlf == 0.0 {
                continue;
            }
            let slope = (log_payoff[x] - log_payoff[y]) / dlf;
            let dev = (slope - target).abs();
            worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
        }
    }
    worst.ok_or(Error::DegenerateRatio)
}
