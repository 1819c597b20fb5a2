//! Closed-form expected growth rates of CRRA investors, expressed through
//! Rényi divergences, plus the inverse problem and compounding.
//!
//! For an investor with belief `b` and risk aversion `R` facing market `m`,
//! the optimal payoff grows at the expected rate
//!
//! ```text
//! rate(R) = (1/R)·D₁(b‖m) + ((R−1)/R)·D_{1/R}(b‖m)
//! ```
//!
//! nats per run, which peaks at the Kelly investor (`R = 1`). Under an
//! arbitrary outcome distribution `p` the same payoff grows at
//!
//! ```text
//! (1/R)·(D₁(p‖m) − D₁(p‖b)) + ((R−1)/R)·D_{1/R}(b‖m)
//! ```

use serde::Serialize;

use crate::distribution::{ensure_same_space, Distribution};
use crate::divergence::{relative_entropy, renyi_divergence};
use crate::error::{Error, Result};
use crate::portfolio::{RiskAversion, NATURAL_RANGE};

/// Bisection stops after this many halvings.
pub const BISECTION_MAX_ITER: usize = 200;
/// Rate tolerance a recovered risk aversion must meet.
pub const BISECTION_RATE_TOLERANCE: f64 = 1e-10;

fn require_market(m: &Distribution) -> Result<()> {
    match m.first_zero() {
        Some(index) => Err(Error::ZeroMarketMass { index }),
        None => Ok(()),
    }
}

fn require_belief(b: &Distribution) -> Result<()> {
    match b.first_zero() {
        Some(index) => Err(Error::ZeroBeliefMass { index }),
        None => Ok(()),
    }
}

/// `D_{1/R}(b‖m)` term shared by all the laws.
fn risk_term(b: &Distribution, m: &Distribution, r: RiskAversion) -> Result<f64> {
    if r.is_kelly() {
        return Ok(0.0);
    }
    let r = r.value();
    Ok((r - 1.0) / r * renyi_divergence(b, m, 1.0 / r)?.nats())
}

/// Investor-expected growth rate of the optimal payoff, nats per run.
pub fn expected_rate_closed_form(b: &Distribution, m: &Distribution, r: RiskAversion) -> Result<f64> {
    ensure_same_space(b.space(), m.space())?;
    require_market(m)?;
    let kelly = relative_entropy(b, m)?.nats();
    Ok(kelly / r.value() + risk_term(b, m, r)?)
}

/// Growth rate of the optimal payoff for `(b, m, R)` when outcomes are
/// actually drawn from `p`.
pub fn general_rate_law(
    p: &Distribution,
    b: &Distribution,
    m: &Distribution,
    r: RiskAversion,
) -> Result<f64> {
    ensure_same_space(p.space(), m.space())?;
    ensure_same_space(b.space(), m.space())?;
    require_market(m)?;
    require_belief(b)?;
    let edge = relative_entropy(p, m)?.nats() - relative_entropy(p, b)?.nats();
    Ok(edge / r.value() + risk_term(b, m, r)?)
}

/// Shortfall of the CRRA investor's expected rate below the Kelly rate,
/// `(|R−1|/R)·|D₁ − D_{1/R}|`.
pub fn rate_drop(b: &Distribution, m: &Distribution, r: RiskAversion) -> Result<f64> {
    ensure_same_space(b.space(), m.space())?;
    require_market(m)?;
    if r.is_kelly() {
        return Ok(0.0);
    }
    let d1 = relative_entropy(b, m)?.nats();
    let d_order = renyi_divergence(b, m, r.order())?.nats();
    let rv = r.value();
    Ok((rv - 1.0).abs() / rv * (d1 - d_order).abs())
}

/// Expected rate as a function of risk aversion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCurve {
    pub r_values: Vec<f64>,
    pub rates: Vec<f64>,
}

pub fn rate_curve(b: &Distribution, m: &Distribution, r_grid: &[f64]) -> Result<RateCurve> {
    if r_grid.iter().any(|&r| !(r.is_finite() && r > 0.0))
        || r_grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::UnsortedGrid);
    }
    let rates = r_grid
        .iter()
        .map(|&r| expected_rate_closed_form(b, m, RiskAversion::new(r)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(RateCurve { r_values: r_grid.to_vec(), rates })
}

/// Risk aversion in the natural range whose expected rate equals `target`.
///
/// The rate is nonincreasing in `R` over the natural range, so the answer is
/// found by bisection for the left edge of `{R : rate(R) <= target}`. When
/// the curve is flat (e.g. `b = m`) this returns the smallest matching `R`.
pub fn implied_risk_aversion(
    b: &Distribution,
    m: &Distribution,
    target_rate: f64,
) -> Result<RiskAversion> {
    let (lo_r, hi_r) = NATURAL_RANGE;
    let rate_at = |r: f64| expected_rate_closed_form(b, m, RiskAversion::new(r)?);
    let max = rate_at(lo_r)?;
    let min = rate_at(hi_r)?;
    if !target_rate.is_finite()
        || target_rate > max + BISECTION_RATE_TOLERANCE
        || target_rate < min - BISECTION_RATE_TOLERANCE
    {
        return Err(Error::TargetOutOfRange { target: target_rate, min, max });
    }
    if target_rate >= max {
        return RiskAversion::new(lo_r);
    }

    // Invariant: rate(lo) > target >= rate(hi) (up to the tolerance at hi).
    let (mut lo, mut hi) = (lo_r, hi_r);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rate_at(mid)? > target_rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!((rate_at(hi)? - target_rate).abs() <= BISECTION_RATE_TOLERANCE);
    RiskAversion::new(hi)
}

/// Capital multiple after `n_runs` reinvested runs at `rate_per_run` nats.
pub fn compound_growth(rate_per_run: f64, n_runs: u64) -> f64 {
    debug_assert!(n_runs >= 1);
    (n_runs as f64 * rate_per_run).exp()
}
