//! Rényi divergences, relative entropy, disagreement profiles and
//! φ-divergences. All values are in nats.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::distribution::{ensure_same_space, Distribution};
use crate::error::{Error, Result};

/// A divergence value in nats: finite and nonnegative, or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtendedRate(f64);

impl ExtendedRate {
    pub const ZERO: ExtendedRate = ExtendedRate(0.0);
    pub const INFINITY: ExtendedRate = ExtendedRate(f64::INFINITY);

    /// Wraps a finite value. Tiny negative values produced by rounding are
    /// clamped to zero.
    pub(crate) fn finite(value: f64) -> Self {
        debug_assert!(value.is_finite(), "{value}");
        ExtendedRate(value.max(0.0))
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Value in nats (`f64::INFINITY` for the infinite case).
    pub fn nats(self) -> f64 {
        self.0
    }

    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

impl fmt::Display for ExtendedRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtendedRate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

/// Rényi divergence of order `alpha` of `b` from `m`.
///
/// Zero-mass conventions: outcomes with `b(x) = 0` contribute nothing. An
/// outcome with `b(x) > 0` and `m(x) = 0` makes the result `+inf` for
/// `alpha >= 1` and contributes nothing for `alpha < 1`; if nothing is left
/// (disjoint supports) the result is `+inf`.
pub fn renyi_divergence(b: &Distribution, m: &Distribution, alpha: f64) -> Result<ExtendedRate> {
    ensure_same_space(b.space(), m.space())?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    if alpha == 1.0 {
        return Ok(kullback_leibler(b, m));
    }

    // (b(x), ln f(x)) over the outcomes that contribute; `dropped` is the
    // belief mass sitting where the market has none (only reachable for
    // alpha < 1).
    let mut terms = Vec::with_capacity(b.len());
    let mut dropped = 0.0;
    for (&bx, &mx) in b.mass().iter().zip(m.mass()) {
        if bx == 0.0 {
            continue;
        }
        if mx == 0.0 {
            if alpha > 1.0 {
                return Ok(ExtendedRate::INFINITY);
            }
            dropped += bx;
            continue;
        }
        terms.push((bx, (bx / mx).ln()));
    }
    if terms.is_empty() {
        return Ok(ExtendedRate::INFINITY);
    }

    let order = alpha - 1.0;
    let max_exponent = terms.iter().map(|&(_, lf)| (order * lf).abs()).fold(0.0, f64::max);
    let log_sum = if max_exponent <= 1.0 {
        // Near alpha = 1 or b ≈ m the sum is 1 + small; accumulate the small
        // part directly so the logarithm keeps its relative precision.
        let excess: f64 = terms.iter().map(|&(bx, lf)| bx * (order * lf).exp_m1()).sum();
        (excess - dropped).ln_1p()
    } else {
        log_sum_exp(terms.iter().map(|&(bx, lf)| bx.ln() + order * lf))
    };
    if log_sum == f64::NEG_INFINITY {
        return Ok(ExtendedRate::INFINITY);
    }
    Ok(ExtendedRate::finite(log_sum / order))
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn kullback_leibler(b: &Distribution, m: &Distribution) -> ExtendedRate {
    let mut total = 0.0;
    for (&bx, &mx) in b.mass().iter().zip(m.mass()) {
        if bx == 0.0 {
            continue;
        }
        if mx == 0.0 {
            return ExtendedRate::INFINITY;
        }
        total += bx * (bx / mx).ln();
    }
    ExtendedRate::finite(total)
}

/// Relative entropy `D₁(b‖m) = Σ b ln(b/m)`, with `0·ln 0 = 0`.
pub fn relative_entropy(b: &Distribution, m: &Distribution) -> Result<ExtendedRate> {
    ensure_same_space(b.space(), m.space())?;
    Ok(kullback_leibler(b, m))
}

/// `D_α(b‖m)` sampled on an increasing grid of orders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceProfile {
    pub alphas: Vec<f64>,
    pub values: Vec<ExtendedRate>,
}

impl DivergenceProfile {
    pub fn iter(&self) -> impl Iterator<Item = (f64, ExtendedRate)> + '_ {
        self.alphas.iter().copied().zip(self.values.iter().copied())
    }
}

pub fn divergence_profile(
    b: &Distribution,
    m: &Distribution,
    alphas: &[f64],
) -> Result<DivergenceProfile> {
    ensure_same_space(b.space(), m.space())?;
    if let Some(&bad) = alphas.iter().find(|&&a| !(a.is_finite() && a > 0.0)) {
        return Err(Error::NonPositiveAlpha(bad));
    }
    if alphas.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::UnsortedAlphas);
    }
    let values = alphas
        .iter()
        .map(|&a| renyi_divergence(b, m, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(DivergenceProfile { alphas: alphas.to_vec(), values })
}

/// `Σ_x b(x)·φ(m(x)/b(x))`.
pub fn phi_divergence<F>(b: &Distribution, m: &Distribution, phi: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    ensure_same_space(b.space(), m.space())?;
    if let Some(index) = b.first_zero() {
        return Err(Error::ZeroBeliefMass { index });
    }
    let mut total = 0.0;
    for (&bx, &mx) in b.mass().iter().zip(m.mass()) {
        let ratio = mx / bx;
        let value = phi(ratio);
        if !value.is_finite() {
            return Err(Error::NonFinitePhi { ratio });
        }
        total += bx * value;
    }
    Ok(total)
}
