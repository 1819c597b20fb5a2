//! Markets formed spontaneously by a pool of growth-optimizing investors.
//!
//! A pool of Kelly investors with beliefs `b_i` and budgets `w_i` clears at
//! the budget-weighted mixture `m(x) = Σ_i w_i b_i(x) / Σ_k w_k`. Pools with
//! other risk aversions have no closed form and are rejected.

use std::sync::Arc;

use serde::Serialize;

use crate::distribution::{ensure_same_space, Distribution};
use crate::error::{Error, Result};
use crate::performance::general_rate_law;
use crate::portfolio::RiskAversion;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Investor {
    pub name: String,
    pub belief: Distribution,
    pub risk_aversion: RiskAversion,
    pub budget: f64,
}

impl Investor {
    pub fn new(
        name: impl Into<String>,
        belief: Distribution,
        risk_aversion: RiskAversion,
        budget: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::InvalidBudget { name, budget });
        }
        Ok(Investor { name, belief, risk_aversion, budget })
    }

    /// Kelly investor with unit budget.
    pub fn kelly(name: impl Into<String>, belief: Distribution) -> Self {
        Investor { name: name.into(), belief, risk_aversion: RiskAversion::KELLY, budget: 1.0 }
    }
}

fn validate_pool(investors: &[Investor]) -> Result<()> {
    let first = investors.first().ok_or(Error::EmptyPool)?;
    for inv in investors {
        ensure_same_space(first.belief.space(), inv.belief.space())?;
        if !inv.risk_aversion.is_kelly() {
            return Err(Error::UnsupportedRiskAversion {
                name: inv.name.clone(),
                r: inv.risk_aversion.value(),
            });
        }
    }
    Ok(())
}

/// Budget-weighted mixture of the pool's beliefs.
pub fn form_market(investors: &[Investor]) -> Result<Distribution> {
    validate_pool(investors)?;
    let space = Arc::clone(investors[0].belief.space());
    let mut mass = vec![0.0; space.len()];
    for inv in investors {
        for (acc, bx) in mass.iter_mut().zip(inv.belief.mass()) {
            *acc += inv.budget * bx;
        }
    }
    // Normalizing divides by the total budget.
    Distribution::new(space, &mass, true)
}

/// Realized growth rate of each investor's optimal payoff when outcomes
/// follow `true_p`, in pool order.
pub fn per_investor_rates(
    investors: &[Investor],
    m: &Distribution,
    true_p: &Distribution,
) -> Result<Vec<(String, f64)>> {
    validate_pool(investors)?;
    investors
        .iter()
        .map(|inv| {
            let rate = general_rate_law(true_p, &inv.belief, m, inv.risk_aversion)?;
            Ok((inv.name.clone(), rate))
        })
        .collect()
}
