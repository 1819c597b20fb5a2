//! JSON scenario documents.
//!
//! ```json
//! {
//!   "outcomes": ["heads", "tails"],
//!   "market": [0.5, 0.5],
//!   "true_distribution": [0.6, 0.4],
//!   "investors": [
//!     {"name": "bob", "belief": [0.6, 0.4], "risk_aversion": 2.0, "budget": 1.0}
//!   ],
//!   "alpha_grid": [0.5, 1.0, 2.0],
//!   "r_grid": [1.0, 1.5, 2.0, 2.5],
//!   "simulation": {"n_runs": 500, "n_paths": 200, "seed": 42}
//! }
//! ```
//!
//! Every array of masses must match the length of `outcomes` and sum to 1
//! within 1e-9, unless `"normalize": true` is set, in which case any
//! nonnegative weights with a positive total are accepted.

use std::path::Path;
use std::sync::Arc;

use disagree_core::{form_market, Distribution, Investor, OutcomeSpace, RiskAversion};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvestorSpec {
    pub name: String,
    pub belief: Vec<f64>,
    #[serde(default = "one")]
    pub risk_aversion: f64,
    #[serde(default = "one")]
    pub budget: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub n_runs: u64,
    pub n_paths: usize,
    pub seed: u64,
}

/// Raw scenario as it appears on disk.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub outcomes: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalize: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub market: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_distribution: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub investors: Vec<InvestorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSpec>,
}

impl ScenarioDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Checks every array against the outcome space and builds the typed
    /// scenario.
    pub fn validate(&self) -> Result<Scenario> {
        let space = OutcomeSpace::new(self.outcomes.iter().cloned())?;
        let mass = |w: &[f64]| Distribution::new(Arc::clone(&space), w, self.normalize);
        let market = self.market.as_deref().map(mass).transpose()?;
        let true_p = self.true_distribution.as_deref().map(mass).transpose()?;
        let investors = self
            .investors
            .iter()
            .map(|spec| {
                Ok(Investor::new(
                    spec.name.clone(),
                    mass(&spec.belief)?,
                    RiskAversion::new(spec.risk_aversion)?,
                    spec.budget,
                )?)
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, inv) in investors.iter().enumerate() {
            if investors[..i].iter().any(|other| other.name == inv.name) {
                return Err(CliError::InvalidArgument(format!("duplicate investor name {:?}", inv.name)));
            }
        }
        if let Some(sim) = &self.simulation {
            if sim.n_runs == 0 || sim.n_paths == 0 {
                return Err(disagree_core::Error::InvalidScenario(
                    "n_runs and n_paths must be at least 1".into(),
                )
                .into());
            }
        }
        Ok(Scenario {
            space,
            market,
            true_p,
            investors,
            alpha_grid: self.alpha_grid.clone(),
            r_grid: self.r_grid.clone(),
            simulation: self.simulation,
        })
    }
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub space: Arc<OutcomeSpace>,
    pub market: Option<Distribution>,
    pub true_p: Option<Distribution>,
    pub investors: Vec<Investor>,
    pub alpha_grid: Option<Vec<f64>>,
    pub r_grid: Option<Vec<f64>>,
    pub simulation: Option<SimulationSpec>,
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        ScenarioDocument::load(path)?.validate()
    }

    /// The explicit market, or the one a pool of Kelly investors forms.
    pub fn market(&self) -> Result<Distribution> {
        if let Some(m) = &self.market {
            return Ok(m.clone());
        }
        if self.investors.is_empty() || self.investors.iter().any(|i| !i.risk_aversion.is_kelly()) {
            return Err(CliError::MissingMarket);
        }
        Ok(form_market(&self.investors)?)
    }

    /// Investor by name; with no name, the only investor.
    pub fn investor(&self, name: Option<&str>) -> Result<&Investor> {
        match name {
            Some(name) => self
                .investors
                .iter()
                .find(|i| i.name == name)
                .ok_or_else(|| CliError::UnknownInvestor(name.to_string())),
            None if self.investors.len() == 1 => Ok(&self.investors[0]),
            None => Err(CliError::AmbiguousInvestor(self.investors.len())),
        }
    }

    pub fn true_distribution(&self) -> Result<&Distribution> {
        self.true_p.as_ref().ok_or(CliError::MissingTrueDistribution)
    }
}
