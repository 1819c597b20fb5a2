//! Seeded Monte Carlo repetition of the betting game.
//!
//! Each path starts with capital 1 and reinvests everything in the same
//! optimal payoff run after run, with outcomes drawn from the true
//! distribution. Path `i` draws from RNG stream `i` of the master seed and
//! paths are reduced in index order, so results do not depend on how many
//! worker threads evaluate them.

use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::{ensure_same_space, Distribution, RngState};
use crate::error::{Error, Result};
use crate::market::Investor;
use crate::portfolio::optimal_payoff;

/// |z| at or below this passes the convergence check.
pub const Z_PASS: f64 = 3.0;
/// Standard errors are floored here so deterministic scenarios (every path
/// identical) still yield a finite z-score.
pub const MIN_STANDARD_ERROR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub market: Distribution,
    pub true_p: Distribution,
    pub investor: Investor,
    pub n_runs: u64,
    pub n_paths: usize,
    pub seed: u64,
}

impl Scenario {
    pub fn new(
        market: Distribution,
        true_p: Distribution,
        investor: Investor,
        n_runs: u64,
        n_paths: usize,
        seed: u64,
    ) -> Result<Self> {
        ensure_same_space(market.space(), true_p.space())?;
        ensure_same_space(market.space(), investor.belief.space())?;
        if let Some(index) = market.first_zero() {
            return Err(Error::ZeroMarketMass { index });
        }
        if n_runs == 0 {
            return Err(Error::InvalidScenario("n_runs must be at least 1".into()));
        }
        if n_paths == 0 {
            return Err(Error::InvalidScenario("n_paths must be at least 1".into()));
        }
        Ok(Scenario { market, true_p, investor, n_runs, n_paths, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub n_runs: u64,
    pub n_paths: usize,
    pub seed: u64,
    /// ln(final capital) per path.
    pub log_capital: Vec<f64>,
    pub final_capital: Vec<f64>,
    /// ln(final capital) / n_runs per path, nats per run.
    pub mean_log_rate: Vec<f64>,
    /// Average of `mean_log_rate` over paths.
    pub mean: f64,
    /// Standard error of `mean`; `None` with a single path.
    pub std_error: Option<f64>,
}

pub fn run_repeated_game(scenario: &Scenario) -> Result<SimResult> {
    let inv = &scenario.investor;
    let payoff = optimal_payoff(&inv.belief, &scenario.market, inv.risk_aversion)?;
    let log_payoff: Vec<f64> = payoff.values().iter().map(|f| f.ln()).collect();
    let true_p = &scenario.true_p;
    let n_runs = scenario.n_runs;

    let log_capital: Vec<f64> = (0..scenario.n_paths)
        .into_par_iter()
        .map(|path| {
            let mut rng = RngState::new(scenario.seed, path as u64);
            (0..n_runs).map(|_| log_payoff[true_p.sample(&mut rng)]).sum()
        })
        .collect();

    let runs = n_runs as f64;
    let mean_log_rate: Vec<f64> = log_capital.iter().map(|l| l / runs).collect();
    let final_capital = log_capital.iter().map(|l| l.exp()).collect();
    let (mean, std_error) = mean_and_std_error(&mean_log_rate);
    Ok(SimResult {
        n_runs,
        n_paths: scenario.n_paths,
        seed: scenario.seed,
        log_capital,
        final_capital,
        mean_log_rate,
        mean,
        std_error,
    })
}

fn mean_and_std_error(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

/// Simulated growth compared against a predicted rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub mean: f64,
    pub std_error: f64,
    pub predicted_rate: f64,
    pub z_score: f64,
    pub pass: bool,
}

pub fn summarize(result: &SimResult, predicted_rate: f64) -> Result<ConvergenceReport> {
    let std_error = result.std_error.ok_or(Error::TooFewPaths(result.n_paths))?;
    let z_score = (result.mean - predicted_rate) / std_error.max(MIN_STANDARD_ERROR);
    Ok(ConvergenceReport {
        mean: result.mean,
        std_error,
        predicted_rate,
        z_score,
        pass: z_score.abs() <= Z_PASS,
    })
}
