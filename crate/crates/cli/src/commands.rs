//! One function per subcommand. Each maps onto a single library operation
//! and writes CSV or JSON to the supplied writer.

use std::f64::consts::LN_2;
use std::io::Write;

use disagree_core::{
    accumulate_llr, divergence_profile, expected_rate_closed_form, form_market, general_rate_law,
    implied_risk_aversion, is_natural, optimal_payoff, price, rate_curve, rate_drop,
    run_repeated_game, summarize, threshold_decision, Decision, DivergenceProfile,
    EvidenceSequence, Investor, RateCurve, RiskAversion, Scenario as SimScenario, SimResult,
    PAYOFF_FLOOR,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::scenario::Scenario;

pub const PROFILE_HEADER: [&str; 3] = ["alpha", "divergence_nats", "divergence_bits"];
pub const RATE_CURVE_HEADER: [&str; 5] =
    ["R", "alpha", "expected_rate_nats", "rate_drop_nats", "natural"];
pub const PATHS_HEADER: [&str; 4] = ["path", "log_capital", "final_capital", "mean_log_rate"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn from_nats(self, x: f64) -> f64 {
        match self {
            Units::Nats => x,
            Units::Bits => x / LN_2,
        }
    }

    pub fn to_nats(self, x: f64) -> f64 {
        match self {
            Units::Nats => x,
            Units::Bits => x * LN_2,
        }
    }
}

/// Shortest decimal that round-trips; infinities as `inf` / `-inf`.
pub fn format_number(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        x.to_string()
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn grid<'a>(cli: Option<&'a [f64]>, scenario: Option<&'a [f64]>, what: &'static str) -> Result<&'a [f64]> {
    cli.or(scenario).ok_or(CliError::MissingGrid(what))
}

/// Disagreement profile of an investor's belief against the market.
pub fn cmd_profile(
    scenario: &Scenario,
    investor: Option<&str>,
    alphas: Option<&[f64]>,
    out: &mut dyn Write,
) -> Result<DivergenceProfile> {
    let m = scenario.market()?;
    let inv = scenario.investor(investor)?;
    let alphas = grid(alphas, scenario.alpha_grid.as_deref(), "alpha")?;
    let profile = divergence_profile(&inv.belief, &m, alphas)?;

    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROFILE_HEADER)?;
    for (alpha, d) in profile.iter() {
        w.write_record([format_number(alpha), format_number(d.nats()), format_number(d.bits())])?;
    }
    w.flush()?;
    Ok(profile)
}

/// Expected growth rate and rate drop over a grid of risk aversions.
pub fn cmd_rate_curve(
    scenario: &Scenario,
    investor: Option<&str>,
    r_grid: Option<&[f64]>,
    out: &mut dyn Write,
) -> Result<RateCurve> {
    let m = scenario.market()?;
    let inv = scenario.investor(investor)?;
    let r_grid = grid(r_grid, scenario.r_grid.as_deref(), "risk-aversion")?;
    let curve = rate_curve(&inv.belief, &m, r_grid)?;

    let mut w = csv::Writer::from_writer(out);
    w.write_record(RATE_CURVE_HEADER)?;
    for (&r, &rate) in curve.r_values.iter().zip(&curve.rates) {
        let drop = rate_drop(&inv.belief, &m, RiskAversion::new(r)?)?;
        w.write_record([
            format_number(r),
            format_number(1.0 / r),
            format_number(rate),
            format_number(drop),
            is_natural(r).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(curve)
}

#[derive(Debug, Clone, Default)]
pub struct SimulateOptions {
    /// Replaces the scenario's seed.
    pub seed: Option<u64>,
    /// Added to the closed-form prediction before the z-test.
    pub prediction_offset: f64,
    pub units: Units,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub investor: String,
    pub risk_aversion: f64,
    pub n_runs: u64,
    pub n_paths: usize,
    pub seed: u64,
    pub units: Units,
    pub mean_log_rate: f64,
    pub std_error: f64,
    pub predicted_rate: f64,
    pub z_score: f64,
    pub pass: bool,
    pub final_capital_min: f64,
    pub final_capital_max: f64,
}

/// Repeated-game simulation checked against the general rate law.
///
/// Zero beliefs are floored once, and that floored belief drives both the
/// payoff and the prediction.
pub fn cmd_simulate(
    scenario: &Scenario,
    investor: Option<&str>,
    options: &SimulateOptions,
    out: &mut dyn Write,
    paths_out: Option<&mut dyn Write>,
) -> Result<(SimulationReport, SimResult)> {
    let m = scenario.market()?;
    let inv = scenario.investor(investor)?;
    let true_p = scenario.true_distribution()?;
    let spec = scenario.simulation.ok_or(CliError::MissingSimulation)?;
    let seed = options.seed.unwrap_or(spec.seed);

    let belief = inv.belief.floored(PAYOFF_FLOOR);
    let investor = Investor::new(inv.name.clone(), belief.clone(), inv.risk_aversion, inv.budget)?;
    let sim = SimScenario::new(m.clone(), true_p.clone(), investor, spec.n_runs, spec.n_paths, seed)?;
    let result = run_repeated_game(&sim)?;
    let predicted = general_rate_law(true_p, &belief, &m, inv.risk_aversion)? + options.prediction_offset;
    let verdict = summarize(&result, predicted)?;

    let units = options.units;
    let capital = result.final_capital.iter().copied();
    let report = SimulationReport {
        investor: inv.name.clone(),
        risk_aversion: inv.risk_aversion.value(),
        n_runs: result.n_runs,
        n_paths: result.n_paths,
        seed,
        units,
        mean_log_rate: units.from_nats(verdict.mean),
        std_error: units.from_nats(verdict.std_error),
        predicted_rate: units.from_nats(verdict.predicted_rate),
        z_score: verdict.z_score,
        pass: verdict.pass,
        final_capital_min: capital.clone().fold(f64::INFINITY, f64::min),
        final_capital_max: capital.fold(f64::NEG_INFINITY, f64::max),
    };
    write_json(out, &report)?;

    if let Some(paths_out) = paths_out {
        let mut w = csv::Writer::from_writer(paths_out);
        w.write_record(PATHS_HEADER)?;
        for (i, ((l, c), r)) in result
            .log_capital
            .iter()
            .zip(&result.final_capital)
            .zip(&result.mean_log_rate)
            .enumerate()
        {
            w.write_record([i.to_string(), format_number(*l), format_number(*c), format_number(*r)])?;
        }
        w.flush()?;
    }
    Ok((report, result))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarketReport {
    pub outcomes: Vec<String>,
    pub market: Vec<f64>,
    pub budget_weights: Vec<(String, f64)>,
}

/// Market formed by the scenario's Kelly investors. The output is itself a
/// valid scenario document.
pub fn cmd_market(scenario: &Scenario, out: &mut dyn Write) -> Result<MarketReport> {
    let m = form_market(&scenario.investors)?;
    let total: f64 = scenario.investors.iter().map(|i| i.budget).sum();
    let report = MarketReport {
        outcomes: scenario.space.labels().to_vec(),
        market: m.mass().to_vec(),
        budget_weights: scenario.investors.iter().map(|i| (i.name.clone(), i.budget / total)).collect(),
    };
    write_json(out, &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffReport {
    pub outcomes: Vec<String>,
    pub investor: String,
    pub risk_aversion: f64,
    pub payoff: Vec<f64>,
    pub price: f64,
    pub expected_rate: f64,
    pub units: Units,
}

/// Optimal payoff of an investor against the market.
pub fn cmd_payoff(
    scenario: &Scenario,
    investor: Option<&str>,
    units: Units,
    out: &mut dyn Write,
) -> Result<PayoffReport> {
    let m = scenario.market()?;
    let inv = scenario.investor(investor)?;
    let payoff = optimal_payoff(&inv.belief, &m, inv.risk_aversion)?;
    let report = PayoffReport {
        outcomes: scenario.space.labels().to_vec(),
        investor: inv.name.clone(),
        risk_aversion: inv.risk_aversion.value(),
        payoff: payoff.values().to_vec(),
        price: price(&payoff, &m)?,
        expected_rate: units.from_nats(expected_rate_closed_form(&inv.belief, &m, inv.risk_aversion)?),
        units,
    };
    write_json(out, &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub investor: String,
    pub target_rate: f64,
    pub units: Units,
    pub risk_aversion: f64,
}

/// Risk aversion in `[1, 2.5]` at which the investor's belief earns
/// `target` (in `units`) per run.
pub fn cmd_solve_r(
    scenario: &Scenario,
    investor: Option<&str>,
    target: f64,
    units: Units,
    out: &mut dyn Write,
) -> Result<SolveReport> {
    let m = scenario.market()?;
    let inv = scenario.investor(investor)?;
    let r = implied_risk_aversion(&inv.belief, &m, units.to_nats(target))?;
    let report = SolveReport { investor: inv.name.clone(), target_rate: target, units, risk_aversion: r.value() };
    write_json(out, &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeuroReport {
    pub trajectory: Vec<f64>,
    pub theta: f64,
    pub decision: Decision,
}

/// Parses a JSON array of per-shape LLRs.
pub fn parse_evidence(text: &str) -> Result<EvidenceSequence> {
    let values: Vec<f64> = serde_json::from_str(text)?;
    Ok(EvidenceSequence::new(values)?)
}

/// Accumulated evidence and the threshold decision.
pub fn cmd_neuro(evidence: &EvidenceSequence, theta: f64, out: &mut dyn Write) -> Result<NeuroReport> {
    let trajectory = accumulate_llr(evidence)?;
    let decision = threshold_decision(&trajectory, theta)?;
    let report = NeuroReport { trajectory, theta, decision };
    write_json(out, &report)?;
    Ok(report)
}
