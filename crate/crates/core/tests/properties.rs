use disagree_core::*;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

const R_GRID: [f64; 7] = [0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0];

fn dist(w: &[f64]) -> Distribution {
    make_distribution(w, true).unwrap()
}

/// Strictly positive distributions sharing a space of 2 to 6 outcomes.
fn pair() -> impl Strategy<Value = (Distribution, Distribution)> {
    (2usize..=6).prop_flat_map(|n| {
        (prop::collection::vec(1e-3f64..1.0, n), prop::collection::vec(1e-3f64..1.0, n))
            .prop_map(|(b, m)| (dist(&b), dist(&m)))
    })
}

fn triple() -> impl Strategy<Value = (Distribution, Distribution, Distribution)> {
    (2usize..=6).prop_flat_map(|n| {
        (
            prop::collection::vec(1e-3f64..1.0, n),
            prop::collection::vec(1e-3f64..1.0, n),
            prop::collection::vec(1e-3f64..1.0, n),
        )
            .prop_map(|(p, b, m)| (dist(&p), dist(&b), dist(&m)))
    })
}

/// Direct evaluation of the defining sum, no log-domain tricks.
fn naive_renyi(b: &[f64], m: &[f64], alpha: f64) -> f64 {
    if alpha == 1.0 {
        return b.iter().zip(m).filter(|(x, _)| **x > 0.0).map(|(x, y)| x * (x / y).ln()).sum();
    }
    let s: f64 = b.iter().zip(m).filter(|(x, _)| **x > 0.0).map(|(x, y)| x.powf(alpha) * y.powf(1.0 - alpha)).sum();
    s.ln() / (alpha - 1.0)
}

/// Random price-1 payoff: positive values rescaled by their price.
fn feasible_payoff(raw: &[f64], m: &Distribution) -> Payoff {
    let p: f64 = raw.iter().zip(m.mass()).map(|(a, b)| a * b).sum();
    Payoff::new(m.space().clone(), raw.iter().map(|v| v / p).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ratio_reconstructs_belief((b, m) in pair()) {
        let f = belief_ratio(&b, &m).unwrap();
        for ((fx, mx), bx) in f.values().iter().zip(m.mass()).zip(b.mass()) {
            prop_assert!((fx * mx - bx).abs() <= 1e-12);
        }
    }

    #[test]
    fn divergence_nonnegative_and_zero_on_identity((b, m) in pair(), alpha in 0.05f64..8.0) {
        let d = renyi_divergence(&b, &m, alpha).unwrap();
        prop_assert!(d.nats() >= 0.0);
        prop_assert_eq!(renyi_divergence(&b, &b, alpha).unwrap().nats(), 0.0);
        if b.mass().iter().zip(m.mass()).any(|(x, y)| (x - y).abs() > 1e-3) {
            prop_assert!(d.nats() > 0.0);
        }
    }

    #[test]
    fn divergence_nondecreasing_in_order(
        (b, m) in pair(),
        mut alphas in prop::collection::vec(0.05f64..6.0, 2..12),
    ) {
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        let profile = divergence_profile(&b, &m, &alphas).unwrap();
        for w in profile.values.windows(2) {
            prop_assert!(w[0].nats() <= w[1].nats() + 1e-12, "{:?}", w);
        }
    }

    #[test]
    fn continuous_at_order_one((b, m) in pair()) {
        let kl = relative_entropy(&b, &m).unwrap().nats();
        for alpha in [1.0 - 1e-6, 1.0 + 1e-6] {
            prop_assert!((renyi_divergence(&b, &m, alpha).unwrap().nats() - kl).abs() <= 1e-4);
        }
    }

    #[test]
    fn matches_naive_sum_on_rational_masses(
        (bw, mw) in (2usize..=5).prop_flat_map(|n| (
            prop::collection::vec(1u32..=20, n),
            prop::collection::vec(1u32..=20, n),
        )),
        alpha in prop::sample::select(vec![0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 3.0, 5.0]),
    ) {
        let b: Vec<f64> = bw.iter().map(|&x| x as f64).collect();
        let m: Vec<f64> = mw.iter().map(|&x| x as f64).collect();
        let (b, m) = (dist(&b), dist(&m));
        let fast = renyi_divergence(&b, &m, alpha).unwrap().nats();
        let slow = naive_renyi(b.mass(), m.mass(), alpha);
        prop_assert!((fast - slow).abs() <= 1e-12, "{fast} vs {slow}");
    }

    #[test]
    fn optimal_payoff_priced_at_one_and_elastic(
        (b, m) in pair(),
        r in prop::sample::select(R_GRID.to_vec()),
    ) {
        let r = RiskAversion::new(r).unwrap();
        let f = optimal_payoff(&b, &m, r).unwrap();
        prop_assert!((price(&f, &m).unwrap() - 1.0).abs() <= 1e-12);
        // close ratios make the slope ill-conditioned; keep them apart
        let ratio = belief_ratio(&b, &m).unwrap();
        let logs: Vec<f64> = ratio.values().iter().map(|v| v.ln()).collect();
        let separated = logs.iter().enumerate().all(|(i, x)| logs[i + 1..].iter().all(|y| (x - y).abs() > 1e-2));
        prop_assume!(separated);
        prop_assert!(elasticity_residual(&f, &b, &m, r).unwrap() <= 1e-12);
    }

    #[test]
    fn kelly_payoff_is_rate_optimal(
        (b, m) in pair(),
        raws in prop::collection::vec(prop::collection::vec(1e-3f64..10.0, 6), 16),
    ) {
        let kl = relative_entropy(&b, &m).unwrap().nats();
        let kelly = optimal_payoff(&b, &m, RiskAversion::KELLY).unwrap();
        prop_assert!((expected_rate(&kelly, &m, &b).unwrap() - kl).abs() <= 1e-12);
        for raw in &raws {
            let g = feasible_payoff(&raw[..m.len()], &m);
            prop_assert!(expected_rate(&g, &m, &b).unwrap() <= kl + 1e-10);
        }
    }

    #[test]
    fn crra_payoff_maximizes_utility(
        (b, m) in pair(),
        r in prop::sample::select(vec![0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0]),
        raws in prop::collection::vec(prop::collection::vec(1e-2f64..10.0, 6), 16),
    ) {
        let r = RiskAversion::new(r).unwrap();
        let best = expected_utility(&optimal_payoff(&b, &m, r).unwrap(), &b, r).unwrap();
        for raw in &raws {
            let g = feasible_payoff(&raw[..m.len()], &m);
            prop_assert!(best >= expected_utility(&g, &b, r).unwrap() - 1e-10);
        }
    }

    #[test]
    fn general_law_matches_direct_rate(
        (p, b, m) in triple(),
        r in prop::sample::select(R_GRID.to_vec()),
    ) {
        let r = RiskAversion::new(r).unwrap();
        let direct = expected_rate(&optimal_payoff(&b, &m, r).unwrap(), &m, &p).unwrap();
        prop_assert!((general_rate_law(&p, &b, &m, r).unwrap() - direct).abs() <= 1e-10);
    }

    #[test]
    fn kelly_rate_is_the_maximum((b, m) in pair(), r in 0.2f64..5.0) {
        let kelly = expected_rate_closed_form(&b, &m, RiskAversion::KELLY).unwrap();
        let rate = expected_rate_closed_form(&b, &m, RiskAversion::new(r).unwrap()).unwrap();
        prop_assert!(rate <= kelly + 1e-15);
        let disagree = b.mass().iter().zip(m.mass()).any(|(x, y)| (x - y).abs() > 1e-2);
        if disagree && (r - 1.0).abs() >= 0.25 {
            prop_assert!(rate < kelly);
        }
    }

    #[test]
    fn rate_drop_consistent_and_monotone((b, m) in pair()) {
        let kl = relative_entropy(&b, &m).unwrap().nats();
        let mut previous = 0.0;
        for k in 0..=40 {
            let r = RiskAversion::new(1.0 + 0.05 * k as f64).unwrap();
            let drop = rate_drop(&b, &m, r).unwrap();
            let closed = expected_rate_closed_form(&b, &m, r).unwrap();
            prop_assert!(drop >= 0.0);
            prop_assert!((drop - (kl - closed)).abs() <= 1e-12);
            prop_assert!(drop >= previous - 1e-15);
            previous = drop;
        }
    }

    #[test]
    fn implied_risk_aversion_round_trip((b, m) in pair(), r in 1.0f64..=2.5) {
        prop_assume!(b.mass().iter().zip(m.mass()).any(|(x, y)| (x - y).abs() > 0.05));
        let target = expected_rate_closed_form(&b, &m, RiskAversion::new(r).unwrap()).unwrap();
        let got = implied_risk_aversion(&b, &m, target).unwrap().value();
        prop_assert!((got - r).abs() <= 1e-6, "{got} vs {r}");
    }

    #[test]
    fn phi_divergence_anchors((b, m) in pair()) {
        let kl = relative_entropy(&b, &m).unwrap().nats();
        prop_assert!((phi_divergence(&b, &m, |u| -u.ln()).unwrap() - kl).abs() <= 1e-12);
        prop_assert!(phi_divergence(&b, &m, |u| u - 1.0).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn market_invariant_under_budget_scaling(
        beliefs in (2usize..=5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(1e-3f64..1.0, n), 1..6)),
        budgets in prop::collection::vec(0.01f64..100.0, 6),
        scale in 1e-3f64..1e3,
    ) {
        let pool: Vec<Investor> = beliefs.iter().zip(&budgets)
            .enumerate()
            .map(|(i, (w, &budget))| Investor::new(format!("i{i}"), dist(w), RiskAversion::KELLY, budget).unwrap())
            .collect();
        let scaled: Vec<Investor> = pool.iter().cloned().map(|mut i| { i.budget *= scale; i }).collect();
        let m = form_market(&pool).unwrap();
        let ms = form_market(&scaled).unwrap();
        prop_assert!((m.mass().iter().sum::<f64>() - 1.0).abs() <= 1e-15);
        for (x, y) in m.mass().iter().zip(ms.mass()) {
            prop_assert!((x - y).abs() <= 1e-15);
        }

        let rates = per_investor_rates(&pool, &m, &m).unwrap();
        let total: f64 = pool.iter().map(|i| i.budget).sum();
        let weighted: f64 = pool.iter().zip(&rates).map(|(i, (_, r))| i.budget / total * r).sum();
        prop_assert!(weighted <= 1e-15);
        for (inv, (_, rate)) in pool.iter().zip(&rates) {
            let want = -relative_entropy(&m, &inv.belief).unwrap().nats();
            prop_assert!((rate - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn binary_log_ratio_is_a_corollary(b_in in 0.01f64..0.99, m_in in 0.01f64..0.99, r in 0.25f64..4.0) {
        let d = BinaryDisagreement::new(b_in, m_in).unwrap();
        let r = RiskAversion::new(r).unwrap();
        let (b, m) = d.to_distributions().unwrap();
        let f = optimal_payoff(&b, &m, r).unwrap();
        let from_payoff = f.values()[0].ln() - f.values()[1].ln();
        let direct = binary_payoff_log_ratio(&d, r);
        prop_assert!((direct - from_payoff).abs() <= 1e-12);
        let kelly = binary_payoff_log_ratio(&d, RiskAversion::KELLY);
        prop_assert!((direct * r.value() - kelly).abs() <= 1e-12);
    }

    #[test]
    fn flat_prior_bayes_reconstruction(b_in in 0.001f64..0.999) {
        let d = BinaryDisagreement::new(b_in, 0.5).unwrap();
        let (f_in, f_out) = likelihood_from_flat_prior(&d).unwrap();
        prop_assert_eq!(f_in * 0.5, b_in);
        prop_assert_eq!(f_out * 0.5, 1.0 - b_in);
    }

    #[test]
    fn accumulation_is_linear(
        first in prop::collection::vec(-2.0f64..2.0, 1..20),
        second in prop::collection::vec(-2.0f64..2.0, 1..20),
    ) {
        let joined: Vec<f64> = first.iter().chain(&second).copied().collect();
        let whole = accumulate_llr(&EvidenceSequence::new(joined).unwrap()).unwrap();
        let head = accumulate_llr(&EvidenceSequence::new(first.clone()).unwrap()).unwrap();
        let offset = *head.last().unwrap();
        // accumulate the tail from the head's endpoint, same summation order
        let tail: Vec<f64> = second.iter().scan(offset, |acc, x| { *acc += x; Some(*acc) }).collect();
        prop_assert_eq!(&whole[..head.len()], &head[..]);
        prop_assert_eq!(&whole[head.len()..], &tail[..]);
    }
}

#[test]
fn rate_curve_nonincreasing_above_kelly() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..200 {
        let (b, m) = pair().new_tree(&mut runner).unwrap().current();
        let grid: Vec<f64> = (0..=20).map(|k| 1.0 + 0.1 * k as f64).collect();
        let curve = rate_curve(&b, &m, &grid).unwrap();
        for w in curve.rates.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }
}

#[test]
fn simulation_dispersion_shrinks_with_more_runs() {
    let b = dist(&[0.6, 0.4]);
    let m = dist(&[0.5, 0.5]);
    let r = RiskAversion::new(2.0).unwrap();
    let predicted = general_rate_law(&b, &b, &m, r).unwrap();
    let inv = Investor::new("bob", b.clone(), r, 1.0).unwrap();
    let spread = |runs: u64| {
        let s = Scenario::new(m.clone(), b.clone(), inv.clone(), runs, 64, 11).unwrap();
        let res = run_repeated_game(&s).unwrap();
        let rms = (res.mean_log_rate.iter().map(|x| (x - predicted).powi(2)).sum::<f64>() / 64.0).sqrt();
        (rms, summarize(&res, predicted).unwrap())
    };
    let (short, short_report) = spread(100);
    let (long, long_report) = spread(10_000);
    assert!(long < short, "{long} !< {short}");
    assert!(short_report.pass && long_report.pass);
}
