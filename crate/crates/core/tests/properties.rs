//! Property tests for the classification, scoring, audit, coherence,
//! portfolio, and simulation invariants.

use proptest::prelude::*;

use riskaudit_core::coherence::{
    check_axiom, AxiomCase, AxiomVerdict, ExpectedLoss, LossProspect,
};
use riskaudit_core::consistency::{audit_matrix, cell_extremes, enumerate_consistent_colorings};
use riskaudit_core::engine::{
    closed_form_eal, exceedance, percentile_loss, simulate, DistributionSpec, EventModel,
    FrequencyModel,
};
use riskaudit_core::portfolio::{
    adversarial_portfolio, detect_inversions, detect_ties, kendall_tau, range_compression,
    true_risk, Period, Portfolio, QuantEvent, Rate,
};
use riskaudit_core::scales::{DistributionKind, NumberAssignment, OrdinalScale, QuantRange};
use riskaudit_core::scheme::{
    combine, problem_u, CombinationRule, OutputCategory, RiskModel, RiskScheme, ThresholdMap,
};

fn table2(kind: DistributionKind) -> OrdinalScale<f64> {
    OrdinalScale::partitioned(
        format!("{kind}"),
        kind,
        QuantRange::closed(0.0, 100.0).unwrap(),
        5,
        None,
        NumberAssignment::Increasing,
    )
    .unwrap()
}

fn all_kinds() -> Vec<OrdinalScale<f64>> {
    vec![
        table2(DistributionKind::Linear),
        table2(DistributionKind::Logarithmic),
        table2(DistributionKind::Gaussian),
        table2(DistributionKind::InverseGaussian),
    ]
}

proptest! {
    /// Partition totality: every in-domain value classifies to exactly one
    /// rank, on every tabulated scale kind.
    #[test]
    fn classification_is_total(value in 0.0f64..=100.0) {
        for scale in all_kinds() {
            let rank = scale.classify(value).unwrap();
            prop_assert!((1..=5).contains(&rank));
            // uniqueness: the bound range of every other rank excludes it
            for other in 1..=5 {
                if other != rank {
                    prop_assert!(!scale.rank_range(other).unwrap().contains(value));
                }
            }
        }
    }

    /// Round trip: values sampled inside a rank's range classify back to it.
    #[test]
    fn rank_range_round_trip(rank in 1usize..=5, t in 0.0f64..1.0) {
        for scale in all_kinds() {
            let range = scale.rank_range(rank).unwrap();
            // respect lo-exclusivity by nudging strictly inside
            let v = if range.lo_inclusive && t == 0.0 {
                range.lo
            } else {
                range.lo + (range.hi - range.lo) * t.max(1e-9)
            };
            prop_assert_eq!(scale.classify(v).unwrap(), rank);
        }
    }

    /// Classification is monotone in the value.
    #[test]
    fn classification_is_monotone(a in 0.0f64..=100.0, b in 0.0f64..=100.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for scale in all_kinds() {
            prop_assert!(scale.classify(lo).unwrap() <= scale.classify(hi).unwrap());
        }
    }

    /// A degenerate interval classifies exactly like its point.
    #[test]
    fn degenerate_interval_matches_point(value in 0.0f64..=100.0) {
        for scale in all_kinds() {
            let ranks = scale.classify_interval(value, value).unwrap();
            prop_assert_eq!(ranks, vec![scale.classify(value).unwrap()]);
        }
    }

    /// Sensitivity never exceeds the relative distance to the farthest
    /// domain boundary and is zero only on inclusive upper boundaries.
    #[test]
    fn boundary_sensitivity_is_bounded(value in 0.01f64..=100.0) {
        for scale in all_kinds() {
            let eps = scale.boundary_sensitivity(value).unwrap();
            let farthest = ((value - 0.0) / value).max((100.0 - value) / value);
            prop_assert!(eps >= 0.0);
            prop_assert!(eps <= farthest + 1e-12);
            let rank = scale.classify(value).unwrap();
            let range = scale.rank_range(rank).unwrap();
            let on_inclusive_hi = range.hi_inclusive && value == range.hi && rank < 5;
            prop_assert_eq!(eps == 0.0, on_inclusive_hi);
        }
    }

    /// Additive combination is permutation-invariant and strictly
    /// increasing in each coordinate; multiplicative is strictly increasing
    /// for positive ratings.
    #[test]
    fn combination_monotonicity(
        ratings in proptest::collection::vec(0.5f64..10.0, 2..5),
        bump in 0.1f64..5.0,
        coord in 0usize..5,
    ) {
        let coord = coord % ratings.len();
        let add = CombinationRule::Additive;
        let mul = CombinationRule::Multiplicative;

        let mut shuffled = ratings.clone();
        shuffled.reverse();
        prop_assert!((combine(&add, &ratings).unwrap() - combine(&add, &shuffled).unwrap()).abs() < 1e-9);

        let mut bumped = ratings.clone();
        bumped[coord] += bump;
        prop_assert!(combine(&add, &bumped).unwrap() > combine(&add, &ratings).unwrap());
        prop_assert!(combine(&mul, &bumped).unwrap() > combine(&mul, &ratings).unwrap());
    }

    /// Categorization is monotone: a higher score never yields a lower
    /// category index.
    #[test]
    fn categorize_is_monotone(a in 0.0f64..=10.0, b in 0.0f64..=10.0) {
        let cats: Vec<OutputCategory> = (1..=3)
            .map(|i| OutputCategory { index: i, label: format!("c{i}"), color: String::new() })
            .collect();
        let map = ThresholdMap::new(vec![
            (3.0, cats[0].clone()),
            (7.0, cats[1].clone()),
            (10.0, cats[2].clone()),
        ])
        .unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(map.categorize(lo).unwrap().index <= map.categorize(hi).unwrap().index);
    }

    /// The rank vector of a scored event is invariant under any strictly
    /// monotone relabeling of the semi-quantitative numbers.
    #[test]
    fn ranks_invariant_under_relabeling(impact in 0.001f64..=99.0, freq in 0.01f64..=1300.0, scale_by in 1.5f64..4.0) {
        let base = problem_u::<f64>();
        let relabeled_factors: Vec<OrdinalScale<f64>> = base
            .factors()
            .iter()
            .map(|f| {
                let levels = f
                    .levels()
                    .iter()
                    .map(|l| riskaudit_core::scales::RankLevel {
                        index: l.index,
                        label: l.label.clone(),
                        semi_quant: l.semi_quant * scale_by + 1.0, // strictly monotone map
                        range: l.range,
                    })
                    .collect();
                OrdinalScale::from_levels(f.name.clone(), f.direction, f.kind, levels).unwrap()
            })
            .collect();
        let relabeled = RiskScheme::new(
            "relabeled",
            relabeled_factors,
            CombinationRule::Multiplicative,
            None,
        )
        .unwrap();
        let lhs = base.score_event(&[impact, freq]).unwrap().ranks;
        let rhs = relabeled.score_event(&[impact, freq]).unwrap().ranks;
        prop_assert_eq!(lhs, rhs);
    }

    /// Cell risk extremes: min <= max, and min is zero exactly for cells
    /// touching an axis.
    #[test]
    fn cell_extreme_bounds(n in 2usize..=6, row in 1usize..=6, col in 1usize..=6) {
        let (row, col) = (row.min(n), col.min(n));
        let cells: Vec<usize> = (0..n * n)
            .map(|i| if i == 0 { 13 % 12 } else if i == n * n - 1 { 3 } else { 2 })
            .collect();
        let grid = riskaudit_core::consistency::ColoringGrid::new(n, n, 3, cells).unwrap();
        let region = grid.cell_region::<f64>(row, col);
        let (min, max) = cell_extremes(&region);
        prop_assert!(min <= max);
        prop_assert_eq!(min == 0.0, row == 1 || col == 1);
    }

    /// Expected loss satisfies every axiom on arbitrary prospects.
    #[test]
    fn expected_loss_axioms_hold(
        probs in proptest::collection::vec(0.05f64..1.0, 1..5),
        losses in proptest::collection::vec(0.0f64..100.0, 5),
        cuts in proptest::collection::vec(0.0f64..1.0, 5),
        alpha in 0.0f64..50.0,
        lambda in prop::sample::select(vec![0.5f64, 2.0, 10.0]),
    ) {
        let total: f64 = probs.iter().sum();
        let x = LossProspect::new(
            probs
                .iter()
                .zip(&losses)
                .map(|(&p, &l)| (p / total, l + 0.01))
                .collect(),
        )
        .unwrap();
        let y = LossProspect::new(
            x.outcomes()
                .iter()
                .zip(&cuts)
                .map(|(&(p, l), &cut)| (p, l * (1.0 - 0.5 * cut)))
                .collect(),
        )
        .unwrap();
        let tol = 1e-9;
        let cases = [
            AxiomCase::relevance(x.clone()).unwrap(),
            AxiomCase::monotonicity(x.clone(), y.clone()).unwrap(),
            AxiomCase::translation(x.clone(), alpha).unwrap(),
            AxiomCase::subadditivity(x.clone(), y),
            AxiomCase::homogeneity(x, lambda).unwrap(),
        ];
        for case in &cases {
            let result = check_axiom(&ExpectedLoss, case, tol).unwrap();
            prop_assert_eq!(result.verdict, AxiomVerdict::Holds,
                "axiom {} violated: {} vs {}", case.axiom, result.lhs, result.rhs);
            // determinism
            let again = check_axiom(&ExpectedLoss, case, tol).unwrap();
            prop_assert_eq!(result, again);
        }
    }

    /// True risk is linear in the impact: doubling the impact doubles the
    /// expected annual loss exactly.
    #[test]
    fn true_risk_is_linear(count in 0.0f64..1000.0, impact in 0.0f64..1000.0) {
        let base = QuantEvent::new("e", Rate::new(count, Period::Week).unwrap(), impact).unwrap();
        let doubled = QuantEvent::new("e2", base.frequency, impact * 2.0).unwrap();
        prop_assert_eq!(2.0 * true_risk(&base), true_risk(&doubled));
    }

    /// Inversion pairs are strictly opposite in both orderings; ties never
    /// appear. Tie-free portfolios relate tau to the inversion count.
    #[test]
    fn inversions_and_tau_are_consistent(
        impacts in proptest::collection::vec(0.001f64..90.0, 2..7),
        freqs in proptest::collection::vec(0.01f64..1300.0, 2..7),
    ) {
        let n = impacts.len().min(freqs.len());
        let events: Vec<QuantEvent<f64>> = impacts
            .iter()
            .zip(&freqs)
            .take(n)
            .enumerate()
            .map(|(i, (&imp, &frq))| {
                QuantEvent::new(format!("e{i}"), Rate::per_year(frq).unwrap(), imp).unwrap()
            })
            .collect();
        let portfolio = Portfolio::new("unit", events).unwrap();
        let model = RiskModel::Scheme(problem_u::<f64>());
        let inversions = detect_inversions(&portfolio, &model).unwrap();
        for inv in &inversions {
            let opposite = (inv.true_risk_a > inv.true_risk_b && inv.score_a < inv.score_b)
                || (inv.true_risk_a < inv.true_risk_b && inv.score_a > inv.score_b);
            prop_assert!(opposite);
        }
        let tau = kendall_tau(&portfolio, &model).unwrap();
        prop_assert_eq!(tau.discordant as usize, inversions.len());
        if tau.tied_risk == 0 && tau.tied_score == 0 {
            let expected = 1.0 - 2.0 * tau.discordant as f64 / tau.total_pairs as f64;
            prop_assert!((tau.tau.unwrap() - expected).abs() < 1e-12);
        }
        // compression ratios are at least 1 wherever finite
        for group in range_compression(&portfolio, &model).unwrap().groups {
            if let Some(ratio) = group.ratio {
                prop_assert!(ratio >= 1.0);
            }
        }
        // tie groups always hide at least two events
        for tie in detect_ties(&portfolio, &model).unwrap() {
            prop_assert!(tie.ids.len() >= 2);
        }
    }

    /// Exceedance is non-increasing in the threshold and percentile loss is
    /// non-decreasing in the percentile.
    #[test]
    fn curve_monotonicity(
        seed in 0u64..500,
        t1 in 0.0f64..400.0,
        t2 in 0.0f64..400.0,
        p1 in 0.01f64..0.99,
        p2 in 0.01f64..0.99,
    ) {
        let model = EventModel::new(
            "m",
            FrequencyModel::Poisson { rate: 1.0 },
            DistributionSpec::Uniform { lo: 0.0, hi: 100.0 },
        )
        .unwrap();
        let curve = simulate(&[model], 400, seed).unwrap();
        let (t_lo, t_hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(exceedance(&curve, t_lo) >= exceedance(&curve, t_hi));
        let (p_lo, p_hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        prop_assert!(percentile_loss(&curve, p_lo).unwrap() <= percentile_loss(&curve, p_hi).unwrap());
    }
}

/// Every grid the enumerator returns passes the full audit (closure).
#[test]
fn enumeration_outputs_pass_audit() {
    for n in 2..=5 {
        for grid in enumerate_consistent_colorings(n, 3).unwrap() {
            assert!(audit_matrix(&grid).pass, "n={n} grid failed its own audit");
        }
    }
}

/// Adversarial portfolios always produce non-positive rank correlation
/// against additive scoring, across 100 seeds and several sizes.
#[test]
fn adversarial_portfolios_never_correlate_positively() {
    let scheme = problem_u::<f64>();
    let additive = RiskModel::Scheme(scheme.with_rule(CombinationRule::Additive).unwrap());
    for seed in 0..100u64 {
        let size = 3 + (seed as usize % 5);
        let portfolio = adversarial_portfolio(&scheme, size, seed).unwrap();
        let tau = kendall_tau(&portfolio, &additive).unwrap();
        let tau = tau.tau.expect("defined for sizes >= 3");
        assert!(tau <= 0.0, "seed {seed} size {size} gave tau {tau}");
    }
}

/// Zero-annihilation finding appears exactly when some rank combination
/// multiplies to zero while another factor sits at its maximum rank.
#[test]
fn zero_annihilation_matches_exhaustive_characterization() {
    let cases: Vec<(Vec<f64>, Vec<f64>)> = vec![
        (vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0]),
        (vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]),
        (vec![1.0, 2.0], vec![0.0, 1.0]),
    ];
    for (xs, ys) in cases {
        let labels_x: Vec<String> = (1..=xs.len()).map(|i| format!("x{i}")).collect();
        let labels_y: Vec<String> = (1..=ys.len()).map(|i| format!("y{i}")).collect();
        let lx: Vec<&str> = labels_x.iter().map(|s| s.as_str()).collect();
        let ly: Vec<&str> = labels_y.iter().map(|s| s.as_str()).collect();
        let scheme = RiskScheme::new(
            "probe",
            vec![
                OrdinalScale::unbound("x", &lx, &xs).unwrap(),
                OrdinalScale::unbound("y", &ly, &ys).unwrap(),
            ],
            CombinationRule::Multiplicative,
            None,
        )
        .unwrap();
        let finding = riskaudit_core::scheme::check_zero_annihilation(&scheme);
        // brute force: zero product with the other factor maxed out
        let mut witness = false;
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                if x * y == 0.0 && (i == xs.len() - 1 || j == ys.len() - 1) {
                    witness = true;
                }
            }
        }
        // a zero anywhere always admits pairing with the other factor's max
        assert_eq!(finding.is_some(), witness);
    }
}

/// Monte-Carlo sample means match the closed-form expected annual loss
/// within four standard errors for at least 99 of 100 seeds.
#[test]
fn monte_carlo_matches_closed_form_across_seeds() {
    let model = EventModel::new(
        "m",
        FrequencyModel::Poisson { rate: 1.0 },
        DistributionSpec::Point(100.0),
    )
    .unwrap();
    let expected = closed_form_eal(&model).unwrap();
    let trials = 100_000;
    let mut hits = 0;
    for seed in 0..100u64 {
        let curve = simulate(&[model.clone()], trials, seed).unwrap();
        let mean = curve.mean();
        let variance = curve
            .samples()
            .iter()
            .map(|&s| (s - mean) * (s - mean))
            .sum::<f64>()
            / (trials as f64 - 1.0);
        let stderr = (variance / trials as f64).sqrt();
        if (mean - expected).abs() <= 4.0 * stderr {
            hits += 1;
        }
    }
    assert!(hits >= 99, "only {hits}/100 seeds within 4 standard errors");
}
