use chiral_ldp::asymptotics::{converge_table, GridPoint, Theorem};
use chiral_ldp::exact::{log_prob, log_prob_max_ge, log_prob_min_le, log_prob_report};
use chiral_ldp::rates::rate_max_right;
use chiral_ldp::sampler::sample_extremes_independent;
use chiral_ldp::{AlphaRegime, Direction, EnsembleParams, QuadratureSpec, Statistic, TailQuery};
use proptest::prelude::*;

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn monte_carlo_agrees_with_exact_tails() {
    let p = EnsembleParams::new(12, 3).unwrap();
    let draws = sample_extremes_independent(p, 11, 40_000);
    let m = draws.len() as f64;
    for &(x, stat) in &[(1.1, Statistic::MaxSq), (0.05, Statistic::MinSq)] {
        let hits = draws
            .iter()
            .filter(|e| match stat {
                Statistic::MaxSq => e.max >= x,
                Statistic::MinSq => e.min <= x,
            })
            .count() as f64;
        let freq = hits / m;
        let exact = match stat {
            Statistic::MaxSq => log_prob_max_ge(p, x, &q()),
            Statistic::MinSq => log_prob_min_le(p, x, &q()),
        }
        .unwrap()
        .prob();
        let se = (exact * (1.0 - exact) / m).sqrt();
        assert!(
            (freq - exact).abs() <= 5.0 * se,
            "{stat:?} x={x}: {freq} vs {exact}"
        );
    }
}

#[test]
fn report_matches_plain_probability() {
    let p = EnsembleParams::new(30, 4).unwrap();
    let query = TailQuery::new(Statistic::MaxSq, Direction::GE, 1.3).unwrap();
    let r = log_prob_report(p, query, &q()).unwrap();
    assert_eq!(r.log_p, log_prob(p, query, &q()).unwrap());
    assert!(r.max_rel_err <= 1e-9);
    assert!((1..=30).contains(&r.worst_index));
}

#[test]
fn scaled_log_probability_approaches_rate() {
    let rate = rate_max_right(AlphaRegime::Zero, 2.0).unwrap().value;
    let grid: Vec<GridPoint> = [40, 160]
        .iter()
        .map(|&n| GridPoint { n, v: 0, x: 2.0 })
        .collect();
    let rows = converge_table(Theorem::T1Right, &grid, &q()).unwrap();
    for r in &rows {
        assert!((r.rate_target - rate).abs() < 1e-15);
    }
    assert!(rows[1].scaled_gap < rows[0].scaled_gap);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complementary_events_sum_to_one(n in 1usize..40, v in 0usize..60, x in 0.05f64..2.5, max in any::<bool>()) {
        let p = EnsembleParams::new(n, v).unwrap();
        let stat = if max { Statistic::MaxSq } else { Statistic::MinSq };
        let ge = log_prob(p, TailQuery::new(stat, Direction::GE, x).unwrap(), &q()).unwrap();
        let le = log_prob(p, TailQuery::new(stat, Direction::LE, x).unwrap(), &q()).unwrap();
        prop_assert!((ge.prob() + le.prob() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn max_tail_dominates_min_tail(n in 2usize..40, v in 0usize..20, x in 0.1f64..2.0) {
        let p = EnsembleParams::new(n, v).unwrap();
        let max_ge = log_prob(p, TailQuery::new(Statistic::MaxSq, Direction::GE, x).unwrap(), &q()).unwrap();
        let min_ge = log_prob(p, TailQuery::new(Statistic::MinSq, Direction::GE, x).unwrap(), &q()).unwrap();
        prop_assert!(min_ge.ln() <= max_ge.ln() + 1e-12);
    }
}
