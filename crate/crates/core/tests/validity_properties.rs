//! Property tests of the exact CDFs and the order checks.

mod common;

use common::*;
use proptest::prelude::*;
use randrep::exact::Effect;
use randrep::replicability::threshold_c;
use randrep::validity::{
    check_stochastic_sandwich, check_theorem2_condition, exact_lfc_cdf, exact_rand_cdf, in_null,
    unit_grid, SandwichRegime,
};
use randrep::{Error, ReplicabilityConfig};

fn column_strategy() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (2usize..=8)
        .prop_flat_map(|s| (Just(s), 2usize..=s, proptest::collection::vec(-0.5f64..0.8, s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_cdfs_are_distribution_functions((s, gamma, theta) in column_strategy()) {
        let cfg = ReplicabilityConfig::with_half(s, gamma).unwrap();
        let col: Vec<Effect> = theta.into_iter().map(Effect::Finite).collect();
        let grid = unit_grid(51);
        for curve in [exact_lfc_cdf(&col, &cfg, 50, &grid).unwrap(), exact_rand_cdf(&col, &cfg, 50, &grid).unwrap()] {
            prop_assert!(curve.is_nondecreasing());
            prop_assert_eq!(curve.values[0], 0.0);
            prop_assert!((curve.values[50] - 1.0).abs() < 1e-12);
            prop_assert!(curve.values.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn null_columns_satisfy_validity_condition((s, gamma, theta) in column_strategy()) {
        let cfg = ReplicabilityConfig::with_half(s, gamma).unwrap();
        let col: Vec<Effect> = theta.into_iter().map(Effect::Finite).collect();
        let c = threshold_c(&cfg);
        let z: Vec<f64> = (0..=40).map(|i| c * i as f64 / 40.0).collect();
        if in_null(&col, &cfg) {
            let r = check_theorem2_condition(&col, &cfg, 50, &z).unwrap();
            prop_assert!(r.holds, "{:?}", r);
            let sw = check_stochastic_sandwich(&col, &cfg, 50, &unit_grid(51)).unwrap();
            prop_assert_eq!(sw.regime, SandwichRegime::Null);
            // F_rand <= identity is the validity of the randomized p-value
            prop_assert!(sw.upper.holds, "{:?}", sw.upper);
        } else {
            prop_assert!(matches!(check_theorem2_condition(&col, &cfg, 50, &z), Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn moving_an_effect_up_moves_the_cdf_up(
        (s, gamma, theta) in column_strategy(),
        idx in 0usize..8,
        bump in 0.0f64..0.5,
    ) {
        let cfg = ReplicabilityConfig::with_half(s, gamma).unwrap();
        let idx = idx % s;
        let low: Vec<Effect> = theta.iter().copied().map(Effect::Finite).collect();
        let mut high = low.clone();
        high[idx] = Effect::Finite(theta[idx] + bump);
        let grid = unit_grid(21);
        let a = exact_lfc_cdf(&low, &cfg, 50, &grid).unwrap();
        let b = exact_lfc_cdf(&high, &cfg, 50, &grid).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!(y >= &(x - 1e-12));
        }
    }
}

#[test]
fn lfc_configuration_is_uniform_for_every_shape() {
    let grid = unit_grid(101);
    for s in 2..=10 {
        for gamma in 2..=s {
            let cfg = ReplicabilityConfig::with_half(s, gamma).unwrap();
            let col = lfc_configuration(s, gamma);
            let lfc = exact_lfc_cdf(&col, &cfg, 50, &grid).unwrap();
            let rand = exact_rand_cdf(&col, &cfg, 50, &grid).unwrap();
            for ((&t, &a), &b) in grid.iter().zip(&lfc.values).zip(&rand.values) {
                assert!((a - t).abs() < 1e-10 && (b - t).abs() < 1e-10, "s={s} gamma={gamma} t={t}");
            }
        }
    }
}

#[test]
fn figure_one_curves() {
    let cfg = ReplicabilityConfig::with_half(10, 6).unwrap();
    let grid = unit_grid(1000);
    let null = check_stochastic_sandwich(&mixed_null_column(50), &cfg, 50, &grid).unwrap();
    assert_eq!(null.regime, SandwichRegime::Null);
    assert!(null.report.holds, "{:?}", null.report);

    let alt = check_stochastic_sandwich(&shifted_alternative_column(50), &cfg, 50, &grid).unwrap();
    assert_eq!(alt.regime, SandwichRegime::Alternative);
    assert!(alt.upper.holds, "{:?}", alt.upper);
}
