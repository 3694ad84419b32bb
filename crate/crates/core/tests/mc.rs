use ardl_core::ardl::BoundsCase;
use ardl_core::mc::{
    simulate_critical_values, size_power_experiment, CritTest, Dgp, DgpKind, TestConfig,
};
use ardl_core::unitroot::{DeterministicCase, IntegrationConfig, LagSelection, TestKind};

fn adf_constant() -> CritTest {
    CritTest::Adf {
        case: DeterministicCase::Constant,
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn critical_values_are_a_function_of_config_and_seed() {
    let one = in_pool(1, || {
        simulate_critical_values(adf_constant(), 100, 500, 9).unwrap()
    });
    let four = in_pool(4, || {
        simulate_critical_values(adf_constant(), 100, 500, 9).unwrap()
    });
    assert_eq!(one, four);
    let other = simulate_critical_values(adf_constant(), 100, 500, 10).unwrap();
    assert_ne!(one.quantiles, other.quantiles);
}

#[test]
fn quantiles_are_monotone() {
    let t = simulate_critical_values(adf_constant(), 100, 1000, 2).unwrap();
    let v: Vec<f64> = t.quantiles.iter().map(|q| q.value).collect();
    assert!(v.windows(2).all(|w| w[0] < w[1]), "{v:?}");

    let b = simulate_critical_values(
        CritTest::Bounds {
            case: BoundsCase::III,
            k: 2,
        },
        200,
        400,
        2,
    )
    .unwrap();
    let mut upper: Vec<(f64, f64)> = b.quantiles.iter().map(|q| (q.level, q.value)).collect();
    upper.sort_by(|a, b| b.0.total_cmp(&a.0));
    assert!(upper.windows(2).all(|w| w[0].1 < w[1].1), "{upper:?}");
    for (lo, hi) in b.lower_bounds.iter().zip(&b.quantiles) {
        assert_eq!(lo.level, hi.level);
        assert!(lo.value < hi.value, "{lo:?} {hi:?}");
    }
}

#[test]
fn doubling_replications_shrinks_standard_error() {
    let mean_se = |reps: usize| {
        (0..6u64)
            .map(|seed| {
                let t = simulate_critical_values(adf_constant(), 100, reps, 100 + seed).unwrap();
                t.quantiles
                    .iter()
                    .find(|q| q.level == 5.0)
                    .unwrap()
                    .std_error
            })
            .sum::<f64>()
            / 6.0
    };
    let ratio = mean_se(8000) / mean_se(4000);
    let target = 0.5f64.sqrt();
    assert!((ratio / target - 1.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn experiments_are_reproducible_and_rates_are_proportions() {
    let test = TestConfig::UnitRoot(IntegrationConfig {
        test: TestKind::Adf,
        case: DeterministicCase::Constant,
        lag_selection: LagSelection::Fixed(1),
        ..IntegrationConfig::default()
    });
    let null = Dgp::new(DgpKind::RandomWalk, 150, 4);
    let alt = Dgp::new(DgpKind::Ar1 { rho: 0.8 }, 150, 4);
    let a = in_pool(1, || {
        size_power_experiment(&test, &null, &alt, 300, 4).unwrap()
    });
    let b = in_pool(3, || {
        size_power_experiment(&test, &null, &alt, 300, 4).unwrap()
    });
    assert_eq!(a, b);
    for s in [&a.null, &a.alternative] {
        assert_eq!(s.replications, 300);
        assert!(s
            .rejection_rates
            .iter()
            .all(|&(_, r)| (0.0..=1.0).contains(&r)));
        assert!(s.rejection_rates.windows(2).all(|w| w[0].1 <= w[1].1));
    }
    assert!(a.alternative.rejection_rates[1].1 > a.null.rejection_rates[1].1);
}
