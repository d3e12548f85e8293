use mdst_core::harness::{
    coupling_experiment, ks_two_sample, run_weight_experiment, EmpiricalDistribution, ExperimentConfig, RegionMode,
};
use proptest::prelude::*;

#[test]
fn moments_match_an_independent_pass() {
    let xs: Vec<f64> = (0..10_000).map(|i| ((i * 7919) % 1000) as f64 / 7.0 + 1e6).collect();
    let d = EmpiricalDistribution::new(xs.clone()).unwrap();
    // Welford's update, computed in a different order from the library
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, &x) in xs.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = m2 / (xs.len() - 1) as f64;
    assert!((d.mean - mean).abs() <= 1e-10 * mean.abs());
    assert!((d.variance - var).abs() <= 1e-10 * var);
}

proptest! {
    #[test]
    fn ks_is_symmetric_and_bounded(
        a in prop::collection::vec(-3.0f64..3.0, 1..80),
        b in prop::collection::vec(-3.0f64..3.0, 1..80),
    ) {
        let (a, b) = (EmpiricalDistribution::new(a).unwrap(), EmpiricalDistribution::new(b).unwrap());
        let ab = ks_two_sample(&a, &b);
        prop_assert_eq!(ab, ks_two_sample(&b, &a));
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ks_two_sample(&a, &a), 0.0);
    }
}

#[test]
fn identical_configs_give_identical_tables() {
    let c = ExperimentConfig::new(2, 1.5)
        .with_grid(vec![1_000.0, 3_000.0])
        .with_replicates(6)
        .with_seed(17);
    let a = serde_json::to_string(&run_weight_experiment(&c, RegionMode::Gamma).unwrap()).unwrap();
    let b = serde_json::to_string(&run_weight_experiment(&c, RegionMode::Gamma).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn planar_lln_at_moderate_n() {
    let c = ExperimentConfig::new(2, 1.0)
        .with_grid(vec![2e4])
        .with_replicates(20)
        .with_seed(5);
    let rows = run_weight_experiment(&c, RegionMode::Full).unwrap();
    let target = 0.5f64.sqrt();
    // finite-n bias is positive and of relative order n^{-1/2}
    assert!(
        (rows[0].weights.mean - target).abs() / target < 0.04,
        "{}",
        rows[0].weights.mean
    );
}

#[test]
fn coupling_difference_shrinks_with_n() {
    let c = ExperimentConfig::new(2, 1.0)
        .with_grid(vec![1e3, 1e4, 1e5])
        .with_replicates(100)
        .with_seed(23);
    let rows = coupling_experiment(&c).unwrap();
    for r in &rows {
        assert!(r.clean(), "{r:?}");
        assert!(r.mean_abs_difference <= r.mean_aggregate_bound + 1e-12);
    }
    for w in rows.windows(2) {
        assert!(w[1].mean_abs_difference < w[0].mean_abs_difference, "{rows:?}");
    }
}
