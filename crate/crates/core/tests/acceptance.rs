//! Acceptance gate: twelve criteria, one PASS/FAIL line each. Exits with
//! status 1 if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use mdst_core::harness::verify::{check_oracle_equivalence, check_record_identity};
use mdst_core::harness::{
    coupling_experiment, ks_two_sample, map_replicates, run_longest_edge_experiment, run_phase_transition_experiment,
    EmpiricalDistribution, ExperimentConfig, PhaseOptions, Regime,
};
use mdst_core::limits::{
    fixed_point_batch, lln_constant, max_dickman_batch, mu_prime, qmax1_batch, recomposed_batch, DickmanMethod, Family,
    DEFAULT_COEFF_TOL, DEFAULT_TAIL_TOL, DICKMAN_MEAN,
};
use mdst_core::{total_weight, NodeKey, Result};

const SEED: u64 = 20_240_601;

struct Verdict {
    passed: bool,
    summary: String,
}

fn verdict(passed: bool, summary: String) -> Result<Verdict> {
    Ok(Verdict { passed, summary })
}

fn relative_error(observed: f64, target: f64) -> f64 {
    (observed - target).abs() / target.abs()
}

/// Scaled mean weight at `n = 1e5` against the law-of-large-numbers
/// constant; also checks the slab decomposition on the fly and returns the
/// worst relative decomposition error.
fn lln_check(d: usize, reps: usize, tol: f64, seed: u64) -> Result<(Verdict, f64)> {
    let config = ExperimentConfig::new(d, 1.0)
        .with_grid(vec![1e5])
        .with_replicates(reps)
        .with_seed(seed);
    config.validate()?;
    let scale = 1e5f64.powf(1.0 / d as f64 - 1.0);
    let rows = map_replicates(&config, 0, |r| {
        let s = config.slabs(r.n)?;
        let w = |reg| total_weight(&r.tree, 1.0, &r.cloud.points, reg);
        let full = w(None)?;
        let parts = w(Some(&s.gamma))? + w(Some(&s.boundary))? + w(Some(&s.intermediate))?;
        Ok((scale * full, (full - parts).abs() / full))
    })?;
    let weights = EmpiricalDistribution::new(rows.iter().map(|r| r.0).collect())?;
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let target = lln_constant(d, 1.0)?;
    let err = relative_error(weights.mean, target);
    let v = Verdict {
        passed: err < tol,
        summary: format!(
            "d={d}, alpha=1, n=1e5, {reps} reps: mean {:.6} (stderr {:.1e}) vs {target:.6}, relative error {:.4} < {tol}",
            weights.mean, weights.stderr, err
        ),
    };
    Ok((v, worst))
}

fn c3_expectation_limit() -> Result<Verdict> {
    let config = ExperimentConfig::new(2, 2.0)
        .with_grid(vec![1e5])
        .with_replicates(100)
        .with_seed(SEED + 3);
    let w = map_replicates(&config, 0, |r| total_weight(&r.tree, 2.0, &r.cloud.points, None))?;
    let weights = EmpiricalDistribution::new(w)?;
    let target = mu_prime(2, 2.0, None)?.value;
    let err = relative_error(weights.mean, target);
    verdict(
        err < 0.10,
        format!(
            "d=2, alpha=2, n=1e5, 100 reps: unscaled mean {:.5} (stderr {:.1e}) vs {target:.6}, relative error {err:.4} < 0.1",
            weights.mean, weights.stderr
        ),
    )
}

fn c4_dickman_constant() -> Result<Verdict> {
    let xs = max_dickman_batch(SEED + 4, 1_000_000, DEFAULT_TAIL_TOL, DickmanMethod::Records)?;
    let d = EmpiricalDistribution::new(xs)?;
    let err = (d.mean - 0.6243299).abs();
    verdict(
        err < 0.005,
        format!(
            "1e6 records draws: mean {:.6} (stderr {:.1e}), |mean - 0.6243299| = {err:.2e} < 0.005; constant {DICKMAN_MEAN}",
            d.mean, d.stderr
        ),
    )
}

fn c5_record_identity() -> Result<Verdict> {
    let c = check_record_identity(10_000, 100, SEED + 5)?;
    verdict(c.passed(), format!("{}: {} failures", c.detail, c.failures))
}

fn c6_coupling() -> Result<Verdict> {
    let mut parts = Vec::new();
    let mut clean = true;
    for d in [2, 3] {
        for alpha in [1.0, 2.0] {
            let config = ExperimentConfig::new(d, alpha)
                .with_grid(vec![1e4])
                .with_replicates(1000)
                .with_seed(SEED + 6);
            let rows = coupling_experiment(&config)?;
            let r = &rows[0];
            clean &= r.clean() && r.replicates == 1000;
            parts.push(format!(
                "d={d} a={alpha}: {}/{} ordered, {} edge violations",
                r.replicates - r.ordering_violations,
                r.replicates,
                r.per_edge_violations
            ));
        }
    }
    verdict(clean, format!("n=1e4, slab t_n: {}", parts.join("; ")))
}

fn c7_oracle() -> Result<Verdict> {
    let c = check_oracle_equivalence(200, 500, SEED + 7)?;
    verdict(c.passed(), format!("{}: {} mismatches", c.detail, c.failures))
}

fn c8_decomposition(worst2: f64, worst3: f64) -> Result<Verdict> {
    let worst = worst2.max(worst3);
    verdict(
        worst < 1e-10,
        format!("replicates of criteria 1 and 2: largest relative error {worst:.2e} < 1e-10"),
    )
}

fn c9_fixed_points() -> Result<Verdict> {
    let count = 100_000;
    let critical = 0.01;
    let mut parts = Vec::new();
    let mut ok = true;
    for alpha in [1.0, 2.0] {
        // at alpha = 1 the tree behind a tolerance of 1e-6 has about 2e6 nodes
        let tol = if alpha == 1.0 { 1e-3 } else { DEFAULT_COEFF_TOL };
        for (fi, family) in [Family::J, Family::H, Family::G].into_iter().enumerate() {
            let base = SEED + 900 + 10 * fi as u64 + alpha as u64;
            let direct = fixed_point_batch(family, alpha, base, count, tol)?;
            let direct = EmpiricalDistribution::new(direct.into_iter().map(|s| s.value).collect())?;
            let recomposed = EmpiricalDistribution::new(recomposed_batch(family, alpha, base + 5_000, count, tol)?)?;
            let ks = ks_two_sample(&direct, &recomposed);
            let z = direct.mean / direct.stderr;
            let pass = ks < critical && z.abs() < 3.0;
            ok &= pass;
            parts.push(format!("{}{alpha}: ks {ks:.4}, z {z:+.2}", family.name()));
        }
    }
    verdict(
        ok,
        format!("1e5 vs 1e5, ks < 0.01, |mean/stderr| < 3: {}", parts.join("; ")),
    )
}

fn c10_max_dickman() -> Result<Verdict> {
    let count = 100_000;
    let direct = max_dickman_batch(SEED + 10, count, DEFAULT_TAIL_TOL, DickmanMethod::Records)?;
    let inner = max_dickman_batch(SEED + 11, count, DEFAULT_TAIL_TOL, DickmanMethod::Records)?;
    let recomposed: Vec<f64> = inner
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let u = NodeKey::root(SEED + 12, i as u64).uniform();
            (1.0 - u).max(u * m)
        })
        .collect();
    let ks = ks_two_sample(
        &EmpiricalDistribution::new(direct)?,
        &EmpiricalDistribution::new(recomposed)?,
    );
    verdict(
        ks < 0.005,
        format!("1e5 records draws vs 1e5 recomposed: ks {ks:.5} < 0.005"),
    )
}

fn c11_phase_transition() -> Result<Verdict> {
    let config = ExperimentConfig::new(2, 1.0)
        .with_grid(vec![1e5])
        .with_replicates(300)
        .with_seed(SEED + 110);
    let options = PhaseOptions::new(vec![0.5, 2.0]);
    let reports = run_phase_transition_experiment(&config, &options)?;
    let gauss = reports
        .iter()
        .find(|r| r.regime == Regime::Gaussian)
        .expect("alpha 0.5 report");
    let boundary = reports
        .iter()
        .find(|r| r.regime == Regime::Boundary)
        .expect("alpha 2 report");
    let normal = gauss.normal.as_ref().expect("normal diagnostics");
    let ks_g = boundary.limit_ks.expect("limit statistic");
    verdict(
        gauss.passed == Some(true) && boundary.passed == Some(true),
        format!(
            "finite-n consistency, n=1e5, 300 reps: alpha=0.5 studentized ks vs normal {:.4} < 0.08 (skew {:+.3}, ex.kurt {:+.3}); alpha=2 ks vs G fixed point {ks_g:.4} < 0.15",
            normal.ks_normal, normal.skewness, normal.excess_kurtosis
        ),
    )
}

fn c12_longest_edge() -> Result<Verdict> {
    let config = ExperimentConfig::new(2, 1.0)
        .with_grid(vec![1e5])
        .with_replicates(500)
        .with_seed(SEED + 120);
    let rows = run_longest_edge_experiment(&config)?;
    let reference = EmpiricalDistribution::new(qmax1_batch(SEED + 130, 100_000))?;
    let ks = ks_two_sample(&rows[0].lengths, &reference);
    verdict(
        ks < 0.1,
        format!(
            "finite-n consistency, n=1e5, 500 reps vs 1e5 limit draws: ks {ks:.4} < 0.1 (means {:.4} vs {:.4})",
            rows[0].lengths.mean, reference.mean
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--list`; only a listing
    // request is honoured
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |id: usize, name: &str, result: Result<Verdict>| {
        let (passed, summary) = match result {
            Ok(v) => (v.passed, v.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "{} [{id:>2}] {name}: {summary} ({:.0}s)",
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    };

    let (c1, w2) = match lln_check(2, 50, 0.03, SEED + 1) {
        Ok((v, w)) => (Ok(v), w),
        Err(e) => (Err(e), f64::INFINITY),
    };
    report(1, "law of large numbers, d=2", c1);
    let (c2, w3) = match lln_check(3, 50, 0.05, SEED + 2) {
        Ok((v, w)) => (Ok(v), w),
        Err(e) => (Err(e), f64::INFINITY),
    };
    report(2, "law of large numbers, d=3", c2);
    report(3, "expectation limit, d=2, alpha=2", c3_expectation_limit());
    report(4, "Dickman constant", c4_dickman_constant());
    report(5, "record identity", c5_record_identity());
    report(6, "boundary coupling", c6_coupling());
    report(7, "oracle equivalence", c7_oracle());
    report(8, "slab decomposition", c8_decomposition(w2, w3));
    report(9, "fixed-point self-consistency", c9_fixed_points());
    report(10, "max-Dickman self-consistency", c10_max_dickman());
    report(11, "phase transition", c11_phase_transition());
    report(12, "longest edge", c12_longest_edge());

    println!(
        "acceptance: {} of 12 passed in {:.0}s",
        12 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
