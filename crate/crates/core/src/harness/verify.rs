//! Deterministic property suite over the graph builders.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{sample_binomial_cloud, PointSet};
use crate::graphs::{
    build_mdst, build_ong, build_ong_with, degree_domination_violations, extract_boundary_coupling, max_edge_length,
    ong_max_1d_via_records, ong_running_max, total_weight, verify_coupling_bounds, Strategy,
};
use crate::harness::config::ExperimentConfig;
use crate::rng::RngSeed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub detail: String,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn outcome(name: &str, trials: usize, failures: usize, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        trials,
        failures,
        detail,
    }
}

/// A random instance: dimension 1 to 4, up to `max_n` points; every other
/// instance snaps all but the last coordinate to a coarse lattice so that
/// distance ties occur.
fn random_instance(seed: u64, index: usize, max_n: usize) -> Result<PointSet> {
    let mut rng = RngSeed::new(seed, index as u64).rng();
    let dim = rng.random_range(1..=4);
    let n = rng.random_range(1..=max_n);
    let mut points = sample_binomial_cloud(n, dim, RngSeed::new(seed ^ 0xa5a5, index as u64))?.points;
    if index % 2 == 1 && dim > 1 {
        let rows: Vec<Vec<f64>> = points
            .iter()
            .map(|p| {
                let mut q = p.to_vec();
                for c in &mut q[..dim - 1] {
                    *c = (*c * 8.0).floor() / 8.0;
                }
                q
            })
            .collect();
        points = PointSet::from_rows(dim, &rows)?;
    }
    Ok(points)
}

/// Indexed builders against the quadratic scans, edge for edge.
pub fn check_oracle_equivalence(instances: usize, max_n: usize, seed: u64) -> Result<CheckOutcome> {
    let mismatches = (0..instances)
        .into_par_iter()
        .map(|i| {
            let p = random_instance(seed, i, max_n)?;
            let tree = build_mdst(&p, Strategy::Indexed)?;
            let same_tree = tree == build_mdst(&p, Strategy::Brute)? && tree.is_spanning_tree();
            let same_ong = build_ong_with(&p, Strategy::Indexed) == build_ong_with(&p, Strategy::Brute);
            Ok(usize::from(!same_tree) + usize::from(!same_ong))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome(
        "oracle_equivalence",
        instances,
        mismatches,
        format!("{instances} instances, n <= {max_n}, dims 1-4, tree and on-line graph"),
    ))
}

/// Longest edge of the 0-prefixed 1-d on-line graph against the largest
/// gap between upper records.
pub fn check_record_identity(sequences: usize, len: usize, seed: u64) -> Result<CheckOutcome> {
    let failures = (0..sequences)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngSeed::new(seed, i as u64).rng();
            let values: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
            let mut flat = vec![0.0];
            flat.extend_from_slice(&values);
            let direct = max_edge_length(&build_ong(&PointSet::from_flat(1, flat)?));
            Ok(usize::from(direct != ong_max_1d_via_records(&values)?))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome(
        "record_identity",
        sequences,
        failures,
        format!("{sequences} sequences of length {len}, exact equality"),
    ))
}

/// Slab weights summing to the full weight, relative error below 1e-10.
pub fn check_decomposition(config: &ExperimentConfig) -> Result<CheckOutcome> {
    config.validate()?;
    let mut trials = 0;
    let mut failures = 0;
    let mut worst = 0.0f64;
    for gi in 0..config.intensity_grid.len() {
        let errs = crate::harness::experiments::map_replicates(config, gi, |r| {
            let s = config.slabs(r.n)?;
            let w = |reg| total_weight(&r.tree, config.alpha, &r.cloud.points, reg);
            let full = w(None)?;
            let parts = w(Some(&s.gamma))? + w(Some(&s.boundary))? + w(Some(&s.intermediate))?;
            Ok(if full > 0.0 {
                (full - parts).abs() / full
            } else {
                parts.abs()
            })
        })?;
        trials += errs.len();
        failures += errs.iter().filter(|&&e| e.is_nan() || e >= 1e-10).count();
        worst = errs.iter().copied().fold(worst, f64::max);
    }
    Ok(outcome(
        "decomposition",
        trials,
        failures,
        format!("largest relative error {worst:e}"),
    ))
}

/// Weight ordering and per-edge bound between the slab tree and the on-line
/// graph on its projection.
pub fn check_coupling(config: &ExperimentConfig) -> Result<CheckOutcome> {
    let rows = crate::harness::experiments::coupling_experiment(config)?;
    let trials = rows.iter().map(|r| r.replicates).sum();
    let ordering: usize = rows.iter().map(|r| r.ordering_violations).sum();
    let per_edge: usize = rows.iter().map(|r| r.per_edge_violations).sum();
    Ok(outcome(
        &format!("coupling_d{}_alpha{}", config.d, config.alpha),
        trials,
        ordering + per_edge,
        format!("{ordering} ordering violations, {per_edge} per-edge violations"),
    ))
}

/// Tree in-degrees dominated by suffix on-line in-degrees.
pub fn check_degree_domination(instances: usize, n: usize, seed: u64) -> Result<CheckOutcome> {
    let failures = (0..instances)
        .into_par_iter()
        .map(|i| {
            let dim = 2 + i % 2;
            let p = sample_binomial_cloud(n, dim, RngSeed::new(seed, i as u64))?.points;
            Ok(usize::from(degree_domination_violations(&p)? > 0))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome(
        "degree_domination",
        instances,
        failures,
        format!("{instances} clouds of {n} points, d = 2 and 3"),
    ))
}

/// Doubling, translating and relabelling a cloud transform the tree the
/// same way.
pub fn check_invariances(instances: usize, n: usize, seed: u64) -> Result<CheckOutcome> {
    let failures = (0..instances)
        .into_par_iter()
        .map(|i| {
            let dim = 1 + i % 3;
            let p = sample_binomial_cloud(n, dim, RngSeed::new(seed, i as u64))?.points;
            let tree = build_mdst(&p, Strategy::Indexed)?;
            let mut bad = 0;

            let doubled = build_mdst(&p.scaled(2.0), Strategy::Indexed)?;
            let scaled_ok = tree
                .edges
                .iter()
                .zip(&doubled.edges)
                .all(|(a, b)| a.source == b.source && a.target == b.target && b.length == 2.0 * a.length);
            bad += usize::from(!scaled_ok || tree.edges.len() != doubled.edges.len());

            let shift: Vec<f64> = (0..dim).map(|k| 0.125 + k as f64).collect();
            let moved = build_mdst(&p.translated(&shift)?, Strategy::Indexed)?;
            let moved_ok = tree
                .edges
                .iter()
                .zip(&moved.edges)
                .all(|(a, b)| a.source == b.source && a.target == b.target && (a.length - b.length).abs() < 1e-12);
            bad += usize::from(!moved_ok || tree.edges.len() != moved.edges.len());

            // relabel by reversing the point order
            let reversed: Vec<usize> = (0..n).rev().collect();
            let relabelled = build_mdst(&p.permuted(&reversed), Strategy::Indexed)?;
            let relabel_ok = tree.edges.iter().all(|e| {
                relabelled
                    .edge_from(n - 1 - e.source)
                    .is_some_and(|f| f.target == n - 1 - e.target && f.length == e.length)
            });
            bad += usize::from(!relabel_ok || tree.edges.len() != relabelled.edges.len());
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome(
        "invariances",
        instances * 3,
        failures,
        format!("{instances} clouds of {n} points: doubling, translation, relabelling"),
    ))
}

/// Longest on-line edge never decreases as arrivals are added.
pub fn check_ong_monotone(instances: usize, n: usize, seed: u64) -> Result<CheckOutcome> {
    let failures = (0..instances)
        .into_par_iter()
        .map(|i| {
            let dim = 1 + i % 3;
            let p = sample_binomial_cloud(n, dim, RngSeed::new(seed, i as u64))?.points;
            let running = ong_running_max(&build_ong(&p));
            let mut bad = usize::from(running.windows(2).any(|w| w[1] < w[0]));
            for m in [1, n / 4, n / 2, n] {
                let m = m.max(1);
                let prefix = PointSet::from_flat(dim, p.as_flat()[..m * dim].to_vec())?;
                bad += usize::from(max_edge_length(&build_ong(&prefix)) != running[m - 1]);
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome(
        "ong_monotone",
        instances,
        failures,
        format!("{instances} sequences of {n} arrivals"),
    ))
}

/// Boundary extraction with a tall slab keeps every point; with a thin slab
/// only points at or below the height.
pub fn check_boundary_extraction(instances: usize, n: usize, seed: u64) -> Result<CheckOutcome> {
    let failures = (0..instances)
        .into_par_iter()
        .map(|i| {
            let p = sample_binomial_cloud(n, 2 + i % 2, RngSeed::new(seed, i as u64))?.points;
            let all = extract_boundary_coupling(&p, 1.0)?;
            let thin = extract_boundary_coupling(&p, 0.1)?;
            let expect = (0..n).filter(|&j| p.last_coord(j) <= 0.1).count();
            let report = verify_coupling_bounds(&all.boundary, &all.projected, 1.0)?;
            Ok(usize::from(
                all.beta() != n || thin.beta() != expect || !report.ordering_holds,
            ))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome(
        "boundary_extraction",
        instances,
        failures,
        format!("{instances} clouds of {n} points"),
    ))
}

/// The whole suite. The quick variant keeps every instance at or below 500
/// points.
pub fn run_suite(quick: bool, seed: u64) -> Result<Vec<CheckOutcome>> {
    let scale = if quick { 1 } else { 5 };
    let coupling_n = if quick { 500.0 } else { 1e4 };
    let mut out = vec![
        check_oracle_equivalence(200 * scale, 500, seed)?,
        check_record_identity(10_000, 100, seed)?,
        check_degree_domination(10 * scale, 300, seed)?,
        check_invariances(20 * scale, 400, seed)?,
        check_ong_monotone(20 * scale, 400, seed)?,
        check_boundary_extraction(20 * scale, 300, seed)?,
    ];
    let base = ExperimentConfig::new(2, 1.0)
        .with_grid(vec![if quick { 500.0 } else { 1e4 }])
        .with_replicates(20 * scale)
        .with_seed(seed);
    for d in [2, 3] {
        let mut c = base.clone();
        c.d = d;
        out.push(check_decomposition(&c)?);
        for alpha in [1.0, 2.0] {
            let mut c = c.clone().with_grid(vec![coupling_n]);
            c.alpha = alpha;
            out.push(check_coupling(&c)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for check in run_suite(true, 11).unwrap() {
            assert!(check.passed(), "{check:?}");
        }
    }
}
