use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sample_poisson_cloud, PointCloud, Region};
use crate::graphs::{
    build_mdst, build_ong, extract_boundary_coupling, max_edge_length, total_weight, verify_coupling_bounds,
    DirectedGraph,
};
use crate::harness::config::ExperimentConfig;
use crate::harness::stats::{ks_standard_normal, ks_two_sample, EmpiricalDistribution};
use crate::limits::fixed_point::{fixed_point_batch, Family, DEFAULT_COEFF_TOL};
use crate::rng::{NodeKey, RngSeed};

/// One replicate: its cloud and directed tree.
pub struct Replicate {
    pub grid_index: usize,
    pub n: f64,
    pub replicate: usize,
    pub cloud: PointCloud,
    pub tree: DirectedGraph,
}

/// Runs `f` on every replicate at grid position `grid_index`, in parallel,
/// and returns the results in replicate order.
pub fn map_replicates<T, F>(config: &ExperimentConfig, grid_index: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Replicate) -> Result<T> + Sync,
{
    let n = config.intensity_grid[grid_index];
    (0..config.replicates)
        .into_par_iter()
        .map(|replicate| {
            let cloud = config.sample(grid_index, replicate)?;
            let tree = build_mdst(&cloud.points, config.strategy)?;
            f(&Replicate {
                grid_index,
                n,
                replicate,
                cloud,
                tree,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionMode {
    Full,
    Gamma,
    Boundary,
    Intermediate,
}

impl RegionMode {
    pub fn name(self) -> &'static str {
        match self {
            RegionMode::Full => "full",
            RegionMode::Gamma => "gamma",
            RegionMode::Boundary => "boundary",
            RegionMode::Intermediate => "intermediate",
        }
    }

    pub fn region(self, config: &ExperimentConfig, n: f64) -> Result<Option<Region>> {
        let slabs = config.slabs(n)?;
        Ok(match self {
            RegionMode::Full => None,
            RegionMode::Gamma => Some(slabs.gamma),
            RegionMode::Boundary => Some(slabs.boundary),
            RegionMode::Intermediate => Some(slabs.intermediate),
        })
    }
}

/// `n^{α/d - 1}` for `α < d`, otherwise 1.
pub fn weight_scale(d: usize, alpha: f64, n: f64) -> f64 {
    if alpha < d as f64 {
        n.powf(alpha / d as f64 - 1.0)
    } else {
        1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightRow {
    pub n: f64,
    pub region: RegionMode,
    pub scale: f64,
    pub weights: EmpiricalDistribution,
}

/// Scaled total weight of the directed tree, restricted to one slab, per
/// grid point.
pub fn run_weight_experiment(config: &ExperimentConfig, mode: RegionMode) -> Result<Vec<WeightRow>> {
    config.validate()?;
    (0..config.intensity_grid.len())
        .map(|gi| {
            let n = config.intensity_grid[gi];
            let region = mode.region(config, n)?;
            let scale = weight_scale(config.d, config.alpha, n);
            let w = map_replicates(config, gi, |r| {
                Ok(scale * total_weight(&r.tree, config.alpha, &r.cloud.points, region.as_ref())?)
            })?;
            Ok(WeightRow {
                n,
                region: mode,
                scale,
                weights: EmpiricalDistribution::new(w)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongestEdgeRow {
    pub n: f64,
    pub lengths: EmpiricalDistribution,
}

/// Longest edge of the directed tree, per grid point.
pub fn run_longest_edge_experiment(config: &ExperimentConfig) -> Result<Vec<LongestEdgeRow>> {
    config.validate()?;
    need_planar(config.d)?;
    (0..config.intensity_grid.len())
        .map(|gi| {
            let lengths = map_replicates(config, gi, |r| Ok(max_edge_length(&r.tree)))?;
            Ok(LongestEdgeRow {
                n: config.intensity_grid[gi],
                lengths: EmpiricalDistribution::new(lengths)?,
            })
        })
        .collect()
}

fn need_planar(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension {
            got: d,
            reason: "this experiment needs dimension at least 2",
        })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `α < d/2`: Gaussian fluctuations.
    Gaussian,
    /// `α = d/2`.
    Critical,
    /// `α > d/2`: fluctuations come from the base of the cube.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseOptions {
    pub alphas: Vec<f64>,
    /// Threshold on the studentized-vs-normal statistic for `α < d/2`.
    pub gaussian_tol: f64,
    /// Threshold on the two-sample statistic against limit draws for `α > d/2`.
    pub boundary_tol: f64,
    pub reference_draws: usize,
    pub coeff_tol: f64,
}

impl PhaseOptions {
    pub fn new(alphas: impl Into<Vec<f64>>) -> Self {
        Self {
            alphas: alphas.into(),
            gaussian_tol: 0.08,
            boundary_tol: 0.15,
            reference_draws: 100_000,
            coeff_tol: DEFAULT_COEFF_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalDiagnostics {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks_normal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub n: f64,
    pub alpha: f64,
    pub regime: Regime,
    /// Weights centered by their per-`n` sample mean.
    pub centered: EmpiricalDistribution,
    pub normal: Option<NormalDiagnostics>,
    /// Two-sample statistic of the centered weights against limit draws.
    pub limit_ks: Option<f64>,
    /// What the limit draws were.
    pub reference: Option<String>,
    /// `None` at `α = d/2`.
    pub passed: Option<bool>,
    /// These are finite-`n` consistency checks of asymptotic statements.
    pub label: &'static str,
}

const REFERENCE_TAG: u64 = 0x7265_6665;

/// Centered draws approximating the boundary limit at exponent `alpha`: the
/// fixed point `G̃_α` when `d = 2`, otherwise centered on-line graph weights
/// on `n`-intensity Poisson clouds in dimension `d - 1`.
pub fn boundary_limit_reference(
    config: &ExperimentConfig,
    grid_index: usize,
    alpha: f64,
    options: &PhaseOptions,
) -> Result<(EmpiricalDistribution, String)> {
    let seed = NodeKey::root(config.master_seed ^ REFERENCE_TAG, grid_index as u64).0;
    if config.d == 2 {
        let draws = fixed_point_batch(Family::G, alpha, seed, options.reference_draws, options.coeff_tol)?;
        let values = draws.into_iter().map(|s| s.value).collect();
        return Ok((
            EmpiricalDistribution::new(values)?,
            format!("G fixed point, {} draws", options.reference_draws),
        ));
    }
    let n = config.intensity_grid[grid_index];
    let k = config.d - 1;
    let weights: Result<Vec<f64>> = (0..options.reference_draws)
        .into_par_iter()
        .map(|i| {
            let cloud = sample_poisson_cloud(n, k, RngSeed::new(seed, i as u64))?;
            total_weight(&build_ong(&cloud.points), alpha, &cloud.points, None)
        })
        .collect();
    Ok((
        EmpiricalDistribution::new(weights?)?.centered(),
        format!(
            "centered on-line graph weight in dimension {k}, {} clouds",
            options.reference_draws
        ),
    ))
}

/// Fluctuations of the total weight at several exponents, sharing clouds.
pub fn run_phase_transition_experiment(config: &ExperimentConfig, options: &PhaseOptions) -> Result<Vec<PhaseReport>> {
    config.validate()?;
    need_planar(config.d)?;
    if options.alphas.is_empty() {
        return Err(Error::InvalidInput("no exponents given".into()));
    }
    for &a in &options.alphas {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::param("alpha", a, "must be positive and finite"));
        }
    }
    let half = config.d as f64 / 2.0;
    let mut reports = Vec::new();
    for gi in 0..config.intensity_grid.len() {
        let n = config.intensity_grid[gi];
        let per_rep = map_replicates(config, gi, |r| {
            options
                .alphas
                .iter()
                .map(|&a| total_weight(&r.tree, a, &r.cloud.points, None))
                .collect::<Result<Vec<f64>>>()
        })?;
        for (ai, &alpha) in options.alphas.iter().enumerate() {
            let weights = EmpiricalDistribution::new(per_rep.iter().map(|w| w[ai]).collect())?;
            let centered = weights.centered();
            let regime = if alpha < half {
                Regime::Gaussian
            } else if alpha > half {
                Regime::Boundary
            } else {
                Regime::Critical
            };
            let normal = (regime != Regime::Boundary).then(|| {
                let z = weights.studentized();
                NormalDiagnostics {
                    skewness: z.skewness(),
                    excess_kurtosis: z.excess_kurtosis(),
                    ks_normal: ks_standard_normal(&z),
                }
            });
            let reference = if regime != Regime::Gaussian {
                Some(boundary_limit_reference(config, gi, alpha, options)?)
            } else {
                None
            };
            let limit_ks = reference.as_ref().map(|(r, _)| ks_two_sample(&centered, r));
            let passed = match regime {
                Regime::Gaussian => normal.as_ref().map(|d| d.ks_normal < options.gaussian_tol),
                Regime::Boundary => limit_ks.map(|k| k < options.boundary_tol),
                Regime::Critical => None,
            };
            reports.push(PhaseReport {
                n,
                alpha,
                regime,
                centered,
                normal,
                limit_ks,
                reference: reference.map(|(_, what)| what),
                passed,
                label: "finite-n consistency",
            });
        }
    }
    Ok(reports)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingRow {
    pub n: f64,
    pub t_n: f64,
    pub replicates: usize,
    /// Replicates where the on-line weight exceeded the tree weight.
    pub ordering_violations: usize,
    /// Edges breaking the per-edge bound, summed over replicates.
    pub per_edge_violations: usize,
    /// Mean of `|tree weight - on-line weight|` on the slab.
    pub mean_abs_difference: f64,
    pub mean_beta: f64,
    pub mean_aggregate_bound: f64,
    pub max_per_edge_excess: Option<f64>,
}

impl CouplingRow {
    pub fn clean(&self) -> bool {
        self.ordering_violations == 0 && self.per_edge_violations == 0
    }
}

/// Compares the tree on the base slab with the on-line graph on its
/// projection, per grid point.
pub fn coupling_experiment(config: &ExperimentConfig) -> Result<Vec<CouplingRow>> {
    config.validate()?;
    need_planar(config.d)?;
    (0..config.intensity_grid.len())
        .map(|gi| {
            let n = config.intensity_grid[gi];
            let t_n = config.t_n(n);
            let reports = (0..config.replicates)
                .into_par_iter()
                .map(|rep| {
                    let cloud = config.sample(gi, rep)?;
                    let c = extract_boundary_coupling(&cloud.points, t_n)?;
                    verify_coupling_bounds(&c.boundary, &c.projected, config.alpha)
                })
                .collect::<Result<Vec<_>>>()?;
            let k = reports.len() as f64;
            Ok(CouplingRow {
                n,
                t_n,
                replicates: reports.len(),
                ordering_violations: reports.iter().filter(|r| !r.ordering_holds).count(),
                per_edge_violations: reports.iter().map(|r| r.per_edge_violations).sum(),
                mean_abs_difference: reports
                    .iter()
                    .map(|r| (r.mdst_weight - r.ong_weight).abs())
                    .sum::<f64>()
                    / k,
                mean_beta: reports.iter().map(|r| r.beta_n as f64).sum::<f64>() / k,
                mean_aggregate_bound: reports.iter().map(|r| r.aggregate_bound).sum::<f64>() / k,
                max_per_edge_excess: reports.iter().filter_map(|r| r.max_per_edge_excess).reduce(f64::max),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(d: usize, alpha: f64) -> ExperimentConfig {
        ExperimentConfig::new(d, alpha)
            .with_grid(vec![2_000.0])
            .with_replicates(8)
            .with_seed(3)
    }

    #[test]
    fn slab_weights_add_up() {
        let c = small(2, 1.0);
        let full = run_weight_experiment(&c, RegionMode::Full).unwrap();
        let parts: Vec<_> = [RegionMode::Gamma, RegionMode::Boundary, RegionMode::Intermediate]
            .iter()
            .map(|&m| run_weight_experiment(&c, m).unwrap())
            .collect();
        // samples are sorted, so compare replicate by replicate directly
        let per_rep = map_replicates(&c, 0, |r| {
            let s = c.slabs(r.n).unwrap();
            let w = |reg: Option<&Region>| total_weight(&r.tree, 1.0, &r.cloud.points, reg).unwrap();
            Ok((
                w(None),
                w(Some(&s.gamma)) + w(Some(&s.boundary)) + w(Some(&s.intermediate)),
            ))
        })
        .unwrap();
        for (f, sum) in per_rep {
            assert!((f - sum).abs() <= 1e-10 * f);
        }
        let total_mean: f64 = parts.iter().map(|p| p[0].weights.mean).sum();
        assert!((total_mean - full[0].weights.mean).abs() < 1e-10);
    }

    #[test]
    fn tall_boundary_equals_full() {
        let mut c = small(2, 1.0);
        c.boundary_height = Some(1.5);
        let full = run_weight_experiment(&c, RegionMode::Full).unwrap();
        let boundary = run_weight_experiment(&c, RegionMode::Boundary).unwrap();
        assert_eq!(full[0].weights.samples(), boundary[0].weights.samples());
    }

    #[test]
    fn reproducible() {
        let c = small(3, 1.0);
        assert_eq!(
            run_weight_experiment(&c, RegionMode::Full).unwrap(),
            run_weight_experiment(&c, RegionMode::Full).unwrap()
        );
    }

    #[test]
    fn longest_edges_lie_inside_the_diameter() {
        let c = small(2, 1.0);
        let rows = run_longest_edge_experiment(&c).unwrap();
        assert!(rows[0].lengths.samples().iter().all(|&l| l > 0.0 && l < 2f64.sqrt()));
        assert!(run_longest_edge_experiment(&small(1, 1.0)).is_err());
    }

    #[test]
    fn phase_reports_by_regime() {
        let c = small(2, 1.0).with_replicates(20);
        let mut opts = PhaseOptions::new(vec![0.5, 1.0, 2.0]);
        opts.reference_draws = 2_000;
        opts.coeff_tol = 1e-3;
        let reports = run_phase_transition_experiment(&c, &opts).unwrap();
        assert_eq!(reports.len(), 3);
        let regimes: Vec<_> = reports.iter().map(|r| r.regime).collect();
        assert_eq!(regimes, vec![Regime::Gaussian, Regime::Critical, Regime::Boundary]);
        for r in &reports {
            assert!(r.centered.mean.abs() < 1e-12);
        }
        assert!(reports[0].limit_ks.is_none() && reports[0].passed.is_some());
        assert!(reports[1].normal.is_some() && reports[1].limit_ks.is_some() && reports[1].passed.is_none());
        assert!(reports[2].normal.is_none() && reports[2].passed.is_some());
    }

    #[test]
    fn coupling_rows_are_clean() {
        for (d, alpha) in [(2, 1.0), (3, 2.0)] {
            let rows = coupling_experiment(&small(d, alpha).with_replicates(30)).unwrap();
            assert!(rows[0].clean(), "{:?}", rows[0]);
        }
    }

    #[test]
    fn coupling_with_whole_cube_slab_respects_the_bound() {
        let mut c = small(2, 1.0).with_grid(vec![300.0]);
        c.boundary_height = Some(1.0);
        let rows = coupling_experiment(&c).unwrap();
        // the constant is 1 at d = 2, alpha = 1, and every rise is below 1
        let bound = rows[0].mean_beta;
        assert!(rows[0].mean_abs_difference <= rows[0].mean_aggregate_bound + 1e-12);
        assert!(rows[0].mean_aggregate_bound <= bound);
    }
}
