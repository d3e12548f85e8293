use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::geometry::{sample_binomial_cloud, unit_ball_volume};
use crate::graphs::{build_ong, total_weight};
use crate::rng::RngSeed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstantName {
    /// Law-of-large-numbers limit of `n^{α/d - 1} L^{d,α}`, `α < d`.
    Lln {
        d: usize,
        alpha: f64,
    },
    /// Limit mean of the 1-d on-line graph weight, `α > 1`.
    Mu1 {
        alpha: f64,
    },
    /// Limit of the expected tree weight for `α >= d`.
    MuPrime {
        d: usize,
        alpha: f64,
    },
    /// Mean directed nearest-neighbour weight in a unit-rate Poisson process,
    /// by quadrature of its tail integral.
    XiMean {
        d: usize,
        alpha: f64,
    },
    TwoOverVd {
        d: usize,
    },
}

impl ConstantName {
    pub fn label(&self) -> &'static str {
        match self {
            ConstantName::Lln { .. } => "lln",
            ConstantName::Mu1 { .. } => "mu1",
            ConstantName::MuPrime { .. } => "mu_prime",
            ConstantName::XiMean { .. } => "xi_mean",
            ConstantName::TwoOverVd { .. } => "two_over_vd",
        }
    }

    pub fn d(&self) -> Option<usize> {
        match *self {
            ConstantName::Lln { d, .. }
            | ConstantName::MuPrime { d, .. }
            | ConstantName::XiMean { d, .. }
            | ConstantName::TwoOverVd { d } => Some(d),
            ConstantName::Mu1 { .. } => None,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            ConstantName::Lln { alpha, .. }
            | ConstantName::Mu1 { alpha }
            | ConstantName::MuPrime { alpha, .. }
            | ConstantName::XiMean { alpha, .. } => Some(alpha),
            ConstantName::TwoOverVd { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitConstant {
    pub name: ConstantName,
    pub value: f64,
    /// Closed form. Non-exact values carry a standard error.
    pub exact: bool,
    pub stderr: Option<f64>,
    pub note: Option<String>,
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension {
            got: d,
            reason: "limit constants are defined for d >= 2",
        })
    } else {
        Ok(())
    }
}

/// `2^{α/d} Γ(1 + α/d) v_d^{-α/d}` for `0 < α < d`.
pub fn lln_constant(d: usize, alpha: f64) -> Result<f64> {
    check_dim(d)?;
    if !(alpha > 0.0 && alpha < d as f64) {
        return Err(Error::param("alpha", alpha, "must lie in (0, d)"));
    }
    let r = alpha / d as f64;
    Ok(2f64.powf(r) * gamma(1.0 + r) * unit_ball_volume(d)?.powf(-r))
}

/// `E[ξ(0; H_1)] = ∫_0^∞ exp(-(v_d/2) s^{d/α}) ds`, by double-exponential
/// quadrature. Agrees with [`lln_constant`] for every `α > 0`.
pub fn xi_mean_quadrature(d: usize, alpha: f64) -> Result<LimitConstant> {
    check_dim(d)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param("alpha", alpha, "must be positive"));
    }
    let half_vd = unit_ball_volume(d)? / 2.0;
    let exponent = d as f64 / alpha;
    // beyond `cut` the integrand is below e^{-60}
    let cut = (60.0 / half_vd).powf(alpha / d as f64);
    let knee = (1.0 / half_vd).powf(alpha / d as f64);
    let f = |s: f64| (-half_vd * s.powf(exponent)).exp();
    let a = quadrature::integrate(f, 0.0, knee, 1e-15);
    let b = quadrature::integrate(f, knee, cut, 1e-15);
    Ok(LimitConstant {
        name: ConstantName::XiMean { d, alpha },
        value: a.integral + b.integral,
        exact: false,
        stderr: Some(a.error_estimate + b.error_estimate),
        note: Some("double-exponential quadrature".into()),
    })
}

/// `μ(1,α) = 2/(α(α+1)) · (1 + 2^{-α}/(α-1))`, `α > 1`.
pub fn mu1(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::param("alpha", alpha, "must exceed 1"));
    }
    Ok(2.0 / (alpha * (alpha + 1.0)) * (1.0 + 2f64.powf(-alpha) / (alpha - 1.0)))
}

fn mu1_note(alpha: f64) -> Option<String> {
    (alpha < 2.0).then(|| "closed form stated for alpha >= 2; value on (1,2) extrapolated".to_string())
}

pub fn mu1_constant(alpha: f64) -> Result<LimitConstant> {
    Ok(LimitConstant {
        name: ConstantName::Mu1 { alpha },
        value: mu1(alpha)?,
        exact: true,
        stderr: None,
        note: mu1_note(alpha),
    })
}

pub fn two_over_vd(d: usize) -> Result<LimitConstant> {
    Ok(LimitConstant {
        name: ConstantName::TwoOverVd { d },
        value: 2.0 / unit_ball_volume(d)?,
        exact: true,
        stderr: None,
        note: None,
    })
}

pub fn lln(d: usize, alpha: f64) -> Result<LimitConstant> {
    Ok(LimitConstant {
        name: ConstantName::Lln { d, alpha },
        value: lln_constant(d, alpha)?,
        exact: true,
        stderr: None,
        note: None,
    })
}

/// Monte Carlo budget for the on-line graph mean limit `μ(k, α)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OngMeanBudget {
    /// Point counts; the two largest are used for extrapolation.
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
}

impl Default for OngMeanBudget {
    fn default() -> Self {
        Self {
            sizes: vec![10_000, 100_000],
            replicates: 100,
            seed: 0x6d75,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OngMeanEstimate {
    pub dim: usize,
    pub alpha: f64,
    /// `(m, mean weight, stderr)` per size, ascending `m`.
    pub by_size: Vec<(usize, f64, f64)>,
    /// Two-point extrapolation assuming the deficit decays as
    /// `m^{1 - α/dim}`.
    pub extrapolated: f64,
    pub stderr: f64,
}

/// Estimates `μ(dim, α) = lim E[O^{dim,α}(U_m)]` for `α > dim` from the mean
/// on-line graph weight on `m` uniform points in `(0,1)^dim`.
pub fn estimate_ong_mean_limit(dim: usize, alpha: f64, budget: &OngMeanBudget) -> Result<OngMeanEstimate> {
    if dim == 0 {
        return Err(Error::InvalidDimension {
            got: 0,
            reason: "dimension must be at least 1",
        });
    }
    if !(alpha > dim as f64 && alpha.is_finite()) {
        return Err(Error::param("alpha", alpha, "the on-line mean limit needs alpha > dim"));
    }
    if budget.replicates < 2 {
        return Err(Error::param("replicates", budget.replicates as f64, "need at least 2"));
    }
    let mut sizes = budget.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 || sizes[0] < 2 {
        return Err(Error::InvalidInput("need two distinct sizes, each at least 2".into()));
    }
    let mut by_size = Vec::with_capacity(sizes.len());
    for (gi, &m) in sizes.iter().enumerate() {
        let weights: Result<Vec<f64>> = (0..budget.replicates)
            .into_par_iter()
            .map(|rep| {
                let cloud = sample_binomial_cloud(m, dim, RngSeed::replicate(budget.seed, gi, rep))?;
                let g = build_ong(&cloud.points);
                total_weight(&g, alpha, &cloud.points, None)
            })
            .collect();
        let weights = weights?;
        let k = weights.len() as f64;
        let mean = weights.iter().sum::<f64>() / k;
        let var = weights.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (k - 1.0);
        by_size.push((m, mean, (var / k).sqrt()));
    }
    let (m1, e1, s1) = by_size[by_size.len() - 2];
    let (m2, e2, s2) = by_size[by_size.len() - 1];
    let r = (m2 as f64 / m1 as f64).powf(1.0 - alpha / dim as f64);
    let extrapolated = (e2 - r * e1) / (1.0 - r);
    let stderr = (s2 * s2 + r * r * s1 * s1).sqrt() / (1.0 - r);
    Ok(OngMeanEstimate {
        dim,
        alpha,
        by_size,
        extrapolated,
        stderr,
    })
}

/// `μ'(d,α) = μ(d-1,α) + 1{α=d} · 2/v_d` for `α >= d`. Exact for `d = 2`;
/// for `d >= 3` the on-line mean limit is estimated by Monte Carlo.
pub fn mu_prime(d: usize, alpha: f64, budget: Option<&OngMeanBudget>) -> Result<LimitConstant> {
    check_dim(d)?;
    if !(alpha >= d as f64 && alpha.is_finite()) {
        return Err(Error::param("alpha", alpha, "must be at least d"));
    }
    let boundary_term = if alpha == d as f64 {
        2.0 / unit_ball_volume(d)?
    } else {
        0.0
    };
    let name = ConstantName::MuPrime { d, alpha };
    if d == 2 {
        return Ok(LimitConstant {
            name,
            value: mu1(alpha)? + boundary_term,
            exact: true,
            stderr: None,
            note: None,
        });
    }
    let default_budget = OngMeanBudget::default();
    let est = estimate_ong_mean_limit(d - 1, alpha, budget.unwrap_or(&default_budget))?;
    let sizes: Vec<String> = est
        .by_size
        .iter()
        .rev()
        .take(2)
        .rev()
        .map(|(m, _, _)| m.to_string())
        .collect();
    Ok(LimitConstant {
        name,
        value: est.extrapolated + boundary_term,
        exact: false,
        stderr: Some(est.stderr),
        note: Some(format!(
            "on-line graph Monte Carlo in dimension {}, extrapolated from m = {}",
            d - 1,
            sizes.join(" and ")
        )),
    })
}

/// Every constant defined at `(d, α)`, cheapest first. `mu_prime` for
/// `d >= 3` is only included when a Monte Carlo budget is supplied.
pub fn constants_table(d: usize, alpha: f64, budget: Option<&OngMeanBudget>) -> Result<Vec<LimitConstant>> {
    check_dim(d)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param("alpha", alpha, "must be positive"));
    }
    let mut out = Vec::new();
    if alpha < d as f64 {
        out.push(lln(d, alpha)?);
    }
    out.push(xi_mean_quadrature(d, alpha)?);
    out.push(two_over_vd(d)?);
    if alpha > 1.0 {
        out.push(mu1_constant(alpha)?);
    }
    if alpha >= d as f64 && (d == 2 || budget.is_some()) {
        out.push(mu_prime(d, alpha, budget)?);
    }
    Ok(out)
}

/// Dickman's constant, the mean of the max-Dickman law.
pub const DICKMAN_MEAN: f64 = 0.624_329_988_543_550_9;

/// `2/π`, the interior term of `μ'(2,2)`.
pub const TWO_OVER_PI: f64 = 2.0 / PI;
