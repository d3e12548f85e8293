//! Samplers for the mean-zero fixed points `J̃_α`, `H̃_α`, `G̃_α`.
//!
//! With `U` uniform, independent copies on the right, `c = 2^{-α}/(α-1)` and
//! `k = (1 + c)/α`:
//!
//! ```text
//! J = min{U,1-U}^α + U^α J' + (1-U)^α J'' + c (U^α + (1-U)^α - 1)
//! H = U^α J + (1-U)^α H' + U^α (1 + c) + ((1-U)^α - 1) k
//! G = U^α H' + (1-U)^α H'' + (U^α + (1-U)^α) k - 2(1 + c)/(α(α+1))
//! ```
//!
//! and at `α = 1` the `c` terms become `½ U log U + ½ (1-U) log(1-U)`, with
//! local terms `min{U,1-U}`, `U/2` and `1/4` for `J`, `H` and `G`.
//!
//! A draw unrolls the recursion into a tree: `J` branches twice, `H` is a chain
//! that spawns one `J` per link, `G` is a root with two `H` chains. Each node
//! carries the product `w` of the coefficients above it, and a subtree is
//! replaced by its mean, zero, once `w < coeff_tol`. The discarded
//! second-moment mass `Σ w²` is reported; for `α >= 1` it is at most
//! `coeff_tol`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::NodeKey;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    J,
    H,
    G,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::J => "J",
            Family::H => "H",
            Family::G => "G",
        }
    }
}

pub const DEFAULT_COEFF_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncationStats {
    pub max_depth: u32,
    /// `Σ w²` over discarded subtrees.
    pub discarded_mass: f64,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSample {
    pub value: f64,
    pub family: Family,
    pub alpha: f64,
    pub truncation_stats: TruncationStats,
}

/// The local (non-recursive) terms of the three equations at one `α`.
#[derive(Clone, Copy, Debug)]
pub struct FixedPointMaps {
    alpha: f64,
    c: f64,
    k: f64,
    mean_shift: f64,
}

#[inline]
fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

impl FixedPointMaps {
    pub fn new(family: Family, alpha: f64) -> Result<Self> {
        let ok = match family {
            Family::J | Family::H => alpha > 0.5,
            Family::G => alpha >= 1.0,
        };
        if !ok || !alpha.is_finite() {
            return Err(Error::param(
                "alpha",
                alpha,
                match family {
                    Family::G => "G is defined for alpha >= 1",
                    _ => "J and H are defined for alpha > 1/2",
                },
            ));
        }
        if alpha == 1.0 {
            return Ok(Self {
                alpha,
                c: 0.0,
                k: 1.0,
                mean_shift: 0.0,
            });
        }
        let c = 2f64.powf(-alpha) / (alpha - 1.0);
        Ok(Self {
            alpha,
            c,
            k: (1.0 + c) / alpha,
            mean_shift: 2.0 * (1.0 + c) / (alpha * (alpha + 1.0)),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `(U^α, (1-U)^α)`.
    #[inline]
    pub fn powers(&self, u: f64) -> (f64, f64) {
        let v = 1.0 - u;
        if self.alpha == 1.0 {
            (u, v)
        } else if self.alpha == 2.0 {
            (u * u, v * v)
        } else {
            (u.powf(self.alpha), v.powf(self.alpha))
        }
    }

    #[inline]
    fn entropy_half(u: f64) -> f64 {
        0.5 * (xlogx(u) + xlogx(1.0 - u))
    }

    #[inline]
    pub fn local_j(&self, u: f64, pu: f64, pv: f64) -> f64 {
        if self.alpha == 1.0 {
            u.min(1.0 - u) + Self::entropy_half(u)
        } else {
            pu.min(pv) + self.c * (pu + pv - 1.0)
        }
    }

    #[inline]
    pub fn local_h(&self, u: f64, pu: f64, pv: f64) -> f64 {
        if self.alpha == 1.0 {
            0.5 * u + Self::entropy_half(u)
        } else {
            pu * (1.0 + self.c) + (pv - 1.0) * self.k
        }
    }

    #[inline]
    pub fn local_g(&self, u: f64, pu: f64, pv: f64) -> f64 {
        if self.alpha == 1.0 {
            0.25 + Self::entropy_half(u)
        } else {
            (pu + pv) * self.k - self.mean_shift
        }
    }

    /// Right-hand side of the `J` equation.
    pub fn recompose_j(&self, u: f64, j1: f64, j2: f64) -> f64 {
        let (pu, pv) = self.powers(u);
        self.local_j(u, pu, pv) + pu * j1 + pv * j2
    }

    /// Right-hand side of the `H` equation.
    pub fn recompose_h(&self, u: f64, j: f64, h: f64) -> f64 {
        let (pu, pv) = self.powers(u);
        self.local_h(u, pu, pv) + pu * j + pv * h
    }

    /// Right-hand side of the `G` equation.
    pub fn recompose_g(&self, u: f64, h1: f64, h2: f64) -> f64 {
        let (pu, pv) = self.powers(u);
        self.local_g(u, pu, pv) + pu * h1 + pv * h2
    }
}

#[derive(Clone, Copy)]
struct Pending {
    family: Family,
    key: NodeKey,
    weight: f64,
    depth: u32,
}

fn check_tol(coeff_tol: f64) -> Result<()> {
    if coeff_tol > 0.0 && coeff_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::param("coeff_tol", coeff_tol, "must lie in (0, 1)"))
    }
}

fn unroll(maps: &FixedPointMaps, root: Pending, coeff_tol: f64) -> (f64, TruncationStats) {
    let mut stats = TruncationStats::default();
    let mut value = 0.0;
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        let w = node.weight;
        if node.family != Family::G && w < coeff_tol {
            stats.discarded_mass += w * w;
            continue;
        }
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(node.depth);
        let u = node.key.uniform();
        let (pu, pv) = maps.powers(u);
        let depth = node.depth + 1;
        let left = |family| Pending {
            family,
            key: node.key.child(0),
            weight: w * pu,
            depth,
        };
        let right = |family| Pending {
            family,
            key: node.key.child(1),
            weight: w * pv,
            depth,
        };
        match node.family {
            Family::J => {
                value += w * maps.local_j(u, pu, pv);
                stack.push(left(Family::J));
                stack.push(right(Family::J));
            }
            Family::H => {
                value += w * maps.local_h(u, pu, pv);
                stack.push(left(Family::J));
                stack.push(right(Family::H));
            }
            Family::G => {
                value += w * maps.local_g(u, pu, pv);
                stack.push(left(Family::H));
                stack.push(right(Family::H));
            }
        }
    }
    (value, stats)
}

/// One draw of the given family from the tree rooted at `key`.
pub fn sample_limit(family: Family, alpha: f64, key: NodeKey, coeff_tol: f64) -> Result<FixedPointSample> {
    let maps = FixedPointMaps::new(family, alpha)?;
    check_tol(coeff_tol)?;
    let root = Pending {
        family,
        key,
        weight: 1.0,
        depth: 0,
    };
    let (value, truncation_stats) = unroll(&maps, root, coeff_tol);
    Ok(FixedPointSample {
        value,
        family,
        alpha,
        truncation_stats,
    })
}

pub fn sample_limit_j(alpha: f64, key: NodeKey, coeff_tol: f64) -> Result<FixedPointSample> {
    sample_limit(Family::J, alpha, key, coeff_tol)
}

pub fn sample_limit_h(alpha: f64, key: NodeKey, coeff_tol: f64) -> Result<FixedPointSample> {
    sample_limit(Family::H, alpha, key, coeff_tol)
}

pub fn sample_limit_g(alpha: f64, key: NodeKey, coeff_tol: f64) -> Result<FixedPointSample> {
    sample_limit(Family::G, alpha, key, coeff_tol)
}

/// `count` independent draws; draw `i` is rooted at `NodeKey::root(seed, i)`.
pub fn fixed_point_batch(
    family: Family,
    alpha: f64,
    seed: u64,
    count: usize,
    coeff_tol: f64,
) -> Result<Vec<FixedPointSample>> {
    FixedPointMaps::new(family, alpha)?;
    check_tol(coeff_tol)?;
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_limit(family, alpha, NodeKey::root(seed, i), coeff_tol))
        .collect()
}

/// Draws of the right-hand side of the family's equation: a fresh uniform
/// combined with independent direct draws of the right-hand variables.
pub fn recomposed_batch(family: Family, alpha: f64, seed: u64, count: usize, coeff_tol: f64) -> Result<Vec<f64>> {
    let maps = FixedPointMaps::new(family, alpha)?;
    check_tol(coeff_tol)?;
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let key = NodeKey::root(seed, i);
            let u = key.uniform();
            let draw = |f, b| sample_limit(f, alpha, key.child(b), coeff_tol).map(|s| s.value);
            Ok(match family {
                Family::J => maps.recompose_j(u, draw(Family::J, 0)?, draw(Family::J, 1)?),
                Family::H => maps.recompose_h(u, draw(Family::J, 0)?, draw(Family::H, 1)?),
                Family::G => maps.recompose_g(u, draw(Family::H, 0)?, draw(Family::H, 1)?),
            })
        })
        .collect()
}
