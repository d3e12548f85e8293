//! Max-Dickman law `M =d max{1-U, U M}` and the longest-edge limit
//! `Q_max(1) =d max{U M', (1-U) M''}`.

use rand::distr::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::NodeKey;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DickmanMethod {
    /// `max_i (1 - V_i) ∏_{k<i} V_k`, stopped once the product falls below
    /// the tail tolerance; the result is then within that tolerance of the
    /// untruncated maximum.
    Records,
    /// `rounds` iterations of `M <- max{1-U, U M}` from `M = 0`.
    Fixpoint { rounds: u32 },
}

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_FIXPOINT_ROUNDS: u32 = 64;

fn check_tail(tail_tol: f64) -> Result<()> {
    if tail_tol > 0.0 && tail_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::param("tail_tol", tail_tol, "must lie in (0, 1)"))
    }
}

fn max_dickman_from<R: Rng>(rng: &mut R, tail_tol: f64, method: DickmanMethod) -> f64 {
    match method {
        DickmanMethod::Records => {
            let mut product = 1.0;
            let mut best = 0.0f64;
            while product >= tail_tol {
                let v: f64 = rng.sample(Open01);
                best = best.max(product * (1.0 - v));
                product *= v;
            }
            best
        }
        DickmanMethod::Fixpoint { rounds } => {
            let mut m = 0.0f64;
            for _ in 0..rounds {
                let u: f64 = rng.sample(Open01);
                m = (1.0 - u).max(u * m);
            }
            m
        }
    }
}

/// One max-Dickman draw; value in `(0, 1]`.
pub fn sample_max_dickman(key: NodeKey, tail_tol: f64, method: DickmanMethod) -> Result<f64> {
    check_tail(tail_tol)?;
    if let DickmanMethod::Fixpoint { rounds: 0 } = method {
        return Err(Error::param("rounds", 0.0, "need at least one round"));
    }
    Ok(max_dickman_from(&mut key.stream(), tail_tol, method))
}

/// Draw `index` of a max-Dickman batch seeded by `seed`.
pub fn max_dickman_draw(seed: u64, index: u64, tail_tol: f64, method: DickmanMethod) -> Result<f64> {
    sample_max_dickman(NodeKey::root(seed, index), tail_tol, method)
}

pub fn max_dickman_batch(seed: u64, count: usize, tail_tol: f64, method: DickmanMethod) -> Result<Vec<f64>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| max_dickman_draw(seed, i, tail_tol, method))
        .collect()
}

/// A `Q_max(1)` draw with its ingredients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QmaxDraw {
    pub value: f64,
    pub split: f64,
    pub left: f64,
    pub right: f64,
}

/// `max{U M', (1-U) M''}` with `U` uniform and `M'`, `M''` independent
/// max-Dickman variables drawn by the records method.
pub fn sample_qmax1(key: NodeKey) -> QmaxDraw {
    let split = key.uniform();
    let left = max_dickman_from(&mut key.child(0).stream(), DEFAULT_TAIL_TOL, DickmanMethod::Records);
    let right = max_dickman_from(&mut key.child(1).stream(), DEFAULT_TAIL_TOL, DickmanMethod::Records);
    QmaxDraw {
        value: (split * left).max((1.0 - split) * right),
        split,
        left,
        right,
    }
}

pub fn qmax1_batch(seed: u64, count: usize) -> Vec<f64> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_qmax1(NodeKey::root(seed, i)).value)
        .collect()
}
