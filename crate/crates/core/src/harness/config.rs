use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sample_binomial_cloud, sample_poisson_cloud, PointCloud, Process, Region};
use crate::graphs::Strategy;
use crate::rng::RngSeed;

pub const DEFAULT_EPSILON: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub d: usize,
    pub alpha: f64,
    pub intensity_grid: Vec<f64>,
    pub replicates: usize,
    pub epsilon: f64,
    pub process: Process,
    pub master_seed: u64,
    pub strategy: Strategy,
    /// Replaces `t_n` for every `n` when set. Heights of 1 or more make the
    /// boundary slab the whole cube.
    pub boundary_height: Option<f64>,
}

/// The three horizontal slabs `Γ_n = (g_n, 1]`, `B_n = (0, t_n]` and
/// `I_n = (t_n, g_n]` that partition the cube.
#[derive(Clone, Debug, PartialEq)]
pub struct Slabs {
    pub gamma: Region,
    pub boundary: Region,
    pub intermediate: Region,
}

impl ExperimentConfig {
    pub fn new(d: usize, alpha: f64) -> Self {
        Self {
            d,
            alpha,
            intensity_grid: vec![1e4],
            replicates: 100,
            epsilon: DEFAULT_EPSILON,
            process: Process::Poisson,
            master_seed: 0,
            strategy: Strategy::Indexed,
            boundary_height: None,
        }
    }

    pub fn with_grid(mut self, grid: impl Into<Vec<f64>>) -> Self {
        self.intensity_grid = grid.into();
        self
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidDimension {
                got: 0,
                reason: "dimension must be at least 1",
            });
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::param("alpha", self.alpha, "must be positive and finite"));
        }
        if self.replicates == 0 {
            return Err(Error::param("replicates", 0.0, "need at least one replicate"));
        }
        if self.intensity_grid.is_empty() {
            return Err(Error::InvalidInput("intensity grid is empty".into()));
        }
        let eps_max = 1.0 / (2.0 * self.d as f64);
        if !(self.epsilon > 0.0 && self.epsilon < eps_max) {
            return Err(Error::param("epsilon", self.epsilon, "must lie in (0, 1/(2d))"));
        }
        if let Some(h) = self.boundary_height {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::param("boundary_height", h, "must be positive and finite"));
            }
        }
        for &n in &self.intensity_grid {
            if !(n >= 1.0 && n.is_finite()) {
                return Err(Error::param("n", n, "grid values must be finite and at least 1"));
            }
            if self.process == Process::Binomial && n.fract() != 0.0 {
                return Err(Error::param("n", n, "binomial point counts must be integers"));
            }
            if self.boundary_height.is_none() && n > 1.0 && !(self.t_n(n) < self.g_n(n) && self.g_n(n) < 1.0) {
                return Err(Error::param(
                    "epsilon",
                    self.epsilon,
                    "need t_n < g_n < 1 on the whole grid",
                ));
            }
        }
        Ok(())
    }

    /// `n^{ε - 1/d}`.
    pub fn g_n(&self, n: f64) -> f64 {
        n.powf(self.epsilon - 1.0 / self.d as f64)
    }

    /// `n^{-1/2 - ε}`, or the configured override.
    pub fn t_n(&self, n: f64) -> f64 {
        self.boundary_height.unwrap_or_else(|| n.powf(-0.5 - self.epsilon))
    }

    pub fn slabs(&self, n: f64) -> Result<Slabs> {
        let t = self.t_n(n);
        let g = self.g_n(n).max(t);
        Ok(Slabs {
            gamma: Region::slab(self.d, g, g.max(1.0))?,
            boundary: Region::slab(self.d, 0.0, t)?,
            intermediate: Region::slab(self.d, t, g)?,
        })
    }

    pub fn seed(&self, grid_index: usize, replicate: usize) -> RngSeed {
        RngSeed::replicate(self.master_seed, grid_index, replicate)
    }

    pub fn sample(&self, grid_index: usize, replicate: usize) -> Result<PointCloud> {
        let n = self.intensity_grid[grid_index];
        let seed = self.seed(grid_index, replicate);
        match self.process {
            Process::Poisson => sample_poisson_cloud(n, self.d, seed),
            Process::Binomial => sample_binomial_cloud(n as usize, self.d, seed),
        }
    }
}
