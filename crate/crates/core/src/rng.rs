//! Random streams.
//!
//! Point clouds draw from ChaCha8 with an explicit 64-bit stream id, so every
//! replicate of an experiment owns an independent, reproducible stream
//! addressed by `(master seed, stream)`.
//!
//! The recursive limit-law samplers instead address randomness by tree
//! position: each node of a recursion tree carries a [`NodeKey`] and derives
//! its uniform and its children's keys by SplitMix64 mixing. Expanding more of
//! a tree (a smaller truncation tolerance) therefore never changes the
//! uniforms already used at shallower nodes.

use rand::distr::Open01;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

/// Address of one ChaCha8 stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }

    /// Stream for replicate `replicate` at grid position `grid_index`.
    pub fn replicate(master: u64, grid_index: usize, replicate: usize) -> Self {
        Self::new(master, ((grid_index as u64) << 32) | replicate as u64)
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for RngSeed {
    fn from(master: u64) -> Self {
        Self::new(master, 0)
    }
}

const UNIFORM_TAG: u64 = 0x5851_f42d_4c95_7f2d;
const CHILD_TAG: u64 = 0x9e37_79b9_7f4a_7c15;

/// Position-addressed randomness for recursion trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeKey(pub u64);

impl NodeKey {
    /// Root key of draw number `index` in a batch seeded by `seed`.
    pub fn root(seed: u64, index: u64) -> Self {
        let mut mix = SplitMix64::seed_from_u64(seed);
        let base = mix.next_u64();
        NodeKey(SplitMix64::seed_from_u64(base ^ index.wrapping_mul(CHILD_TAG)).next_u64())
    }

    pub fn child(self, branch: u64) -> Self {
        let salt = (branch.wrapping_add(1)).wrapping_mul(CHILD_TAG);
        NodeKey(SplitMix64::seed_from_u64(self.0 ^ salt).next_u64())
    }

    /// The node's uniform on the open interval (0,1).
    pub fn uniform(self) -> f64 {
        SplitMix64::seed_from_u64(self.0 ^ UNIFORM_TAG).sample(Open01)
    }

    /// A sequential generator owned by this node, for draws whose count is
    /// not fixed in advance.
    pub fn stream(self) -> SplitMix64 {
        SplitMix64::seed_from_u64(self.0)
    }
}
