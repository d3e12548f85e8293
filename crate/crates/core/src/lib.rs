//! Minimal directed spanning trees and online nearest-neighbour graphs on
//! random point clouds: construction, weights, limit laws and Monte Carlo
//! experiments.

pub mod error;
pub mod geometry;
pub mod graphs;
mod grid;
pub mod harness;
pub mod limits;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{Point, PointCloud, PointSet, Process, Region};
pub use graphs::{build_mdst, build_ong, total_weight, DirectedEdge, DirectedGraph, GraphKind, Strategy};
pub use rng::{NodeKey, RngSeed};
