//! Seeded Monte Carlo experiments and the statistics they report.

pub mod config;
pub mod experiments;
pub mod output;
pub mod stats;
pub mod verify;

pub use config::{ExperimentConfig, Slabs, DEFAULT_EPSILON};
pub use experiments::{
    boundary_limit_reference, coupling_experiment, map_replicates, run_longest_edge_experiment,
    run_phase_transition_experiment, run_weight_experiment, weight_scale, CouplingRow, LongestEdgeRow,
    NormalDiagnostics, PhaseOptions, PhaseReport, Regime, RegionMode, Replicate, WeightRow,
};
pub use output::{Format, Table, TableRow};
pub use stats::{
    ks_standard_normal, ks_two_sample, ks_two_sample_critical, ks_two_sample_slices, EmpiricalDistribution,
};
