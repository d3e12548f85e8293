//! Limit constants and samplers for the limiting distributions.

pub mod constants;
pub mod dickman;
pub mod fixed_point;

pub use constants::{
    constants_table, estimate_ong_mean_limit, lln, lln_constant, mu1, mu1_constant, mu_prime, two_over_vd,
    xi_mean_quadrature, ConstantName, LimitConstant, OngMeanBudget, OngMeanEstimate, DICKMAN_MEAN, TWO_OVER_PI,
};
pub use dickman::{
    max_dickman_batch, max_dickman_draw, qmax1_batch, sample_max_dickman, sample_qmax1, DickmanMethod, QmaxDraw,
    DEFAULT_FIXPOINT_ROUNDS, DEFAULT_TAIL_TOL,
};
pub use fixed_point::{
    fixed_point_batch, recomposed_batch, sample_limit, sample_limit_g, sample_limit_h, sample_limit_j, Family,
    FixedPointMaps, FixedPointSample, TruncationStats, DEFAULT_COEFF_TOL,
};
