//! Magnitude of finite subsets of `l1^N` and of finite unions of equal-radius
//! cubes around skew point sets.
//!
//! The finite-space magnitude is the component sum of the weighting `w`
//! solving `Z_F w = 1` for the similarity matrix `Z_F = (e^{-d1(p,q)})`. For a
//! skew set `F` and `r < skew(F)/2`, the union of cubes of radius `r` around
//! `F` has an explicit weight measure: a uniform `1/2^N` multiple of the
//! skeleton Lebesgue measures minus Dirac corrections `alpha_{p,s}(r)` at the
//! cube vertices, determined by either of two equivalent linear systems. Its
//! total mass `m (1+r)^N - sum(alpha)` is the magnitude of the union and
//! converges to `mg(F)` as `r -> 0`.

pub mod cubes;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod magnitude;
pub mod points;

pub use cubes::{
    alpha_limits, alphas, corner, corner_partition_check, corner_system, cube_union_magnitude,
    vertex_system, weight_integral, weight_measure, AlphaMethod, AlphaTable, CubeUnionSpec,
    LimitTable, SignVector, SystemUsed, WeightMeasure,
};
pub use error::{Error, Result};
pub use experiments::{
    continuity_probe, convergence_sweep, conjecture_probe, geometric_schedule,
    interval_union_magnitude, linear_schedule, two_point_closed_form,
    two_point_nonskew_closed_form, ConjectureReport, SweepReport,
};
pub use linalg::{
    condition_estimate_1norm, log_determinant, solve_general, solve_spd, LogDet, SolveMethod,
    SolveReport, SquareMatrix,
};
pub use magnitude::{
    magnitude_finite, similarity_matrix, weighting, weighting_with_tolerance, Weighting,
    DEFAULT_RESIDUAL_TOL,
};
pub use points::{cube_point_distance, d1, hausdorff_distance, PointSet};
