//! Similarity matrices, weightings and finite-space magnitude.

use crate::error::Result;
use crate::linalg::{solve_spd, SquareMatrix};
use crate::points::{d1_raw, PointSet};

/// Default relative residual tolerance for weighting solves. Exceeding it is
/// an error: downstream formulas assume an exact weighting.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

/// Weighting vector `w` with `Z_F w = 1_m`, aligned with the point order.
#[derive(Debug, Clone)]
pub struct Weighting {
    pub values: Vec<f64>,
    pub residual_inf: f64,
}

impl Weighting {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// The matrix `(e^{-d1(p,q)})_{p,q in F}`: symmetric with unit diagonal.
pub fn similarity_matrix(f: &PointSet) -> SquareMatrix {
    let m = f.len();
    let mut z = SquareMatrix::identity(m);
    for i in 0..m {
        for j in (i + 1)..m {
            let e = (-d1_raw(f.point(i), f.point(j))).exp();
            z[(i, j)] = e;
            z[(j, i)] = e;
        }
    }
    z
}

pub fn weighting(f: &PointSet) -> Result<Weighting> {
    weighting_with_tolerance(f, DEFAULT_RESIDUAL_TOL)
}

pub fn weighting_with_tolerance(f: &PointSet, tolerance: f64) -> Result<Weighting> {
    let z = similarity_matrix(f);
    let ones = vec![1.0; f.len()];
    let report = solve_spd(&z, &ones, tolerance)?;
    Ok(Weighting {
        values: report.solution,
        residual_inf: report.residual_inf,
    })
}

/// Sum of the weighting components.
pub fn magnitude_finite(f: &PointSet) -> Result<f64> {
    Ok(weighting(f)?.sum())
}
