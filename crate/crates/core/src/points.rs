//! Finite point sets in `R^N` with the 1-metric, skewness and Hausdorff distance.

use crate::error::{Error, Result};

/// Sum of coordinate-wise absolute differences (the 1-metric).
pub fn d1(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(d1_raw(x, y))
}

pub(crate) fn d1_raw(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
}

/// 1-distance from the cube of radius `r` around `center` to the point `x`,
/// i.e. `sum_k max(|x_k - center_k| - r, 0)`.
pub fn cube_point_distance(center: &[f64], r: f64, x: &[f64]) -> Result<f64> {
    if center.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: center.len(),
            got: x.len(),
        });
    }
    if r <= 0.0 {
        return Err(Error::NonpositiveRadius { r });
    }
    Ok(cube_point_distance_raw(center, r, x))
}

pub(crate) fn cube_point_distance_raw(center: &[f64], r: f64, x: &[f64]) -> f64 {
    center
        .iter()
        .zip(x)
        .map(|(c, a)| ((a - c).abs() - r).max(0.0))
        .sum()
}

/// An ordered list of pairwise distinct points in `R^N`.
///
/// Point order is preserved from the input; every matrix and vector derived
/// from a `PointSet` uses this order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index: i });
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint { first: i, second: j });
                }
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points, `m` in the formulas.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Minimum over distinct point pairs and axes of the coordinate difference.
    /// A singleton has skewness `+inf` by convention.
    pub fn skewness(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                for k in 0..self.dim {
                    let d = (self.points[i][k] - self.points[j][k]).abs();
                    if d < min {
                        min = d;
                    }
                }
            }
        }
        min
    }

    /// True iff all coordinate projections are injective on the set.
    pub fn is_skew(&self) -> bool {
        self.skewness() > 0.0
    }

    /// Skewness classification with a tolerance: coordinate differences of at
    /// most `tau` count as equal.
    pub fn is_skew_with_tolerance(&self, tau: f64) -> bool {
        self.skewness() > tau
    }

    /// Concatenated pairs `(p, q)`; the 1-product of the two spaces.
    pub fn product(&self, other: &PointSet) -> Result<PointSet> {
        let mut points = Vec::with_capacity(self.len() * other.len());
        for p in &self.points {
            for q in &other.points {
                let mut v = p.clone();
                v.extend_from_slice(q);
                points.push(v);
            }
        }
        PointSet::new(self.dim + other.dim, points)
    }
}

/// Two-sided Hausdorff distance between finite sets under the 1-metric.
pub fn hausdorff_distance(f: &PointSet, g: &PointSet) -> Result<f64> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    let one_sided = |a: &PointSet, b: &PointSet| -> f64 {
        a.points()
            .iter()
            .map(|p| {
                b.points()
                    .iter()
                    .map(|q| d1_raw(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(one_sided(f, g).max(one_sided(g, f)))
}
