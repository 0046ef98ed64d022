//! Corners, the Vertex/Corner systems, the alpha coefficients and the weight
//! measure of a union of equal-radius cubes around a skew point set.

use crate::error::{Error, Result};
use crate::linalg::{residual_scale, solve_general, solve_spd, SquareMatrix};
use crate::magnitude::{weighting, DEFAULT_RESIDUAL_TOL};
use crate::points::{cube_point_distance_raw, d1_raw, PointSet};

/// Default relative tolerance for the residual of an alpha solution
/// substituted into the other (vertex/corner) system.
pub const DEFAULT_CROSS_RESIDUAL_TOL: f64 = 1e-8;

/// A vector in `{-1, +1}^N`.
///
/// Canonical ordering is lexicographic with `-1` before `+1`, so for `N = 2`
/// the order is `(-1,-1), (-1,1), (1,-1), (1,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    /// The `index`-th sign vector in canonical order, `index < 2^dim`.
    pub fn from_index(dim: usize, index: usize) -> SignVector {
        debug_assert!(index < 1 << dim);
        SignVector(
            (0..dim)
                .map(|k| if index >> (dim - 1 - k) & 1 == 1 { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn index(&self) -> usize {
        self.0
            .iter()
            .fold(0, |acc, &s| (acc << 1) | usize::from(s > 0))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn all(dim: usize) -> impl Iterator<Item = SignVector> {
        (0..1usize << dim).map(move |i| SignVector::from_index(dim, i))
    }
}

/// The vertex `p + r*s`.
fn vertex(p: &[f64], r: f64, s: &SignVector) -> Vec<f64> {
    p.iter()
        .zip(s.entries())
        .map(|(c, &sk)| c + r * sk as f64)
        .collect()
}

/// A union of cubes of radius `r` around the points of a skewness-compatible
/// base set; requires `r < skew(F)/2` strictly so the cubes have pairwise
/// disjoint coordinate projections.
#[derive(Debug, Clone)]
pub struct CubeUnionSpec {
    base: PointSet,
    radius: f64,
}

impl CubeUnionSpec {
    pub fn new(base: PointSet, radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::NonpositiveRadius { r: radius });
        }
        let bound = base.skewness() / 2.0;
        if radius >= bound {
            return Err(Error::RadiusExceedsSkew { r: radius, bound });
        }
        Ok(CubeUnionSpec { base, radius })
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// System order `2^N * m`.
    pub fn order(&self) -> usize {
        self.base.len() << self.base.dim()
    }

    /// All cube vertices `p + r*s` in canonical (point, sign vector) order.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.base.dim();
        let mut out = Vec::with_capacity(self.order());
        for p in self.base.points() {
            for s in SignVector::all(n) {
                out.push(vertex(p, self.radius, &s));
            }
        }
        out
    }
}

/// Indices of points of `F` lying in the open orthant in direction `u`
/// relative to `F[q]`.
pub fn corner(f: &PointSet, q: usize, u: &SignVector) -> Result<Vec<usize>> {
    if !f.is_skew() {
        return Err(Error::NotSkew);
    }
    let base = f.point(q);
    Ok((0..f.len())
        .filter(|&i| {
            i != q
                && f.point(i)
                    .iter()
                    .zip(base)
                    .zip(u.entries())
                    .all(|((pk, qk), &uk)| (pk - qk).signum() == uk as f64)
        })
        .collect())
}

/// True iff the `2^N` corners at `q` are pairwise disjoint and their union is
/// `F` minus the base point.
pub fn corner_partition_check(f: &PointSet, q: usize) -> Result<bool> {
    let mut seen = vec![false; f.len()];
    let mut count = 0usize;
    for u in SignVector::all(f.dim()) {
        for i in corner(f, q, &u)? {
            if seen[i] {
                return Ok(false);
            }
            seen[i] = true;
            count += 1;
        }
    }
    Ok(count == f.len() - 1 && !seen[q])
}

/// The Vertex System: the similarity matrix of the `2^N m` cube vertices,
/// with right-hand side `sum_{p != q} e^{-d1(Cube_p(r), q + r t)}`.
pub fn vertex_system(spec: &CubeUnionSpec) -> (SquareMatrix, Vec<f64>) {
    let f = spec.base();
    let r = spec.radius();
    let verts = spec.vertices();
    let n = verts.len();
    let per_point = 1usize << f.dim();
    let mut a = SquareMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = 1.0;
        for j in (i + 1)..n {
            let e = (-d1_raw(&verts[i], &verts[j])).exp();
            a[(i, j)] = e;
            a[(j, i)] = e;
        }
    }
    let mut b = vec![0.0; n];
    for (i, v) in verts.iter().enumerate() {
        let q = i / per_point;
        b[i] = (0..f.len())
            .filter(|&p| p != q)
            .map(|p| (-cube_point_distance_raw(f.point(p), r, v)).exp())
            .sum();
    }
    (a, b)
}

/// The Corner System: row `(q, u)` has 1 on the diagonal and entries
/// `e^{-d1(p + r s, q + r u)}` only in the columns of points in the corner
/// `Cor(q, u)`; rows with an empty corner are identity rows with zero RHS.
pub fn corner_system(spec: &CubeUnionSpec) -> Result<(SquareMatrix, Vec<f64>)> {
    let f = spec.base();
    if !f.is_skew() {
        return Err(Error::NotSkew);
    }
    let r = spec.radius();
    let dim = f.dim();
    let per_point = 1usize << dim;
    let n = spec.order();
    let mut a = SquareMatrix::zeros(n);
    let mut b = vec![0.0; n];
    for q in 0..f.len() {
        for (ui, u) in SignVector::all(dim).enumerate() {
            let row = q * per_point + ui;
            a[(row, row)] = 1.0;
            let qu = vertex(f.point(q), r, &u);
            for p in corner(f, q, &u)? {
                for (si, s) in SignVector::all(dim).enumerate() {
                    let col = p * per_point + si;
                    a[(row, col)] += (-d1_raw(&vertex(f.point(p), r, &s), &qu)).exp();
                }
                b[row] += (-cube_point_distance_raw(f.point(p), r, &qu)).exp();
            }
        }
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMethod {
    Vertex,
    Corner,
    /// Corner below `r_switch = skew(F)/20` where the Vertex matrix
    /// degenerates, Vertex otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemUsed {
    Vertex,
    Corner,
}

impl SystemUsed {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemUsed::Vertex => "vertex",
            SystemUsed::Corner => "corner",
        }
    }
}

/// The coefficients `alpha_{p,s}(r)` in canonical (point, sign vector) order,
/// together with the residuals of the solve in both systems.
#[derive(Debug, Clone)]
pub struct AlphaTable {
    spec: CubeUnionSpec,
    values: Vec<f64>,
    system_used: SystemUsed,
    residual: f64,
    cross_residual: f64,
}

impl AlphaTable {
    pub fn spec(&self) -> &CubeUnionSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, point: usize, s: &SignVector) -> f64 {
        self.values[(point << self.spec.base().dim()) + s.index()]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn system_used(&self) -> SystemUsed {
        self.system_used
    }

    /// Relative residual in the system that was solved.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Relative residual of the same solution in the other system.
    pub fn cross_residual(&self) -> f64 {
        self.cross_residual
    }

    /// `m (1+r)^N - sum(alpha)`.
    pub fn magnitude(&self) -> f64 {
        let f = self.spec.base();
        f.len() as f64 * (1.0 + self.spec.radius()).powi(f.dim() as i32) - self.sum()
    }
}

fn relative_residual(a: &SquareMatrix, x: &[f64], b: &[f64]) -> f64 {
    let res = a
        .matvec(x)
        .iter()
        .zip(b)
        .map(|(ax, bi)| (ax - bi).abs())
        .fold(0.0, f64::max);
    res / residual_scale(b)
}

pub fn alphas(spec: &CubeUnionSpec, method: AlphaMethod) -> Result<AlphaTable> {
    alphas_with_tolerances(spec, method, DEFAULT_RESIDUAL_TOL, DEFAULT_CROSS_RESIDUAL_TOL)
}

/// Solves the chosen system and validates the solution against the other one.
pub fn alphas_with_tolerances(
    spec: &CubeUnionSpec,
    method: AlphaMethod,
    residual_tol: f64,
    cross_tol: f64,
) -> Result<AlphaTable> {
    let system = match method {
        AlphaMethod::Vertex => SystemUsed::Vertex,
        AlphaMethod::Corner => SystemUsed::Corner,
        AlphaMethod::Auto => {
            if spec.radius() < spec.base().skewness() / 20.0 {
                SystemUsed::Corner
            } else {
                SystemUsed::Vertex
            }
        }
    };
    let (av, bv) = vertex_system(spec);
    let (ac, bc) = corner_system(spec)?;
    let (report, residual, cross_residual) = match system {
        SystemUsed::Vertex => {
            let rep = solve_spd(&av, &bv, residual_tol)?;
            let cross = relative_residual(&ac, &rep.solution, &bc);
            let own = rep.residual_inf / residual_scale(&bv);
            (rep, own, cross)
        }
        SystemUsed::Corner => {
            let rep = solve_general(&ac, &bc, residual_tol)?;
            let cross = relative_residual(&av, &rep.solution, &bv);
            let own = rep.residual_inf / residual_scale(&bc);
            (rep, own, cross)
        }
    };
    if cross_residual > cross_tol {
        return Err(Error::CrossResidualTooLarge {
            residual: cross_residual,
            tolerance: cross_tol,
        });
    }
    let table = AlphaTable {
        spec: spec.clone(),
        values: report.solution,
        system_used: system,
        residual,
        cross_residual,
    };
    if system == SystemUsed::Corner {
        // identity rows with empty corners force exact zeros
        let f = spec.base();
        let dim = f.dim();
        for q in 0..f.len() {
            for (ui, u) in SignVector::all(dim).enumerate() {
                if corner(f, q, &u)?.is_empty() {
                    debug_assert!(table.values[(q << dim) + ui].abs() <= 1e-12);
                }
            }
        }
    }
    Ok(table)
}

/// `mg(Cube_F(r)) = m (1+r)^N - sum(alpha)`.
pub fn cube_union_magnitude(spec: &CubeUnionSpec) -> Result<f64> {
    Ok(alphas(spec, AlphaMethod::Auto)?.magnitude())
}

/// A Dirac correction `-alpha` sitting at a cube vertex.
#[derive(Debug, Clone)]
pub struct DiracCorrection {
    pub at: Vec<f64>,
    pub coefficient: f64,
}

/// The weight measure of a cube union: the uniform `1/2^N` skeleton part,
/// stored symbolically as (coefficient, cube centers, radius, total mass),
/// plus Dirac corrections at the cube vertices.
#[derive(Debug, Clone)]
pub struct WeightMeasure {
    alphas: AlphaTable,
    lebesgue_coefficient: f64,
    lebesgue_total_mass: f64,
    dirac_corrections: Vec<DiracCorrection>,
}

impl WeightMeasure {
    pub fn spec(&self) -> &CubeUnionSpec {
        self.alphas.spec()
    }

    pub fn alphas(&self) -> &AlphaTable {
        &self.alphas
    }

    /// Exactly `1/2^N`.
    pub fn lebesgue_coefficient(&self) -> f64 {
        self.lebesgue_coefficient
    }

    /// `m (2+2r)^N`: each cube's skeleton sum has mass `(2+2r)^N`.
    pub fn lebesgue_total_mass(&self) -> f64 {
        self.lebesgue_total_mass
    }

    pub fn dirac_corrections(&self) -> &[DiracCorrection] {
        &self.dirac_corrections
    }

    /// Total mass of the measure; equals the cube-union magnitude by
    /// construction.
    pub fn total_mass(&self) -> f64 {
        self.alphas.magnitude()
    }
}

pub fn weight_measure(spec: &CubeUnionSpec) -> Result<WeightMeasure> {
    weight_measure_from_alphas(alphas(spec, AlphaMethod::Auto)?)
}

pub fn weight_measure_from_alphas(table: AlphaTable) -> Result<WeightMeasure> {
    let spec = table.spec().clone();
    let f = spec.base();
    let n = f.dim();
    let vertices = spec.vertices();
    let dirac_corrections = vertices
        .into_iter()
        .zip(table.values())
        .map(|(at, &a)| DiracCorrection { at, coefficient: -a })
        .collect();
    Ok(WeightMeasure {
        lebesgue_coefficient: 0.5f64.powi(n as i32),
        lebesgue_total_mass: f.len() as f64 * (2.0 + 2.0 * spec.radius()).powi(n as i32),
        dirac_corrections,
        alphas: table,
    })
}

/// Per-axis integral of `e^{-|x - a|}` over `[b - r, b + r]`.
fn axis_integral(b: f64, r: f64, a: f64) -> f64 {
    let d = (b - a).abs();
    if d >= r {
        2.0 * (-d).exp() * r.sinh()
    } else {
        2.0 * (1.0 - (-r).exp() * (b - a).cosh())
    }
}

/// Integral of `e^{-d1(x, a)}` against the weight measure. Equals 1 for every
/// `a` inside the cube union.
pub fn weight_integral(w: &WeightMeasure, a: &[f64]) -> Result<f64> {
    let spec = w.spec();
    let f = spec.base();
    let n = f.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.len(),
        });
    }
    let r = spec.radius();
    let mut total = 0.0;
    for p in f.points() {
        let mut prod = 1.0;
        for k in 0..n {
            let lo = (-(p[k] - r - a[k]).abs()).exp();
            let hi = (-(p[k] + r - a[k]).abs()).exp();
            prod *= lo + hi + axis_integral(p[k], r, a[k]);
        }
        total += prod;
    }
    total *= w.lebesgue_coefficient();
    for d in w.dirac_corrections() {
        total += d.coefficient * (-d1_raw(&d.at, a)).exp();
    }
    Ok(total)
}

/// The `r -> 0` limits of the alpha coefficients and their per-point sums.
#[derive(Debug, Clone)]
pub struct LimitTable {
    base: PointSet,
    alpha0: Vec<f64>,
    sigma0: Vec<f64>,
}

impl LimitTable {
    pub fn base(&self) -> &PointSet {
        &self.base
    }

    /// Canonical (point, sign vector) order, `2^N m` entries.
    pub fn alpha0(&self) -> &[f64] {
        &self.alpha0
    }

    pub fn sigma0(&self) -> &[f64] {
        &self.sigma0
    }

    pub fn alpha0_sum(&self) -> f64 {
        self.alpha0.iter().sum()
    }
}

/// Closed-form limits `alpha_{p,s}(0) = sum_{q in Cor(p,s)} e^{-d1(p,q)} w_q`,
/// checked for consistency against `m - mg(F)`.
pub fn alpha_limits(f: &PointSet) -> Result<LimitTable> {
    if !f.is_skew() {
        return Err(Error::NotSkew);
    }
    let w = weighting(f)?;
    let dim = f.dim();
    let mut alpha0 = Vec::with_capacity(f.len() << dim);
    let mut sigma0 = Vec::with_capacity(f.len());
    for p in 0..f.len() {
        let mut sigma = 0.0;
        for s in SignVector::all(dim) {
            let a: f64 = corner(f, p, &s)?
                .into_iter()
                .map(|q| (-d1_raw(f.point(p), f.point(q))).exp() * w.values[q])
                .sum();
            alpha0.push(a);
            sigma += a;
        }
        sigma0.push(sigma);
    }
    let sum: f64 = alpha0.iter().sum();
    let defect = (sum - (f.len() as f64 - w.sum())).abs();
    if defect > 1e-12 {
        return Err(Error::LimitInconsistency { defect });
    }
    Ok(LimitTable {
        base: f.clone(),
        alpha0,
        sigma0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple() -> PointSet {
        PointSet::new(2, vec![vec![0.0, 0.0], vec![4.0, 8.0], vec![7.0, 3.0]]).unwrap()
    }

    fn example_55() -> PointSet {
        // a, b, c, d
        PointSet::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 3.0], vec![3.0, 2.0], vec![4.0, -1.0]],
        )
        .unwrap()
    }

    fn sv(entries: &[i8]) -> SignVector {
        let dim = entries.len();
        let idx = entries
            .iter()
            .fold(0usize, |acc, &s| (acc << 1) | usize::from(s > 0));
        SignVector::from_index(dim, idx)
    }

    #[test]
    fn sign_vector_canonical_order() {
        let order: Vec<Vec<i8>> = SignVector::all(2).map(|s| s.entries().to_vec()).collect();
        assert_eq!(
            order,
            vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]
        );
        for (i, s) in SignVector::all(3).enumerate() {
            assert_eq!(s.index(), i);
        }
    }

    #[test]
    fn corners_of_example_configuration() {
        let f = example_55();
        assert_eq!(corner(&f, 0, &sv(&[1, 1])).unwrap(), vec![1, 2]);
        assert_eq!(corner(&f, 3, &sv(&[-1, 1])).unwrap(), vec![0, 1, 2]);
        assert_eq!(corner(&f, 1, &sv(&[-1, -1])).unwrap(), vec![0]);
        assert_eq!(corner(&f, 1, &sv(&[1, -1])).unwrap(), vec![2, 3]);
        assert!(corner(&f, 0, &sv(&[-1, -1])).unwrap().is_empty());
        let single = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        for u in SignVector::all(2) {
            assert!(corner(&single, 0, &u).unwrap().is_empty());
        }
    }

    #[test]
    fn corner_requires_skew() {
        let flat = PointSet::new(2, vec![vec![0.0, 0.0], vec![4.0, 0.0]]).unwrap();
        assert!(matches!(corner(&flat, 0, &sv(&[1, 1])), Err(Error::NotSkew)));
    }

    #[test]
    fn corner_partition() {
        let f = example_55();
        for q in 0..f.len() {
            assert!(corner_partition_check(&f, q).unwrap());
        }
        let single = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        assert!(corner_partition_check(&single, 0).unwrap());
    }

    #[test]
    fn spec_rejects_large_radius() {
        assert!(matches!(
            CubeUnionSpec::new(triple(), 1.5),
            Err(Error::RadiusExceedsSkew { .. })
        ));
        assert!(CubeUnionSpec::new(triple(), 1.4999).is_ok());
        assert!(matches!(
            CubeUnionSpec::new(triple(), 0.0),
            Err(Error::NonpositiveRadius { .. })
        ));
    }

    #[test]
    fn vertex_system_matches_displayed_entries() {
        let r = 1.0;
        let spec = CubeUnionSpec::new(triple(), r).unwrap();
        let (a, b) = vertex_system(&spec);
        // row/col indices follow the canonical (point, sign) order
        assert!((a[(0, 1)] - (-2.0 * r).exp()).abs() < 1e-15);
        assert!((a[(0, 4)] - (-12.0f64).exp()).abs() < 1e-15);
        assert!((a[(0, 5)] - (-(12.0 + 2.0 * r)).exp()).abs() < 1e-15);
        assert!((a[(3, 4)] - (-(12.0 - 4.0 * r)).exp()).abs() < 1e-15);
        // RHS row 4 (canonical index 3): e^{-(12-4r)} + e^{-(10-4r)}
        let expect = (-(12.0 - 4.0 * r)).exp() + (-(10.0 - 4.0 * r)).exp();
        assert!((b[3] - expect).abs() < 1e-15);
        assert!((b[0] - ((-12.0f64).exp() + (-10.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn corner_system_matches_displayed_rows() {
        let r = 1.0;
        let spec = CubeUnionSpec::new(triple(), r).unwrap();
        let (a, b) = corner_system(&spec).unwrap();
        // rows 0..2 are identity rows with zero RHS
        for row in 0..3 {
            for col in 0..12 {
                assert_eq!(a[(row, col)], if row == col { 1.0 } else { 0.0 });
            }
            assert_eq!(b[row], 0.0);
        }
        // row for ((0,0),(1,1)) couples to the 8 columns of the other points
        assert!((a[(3, 4)] - (-(12.0 - 4.0 * r)).exp()).abs() < 1e-15);
        assert!((a[(3, 7)] - (-12.0f64).exp()).abs() < 1e-15);
        assert!((a[(3, 8)] - (-(10.0 - 4.0 * r)).exp()).abs() < 1e-15);
        let expect = (-(12.0 - 4.0 * r)).exp() + (-(10.0 - 4.0 * r)).exp();
        assert!((b[3] - expect).abs() < 1e-15);
    }

    #[test]
    fn singleton_systems_are_trivial() {
        let single = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        let spec = CubeUnionSpec::new(single, 0.25).unwrap();
        let (_, bv) = vertex_system(&spec);
        assert!(bv.iter().all(|&v| v == 0.0));
        let (ac, bc) = corner_system(&spec).unwrap();
        assert_eq!(ac, SquareMatrix::identity(4));
        assert!(bc.iter().all(|&v| v == 0.0));
        let t = alphas(&spec, AlphaMethod::Auto).unwrap();
        assert!(t.values().iter().all(|&v| v.abs() <= 1e-15));
        assert!((t.magnitude() - 1.25f64.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn triple_alphas_match_reported_values() {
        let spec = CubeUnionSpec::new(triple(), 1.0).unwrap();
        for method in [AlphaMethod::Vertex, AlphaMethod::Corner] {
            let t = alphas(&spec, method).unwrap();
            assert!((t.get(0, &sv(&[1, 1])) - 0.0028011).abs() < 5e-8);
            assert!((t.get(1, &sv(&[-1, -1])) - 0.0003345).abs() < 5e-8);
            assert!((t.get(1, &sv(&[1, -1])) - 0.0179801).abs() < 5e-8);
            assert!((t.get(2, &sv(&[-1, -1])) - 0.0024718).abs() < 5e-8);
            assert!((t.get(2, &sv(&[-1, 1])) - 0.0179855).abs() < 5e-8);
            // the seven outer vertices vanish
            for (p, s) in [
                (0, [-1, -1]),
                (0, [-1, 1]),
                (0, [1, -1]),
                (1, [-1, 1]),
                (1, [1, 1]),
                (2, [1, -1]),
                (2, [1, 1]),
            ] {
                assert!(t.get(p, &sv(&s)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn skew_pair_alphas_closed_form() {
        // F = {0, p} with p = (3,4): the two inner vertices carry
        // e^{-(|p|_1 - 2Nr)} / (1 + e^{-(|p|_1 - 2Nr)}), everything else is 0.
        let f = PointSet::new(2, vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let spec = CubeUnionSpec::new(f, 0.5).unwrap();
        let t = alphas(&spec, AlphaMethod::Auto).unwrap();
        let e = (-(7.0 - 2.0f64)).exp();
        let expect = e / (1.0 + e);
        assert!((t.get(0, &sv(&[1, 1])) - expect).abs() < 1e-12);
        assert!((t.get(1, &sv(&[-1, -1])) - expect).abs() < 1e-12);
        for (p, s) in [
            (0, [-1, -1]),
            (0, [-1, 1]),
            (0, [1, -1]),
            (1, [-1, 1]),
            (1, [1, -1]),
            (1, [1, 1]),
        ] {
            assert!(t.get(p, &sv(&s)).abs() <= 1e-12);
        }
    }

    #[test]
    fn one_dimensional_pair_system() {
        // m=2, N=1: 4x4 system, closed form alpha = e^{-(a-2r)}/(1+e^{-(a-2r)})
        let a = 5.0;
        let r = 0.75;
        let f = PointSet::new(1, vec![vec![0.0], vec![a]]).unwrap();
        let spec = CubeUnionSpec::new(f, r).unwrap();
        let t = alphas(&spec, AlphaMethod::Vertex).unwrap();
        let e = (-(a - 2.0 * r)).exp();
        let expect = e / (1.0 + e);
        assert!((t.get(0, &sv(&[1])) - expect).abs() < 1e-12);
        assert!((t.get(1, &sv(&[-1])) - expect).abs() < 1e-12);
        assert!(t.get(0, &sv(&[-1])).abs() < 1e-12);
        assert!(t.get(1, &sv(&[1])).abs() < 1e-12);
    }

    #[test]
    fn weight_measure_shape() {
        // singleton: no nonzero corrections, mass (1+r)^N
        let single = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        let spec = CubeUnionSpec::new(single, 0.25).unwrap();
        let w = weight_measure(&spec).unwrap();
        assert!(w
            .dirac_corrections()
            .iter()
            .all(|d| d.coefficient.abs() <= 1e-15));
        assert!((w.total_mass() - 1.25f64.powi(2)).abs() < 1e-14);
        assert_eq!(w.lebesgue_coefficient(), 0.25);
        assert!((w.lebesgue_total_mass() - 2.5f64.powi(2)).abs() < 1e-14);

        // skew pair: exactly two corrections with equal coefficients,
        // at r*1_N and p - r*1_N
        let f = PointSet::new(2, vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let spec = CubeUnionSpec::new(f, 0.5).unwrap();
        let w = weight_measure(&spec).unwrap();
        let nonzero: Vec<&DiracCorrection> = w
            .dirac_corrections()
            .iter()
            .filter(|d| d.coefficient.abs() > 1e-12)
            .collect();
        assert_eq!(nonzero.len(), 2);
        assert_eq!(nonzero[0].at, vec![0.5, 0.5]);
        assert_eq!(nonzero[1].at, vec![2.5, 3.5]);
        assert!((nonzero[0].coefficient - nonzero[1].coefficient).abs() < 1e-14);
        assert!(nonzero[0].coefficient < 0.0);
    }

    #[test]
    fn weight_integral_is_one_inside() {
        let spec = CubeUnionSpec::new(triple(), 1.0).unwrap();
        let w = weight_measure(&spec).unwrap();
        // all vertices
        for v in spec.vertices() {
            assert!((weight_integral(&w, &v).unwrap() - 1.0).abs() < 1e-10);
        }
        // centers and interior points
        for p in spec.base().points() {
            assert!((weight_integral(&w, p).unwrap() - 1.0).abs() < 1e-10);
            let inside = vec![p[0] + 0.3, p[1] - 0.7];
            assert!((weight_integral(&w, &inside).unwrap() - 1.0).abs() < 1e-10);
        }
        // singleton cube, a = center: the p = q case
        let single = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        let spec = CubeUnionSpec::new(single, 0.25).unwrap();
        let w = weight_measure(&spec).unwrap();
        assert!((weight_integral(&w, &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(weight_integral(&w, &[1.0]).is_err());
    }

    #[test]
    fn alpha_limits_triple() {
        let t = alpha_limits(&triple()).unwrap();
        let expect = [
            0.0, 0.0, 0.0, 0.0000515, 0.0000061, 0.0, 0.0003353, 0.0, 0.0000454, 0.0003353,
            0.0, 0.0,
        ];
        for (got, want) in t.alpha0().iter().zip(expect) {
            assert!((got - want).abs() < 5e-8, "{got} vs {want}");
        }
        assert!((3.0 - t.alpha0_sum() - 2.99923).abs() < 5e-6);
        // sigma is the per-point partial sum by definition
        for p in 0..3 {
            let s: f64 = t.alpha0()[p * 4..(p + 1) * 4].iter().sum();
            assert_eq!(s, t.sigma0()[p]);
        }
    }

    #[test]
    fn alpha_limits_singleton() {
        let single = PointSet::new(3, vec![vec![0.0, 1.0, 2.0]]).unwrap();
        let t = alpha_limits(&single).unwrap();
        assert!(t.alpha0().iter().all(|&v| v == 0.0));
        assert_eq!(t.sigma0(), &[0.0]);
    }
}
