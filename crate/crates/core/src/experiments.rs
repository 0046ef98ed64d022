//! Closed-form oracles, convergence sweeps, the determinant probe and
//! empirical continuity probes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cubes::{cube_union_magnitude, CubeUnionSpec};
use crate::error::{Error, Result};
use crate::linalg::log_determinant;
use crate::magnitude::magnitude_finite;
use crate::points::{hausdorff_distance, PointSet};

/// Magnitude of a finite union of disjoint closed intervals:
/// `1 + sum (b_i - a_i)/2 + sum tanh((a_{i+1} - b_i)/2)`.
pub fn interval_union_magnitude(intervals: &[(f64, f64)]) -> Result<f64> {
    if intervals.is_empty() {
        return Err(Error::InvalidIntervals { index: 0 });
    }
    for (i, &(a, b)) in intervals.iter().enumerate() {
        if !(a <= b) {
            return Err(Error::InvalidIntervals { index: i });
        }
        if i + 1 < intervals.len() && !(b < intervals[i + 1].0) {
            return Err(Error::InvalidIntervals { index: i });
        }
    }
    let lengths: f64 = intervals.iter().map(|&(a, b)| (b - a) / 2.0).sum();
    let gaps: f64 = intervals
        .windows(2)
        .map(|w| ((w[1].0 - w[0].1) / 2.0).tanh())
        .sum();
    Ok(1.0 + lengths + gaps)
}

/// Closed form for the cube union around a skew pair `{0, p}` with strictly
/// positive coordinates: `2(1+r)^N - 2e^{-(|p|_1 - 2Nr)}/(1 + e^{-(|p|_1 - 2Nr)})`.
/// `r = 0` yields the magnitude of the two-point space itself.
pub fn two_point_closed_form(p: &[f64], r: f64) -> Result<f64> {
    if p.is_empty() || p.iter().any(|&c| c <= 0.0) {
        return Err(Error::ClosedFormPrecondition {
            reason: "coordinates must be strictly positive",
        });
    }
    let min = p.iter().cloned().fold(f64::INFINITY, f64::min);
    if r < 0.0 || r >= min / 2.0 {
        return Err(Error::ClosedFormPrecondition {
            reason: "radius must lie in [0, min_k p_k / 2)",
        });
    }
    let n = p.len() as f64;
    let norm: f64 = p.iter().sum();
    let e = (-(norm - 2.0 * n * r)).exp();
    Ok(2.0 * (1.0 + r).powi(p.len() as i32) - 2.0 * e / (1.0 + e))
}

/// Non-skew pair closed form: `p = (p_1..p_k, 0..0)` with the nonzero prefix
/// strictly positive. The trailing zero axes contribute a `(1+r)^{N-k}` factor.
pub fn two_point_nonskew_closed_form(p: &[f64], k: usize, r: f64) -> Result<f64> {
    if k == 0 || k > p.len() {
        return Err(Error::ClosedFormPrecondition {
            reason: "nonzero prefix length out of range",
        });
    }
    if p[k..].iter().any(|&c| c != 0.0) {
        return Err(Error::ClosedFormPrecondition {
            reason: "trailing coordinates must be zero",
        });
    }
    let skew_part = two_point_closed_form(&p[..k], r)?;
    Ok(skew_part * (1.0 + r).powi((p.len() - k) as i32))
}

/// Per-radius cube-union magnitudes and their gaps above `mg(F)`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub r: f64,
    pub mg_cubes: f64,
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub base_magnitude: f64,
}

/// Evaluates `mg(Cube_F(r))` on the whole schedule. Any invalid radius
/// rejects the sweep up front; rows are ordered by descending radius.
pub fn convergence_sweep(f: &PointSet, schedule: &[f64]) -> Result<SweepReport> {
    if !f.is_skew() {
        return Err(Error::NotSkew);
    }
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule {
            reason: "empty schedule".into(),
        });
    }
    let bound = f.skewness() / 2.0;
    for &r in schedule {
        if r <= 0.0 {
            return Err(Error::NonpositiveRadius { r });
        }
        if r >= bound {
            return Err(Error::RadiusExceedsSkew { r, bound });
        }
    }
    let base_magnitude = magnitude_finite(f)?;
    let mut radii = schedule.to_vec();
    radii.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut rows = Vec::with_capacity(radii.len());
    for r in radii {
        let spec = CubeUnionSpec::new(f.clone(), r)?;
        let mg_cubes = cube_union_magnitude(&spec)?;
        rows.push(SweepRow {
            r,
            mg_cubes,
            gap: mg_cubes - base_magnitude,
        });
    }
    Ok(SweepReport {
        rows,
        base_magnitude,
    })
}

#[derive(Debug, Clone)]
pub struct ConjectureReport {
    /// `2^{N-1} N m`, the number of edges of the cube union.
    pub k_expected: usize,
    pub rows: Vec<(f64, f64)>,
    pub fitted_exponent: f64,
    pub fitted_log_coefficient: f64,
}

impl ConjectureReport {
    /// The conjectured log-coefficient `k log 4`.
    pub fn expected_log_coefficient(&self) -> f64 {
        self.k_expected as f64 * 4.0f64.ln()
    }
}

/// Least-squares line fit; returns (slope, intercept).
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx: f64 = xs.iter().sum::<f64>() / n;
    let my: f64 = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fits `log det(Z_vertices(r))` against `log r` over the schedule and
/// compares the slope and intercept against `k` and `k log 4`.
pub fn conjecture_probe(f: &PointSet, schedule: &[f64]) -> Result<ConjectureReport> {
    if !f.is_skew() {
        return Err(Error::NotSkew);
    }
    if schedule.len() < 4 {
        return Err(Error::InvalidSchedule {
            reason: format!("need >= 4 fit points, got {}", schedule.len()),
        });
    }
    let bound = f.skewness() / 2.0;
    for &r in schedule {
        if r <= 0.0 {
            return Err(Error::NonpositiveRadius { r });
        }
        if r >= bound {
            return Err(Error::RadiusExceedsSkew { r, bound });
        }
    }
    let mut radii = schedule.to_vec();
    radii.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut rows = Vec::with_capacity(radii.len());
    for r in radii {
        let spec = CubeUnionSpec::new(f.clone(), r)?;
        let (z, _) = crate::cubes::vertex_system(&spec);
        let ld = log_determinant(&z);
        if ld.sign != 1 {
            return Err(Error::NonpositiveDeterminant { r });
        }
        rows.push((r, ld.log_abs));
    }
    let xs: Vec<f64> = rows.iter().map(|&(r, _)| r.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|&(_, l)| l).collect();
    let (fitted_exponent, fitted_log_coefficient) = fit_line(&xs, &ys);
    let n = f.dim();
    Ok(ConjectureReport {
        k_expected: (1usize << (n - 1)) * n * f.len(),
        rows,
        fitted_exponent,
        fitted_log_coefficient,
    })
}

/// Pairs `(d_H(F, F'), |mg(F) - mg(F')|)` for `trials` perturbed copies of
/// `F`, each coordinate shifted by uniform noise in `[-scale, scale]`.
/// Deterministic given the seed; each trial draws from its own stream.
pub fn continuity_probe(
    f: &PointSet,
    scale: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    let base_mg = magnitude_finite(f)?;
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let mut perturbed = None;
        for _ in 0..100 {
            let points: Vec<Vec<f64>> = f
                .points()
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|&c| {
                            if scale == 0.0 {
                                c
                            } else {
                                c + rng.gen_range(-scale..=scale)
                            }
                        })
                        .collect()
                })
                .collect();
            if let Ok(g) = PointSet::new(f.dim(), points) {
                perturbed = Some(g);
                break;
            }
        }
        let g = perturbed.ok_or(Error::ResamplingExhausted { attempts: 100 })?;
        let dh = hausdorff_distance(f, &g)?;
        let dmg = (magnitude_finite(&g)? - base_mg).abs();
        out.push((dh, dmg));
    }
    Ok(out)
}

/// Geometric schedule from `start` down to `end`, inclusive.
pub fn geometric_schedule(start: f64, end: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![start];
    }
    let ratio = (end / start).powf(1.0 / (steps - 1) as f64);
    (0..steps).map(|i| start * ratio.powi(i as i32)).collect()
}

/// Linear schedule from `start` down to `end`, inclusive.
pub fn linear_schedule(start: f64, end: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![start];
    }
    let step = (end - start) / (steps - 1) as f64;
    (0..steps).map(|i| start + step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple() -> PointSet {
        PointSet::new(2, vec![vec![0.0, 0.0], vec![4.0, 8.0], vec![7.0, 3.0]]).unwrap()
    }

    #[test]
    fn interval_union_examples() {
        assert_eq!(interval_union_magnitude(&[(0.0, 2.0)]).unwrap(), 2.0);
        assert_eq!(interval_union_magnitude(&[(0.0, 0.0)]).unwrap(), 1.0);
        let a = 5.0;
        let r = 0.75;
        let got = interval_union_magnitude(&[(-r, r), (a - r, a + r)]).unwrap();
        let expect = 1.0 + 2.0 * r + ((a - 2.0 * r) / 2.0).tanh();
        assert!((got - expect).abs() < 1e-14);
        // matches the m=2, N=1 cube-union value
        let f = PointSet::new(1, vec![vec![0.0], vec![a]]).unwrap();
        let spec = CubeUnionSpec::new(f, r).unwrap();
        assert!((got - cube_union_magnitude(&spec).unwrap()).abs() < 1e-10);

        assert!(interval_union_magnitude(&[(1.0, 0.5)]).is_err());
        assert!(interval_union_magnitude(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(interval_union_magnitude(&[(0.0, 3.0), (2.0, 4.0)]).is_err());
    }

    #[test]
    fn two_point_closed_form_examples() {
        let p = [3.0, 4.0];
        let zero_r = two_point_closed_form(&p, 0.0).unwrap();
        assert!((zero_r - 2.0 / (1.0 + (-7.0f64).exp())).abs() < 1e-14);
        let got = two_point_closed_form(&p, 0.5).unwrap();
        let e = (-5.0f64).exp();
        assert!((got - (2.0 * 1.5f64.powi(2) - 2.0 * e / (1.0 + e))).abs() < 1e-14);
        assert!(two_point_closed_form(&[3.0, -1.0], 0.1).is_err());
        assert!(two_point_closed_form(&p, 1.5).is_err());
    }

    #[test]
    fn nonskew_closed_form_examples() {
        // k = N reduces to the skew form
        let p = [3.0, 4.0];
        assert_eq!(
            two_point_nonskew_closed_form(&p, 2, 0.5).unwrap(),
            two_point_closed_form(&p, 0.5).unwrap()
        );
        // p = (a, 0) in N = 2
        let a = 4.0;
        let r = 0.1;
        let got = two_point_nonskew_closed_form(&[a, 0.0], 1, r).unwrap();
        let e = (-(a - 2.0 * r)).exp();
        let expect = (2.0 * 1.1 - 2.0 * e / (1.0 + e)) * 1.1;
        assert!((got - expect).abs() < 1e-14);
        // r -> 0 recovers the finite magnitude
        let got = two_point_nonskew_closed_form(&[a, 0.0], 1, 0.0).unwrap();
        assert!((got - 2.0 / (1.0 + (-a).exp())).abs() < 1e-14);
        assert!(two_point_nonskew_closed_form(&[a, 1.0], 1, r).is_err());
    }

    #[test]
    fn sweep_singleton_gap_is_exact() {
        let single = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        let schedule = [0.5, 0.1, 0.01];
        let rep = convergence_sweep(&single, &schedule).unwrap();
        assert_eq!(rep.base_magnitude, 1.0);
        for row in &rep.rows {
            let expect = (1.0 + row.r).powi(2) - 1.0;
            assert!((row.gap - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_rejects_invalid_radius_up_front() {
        let f = triple();
        assert!(matches!(
            convergence_sweep(&f, &[0.1, 2.0]),
            Err(Error::RadiusExceedsSkew { .. })
        ));
        assert!(convergence_sweep(&f, &[]).is_err());
    }

    #[test]
    fn sweep_pair_matches_closed_form() {
        let f = PointSet::new(2, vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let schedule = geometric_schedule(0.5, 0.01, 6);
        let rep = convergence_sweep(&f, &schedule).unwrap();
        for row in &rep.rows {
            let oracle = two_point_closed_form(&[3.0, 4.0], row.r).unwrap();
            assert!((row.mg_cubes - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn conjecture_probe_one_interval() {
        // N=1, m=1: det = 1 - e^{-4r}, so exponent 1 and coefficient 4
        let f = PointSet::new(1, vec![vec![0.0]]).unwrap();
        let schedule = geometric_schedule(1e-3, 1e-4, 8);
        let rep = conjecture_probe(&f, &schedule).unwrap();
        assert_eq!(rep.k_expected, 1);
        assert!((rep.fitted_exponent - 1.0).abs() < 0.05);
        assert!((rep.fitted_log_coefficient - 4.0f64.ln()).abs() < 0.05);
        for &(r, logdet) in &rep.rows {
            let analytic = (1.0 - (-4.0 * r).exp()).ln();
            assert!((logdet - analytic).abs() < 1e-9);
        }
    }

    #[test]
    fn conjecture_probe_needs_four_points() {
        let f = PointSet::new(1, vec![vec![0.0]]).unwrap();
        assert!(matches!(
            conjecture_probe(&f, &[1e-2, 1e-3]),
            Err(Error::InvalidSchedule { .. })
        ));
    }

    #[test]
    fn continuity_probe_deterministic_and_bounded() {
        let f = triple();
        let a = continuity_probe(&f, 1e-3, 20, 0).unwrap();
        let b = continuity_probe(&f, 1e-3, 20, 0).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&(_, dmg)| dmg <= 1e-2));
        let zero = continuity_probe(&f, 0.0, 5, 7).unwrap();
        assert!(zero.iter().all(|&(dh, dmg)| dh == 0.0 && dmg == 0.0));
        let single = PointSet::new(2, vec![vec![0.0, 0.0]]).unwrap();
        let s = continuity_probe(&single, 0.1, 10, 3).unwrap();
        assert!(s.iter().all(|&(_, dmg)| dmg == 0.0));
    }

    #[test]
    fn schedules() {
        let g = geometric_schedule(1.0, 0.001, 4);
        assert!((g[0] - 1.0).abs() < 1e-15);
        assert!((g[3] - 0.001).abs() < 1e-12);
        assert!((g[1] / g[0] - g[2] / g[1]).abs() < 1e-12);
        let l = linear_schedule(1.0, 0.4, 4);
        assert!((l[1] - 0.8).abs() < 1e-15);
        assert_eq!(geometric_schedule(0.5, 0.1, 1), vec![0.5]);
    }
}
