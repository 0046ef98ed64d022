//! Dense solvers for the small SPD and general systems arising from
//! similarity matrices and the Vertex/Corner systems.

use crate::error::{Error, Result};

/// Relative pivot threshold below which LU declares the matrix singular.
const PIVOT_THRESHOLD: f64 = 1e-14;

/// Dense real square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(order: usize) -> Self {
        SquareMatrix {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let order = rows.len();
        let mut m = Self::zeros(order);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), order);
            m.data[i * order..(i + 1) * order].copy_from_slice(row);
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        (0..self.order)
            .map(|i| {
                self.data[i * self.order..(i + 1) * self.order]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Maximum column sum of absolute values.
    pub fn norm_1(&self) -> f64 {
        (0..self.order)
            .map(|j| (0..self.order).map(|i| self[(i, j)].abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.order {
            for j in (i + 1)..self.order {
                max = max.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        max
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.order + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Cholesky,
    Lu,
}

/// Solution of a linear system together with the residual recomputed from
/// the original matrix.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub residual_inf: f64,
    pub method: SolveMethod,
    pub condition_estimate: Option<f64>,
}

/// Sign and natural log of the absolute value of a determinant.
/// `sign == 0` means numerically singular, with `log_abs == -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub sign: i8,
    pub log_abs: f64,
}

impl LogDet {
    pub fn value(&self) -> f64 {
        self.sign as f64 * self.log_abs.exp()
    }
}

/// Pivoted LU factorization, stored in place.
struct Lu {
    factors: SquareMatrix,
    perm: Vec<usize>,
    swaps: usize,
    /// Sign of the smallest pivot that tripped the singularity threshold,
    /// if any; retained so log_determinant can report sign 0.
    singular_at: Option<(usize, f64)>,
}

impl Lu {
    fn factor(a: &SquareMatrix) -> Lu {
        let n = a.order();
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let scale = a
            .data
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mut singular_at = None;
        for k in 0..n {
            let (piv_row, piv_val) = (k..n)
                .map(|i| (i, f[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_val <= PIVOT_THRESHOLD * scale {
                if singular_at.is_none() {
                    singular_at = Some((k, f[(piv_row, k)]));
                }
            }
            if piv_row != k {
                for j in 0..n {
                    let tmp = f[(k, j)];
                    f[(k, j)] = f[(piv_row, j)];
                    f[(piv_row, j)] = tmp;
                }
                perm.swap(k, piv_row);
                swaps += 1;
            }
            let pivot = f[(k, k)];
            if pivot == 0.0 {
                continue;
            }
            for i in (k + 1)..n {
                let l = f[(i, k)] / pivot;
                f[(i, k)] = l;
                for j in (k + 1)..n {
                    f[(i, j)] -= l * f[(k, j)];
                }
            }
        }
        Lu {
            factors: f,
            perm,
            swaps,
            singular_at,
        }
    }

    fn require_nonsingular(&self) -> Result<()> {
        match self.singular_at {
            Some((step, pivot)) => Err(Error::Singular { pivot, step }),
            None => Ok(()),
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.factors.order();
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.factors[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.factors[(i, j)] * x[j];
            }
            x[i] /= self.factors[(i, i)];
        }
        x
    }

    /// Solves `A^T x = b` using the same factors (`A^T = U^T L^T P`).
    fn solve_transposed(&self, b: &[f64]) -> Vec<f64> {
        let n = self.factors.order();
        let mut y = b.to_vec();
        // U^T y = b (forward substitution on U^T)
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.factors[(j, i)] * y[j];
            }
            y[i] /= self.factors[(i, i)];
        }
        // L^T z = y (backward substitution on L^T, unit diagonal)
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] -= self.factors[(j, i)] * y[j];
            }
        }
        // undo the row permutation
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    fn log_det(&self) -> LogDet {
        if self.singular_at.is_some() {
            return LogDet {
                sign: 0,
                log_abs: f64::NEG_INFINITY,
            };
        }
        let n = self.factors.order();
        let mut sign: i8 = if self.swaps % 2 == 0 { 1 } else { -1 };
        let mut log_abs = 0.0;
        for i in 0..n {
            let d = self.factors[(i, i)];
            if d < 0.0 {
                sign = -sign;
            }
            log_abs += d.abs().ln();
        }
        LogDet { sign, log_abs }
    }
}

fn residual_inf(a: &SquareMatrix, x: &[f64], b: &[f64]) -> f64 {
    a.matvec(x)
        .iter()
        .zip(b)
        .map(|(ax, bi)| (ax - bi).abs())
        .fold(0.0, f64::max)
}

/// `b - A x` with compensated (Neumaier) accumulation and exact `mul_add`
/// product errors, so refinement can push the forward error below what a
/// plain double-precision residual allows.
fn compensated_residual(a: &SquareMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.order();
    (0..n)
        .map(|i| {
            let mut sum = b[i];
            let mut comp = 0.0;
            for j in 0..n {
                let prod = -a[(i, j)] * x[j];
                let prod_err = (-a[(i, j)]).mul_add(x[j], -prod);
                let t = sum + prod;
                comp += if sum.abs() >= prod.abs() {
                    (sum - t) + prod
                } else {
                    (prod - t) + sum
                };
                comp += prod_err;
                sum = t;
            }
            sum + comp
        })
        .collect()
}

/// Relative residual scale: the max norm of the right-hand side, floored at 1.
pub fn residual_scale(b: &[f64]) -> f64 {
    b.iter().map(|v| v.abs()).fold(1.0, f64::max)
}

fn cholesky(a: &SquareMatrix) -> Option<SquareMatrix> {
    let n = a.order();
    let mut l = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[(i, i)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(l: &SquareMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.order();
    let mut x = b.to_vec();
    for i in 0..n {
        for j in 0..i {
            x[i] -= l[(i, j)] * x[j];
        }
        x[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for j in (i + 1)..n {
            x[i] -= l[(j, i)] * x[j];
        }
        x[i] /= l[(i, i)];
    }
    x
}

/// Solves a symmetric positive definite system via Cholesky, falling back to
/// pivoted LU on factorization breakdown. Two refinement steps with a
/// compensated residual are always applied; a relative residual still above
/// `tolerance` afterwards is an error.
pub fn solve_spd(a: &SquareMatrix, b: &[f64], tolerance: f64) -> Result<SolveReport> {
    let asym = a.max_asymmetry();
    if asym > 1e-12 {
        return Err(Error::NotSymmetric { max_asymmetry: asym });
    }
    let scale = residual_scale(b);
    if let Some(l) = cholesky(a) {
        let mut x = cholesky_solve(&l, b);
        for _ in 0..2 {
            let r = compensated_residual(a, &x, b);
            let dx = cholesky_solve(&l, &r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        let res = residual_inf(a, &x, b);
        if res > tolerance * scale {
            return Err(Error::ResidualTooLarge {
                residual: res / scale,
                tolerance,
            });
        }
        return Ok(SolveReport {
            solution: x,
            residual_inf: res,
            method: SolveMethod::Cholesky,
            condition_estimate: None,
        });
    }
    let mut report = solve_general(a, b, tolerance)?;
    report.method = SolveMethod::Lu;
    Ok(report)
}

/// Partial-pivot LU solve with residual check and an opportunistic 1-norm
/// condition estimate from the factors.
pub fn solve_general(a: &SquareMatrix, b: &[f64], tolerance: f64) -> Result<SolveReport> {
    let lu = Lu::factor(a);
    lu.require_nonsingular()?;
    let scale = residual_scale(b);
    let mut x = lu.solve(b);
    for _ in 0..2 {
        let r = compensated_residual(a, &x, b);
        let dx = lu.solve(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
    }
    let res = residual_inf(a, &x, b);
    if res > tolerance * scale {
        return Err(Error::ResidualTooLarge {
            residual: res / scale,
            tolerance,
        });
    }
    let cond = estimate_condition(a, &lu);
    Ok(SolveReport {
        solution: x,
        residual_inf: res,
        method: SolveMethod::Lu,
        condition_estimate: Some(cond),
    })
}

/// Log-space determinant via pivoted LU; singular inputs yield sign 0.
pub fn log_determinant(a: &SquareMatrix) -> LogDet {
    Lu::factor(a).log_det()
}

/// 1-norm condition estimate `||A||_1 * est(||A^-1||_1)` using Hager's
/// method on the LU factors.
pub fn condition_estimate_1norm(a: &SquareMatrix) -> Result<f64> {
    let lu = Lu::factor(a);
    lu.require_nonsingular()?;
    Ok(estimate_condition(a, &lu))
}

fn estimate_condition(a: &SquareMatrix, lu: &Lu) -> f64 {
    let n = a.order();
    if n == 1 {
        return 1.0;
    }
    let norm_a = a.norm_1();
    let mut x = vec![1.0 / n as f64; n];
    let mut inv_norm = 0.0f64;
    for _ in 0..5 {
        let z = lu.solve(&x);
        let z_norm: f64 = z.iter().map(|v| v.abs()).sum();
        inv_norm = inv_norm.max(z_norm);
        let xi: Vec<f64> = z.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
        let w = lu.solve_transposed(&xi);
        let (j, w_max) = w
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, v)| {
                if v.abs() > best.1 {
                    (i, v.abs())
                } else {
                    best
                }
            });
        let wx: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
        if w_max <= wx.abs() {
            break;
        }
        x = vec![0.0; n];
        x[j] = 1.0;
    }
    norm_a * inv_norm
}
