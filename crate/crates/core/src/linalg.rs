//! Dense symmetric matrices and a cyclic Jacobi eigensolver.

use crate::error::{Error, Result};

/// Dense real symmetric matrix. Symmetry is enforced by every mutator.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize) -> Self {
        Self { order, data: vec![0.0; order * order] }
    }

    /// Builds from full rows; rejects non-square or asymmetric input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter("matrix is not square".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                if x != rows[j][i] {
                    return Err(Error::InvalidParameter(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
                m.data[i * n + j] = x;
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.order + j] = x;
        self.data[j * self.order + i] = x;
    }

    pub fn add(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.order + j] += x;
        if i != j {
            self.data[j * self.order + i] += x;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.order)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    /// Largest `|M v - lambda v|` entry over all pairs.
    pub fn max_residual(&self, m: &SymmetricMatrix) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&lambda, v)| {
                m.mul_vec(v)
                    .iter()
                    .zip(v)
                    .fold(0.0f64, |acc, (mv, x)| acc.max((mv - lambda * x).abs()))
            })
            .fold(0.0, f64::max)
    }
}

pub const JACOBI_MAX_SWEEPS: usize = 50;
pub const JACOBI_REL_TOL: f64 = 1e-12;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// `1e-12 * ||M||_F`, within 50 sweeps.
pub fn symmetric_eigen(m: &SymmetricMatrix) -> Result<Eigen> {
    let n = m.order;
    let mut a = m.data.clone();
    // rows of `v` are the eigenvectors
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = JACOBI_REL_TOL * m.frobenius_norm();
    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, n, p, q, c, s);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                let (vp, vq) = two_rows(&mut v, n, p, q);
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a, n);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    Ok(Eigen {
        values: idx.iter().map(|&i| a[i * n + i]).collect(),
        vectors: idx.iter().map(|&i| v[i * n..(i + 1) * n].to_vec()).collect(),
    })
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for &x in &a[i * n + i + 1..(i + 1) * n] {
            s += 2.0 * x * x;
        }
    }
    s.sqrt()
}

fn two_rows(v: &mut [f64], n: usize, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let (head, tail) = v.split_at_mut(q * n);
    (&mut head[p * n..(p + 1) * n], &mut tail[..n])
}

// Applies the rotation to rows/columns p and q except the 2x2 block.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (rp, rq) = two_rows(a, n, p, q);
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let (xp, xq) = (rp[k], rq[k]);
        rp[k] = c * xp - s * xq;
        rq[k] = s * xp + c * xq;
    }
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        a[k * n + p] = a[p * n + k];
        a[k * n + q] = a[q * n + k];
    }
}
