//! One-sided (Hestenes) Jacobi SVD for dense complex matrices.

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct Svd {
    /// Ascending singular values.
    pub values: Vec<f64>,
    /// Right singular vectors, `right[k]` paired with `values[k]`.
    pub right: Vec<Vec<Complex64>>,
    /// `max_k ‖A v_k - σ_k u_k‖₂` with `u_k` the normalized rotated column.
    pub residual: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // a* b
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn singular_value_decomposition(a: &CMatrix) -> Result<Svd> {
    let (m, n) = (a.rows(), a.cols());
    let zero = Complex64::new(0.0, 0.0);
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|c| (0..m).map(|r| a[(r, c)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|c| {
            let mut col = vec![zero; n];
            col[c] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();
    let tol = f64::EPSILON * (m.max(1) as f64).sqrt();
    let mut norms: Vec<f64> = w.iter().map(|c| norm_sqr(c)).collect();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (alpha, beta) = (norms[i], norms[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&w[i], &w[j]);
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let cs = 1.0 / t.hypot(1.0);
                let sn = cs * t;
                // [w_i, w_j] <- [c w_i - s e^{-iφ} w_j, s w_i + c e^{-iφ} w_j]
                let rotate = |cols: &mut [Vec<Complex64>]| {
                    let (left, right) = cols.split_at_mut(j);
                    for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                        let yp = *y * phase;
                        let xi = *x;
                        *x = xi * cs - yp * sn;
                        *y = xi * sn + yp * cs;
                    }
                };
                rotate(&mut w);
                rotate(&mut v);
                norms[i] = norm_sqr(&w[i]);
                norms[j] = norm_sqr(&w[j]);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let sigma: Vec<f64> = norms.iter().map(|x| x.sqrt()).collect();
    let residual = (0..n)
        .into_par_iter()
        .map(|k| {
            // w_k = σ_k u_k exactly by construction
            a.mul_vec(&v[k])
                .iter()
                .zip(&w[k])
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .reduce(|| 0.0, f64::max);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sigma[x].total_cmp(&sigma[y]));
    Ok(Svd {
        values: order.iter().map(|&k| sigma[k]).collect(),
        right: order.into_iter().map(|k| std::mem::take(&mut v[k])).collect(),
        residual,
    })
}
