//! Hermitian eigensolver: Householder reduction to a real symmetric tridiagonal
//! matrix followed by implicit QL iterations with Wilkinson-type shifts.

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Maximum `‖A - A*‖_max` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// QL iterations allowed per eigenvalue.
pub const MAX_QL_ITERATIONS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` belonging to `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
    /// `max_k ‖A v_k - λ_k v_k‖₂`.
    pub residual: f64,
}

pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: Vec::new(),
            residual: 0.0,
        });
    }
    let sym = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
    let (mut d, mut e, mut q) = tridiagonalize(&sym);
    tql(&mut d, &mut e, &mut q)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let vectors: Vec<Vec<Complex64>> = order.into_iter().map(|k| std::mem::take(&mut q[k])).collect();

    let residual = vectors
        .par_iter()
        .zip(values.par_iter())
        .map(|(v, &lambda)| {
            sym.mul_vec(v)
                .iter()
                .zip(v)
                .map(|(av, x)| (av - x * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .reduce(|| 0.0, f64::max);
    Ok(HermitianEigen {
        values,
        vectors,
        residual,
    })
}

/// Returns the diagonal, the real off-diagonal `e[i]` coupling `i` and `i+1`, and
/// the columns of the unitary `Q` with `A = Q T Q*`.
fn tridiagonalize(a: &CMatrix) -> (Vec<f64>, Vec<f64>, Vec<Vec<Complex64>>) {
    let n = a.rows();
    let zero = Complex64::new(0.0, 0.0);
    let mut h: Vec<Vec<Complex64>> = (0..n).map(|r| a.row(r).to_vec()).collect();
    let mut q: Vec<Vec<Complex64>> = (0..n)
        .map(|c| {
            let mut col = vec![zero; n];
            col[c] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();

    for k in 0..n.saturating_sub(2) {
        let s = k + 1;
        let mut v: Vec<Complex64> = (s..n).map(|r| h[r][k]).collect();
        let alpha = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        v[0] += phase * alpha;
        let tau = 2.0 / v.iter().map(|x| x.norm_sqr()).sum::<f64>();

        // p = τ H v on the trailing block, w = p - (τ β / 2) v with β = v* p
        let p: Vec<Complex64> = (s..n)
            .map(|r| {
                h[r][s..]
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| x * y)
                    .sum::<Complex64>()
                    * tau
            })
            .collect();
        let beta: f64 = v.iter().zip(&p).map(|(x, y)| (x.conj() * y).re).sum();
        let w: Vec<Complex64> = p
            .iter()
            .zip(&v)
            .map(|(pi, vi)| pi - vi * (0.5 * tau * beta))
            .collect();
        for (ri, row) in h[s..].iter_mut().enumerate() {
            for (ci, entry) in row[s..].iter_mut().enumerate() {
                *entry -= v[ri] * w[ci].conj() + w[ri] * v[ci].conj();
            }
        }
        let head = -phase * alpha;
        h[s][k] = head;
        h[k][s] = head.conj();
        for row in h[s + 1..].iter_mut() {
            row[k] = zero;
        }
        h[k][s + 1..].fill(zero);

        // Q <- Q (I - τ v v*)
        let mut y = vec![zero; n];
        for (b, vb) in v.iter().enumerate() {
            for (yi, qi) in y.iter_mut().zip(&q[s + b]) {
                *yi += qi * vb;
            }
        }
        for (b, vb) in v.iter().enumerate() {
            let coef = vb.conj() * tau;
            for (qi, yi) in q[s + b].iter_mut().zip(&y) {
                *qi -= yi * coef;
            }
        }
    }

    // unitary diagonal scaling turns the complex off-diagonal real and non-negative
    let d: Vec<f64> = (0..n).map(|i| h[i][i].re).collect();
    let mut e = vec![0.0; n];
    let mut phase = Complex64::new(1.0, 0.0);
    for i in 0..n {
        if i > 0 {
            let sub = h[i][i - 1];
            let modulus = sub.norm();
            e[i - 1] = modulus;
            if modulus > 0.0 {
                phase *= sub / modulus;
            }
        }
        if phase != Complex64::new(1.0, 0.0) {
            q[i].iter_mut().for_each(|x| *x *= phase);
        }
    }
    (d, e, q)
}

/// Implicit QL on a symmetric tridiagonal matrix, rotating the columns of `z` along.
fn tql(d: &mut [f64], e: &mut [f64], z: &mut [Vec<Complex64>]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence(MAX_QL_ITERATIONS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (left, right) = z.split_at_mut(i + 1);
                for (zi, zi1) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let f = *zi1;
                    *zi1 = *zi * s + f * c;
                    *zi = *zi * c - f * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
