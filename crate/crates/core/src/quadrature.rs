//! Uniform grids on the unit circle, trapezoidal means and discrete Fourier analysis.
//!
//! Every integral in this crate is a mean over the `M`-th roots of unity, i.e. the
//! normalized measure `dξ/2π` is built in. For trigonometric polynomials of degree
//! below `M` the mean is exact; for the rational functions used elsewhere the error
//! decays geometrically in `M`.

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use ndarray::linalg::general_mat_mul;
use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Smallest grid accepted anywhere in the crate.
pub const MIN_GRID_SIZE: usize = 16;

/// Floor applied by [`default_grid_size`].
pub const DEFAULT_MIN_GRID: usize = 4096;

/// `max(4096, next power of two >= 16 * n * (degree + bandwidth))`.
pub fn default_grid_size(n: usize, degree: usize, bandwidth: usize) -> usize {
    let want = 16usize
        .saturating_mul(n.max(1))
        .saturating_mul(degree + bandwidth);
    want.next_power_of_two().max(DEFAULT_MIN_GRID)
}

/// The `M`-th roots of unity `ξ_m = exp(2πi m / M)`.
#[derive(Debug, Clone)]
pub struct CircleGrid {
    nodes: Arc<[Complex64]>,
}

impl CircleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < MIN_GRID_SIZE || !size.is_power_of_two() {
            return Err(Error::InvalidGridSize(size));
        }
        // angles, not repeated multiplication, so nodes stay on the circle
        let nodes = (0..size)
            .map(|m| Complex64::from_polar(1.0, TAU * m as f64 / size as f64))
            .collect();
        Ok(Self { nodes })
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn node(&self, m: usize) -> Complex64 {
        self.nodes[m]
    }

    pub fn angle(&self, m: usize) -> f64 {
        TAU * m as f64 / self.size() as f64
    }

    pub fn sample(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction {
            grid: self.clone(),
            values: self.nodes.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn sample_real(&self, f: impl Fn(Complex64) -> f64) -> GridFunction {
        self.sample(|z| Complex64::new(f(z), 0.0))
    }

    pub fn constant(&self, c: Complex64) -> GridFunction {
        GridFunction {
            grid: self.clone(),
            values: vec![c; self.size()],
        }
    }

    fn check_same(&self, other: &CircleGrid) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::GridMismatch {
                left: self.size(),
                right: other.size(),
            });
        }
        Ok(())
    }
}

impl PartialEq for CircleGrid {
    fn eq(&self, other: &Self) -> bool {
        self.size() == other.size()
    }
}

/// Samples `f(ξ_m)` of a function on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: &CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::SampleCount {
                expected: grid.size(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn conj(&self) -> GridFunction {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, alpha: Complex64) -> GridFunction {
        self.map(|v| v * alpha)
    }

    pub fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<GridFunction> {
        self.grid.check_same(&other.grid)?;
        Ok(GridFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// `‖f‖² = ⟨f, f⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    /// All `M` DFT coefficients, index `k` holding `f̂(k)` for `k < M/2`
    /// and `f̂(k - M)` above.
    fn dft_coefficients(&self) -> Vec<Complex64> {
        let size = self.values.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(size).process(&mut buf);
        let inv = 1.0 / size as f64;
        buf.iter_mut().for_each(|c| *c *= inv);
        buf
    }

    /// Coefficients of the symmetric trigonometric interpolant, Nyquist term split in halves.
    fn interpolant_coefficient(coeffs: &[Complex64], t: i64) -> Complex64 {
        let size = coeffs.len() as i64;
        let half = size / 2;
        if t.abs() > half {
            Complex64::new(0.0, 0.0)
        } else if t.abs() == half {
            coeffs[half as usize] * 0.5
        } else {
            coeffs[t.rem_euclid(size) as usize]
        }
    }

    /// Largest `|t|` whose Fourier coefficient exceeds `rel_tol` times the largest one.
    pub fn effective_bandwidth(&self, rel_tol: f64) -> usize {
        let coeffs = self.dft_coefficients();
        let size = coeffs.len();
        let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0;
        }
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > rel_tol * peak)
            .map(|(k, _)| if k <= size / 2 { k } else { size - k })
            .max()
            .unwrap_or(0)
    }

    /// Trigonometric interpolation onto another uniform grid.
    pub fn resample(&self, target: &CircleGrid) -> GridFunction {
        if target.size() == self.grid.size() {
            return self.clone();
        }
        let coeffs = self.dft_coefficients();
        let size = target.size() as i64;
        let half = size / 2;
        let mut spectrum: Vec<Complex64> = (0..size)
            .map(|k| {
                if k < half {
                    Self::interpolant_coefficient(&coeffs, k)
                } else if k == half {
                    Self::interpolant_coefficient(&coeffs, half)
                        + Self::interpolant_coefficient(&coeffs, -half)
                } else {
                    Self::interpolant_coefficient(&coeffs, k - size)
                }
            })
            .collect();
        FftPlanner::new()
            .plan_fft_inverse(target.size())
            .process(&mut spectrum);
        GridFunction {
            grid: target.clone(),
            values: spectrum,
        }
    }

    /// Evaluates the trigonometric interpolant at arbitrary points of the unit circle.
    pub fn interpolate_at(&self, points: &[Complex64]) -> Vec<Complex64> {
        use rayon::prelude::*;
        let coeffs = self.dft_coefficients();
        let half = (coeffs.len() / 2) as i64;
        let terms: Vec<(i64, Complex64)> = (-half..=half)
            .map(|t| (t, Self::interpolant_coefficient(&coeffs, t)))
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .collect();
        points
            .par_iter()
            .map(|&z| {
                let w = z / z.norm();
                let theta = w.arg();
                let mut acc = Complex64::new(0.0, 0.0);
                let mut prev_t = None;
                let mut power = Complex64::new(1.0, 0.0);
                for &(t, c) in &terms {
                    // re-anchor every 64 steps to keep the power recurrence on the circle
                    power = match prev_t {
                        Some(p) if t - p == 1 && t % 64 != 0 => power * w,
                        _ => Complex64::from_polar(1.0, theta * t as f64),
                    };
                    prev_t = Some(t);
                    acc += c * power;
                }
                acc
            })
            .collect()
    }
}

/// `(1/M) Σ_m f(ξ_m)`, the trapezoidal approximation of `(1/2π)∫_T f`.
pub fn integrate_mean(f: &GridFunction) -> Complex64 {
    f.values.iter().sum::<Complex64>() / f.values.len() as f64
}

/// `(1/M) Σ_m f(ξ_m) conj(g(ξ_m))`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
    f.grid.check_same(&g.grid)?;
    Ok(dot_conj(&f.values, &g.values) / f.values.len() as f64)
}

/// `Σ a_m conj(b_m)` with a fixed summation order.
pub(crate) fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.im * y.re - x.re * y.im;
    }
    Complex64::new(re, im)
}

/// Grid points per block in [`weighted_gram`]; keeps each packed block a few MB.
const GRAM_CHUNK: usize = 2048;

/// `G[row, col] = (1/M) Σ_m w(ξ_m) f_col(ξ_m) conj(f_row(ξ_m))`, with `w = 1` when absent.
///
/// Computed as a sum of blocked complex matrix products over slices of the grid,
/// in a fixed order.
pub(crate) fn weighted_gram(funcs: &[GridFunction], weight: Option<&GridFunction>) -> Result<CMatrix> {
    let dim = funcs.len();
    let Some(first) = funcs.first() else {
        return Ok(CMatrix::zeros(0, 0));
    };
    let grid = first.grid();
    for f in funcs.iter().chain(weight) {
        grid.check_same(f.grid())?;
    }
    let size = grid.size();
    let mut acc = Array2::<Complex64>::zeros((dim, dim));
    let mut start = 0;
    while start < size {
        let len = GRAM_CHUNK.min(size - start);
        let left = Array2::from_shape_fn((dim, len), |(row, m)| funcs[row].values[start + m].conj());
        let right = Array2::from_shape_fn((len, dim), |(m, col)| {
            let v = funcs[col].values[start + m];
            match weight {
                Some(w) => v * w.values[start + m],
                None => v,
            }
        });
        general_mat_mul(Complex64::new(1.0, 0.0), &left, &right, Complex64::new(1.0, 0.0), &mut acc);
        start += len;
    }
    let inv = 1.0 / size as f64;
    Ok(CMatrix::from_row_major(dim, dim, acc.iter().map(|v| v * inv).collect()))
}

/// Fourier coefficients `f̂(t)` for `t` in `t_min..=t_max`, computed by one DFT of length `M`.
pub fn fourier_coefficients(f: &GridFunction, t_min: i64, t_max: i64) -> Result<Vec<Complex64>> {
    let size = f.grid.size();
    if t_max < t_min || (t_max - t_min) as u64 >= size as u64 {
        return Err(Error::WindowTooWide {
            t_min,
            t_max,
            size,
        });
    }
    let coeffs = f.dft_coefficients();
    Ok((t_min..=t_max)
        .map(|t| coeffs[t.rem_euclid(size as i64) as usize])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn grid_validation() {
        assert!(CircleGrid::new(8).is_err());
        assert!(CircleGrid::new(48).is_err());
        let g = CircleGrid::new(64).unwrap();
        assert_eq!(g.size(), 64);
        for z in g.nodes() {
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
        assert!(close(g.node(16), Complex64::i(), 1e-15));
    }

    #[test]
    fn default_grid_rule() {
        assert_eq!(default_grid_size(1, 1, 0), 4096);
        assert_eq!(default_grid_size(256, 1, 1), 8192);
        assert_eq!(default_grid_size(128, 2, 4), 16384);
    }

    #[test]
    fn integrate_mean_examples() {
        let g = CircleGrid::new(4096).unwrap();
        let one = g.constant(Complex64::new(1.0, 0.0));
        assert!(close(integrate_mean(&one), Complex64::new(1.0, 0.0), 1e-15));
        assert!(integrate_mean(&g.sample(|z| z)).norm() < 1e-15);
        // (1 - 1/4) / |1 - ξ/2|^2 = ‖k_{1/2}‖^2 = 1, summed by hand
        let kernel = g.sample_real(|z| 0.75 / (Complex64::new(1.0, 0.0) - z * 0.5).norm_sqr());
        let brute: f64 = (0..4096)
            .map(|m| {
                let th = TAU * m as f64 / 4096.0;
                0.75 / (1.25 - th.cos())
            })
            .sum::<f64>()
            / 4096.0;
        assert!((brute - 1.0).abs() < 1e-13);
        assert!(close(integrate_mean(&kernel), Complex64::new(1.0, 0.0), 1e-13));
    }

    #[test]
    fn inner_product_examples() {
        let g = CircleGrid::new(4096).unwrap();
        let one = g.constant(Complex64::new(1.0, 0.0));
        assert!(close(inner_product(&one, &one).unwrap(), Complex64::new(1.0, 0.0), 1e-15));
        let z1 = g.sample(|z| z);
        let z2 = g.sample(|z| z * z);
        assert!(inner_product(&z1, &z2).unwrap().norm() < 1e-14);

        // k_{1/2} against b_{1/2} k_{1/2}
        let lam: f64 = 0.5;
        let k = g.sample(|z| Complex64::new((1.0 - lam * lam).sqrt(), 0.0) / (1.0 - lam * z));
        let bk = g.sample(|z| {
            (z - lam) / (1.0 - lam * z) * (1.0 - lam * lam).sqrt() / (1.0 - lam * z)
        });
        assert!(inner_product(&k, &bk).unwrap().norm() < 1e-13);

        let other = CircleGrid::new(32).unwrap().constant(Complex64::new(1.0, 0.0));
        assert!(matches!(
            inner_product(&one, &other),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_is_conjugate_symmetric() {
        let g = CircleGrid::new(256).unwrap();
        let f = g.sample(|z| z * z + Complex64::new(0.3, -1.0) / (2.0 - z));
        let h = g.sample(|z| z.conj() * Complex64::new(0.0, 2.0) + 1.0);
        let a = inner_product(&f, &h).unwrap();
        let b = inner_product(&h, &f).unwrap();
        assert!(close(a, b.conj(), 1e-15));
    }

    #[test]
    fn fourier_coefficient_examples() {
        let g = CircleGrid::new(64).unwrap();
        let c = fourier_coefficients(&g.sample(|z| z), -1, 1).unwrap();
        assert!(close(c[0], 0.0.into(), 1e-15));
        assert!(close(c[1], 0.0.into(), 1e-15));
        assert!(close(c[2], 1.0.into(), 1e-15));
        let c = fourier_coefficients(&g.constant(5.0.into()), 0, 0).unwrap();
        assert!(close(c[0], 5.0.into(), 1e-14));

        let big = CircleGrid::new(4096).unwrap();
        let b = big.sample(|z| (z - 0.5) / (1.0 - 0.5 * z));
        let direct: Complex64 = b.values().iter().sum::<Complex64>() / 4096.0;
        assert!(close(direct, (-0.5).into(), 1e-14));
        let c = fourier_coefficients(&b, 0, 0).unwrap();
        assert!(close(c[0], (-0.5).into(), 1e-14));
    }

    #[test]
    fn window_wider_than_grid_fails() {
        let g = CircleGrid::new(16).unwrap();
        let f = g.constant(1.0.into());
        assert!(fourier_coefficients(&f, -8, 7).is_ok());
        assert!(matches!(
            fourier_coefficients(&f, -8, 8),
            Err(Error::WindowTooWide { .. })
        ));
    }

    #[test]
    fn exact_for_trigonometric_polynomials() {
        let g = CircleGrid::new(64).unwrap();
        let coeff = |t: i64| Complex64::new(1.0 / (1 + t.abs()) as f64, 0.1 * t as f64);
        let p = g.sample(|z| {
            (-31i64..=31)
                .map(|t| coeff(t) * z.powi(t as i32))
                .sum::<Complex64>()
        });
        assert!(close(integrate_mean(&p), coeff(0), 1e-13));
        // grid Parseval
        let c = fourier_coefficients(&p, -31, 31).unwrap();
        let energy: f64 = c.iter().map(|c| c.norm_sqr()).sum();
        assert!((energy - inner_product(&p, &p).unwrap().re).abs() < 1e-12);
    }

    #[test]
    fn doubling_stability_for_smooth_integrand() {
        let f = |z: Complex64| 1.0 / ((2.0 - z) * (2.0 - z.conj()));
        let a = integrate_mean(&CircleGrid::new(128).unwrap().sample(f));
        let b = integrate_mean(&CircleGrid::new(256).unwrap().sample(f));
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn resample_and_interpolate_band_limited() {
        let f = |z: Complex64| z * 2.0 + z.conj().powi(3) + Complex64::new(0.0, 1.0);
        let coarse = CircleGrid::new(16).unwrap().sample(f);
        let fine_grid = CircleGrid::new(64).unwrap();
        let up = coarse.resample(&fine_grid);
        assert!(up.max_abs_diff(&fine_grid.sample(f)).unwrap() < 1e-13);
        let down = up.resample(coarse.grid());
        assert!(down.max_abs_diff(&coarse).unwrap() < 1e-13);
        let pts = [Complex64::from_polar(1.0, 0.123), Complex64::from_polar(1.0, -2.5)];
        for (p, v) in pts.iter().zip(coarse.interpolate_at(&pts)) {
            assert!(close(v, f(*p), 1e-13));
        }
        assert_eq!(coarse.effective_bandwidth(1e-12), 3);
    }
}
