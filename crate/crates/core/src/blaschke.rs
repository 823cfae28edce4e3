//! Finite Blaschke products `B(z) = ∏_j ((z - λ_j) / (1 - conj(λ_j) z))^{m_j}`.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_mean, CircleGrid, GridFunction};
use num_complex::Complex64;

const POLE_TOL: f64 = 1e-14;

/// A zero `λ` of multiplicity `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub point: Complex64,
    pub multiplicity: usize,
}

/// Finite Blaschke product with distinct zeros stored in a fixed order.
///
/// The order matters: the Malmquist basis uses partial products over the
/// zeros preceding `λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Zero>,
}

/// `δ = B(0) = ∏_j (-λ_j)^{m_j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaScalar(Complex64);

impl DeltaScalar {
    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

fn check_disk(lambda: Complex64) -> Result<()> {
    if lambda.is_nan() || lambda.norm() >= 1.0 {
        return Err(Error::ZeroOutsideDisk {
            re: lambda.re,
            im: lambda.im,
        });
    }
    Ok(())
}

/// The single factor `b_λ(z) = (z - λ) / (1 - conj(λ) z)`.
pub fn moebius(lambda: Complex64, z: Complex64) -> Result<Complex64> {
    check_disk(lambda)?;
    factor(lambda, z)
}

fn factor(lambda: Complex64, z: Complex64) -> Result<Complex64> {
    let den = 1.0 - lambda.conj() * z;
    if den.norm() <= POLE_TOL {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok((z - lambda) / den)
}

/// `b_λ(b_{-λ}(z))`, which is `z` for every `|λ| < 1`.
pub fn compose_moebius(lambda: Complex64, z: Complex64) -> Result<Complex64> {
    let inner = moebius(-lambda, z)?;
    moebius(lambda, inner)
}

impl BlaschkeProduct {
    /// Builds a product from `(λ_j, m_j)` pairs. Zeros must be distinct, inside the
    /// open disk, with positive multiplicity; at least one zero is required.
    pub fn new(zeros: impl IntoIterator<Item = (Complex64, usize)>) -> Result<Self> {
        let mut out: Vec<Zero> = Vec::new();
        for (point, multiplicity) in zeros {
            check_disk(point)?;
            if multiplicity == 0 {
                return Err(Error::ZeroMultiplicity);
            }
            if out.iter().any(|z| z.point == point) {
                return Err(Error::RepeatedZero {
                    re: point.re,
                    im: point.im,
                });
            }
            out.push(Zero {
                point,
                multiplicity,
            });
        }
        if out.is_empty() {
            return Err(Error::NoZeros);
        }
        Ok(Self { zeros: out })
    }

    /// `B(z) = z`.
    pub fn identity() -> Self {
        Self {
            zeros: vec![Zero {
                point: Complex64::new(0.0, 0.0),
                multiplicity: 1,
            }],
        }
    }

    /// `B = b_λ^m`.
    pub fn single(lambda: Complex64, multiplicity: usize) -> Result<Self> {
        Self::new([(lambda, multiplicity)])
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    /// Number of distinct zeros `p`.
    pub fn distinct_zeros(&self) -> usize {
        self.zeros.len()
    }

    /// `|Z(B)| = Σ_j m_j`.
    pub fn degree(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.zeros.len() == 1
            && self.zeros[0].multiplicity == 1
            && self.zeros[0].point == Complex64::new(0.0, 0.0)
    }

    /// The zero of a single-factor product `b_λ`, if that is what this is.
    pub fn single_simple_zero(&self) -> Option<Complex64> {
        match self.zeros.as_slice() {
            [z] if z.multiplicity == 1 => Some(z.point),
            _ => None,
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for zero in &self.zeros {
            acc *= factor(zero.point, z)?.powu(zero.multiplicity as u32);
        }
        Ok(acc)
    }

    /// Evaluation at a point of the closed disk, where no pole can occur.
    pub(crate) fn eval_disk(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for zero in &self.zeros {
            let b = (z - zero.point) / (1.0 - zero.point.conj() * z);
            acc *= b.powu(zero.multiplicity as u32);
        }
        acc
    }

    /// `B'(z)` by the product rule, valid at the zeros as well.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let factors = self
            .zeros
            .iter()
            .map(|zero| factor(zero.point, z))
            .collect::<Result<Vec<_>>>()?;
        let mut total = Complex64::new(0.0, 0.0);
        for (j, zero) in self.zeros.iter().enumerate() {
            let lam = zero.point;
            let m = zero.multiplicity as u32;
            let den = 1.0 - lam.conj() * z;
            let db = (1.0 - lam.norm_sqr()) / (den * den);
            let mut term = db * f64::from(m) * factors[j].powu(m - 1);
            for (i, other) in self.zeros.iter().enumerate() {
                if i != j {
                    term *= factors[i].powu(other.multiplicity as u32);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// `d/dθ arg B(e^{iθ}) = Σ_j m_j (1 - |λ_j|²) / |1 - conj(λ_j) e^{iθ}|²`, which equals `|B'(e^{iθ})|`.
    pub fn phase_derivative(&self, theta: f64) -> f64 {
        let xi = Complex64::from_polar(1.0, theta);
        self.zeros
            .iter()
            .map(|z| {
                z.multiplicity as f64 * (1.0 - z.point.norm_sqr())
                    / (1.0 - z.point.conj() * xi).norm_sqr()
            })
            .sum()
    }

    pub fn sample(&self, grid: &CircleGrid) -> GridFunction {
        grid.sample(|z| self.eval_disk(z))
    }

    /// Samples of `B^t` on the circle; negative powers use `conj(B)` since `|B| = 1` there.
    pub fn sample_power(&self, grid: &CircleGrid, t: i64) -> GridFunction {
        grid.sample(|z| power_on_circle(self.eval_disk(z), t))
    }

    /// Samples of `B'(ξ)`.
    pub fn derivative_on_circle(&self, grid: &CircleGrid) -> GridFunction {
        grid.sample(|z| {
            // |z| = 1 keeps every denominator away from zero
            let b = self.eval_disk(z);
            let log_deriv: Complex64 = self
                .zeros
                .iter()
                .map(|zero| {
                    let lam = zero.point;
                    zero.multiplicity as f64 * (1.0 - lam.norm_sqr())
                        / ((z - lam) * (1.0 - lam.conj() * z))
                })
                .sum();
            b * log_deriv
        })
    }

    /// `max_m |B'(ξ_m)|`.
    pub fn sup_derivative(&self, grid: &CircleGrid) -> f64 {
        (0..grid.size())
            .map(|m| self.phase_derivative(grid.angle(m)))
            .fold(0.0, f64::max)
    }

    /// Argument-principle quadrature `(1/2πi)∮ B'/B`, as the grid mean of `ξ B'(ξ)/B(ξ)`.
    pub fn winding_number(&self, grid: &CircleGrid) -> f64 {
        let integrand = grid.sample(|z| {
            self.zeros
                .iter()
                .map(|zero| {
                    let lam = zero.point;
                    z * zero.multiplicity as f64 * (1.0 - lam.norm_sqr())
                        / ((z - lam) * (1.0 - lam.conj() * z))
                })
                .sum()
        });
        integrate_mean(&integrand).re
    }

    /// Increments `arg(B(ξ_{m+1}) / B(ξ_m))` around the grid, wrapping at the end.
    ///
    /// Each increment is the principal-branch phase step, so it equals the
    /// increment of the unwrapped argument whenever the true step is below `π`.
    pub fn phase_increments(&self, grid: &CircleGrid) -> Vec<f64> {
        let values = self.sample(grid).into_values();
        let size = values.len();
        (0..size)
            .map(|m| (values[(m + 1) % size] * values[m].conj()).arg())
            .collect()
    }

    pub fn delta(&self) -> DeltaScalar {
        DeltaScalar(
            self.zeros
                .iter()
                .map(|z| (-z.point).powu(z.multiplicity as u32))
                .product(),
        )
    }
}

/// `w^t` for unimodular `w`, with `w^{-1} = conj(w)`.
pub(crate) fn power_on_circle(w: Complex64, t: i64) -> Complex64 {
    if t >= 0 {
        w.powu(t as u32)
    } else {
        w.conj().powu(t.unsigned_abs() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn b_half() -> BlaschkeProduct {
        BlaschkeProduct::single(c(0.5, 0.0), 1).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(matches!(
            BlaschkeProduct::new([(c(1.2, 0.0), 1)]),
            Err(Error::ZeroOutsideDisk { .. })
        ));
        assert!(BlaschkeProduct::new([(c(1.0, 0.0), 1)]).is_err());
        assert!(matches!(
            BlaschkeProduct::new(Vec::new()),
            Err(Error::NoZeros)
        ));
        assert!(matches!(
            BlaschkeProduct::new([(c(0.1, 0.0), 0)]),
            Err(Error::ZeroMultiplicity)
        ));
        assert!(matches!(
            BlaschkeProduct::new([(c(0.1, 0.0), 1), (c(0.1, 0.0), 2)]),
            Err(Error::RepeatedZero { .. })
        ));
        let b = BlaschkeProduct::new([(c(0.5, 0.0), 1), (c(-0.3, 0.4), 2)]).unwrap();
        assert_eq!(b.degree(), 3);
        assert_eq!(b.distinct_zeros(), 2);
        assert!(BlaschkeProduct::identity().is_identity());
    }

    #[test]
    fn evaluate_examples() {
        let b = b_half();
        assert!(b.evaluate(c(0.5, 0.0)).unwrap().norm() < 1e-16);
        assert!((b.evaluate(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-16);
        // b_λ(0) = -λ
        assert!((b.evaluate(c(0.0, 0.0)).unwrap() - (-0.5)).norm() < 1e-16);
        // reflected zero 1/conj(λ) = 2 is a pole
        assert!(matches!(b.evaluate(c(2.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn unimodular_on_grid() {
        let b = BlaschkeProduct::new([(c(0.5, 0.0), 1), (c(-0.3, 0.4), 2), (c(0.0, -0.9), 1)])
            .unwrap();
        let g = CircleGrid::new(4096).unwrap();
        let dev = b
            .sample(&g)
            .values()
            .iter()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-12);
    }

    fn fd_phase_derivative(b: &BlaschkeProduct, theta: f64) -> f64 {
        let h = 1e-5;
        let p = b.evaluate(Complex64::from_polar(1.0, theta + h)).unwrap();
        let m = b.evaluate(Complex64::from_polar(1.0, theta - h)).unwrap();
        (p * m.conj()).arg() / (2.0 * h)
    }

    #[test]
    fn derivative_examples_against_finite_differences() {
        let g = CircleGrid::new(64).unwrap();
        let id = BlaschkeProduct::identity().derivative_on_circle(&g);
        assert!(id.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));

        let b = b_half();
        assert!((fd_phase_derivative(&b, 0.0) - 3.0).abs() < 1e-8);
        assert!((b.derivative_on_circle(&g).values()[0].norm() - 3.0).abs() < 1e-13);
        assert!((b.phase_derivative(0.0) - 3.0).abs() < 1e-13);

        let b2 = BlaschkeProduct::single(c(0.5, 0.0), 2).unwrap();
        assert!((fd_phase_derivative(&b2, 0.0) - 6.0).abs() < 1e-8);
        assert!((b2.derivative_on_circle(&g).values()[0].norm() - 6.0).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_modulus_formula_everywhere() {
        let b = BlaschkeProduct::new([(c(0.2, -0.6), 1), (c(-0.7, 0.1), 3)]).unwrap();
        let g = CircleGrid::new(256).unwrap();
        let d = b.derivative_on_circle(&g);
        for m in 0..g.size() {
            let th = g.angle(m);
            assert!((d.values()[m].norm() - b.phase_derivative(th)).abs() < 1e-11);
            assert!((fd_phase_derivative(&b, th) - b.phase_derivative(th)).abs() < 1e-5);
            let pr = b.derivative(g.node(m)).unwrap();
            assert!((pr - d.values()[m]).norm() < 1e-11);
        }
    }

    #[test]
    fn winding_examples() {
        let g = CircleGrid::new(4096).unwrap();
        assert!((BlaschkeProduct::identity().winding_number(&g) - 1.0).abs() < 1e-12);
        let b = BlaschkeProduct::new([(c(0.5, 0.0), 1), (c(-0.3, 0.0), 1)]).unwrap();
        assert!((b.winding_number(&g) - 2.0).abs() < 1e-6);
        let b3 = BlaschkeProduct::single(c(0.5, 0.0), 3).unwrap();
        assert!((b3.winding_number(&g) - 3.0).abs() < 1e-6);
    }

    #[test]
    fn phase_is_increasing() {
        let b = BlaschkeProduct::new([(c(0.9, 0.0), 2), (c(-0.3, 0.4), 1)]).unwrap();
        let g = CircleGrid::new(4096).unwrap();
        let inc = b.phase_increments(&g);
        assert!(inc.iter().all(|&d| d > 0.0));
        // increments add up to 2π times the degree
        let total: f64 = inc.iter().sum();
        assert!((total / (2.0 * PI) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn moebius_inverse_examples() {
        let z = c(0.3, -0.2);
        assert_eq!(compose_moebius(c(0.0, 0.0), z).unwrap(), z);
        assert!(moebius(c(0.5, 0.0), compose_moebius(c(0.0, 0.0), z).unwrap()).is_ok());
        assert!((moebius(c(-0.5, 0.0), c(0.0, 0.0)).unwrap() - 0.5).norm() < 1e-16);
        assert!(compose_moebius(c(0.5, 0.0), c(0.0, 0.0)).unwrap().norm() < 1e-16);
        let w = Complex64::from_polar(1.0, PI / 3.0);
        assert!((compose_moebius(c(0.3, 0.4), w).unwrap() - w).norm() < 1e-13);
        assert!(matches!(
            compose_moebius(c(1.0, 0.0), w),
            Err(Error::ZeroOutsideDisk { .. })
        ));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(BlaschkeProduct::identity().delta().value(), c(0.0, 0.0));
        assert!((b_half().delta().value() - b_half().evaluate(c(0.0, 0.0)).unwrap()).norm() < 1e-16);
        assert!((b_half().delta().value() - (-0.5)).norm() < 1e-16);
        let b = BlaschkeProduct::new([(c(0.5, 0.0), 1), (c(-0.3, 0.0), 1)]).unwrap();
        // (-0.5) * (0.3)
        assert!((b.delta().value() - (-0.15)).norm() < 1e-15);
        assert!((b.delta().value() - b.evaluate(c(0.0, 0.0)).unwrap()).norm() < 1e-15);
        let b3 = BlaschkeProduct::new([(c(0.5, 0.0), 1), (c(-0.3, 0.4), 2)]).unwrap();
        assert!((b3.delta().value() - b3.evaluate(c(0.0, 0.0)).unwrap()).norm() < 1e-15);
        assert!(b3.delta().modulus() < 1.0);
    }
}
