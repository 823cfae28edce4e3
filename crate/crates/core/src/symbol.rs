//! Symbols on the circle: coefficient series in powers of `B`, Fourier series in
//! powers of `z`, or raw boundary samples, together with the map
//! `Γ(a) = Σ_t a_t B^t` and its norm bounds.

use crate::blaschke::{power_on_circle, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::quadrature::{integrate_mean, CircleGrid, GridFunction};
use num_complex::Complex64;

/// Threshold on `max |Im φ|` for calling a symbol real-valued.
pub const REAL_TOL: f64 = 1e-10;

/// Relative slack used when checking the two-sided norm bounds of `Γ`.
pub const NORM_BOUND_SLACK: f64 = 1e-8;

/// Finite coefficient window `a_t`, `t = t_min..t_min + len`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientWindow {
    t_min: i64,
    coefficients: Vec<Complex64>,
}

impl CoefficientWindow {
    pub fn new(t_min: i64, coefficients: Vec<Complex64>) -> Self {
        Self {
            t_min,
            coefficients,
        }
    }

    /// Window holding only `a_t = value`.
    pub fn single(t: i64, value: Complex64) -> Self {
        Self::new(t, vec![value])
    }

    pub fn t_min(&self) -> i64 {
        self.t_min
    }

    /// Last index in the window; `t_min - 1` when empty.
    pub fn t_max(&self) -> i64 {
        self.t_min + self.coefficients.len() as i64 - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `a_t`, zero outside the window.
    pub fn get(&self, t: i64) -> Complex64 {
        let idx = t - self.t_min;
        if idx < 0 || idx >= self.coefficients.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &a)| (self.t_min + i as i64, a))
    }

    /// Largest `|t|` carrying a nonzero coefficient.
    pub fn max_abs_index(&self) -> usize {
        self.iter()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(t, _)| t.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `Σ |a_t|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `a_{-t} = conj(a_t)` for every `t`.
    pub fn is_hermitian(&self) -> bool {
        let lo = self.t_min.min(-self.t_max());
        let hi = self.t_max().max(-self.t_min);
        (lo..=hi).all(|t| (self.get(-t) - self.get(t).conj()).norm() <= REAL_TOL)
    }

    pub fn linear_combination(
        alpha: Complex64,
        a: &CoefficientWindow,
        beta: Complex64,
        b: &CoefficientWindow,
    ) -> CoefficientWindow {
        let lo = a.t_min.min(b.t_min);
        let hi = a.t_max().max(b.t_max());
        let coefficients = (lo..=hi).map(|t| alpha * a.get(t) + beta * b.get(t)).collect();
        CoefficientWindow::new(lo, coefficients)
    }
}

/// `φ = Σ_t a_t B^t`, an element of the closed span of the powers of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct M1Symbol {
    blaschke: BlaschkeProduct,
    window: CoefficientWindow,
}

impl M1Symbol {
    pub fn new(blaschke: &BlaschkeProduct, window: CoefficientWindow) -> Self {
        Self {
            blaschke: blaschke.clone(),
            window,
        }
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn window(&self) -> &CoefficientWindow {
        &self.window
    }

    /// Same coefficients read against `z^t`: the representative `Σ a_t z^t`.
    pub fn representative(&self) -> FourierSymbol {
        FourierSymbol::new(self.window.clone())
    }

    /// The same coefficients over another Blaschke product.
    pub fn with_blaschke(&self, blaschke: &BlaschkeProduct) -> Self {
        Self::new(blaschke, self.window.clone())
    }
}

/// `φ(z) = Σ_t a_t z^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSymbol {
    window: CoefficientWindow,
}

impl FourierSymbol {
    pub fn new(window: CoefficientWindow) -> Self {
        Self { window }
    }

    pub fn window(&self) -> &CoefficientWindow {
        &self.window
    }

    /// Value at a point of the unit circle.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.window
            .iter()
            .map(|(t, a)| a * power_on_circle(z, t))
            .sum()
    }

    pub fn sample(&self, grid: &CircleGrid) -> GridFunction {
        grid.sample(|z| self.evaluate(z))
    }
}

/// Boundary values of a general symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSymbol(GridFunction);

impl SampledSymbol {
    pub fn new(values: GridFunction) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &GridFunction {
        &self.0
    }

    pub fn into_inner(self) -> GridFunction {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    M1(M1Symbol),
    Fourier(FourierSymbol),
    Sampled(SampledSymbol),
}

impl Symbol {
    /// Boundary values on `grid`. Samples given on a different grid are
    /// carried over by trigonometric interpolation.
    pub fn boundary_values(&self, grid: &CircleGrid) -> GridFunction {
        match self {
            Symbol::M1(s) => gamma_map(s, grid),
            Symbol::Fourier(s) => s.sample(grid),
            Symbol::Sampled(s) => s.values().resample(grid),
        }
    }

    /// Bandwidth used when sizing a default grid.
    pub fn bandwidth(&self) -> usize {
        match self {
            Symbol::M1(s) => s.window.max_abs_index() * s.blaschke.degree(),
            Symbol::Fourier(s) => s.window.max_abs_index(),
            Symbol::Sampled(s) => s.values().effective_bandwidth(1e-14),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Symbol::M1(_) => "m1",
            Symbol::Fourier(_) => "fourier",
            Symbol::Sampled(_) => "samples",
        }
    }
}

/// `Γ(a) = Σ_t a_t B^t` sampled on the circle.
pub fn gamma_map(s: &M1Symbol, grid: &CircleGrid) -> GridFunction {
    let b = s.blaschke.sample(grid);
    b.map(|w| s.window.iter().map(|(t, a)| a * power_on_circle(w, t)).sum())
}

/// `G[row, col] = ⟨B^{t_row}, B^{t_col}⟩` for `t` in `t_min..=t_max`:
/// `δ^{n-k}` when `n >= k`, `conj(δ)^{k-n}` otherwise.
pub fn gram_of_powers(b: &BlaschkeProduct, t_min: i64, t_max: i64) -> CMatrix {
    let delta = b.delta().value();
    let size = (t_max - t_min + 1).max(0) as usize;
    CMatrix::from_fn(size, size, |row, col| {
        if row >= col {
            delta.powu((row - col) as u32)
        } else {
            delta.conj().powu((col - row) as u32)
        }
    })
}

/// The three sides of `(1-|δ|)/2 ‖Γa‖² <= ‖a‖² <= sup|B'| ‖Γa‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBounds {
    pub lhs: f64,
    pub mid: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn norm_bounds_check(s: &M1Symbol, grid: &CircleGrid) -> NormBounds {
    let image = gamma_map(s, grid).norm_sqr();
    let delta = s.blaschke.delta().modulus();
    let lhs = 0.5 * (1.0 - delta) * image;
    let mid = s.window.norm_sqr();
    let rhs = s.blaschke.sup_derivative(grid) * image;
    let within = |a: f64, b: f64| a <= b + NORM_BOUND_SLACK * a.abs().max(b.abs());
    NormBounds {
        lhs,
        mid,
        rhs,
        ok: within(lhs, mid) && within(mid, rhs),
    }
}

/// `f ∘ b_{-λ}`: the coefficients of `f = Σ a_t b_λ^t` read against `z^t`.
///
/// The samples of `f` are evaluated at the reparametrized nodes `b_{-λ}(ξ_m)`
/// through its trigonometric interpolant.
pub fn gamma_inverse_single_zero(lambda: Complex64, f: &SampledSymbol) -> Result<SampledSymbol> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Ok(f.clone());
    }
    compose_moebius_inverse(lambda, f, f.values().grid()).map(SampledSymbol::new)
}

/// Samples of `f ∘ b_{-λ}` on `target`, where `f` is given by samples on any grid.
pub fn compose_moebius_inverse(
    lambda: Complex64,
    f: &SampledSymbol,
    target: &CircleGrid,
) -> Result<GridFunction> {
    if lambda.is_nan() || lambda.norm() >= 1.0 {
        return Err(Error::ZeroOutsideDisk {
            re: lambda.re,
            im: lambda.im,
        });
    }
    let points: Vec<Complex64> = target
        .nodes()
        .iter()
        .map(|&z| (z + lambda) / (1.0 + lambda.conj() * z))
        .collect();
    GridFunction::new(target, f.values().interpolate_at(&points))
}

pub fn real_valued(symbol: &Symbol, grid: &CircleGrid) -> bool {
    symbol.boundary_values(grid).max_imag() <= REAL_TOL
}

/// `∫ h` and `∫ (h ∘ B)|B'|` for the change-of-variable inequality `∫ h <= ∫ (h ∘ B)|B'|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChangeOfVariableCheck {
    pub plain: f64,
    pub composed: f64,
    pub ok: bool,
}

pub fn change_of_variable_check(
    h: impl Fn(Complex64) -> f64,
    b: &BlaschkeProduct,
    grid: &CircleGrid,
) -> ChangeOfVariableCheck {
    let plain = integrate_mean(&grid.sample_real(&h)).re;
    let composed = integrate_mean(&grid.sample(|z| {
        // |B'(ξ)| equals the phase derivative on the circle
        let theta = z.arg();
        Complex64::new(h(b.eval_disk(z)) * b.phase_derivative(theta), 0.0)
    }))
    .re;
    ChangeOfVariableCheck {
        plain,
        composed,
        ok: plain <= composed + 1e-9,
    }
}
