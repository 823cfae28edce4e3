//! Test functions and the two sides of the distribution limit.

use crate::quadrature::GridFunction;
use serde::{Deserialize, Serialize};

/// `G(x) = max(0, 1 - |x - center| / width)`, continuous with support `[center - width, center + width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hat {
    pub center: f64,
    pub width: f64,
}

impl Hat {
    pub fn new(center: f64, width: f64) -> Self {
        assert!(width > 0.0, "hat width must be positive");
        Self { center, width }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (1.0 - (x - self.center).abs() / self.width).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionFamily {
    pub hats: Vec<Hat>,
}

/// Widths of the default family.
pub const DEFAULT_WIDTHS: [f64; 3] = [1.0, 0.5, 0.25];

/// Centers per width in the default family.
pub const DEFAULT_CENTERS: usize = 5;

impl TestFunctionFamily {
    /// Every center paired with every width, widths outermost.
    pub fn grid(centers: &[f64], widths: &[f64]) -> Self {
        Self {
            hats: widths
                .iter()
                .flat_map(|&w| centers.iter().map(move |&c| Hat::new(c, w)))
                .collect(),
        }
    }

    /// Hats of widths 1, 1/2, 1/4 at equally spaced centers across `[lo, hi]`.
    pub fn spanning(lo: f64, hi: f64) -> Self {
        let centers: Vec<f64> = if hi > lo {
            (0..DEFAULT_CENTERS)
                .map(|i| lo + (hi - lo) * i as f64 / (DEFAULT_CENTERS - 1) as f64)
                .collect()
        } else {
            vec![lo]
        };
        Self::grid(&centers, &DEFAULT_WIDTHS)
    }
}

/// `(1/dim) Σ_k G(value_k)`.
pub fn empirical_average(values: &[f64], g: &Hat) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().map(|&x| g.eval(x)).sum::<f64>() / values.len() as f64
}

/// `(1/2π) ∫_T G(g(ξ)) dξ` as a grid mean, reading the real part of `g`.
pub fn limit_integral(g: &GridFunction, hat: &Hat) -> f64 {
    let vals = g.values();
    vals.iter().map(|v| hat.eval(v.re)).sum::<f64>() / vals.len() as f64
}
