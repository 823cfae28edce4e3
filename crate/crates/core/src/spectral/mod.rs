//! Spectra of compressed Toeplitz matrices and their limiting distributions.

mod distribution;
mod eigen;
mod experiment;
mod svd;

pub use distribution::{
    empirical_average, limit_integral, Hat, TestFunctionFamily, DEFAULT_CENTERS, DEFAULT_WIDTHS,
};
pub use eigen::{hermitian_eigen, HermitianEigen, HERMITIAN_TOL, MAX_QL_ITERATIONS};
pub use experiment::{
    limit_function, szego_experiment, ConvergenceSummary, DistributionReport, DistributionRow,
    ExperimentConfig, PathChoice, CSV_HEADER, LIMIT_GRID_SIZE, TREND_ALLOWANCE, TREND_FLOOR,
};
pub use svd::{singular_value_decomposition, Svd, MAX_SWEEPS};

use crate::compression::CompressedMatrix;
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Eigen,
    Singular,
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumKind::Eigen => "eigen",
            SpectrumKind::Singular => "singular",
        })
    }
}

impl FromStr for SpectrumKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "eigen" => Ok(SpectrumKind::Eigen),
            "singular" => Ok(SpectrumKind::Singular),
            other => Err(format!("unknown spectrum kind {other:?}")),
        }
    }
}

/// Sorted eigenvalues or singular values with the solver residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub values: Vec<f64>,
    pub kind: SpectrumKind,
    pub residual: f64,
}

/// Real eigenvalues of a Hermitian compression. Non-Hermitian input is an error.
pub fn hermitian_eigenvalues(a: &CompressedMatrix) -> Result<SpectrumResult> {
    let e = hermitian_eigen(a.matrix())?;
    Ok(SpectrumResult {
        values: e.values,
        kind: SpectrumKind::Eigen,
        residual: e.residual,
    })
}

pub fn singular_values(a: &CompressedMatrix) -> Result<SpectrumResult> {
    let s = singular_value_decomposition(a.matrix())?;
    Ok(SpectrumResult {
        values: s.values,
        kind: SpectrumKind::Singular,
        residual: s.residual,
    })
}

pub fn spectrum(a: &CompressedMatrix, kind: SpectrumKind) -> Result<SpectrumResult> {
    match kind {
        SpectrumKind::Eigen => hermitian_eigenvalues(a),
        SpectrumKind::Singular => singular_values(a),
    }
}
