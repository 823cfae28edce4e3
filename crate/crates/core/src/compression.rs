//! Matrices of the compressed Toeplitz operator `T_{φ, K_{B^n}}` in the Malmquist basis.
//!
//! Entry convention throughout: `A[row, col] = ⟨φ · u_col, u_row⟩`. Columns index
//! the input vector, so inside a diagonal block the entry at offsets `(l, i)` is
//! the coefficient `a_{l-i}`.

use crate::blaschke::{power_on_circle, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::malmquist::{basis_element, MalmquistBasis};
use crate::matrix::CMatrix;
use crate::quadrature::{inner_product, weighted_gram, CircleGrid, GridFunction};
use crate::symbol::{CoefficientWindow, FourierSymbol, M1Symbol};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompressionPath {
    Analytic,
    Quadrature,
}

impl fmt::Display for CompressionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompressionPath::Analytic => "analytic",
            CompressionPath::Quadrature => "quadrature",
        })
    }
}

/// `n × n` Toeplitz matrix with entry `(l, i) = a_{l-i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalToeplitz {
    n: usize,
    /// `a_d` for `d = -(n-1)..=(n-1)`.
    diagonals: Vec<Complex64>,
}

impl ClassicalToeplitz {
    pub fn size(&self) -> usize {
        self.n
    }

    /// `a_d`, the value on the `d`-th diagonal (`d = row - col`).
    pub fn diagonal(&self, d: i64) -> Complex64 {
        self.diagonals[(d + self.n as i64 - 1) as usize]
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |l, i| self.diagonal(l as i64 - i as i64))
    }
}

/// The matrix of `T_{φ, K_{z^n}}` in the monomial basis.
pub fn classical_toeplitz(symbol: &FourierSymbol, n: usize) -> ClassicalToeplitz {
    let window = symbol.window();
    let span = n as i64 - 1;
    ClassicalToeplitz {
        n,
        diagonals: (-span..=span).map(|d| window.get(d)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedMatrix {
    matrix: CMatrix,
    degree: usize,
    n: usize,
    path: CompressionPath,
    symbol: String,
}

impl CompressedMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `|Z(B)|`, the number of diagonal blocks under the block-diagonal structure.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn path(&self) -> CompressionPath {
        self.path
    }

    /// Short description of the symbol the matrix was built from.
    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    /// Wraps an arbitrary square matrix, e.g. for feeding the spectral routines.
    pub fn from_parts(
        matrix: CMatrix,
        degree: usize,
        n: usize,
        path: CompressionPath,
        symbol: impl Into<String>,
    ) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != degree * n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} blocks of size {}",
                matrix.rows(),
                matrix.cols(),
                degree,
                n
            )));
        }
        Ok(Self {
            matrix,
            degree,
            n,
            path,
            symbol: symbol.into(),
        })
    }
}

/// Entrywise quadrature `⟨φ u_col, u_row⟩` against the basis samples.
pub fn compress_quadrature(phi: &GridFunction, basis: &MalmquistBasis) -> Result<CompressedMatrix> {
    if phi.grid() != basis.grid() {
        return Err(Error::GridMismatch {
            left: phi.grid().size(),
            right: basis.grid().size(),
        });
    }
    let matrix = weighted_gram(basis.elements(), Some(phi))?;
    Ok(CompressedMatrix {
        matrix,
        degree: basis.blaschke().degree(),
        n: basis.n(),
        path: CompressionPath::Quadrature,
        symbol: "samples".into(),
    })
}

/// Block-diagonal assembly from the coefficients alone: `|Z(B)|` copies of the
/// `n × n` Toeplitz matrix `(a_{l-i})`. No quadrature is involved.
pub fn compress_analytic(s: &M1Symbol, n: usize) -> Result<CompressedMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let degree = s.blaschke().degree();
    let block = classical_toeplitz(&s.representative(), n);
    let dim = degree * n;
    let matrix = CMatrix::from_fn(dim, dim, |row, col| {
        if row / n == col / n {
            block.diagonal((row % n) as i64 - (col % n) as i64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(CompressedMatrix {
        matrix,
        degree,
        n,
        path: CompressionPath::Analytic,
        symbol: "m1".into(),
    })
}

/// Quadrature value of `⟨B^t B^i e_j^r, B^l e_k^s⟩` (zero-based `j`, `k`).
#[allow(clippy::too_many_arguments)]
pub fn shifted_inner_product(
    b: &BlaschkeProduct,
    i: usize,
    l: usize,
    t: i64,
    (j, r): (usize, usize),
    (k, s): (usize, usize),
    grid: &CircleGrid,
) -> Result<Complex64> {
    let left_base = basis_element(b, j, r, grid)?;
    let right_base = basis_element(b, k, s, grid)?;
    let powers = b.sample(grid);
    let left = left_base
        .zip_with(&powers, |e, w| e * power_on_circle(w, t + i as i64))?;
    let right = right_base.zip_with(&powers, |e, w| e * w.powu(l as u32))?;
    inner_product(&left, &right)
}

/// How far a matrix is from `|Z(B)|` identical Toeplitz blocks on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockDeviation {
    /// Largest entry outside the diagonal blocks.
    pub offdiag: f64,
    /// Largest max-norm difference between two diagonal blocks.
    pub blockspread: f64,
    /// Largest deviation from constant diagonals inside a block.
    pub toeplitzspread: f64,
}

pub fn block_deviation(a: &CompressedMatrix) -> BlockDeviation {
    let n = a.n;
    let blocks = a.degree;
    let m = &a.matrix;
    let mut offdiag = 0.0f64;
    for row in 0..m.rows() {
        for col in 0..m.cols() {
            if row / n != col / n {
                offdiag = offdiag.max(m[(row, col)].norm());
            }
        }
    }
    let diag_blocks: Vec<CMatrix> = (0..blocks).map(|q| m.block(q * n, q * n, n)).collect();
    let mut blockspread = 0.0f64;
    for p in 0..blocks {
        for q in p + 1..blocks {
            blockspread = blockspread.max(diag_blocks[p].max_abs_diff(&diag_blocks[q]));
        }
    }
    let mut toeplitzspread = 0.0f64;
    for blk in &diag_blocks {
        for row in 1..n {
            for col in 1..n {
                toeplitzspread =
                    toeplitzspread.max((blk[(row, col)] - blk[(row - 1, col - 1)]).norm());
            }
        }
    }
    BlockDeviation {
        offdiag,
        blockspread,
        toeplitzspread,
    }
}

/// Toeplitz matrix from a coefficient window, shorthand for tests and callers
/// that have raw coefficients.
pub fn toeplitz_from_window(window: &CoefficientWindow, n: usize) -> CMatrix {
    classical_toeplitz(&FourierSymbol::new(window.clone()), n).to_matrix()
}
