//! The ordered orthonormal basis of the model space `K_{B^n}`.
//!
//! For `B = ∏_j b_{λ_j}^{m_j}` the basis of `K_B` is
//! `e_j^r = b_{λ_j}^r · ∏_{i<j} b_{λ_i}^{m_i} · k_{λ_j}` and the basis of `K_{B^n}`
//! adds the shifts `B^k e_j^r`, `k = 0..n`. Elements are laid out with the
//! pair `(j, r)` outermost and the power `k` innermost, so the flat index is
//! `block(j, r) * n + k` with `block(j, r) = Σ_{i<j} m_i + r`. Under this
//! layout the compression of a symbol in the closed span of `{B^t}` is
//! block diagonal with identical Toeplitz blocks.

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::quadrature::{weighted_gram, CircleGrid, GridFunction};
use num_complex::Complex64;
use rayon::prelude::*;

/// Position of `B^k e_j^r` in the basis. `j` counts distinct zeros from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub j: usize,
    pub r: usize,
    pub k: usize,
}

/// Samples of the normalized reproducing kernel `k_λ(z) = (1 - |λ|²)^{1/2} / (1 - conj(λ) z)`.
pub fn kernel_sample(lambda: Complex64, grid: &CircleGrid) -> Result<GridFunction> {
    if lambda.is_nan() || lambda.norm() >= 1.0 {
        return Err(Error::ZeroOutsideDisk {
            re: lambda.re,
            im: lambda.im,
        });
    }
    let scale = (1.0 - lambda.norm_sqr()).sqrt();
    Ok(grid.sample(|z| scale / (1.0 - lambda.conj() * z)))
}

fn check_pair(b: &BlaschkeProduct, j: usize, r: usize) -> Result<()> {
    match b.zeros().get(j) {
        Some(zero) if r < zero.multiplicity => Ok(()),
        _ => Err(Error::IndexOutOfRange { j, r }),
    }
}

fn element_value(b: &BlaschkeProduct, j: usize, r: usize, z: Complex64) -> Complex64 {
    let zeros = b.zeros();
    let lam = zeros[j].point;
    let den = 1.0 - lam.conj() * z;
    let mut v = (1.0 - lam.norm_sqr()).sqrt() / den;
    v *= ((z - lam) / den).powu(r as u32);
    for zero in &zeros[..j] {
        let b_i = (z - zero.point) / (1.0 - zero.point.conj() * z);
        v *= b_i.powu(zero.multiplicity as u32);
    }
    v
}

/// Samples of `e_j^r` (zero-based `j`).
pub fn basis_element(b: &BlaschkeProduct, j: usize, r: usize, grid: &CircleGrid) -> Result<GridFunction> {
    check_pair(b, j, r)?;
    Ok(grid.sample(|z| element_value(b, j, r, z)))
}

/// Samples of `B^k e_j^r`.
pub fn shifted_element(
    b: &BlaschkeProduct,
    index: BasisIndex,
    grid: &CircleGrid,
) -> Result<GridFunction> {
    check_pair(b, index.j, index.r)?;
    Ok(grid.sample(|z| {
        b.eval_disk(z).powu(index.k as u32) * element_value(b, index.j, index.r, z)
    }))
}

#[derive(Debug, Clone)]
pub struct MalmquistBasis {
    blaschke: BlaschkeProduct,
    n: usize,
    grid: CircleGrid,
    /// `(j, r)` for each block, in block order.
    blocks: Vec<(usize, usize)>,
    elements: Vec<GridFunction>,
}

impl MalmquistBasis {
    pub fn build(b: &BlaschkeProduct, n: usize, grid: &CircleGrid) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let dim = n * b.degree();
        let required = 8 * dim;
        if grid.size() < required {
            return Err(Error::GridTooCoarse {
                size: grid.size(),
                dim,
                required: required.next_power_of_two(),
            });
        }
        let blocks: Vec<(usize, usize)> = b
            .zeros()
            .iter()
            .enumerate()
            .flat_map(|(j, zero)| (0..zero.multiplicity).map(move |r| (j, r)))
            .collect();
        let elements = (0..dim)
            .into_par_iter()
            .map(|flat| {
                let (j, r) = blocks[flat / n];
                let k = (flat % n) as u32;
                grid.sample(|z| b.eval_disk(z).powu(k) * element_value(b, j, r, z))
            })
            .collect();
        Ok(Self {
            blaschke: b.clone(),
            n,
            grid: grid.clone(),
            blocks,
            elements,
        })
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    /// `dim K_{B^n} = n |Z(B)|`.
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn elements(&self) -> &[GridFunction] {
        &self.elements
    }

    pub fn element(&self, flat: usize) -> &GridFunction {
        &self.elements[flat]
    }

    pub fn flat_index(&self, index: BasisIndex) -> Result<usize> {
        let block = self
            .blocks
            .iter()
            .position(|&(j, r)| j == index.j && r == index.r)
            .ok_or(Error::IndexOutOfRange {
                j: index.j,
                r: index.r,
            })?;
        if index.k >= self.n {
            return Err(Error::IndexOutOfRange {
                j: index.j,
                r: index.r,
            });
        }
        Ok(block * self.n + index.k)
    }

    pub fn index_of(&self, flat: usize) -> BasisIndex {
        let (j, r) = self.blocks[flat / self.n];
        BasisIndex {
            j,
            r,
            k: flat % self.n,
        }
    }

    /// Pairwise inner products `G[row, col] = ⟨u_col, u_row⟩`.
    pub fn gram_matrix(&self) -> CMatrix {
        weighted_gram(&self.elements, None).expect("basis elements share one grid")
    }
}
