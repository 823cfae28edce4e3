//! Compressions of Toeplitz operators to the model spaces `K_{B^n}` of a finite
//! Blaschke product `B`, and numerical checks of their spectral distribution.
//!
//! The pieces, bottom up:
//!
//! * [`quadrature`]: uniform grids on the unit circle, means, inner products, DFTs.
//! * [`blaschke`]: finite Blaschke products, derivatives, winding numbers.
//! * [`malmquist`]: the ordered orthonormal basis of `K_{B^n}`.
//! * [`symbol`]: symbols as series in powers of `B`, Fourier series, or samples.
//! * [`compression`]: matrices of `T_{φ, K_{B^n}}` by block formula and by quadrature.
//! * [`spectral`]: eigenvalues, singular values and distribution experiments.

pub mod blaschke;
pub mod compression;
pub mod error;
pub mod malmquist;
pub mod matrix;
pub mod quadrature;
pub mod spectral;
pub mod symbol;

pub use error::{Error, Result};
pub use num_complex::Complex64;
