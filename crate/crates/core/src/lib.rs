//! Complex geometric optics solutions for the perturbed biharmonic
//! Helmholtz operator `Δ² − k⁴ + q`, together with the reflection, boundary
//! pairing and Fourier recovery machinery used to study how stably `q` is
//! determined by partial Cauchy data as the frequency `k` grows.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cauchy;
pub mod cgo;
pub mod error;
pub mod fft;
pub mod field;
pub mod harness;
pub mod lattice;
pub mod nufft;
pub mod quadrature;
pub mod recon;
pub mod reflection;
pub mod rl;
pub mod special;

pub use error::{Error, Result};
