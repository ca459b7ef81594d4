//! Numerical toolkit for the semigroup of composition operators
//! `f(z) ↦ f(sz + 1 − s)` on the Hardy space and their Toeplitz models on the
//! weighted space `L²(μ)` of the right half-plane.
//!
//! * [`specialfn`]: complex Gamma, Beta and the sech transform.
//! * [`measure`]: the lattice measure μ, its quadrature and the kernel inner products.
//! * [`operators`]: truncated composition and Toeplitz matrices, words, kernels and residuals.
//! * [`spectra`]: single and joint spectra, relation lattices and separation bounds.
//! * [`apsymbol`]: almost-periodic symbols of operator combinations.
//! * [`cli`]: the `compsemi` command-line front end.

pub mod apsymbol;
pub mod cli;
pub mod error;
pub mod measure;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod scale;
pub mod specialfn;
pub mod spectra;

pub use error::{Error, Result};
