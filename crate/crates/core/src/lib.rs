//! Spectral geometry of Finsler–Laplacians on the flat torus `R²/Z²`.
//!
//! The crate is `no_std` (with `alloc`) and free of IO. It is organised in
//! three layers:
//!
//! * [`metric`]: Riemannian, Randers and conformally rescaled Finsler
//!   metrics, their dual norms, Legendre transforms and coarse constants.
//! * [`fiber`]: quadrature over the dual direction circle producing the
//!   Holmes–Thompson density `μ`, the symbol `σ*` and the weight `a`,
//!   together with the Binet–Legendre metric and conformal rescalings.
//! * [`spectral`]: flux-form assembly of the energy on a periodic grid,
//!   generalized symmetric eigensolvers, and Fourier oracles for
//!   constant-coefficient problems.
//!
//! [`randers`] collects the closed forms specific to Randers tori.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod fiber;
pub mod field;
pub mod linalg;
mod math;
pub mod metric;
pub mod randers;
pub mod sampling;
pub mod spectral;

pub use error::{FinslerError, Result};
pub use fiber::{FiberQuadrature, FiberRule, SymbolField};
pub use field::{CovectorField, ScalarField, TensorField};
pub use linalg::Sym2;
pub use metric::{Covector, LocalNorm, MetricSpec, Tangent, TorusPoint};
pub use spectral::{SpectralProblem, Spectrum, TorusGrid};
