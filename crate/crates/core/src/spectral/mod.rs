//! Periodic-grid discretisation of the Finsler energy and its spectrum.

mod assemble;
pub mod convergence;
pub mod dense;
mod fft;
mod grid;
pub mod iterative;
pub mod oracle;
mod sparse;

use alloc::vec::Vec;

pub use assemble::{assemble, SYMMETRY_TOL};
pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable};
pub use grid::{GridFunction, TorusGrid};
pub use oracle::{discrete_mode, discrete_oracle, fourier_oracle};
pub use sparse::CsrMatrix;

use crate::linalg::Sym2;
use crate::{FinslerError, Result};

/// Relative gap below which neighbouring eigenvalues form one multiplet.
pub const MULTIPLET_TOL: f64 = 1e-6;

/// Generalized eigenproblem `K u = λ M u` on a torus grid: `K` the stiffness
/// form of the energy, `M` the diagonal mass `μ Δx Δy`.
#[derive(Clone, Debug)]
pub struct SpectralProblem {
    grid: TorusGrid,
    stiffness: CsrMatrix,
    mass: Vec<f64>,
    mean_c: Sym2,
    mu_mean: f64,
}

impl SpectralProblem {
    pub(crate) fn from_operators(
        grid: TorusGrid,
        stiffness: CsrMatrix,
        mass: Vec<f64>,
        mean_c: Sym2,
        mu_mean: f64,
    ) -> Self {
        SpectralProblem { grid, stiffness, mass, mean_c, mu_mean }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn stiffness(&self) -> &CsrMatrix {
        &self.stiffness
    }

    /// Diagonal of `M`.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Node average of `μ σ*`, used by the preconditioner.
    pub fn mean_coefficient(&self) -> (Sym2, f64) {
        (self.mean_c, self.mu_mean)
    }

    /// `fᵀ K f`.
    pub fn energy(&self, f: &GridFunction) -> Result<f64> {
        self.check(f)?;
        Ok(self.stiffness.quad(f.values()))
    }

    /// `fᵀ M f`.
    pub fn mass_norm_sq(&self, f: &GridFunction) -> Result<f64> {
        self.check(f)?;
        Ok(f.values().iter().zip(&self.mass).map(|(v, m)| v * v * m).sum())
    }

    /// Rayleigh quotient `fᵀKf / fᵀMf`.
    pub fn rayleigh(&self, f: &GridFunction) -> Result<f64> {
        let den = self.mass_norm_sq(f)?;
        if !(den > 0.0) {
            return Err(FinslerError::ZeroFunction);
        }
        Ok(self.energy(f)? / den)
    }

    /// `max |(K𝟙)ᵢ|` relative to the largest entry of `K`.
    pub fn kernel_defect(&self) -> f64 {
        let ones = alloc::vec![1.0; self.grid.len()];
        let k1 = self.stiffness.mul(&ones);
        k1.iter().fold(0.0f64, |m, v| m.max(v.abs())) / self.stiffness.max_abs()
    }

    /// `‖Ku − λMu‖ / ‖Mu‖`.
    pub fn residual(&self, lambda: f64, u: &[f64]) -> f64 {
        let ku = self.stiffness.mul(u);
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..u.len() {
            let mu = self.mass[i] * u[i];
            num += (ku[i] - lambda * mu) * (ku[i] - lambda * mu);
            den += mu * mu;
        }
        crate::math::sqrt(num / den)
    }

    /// First `k+1` eigenpairs, sorted ascending, eigenvectors `M`-orthonormal.
    pub fn solve(&self, k: usize, opts: &SolverOptions) -> Result<Spectrum> {
        let n = self.grid.len();
        if k + 1 > n {
            return Err(FinslerError::InvalidParameter { name: "k", value: k as f64 });
        }
        let dense = match opts.method {
            SolverMethod::Dense => true,
            SolverMethod::Iterative => false,
            SolverMethod::Auto => n <= opts.dense_max_nodes,
        };
        if dense {
            dense::solve(self, k + 1)
        } else {
            iterative::solve(self, k + 1, opts)
        }
    }

    fn check(&self, f: &GridFunction) -> Result<()> {
        if f.len() != self.grid.len() {
            return Err(FinslerError::Shape { expected: self.grid.len(), found: f.len() });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SolverMethod {
    /// Dense below `dense_max_nodes`, iterative above.
    Auto,
    Dense,
    Iterative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    /// Residual tolerance, relative to `max(λ, λ₁)`.
    pub tol: f64,
    pub max_cycles: usize,
    /// Seed for the random part of the iterative start block.
    pub seed: u64,
    pub dense_max_nodes: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { method: SolverMethod::Auto, tol: 1e-9, max_cycles: 200, seed: 0x5eed, dense_max_nodes: 48 * 48 }
    }
}

/// Leading part of a spectrum.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// One `M`-normalised vector per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖Ku − λMu‖ / ‖Mu‖` per pair.
    pub residuals: Vec<f64>,
    pub method: SolverMethod,
    /// Restart cycles used by the iterative solver; 0 for dense.
    pub cycles: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Index ranges of eigenvalues whose consecutive relative gaps are
    /// below `rel_tol` (relative to the larger value; zero joins nothing).
    pub fn multiplets(&self, rel_tol: f64) -> Vec<core::ops::Range<usize>> {
        let mut out: Vec<core::ops::Range<usize>> = Vec::new();
        let mut start = 0;
        for i in 1..=self.eigenvalues.len() {
            let split = i == self.eigenvalues.len() || {
                let (a, b) = (self.eigenvalues[i - 1], self.eigenvalues[i]);
                (b - a).abs() > rel_tol * a.abs().max(b.abs())
            };
            if split {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// Multiplicity of eigenvalue `i` within the computed range.
    pub fn multiplicity(&self, i: usize, rel_tol: f64) -> usize {
        self.multiplets(rel_tol).into_iter().find(|r| r.contains(&i)).map_or(0, |r| r.len())
    }
}
