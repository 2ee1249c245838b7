//! Grid-refinement studies of the low spectrum.

use alloc::vec::Vec;

use super::{assemble, fourier_oracle, SolverOptions, TorusGrid};
use crate::fiber::{FiberRule, SymbolField};
use crate::math::ln;
use crate::metric::MetricSpec;
use crate::{FinslerError, Result};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceRow {
    pub n: usize,
    /// `λ₁ … λ_k`.
    pub eigenvalues: Vec<f64>,
    /// Relative errors against the reference, same length.
    pub errors: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `λ₁ … λ_k` of the reference: the Fourier spectrum for constant,
    /// diagonal symbols, otherwise `None` and the finest grid is used.
    pub oracle: Option<Vec<f64>>,
    /// Observed order of `λ₁` between consecutive grids (oracle-referenced)
    /// or over consecutive triples (self-convergence).
    pub orders: Vec<f64>,
}

impl ConvergenceTable {
    /// Whether `λ₁` moves monotonically with refinement.
    pub fn is_monotone(&self) -> bool {
        let l: Vec<f64> = self.rows.iter().map(|r| r.eigenvalues[0]).collect();
        l.windows(2).all(|w| w[1] <= w[0]) || l.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Solve on every `N × N` grid in `sizes` (ascending, at least three) and
/// tabulate `λ₁ … λ_k`.
pub fn convergence_study(
    spec: &MetricSpec,
    sizes: &[usize],
    k: usize,
    rule: &FiberRule,
    opts: &SolverOptions,
) -> Result<ConvergenceTable> {
    if sizes.len() < 3 {
        return Err(FinslerError::InvalidParameter { name: "grid count", value: sizes.len() as f64 });
    }
    if k == 0 {
        return Err(FinslerError::InvalidParameter { name: "k", value: 0.0 });
    }
    let mut spectra = Vec::with_capacity(sizes.len());
    let mut oracle = None;
    for &n in sizes {
        let grid = TorusGrid::square(n)?;
        let field = SymbolField::compute(spec, &grid, rule)?;
        if oracle.is_none() && spec.is_spatially_constant() {
            let s = field.sigma_star()[0];
            // quadrature leaves a roundoff-level off-diagonal entry
            if s.xy.abs() <= 1e-12 * s.trace() {
                oracle = Some(fourier_oracle(s.xx, s.yy, k)?[1..].to_vec());
            }
        }
        let spectrum = assemble(&field)?.solve(k, opts)?;
        spectra.push((n, spectrum.eigenvalues[1..].to_vec()));
    }
    let reference = oracle.clone().unwrap_or_else(|| spectra[spectra.len() - 1].1.clone());
    let rows: Vec<ConvergenceRow> = spectra
        .into_iter()
        .map(|(n, eigenvalues)| {
            let errors = eigenvalues.iter().zip(&reference).map(|(l, r)| (l - r).abs() / r.abs()).collect();
            ConvergenceRow { n, eigenvalues, errors }
        })
        .collect();
    let orders = if oracle.is_some() {
        rows.windows(2)
            .map(|w| ln(w[0].errors[0] / w[1].errors[0]) / ln(w[1].n as f64 / w[0].n as f64))
            .collect()
    } else {
        rows.windows(3)
            .map(|w| {
                let d1 = w[1].eigenvalues[0] - w[0].eigenvalues[0];
                let d2 = w[2].eigenvalues[0] - w[1].eigenvalues[0];
                ln((d1 / d2).abs()) / ln(w[1].n as f64 / w[0].n as f64)
            })
            .collect()
    };
    Ok(ConvergenceTable { rows, oracle, orders })
}
