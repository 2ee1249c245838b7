use alloc::vec::Vec;

use super::{SpectralProblem, TorusGrid};
use crate::fiber::SymbolField;
use crate::linalg::Sym2;
use crate::{FinslerError, Result};

/// Relative symmetry tolerance for the assembled stiffness matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

// w · (u·f)(v·f) as a symmetric contribution.
fn add_product(rows: &mut [Vec<(usize, f64)>], w: f64, u: &[(usize, f64)], v: &[(usize, f64)]) {
    for &(a, alpha) in u {
        for &(b, beta) in v {
            let val = 0.5 * w * alpha * beta;
            rows[a].push((b, val));
            rows[b].push((a, val));
        }
    }
}

/// Assemble the flux-form discretisation of `E(f) = ∫ σ*(df, df) μ dx dy`
/// and the lumped mass `∫ f² μ dx dy`.
///
/// Each node `i` contributes, with `c = μ σ*` frozen at the node,
///
/// ```text
/// ΔxΔy [ c₁₁ ½((D₊ₓf)² + (D₋ₓf)²) + c₂₂ ½((D₊ᵧf)² + (D₋ᵧf)²) + 2c₁₂ (D₀ₓf)(D₀ᵧf) ]
/// ```
///
/// which is the average of the four one-sided corner gradients `c(∇f, ∇f)`.
/// Summed over nodes this gives edge-averaged `c₁₁`, `c₂₂` fluxes and the
/// quarter-weighted cross stencil for `c₁₂`; the operator is symmetric,
/// annihilates constants, and is PSD whenever every `c` is.
pub fn assemble(field: &SymbolField) -> Result<SpectralProblem> {
    let grid: TorusGrid = *field.grid();
    let n = grid.len();
    let (dx, dy) = (grid.dx(), grid.dy());
    let area = grid.cell_area();
    let mut rows: Vec<Vec<(usize, f64)>> = (0..n).map(|_| Vec::with_capacity(40)).collect();
    let mut mean = Sym2::new(0.0, 0.0, 0.0);
    for idx in 0..n {
        let (i, j) = grid.coords(idx);
        let (i, j) = (i as isize, j as isize);
        let c = field.sigma_star()[idx].scale(field.mu()[idx]);
        mean = mean.add(&c);
        let e = grid.index(i + 1, j);
        let w = grid.index(i - 1, j);
        let no = grid.index(i, j + 1);
        let so = grid.index(i, j - 1);
        let kx = 0.5 * c.xx * area / (dx * dx);
        add_product(&mut rows, kx, &[(e, 1.0), (idx, -1.0)], &[(e, 1.0), (idx, -1.0)]);
        add_product(&mut rows, kx, &[(idx, 1.0), (w, -1.0)], &[(idx, 1.0), (w, -1.0)]);
        let ky = 0.5 * c.yy * area / (dy * dy);
        add_product(&mut rows, ky, &[(no, 1.0), (idx, -1.0)], &[(no, 1.0), (idx, -1.0)]);
        add_product(&mut rows, ky, &[(idx, 1.0), (so, -1.0)], &[(idx, 1.0), (so, -1.0)]);
        if c.xy != 0.0 {
            let kxy = 2.0 * c.xy * area / (4.0 * dx * dy);
            add_product(&mut rows, kxy, &[(e, 1.0), (w, -1.0)], &[(no, 1.0), (so, -1.0)]);
        }
    }
    let stiffness = super::sparse::CsrMatrix::from_rows(rows);
    let deviation = stiffness.asymmetry();
    if deviation > SYMMETRY_TOL * stiffness.max_abs() {
        return Err(FinslerError::Asymmetric { deviation });
    }
    let mass = field.mu().iter().map(|m| m * area).collect();
    let mu_mean = field.mu().iter().sum::<f64>() / n as f64;
    Ok(SpectralProblem::from_operators(grid, stiffness, mass, mean.scale(1.0 / n as f64), mu_mean))
}
