//! Exact spectra of constant-coefficient problems.

use alloc::vec::Vec;

use super::TorusGrid;
use crate::linalg::Sym2;
use crate::math::{cos, sin, PI, TAU};
use crate::{FinslerError, Result};

/// The `k+1` smallest values of `4π²(A m² + B n²)`, `(m, n) ∈ Z²`, with
/// multiplicity.
pub fn fourier_oracle(a: f64, b: f64, k: usize) -> Result<Vec<f64>> {
    if !(a > 0.0) {
        return Err(FinslerError::InvalidParameter { name: "A", value: a });
    }
    if !(b > 0.0) {
        return Err(FinslerError::InvalidParameter { name: "B", value: b });
    }
    let want = k + 1;
    let base = 4.0 * PI * PI;
    let mut l: i64 = 1;
    loop {
        let mut vals: Vec<f64> = Vec::with_capacity(((2 * l + 1) * (2 * l + 1)) as usize);
        for m in -l..=l {
            for n in -l..=l {
                vals.push(base * (a * (m * m) as f64 + b * (n * n) as f64));
            }
        }
        vals.sort_by(f64::total_cmp);
        // anything outside the box exceeds 4π² min(A,B) (l+1)²
        let outside = base * a.min(b) * ((l + 1) * (l + 1)) as f64;
        if vals.len() >= want && vals[want - 1] < outside {
            vals.truncate(want);
            return Ok(vals);
        }
        l *= 2;
    }
}

/// Eigenvalue of the discrete operator with constant `c = μσ*` and mass
/// density `mu` on the Fourier mode `(m, n)`.
pub fn discrete_mode(c: &Sym2, mu: f64, grid: &TorusGrid, m: i64, n: i64) -> f64 {
    let tx = TAU * m as f64 / grid.nx() as f64;
    let ty = TAU * n as f64 / grid.ny() as f64;
    let (dx, dy) = (grid.dx(), grid.dy());
    let s = c.xx * (2.0 - 2.0 * cos(tx)) / (dx * dx)
        + c.yy * (2.0 - 2.0 * cos(ty)) / (dy * dy)
        + 2.0 * c.xy * sin(tx) * sin(ty) / (dx * dy);
    s / mu
}

/// All discrete modes sorted ascending, truncated to `k+1` values.
pub fn discrete_oracle(c: &Sym2, mu: f64, grid: &TorusGrid, k: usize) -> Vec<f64> {
    let mut vals: Vec<f64> = (0..grid.nx() as i64)
        .flat_map(|m| (0..grid.ny() as i64).map(move |n| (m, n)))
        .map(|(m, n)| discrete_mode(c, mu, grid, m, n))
        .collect();
    vals.sort_by(f64::total_cmp);
    vals.truncate(k + 1);
    vals
}

/// Lattice modes `(m, n)` with `|m| ≤ nx/2`, `|n| ≤ ny/2`, one per `±` pair,
/// ordered by the discrete eigenvalue of `(c, mu)`.
pub(crate) fn ordered_modes(c: &Sym2, mu: f64, grid: &TorusGrid, count: usize) -> Vec<(i64, i64)> {
    let hx = (grid.nx() / 2) as i64;
    let hy = (grid.ny() / 2) as i64;
    let mut modes: Vec<(f64, i64, i64)> = Vec::new();
    for m in 0..=hx {
        for n in -hy..=hy {
            if m == 0 && n < 0 {
                continue;
            }
            modes.push((discrete_mode(c, mu, grid, m, n), m, n));
        }
    }
    modes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    modes.into_iter().take(count).map(|(_, m, n)| (m, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_torus() {
        let v = fourier_oracle(1.0, 1.0, 4).unwrap();
        let l = 4.0 * PI * PI;
        assert_eq!(v, alloc::vec![0.0, l, l, l, l]);
        assert!(fourier_oracle(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn first_eigenvalue_is_min_axis() {
        for &(a, b) in &[(1.3888, 1.1111), (0.25, 4.0), (7.0, 7.0), (100.0, 0.01)] {
            let v = fourier_oracle(a, b, 30).unwrap();
            assert_relative_eq!(v[1], 4.0 * PI * PI * f64::min(a, b), max_relative = 1e-15);
            assert!(v.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(v.len(), 31);
        }
    }

    #[test]
    fn oracle_agrees_with_brute_force_enumeration() {
        let (a, b) = (0.7, 2.3);
        let mut brute: Vec<f64> = (-20i64..=20)
            .flat_map(|m| (-20i64..=20).map(move |n| 4.0 * PI * PI * (a * (m * m) as f64 + b * (n * n) as f64)))
            .collect();
        brute.sort_by(f64::total_cmp);
        assert_eq!(fourier_oracle(a, b, 50).unwrap(), brute[..51].to_vec());
    }
}
