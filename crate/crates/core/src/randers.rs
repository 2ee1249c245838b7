//! Closed forms for Randers metrics `√g + ρ`.

use crate::fiber::FiberQuadrature;
use crate::linalg::Sym2;
use crate::math::{cos, sin, sqrt, PI, TAU};
use crate::metric::{Covector, Tangent};
use crate::{FinslerError, Result};

fn check_eta(eta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) {
        return Err(FinslerError::InvalidParameter { name: "eta", value: eta });
    }
    Ok(sqrt(1.0 - eta * eta))
}

/// Constant symbol `diag(A, B)` of `√(diag(h², r²)) + η h dx`:
/// `A = 2h⁻²/((1+s)s)`, `B = 2r⁻²/(1+s)`, `s = √(1−η²)`.
pub fn randers_axis_symbol(h: f64, r: f64, eta: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(FinslerError::InvalidParameter { name: "h", value: h });
    }
    if !(r > 0.0) {
        return Err(FinslerError::InvalidParameter { name: "r", value: r });
    }
    let s = check_eta(eta)?;
    Ok((2.0 / (h * h * (1.0 + s) * s), 2.0 / (r * r * (1.0 + s))))
}

/// Angular integrals over `θ ∈ [0, 2π)`:
/// `(∫ cos²θ/(1+η cos θ), ∫ 2 cos θ sin θ/(1+η cos θ), ∫ sin²θ/(1+η cos θ))`.
pub fn angular_integrals(eta: f64, quad: &FiberQuadrature) -> (f64, f64, f64) {
    let (mut cc, mut cs, mut ss) = (0.0, 0.0, 0.0);
    for (t, w) in quad.iter() {
        let (c, s) = (cos(t), sin(t));
        let d = w / (1.0 + eta * c);
        cc += d * c * c;
        cs += d * 2.0 * c * s;
        ss += d * s * s;
    }
    (cc, cs, ss)
}

/// Closed forms of [`angular_integrals`]:
/// `(2π/((1+s)s), 0, 2π/(1+s))`.
pub fn angular_closed_forms(eta: f64) -> Result<(f64, f64, f64)> {
    let s = check_eta(eta)?;
    Ok((TAU / ((1.0 + s) * s), 0.0, TAU / (1.0 + s)))
}

/// Whether `2h⁻²/((1+s)s) ≥ r⁻²`, i.e. `A ≥ r⁻²`.
pub fn large_eigenvalue_condition(h: f64, r: f64, eta: f64) -> Result<bool> {
    let (a, _) = randers_axis_symbol(h, r, eta)?;
    Ok(a >= 1.0 / (r * r))
}

/// Smallest `η` meeting [`large_eigenvalue_condition`]: bisection on
/// `s ∈ (0, 1]` for `s(1+s) ≤ 2h⁻²r²` (60 halvings), returning
/// `η = √(1−s²)` for the largest admissible `s` found.
pub fn threshold_eta(h: f64, r: f64) -> Result<f64> {
    if !(h > 0.0 && r > 0.0) {
        return Err(FinslerError::InvalidParameter { name: "h", value: h });
    }
    let target = 2.0 * r * r / (h * h);
    let ok = |s: f64| s * (1.0 + s) <= target;
    if ok(1.0) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // lo satisfies the condition; step down to the closest double whose η
    // still does after the round trip through √(1−s²)
    let mut eta = sqrt(1.0 - lo * lo);
    while !large_eigenvalue_condition(h, r, eta)? {
        eta = f64::from_bits(eta.to_bits() + 1);
    }
    Ok(eta)
}

/// Cholesky-based `g`-orthonormal frame `E` (`Eᵀ g E = I`), as columns.
fn orthonormal_frame(g: &Sym2) -> [Tangent; 2] {
    // g = L Lᵀ, E = L⁻ᵀ
    let l11 = sqrt(g.xx);
    let l21 = g.xy / l11;
    let l22 = sqrt(g.yy - l21 * l21);
    // L⁻ᵀ = [[1/l11, -l21/(l11 l22)], [0, 1/l22]]
    [Tangent::new(1.0 / l11, 0.0), Tangent::new(-l21 / (l11 * l22), 1.0 / l22)]
}

/// Randers energy density at a point computed directly on the tangent fiber:
/// `(1/π) √det g ∫ df(X₀)² / (1 + ρ(X₀)) dθ`, where `X₀(θ)` runs over the
/// `g`-unit circle.
pub fn energy_density_direct(g: &Sym2, rho: Covector, df: Covector, quad: &FiberQuadrature) -> f64 {
    let [e1, e2] = orthonormal_frame(g);
    let mut acc = 0.0;
    for (t, w) in quad.iter() {
        let (c, s) = (cos(t), sin(t));
        let x0 = Tangent::new(c * e1.x + s * e2.x, c * e1.y + s * e2.y);
        let d = df.apply(x0);
        acc += w * d * d / (1.0 + rho.apply(x0));
    }
    acc * sqrt(g.det()) / PI
}
