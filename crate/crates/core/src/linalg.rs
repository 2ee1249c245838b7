//! 2×2 symmetric matrices.

use crate::math::{hypot, sqrt};

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2 { xx: 1.0, xy: 0.0, yy: 1.0 };

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Sym2 { xx, xy, yy }
    }

    pub const fn diag(xx: f64, yy: f64) -> Self {
        Sym2 { xx, xy: 0.0, yy }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Inverse; the caller guarantees `det ≠ 0`.
    pub fn inverse(&self) -> Sym2 {
        let d = self.det();
        Sym2 { xx: self.yy / d, xy: -self.xy / d, yy: self.xx / d }
    }

    /// `aᵀ S b`.
    #[inline]
    pub fn bilinear(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        a[0] * (self.xx * b[0] + self.xy * b[1]) + a[1] * (self.xy * b[0] + self.yy * b[1])
    }

    #[inline]
    pub fn quad(&self, a: [f64; 2]) -> f64 {
        self.bilinear(a, a)
    }

    #[inline]
    pub fn apply(&self, a: [f64; 2]) -> [f64; 2] {
        [self.xx * a[0] + self.xy * a[1], self.xy * a[0] + self.yy * a[1]]
    }

    pub fn scale(&self, s: f64) -> Sym2 {
        Sym2 { xx: self.xx * s, xy: self.xy * s, yy: self.yy * s }
    }

    pub fn add(&self, o: &Sym2) -> Sym2 {
        Sym2 { xx: self.xx + o.xx, xy: self.xy + o.xy, yy: self.yy + o.yy }
    }

    /// Eigenvalues `(min, max)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * (self.xx + self.yy);
        let r = hypot(0.5 * (self.xx - self.yy), self.xy);
        (m - r, m + r)
    }

    /// Positive-definite with smallest eigenvalue above `rel_tol` times the largest.
    pub fn is_spd(&self, rel_tol: f64) -> bool {
        let (lo, hi) = self.eigenvalues();
        hi > 0.0 && lo > rel_tol * hi && self.xx.is_finite() && self.yy.is_finite() && self.xy.is_finite()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        sqrt(self.xx * self.xx + 2.0 * self.xy * self.xy + self.yy * self.yy)
    }

    /// Extreme values of `self[p] / other[p]` over nonzero `p`, i.e. the
    /// generalized eigenvalues of the pencil `(self, other)`. `other` must be SPD.
    pub fn ratio_bounds(&self, other: &Sym2) -> (f64, f64) {
        // det(self - t other) = 0
        let a = other.det();
        let b = -(self.xx * other.yy + self.yy * other.xx - 2.0 * self.xy * other.xy);
        let c = self.det();
        let disc = (b * b - 4.0 * a * c).max(0.0);
        let sq = sqrt(disc);
        // stable roots
        let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
        let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
        if r1 <= r2 {
            (r1, r2)
        } else {
            (r2, r1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inverse_and_det() {
        let s = Sym2::new(4.0, 1.0, 3.0);
        let i = s.inverse();
        let p = s.apply(i.apply([0.3, -0.7]));
        assert_relative_eq!(p[0], 0.3, epsilon = 1e-14);
        assert_relative_eq!(p[1], -0.7, epsilon = 1e-14);
        assert_relative_eq!(s.det() * i.det(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ratio_bounds_against_sampling() {
        let a = Sym2::new(2.0, 0.4, 1.0);
        let b = Sym2::new(1.0, -0.2, 3.0);
        let (lo, hi) = a.ratio_bounds(&b);
        let mut slo = f64::INFINITY;
        let mut shi = 0.0f64;
        for k in 0..20000 {
            let t = k as f64 * core::f64::consts::PI / 20000.0;
            let p = [libm::cos(t), libm::sin(t)];
            let r = a.quad(p) / b.quad(p);
            slo = slo.min(r);
            shi = shi.max(r);
        }
        assert_relative_eq!(lo, slo, max_relative = 1e-7);
        assert_relative_eq!(hi, shi, max_relative = 1e-7);
    }

    #[test]
    fn spd_tolerance() {
        assert!(Sym2::IDENTITY.is_spd(1e-10));
        assert!(!Sym2::new(1.0, 1.0, 1.0).is_spd(1e-10));
        assert!(!Sym2::diag(-1.0, 2.0).is_spd(1e-10));
    }
}
