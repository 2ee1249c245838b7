//! Finsler metrics on the flat torus.
//!
//! Three families are supported: Riemannian metrics `√g`, Randers metrics
//! `√g + ρ` and conformal rescalings `e^f F` of either. A conformal factor
//! applied to `√g + ρ` gives the Randers metric `√(e^{2f} g) + e^f ρ`, so
//! every family freezes at a point into a [`LocalNorm`] with closed-form
//! norm, dual norm and Legendre maps.

use alloc::boxed::Box;

use crate::field::{CovectorField, Harmonic, ScalarField, TensorField};
use crate::linalg::Sym2;
use crate::math::{cos, exp, floor, ln, sin, sqrt, TAU};
use crate::sampling::Sampling;
use crate::{FinslerError, Result};

/// Relative tolerance for positive-definiteness checks.
pub const SPD_TOL: f64 = 1e-10;

/// Relative step for finite differences in the fiber.
pub const FD_STEP: f64 = 1e-5;

/// A point of `R²/Z²`, stored with coordinates reduced to `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

fn reduce(t: f64) -> f64 {
    let r = t - floor(t);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint { x: reduce(x), y: reduce(y) }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Tangent vector in the coordinate frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tangent {
    pub x: f64,
    pub y: f64,
}

impl Tangent {
    pub const fn new(x: f64, y: f64) -> Self {
        Tangent { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        Tangent::new(cos(theta), sin(theta))
    }

    pub fn scale(self, s: f64) -> Self {
        Tangent::new(self.x * s, self.y * s)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }

    pub fn euclidean_norm(&self) -> f64 {
        sqrt(self.x * self.x + self.y * self.y)
    }

    #[inline]
    pub fn arr(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// Covector `p = p_x dx + p_y dy`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Covector {
    pub x: f64,
    pub y: f64,
}

impl Covector {
    pub const DX: Covector = Covector::new(1.0, 0.0);
    pub const DY: Covector = Covector::new(0.0, 1.0);

    pub const fn new(x: f64, y: f64) -> Self {
        Covector { x, y }
    }

    pub fn from_angle(phi: f64) -> Self {
        Covector::new(cos(phi), sin(phi))
    }

    /// Pairing `p(v)`.
    #[inline]
    pub fn apply(&self, v: Tangent) -> f64 {
        self.x * v.x + self.y * v.y
    }

    pub fn scale(self, s: f64) -> Self {
        Covector::new(self.x * s, self.y * s)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }

    pub fn euclidean_norm(&self) -> f64 {
        sqrt(self.x * self.x + self.y * self.y)
    }

    #[inline]
    pub fn arr(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// A Finsler metric family on the torus.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum MetricSpec {
    /// `F = √(vᵀ g v)`.
    Riemannian { g: TensorField },
    /// `F = √(vᵀ g v) + ρ(v)` with `‖ρ‖_{g*} < 1`.
    Randers { g: TensorField, rho: CovectorField },
    /// `F = e^f · F_base`.
    Conformal { base: Box<MetricSpec>, f: ScalarField },
}

impl MetricSpec {
    pub fn euclidean() -> Self {
        MetricSpec::riemannian_constant(Sym2::IDENTITY)
    }

    pub fn riemannian_constant(g: Sym2) -> Self {
        MetricSpec::Riemannian { g: TensorField::constant(g) }
    }

    /// Flat `g = diag(h², r²)`.
    pub fn flat_torus(h: f64, r: f64) -> Self {
        MetricSpec::riemannian_constant(Sym2::diag(h * h, r * r))
    }

    /// `√(diag(h², r²)) + η h dx`, the large-eigenvalue Randers torus.
    pub fn randers_torus(h: f64, r: f64, eta: f64) -> Self {
        MetricSpec::Randers {
            g: TensorField::constant(Sym2::diag(h * h, r * r)),
            rho: CovectorField::constant(eta * h, 0.0),
        }
    }

    /// `√(diag(h², r²)) + η h (0.5 + 0.4 sin 2πy) dx`.
    pub fn randers_modulated(h: f64, r: f64, eta: f64) -> Self {
        MetricSpec::Randers {
            g: TensorField::constant(Sym2::diag(h * h, r * r)),
            rho: CovectorField {
                x: ScalarField::offset_harmonic(0.5 * eta * h, 0.4 * eta * h, Harmonic::ONE, Harmonic::Sin(1)),
                y: ScalarField::zero(),
            },
        }
    }

    pub fn conformal(base: MetricSpec, f: ScalarField) -> Self {
        MetricSpec::Conformal { base: Box::new(base), f }
    }

    /// `t · F` as the conformal rescaling with constant `f = ln t`.
    pub fn scaled(base: MetricSpec, t: f64) -> Self {
        MetricSpec::conformal(base, ScalarField::constant(ln(t)))
    }

    /// True when no coefficient depends on the point.
    pub fn is_spatially_constant(&self) -> bool {
        match self {
            MetricSpec::Riemannian { g } => g.is_constant(),
            MetricSpec::Randers { g, rho } => g.is_constant() && rho.is_constant(),
            MetricSpec::Conformal { base, f } => base.is_spatially_constant() && f.is_constant(),
        }
    }

    /// True for the purely Riemannian families (possibly conformally rescaled).
    pub fn is_riemannian(&self) -> bool {
        match self {
            MetricSpec::Riemannian { .. } => true,
            MetricSpec::Randers { .. } => false,
            MetricSpec::Conformal { base, .. } => base.is_riemannian(),
        }
    }

    /// The Riemannian part `√g` of a Randers metric (conformal wrappers kept).
    pub fn riemannian_base(&self) -> MetricSpec {
        match self {
            MetricSpec::Riemannian { .. } => self.clone(),
            MetricSpec::Randers { g, .. } => MetricSpec::Riemannian { g: g.clone() },
            MetricSpec::Conformal { base, f } => MetricSpec::conformal(base.riemannian_base(), f.clone()),
        }
    }

    /// Freeze the metric at `x` without admissibility checks.
    pub fn at_unchecked(&self, x: TorusPoint) -> LocalNorm {
        match self {
            MetricSpec::Riemannian { g } => LocalNorm::quadratic(g.eval(x.x, x.y)),
            MetricSpec::Randers { g, rho } => {
                let r = rho.eval(x.x, x.y);
                LocalNorm::randers(g.eval(x.x, x.y), Covector::new(r[0], r[1]))
            }
            MetricSpec::Conformal { base, f } => base.at_unchecked(x).rescaled(exp(f.eval(x.x, x.y))),
        }
    }

    /// Freeze the metric at `x`, rejecting non-SPD `g` and `‖ρ‖_{g*} ≥ 1`.
    pub fn at(&self, x: TorusPoint) -> Result<LocalNorm> {
        let n = self.at_unchecked(x);
        if !n.g.is_spd(SPD_TOL) {
            return Err(FinslerError::IllPosedMetric {
                x: x.x,
                y: x.y,
                reason: "g is not positive-definite",
            });
        }
        if !(n.rho_norm_sq < 1.0) {
            return Err(FinslerError::IllPosedMetric {
                x: x.x,
                y: x.y,
                reason: "Randers form has ‖ρ‖_{g*} ≥ 1",
            });
        }
        Ok(n)
    }

    /// Check admissibility at every sampled point.
    pub fn validate(&self, sampling: &Sampling) -> Result<()> {
        for p in sampling.points() {
            self.at(p)?;
        }
        Ok(())
    }
}

/// Minkowski norm `v ↦ √(vᵀ g v) + ρ(v)` on one tangent plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalNorm {
    pub g: Sym2,
    pub g_inv: Sym2,
    pub rho: Covector,
    /// `‖ρ‖²_{g*}`.
    pub rho_norm_sq: f64,
}

impl LocalNorm {
    pub fn quadratic(g: Sym2) -> Self {
        LocalNorm { g, g_inv: g.inverse(), rho: Covector::new(0.0, 0.0), rho_norm_sq: 0.0 }
    }

    pub fn randers(g: Sym2, rho: Covector) -> Self {
        let g_inv = g.inverse();
        let rho_norm_sq = g_inv.quad(rho.arr());
        LocalNorm { g, g_inv, rho, rho_norm_sq }
    }

    /// `s · F`.
    pub fn rescaled(&self, s: f64) -> Self {
        LocalNorm::randers(self.g.scale(s * s), self.rho.scale(s))
    }

    pub fn is_quadratic(&self) -> bool {
        self.rho.is_zero()
    }

    /// `F(v)`.
    #[inline]
    pub fn norm(&self, v: Tangent) -> f64 {
        sqrt(self.g.quad(v.arr())) + self.rho.apply(v)
    }

    /// `F*(p) = sup { p(v) : F(v) = 1 }`.
    ///
    /// For Randers norms the dual unit ball is the `g*`-unit ball translated
    /// by `ρ`, which gives
    /// `F*(p) = (√(|p|²(1−|ρ|²) + ⟨p,ρ⟩²) − ⟨p,ρ⟩) / (1 − |ρ|²)`
    /// with all products in `g*`. The conjugate form `|p|² / (√· + ⟨p,ρ⟩)`
    /// is used when `⟨p,ρ⟩ > 0` to avoid cancellation.
    #[inline]
    pub fn dual_norm(&self, p: Covector) -> f64 {
        let pp = self.g_inv.quad(p.arr());
        if self.is_quadratic() {
            return sqrt(pp);
        }
        self.randers_dual(p, pp).0
    }

    // (F*, √D, g⁻¹p, g⁻¹ρ)
    #[inline]
    fn randers_dual(&self, p: Covector, pp: f64) -> (f64, f64) {
        let b = self.g_inv.bilinear(p.arr(), self.rho.arr());
        let c = 1.0 - self.rho_norm_sq;
        let sd = sqrt(pp * c + b * b);
        let fs = if b > 0.0 { pp / (sd + b) } else { (sd - b) / c };
        (fs, sd)
    }

    /// `∇_p F*(p)`, the `F`-unit vector Legendre-dual to the direction of `p`.
    #[inline]
    pub fn dual_unit_vector(&self, p: Covector) -> (f64, Tangent) {
        let gp = self.g_inv.apply(p.arr());
        let pp = p.x * gp[0] + p.y * gp[1];
        if self.is_quadratic() {
            let fs = sqrt(pp);
            return (fs, Tangent::new(gp[0] / fs, gp[1] / fs));
        }
        let (fs, sd) = self.randers_dual(p, pp);
        let gr = self.g_inv.apply(self.rho.arr());
        (fs, Tangent::new((gp[0] - fs * gr[0]) / sd, (gp[1] - fs * gr[1]) / sd))
    }

    /// `L_F(v) = ½ d/dv F²`.
    pub fn legendre(&self, v: Tangent) -> Result<Covector> {
        if v.is_zero() {
            return Err(FinslerError::ZeroVector);
        }
        let gv = self.g.apply(v.arr());
        let len = sqrt(v.x * gv[0] + v.y * gv[1]);
        let f = len + self.rho.apply(v);
        Ok(Covector::new(f * (gv[0] / len + self.rho.x), f * (gv[1] / len + self.rho.y)))
    }

    /// `∇_p (½ F*²)`, the inverse of [`LocalNorm::legendre`].
    pub fn dual_gradient(&self, p: Covector) -> Result<Tangent> {
        if p.is_zero() {
            return Err(FinslerError::ZeroVector);
        }
        let (fs, u) = self.dual_unit_vector(p);
        Ok(u.scale(fs))
    }
}

/// `F(x, v)`.
pub fn eval_f(spec: &MetricSpec, x: TorusPoint, v: Tangent) -> Result<f64> {
    Ok(spec.at(x)?.norm(v))
}

/// `F*(x, p)`.
pub fn dual_norm(spec: &MetricSpec, x: TorusPoint, p: Covector) -> Result<f64> {
    Ok(spec.at(x)?.dual_norm(p))
}

/// `L_F(x, v)`.
pub fn legendre(spec: &MetricSpec, x: TorusPoint, v: Tangent) -> Result<Covector> {
    spec.at(x)?.legendre(v)
}

/// `∇_p(½F*²)(x, p)`.
pub fn dual_gradient(spec: &MetricSpec, x: TorusPoint, p: Covector) -> Result<Tangent> {
    spec.at(x)?.dual_gradient(p)
}

/// Support function of the unit ball of `norm`, i.e. `sup p(u)/F(u)`, by
/// brute force: `samples` equally spaced directions followed by a
/// golden-section refinement of the best bracket. Works for any norm given
/// as a callable and serves as the oracle for the closed forms above.
pub fn support_function_sampled(norm: impl Fn(Tangent) -> f64, p: Covector, samples: usize) -> f64 {
    let samples = samples.max(8);
    let ratio = |t: f64| {
        let u = Tangent::from_angle(t);
        p.apply(u) / norm(u)
    };
    let step = TAU / samples as f64;
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..samples {
        let t = k as f64 * step;
        let r = ratio(t);
        if r > best {
            best = r;
            best_t = t;
        }
    }
    let (mut a, mut b) = (best_t - step, best_t + step);
    let phi = 0.5 * (sqrt(5.0) - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (ratio(c), ratio(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = ratio(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = ratio(d);
        }
    }
    best.max(fc).max(fd)
}

/// Legendre transform by central differences of `½F²` with step
/// `FD_STEP · |v|`; the generic route for norms without a closed form.
pub fn legendre_numeric(norm: impl Fn(Tangent) -> f64, v: Tangent) -> Result<Covector> {
    if v.is_zero() {
        return Err(FinslerError::ZeroVector);
    }
    let h = FD_STEP * v.euclidean_norm();
    let half_sq = |w: Tangent| 0.5 * norm(w) * norm(w);
    let dx = (half_sq(Tangent::new(v.x + h, v.y)) - half_sq(Tangent::new(v.x - h, v.y))) / (2.0 * h);
    let dy = (half_sq(Tangent::new(v.x, v.y + h)) - half_sq(Tangent::new(v.x, v.y - h))) / (2.0 * h);
    Ok(Covector::new(dx, dy))
}

/// Finite-difference Hessian of `F²` at `v`.
pub fn hessian_f_squared(norm: impl Fn(Tangent) -> f64, v: Tangent) -> Sym2 {
    let h = FD_STEP * v.euclidean_norm();
    let sq = |dx: f64, dy: f64| {
        let f = norm(Tangent::new(v.x + dx, v.y + dy));
        f * f
    };
    let c = sq(0.0, 0.0);
    let xx = (sq(h, 0.0) - 2.0 * c + sq(-h, 0.0)) / (h * h);
    let yy = (sq(0.0, h) - 2.0 * c + sq(0.0, -h)) / (h * h);
    let xy = (sq(h, h) - sq(h, -h) - sq(-h, h) + sq(-h, -h)) / (4.0 * h * h);
    Sym2::new(xx, xy, yy)
}

/// Sampled `sup { F(x,−v) : F(x,v) = 1 }`.
pub fn quasireversibility(spec: &MetricSpec, direction_samples: usize, point_samples: usize) -> Result<f64> {
    check_samples(direction_samples, point_samples)?;
    let sampling = Sampling::new(direction_samples, point_samples);
    let mut sup = 1.0f64;
    for x in sampling.points() {
        let n = spec.at(x)?;
        for v in sampling.directions() {
            sup = sup.max(n.norm(v.scale(-1.0)) / n.norm(v));
        }
    }
    Ok(sup)
}

/// Sampled `(inf, sup)` of `F/F₀` over points and directions.
pub fn bilipschitz_ratio(f: &MetricSpec, f0: &MetricSpec, sampling: &Sampling) -> Result<(f64, f64)> {
    check_samples(sampling.directions, sampling.points)?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for x in sampling.points() {
        let (n, n0) = (f.at(x)?, f0.at(x)?);
        for v in sampling.directions() {
            let r = n.norm(v) / n0.norm(v);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Ok((lo, hi))
}

/// Whether the finite-difference Hessian of `F²` is positive-definite at all
/// sampled directions. Uses the unchecked evaluation so that inadmissible
/// Randers data can be probed.
pub fn check_strong_convexity(spec: &MetricSpec, x: TorusPoint, samples: usize) -> bool {
    let n = spec.at_unchecked(x);
    (0..samples.max(1)).all(|k| {
        let v = Tangent::from_angle(TAU * k as f64 / samples.max(1) as f64);
        hessian_f_squared(|w| n.norm(w), v).is_spd(SPD_TOL)
    })
}

/// Coarse constants of a metric relative to a reference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricConstants {
    pub quasireversibility: f64,
    pub bilipschitz_ratio: (f64, f64),
}

impl MetricConstants {
    pub fn measure(spec: &MetricSpec, reference: &MetricSpec, sampling: &Sampling) -> Result<Self> {
        Ok(MetricConstants {
            quasireversibility: quasireversibility(spec, sampling.directions, sampling.points)?,
            bilipschitz_ratio: bilipschitz_ratio(spec, reference, sampling)?,
        })
    }

    /// `C = max(sup, 1/inf)`, the symmetric bi-Lipschitz constant.
    pub fn bilipschitz_constant(&self) -> f64 {
        self.bilipschitz_ratio.1.max(1.0 / self.bilipschitz_ratio.0)
    }
}

fn check_samples(directions: usize, points: usize) -> Result<()> {
    if directions < 16 {
        return Err(FinslerError::InvalidParameter { name: "direction_samples", value: directions as f64 });
    }
    if points < 1 {
        return Err(FinslerError::InvalidParameter { name: "point_samples", value: points as f64 });
    }
    Ok(())
}
