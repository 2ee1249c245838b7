//! Fiber integrals over the dual direction circle.
//!
//! The dual fiber at `x` is parametrised by the Euclidean angle `φ` of
//! `p̂ = (cos φ, sin φ)`, carrying the contact density `F*(p̂)⁻² dφ`. With the
//! Euclidean reference this gives
//!
//! ```text
//! μ(x)       = (1/2π) ∫ F*(p̂)⁻² dφ
//! σ*(x)[p,p] = (1/π) (1/μ) ∫ F*(p̂)⁻² p(v(φ))² dφ
//! a(x)       = μ √det σ*
//! ```
//!
//! where `v(φ) = ∇F*(p̂)` is the `F`-unit vector Legendre-dual to `p̂`.
//! Every integrand is smooth and periodic in `φ`, so the equal-weight
//! trapezoid rule converges geometrically.

use alloc::vec::Vec;

use crate::linalg::Sym2;
use crate::math::{cos, exp, sin, sqrt, PI, TAU};
use crate::metric::{Covector, LocalNorm, MetricSpec, Tangent, TorusPoint, SPD_TOL};
use crate::spectral::TorusGrid;
use crate::{FinslerError, Result};

/// Smallest admissible `F*` on a quadrature node.
pub const DUAL_NORM_FLOOR: f64 = 1e-8;

/// Nodes and weights on the direction circle.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FiberQuadrature {
    /// Equal-weight periodic trapezoid rule with `n` nodes.
    pub fn trapezoid(n: usize) -> Self {
        let n = n.max(1);
        let w = TAU / n as f64;
        FiberQuadrature {
            nodes: (0..n).map(|j| w * j as f64).collect(),
            weights: alloc::vec![w; n],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫₀^{2π} f(φ) dφ`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(t, w)| w * f(t)).sum()
    }
}

impl Default for FiberQuadrature {
    fn default() -> Self {
        FiberQuadrature::trapezoid(256)
    }
}

/// Adaptive fiber resolution: double the trapezoid rule from `initial` until
/// `μ` and `σ*` change by less than `tol` (relative), at most `max` nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberRule {
    pub initial: usize,
    pub max: usize,
    pub tol: f64,
}

impl FiberRule {
    pub const fn fixed(n: usize) -> Self {
        FiberRule { initial: n, max: n, tol: 0.0 }
    }
}

impl Default for FiberRule {
    fn default() -> Self {
        FiberRule { initial: 256, max: 4096, tol: 1e-10 }
    }
}

/// `μ` and `σ*` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberSample {
    pub mu: f64,
    pub sigma_star: Sym2,
}

impl FiberSample {
    pub fn weight(&self) -> f64 {
        weight(&self.sigma_star, self.mu)
    }
}

/// Integrate `μ` and `σ*` for a frozen norm.
pub fn fiber_sample(norm: &LocalNorm, quad: &FiberQuadrature) -> Result<FiberSample> {
    let (mut m0, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0);
    for (phi, w) in quad.iter() {
        let (fs, v) = norm.dual_unit_vector(Covector::new(cos(phi), sin(phi)));
        if !(fs >= DUAL_NORM_FLOOR) {
            return Err(FinslerError::IllPosedMetric { x: f64::NAN, y: f64::NAN, reason: "F* vanishes on the fiber" });
        }
        let d = w / (fs * fs);
        m0 += d;
        sxx += d * v.x * v.x;
        sxy += d * v.x * v.y;
        syy += d * v.y * v.y;
    }
    let mu = m0 / TAU;
    let s = 1.0 / (PI * mu);
    let sigma_star = Sym2::new(sxx * s, sxy * s, syy * s);
    if !sigma_star.is_spd(SPD_TOL) || !(mu > 0.0) {
        return Err(FinslerError::QuadratureFailure { nodes: quad.len() });
    }
    Ok(FiberSample { mu, sigma_star })
}

/// Adaptive [`fiber_sample`]; also returns the node count used and whether
/// the tolerance was met.
pub fn fiber_sample_adaptive(norm: &LocalNorm, rule: &FiberRule) -> Result<(FiberSample, usize, bool)> {
    let mut n = rule.initial.max(8);
    let mut prev = fiber_sample(norm, &FiberQuadrature::trapezoid(n))?;
    while n < rule.max {
        let next_n = (2 * n).min(rule.max);
        let next = fiber_sample(norm, &FiberQuadrature::trapezoid(next_n))?;
        let dmu = (next.mu - prev.mu).abs() / next.mu;
        let ds = next.sigma_star.add(&prev.sigma_star.scale(-1.0)).norm() / next.sigma_star.norm();
        n = next_n;
        prev = next;
        if dmu < rule.tol && ds < rule.tol {
            return Ok((prev, n, true));
        }
    }
    Ok((prev, n, rule.tol == 0.0))
}

/// Holmes–Thompson density `μ(x)` of `Ω^F` against `dx∧dy`.
pub fn volume_density(spec: &MetricSpec, x: TorusPoint, quad: &FiberQuadrature) -> Result<f64> {
    let norm = spec.at(x)?;
    let mut m0 = 0.0;
    for (phi, w) in quad.iter() {
        let fs = norm.dual_norm(Covector::new(cos(phi), sin(phi)));
        if !(fs >= DUAL_NORM_FLOOR) {
            return Err(FinslerError::IllPosedMetric { x: x.x(), y: x.y(), reason: "F* vanishes on the fiber" });
        }
        m0 += w / (fs * fs);
    }
    Ok(m0 / TAU)
}

/// Dual symbol form `σ*(x)` so that the energy density is `σ*(df, df) μ`.
pub fn symbol(spec: &MetricSpec, x: TorusPoint, quad: &FiberQuadrature) -> Result<Sym2> {
    fiber_sample(&spec.at(x)?, quad).map(|s| s.sigma_star).map_err(|e| locate(e, x))
}

/// Weight `a` with `Ω^F = a Ω^{σ}`.
pub fn weight(sigma_star: &Sym2, mu: f64) -> f64 {
    mu * sqrt(sigma_star.det())
}

/// `(σ*, μ)` of `e^f F` from those of `F` in dimension two.
pub fn conformal_transform(sigma_star: &Sym2, mu: f64, f: f64) -> (Sym2, f64) {
    let e = exp(2.0 * f);
    (sigma_star.scale(1.0 / e), mu * e)
}

/// Binet–Legendre metric `g_BL` at a point.
///
/// The dual form is the normalised second moment of the `F`-unit ball `B`,
/// `g*(p, p) = (4 / |B|) ∫_B p(v)² dv`, evaluated in polar coordinates with
/// the tangent angle `θ` on `quad`; the radial integrals up to
/// `R(θ) = 1/F(u_θ)` are done exactly.
pub fn binet_legendre(norm: &LocalNorm, quad: &FiberQuadrature) -> Sym2 {
    let (mut area, mut mxx, mut mxy, mut myy) = (0.0, 0.0, 0.0, 0.0);
    for (t, w) in quad.iter() {
        let u = Tangent::from_angle(t);
        let r = 1.0 / norm.norm(u);
        let r2 = r * r;
        area += w * r2 / 2.0;
        let m = w * r2 * r2 / 4.0;
        mxx += m * u.x * u.x;
        mxy += m * u.x * u.y;
        myy += m * u.y * u.y;
    }
    let s = 4.0 / area;
    Sym2::new(mxx * s, mxy * s, myy * s).inverse()
}

/// Binet–Legendre metric of `spec` at `x`.
pub fn binet_legendre_at(spec: &MetricSpec, x: TorusPoint, quad: &FiberQuadrature) -> Result<Sym2> {
    Ok(binet_legendre(&spec.at(x)?, quad))
}

fn locate(e: FinslerError, x: TorusPoint) -> FinslerError {
    match e {
        FinslerError::IllPosedMetric { reason, .. } => FinslerError::IllPosedMetric { x: x.x(), y: x.y(), reason },
        other => other,
    }
}

/// Per-node `σ*`, `μ` and `a` on a torus grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolField {
    grid: TorusGrid,
    sigma_star: Vec<Sym2>,
    mu: Vec<f64>,
    a: Vec<f64>,
    /// Largest fiber node count used at any grid node.
    pub fiber_nodes: usize,
    /// Whether the adaptive rule converged at every node.
    pub converged: bool,
}

impl SymbolField {
    /// Evaluate the fiber integrals at every node of `grid`. Spatially
    /// constant metrics are integrated once and broadcast.
    pub fn compute(spec: &MetricSpec, grid: &TorusGrid, rule: &FiberRule) -> Result<Self> {
        let n = grid.len();
        if spec.is_spatially_constant() {
            let x = TorusPoint::new(0.0, 0.0);
            let (s, nodes, ok) = fiber_sample_adaptive(&spec.at(x)?, rule).map_err(|e| locate(e, x))?;
            return Ok(SymbolField {
                grid: *grid,
                sigma_star: alloc::vec![s.sigma_star; n],
                mu: alloc::vec![s.mu; n],
                a: alloc::vec![s.weight(); n],
                fiber_nodes: nodes,
                converged: ok,
            });
        }
        let mut sigma_star = Vec::with_capacity(n);
        let mut mu = Vec::with_capacity(n);
        let mut a = Vec::with_capacity(n);
        let (mut max_nodes, mut converged) = (0, true);
        for idx in 0..n {
            let x = grid.point(idx);
            let (s, nodes, ok) = fiber_sample_adaptive(&spec.at(x)?, rule).map_err(|e| locate(e, x))?;
            sigma_star.push(s.sigma_star);
            mu.push(s.mu);
            a.push(s.weight());
            max_nodes = max_nodes.max(nodes);
            converged &= ok;
        }
        Ok(SymbolField { grid: *grid, sigma_star, mu, a, fiber_nodes: max_nodes, converged })
    }

    /// Build from explicit per-node data; `a` is derived.
    pub fn from_parts(grid: &TorusGrid, sigma_star: Vec<Sym2>, mu: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        for len in [sigma_star.len(), mu.len()] {
            if len != n {
                return Err(FinslerError::Shape { expected: n, found: len });
            }
        }
        if let Some(i) = sigma_star.iter().position(|s| !s.is_spd(SPD_TOL)) {
            let x = grid.point(i);
            return Err(FinslerError::IllPosedMetric { x: x.x(), y: x.y(), reason: "symbol is not positive-definite" });
        }
        let a = sigma_star.iter().zip(&mu).map(|(s, &m)| weight(s, m)).collect();
        Ok(SymbolField { grid: *grid, sigma_star, mu, a, fiber_nodes: 0, converged: true })
    }

    /// Constant-coefficient field.
    pub fn constant(grid: &TorusGrid, sigma_star: Sym2, mu: f64) -> Result<Self> {
        SymbolField::from_parts(grid, alloc::vec![sigma_star; grid.len()], alloc::vec![mu; grid.len()])
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn sigma_star(&self) -> &[Sym2] {
        &self.sigma_star
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// The pure-symbol problem: same `σ*`, volume `Ω^σ = dx∧dy/√det σ*`.
    pub fn pure_symbol(&self) -> SymbolField {
        let mu: Vec<f64> = self.sigma_star.iter().map(|s| 1.0 / sqrt(s.det())).collect();
        SymbolField {
            grid: self.grid,
            sigma_star: self.sigma_star.clone(),
            a: alloc::vec![1.0; mu.len()],
            mu,
            fiber_nodes: self.fiber_nodes,
            converged: self.converged,
        }
    }

    /// Apply `e^f` node-wise.
    pub fn conformally_rescaled(&self, f: impl Fn(TorusPoint) -> f64) -> SymbolField {
        let mut out = self.clone();
        for i in 0..self.grid.len() {
            let (s, m) = conformal_transform(&self.sigma_star[i], self.mu[i], f(self.grid.point(i)));
            out.sigma_star[i] = s;
            out.mu[i] = m;
            out.a[i] = weight(&s, m);
        }
        out
    }

    /// `(inf a, sup a)`.
    pub fn weight_range(&self) -> (f64, f64) {
        self.a.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// `∫ μ dx dy`, the Holmes–Thompson area of the torus.
    pub fn total_volume(&self) -> f64 {
        self.mu.iter().sum::<f64>() * self.grid.cell_area()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{CovectorField, Harmonic, ScalarField, TensorField};
    use approx::assert_relative_eq;

    fn origin() -> TorusPoint {
        TorusPoint::new(0.0, 0.0)
    }

    #[test]
    fn quadrature_weights_sum_to_tau() {
        for n in [1, 7, 256, 4096] {
            let q = FiberQuadrature::trapezoid(n);
            assert!((q.weights().iter().sum::<f64>() - TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn euclidean_fields() {
        let q = FiberQuadrature::default();
        let spec = MetricSpec::euclidean();
        assert_relative_eq!(volume_density(&spec, origin(), &q).unwrap(), 1.0, epsilon = 1e-14);
        let s = symbol(&spec, origin(), &q).unwrap();
        assert_relative_eq!(s.xx, 1.0, epsilon = 1e-14);
        assert_relative_eq!(s.yy, 1.0, epsilon = 1e-14);
        assert!(s.xy.abs() < 1e-14);
    }

    #[test]
    fn riemannian_volume_against_closed_integral() {
        let (h, r) = (2.0, 0.5);
        // (1/2π)∫(h⁻²cos² + r⁻²sin²)⁻¹ dφ by a separate 8192-node rule
        let oracle = FiberQuadrature::trapezoid(8192)
            .integrate(|t| 1.0 / (cos(t).powi(2) / (h * h) + sin(t).powi(2) / (r * r)))
            / TAU;
        assert_relative_eq!(oracle, h * r, max_relative = 1e-12);
        let mu = volume_density(&MetricSpec::flat_torus(h, r), origin(), &FiberQuadrature::trapezoid(256)).unwrap();
        assert_relative_eq!(mu, h * r, max_relative = 1e-12);
    }

    #[test]
    fn riemannian_symbol_is_inverse_metric() {
        let g = Sym2::new(2.5, -0.6, 0.8);
        let spec = MetricSpec::riemannian_constant(g);
        let s = fiber_sample(&spec.at(origin()).unwrap(), &FiberQuadrature::trapezoid(256)).unwrap();
        let gi = g.inverse();
        assert!(s.sigma_star.add(&gi.scale(-1.0)).norm() / gi.norm() < 1e-8);
        assert_relative_eq!(s.mu, sqrt(g.det()), max_relative = 1e-8);
        assert_relative_eq!(s.weight(), 1.0, max_relative = 1e-8);
    }

    #[test]
    fn randers_symbol_matches_closed_form() {
        for &(h, r, eta) in &[(2.0, 0.5, 0.6), (1.0, 1.0, 0.6), (1.5, 0.7, 0.9)] {
            let spec = MetricSpec::randers_torus(h, r, eta);
            let s = fiber_sample(&spec.at(origin()).unwrap(), &FiberQuadrature::trapezoid(512)).unwrap();
            let (a, b) = crate::randers::randers_axis_symbol(h, r, eta).unwrap();
            assert_relative_eq!(s.sigma_star.xx, a, max_relative = 1e-10);
            assert_relative_eq!(s.sigma_star.yy, b, max_relative = 1e-10);
            assert!(s.sigma_star.xy.abs() < 1e-12);
            assert_relative_eq!(s.mu, h * r, max_relative = 1e-12);
            assert_relative_eq!(s.weight(), h * r * sqrt(a * b), max_relative = 1e-10);
        }
    }

    #[test]
    fn conformal_transform_examples() {
        let s = Sym2::new(1.0, 0.2, 3.0);
        assert_eq!(conformal_transform(&s, 2.0, 0.0), (s, 2.0));
        let (s2, m2) = conformal_transform(&s, 2.0, core::f64::consts::LN_2);
        assert_relative_eq!(m2, 8.0, max_relative = 1e-15);
        assert_relative_eq!(s2.yy, 0.75, max_relative = 1e-15);
        assert_relative_eq!(weight(&s2, m2), weight(&s, 2.0), max_relative = 1e-14);
    }

    #[test]
    fn conformal_pipeline_matches_transform() {
        let base = MetricSpec::randers_torus(1.2, 0.9, 0.5);
        let f = ScalarField::offset_harmonic(0.0, 0.3, Harmonic::Sin(1), Harmonic::ONE);
        let spec = MetricSpec::conformal(base.clone(), f.clone());
        let q = FiberQuadrature::trapezoid(256);
        for k in 0..8 {
            let x = TorusPoint::new(k as f64 / 8.0, 0.1);
            let direct = fiber_sample(&spec.at(x).unwrap(), &q).unwrap();
            let b = fiber_sample(&base.at(x).unwrap(), &q).unwrap();
            let (s, m) = conformal_transform(&b.sigma_star, b.mu, f.eval(x.x(), x.y()));
            assert!(direct.sigma_star.add(&s.scale(-1.0)).norm() / s.norm() < 1e-8);
            assert_relative_eq!(direct.mu, m, max_relative = 1e-8);
        }
    }

    #[test]
    fn binet_legendre_reductions() {
        let q = FiberQuadrature::trapezoid(1024);
        let e = binet_legendre(&MetricSpec::euclidean().at(origin()).unwrap(), &q);
        assert!(e.add(&Sym2::IDENTITY.scale(-1.0)).norm() < 1e-12);
        let g = Sym2::new(3.0, 0.7, 0.5);
        let bl = binet_legendre(&MetricSpec::riemannian_constant(g).at(origin()).unwrap(), &q);
        assert!(bl.add(&g.scale(-1.0)).norm() / g.norm() < 1e-6);
    }

    #[test]
    fn adaptive_rule_converges_and_caps() {
        let n = MetricSpec::randers_torus(2.0, 0.5, 0.99).at(origin()).unwrap();
        let (_, nodes, ok) = fiber_sample_adaptive(&n, &FiberRule::default()).unwrap();
        assert!(ok);
        assert!(nodes <= 4096);
        let (_, nodes, _) = fiber_sample_adaptive(&n, &FiberRule::fixed(64)).unwrap();
        assert_eq!(nodes, 64);
    }

    #[test]
    fn field_broadcasts_constant_specs_and_tracks_weight() {
        let grid = TorusGrid::new(8, 8).unwrap();
        let f = SymbolField::compute(&MetricSpec::randers_torus(2.0, 0.5, 0.6), &grid, &FiberRule::default()).unwrap();
        assert_eq!(f.mu().len(), 64);
        assert_relative_eq!(f.total_volume(), 1.0, max_relative = 1e-12);
        let spec = MetricSpec::Randers {
            g: TensorField::constant(Sym2::diag(1.0, 1.0)),
            rho: CovectorField { x: ScalarField::offset_harmonic(0.3, 0.2, Harmonic::ONE, Harmonic::Sin(1)), y: ScalarField::zero() },
        };
        let f = SymbolField::compute(&spec, &grid, &FiberRule::default()).unwrap();
        for i in 0..grid.len() {
            assert_relative_eq!(f.a()[i], weight(&f.sigma_star()[i], f.mu()[i]));
        }
        let (lo, hi) = f.weight_range();
        assert!(hi > lo);
        let p = f.pure_symbol();
        for i in 0..grid.len() {
            assert_relative_eq!(p.mu()[i] * f.a()[i], f.mu()[i], max_relative = 1e-14);
        }
    }
}
