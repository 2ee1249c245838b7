//! Randomised invariants of the metric, fiber and assembly layers, as
//! runnable properties. Shared by the `invariants` test and the acceptance
//! runner.

use std::f64::consts::{PI, TAU};

use fspec_core::fiber::{fiber_sample, FiberQuadrature};
use fspec_core::metric::support_function_sampled;
use fspec_core::spectral::assemble;
use fspec_core::{Covector, LocalNorm, Sym2, SymbolField, Tangent, TorusGrid};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub const CASES: u32 = 128;

pub fn config() -> Config {
    Config { cases: CASES, rng_seed: RngSeed::Fixed(0x00f1_5e11), failure_persistence: None, ..Config::default() }
}

/// SPD matrix from eigenvalues and a rotation angle.
fn spd() -> impl Strategy<Value = Sym2> {
    (0.2f64..5.0, 0.2f64..5.0, 0.0f64..PI).prop_map(|(l1, l2, t)| {
        let (c, s) = (t.cos(), t.sin());
        Sym2::new(l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c)
    })
}

/// Randers norm with `‖ρ‖_{g*} = eta`.
fn randers(max_eta: f64) -> impl Strategy<Value = LocalNorm> {
    (spd(), 0.0..max_eta, 0.0f64..TAU).prop_map(|(g, eta, phi)| {
        let p = [phi.cos(), phi.sin()];
        let len = g.inverse().quad(p).sqrt();
        LocalNorm::randers(g, Covector::new(eta * p[0] / len, eta * p[1] / len))
    })
}

fn angle() -> impl Strategy<Value = f64> {
    0.0f64..TAU
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

type Outcome = Result<(), TestCaseError>;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Outcome) -> Result<(), String> {
    TestRunner::new(config()).run(&strategy, test).map_err(|e| e.to_string())
}

pub fn homogeneity() -> Result<(), String> {
    run((randers(0.95), angle(), angle(), 1e-3f64..1e3), |(norm, t, phi, s)| {
        let v = Tangent::from_angle(t);
        prop_assert!(rel(norm.norm(v.scale(s)), s * norm.norm(v)) < 1e-13);
        let p = Covector::from_angle(phi);
        prop_assert!(rel(norm.dual_norm(p.scale(s)), s * norm.dual_norm(p)) < 1e-13);
        prop_assert!(norm.norm(v) > 0.0 && norm.dual_norm(p) > 0.0);
        Ok(())
    })
}

pub fn legendre_round_trip() -> Result<(), String> {
    run((randers(0.95), angle(), 0.1f64..10.0), |(norm, t, s)| {
        let v = Tangent::from_angle(t).scale(s);
        let p = norm.legendre(v).unwrap();
        let back = norm.dual_gradient(p).unwrap();
        let scale = v.euclidean_norm();
        prop_assert!((back.x - v.x).abs() < 1e-10 * scale && (back.y - v.y).abs() < 1e-10 * scale);
        // F*(L v) = F(v) and (L v)(v) = F(v)²
        let f = norm.norm(v);
        prop_assert!(rel(norm.dual_norm(p), f) < 1e-12);
        prop_assert!(rel(p.apply(v), f * f) < 1e-12);
        Ok(())
    })
}

pub fn duality_consistency() -> Result<(), String> {
    run((randers(0.9), angle(), angle()), |(norm, phi, t)| {
        let p = Covector::from_angle(phi);
        let fs = norm.dual_norm(p);
        // Fenchel inequality against an arbitrary direction
        let v = Tangent::from_angle(t);
        prop_assert!(p.apply(v) <= fs * norm.norm(v) * (1.0 + 1e-12));
        // the supremum is attained by the dual unit vector
        let (_, u) = norm.dual_unit_vector(p);
        prop_assert!(rel(norm.norm(u), 1.0) < 1e-12);
        prop_assert!(rel(p.apply(u), fs) < 1e-12);
        // and agrees with a brute-force support function
        let sampled = support_function_sampled(|w| norm.norm(w), p, 720);
        prop_assert!(rel(sampled, fs) < 1e-8);
        Ok(())
    })
}

pub fn symbol_is_spd() -> Result<(), String> {
    run((randers(0.97), -1.0f64..1.0), |(norm, f)| {
        let q = FiberQuadrature::trapezoid(512);
        let s = fiber_sample(&norm, &q).unwrap();
        prop_assert!(s.mu > 0.0);
        let (lo, hi) = s.sigma_star.eigenvalues();
        prop_assert!(lo > 0.0 && hi.is_finite());
        let t = fiber_sample(&norm.rescaled(f.exp()), &q).unwrap();
        let (lo, _) = t.sigma_star.eigenvalues();
        prop_assert!(lo > 0.0);
        Ok(())
    })
}

pub fn quadrature_normalisation() -> Result<(), String> {
    run((spd(), randers(0.9), 16usize..300, -1.0f64..1.0), |(g, norm, n, f)| {
        let q = FiberQuadrature::trapezoid(n);
        prop_assert!(rel(q.weights().iter().sum::<f64>(), TAU) < 1e-13);
        prop_assert!(rel(q.integrate(|_| 1.0), TAU) < 1e-13);
        // Riemannian: μ = √det g and σ* = g⁻¹
        let s = fiber_sample(&LocalNorm::quadratic(g), &FiberQuadrature::trapezoid(256)).unwrap();
        let gi = g.inverse();
        prop_assert!(rel(s.mu, g.det().sqrt()) < 1e-12);
        prop_assert!((s.sigma_star.add(&gi.scale(-1.0))).norm() < 1e-12 * gi.norm());
        // Randers keeps the volume of its base, conformal factors scale it by e^{2f}
        let q = FiberQuadrature::trapezoid(512);
        let r = fiber_sample(&norm, &q).unwrap();
        prop_assert!(rel(r.mu, norm.g.det().sqrt()) < 1e-10);
        let c = fiber_sample(&norm.rescaled(f.exp()), &q).unwrap();
        prop_assert!(rel(c.mu, (2.0 * f).exp() * r.mu) < 1e-10);
        Ok(())
    })
}

pub fn stiffness_kernel_and_symmetry() -> Result<(), String> {
    let strategy = (
        8usize..14,
        8usize..14,
        prop::collection::vec((spd(), 0.1f64..3.0), 1..4),
        prop::collection::vec(-1.0f64..1.0, 13 * 13),
    );
    run(strategy, |(nx, ny, coeffs, x)| {
        let grid = TorusGrid::new(nx, ny).unwrap();
        // smooth variation between the random coefficient samples
        let sigma: Vec<Sym2> = (0..grid.len())
            .map(|k| {
                let p = grid.point(k);
                let w = 0.5 + 0.5 * (TAU * (p.x() + 2.0 * p.y())).sin();
                let (a, _) = coeffs[k % coeffs.len()];
                let (b, _) = coeffs[0];
                a.scale(w).add(&b.scale(1.0 - w + 0.05))
            })
            .collect();
        let mu: Vec<f64> = (0..grid.len()).map(|k| coeffs[k % coeffs.len()].1).collect();
        let problem = assemble(&SymbolField::from_parts(&grid, sigma, mu).unwrap()).unwrap();
        let k = problem.stiffness();
        prop_assert!(k.asymmetry() <= 1e-12 * k.max_abs());
        prop_assert!(problem.kernel_defect() < 1e-12);
        let v = &x[..grid.len()];
        prop_assert!(k.quad(v) >= -1e-12 * k.max_abs());
        prop_assert!(problem.mass().iter().all(|m| *m > 0.0));
        Ok(())
    })
}

pub type Property = fn() -> Result<(), String>;

/// Every property by name.
#[allow(dead_code)]
pub const ALL: [(&str, Property); 6] = [
    ("homogeneity", homogeneity),
    ("legendre_round_trip", legendre_round_trip),
    ("duality_consistency", duality_consistency),
    ("symbol_is_spd", symbol_is_spd),
    ("quadrature_normalisation", quadrature_normalisation),
    ("stiffness_kernel_and_symmetry", stiffness_kernel_and_symmetry),
];
