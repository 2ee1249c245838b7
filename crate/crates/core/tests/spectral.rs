use std::f64::consts::PI;

use approx::assert_relative_eq;
use fspec_core::randers::{randers_axis_symbol, threshold_eta};
use fspec_core::spectral::dense::generalized_symmetric;
use fspec_core::spectral::{
    assemble, convergence_study, discrete_oracle, fourier_oracle, GridFunction, SolverMethod, SolverOptions,
    MULTIPLET_TOL,
};
use fspec_core::{FiberRule, MetricSpec, SpectralProblem, Sym2, SymbolField, TorusGrid};

fn problem(spec: &MetricSpec, n: usize) -> SpectralProblem {
    let grid = TorusGrid::square(n).unwrap();
    let field = SymbolField::compute(spec, &grid, &FiberRule::default()).unwrap();
    assemble(&field).unwrap()
}

fn sin_x(grid: &TorusGrid) -> GridFunction {
    GridFunction::sample(grid, |x, _| (2.0 * PI * x).sin())
}

fn sin_y(grid: &TorusGrid) -> GridFunction {
    GridFunction::sample(grid, |_, y| (2.0 * PI * y).sin())
}

#[test]
fn euclidean_energy_of_sine() {
    let p = problem(&MetricSpec::euclidean(), 32);
    let e = p.energy(&sin_x(p.grid())).unwrap();
    // ∫ (∂ₓ sin 2πx)² = 2π²; the stencil loses (πΔ)²/3
    assert_relative_eq!(e, 2.0 * PI * PI, max_relative = (PI / 32.0).powi(2) / 3.0 * 1.01);
    assert!((e - 2.0 * PI * PI).abs() > 1e-6);
}

#[test]
fn constant_diagonal_field_gives_five_point_stencil() {
    let grid = TorusGrid::new(8, 12).unwrap();
    let (a, b, mu) = (1.7, 0.4, 2.5);
    let field = SymbolField::constant(&grid, Sym2::diag(a, b), mu).unwrap();
    let k = assemble(&field).unwrap();
    let (dx, dy) = (grid.dx(), grid.dy());
    let area = dx * dy;
    let cx = mu * a * area / (dx * dx);
    let cy = mu * b * area / (dy * dy);
    for idx in 0..grid.len() {
        let (i, j) = grid.coords(idx);
        let (i, j) = (i as isize, j as isize);
        let mut hand = vec![0.0; grid.len()];
        hand[idx] += 2.0 * cx + 2.0 * cy;
        hand[grid.index(i + 1, j)] -= cx;
        hand[grid.index(i - 1, j)] -= cx;
        hand[grid.index(i, j + 1)] -= cy;
        hand[grid.index(i, j - 1)] -= cy;
        for (col, h) in hand.iter().enumerate() {
            assert_relative_eq!(k.stiffness().get(idx, col), *h, epsilon = 1e-12 * cx.max(cy));
        }
        assert_relative_eq!(k.mass()[idx], mu * area, max_relative = 1e-15);
    }
}

#[test]
fn kernel_and_symmetry_on_varying_field() {
    let p = problem(&MetricSpec::randers_modulated(1.5, 0.8, 0.7), 16);
    assert!(p.stiffness().asymmetry() == 0.0);
    assert!(p.kernel_defect() < 1e-12);
    assert!(p.mass().iter().all(|m| *m > 0.0));
}

#[test]
fn randers_rayleigh_quotients_match_symbol() {
    let (h, r, eta) = (2.0, 0.5, 0.6);
    let (a, b) = randers_axis_symbol(h, r, eta).unwrap();
    let p = problem(&MetricSpec::randers_torus(h, r, eta), 64);
    let tol = (PI / 64.0).powi(2);
    let rx = p.rayleigh(&sin_x(p.grid())).unwrap();
    let ry = p.rayleigh(&sin_y(p.grid())).unwrap();
    assert_relative_eq!(rx, 4.0 * PI * PI * a, max_relative = tol);
    assert_relative_eq!(ry, 4.0 * PI * PI * b, max_relative = tol);
}

#[test]
fn rayleigh_of_constants_and_zero() {
    let p = problem(&MetricSpec::randers_modulated(1.0, 1.0, 0.5), 16);
    let one = GridFunction::constant(p.grid(), 3.0);
    assert!(p.rayleigh(&one).unwrap().abs() < 1e-12);
    assert!(p.rayleigh(&GridFunction::constant(p.grid(), 0.0)).is_err());
    assert!(p.rayleigh(&GridFunction(vec![1.0; 5])).is_err());
}

#[test]
fn euclidean_torus_first_eigenvalue() {
    let p = problem(&MetricSpec::euclidean(), 64);
    let s = p.solve(4, &SolverOptions::default()).unwrap();
    assert_eq!(s.method, SolverMethod::Iterative);
    let l = 4.0 * PI * PI;
    for i in 1..=4 {
        assert_relative_eq!(s.eigenvalues[i], l, max_relative = 0.01);
    }
    assert_eq!(s.multiplicity(1, MULTIPLET_TOL), 4);
    assert!(s.eigenvalues[0].abs() < 1e-10 * s.eigenvalues[1]);
}

#[test]
fn flat_anisotropic_torus() {
    let p = problem(&MetricSpec::flat_torus(2.0, 0.5), 64);
    let s = p.solve(3, &SolverOptions::default()).unwrap();
    assert_relative_eq!(s.eigenvalues[1], PI * PI, max_relative = 0.01);
    assert_eq!(s.multiplicity(1, MULTIPLET_TOL), 2);
}

#[test]
fn randers_torus_beats_riemannian_bound() {
    let (h, r) = (2.0, 0.5);
    let eta = threshold_eta(h, r).unwrap();
    let p = problem(&MetricSpec::randers_torus(h, r, eta), 64);
    let s = p.solve(2, &SolverOptions::default()).unwrap();
    assert!(s.eigenvalues[1] >= 16.0 * PI * PI * 0.99, "{}", s.eigenvalues[1]);
}

#[test]
fn eigenvectors_are_mass_orthonormal_and_rayleigh_matches() {
    for method in [SolverMethod::Dense, SolverMethod::Iterative] {
        let p = problem(&MetricSpec::randers_modulated(1.2, 0.9, 0.8), 24);
        let opts = SolverOptions { method, ..SolverOptions::default() };
        let s = p.solve(6, &opts).unwrap();
        for i in 0..s.len() {
            assert!(s.residuals[i] <= 1e-9 * s.eigenvalues[i].max(s.eigenvalues[1]), "{method:?} {i}");
            for j in 0..=i {
                let mij: f64 = (0..p.grid().len())
                    .map(|n| s.eigenvectors[i][n] * s.eigenvectors[j][n] * p.mass()[n])
                    .sum();
                assert!((mij - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8, "{method:?} {i} {j} {mij}");
            }
        }
        let r = p.rayleigh(&GridFunction(s.eigenvectors[1].clone())).unwrap();
        assert_relative_eq!(r, s.eigenvalues[1], max_relative = 1e-9);
        assert!(s.eigenvalues[0].abs() < 1e-10 * s.eigenvalues[1]);
    }
}

#[test]
fn dense_and_iterative_agree() {
    let p = problem(&MetricSpec::randers_modulated(1.0, 1.0, 0.9), 32);
    let d = p.solve(10, &SolverOptions { method: SolverMethod::Dense, ..Default::default() }).unwrap();
    let i = p.solve(10, &SolverOptions { method: SolverMethod::Iterative, ..Default::default() }).unwrap();
    for k in 1..=10 {
        assert_relative_eq!(d.eigenvalues[k], i.eigenvalues[k], max_relative = 1e-8);
    }
}

#[test]
fn iterative_converges_on_varying_field_and_its_pure_symbol() {
    // converged Ritz vectors used to stall the block expansion near 1e-9
    let grid = TorusGrid::square(64).unwrap();
    let field = SymbolField::compute(&MetricSpec::randers_modulated(2.0, 0.5, 0.9), &grid, &FiberRule::default()).unwrap();
    let opts = SolverOptions { method: SolverMethod::Iterative, ..Default::default() };
    for f in [field.clone(), field.pure_symbol()] {
        let s = assemble(&f).unwrap().solve(10, &opts).unwrap();
        assert!(s.cycles < 100, "{} cycles", s.cycles);
    }
}

#[test]
fn orthogonal_trial_function_bounds_first_eigenvalue() {
    let p = problem(&MetricSpec::randers_modulated(1.0, 1.0, 0.6), 24);
    let s = p.solve(1, &SolverOptions::default()).unwrap();
    let grid = *p.grid();
    // project out constants in the M inner product
    let f = GridFunction::sample(&grid, |x, y| (2.0 * PI * x).cos() + 0.3 * (2.0 * PI * (x + y)).sin());
    let total: f64 = p.mass().iter().sum();
    let mean: f64 = f.values().iter().zip(p.mass()).map(|(v, m)| v * m).sum::<f64>() / total;
    let g = GridFunction(f.values().iter().map(|v| v - mean).collect());
    assert!(p.rayleigh(&g).unwrap() >= s.eigenvalues[1]);
}

#[test]
fn oracle_matches_solver_for_constant_fields() {
    let n = 64;
    let delta = 1.0 / n as f64;
    for (h, r, eta) in [(1.0, 1.0, 0.6), (1.0, 1.0, 0.0), (1.3, 0.9, 0.3)] {
        let (a, b) = randers_axis_symbol(h, r, eta).unwrap();
        let s = problem(&MetricSpec::randers_torus(h, r, eta), n).solve(10, &SolverOptions::default()).unwrap();
        let oracle = fourier_oracle(a, b, 10).unwrap();
        let base = 4.0 * PI * PI * a.max(b) * (PI * delta).powi(2);
        let modes = fourier_modes(a, b, 10);
        for k in 1..=10 {
            let err = (s.eigenvalues[k] - oracle[k]).abs();
            // the stencil error of mode (m, n) is 4π²(A m⁴ + B n⁴)(πΔ)²/3
            let m = modes[k];
            let sharp = 4.0 * PI * PI * (a * m.0.powi(4) + b * m.1.powi(4)) * (PI * delta).powi(2) / 3.0;
            assert!(err <= sharp * 1.01, "mode bound k={k}: {err} > {sharp}");
            if m.0.abs().max(m.1.abs()) <= 1.0 {
                assert!(err <= 1.5 * base, "k={k}: {err} > {}", 1.5 * base);
            }
        }
    }
}

// Lattice modes ordered by 4π²(A m² + B n²) with the same tie order as the
// oracle values.
fn fourier_modes(a: f64, b: f64, k: usize) -> Vec<(f64, f64)> {
    let mut modes: Vec<(f64, f64, f64)> = (-6i32..=6)
        .flat_map(|m| (-6i32..=6).map(move |n| (m as f64, n as f64)))
        .map(|(m, n)| (a * m * m + b * n * n, m, n))
        .collect();
    modes.sort_by(|x, y| x.0.total_cmp(&y.0));
    modes.into_iter().take(k + 1).map(|(_, m, n)| (m, n)).collect()
}

#[test]
fn discrete_oracle_is_exact_for_constant_fields() {
    let grid = TorusGrid::new(16, 20).unwrap();
    let c = Sym2::new(1.3, 0.4, 0.8);
    let mu = 0.7;
    let field = SymbolField::constant(&grid, c.scale(1.0 / mu), mu).unwrap();
    let s = assemble(&field).unwrap().solve(12, &SolverOptions::default()).unwrap();
    let o = discrete_oracle(&c, mu, &grid, 12);
    for k in 1..=12 {
        assert_relative_eq!(s.eigenvalues[k], o[k], max_relative = 1e-10);
    }
}

// Periodic bilinear interpolation from an nc×nc grid to nf×nf (nf = q·nc).
fn prolongation(nc: usize, nf: usize) -> Vec<Vec<f64>> {
    let q = nf / nc;
    let mut cols = vec![vec![0.0; nf * nf]; nc * nc];
    for jf in 0..nf {
        for i_f in 0..nf {
            let (ic, tx) = (i_f / q, (i_f % q) as f64 / q as f64);
            let (jc, ty) = (jf / q, (jf % q) as f64 / q as f64);
            for (di, wx) in [(0, 1.0 - tx), (1, tx)] {
                for (dj, wy) in [(0, 1.0 - ty), (1, ty)] {
                    let c = ((jc + dj) % nc) * nc + (ic + di) % nc;
                    cols[c][jf * nf + i_f] += wx * wy;
                }
            }
        }
    }
    cols
}

fn restricted_spectrum(p: &SpectralProblem, cols: &[Vec<f64>]) -> Vec<f64> {
    let d = cols.len();
    let kc: Vec<Vec<f64>> = cols.iter().map(|c| p.stiffness().mul(c)).collect();
    let mut a = vec![0.0; d * d];
    let mut b = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            a[i * d + j] = cols[i].iter().zip(&kc[j]).map(|(x, y)| x * y).sum();
            b[i * d + j] = cols[i].iter().zip(&cols[j]).zip(p.mass()).map(|((x, y), m)| x * y * m).sum();
        }
    }
    generalized_symmetric(&a, &b, d).unwrap().0
}

#[test]
fn minmax_monotone_under_nested_refinement() {
    let nf = 32;
    let p = problem(&MetricSpec::randers_modulated(1.0, 1.0, 0.7), nf);
    let fine = p.solve(10, &SolverOptions::default()).unwrap().eigenvalues;
    let l8 = restricted_spectrum(&p, &prolongation(8, nf));
    let l16 = restricted_spectrum(&p, &prolongation(16, nf));
    let slack = 1e-9;
    for k in 0..=10 {
        assert!(l8[k] >= l16[k] * (1.0 - slack) - slack, "k={k}: {} < {}", l8[k], l16[k]);
        assert!(l16[k] >= fine[k] * (1.0 - slack) - slack, "k={k}: {} < {}", l16[k], fine[k]);
    }
    assert!(l8[1] > l16[1] && l16[1] > fine[1]);
}

#[test]
fn weighted_laplacian_two_sided_bound() {
    let grid = TorusGrid::square(32).unwrap();
    let spec = MetricSpec::randers_modulated(1.0, 1.0, 0.9);
    let field = SymbolField::compute(&spec, &grid, &FiberRule::default()).unwrap();
    let (lo, hi) = field.weight_range();
    assert!(hi / lo > 1.05, "weight should vary: {lo} {hi}");
    let c = hi / lo;
    let lf = assemble(&field).unwrap().solve(10, &SolverOptions::default()).unwrap().eigenvalues;
    let ls = assemble(&field.pure_symbol()).unwrap().solve(10, &SolverOptions::default()).unwrap().eigenvalues;
    for k in 1..=10 {
        assert!(lf[k] <= c * ls[k] && ls[k] <= c * lf[k], "k={k}: {} {} C={c}", lf[k], ls[k]);
    }
}

#[test]
fn scaling_divides_eigenvalues_by_t_squared() {
    let base = MetricSpec::randers_modulated(1.0, 1.0, 0.5);
    let l0 = problem(&base, 24).solve(8, &SolverOptions::default()).unwrap().eigenvalues;
    for t in [0.5, 2.0, 3.7] {
        let lt = problem(&MetricSpec::scaled(base.clone(), t), 24).solve(8, &SolverOptions::default()).unwrap().eigenvalues;
        for k in 1..=8 {
            assert_relative_eq!(lt[k] * t * t, l0[k], max_relative = 1e-10);
        }
    }
}

#[test]
fn euclidean_convergence_is_second_order() {
    let t = convergence_study(&MetricSpec::euclidean(), &[16, 32, 64], 4, &FiberRule::default(), &SolverOptions::default())
        .unwrap();
    assert!(t.oracle.is_some());
    for w in t.rows.windows(2) {
        let ratio = w[0].errors[0] / w[1].errors[0];
        assert!((ratio - 4.0).abs() <= 0.8, "{ratio}");
    }
    for order in &t.orders {
        assert!((order - 2.0).abs() < 0.2);
    }
}

#[test]
fn randers_constant_convergence_is_second_order() {
    let t = convergence_study(
        &MetricSpec::randers_torus(1.0, 1.0, 0.6),
        &[16, 32, 64],
        2,
        &FiberRule::default(),
        &SolverOptions::default(),
    )
    .unwrap();
    assert!(t.oracle.is_some());
    for order in &t.orders {
        assert!((order - 2.0).abs() < 0.2, "{order}");
    }
}

#[test]
fn varying_randers_self_convergence_is_monotone() {
    let t = convergence_study(
        &MetricSpec::randers_modulated(1.0, 1.0, 0.8),
        &[16, 32, 64],
        2,
        &FiberRule::default(),
        &SolverOptions::default(),
    )
    .unwrap();
    assert!(t.oracle.is_none());
    assert!(t.is_monotone());
    assert!((t.orders[0] - 2.0).abs() < 0.3, "{:?}", t.orders);
}

#[test]
fn too_many_eigenvalues_is_rejected() {
    let p = problem(&MetricSpec::euclidean(), 8);
    assert!(p.solve(64, &SolverOptions::default()).is_err());
    assert!(p.solve(63, &SolverOptions::default()).is_ok());
}
