//! Block shift-invert Krylov eigensolver with Rayleigh–Ritz restarts.
//!
//! Each cycle extends the current block `X` to `[X, TX, T²X]` with
//! `T = (K + sM)⁻¹ M` (computed through the residuals of `X`),
//! `M`-orthonormalises the basis and keeps the lowest Ritz vectors. The shifted systems are solved by conjugate gradients
//! preconditioned with the FFT inverse of the mean-coefficient operator, so
//! constant-coefficient problems are solved in one step.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::fft::Fft2;
use super::oracle::{discrete_mode, ordered_modes};
use super::{dense, SolverMethod, SolverOptions, SpectralProblem, Spectrum};
use crate::math::{cos, sin, sqrt, TAU};
use crate::{FinslerError, Result};

const PCG_TOL: f64 = 1e-11;
const PCG_MAX_ITER: usize = 1000;

struct ShiftedOperator<'a> {
    problem: &'a SpectralProblem,
    shift: f64,
    fft: Fft2,
    // symbol of the preconditioner on each Fourier mode
    symbol: Vec<f64>,
}

impl<'a> ShiftedOperator<'a> {
    fn new(problem: &'a SpectralProblem, shift: f64) -> Self {
        let grid = problem.grid();
        let (c, mu) = problem.mean_coefficient();
        let area = grid.cell_area();
        let mut symbol = vec![0.0; grid.len()];
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let lam = discrete_mode(&c, 1.0, grid, i as i64, j as i64);
                symbol[j * grid.nx() + i] = area * (lam + shift * mu);
            }
        }
        ShiftedOperator { problem, shift, fft: Fft2::new(grid.nx(), grid.ny()), symbol }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.problem.stiffness().matvec(x, y);
        for ((yi, xi), m) in y.iter_mut().zip(x).zip(self.problem.mass()) {
            *yi += self.shift * m * xi;
        }
    }

    fn precondition(&self, r: &[f64], z: &mut [f64], buf: &mut [Complex64]) {
        for (b, v) in buf.iter_mut().zip(r) {
            *b = Complex64::new(*v, 0.0);
        }
        self.fft.run(buf, false);
        for (b, s) in buf.iter_mut().zip(&self.symbol) {
            *b /= *s;
        }
        self.fft.run(buf, true);
        let scale = 1.0 / buf.len() as f64;
        for (zi, b) in z.iter_mut().zip(buf.iter()) {
            *zi = b.re * scale;
        }
    }

    /// Approximate `(K + sM)⁻¹ b` by preconditioned conjugate gradients.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut x = vec![0.0; n];
        self.precondition(b, &mut x, &mut buf);
        let mut ax = vec![0.0; n];
        self.apply(&x, &mut ax);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let bnorm = norm(b);
        if bnorm == 0.0 {
            return x;
        }
        let mut z = vec![0.0; n];
        self.precondition(&r, &mut z, &mut buf);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; n];
        for _ in 0..PCG_MAX_ITER {
            if norm(&r) <= PCG_TOL * bnorm {
                break;
            }
            self.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                break;
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            self.precondition(&r, &mut z, &mut buf);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

fn m_dot(m: &[f64], a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).zip(m).map(|((x, y), w)| x * y * w).sum()
}

/// `M`-orthonormalise in place (two passes of modified Gram–Schmidt),
/// dropping numerically dependent vectors.
fn m_orthonormalize(m: &[f64], basis: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for mut v in basis {
        let before = sqrt(m_dot(m, &v, &v));
        if !(before > 0.0) || !before.is_finite() {
            continue;
        }
        for _ in 0..2 {
            for q in &out {
                let c = m_dot(m, q, &v);
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let after = sqrt(m_dot(m, &v, &v));
        if after > 1e-10 * before {
            v.iter_mut().for_each(|a| *a /= after);
            out.push(v);
        }
    }
    out
}

fn start_block(problem: &SpectralProblem, size: usize, seed: u64) -> Vec<Vec<f64>> {
    let grid = problem.grid();
    let (c, mu) = problem.mean_coefficient();
    let n = grid.len();
    let random = (size / 4).max(2).min(size);
    let smooth = size - random;
    let mut block = Vec::with_capacity(size);
    'modes: for (m, k) in ordered_modes(&c, mu, grid, smooth + 1) {
        for phase in [0.0, 0.25] {
            if block.len() == smooth {
                break 'modes;
            }
            let v: Vec<f64> = (0..n)
                .map(|idx| {
                    let p = grid.point(idx);
                    cos(TAU * (m as f64 * p.x() + k as f64 * p.y() - phase))
                })
                .collect();
            // sin of a mode on the Nyquist line or of (0, 0) vanishes
            if norm(&v) > 1e-8 * sqrt(n as f64) {
                block.push(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while block.len() < size {
        let v = (0..n)
            .map(|idx| {
                let p = grid.point(idx);
                let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                // bias the noise towards smooth functions
                u + 0.5 * sin(TAU * (p.x() + u))
            })
            .collect();
        block.push(v);
    }
    block
}

pub(super) fn solve(problem: &SpectralProblem, want: usize, opts: &SolverOptions) -> Result<Spectrum> {
    let n = problem.grid().len();
    let block = (want + (want / 2).max(4)).min(n);
    let (c, mu) = problem.mean_coefficient();
    let lambda1 = ordered_modes(&c, mu, problem.grid(), 2)
        .get(1)
        .map(|&(m, k)| discrete_mode(&c, mu, problem.grid(), m, k))
        .filter(|l| *l > 0.0)
        .unwrap_or(1.0);
    let op = ShiftedOperator::new(problem, 0.5 * lambda1);
    let mass = problem.mass();
    let mut x = m_orthonormalize(mass, start_block(problem, block, opts.seed));
    let mut worst = f64::INFINITY;
    let mut converged = 0;
    for cycle in 1..=opts.max_cycles {
        // T x = (x − (K + sM)⁻¹ r)/(θ + s) with r = Kx − θMx, so the block
        // [X, TX, T²X] is spanned by [X, D, TD] with D = (K + sM)⁻¹ R.
        // Solving for D directly keeps its accuracy once X has converged.
        let unit = |mut v: Vec<f64>| {
            let nrm = sqrt(m_dot(mass, &v, &v));
            if nrm > 0.0 {
                v.iter_mut().for_each(|a| *a /= nrm);
            }
            v
        };
        let d: Vec<Vec<f64>> = x
            .iter()
            .map(|v| {
                let kv = problem.stiffness().mul(v);
                let theta = dot(v, &kv) / m_dot(mass, v, v);
                let r: Vec<f64> = kv.iter().zip(v).zip(mass).map(|((k, a), m)| k - theta * m * a).collect();
                unit(op.solve(&r))
            })
            .collect();
        let td: Vec<Vec<f64>> = d
            .iter()
            .map(|v| {
                let rhs: Vec<f64> = v.iter().zip(mass).map(|(a, m)| a * m).collect();
                unit(op.solve(&rhs))
            })
            .collect();
        let mut basis = x;
        basis.extend(d);
        basis.extend(td);
        let basis = m_orthonormalize(mass, basis);
        let dim = basis.len();
        let kv: Vec<Vec<f64>> = basis.iter().map(|v| problem.stiffness().mul(v)).collect();
        let mut a = vec![0.0; dim * dim];
        let mut b = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let aij = 0.5 * (dot(&basis[i], &kv[j]) + dot(&basis[j], &kv[i]));
                let bij = m_dot(mass, &basis[i], &basis[j]);
                a[i * dim + j] = aij;
                a[j * dim + i] = aij;
                b[i * dim + j] = bij;
                b[j * dim + i] = bij;
            }
        }
        let (theta, coeffs) = dense::generalized_symmetric(&a, &b, dim)?;
        let keep = block.min(dim);
        let ritz: Vec<Vec<f64>> = coeffs[..keep]
            .iter()
            .map(|cf| {
                let mut u = vec![0.0; n];
                for (w, v) in cf.iter().zip(&basis) {
                    u.iter_mut().zip(v).for_each(|(a, b)| *a += w * b);
                }
                u
            })
            .collect();
        if ritz.len() < want {
            return Err(FinslerError::NoConvergence { cycles: cycle, converged: 0, wanted: want, worst_residual: f64::INFINITY });
        }
        let scale_floor = theta[1.min(want - 1)].abs();
        let residuals: Vec<f64> = (0..want).map(|i| problem.residual(theta[i], &ritz[i])).collect();
        converged = (0..want).filter(|&i| residuals[i] <= opts.tol * theta[i].abs().max(scale_floor)).count();
        worst = (0..want)
            .map(|i| residuals[i] / theta[i].abs().max(scale_floor))
            .fold(0.0, f64::max);
        if converged == want {
            return Ok(Spectrum {
                eigenvalues: theta[..want].to_vec(),
                eigenvectors: ritz[..want].to_vec(),
                residuals,
                method: SolverMethod::Iterative,
                cycles: cycle,
            });
        }
        x = ritz;
    }
    Err(FinslerError::NoConvergence { cycles: opts.max_cycles, converged, wanted: want, worst_residual: worst })
}
