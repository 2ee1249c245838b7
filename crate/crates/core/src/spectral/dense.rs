//! Dense symmetric eigensolvers.
//!
//! Large problems go through Householder tridiagonalisation, Sturm-sequence
//! bisection for the wanted eigenvalues and inverse iteration for their
//! vectors. Small matrices use cyclic Jacobi.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{SolverMethod, SpectralProblem, Spectrum};
use crate::math::sqrt;
use crate::{FinslerError, Result};

/// Symmetric tridiagonal matrix with the Householder reflectors that produced
/// it: `A = Q T Qᵀ`, `Q = H₀ H₁ ⋯`.
struct Tridiagonal {
    n: usize,
    d: Vec<f64>,
    e: Vec<f64>,
    // reflector k acts on indices k+1.., stored as unit vectors
    reflectors: Vec<Vec<f64>>,
}

fn tridiagonalize(mut a: Vec<f64>, n: usize) -> Tridiagonal {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<f64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
        let norm = sqrt(v.iter().map(|x| x * x).sum());
        d[k] = a[k * n + k];
        if norm == 0.0 {
            e[k] = 0.0;
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        e[k] = alpha;
        v[0] -= alpha;
        let vn = sqrt(v.iter().map(|x| x * x).sum());
        v.iter_mut().for_each(|x| *x /= vn);
        // p = A₂₂ v, w = p − (vᵀp) v, A₂₂ ← A₂₂ − 2(v wᵀ + w vᵀ)
        let off = k + 1;
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i) * n + n];
            p[i] = row.iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let kappa: f64 = (0..m).map(|i| v[i] * p[i]).sum();
        for i in 0..m {
            p[i] -= kappa * v[i];
        }
        for i in 0..m {
            let (vi, wi) = (2.0 * v[i], 2.0 * p[i]);
            let row = &mut a[(off + i) * n + off..(off + i) * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                *x -= vi * p[j] + wi * v[j];
            }
        }
        reflectors.push(v);
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        d[n - 1] = a[(n - 1) * n + n - 1];
    }
    Tridiagonal { n, d, e, reflectors }
}

impl Tridiagonal {
    fn norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let l = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
                let r = if i + 1 < self.n { self.e[i].abs() } else { 0.0 };
                self.d[i].abs() + l + r
            })
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues strictly below `x`.
    fn sturm_count(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut q = self.d[0] - x;
        for i in 0..self.n {
            if i > 0 {
                q = self.d[i] - x - self.e[i - 1] * self.e[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalue number `i` (0-based, ascending) by bisection.
    fn eigenvalue(&self, i: usize, bound: f64) -> f64 {
        let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * bound * bound);
        let (mut lo, mut hi) = (-bound - 1.0, bound + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * bound {
                break;
            }
            if self.sturm_count(mid, pivmin) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solve `(T − λI) x = b` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, lambda: f64, b: &mut [f64], tiny: f64) {
        let n = self.n;
        // band rows: diag, super1, super2 of U; multipliers of L
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];
        let mut diag = self.d[0] - lambda;
        let mut sup = if n > 1 { self.e[0] } else { 0.0 };
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if diag.abs() < tiny { tiny } else { diag };
                break;
            }
            let sub = self.e[i];
            let next_diag = self.d[i + 1] - lambda;
            let next_sup = if i + 2 < n { self.e[i + 1] } else { 0.0 };
            if sub.abs() > diag.abs() {
                // swap rows i and i+1
                swapped[i] = true;
                u0[i] = sub;
                u1[i] = next_diag;
                u2[i] = next_sup;
                let m = diag / sub;
                mult[i] = m;
                diag = sup - m * next_diag;
                sup = -m * next_sup;
            } else {
                let piv = if diag.abs() < tiny { tiny } else { diag };
                u0[i] = piv;
                u1[i] = sup;
                u2[i] = 0.0;
                let m = sub / piv;
                mult[i] = m;
                diag = next_diag - m * sup;
                sup = next_sup;
            }
        }
        for i in 0..n.saturating_sub(1) {
            if swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= mult[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= u1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * b[i + 2];
            }
            b[i] = s / u0[i];
        }
    }

    /// `x ← Q x`.
    fn back_transform(&self, x: &mut [f64]) {
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            if v.is_empty() {
                continue;
            }
            let seg = &mut x[k + 1..];
            let dot: f64 = seg.iter().zip(v).map(|(a, b)| a * b).sum();
            for (a, b) in seg.iter_mut().zip(v) {
                *a -= 2.0 * dot * b;
            }
        }
    }

    /// Lowest `count` eigenpairs of `T` (vectors in the tridiagonal basis).
    fn lowest(&self, count: usize, seed: u64) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.n;
        let bound = self.norm_bound().max(f64::MIN_POSITIVE);
        let vals: Vec<f64> = (0..count).map(|i| self.eigenvalue(i, bound)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cluster_gap = 1e-3 * bound;
        let tiny = f64::EPSILON * bound;
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(count);
        let mut cluster_start = 0;
        let mut shift_prev = f64::NEG_INFINITY;
        for i in 0..count {
            if i > 0 && vals[i] - vals[i - 1] > cluster_gap {
                cluster_start = i;
            }
            // keep shifts distinct inside a cluster
            let mut shift = vals[i];
            if i > cluster_start && shift <= shift_prev {
                shift = shift_prev + 10.0 * f64::EPSILON * bound.max(shift.abs());
            }
            shift_prev = shift;
            let mut x: Vec<f64> = (0..n).map(|_| uniform(&mut rng)).collect();
            for _ in 0..4 {
                self.shifted_solve(shift, &mut x, tiny);
                for prev in &vecs[cluster_start..i] {
                    let dot: f64 = x.iter().zip(prev).map(|(a, b)| a * b).sum();
                    x.iter_mut().zip(prev).for_each(|(a, b)| *a -= dot * b);
                }
                let nrm = sqrt(x.iter().map(|v| v * v).sum());
                x.iter_mut().for_each(|v| *v /= nrm);
            }
            vecs.push(x);
        }
        (vals, vecs)
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0
}

/// Lowest `count` eigenpairs of the dense symmetric row-major `a`
/// (`n × n`), vectors orthonormal.
pub fn symmetric_lowest(a: Vec<f64>, n: usize, count: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let t = tridiagonalize(a, n);
    let (vals, mut vecs) = t.lowest(count.min(n), 0x7a11);
    for v in vecs.iter_mut() {
        t.back_transform(v);
    }
    (vals, vecs)
}

pub(super) fn solve(problem: &SpectralProblem, want: usize) -> Result<Spectrum> {
    let n = problem.grid().len();
    let k = problem.stiffness();
    let scale: Vec<f64> = problem.mass().iter().map(|m| 1.0 / sqrt(*m)).collect();
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for (j, v) in k.row(i) {
            c[i * n + j] = v * scale[i] * scale[j];
        }
    }
    let (vals, vecs) = symmetric_lowest(c, n, want);
    let mut eigenvectors = Vec::with_capacity(want);
    let mut residuals = Vec::with_capacity(want);
    for (lambda, x) in vals.iter().zip(vecs) {
        let u: Vec<f64> = x.iter().zip(&scale).map(|(a, s)| a * s).collect();
        residuals.push(problem.residual(*lambda, &u));
        eigenvectors.push(u);
    }
    Ok(Spectrum { eigenvalues: vals, eigenvectors, residuals, method: SolverMethod::Dense, cycles: 0 })
}

/// Cyclic Jacobi on a small dense symmetric matrix. Returns ascending
/// eigenvalues and the matching orthonormal eigenvectors (row `i` of the
/// returned vector list is eigenvector `i`).
pub fn jacobi(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i * n + j] * a[i * n + j]).sum();
        let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum();
        if off <= f64::EPSILON * f64::EPSILON * diag.max(f64::MIN_POSITIVE) * 1e-4 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..n {
                    let (arp, arq) = (a[r * n + p], a[r * n + q]);
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let (apr, aqr) = (a[p * n + r], a[q * n + r]);
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
                for r in 0..n {
                    let (vrp, vrq) = (v[r * n + p], v[r * n + q]);
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let vals = order.iter().map(|&i| a[i * n + i]).collect();
    let vecs = order.iter().map(|&j| (0..n).map(|r| v[r * n + j]).collect()).collect();
    (vals, vecs)
}

/// Full solution of `A y = θ B y` for small dense symmetric `A` and SPD `B`
/// (row-major `n × n`). Eigenvectors are `B`-orthonormal.
pub fn generalized_symmetric(a: &[f64], b: &[f64], n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    // B = L Lᵀ
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = b[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return Err(FinslerError::InvalidParameter { name: "mass matrix pivot", value: s });
                }
                l[i * n + i] = sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    // C = L⁻¹ A L⁻ᵀ: first W = L⁻¹ A, then C = L⁻¹ Wᵀ
    let lower_solve = |m: &[f64]| {
        let mut w = vec![0.0; n * n];
        for col in 0..n {
            for i in 0..n {
                let s: f64 = m[i * n + col] - (0..i).map(|k| l[i * n + k] * w[k * n + col]).sum::<f64>();
                w[i * n + col] = s / l[i * n + i];
            }
        }
        w
    };
    let w = lower_solve(a);
    let mut wt = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            wt[i * n + j] = w[j * n + i];
        }
    }
    let mut c = lower_solve(&wt);
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (c[i * n + j] + c[j * n + i]);
            c[i * n + j] = s;
            c[j * n + i] = s;
        }
    }
    let (vals, vecs) = jacobi(c, n);
    // y = L⁻ᵀ x
    let vecs = vecs
        .into_iter()
        .map(|x| {
            let mut y = vec![0.0; n];
            for i in (0..n).rev() {
                let s: f64 = x[i] - (i + 1..n).map(|k| l[k * n + i] * y[k]).sum::<f64>();
                y[i] = s / l[i * n + i];
            }
            y
        })
        .collect();
    Ok((vals, vecs))
}
