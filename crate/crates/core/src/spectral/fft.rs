//! Small complex FFT used by the constant-coefficient preconditioner.
//! Radix-2 for power-of-two lengths, direct DFT otherwise.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math::{cos, sin, TAU};

#[derive(Clone, Debug)]
pub(crate) struct Fft1 {
    n: usize,
    // e^{-2πik/n}
    twiddles: Vec<Complex64>,
    pow2: bool,
}

impl Fft1 {
    pub(crate) fn new(n: usize) -> Self {
        let twiddles = (0..n)
            .map(|k| {
                let t = -TAU * k as f64 / n as f64;
                Complex64::new(cos(t), sin(t))
            })
            .collect();
        Fft1 { n, twiddles, pow2: n.is_power_of_two() }
    }

    /// In-place transform; `inverse` uses `e^{+2πik/n}` and does not scale.
    pub(crate) fn run(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>, inverse: bool) {
        let n = self.n;
        let tw = |k: usize| {
            let w = self.twiddles[k % n];
            if inverse {
                w.conj()
            } else {
                w
            }
        };
        if self.pow2 {
            let bits = n.trailing_zeros();
            if bits > 0 {
                for i in 0..n {
                    let r = i.reverse_bits() >> (usize::BITS - bits);
                    if r > i {
                        data.swap(i, r);
                    }
                }
            }
            let mut len = 2;
            while len <= n {
                let stride = n / len;
                for start in (0..n).step_by(len) {
                    for k in 0..len / 2 {
                        let w = tw(k * stride);
                        let a = data[start + k];
                        let b = data[start + k + len / 2] * w;
                        data[start + k] = a + b;
                        data[start + k + len / 2] = a - b;
                    }
                }
                len *= 2;
            }
        } else {
            scratch.clear();
            scratch.extend_from_slice(data);
            for (k, out) in data.iter_mut().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for (j, v) in scratch.iter().enumerate() {
                    s += v * tw(j * k);
                }
                *out = s;
            }
        }
    }
}

/// 2-D transform over a row-major `nx × ny` array.
#[derive(Clone, Debug)]
pub(crate) struct Fft2 {
    nx: usize,
    ny: usize,
    fx: Fft1,
    fy: Fft1,
}

impl Fft2 {
    pub(crate) fn new(nx: usize, ny: usize) -> Self {
        Fft2 { nx, ny, fx: Fft1::new(nx), fy: Fft1::new(ny) }
    }

    pub(crate) fn run(&self, data: &mut [Complex64], inverse: bool) {
        let mut scratch = Vec::new();
        for row in data.chunks_mut(self.nx) {
            self.fx.run(row, &mut scratch, inverse);
        }
        let mut col = alloc::vec![Complex64::new(0.0, 0.0); self.ny];
        for i in 0..self.nx {
            for j in 0..self.ny {
                col[j] = data[j * self.nx + i];
            }
            self.fy.run(&mut col, &mut scratch, inverse);
            for j in 0..self.ny {
                data[j * self.nx + i] = col[j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let t = -TAU * (j * k) as f64 / n as f64;
                        v * Complex64::new(cos(t), sin(t))
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_dft() {
        for n in [8usize, 12, 16] {
            let x: Vec<Complex64> = (0..n).map(|j| Complex64::new(libm::sin(j as f64 * 1.3), j as f64 * 0.1)).collect();
            let mut y = x.clone();
            Fft1::new(n).run(&mut y, &mut Vec::new(), false);
            for (a, b) in y.iter().zip(naive(&x)) {
                assert!((a - b).norm() < 1e-12);
            }
            Fft1::new(n).run(&mut y, &mut Vec::new(), true);
            for (a, b) in y.iter().zip(&x) {
                assert!((a / n as f64 - b).norm() < 1e-12);
            }
        }
    }
}
