//! Nested low-discrepancy sample sets. Taking more samples always extends
//! the previous set, so sampled suprema are monotone in the sample count.

use crate::math::{cos, sin, TAU};
use crate::metric::{Tangent, TorusPoint};

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// `i`-th Euclidean unit direction of the base-2 van der Corput sequence.
pub fn direction(i: usize) -> Tangent {
    let t = TAU * radical_inverse(i as u64, 2);
    Tangent::new(cos(t), sin(t))
}

/// `i`-th point of the (2, 3) Halton sequence on the torus.
pub fn point(i: usize) -> TorusPoint {
    TorusPoint::new(radical_inverse(i as u64, 2), radical_inverse(i as u64, 3))
}

/// Sample counts for fiberwise sup/inf searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub directions: usize,
    pub points: usize,
}

impl Sampling {
    pub const fn new(directions: usize, points: usize) -> Self {
        Sampling { directions, points }
    }

    pub fn directions(&self) -> impl Iterator<Item = Tangent> {
        (0..self.directions).map(direction)
    }

    pub fn points(&self) -> impl Iterator<Item = TorusPoint> {
        (0..self.points).map(point)
    }
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling::new(256, 64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_values() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - (2.0 / 3.0 + 1.0 / 9.0)).abs() < 1e-15);
    }
}
