//! Coefficient fields on the torus: constants, separable trigonometric
//! polynomials, and grid samples with periodic bilinear interpolation.

use alloc::vec::Vec;

use crate::linalg::Sym2;
use crate::math::{cos, floor, sin, TAU};
use crate::{FinslerError, Result};

/// `cos(2π k t)` or `sin(2π k t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Harmonic {
    Cos(u32),
    Sin(u32),
}

impl Harmonic {
    pub const ONE: Harmonic = Harmonic::Cos(0);

    #[inline]
    fn eval(self, t: f64) -> f64 {
        match self {
            Harmonic::Cos(0) => 1.0,
            Harmonic::Sin(0) => 0.0,
            Harmonic::Cos(k) => cos(TAU * k as f64 * t),
            Harmonic::Sin(k) => sin(TAU * k as f64 * t),
        }
    }

    fn is_constant(self) -> bool {
        matches!(self, Harmonic::Cos(0) | Harmonic::Sin(0))
    }
}

/// One separable term `coeff · hx(x) · hy(y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrigTerm {
    pub coeff: f64,
    #[cfg_attr(feature = "serde", serde(default = "harmonic_one"))]
    pub x: Harmonic,
    #[cfg_attr(feature = "serde", serde(default = "harmonic_one"))]
    pub y: Harmonic,
}

#[cfg(feature = "serde")]
fn harmonic_one() -> Harmonic {
    Harmonic::ONE
}

/// A real function on the torus.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "repr::ScalarFieldRepr"))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "kebab-case"))]
pub enum ScalarField {
    Constant { value: f64 },
    Trig { terms: Vec<TrigTerm> },
    /// Row-major samples `values[j * nx + i]` at `(i/nx, j/ny)`.
    Grid { nx: usize, ny: usize, values: Vec<f64> },
}

impl ScalarField {
    pub fn constant(value: f64) -> Self {
        ScalarField::Constant { value }
    }

    pub fn zero() -> Self {
        ScalarField::constant(0.0)
    }

    pub fn trig(terms: Vec<TrigTerm>) -> Self {
        ScalarField::Trig { terms }
    }

    /// `c0 + c1 · h(x or y)`, the common one-harmonic profile.
    pub fn offset_harmonic(c0: f64, c1: f64, x: Harmonic, y: Harmonic) -> Self {
        ScalarField::Trig {
            terms: alloc::vec![
                TrigTerm { coeff: c0, x: Harmonic::ONE, y: Harmonic::ONE },
                TrigTerm { coeff: c1, x, y },
            ],
        }
    }

    pub fn grid(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || values.len() != nx * ny {
            return Err(FinslerError::Shape { expected: nx * ny, found: values.len() });
        }
        Ok(ScalarField::Grid { nx, ny, values })
    }

    /// Value at `(x, y)`; coordinates are taken mod 1.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            ScalarField::Constant { value } => *value,
            ScalarField::Trig { terms } => {
                terms.iter().map(|t| t.coeff * t.x.eval(x) * t.y.eval(y)).sum()
            }
            ScalarField::Grid { nx, ny, values } => bilinear(*nx, *ny, values, x, y),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            ScalarField::Constant { .. } => true,
            ScalarField::Trig { terms } => terms
                .iter()
                .all(|t| t.coeff == 0.0 || (t.x.is_constant() && t.y.is_constant())),
            ScalarField::Grid { values, .. } => values.windows(2).all(|w| w[0] == w[1]),
        }
    }

    /// Multiply every value by `s`.
    pub fn scaled(&self, s: f64) -> ScalarField {
        match self {
            ScalarField::Constant { value } => ScalarField::constant(value * s),
            ScalarField::Trig { terms } => ScalarField::Trig {
                terms: terms.iter().map(|t| TrigTerm { coeff: t.coeff * s, ..*t }).collect(),
            },
            ScalarField::Grid { nx, ny, values } => ScalarField::Grid {
                nx: *nx,
                ny: *ny,
                values: values.iter().map(|v| v * s).collect(),
            },
        }
    }
}

fn bilinear(nx: usize, ny: usize, values: &[f64], x: f64, y: f64) -> f64 {
    let fx = x * nx as f64;
    let fy = y * ny as f64;
    let ix = floor(fx);
    let iy = floor(fy);
    let tx = fx - ix;
    let ty = fy - iy;
    let i0 = (ix as i64).rem_euclid(nx as i64) as usize;
    let j0 = (iy as i64).rem_euclid(ny as i64) as usize;
    let i1 = (i0 + 1) % nx;
    let j1 = (j0 + 1) % ny;
    let v = |i: usize, j: usize| values[j * nx + i];
    (1.0 - tx) * (1.0 - ty) * v(i0, j0)
        + tx * (1.0 - ty) * v(i1, j0)
        + (1.0 - tx) * ty * v(i0, j1)
        + tx * ty * v(i1, j1)
}

/// Symmetric 2-tensor field (a Riemannian metric `g` in coordinates).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TensorField {
    pub xx: ScalarField,
    #[cfg_attr(feature = "serde", serde(default = "ScalarField::zero"))]
    pub xy: ScalarField,
    pub yy: ScalarField,
}

impl TensorField {
    pub fn constant(m: Sym2) -> Self {
        TensorField {
            xx: ScalarField::constant(m.xx),
            xy: ScalarField::constant(m.xy),
            yy: ScalarField::constant(m.yy),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Sym2 {
        Sym2::new(self.xx.eval(x, y), self.xy.eval(x, y), self.yy.eval(x, y))
    }

    pub fn is_constant(&self) -> bool {
        self.xx.is_constant() && self.xy.is_constant() && self.yy.is_constant()
    }
}

/// 1-form field `ρ = ρ_x dx + ρ_y dy`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CovectorField {
    #[cfg_attr(feature = "serde", serde(default = "ScalarField::zero"))]
    pub x: ScalarField,
    #[cfg_attr(feature = "serde", serde(default = "ScalarField::zero"))]
    pub y: ScalarField,
}

impl CovectorField {
    pub fn constant(x: f64, y: f64) -> Self {
        CovectorField { x: ScalarField::constant(x), y: ScalarField::constant(y) }
    }

    pub fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        [self.x.eval(x, y), self.y.eval(x, y)]
    }

    pub fn is_constant(&self) -> bool {
        self.x.is_constant() && self.y.is_constant()
    }
}

#[cfg(feature = "serde")]
mod repr {
    //! Accept a bare number wherever a scalar field is expected.
    use super::*;

    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    pub enum ScalarFieldRepr {
        Number(f64),
        Tagged(Tagged),
    }

    #[derive(serde::Deserialize)]
    #[serde(tag = "type", rename_all = "kebab-case")]
    pub enum Tagged {
        Constant { value: f64 },
        Trig { terms: Vec<TrigTerm> },
        Grid { nx: usize, ny: usize, values: Vec<f64> },
    }

    impl TryFrom<ScalarFieldRepr> for ScalarField {
        type Error = FinslerError;

        fn try_from(r: ScalarFieldRepr) -> Result<Self> {
            match r {
                ScalarFieldRepr::Number(value) => Ok(ScalarField::Constant { value }),
                ScalarFieldRepr::Tagged(Tagged::Constant { value }) => {
                    Ok(ScalarField::Constant { value })
                }
                ScalarFieldRepr::Tagged(Tagged::Trig { terms }) => Ok(ScalarField::Trig { terms }),
                ScalarFieldRepr::Tagged(Tagged::Grid { nx, ny, values }) => {
                    ScalarField::grid(nx, ny, values)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    #[test]
    fn trig_evaluation() {
        let f = ScalarField::offset_harmonic(0.5, 0.4, Harmonic::ONE, Harmonic::Sin(1));
        assert_relative_eq!(f.eval(0.3, 0.25), 0.9, epsilon = 1e-15);
        assert_relative_eq!(f.eval(0.3, 1.25), 0.9, epsilon = 1e-12);
        assert!(!f.is_constant());
        assert!(ScalarField::offset_harmonic(1.0, 0.0, Harmonic::Sin(3), Harmonic::ONE).is_constant());
    }

    #[test]
    fn bilinear_is_periodic_and_interpolates() {
        let f = ScalarField::grid(2, 2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(f.eval(0.0, 0.0), 0.0);
        assert_relative_eq!(f.eval(0.5, 0.0), 1.0);
        assert_relative_eq!(f.eval(0.25, 0.0), 0.5);
        // wraps from node 1 back to node 0
        assert_relative_eq!(f.eval(0.75, 0.0), 0.5);
        assert_relative_eq!(f.eval(-0.25, 0.0), 0.5);
        assert_relative_eq!(f.eval(0.25, 0.25), 1.5);
    }

    #[test]
    fn grid_shape_checked() {
        assert!(ScalarField::grid(3, 2, vec![0.0; 5]).is_err());
    }
}
