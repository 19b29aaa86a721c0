use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{point, unit_ball_volume, Point};

/// Translation lattice generated by `dim` basis vectors, stored as the columns
/// of a 3x3 matrix padded with the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    basis: Matrix3<f64>,
    inverse: Matrix3<f64>,
    dim: usize,
}

impl Lattice {
    /// Builds a lattice from its basis vectors. Each vector must have exactly
    /// `vectors.len()` components.
    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let dim = vectors.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidLattice(format!(
                "dimension {dim} is not supported (expected 1, 2 or 3)"
            )));
        }
        let mut basis = Matrix3::identity();
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidLattice(format!(
                    "basis vector {j} has {} components, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidLattice(format!(
                    "basis vector {j} has a non-finite component"
                )));
            }
            basis.set_column(j, &point(v));
        }
        Self::from_matrix(basis, dim)
    }

    /// Builds a lattice from a padded 3x3 matrix whose first `dim` columns are
    /// the basis vectors.
    pub fn from_matrix(mut basis: Matrix3<f64>, dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidLattice(format!("unsupported dimension {dim}")));
        }
        for r in 0..3 {
            for c in 0..3 {
                if r >= dim || c >= dim {
                    basis[(r, c)] = if r == c { 1.0 } else { 0.0 };
                }
            }
        }
        let det = basis.determinant();
        let scale: f64 = (0..dim).map(|j| basis.column(j).norm()).product();
        if !det.is_finite() || scale == 0.0 || det.abs() <= 1e-12 * scale {
            return Err(Error::InvalidLattice("basis is singular".into()));
        }
        let inverse = basis
            .try_inverse()
            .ok_or_else(|| Error::InvalidLattice("basis is singular".into()))?;
        Ok(Lattice {
            basis,
            inverse,
            dim,
        })
    }

    /// The integer lattice `Z^dim`.
    pub fn integer(dim: usize) -> Result<Self> {
        Self::from_matrix(Matrix3::identity(), dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.basis
    }

    pub fn vector(&self, j: usize) -> Point {
        self.basis.column(j).into_owned()
    }

    pub fn vectors(&self) -> Vec<Point> {
        (0..self.dim).map(|j| self.vector(j)).collect()
    }

    /// Basis vectors as plain rows of `dim` components.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.basis[(i, j)]).collect())
            .collect()
    }

    pub fn to_cartesian(&self, frac: &Point) -> Point {
        self.basis * frac
    }

    pub fn to_fractional(&self, cart: &Point) -> Point {
        self.inverse * cart
    }

    pub fn translation(&self, v: &[i64; 3]) -> Point {
        let mut t = Point::zeros();
        for (j, &c) in v.iter().enumerate().take(self.dim) {
            t += self.vector(j) * c as f64;
        }
        t
    }

    /// Length of the `i`-th row of the inverse basis: a ball of radius `r`
    /// spans `2 r * row_norm(i)` in fractional coordinate `i`.
    pub(crate) fn inverse_row_norm(&self, i: usize) -> f64 {
        (0..self.dim)
            .map(|j| self.inverse[(i, j)].powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn volume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    /// Applies a linear map to every basis vector.
    pub fn transformed(&self, map: &Matrix3<f64>) -> Result<Self> {
        Self::from_matrix(map * self.basis, self.dim)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut m = self.basis;
        for j in 0..self.dim {
            for i in 0..self.dim {
                m[(i, j)] *= factor;
            }
        }
        Self::from_matrix(m, self.dim)
    }

    pub fn geometry(&self) -> CellGeometry {
        CellGeometry::of(self)
    }
}

/// Size measures of the unit cell spanned by a lattice basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellGeometry {
    pub dim: usize,
    /// Length of the longest basis vector.
    pub max_edge: f64,
    /// Length of the longest cell diagonal.
    pub diameter: f64,
    pub volume: f64,
    pub unit_ball_volume: f64,
}

impl CellGeometry {
    pub fn of(lattice: &Lattice) -> Self {
        let vectors = lattice.vectors();
        let max_edge = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
        // the last vector keeps a fixed sign, the others range over +/-
        let n = lattice.dim();
        let mut diameter: f64 = 0.0;
        for mask in 0..(1u32 << (n - 1)) {
            let mut diag = vectors[n - 1];
            for (j, v) in vectors.iter().enumerate().take(n - 1) {
                if mask & (1 << j) != 0 {
                    diag -= v;
                } else {
                    diag += v;
                }
            }
            diameter = diameter.max(diag.norm());
        }
        CellGeometry {
            dim: n,
            max_edge,
            diameter,
            volume: lattice.volume(),
            unit_ball_volume: unit_ball_volume(n),
        }
    }

    /// `max{b, d/2}`: bounds the bridge length and the growth needed for a
    /// stable radius.
    pub fn reach(&self) -> f64 {
        self.max_edge.max(self.diameter / 2.0)
    }

    /// Number of cells a ball of radius `alpha` can touch, scaled by volume:
    /// `(alpha + d)^n V_n / Vol[U]`.
    pub fn nu(&self, alpha: f64) -> f64 {
        (alpha + self.diameter).powi(self.dim as i32) * self.unit_ball_volume / self.volume
    }
}
