use nalgebra::Matrix3;

use super::{CellGeometry, Lattice};
use crate::error::{Error, Result};
use crate::linalg::{point, LatticeVector, Point};
use crate::GEOMETRY_TOLERANCE;

/// A point of a periodic set, identified by its motif index and the lattice
/// translation applied to that motif point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicPoint {
    pub motif: usize,
    pub cell: LatticeVector,
    pub position: Point,
}

/// A periodic point set `S = Λ + M`: a lattice plus a finite motif given in
/// fractional coordinates of the lattice basis, each reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSet {
    lattice: Lattice,
    fractional: Vec<Point>,
    cartesian: Vec<Point>,
    labels: Option<Vec<String>>,
}

fn reduce_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl PeriodicSet {
    /// Builds a periodic set from fractional motif coordinates. Components
    /// outside `[0, 1)` are reduced modulo 1.
    pub fn new(lattice: Lattice, motif: &[Vec<f64>]) -> Result<Self> {
        let dim = lattice.dim();
        let mut fractional = Vec::with_capacity(motif.len());
        for (i, p) in motif.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidMotif(format!(
                    "motif point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMotif(format!(
                    "motif point {i} has a non-finite coordinate"
                )));
            }
            fractional.push(point(p));
        }
        Self::from_fractional(lattice, fractional)
    }

    pub fn from_fractional(lattice: Lattice, fractional: Vec<Point>) -> Result<Self> {
        if fractional.is_empty() {
            return Err(Error::InvalidMotif("motif is empty".into()));
        }
        let dim = lattice.dim();
        let fractional: Vec<Point> = fractional
            .into_iter()
            .map(|p| {
                let mut q = Point::zeros();
                for k in 0..dim {
                    q[k] = reduce_unit(p[k]);
                }
                q
            })
            .collect();
        let cartesian = fractional.iter().map(|f| lattice.to_cartesian(f)).collect();
        let set = PeriodicSet {
            lattice,
            fractional,
            cartesian,
            labels: None,
        };
        let min = set.min_interpoint_distance();
        if min <= GEOMETRY_TOLERANCE {
            return Err(Error::InvalidMotif(format!(
                "motif points coincide (minimum distance {min:e})"
            )));
        }
        Ok(set)
    }

    /// Builds a periodic set from Cartesian motif points.
    pub fn from_cartesian(lattice: Lattice, points: &[Point]) -> Result<Self> {
        let fractional = points.iter().map(|p| lattice.to_fractional(p)).collect();
        Self::from_fractional(lattice, fractional)
    }

    /// Attaches one opaque label per motif point.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidMotif(format!(
                "{} labels for {} motif points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Motif size `m`.
    pub fn len(&self) -> usize {
        self.fractional.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractional.is_empty()
    }

    pub fn fractional(&self) -> &[Point] {
        &self.fractional
    }

    pub fn cartesian(&self) -> &[Point] {
        &self.cartesian
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn geometry(&self) -> CellGeometry {
        self.lattice.geometry()
    }

    /// Fractional motif coordinates as plain rows of `dim` components.
    pub fn fractional_rows(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        self.fractional.iter().map(|p| p.as_slice()[..dim].to_vec()).collect()
    }

    /// All points of the set inside the closed ball of `radius` around
    /// `center`, boundary points within the geometric tolerance included.
    pub fn points_in_ball(&self, center: &Point, radius: f64) -> Result<Vec<PeriodicPoint>> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        let dim = self.dim();
        let reach = radius + GEOMETRY_TOLERANCE;
        let fc = self.lattice.to_fractional(center);
        let mut lo = [0.0f64; 3];
        let mut hi = [0.0f64; 3];
        for i in 0..dim {
            let half = reach * self.lattice.inverse_row_norm(i);
            lo[i] = fc[i] - half;
            hi[i] = fc[i] + half;
        }
        let limit = reach * reach;
        let mut out = Vec::new();
        for (idx, (frac, cart)) in self.fractional.iter().zip(&self.cartesian).enumerate() {
            // integer shifts keeping frac + v inside the fractional box of the ball
            let mut from = [0i64; 3];
            let mut to = [0i64; 3];
            for i in 0..dim {
                from[i] = (lo[i] - frac[i] - 1e-9).ceil() as i64;
                to[i] = (hi[i] - frac[i] + 1e-9).floor() as i64;
                if from[i] > to[i] {
                    break;
                }
            }
            if (0..dim).any(|i| from[i] > to[i]) {
                continue;
            }
            let mut v = from;
            loop {
                let position = cart + self.lattice.translation(&v);
                if (position - center).norm_squared() <= limit {
                    out.push(PeriodicPoint {
                        motif: idx,
                        cell: v,
                        position,
                    });
                }
                // odometer over the integer box
                let mut axis = 0;
                loop {
                    if axis == dim {
                        break;
                    }
                    if v[axis] < to[axis] {
                        v[axis] += 1;
                        break;
                    }
                    v[axis] = from[axis];
                    axis += 1;
                }
                if axis == dim {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Minimum distance between two distinct points of the set.
    pub fn min_interpoint_distance(&self) -> f64 {
        // some lattice translate of every point lies within the shortest basis vector
        let shortest = self
            .lattice
            .vectors()
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min);
        let mut best = shortest;
        for (i, p) in self.cartesian.iter().enumerate() {
            let near = self
                .points_in_ball(p, shortest)
                .expect("finite non-negative radius");
            for q in near {
                if q.motif == i && q.cell == [0, 0, 0] {
                    continue;
                }
                best = best.min((q.position - p).norm());
            }
        }
        best
    }

    /// Half of the minimum inter-point distance.
    pub fn packing_radius(&self) -> f64 {
        self.min_interpoint_distance() / 2.0
    }

    /// Image of the set under `x -> map * x + shift`. The map is applied to
    /// the lattice basis, so the image is presented by the rotated cell.
    pub fn transformed(&self, map: &Matrix3<f64>, shift: &Point) -> Result<Self> {
        let lattice = self.lattice.transformed(map)?;
        let points: Vec<Point> = self.cartesian.iter().map(|p| map * p + shift).collect();
        let mut out = Self::from_cartesian(lattice, &points)?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Uniformly scaled copy; fractional coordinates are unchanged.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let lattice = self.lattice.scaled(factor)?;
        let mut out = Self::from_fractional(lattice, self.fractional.clone())?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// The same set presented by a cell enlarged `multiples[j]` times along
    /// basis vector `j`, with the motif duplicated accordingly.
    pub fn supercell(&self, multiples: [usize; 3]) -> Result<Self> {
        let dim = self.dim();
        let mut m = *self.lattice.matrix();
        for j in 0..dim {
            if multiples[j] == 0 {
                return Err(Error::InvalidCell("supercell multiple must be positive".into()));
            }
            for i in 0..dim {
                m[(i, j)] *= multiples[j] as f64;
            }
        }
        let lattice = Lattice::from_matrix(m, dim)?;
        let mut fractional = Vec::new();
        let mut labels = Vec::new();
        let counts: Vec<usize> = (0..3).map(|j| if j < dim { multiples[j] } else { 1 }).collect();
        for (i, f) in self.fractional.iter().enumerate() {
            for a in 0..counts[0] {
                for b in 0..counts[1] {
                    for c in 0..counts[2] {
                        let offset = [a as f64, b as f64, c as f64];
                        let mut q = Point::zeros();
                        for k in 0..dim {
                            q[k] = (f[k] + offset[k]) / counts[k] as f64;
                        }
                        fractional.push(q);
                        if let Some(l) = &self.labels {
                            labels.push(l[i].clone());
                        }
                    }
                }
            }
        }
        let mut out = Self::from_fractional(lattice, fractional)?;
        if self.labels.is_some() {
            out.labels = Some(labels);
        }
        Ok(out)
    }
}
