//! Small fixed-size linear algebra shared by the geometry modules.
//!
//! Everything is stored in three components. A set of dimension `n < 3` keeps
//! its trailing components at zero, and every linear map acts as the identity
//! on the unused axes, so determinants and orthogonality are unaffected.

use std::cmp::Ordering;

use nalgebra::{Matrix3, Vector3};

pub type Point = Vector3<f64>;

/// Integer coordinates of a lattice translation in the basis of its lattice.
pub type LatticeVector = [i64; 3];

pub fn point(coords: &[f64]) -> Point {
    let mut p = Point::zeros();
    for (dst, src) in p.iter_mut().zip(coords) {
        *dst = *src;
    }
    p
}

pub fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    for k in 0..3 {
        match a[k].total_cmp(&b[k]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Orders by norm first, then lexicographically.
pub fn norm_lex_cmp(a: &Point, b: &Point) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| lex_cmp(a, b))
}

/// Component of `v` orthogonal to the span of the orthonormal `frame`.
pub fn reject(v: &Point, frame: &[Point]) -> Point {
    let mut r = *v;
    for e in frame {
        r -= *e * e.dot(&r);
    }
    r
}

/// Extends an orthonormal family to an orthonormal basis of the first `dim` axes.
pub fn complete_basis(frame: &[Point], dim: usize) -> Vec<Point> {
    let mut out = frame.to_vec();
    while out.len() < dim {
        let mut best = Point::zeros();
        let mut best_norm = -1.0;
        for axis in 0..dim {
            let mut e = Point::zeros();
            e[axis] = 1.0;
            let r = reject(&e, &out);
            let n = r.norm();
            if n > best_norm {
                best_norm = n;
                best = r;
            }
        }
        out.push(best / best_norm);
    }
    out
}

/// Matrix sending each `from[i]` to `to[i]`, extended by the identity on the
/// axes beyond `dim`. Both families must be orthonormal bases of the first
/// `dim` axes.
pub fn frame_map(from: &[Point], to: &[Point], dim: usize) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    for (f, t) in from.iter().zip(to) {
        m += t * f.transpose();
    }
    for k in dim..3 {
        m[(k, k)] = 1.0;
    }
    m
}

pub fn unit_ball_volume(dim: usize) -> f64 {
    use std::f64::consts::PI;
    match dim {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        3 => 4.0 / 3.0 * PI,
        n => {
            // V_n = 2 pi / n * V_{n-2}
            2.0 * PI / n as f64 * unit_ball_volume(n - 2)
        }
    }
}

/// Row-style Hermite normal form of the integer span of `rows`, restricted to
/// the first `dim` columns. Zero rows are dropped, so the result has at most
/// `dim` rows and its pivots are positive.
pub fn hermite_normal_form(rows: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    let mut work: Vec<LatticeVector> = rows
        .iter()
        .copied()
        .filter(|r| r[..dim].iter().any(|&x| x != 0))
        .collect();
    let mut basis: Vec<LatticeVector> = Vec::with_capacity(dim);
    for col in 0..dim {
        // Euclid on the column until at most one row carries a non-zero entry.
        loop {
            let active: Vec<usize> = (0..work.len()).filter(|&i| work[i][col] != 0).collect();
            if active.len() <= 1 {
                break;
            }
            let p = *active
                .iter()
                .min_by_key(|&&i| work[i][col].abs())
                .expect("non-empty");
            let pr = work[p];
            for &i in &active {
                if i != p {
                    let q = work[i][col].div_euclid(pr[col]);
                    for k in 0..dim {
                        work[i][k] -= q * pr[k];
                    }
                }
            }
            work.retain(|r| r[..dim].iter().any(|&x| x != 0));
        }
        if let Some(idx) = work.iter().position(|r| r[col] != 0) {
            let mut r = work.swap_remove(idx);
            if r[col] < 0 {
                for x in r.iter_mut() {
                    *x = -*x;
                }
            }
            for prev in basis.iter_mut() {
                let q = prev[col].div_euclid(r[col]);
                for k in 0..dim {
                    prev[k] -= q * r[k];
                }
            }
            basis.push(r);
        }
    }
    basis
}

/// Index of the sublattice spanned by `rows` inside `Z^dim`, or `None` when
/// the rows do not have full rank.
pub fn sublattice_index(rows: &[LatticeVector], dim: usize) -> Option<u64> {
    let hnf = hermite_normal_form(rows, dim);
    if hnf.len() < dim {
        return None;
    }
    let mut index: u64 = 1;
    // full rank means every column contributed one pivot row, in order
    for (i, r) in hnf.iter().enumerate() {
        index = index.saturating_mul(r[i].unsigned_abs());
    }
    Some(index)
}
