//! Pointwise Distance Distributions, Average Minimum Distances, the Earth
//! Mover's Distance between them, and their lower bound for the isoset metric.

use std::cmp::Ordering;
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruence::{check_dims, common_stable_radius, isoset};
use crate::error::{Error, Result};
use crate::metrics::{emd, isoset_emd, isoset_emd_lower_bound};
use crate::periodic::PeriodicSet;
use crate::{Weight, GEOMETRY_TOLERANCE};

/// Rows whose distances differ by at most this much are collapsed.
pub const ROW_TOLERANCE: f64 = 1e-9;

/// One collapsed row: the fraction of motif points sharing it and their
/// ordered distances to the first `k` neighbours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PddRow {
    pub weight: Weight,
    pub distances: Vec<f64>,
}

/// Weighted, lexicographically ordered rows of neighbour distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pdd {
    pub k: usize,
    pub rows: Vec<PddRow>,
}

/// Lexicographic order on distances snapped to the collapse tolerance, so
/// rounding noise between presentations cannot swap nearly tied rows.
fn row_cmp(a: &[f64], b: &[f64]) -> Ordering {
    let snap = |x: &f64| (x / ROW_TOLERANCE).round() as i64;
    a.iter()
        .map(snap)
        .cmp(b.iter().map(snap))
        .then_with(|| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal))
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidNeighborCount);
    }
    Ok(())
}

/// Sorted distances from motif point `index` to every other point of the set
/// within `radius`.
fn neighbour_distances(set: &PeriodicSet, index: usize, radius: f64) -> Vec<f64> {
    let center = set.cartesian()[index];
    let mut out: Vec<f64> = set
        .points_in_ball(&center, radius)
        .expect("finite non-negative radius")
        .into_iter()
        .filter(|q| !(q.motif == index && q.cell == [0, 0, 0]))
        .map(|q| (q.position - center).norm())
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Distances from motif point `index` to its `k` nearest neighbours.
fn nearest_distances(set: &PeriodicSet, index: usize, k: usize, start: f64) -> Vec<f64> {
    let mut radius = start;
    loop {
        let mut found = neighbour_distances(set, index, radius);
        if found.len() >= k {
            found.truncate(k);
            return found;
        }
        radius *= 2.0;
    }
}

impl Pdd {
    /// Collapses per-point rows within [`ROW_TOLERANCE`] and orders them.
    pub fn from_rows(k: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_k(k)?;
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::NeighborCountMismatch {
                left: k,
                right: bad.len(),
            });
        }
        let m = rows.len() as u64;
        let mut groups: Vec<(Vec<f64>, u64)> = Vec::new();
        for row in rows {
            match groups.iter_mut().find(|(rep, _)| linf(rep, &row) <= ROW_TOLERANCE) {
                Some(group) => group.1 += 1,
                None => groups.push((row, 1)),
            }
        }
        groups.sort_by(|a, b| row_cmp(&a.0, &b.0));
        Ok(Pdd {
            k,
            rows: groups
                .into_iter()
                .map(|(distances, count)| PddRow {
                    weight: Weight::new(count, m),
                    distances,
                })
                .collect(),
        })
    }

    /// Weighted column averages of the rows.
    pub fn amd(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.k];
        for row in &self.rows {
            let w = *row.weight.numer() as f64 / *row.weight.denom() as f64;
            for (acc, d) in out.iter_mut().zip(&row.distances) {
                *acc += w * d;
            }
        }
        out
    }

    /// Writes the rows as CSV: a header, then the weight followed by the
    /// `k` distances on each line.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec!["weight".to_string()];
        header.extend((1..=self.k).map(|j| format!("d{j}")));
        out.write_record(&header).map_err(csv_error)?;
        for row in &self.rows {
            let w = *row.weight.numer() as f64 / *row.weight.denom() as f64;
            let mut record = vec![w.to_string()];
            record.extend(row.distances.iter().map(f64::to_string));
            out.write_record(&record).map_err(csv_error)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_error(err: csv::Error) -> Error {
    Error::Io(err.to_string())
}

/// Pointwise Distance Distribution: for every motif point, the ordered
/// distances to its `k` nearest neighbours in the whole periodic set.
pub fn pdd(set: &PeriodicSet, k: usize) -> Result<Pdd> {
    check_k(k)?;
    let geometry = set.geometry();
    let n = set.dim() as i32;
    // a ball of this radius holds about k points per motif point on average
    let start = (k as f64 * geometry.volume / (set.len() as f64 * geometry.unit_ball_volume))
        .powf(1.0 / n as f64)
        + geometry.diameter;
    let rows: Vec<Vec<f64>> = (0..set.len())
        .into_par_iter()
        .map(|i| nearest_distances(set, i, k, start))
        .collect();
    Pdd::from_rows(k, rows)
}

/// Average Minimum Distances: the weighted column averages of the PDD.
pub fn amd(set: &PeriodicSet, k: usize) -> Result<Vec<f64>> {
    Ok(pdd(set, k)?.amd())
}

/// `L∞` distance between two AMD vectors of the same length.
pub fn amd_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::NeighborCountMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(linf(a, b))
}

/// Earth Mover's Distance between two PDDs with `L∞` ground distance
/// between rows.
pub fn pdd_distance(p: &Pdd, q: &Pdd) -> Result<f64> {
    if p.k != q.k {
        return Err(Error::NeighborCountMismatch { left: p.k, right: q.k });
    }
    let cost: Vec<Vec<f64>> = p
        .rows
        .iter()
        .map(|a| q.rows.iter().map(|b| linf(&a.distances, &b.distances)).collect())
        .collect();
    let source: Vec<Weight> = p.rows.iter().map(|r| r.weight).collect();
    let sink: Vec<Weight> = q.rows.iter().map(|r| r.weight).collect();
    Ok(emd(&source, &sink, &cost)?.cost)
}

/// Outcome of comparing the PDD distance with the isoset distance that
/// bounds it from above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub alpha: f64,
    /// Computed isoset distance (an upper estimate of the true value).
    pub emd_isoset: f64,
    pub factor: f64,
    /// Certified lower bound for the true isoset distance.
    pub emd_isoset_lower: f64,
    /// Largest and smallest number of neighbours strictly inside the
    /// `(alpha - emd_isoset_lower)`-cluster of any motif point of either set.
    pub k_max: usize,
    pub k_min: usize,
    /// Whether the isoset distance is below both packing radii.
    pub applicable: bool,
    /// PDD distances at `k_max` and `k_min`; absent when not applicable.
    pub emd_pdd: Option<f64>,
    pub emd_pdd_at_k_min: Option<f64>,
    /// `emd_pdd <= emd_isoset_lower`: the bound certainly holds for the true
    /// isoset distance.
    pub holds: Option<bool>,
    /// `emd_pdd <= emd_isoset`: the bound is consistent with the estimate.
    pub consistent: Option<bool>,
}

fn interior_counts(set: &PeriodicSet, radius: f64) -> Vec<usize> {
    (0..set.len())
        .map(|i| {
            neighbour_distances(set, i, radius.max(0.0))
                .iter()
                .filter(|&&d| d < radius - GEOMETRY_TOLERANCE)
                .count()
        })
        .collect()
}

/// Checks the PDD lower bound for the isoset distance at `alpha`, or at the
/// common stable radius when `alpha` is `None`.
pub fn check_lower_bound(s: &PeriodicSet, q: &PeriodicSet, alpha: Option<f64>, delta: f64) -> Result<LowerBoundReport> {
    check_dims(s, q)?;
    let alpha = alpha.unwrap_or_else(|| common_stable_radius(s, q));
    let (a, b) = rayon::join(|| isoset(s, alpha), || isoset(q, alpha));
    let (a, b) = (a?, b?);
    let iso = isoset_emd(&a, &b, delta)?;
    let eps = iso.value;
    // a smaller distance means more neighbours and a larger PDD distance, so
    // counting at the lower bound stays on the safe side
    let lower = isoset_emd_lower_bound(&a, &b)?.min(eps);
    let radius = alpha - lower;
    let counts: Vec<usize> = interior_counts(s, radius)
        .into_iter()
        .chain(interior_counts(q, radius))
        .collect();
    let k_max = counts.iter().copied().max().unwrap_or(0);
    let k_min = counts.iter().copied().min().unwrap_or(0);
    let applicable = eps < s.packing_radius().min(q.packing_radius()) && k_min >= 1;
    let mut report = LowerBoundReport {
        alpha,
        emd_isoset: eps,
        factor: iso.factor,
        emd_isoset_lower: lower,
        k_max,
        k_min,
        applicable,
        emd_pdd: None,
        emd_pdd_at_k_min: None,
        holds: None,
        consistent: None,
    };
    if applicable {
        let at = |k: usize| -> Result<f64> { pdd_distance(&pdd(s, k)?, &pdd(q, k)?) };
        let value = at(k_max)?;
        report.emd_pdd = Some(value);
        report.emd_pdd_at_k_min = Some(if k_min == k_max { value } else { at(k_min)? });
        report.holds = Some(value <= lower + GEOMETRY_TOLERANCE);
        report.consistent = Some(value <= eps + GEOMETRY_TOLERANCE);
    }
    Ok(report)
}
