use super::rotation::Aligner;
use super::{approximation_factor, ApproxValue};
use crate::cluster::Cluster;
use crate::congruence::{cluster_isometry, isometry_tolerance, OrthogonalMap};
use crate::error::{Error, Result};
use crate::GEOMETRY_TOLERANCE;

/// Directed boundary-tolerant distance from `c` to `d` at radius `alpha`:
/// `max_i min{alpha - |p_i|, d_R({p_1..p_i}, d)}` over the points of `c`
/// ordered by norm, where `d_R` is the directed rotation-invariant distance.
pub fn max_min_directed_distance(c: &Cluster, d: &Cluster, alpha: f64, delta: f64) -> Result<ApproxValue> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            left: c.dim(),
            right: d.dim(),
        });
    }
    let points = c.points();
    let max_norm = points.last().map_or(0.0, |p| p.norm());
    if !(alpha.is_finite() && alpha >= max_norm - GEOMETRY_TOLERANCE) {
        return Err(Error::InvalidRadius(alpha));
    }
    let aligner = Aligner::new(d.points(), d.dim());
    let mut value: f64 = 0.0;
    let mut warm: Option<OrthogonalMap> = None;
    let mut start = 0;
    while start < points.len() {
        // points of equal norm share the cap, so only the whole tie group counts
        let norm = points[start].norm();
        let mut end = start + 1;
        while end < points.len() && points[end].norm() - norm <= GEOMETRY_TOLERANCE {
            end += 1;
        }
        let cap = (alpha - norm).max(0.0);
        if cap <= value {
            // caps only shrink from here on
            break;
        }
        let best = aligner.align(&points[..end], value, warm.as_ref());
        value = value.max(cap.min(best.distance));
        warm = Some(best.map);
        start = end;
    }
    Ok(ApproxValue {
        value,
        factor: approximation_factor(c.dim(), delta),
    })
}

/// Boundary-tolerant distance between the isometry classes of two clusters
/// cut at the same radius.
pub fn cluster_distance(c: &Cluster, d: &Cluster, delta: f64) -> Result<ApproxValue> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            left: c.dim(),
            right: d.dim(),
        });
    }
    let alpha = c.radius();
    if (alpha - d.radius()).abs() > GEOMETRY_TOLERANCE * alpha.max(1.0) {
        return Err(Error::RadiusMismatch {
            left: alpha,
            right: d.radius(),
        });
    }
    let factor = approximation_factor(c.dim(), delta);
    if cluster_isometry(c, d, isometry_tolerance(alpha))?.is_some() {
        return Ok(ApproxValue { value: 0.0, factor });
    }
    let forward = max_min_directed_distance(c, d, alpha, delta)?;
    let backward = max_min_directed_distance(d, c, alpha, delta)?;
    Ok(ApproxValue {
        value: forward.value.max(backward.value),
        factor,
    })
}
