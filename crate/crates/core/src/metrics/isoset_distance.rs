use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{approximation_factor, cluster_distance, emd, FlowEntry, FlowPlan};
use crate::congruence::{check_dims, common_stable_radius, isoset, match_classes, Isoset};
use crate::error::{Error, Result};
use crate::periodic::PeriodicSet;

/// Earth Mover's Distance between two isosets with its approximation factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsosetDistance {
    pub value: f64,
    pub factor: f64,
    pub radius: f64,
    pub plan: FlowPlan,
}

/// EMD between isosets at a shared radius, with boundary-tolerant cluster
/// distances as ground costs.
pub fn isoset_emd(a: &Isoset, b: &Isoset, delta: f64) -> Result<IsosetDistance> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let factor = approximation_factor(a.dim, delta);
    if let Some(pairing) = match_classes(a, b)? {
        let entries = pairing
            .iter()
            .enumerate()
            .map(|(i, &j)| FlowEntry {
                source: i,
                sink: j,
                flow: a.classes[i].weight,
                cost: 0.0,
            })
            .collect();
        return Ok(IsosetDistance {
            value: 0.0,
            factor,
            radius: a.radius,
            plan: FlowPlan { entries, cost: 0.0 },
        });
    }
    let pairs: Vec<(usize, usize)> = (0..a.classes.len())
        .flat_map(|i| (0..b.classes.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            cluster_distance(&a.classes[i].representative, &b.classes[j].representative, delta)
                .map(|v| v.value)
        })
        .collect::<Result<_>>()?;
    let cost: Vec<Vec<f64>> = values.chunks(b.classes.len()).map(<[f64]>::to_vec).collect();
    let source: Vec<_> = a.classes.iter().map(|c| c.weight).collect();
    let sink: Vec<_> = b.classes.iter().map(|c| c.weight).collect();
    let plan = emd(&source, &sink, &cost)?;
    Ok(IsosetDistance {
        value: plan.cost,
        factor,
        radius: a.radius,
        plan,
    })
}

/// EMD between the isosets of two periodic sets at a caller-chosen radius.
pub fn isoset_distance_at(s: &PeriodicSet, q: &PeriodicSet, alpha: f64, delta: f64) -> Result<IsosetDistance> {
    check_dims(s, q)?;
    let (a, b) = rayon::join(|| isoset(s, alpha), || isoset(q, alpha));
    isoset_emd(&a?, &b?, delta)
}

/// EMD between the isosets of two periodic sets at their common stable radius.
pub fn isoset_distance(s: &PeriodicSet, q: &PeriodicSet, delta: f64) -> Result<IsosetDistance> {
    check_dims(s, q)?;
    isoset_distance_at(s, q, common_stable_radius(s, q), delta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledDistance {
    /// `|d_S - d_Q| + EMD` of the normalized sets.
    pub value: f64,
    pub factor: f64,
    /// Double diameter of each given cell.
    pub scale_s: f64,
    pub scale_q: f64,
    pub emd: f64,
}

/// Radius-free distance: both sets are scaled by their double cell diameter
/// and compared at radius 1, plus the difference of the scales. The scales
/// depend on the given cells.
pub fn scaled_invariant_distance(s: &PeriodicSet, q: &PeriodicSet, delta: f64) -> Result<ScaledDistance> {
    check_dims(s, q)?;
    let scale_s = 2.0 * s.geometry().diameter;
    let scale_q = 2.0 * q.geometry().diameter;
    let s1 = s.scaled(1.0 / scale_s)?;
    let q1 = q.scaled(1.0 / scale_q)?;
    let inner = isoset_distance_at(&s1, &q1, 1.0, delta)?;
    Ok(ScaledDistance {
        value: (scale_s - scale_q).abs() + inner.value,
        factor: inner.factor,
        scale_s,
        scale_q,
        emd: inner.value,
    })
}
