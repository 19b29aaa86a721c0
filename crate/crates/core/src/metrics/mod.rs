//! Hausdorff-type distances between clusters, the boundary-tolerant cluster
//! distance, exact transportation and the Earth Mover's Distance on isosets.

mod certified;
mod cluster_distance;
mod hausdorff;
mod isoset_distance;
mod rotation;
mod transport;

pub use certified::{cluster_distance_lower_bound, isoset_emd_lower_bound};
pub use cluster_distance::{cluster_distance, max_min_directed_distance};
pub use hausdorff::{bottleneck_distance_finite, directed_hausdorff};
pub use isoset_distance::{
    isoset_distance, isoset_distance_at, isoset_emd, scaled_invariant_distance, IsosetDistance,
    ScaledDistance,
};
pub use rotation::rotation_invariant_distance;
pub use transport::{emd, FlowEntry, FlowPlan};

use serde::{Deserialize, Serialize};

/// A computed distance together with its guaranteed approximation factor:
/// the true distance lies in `[value / factor, value]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxValue {
    pub value: f64,
    pub factor: f64,
}

impl ApproxValue {
    /// Lower end of the guaranteed interval.
    pub fn lower_bound(&self) -> f64 {
        self.value / self.factor
    }
}

/// Approximation factor `(n² - n + 2)/2 · (1 + δ)` of the anchored
/// rotation search in dimension `n`.
pub fn approximation_factor(dim: usize, delta: f64) -> f64 {
    let n = dim as f64;
    (n * n - n + 2.0) / 2.0 * (1.0 + delta)
}
