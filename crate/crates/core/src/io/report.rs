use serde::{Deserialize, Serialize};

use crate::congruence::Isoset;
use crate::Weight;

/// One isometry class as written to reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub weight: Weight,
    /// Motif indices whose clusters fall into this class.
    pub members: Vec<usize>,
    /// Number of points in the representative cluster.
    pub size: usize,
    /// Representative cluster as vectors from its center.
    pub points: Vec<Vec<f64>>,
}

/// Serializable view of an isoset with classes in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsosetSummary {
    pub dim: usize,
    pub radius: f64,
    pub classes: Vec<ClassSummary>,
}

impl From<&Isoset> for IsosetSummary {
    fn from(iso: &Isoset) -> Self {
        IsosetSummary {
            dim: iso.dim,
            radius: iso.radius,
            classes: iso
                .canonical_classes()
                .into_iter()
                .map(|c| ClassSummary {
                    weight: c.weight,
                    members: c.members.clone(),
                    size: c.representative.len(),
                    points: c.representative.rows(),
                })
                .collect(),
        }
    }
}
