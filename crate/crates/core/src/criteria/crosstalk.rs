//! Lower bound on the criteria from atoms imaged into both regions.
//!
//! For an uncorrelated state every atom contributes to `S^A` and `S^B` with
//! weights `f^A(x)` and `f^B(x)`. Writing `a = ⟨f_A²⟩`, `b = ⟨f_B²⟩`,
//! `c = ⟨f_A f_B⟩` and `r = c²/(ab)`, the optimal-gain EPR criterion of a
//! coherent state divided by `η_B²` is `(1 − r)²`; the entanglement
//! criterion evaluated with the same gains is `((1 − r)/(1 + r))²`.

use serde::{Deserialize, Serialize};

use super::CriteriaError;
use crate::imaging::{CloudDensity, PsfModel, StateLabel};
use crate::regions::{
    OverlapProfile, PairStatistics, QuadratureGrid, RegionError, RegionLabel, RegionMask,
    DEFAULT_SUPERSAMPLING,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrosstalkFloor {
    pub epr_ab: f64,
    pub epr_ba: f64,
    pub ent: f64,
}

impl CrosstalkFloor {
    /// No shared kernel mass.
    pub const NONE: CrosstalkFloor = CrosstalkFloor {
        epr_ab: 1.0,
        epr_ba: 1.0,
        ent: 1.0,
    };

    fn min(self, other: CrosstalkFloor) -> CrosstalkFloor {
        CrosstalkFloor {
            epr_ab: self.epr_ab.min(other.epr_ab),
            epr_ba: self.epr_ba.min(other.epr_ba),
            ent: self.ent.min(other.ent),
        }
    }
}

pub fn crosstalk_from_statistics(s: &PairStatistics) -> Result<CrosstalkFloor, CriteriaError> {
    if s.mean_a <= 0.0 || s.mean_aa <= 0.0 {
        return Err(RegionError::UndefinedRegion(RegionLabel::A).into());
    }
    if s.mean_b <= 0.0 || s.mean_bb <= 0.0 {
        return Err(RegionError::UndefinedRegion(RegionLabel::B).into());
    }
    // Cauchy-Schwarz keeps r ≤ 1; rounding can push it a hair above.
    let r = (s.mean_ab * s.mean_ab / (s.mean_aa * s.mean_bb)).min(1.0);
    let epr = (1.0 - r) * (1.0 - r);
    Ok(CrosstalkFloor {
        epr_ab: epr,
        epr_ba: epr,
        ent: ((1.0 - r) / (1.0 + r)).powi(2),
    })
}

/// Floor for a pair of masks, taking the smaller value of the two image
/// frames for each criterion.
pub fn crosstalk_floor(
    density: &CloudDensity,
    psf: &PsfModel,
    mask_a: &RegionMask,
    mask_b: &RegionMask,
) -> Result<CrosstalkFloor, CriteriaError> {
    if mask_a.geometry != mask_b.geometry {
        return Err(RegionError::GeometryMismatch {
            got: mask_b.geometry,
            expected: mask_a.geometry,
        }
        .into());
    }
    let mut floor = CrosstalkFloor::NONE;
    for state in StateLabel::BOTH {
        let grid = QuadratureGrid::new(density, state, mask_a.geometry, DEFAULT_SUPERSAMPLING);
        let pa = OverlapProfile::new(&grid, psf, mask_a);
        let pb = OverlapProfile::new(&grid, psf, mask_b);
        floor = floor.min(crosstalk_from_statistics(&PairStatistics::new(&grid, &pa, &pb))?);
    }
    Ok(floor)
}
