//! Analysis regions on the image plane and local spin extraction.

mod counting;
mod mask;
mod overlap;

pub use counting::{count_atoms, extract_spin_sample, ColumnSums, Region, SpinSample};
pub use mask::{
    centroid_anchor, make_pattern_masks, make_split_masks, MaskPair, Orientation,
    PatternDescriptor, RegionLabel, RegionMask,
};
pub use overlap::{
    css_raw_fluctuation_ratio, eta_eff, mode_overlap, mode_overlap_grid, OverlapProfile,
    PairStatistics, QuadratureGrid, DEFAULT_SUPERSAMPLING,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("gap at {center} (width {width}) lies outside the {extent}-pixel image")]
    GapOutsideImage { center: i64, width: usize, extent: usize },
    #[error("gap width must be at least 1 pixel")]
    ZeroGap,
    #[error("region {0} is empty")]
    EmptyRegion(RegionLabel),
    #[error("pattern regions overlap at pixel ({col}, {row})")]
    Overlapping { col: usize, row: usize },
    #[error("pixel ({col}, {row}) outside the image")]
    PixelOutside { col: usize, row: usize },
    #[error("invalid pattern parameter: {0}")]
    InvalidPattern(String),
    #[error("region {0} carries no atom density")]
    UndefinedRegion(RegionLabel),
    #[error("mask geometry {got:?} does not match image geometry {expected:?}")]
    GeometryMismatch {
        got: crate::imaging::Geometry,
        expected: crate::imaging::Geometry,
    },
}
