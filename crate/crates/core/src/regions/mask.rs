//! Region masks and the built-in pattern library.

use serde::{Deserialize, Serialize};

use super::RegionError;
use crate::imaging::{Geometry, StateLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    A,
    B,
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegionLabel::A => "A",
            RegionLabel::B => "B",
        })
    }
}

/// Direction along which a gap is positioned.
///
/// `Horizontal`: the gap is a band of columns at some horizontal position,
/// with A to the left and B to the right. `Vertical`: a band of rows, with
/// A above (smaller row index) and B below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    fn coordinate(self, col: usize, row: usize) -> usize {
        match self {
            Orientation::Horizontal => col,
            Orientation::Vertical => row,
        }
    }

    fn extent(self, g: Geometry) -> usize {
        match self {
            Orientation::Horizontal => g.width,
            Orientation::Vertical => g.height,
        }
    }

    fn short(self) -> &'static str {
        match self {
            Orientation::Horizontal => "h",
            Orientation::Vertical => "v",
        }
    }
}

fn default_width() -> usize {
    1
}

/// Serializable description of a pair of regions.
///
/// All patterns except `Pixels` are placed relative to each state's anchor
/// pixel (the pixel holding the state's density centroid). The shapes are
/// approximations of typical analysis patterns, not copies of any particular
/// published layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum PatternDescriptor {
    /// Two half-planes separated by a gap of `gap_width` pixels whose centre
    /// sits `gap_offset` pixels from the anchor.
    Split {
        orientation: Orientation,
        #[serde(default)]
        gap_offset: i64,
        #[serde(default = "default_width")]
        gap_width: usize,
    },
    /// Diagonal quadrant pairs: A is upper-left plus lower-right.
    Quadrants {
        #[serde(default = "default_width")]
        gap_width: usize,
    },
    /// A is a disc of `core_radius` pixels; B is everything beyond
    /// `core_radius + gap_width`.
    Concentric { core_radius: f64, gap_width: f64 },
    /// Alternating bands `period` pixels wide, separated by gaps.
    Stripes {
        orientation: Orientation,
        period: usize,
        #[serde(default = "default_width")]
        gap_width: usize,
    },
    /// Explicit `[col, row]` lists, identical for both states.
    Pixels { a: Vec<[usize; 2]>, b: Vec<[usize; 2]> },
}

impl PatternDescriptor {
    pub fn half_split(orientation: Orientation) -> Self {
        PatternDescriptor::Split {
            orientation,
            gap_offset: 0,
            gap_width: 1,
        }
    }

    /// Short identifier used in report rows.
    pub fn name(&self) -> String {
        match self {
            PatternDescriptor::Split {
                orientation,
                gap_offset,
                gap_width,
            } => format!("split_{}_off{}_w{}", orientation.short(), gap_offset, gap_width),
            PatternDescriptor::Quadrants { gap_width } => format!("quadrants_w{gap_width}"),
            PatternDescriptor::Concentric {
                core_radius,
                gap_width,
            } => format!("concentric_r{core_radius}_w{gap_width}"),
            PatternDescriptor::Stripes {
                orientation,
                period,
                gap_width,
            } => format!("stripes_{}_p{}_w{}", orientation.short(), period, gap_width),
            PatternDescriptor::Pixels { a, b } => format!("pixels_{}_{}", a.len(), b.len()),
        }
    }

    /// The built-in library used by pattern sweeps.
    pub fn library() -> Vec<PatternDescriptor> {
        vec![
            PatternDescriptor::half_split(Orientation::Horizontal),
            PatternDescriptor::half_split(Orientation::Vertical),
            PatternDescriptor::Quadrants { gap_width: 1 },
            PatternDescriptor::Concentric {
                core_radius: 3.0,
                gap_width: 1.0,
            },
            PatternDescriptor::Stripes {
                orientation: Orientation::Horizontal,
                period: 3,
                gap_width: 1,
            },
            PatternDescriptor::Stripes {
                orientation: Orientation::Vertical,
                period: 4,
                gap_width: 1,
            },
        ]
    }
}

/// Pixel set of one region, with separate masks for the two state frames.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionMask {
    pub label: RegionLabel,
    pub geometry: Geometry,
    pub pattern: PatternDescriptor,
    pixels: [Vec<bool>; 2],
    indices: [Vec<u32>; 2],
}

impl RegionMask {
    pub fn from_grids(
        label: RegionLabel,
        geometry: Geometry,
        pattern: PatternDescriptor,
        state1: Vec<bool>,
        state2: Vec<bool>,
    ) -> Self {
        let idx = |g: &[bool]| {
            g.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i as u32)
                .collect()
        };
        let indices = [idx(&state1), idx(&state2)];
        Self {
            label,
            geometry,
            pattern,
            pixels: [state1, state2],
            indices,
        }
    }

    /// Mask covering the whole image for both states.
    pub fn full(label: RegionLabel, geometry: Geometry) -> Self {
        let all = vec![true; geometry.n_pixels()];
        let pattern = PatternDescriptor::Pixels {
            a: Vec::new(),
            b: Vec::new(),
        };
        Self::from_grids(label, geometry, pattern, all.clone(), all)
    }

    pub fn contains(&self, state: StateLabel, col: usize, row: usize) -> bool {
        self.pixels[state.index()][self.geometry.index(col, row)]
    }

    /// Boolean grid for `state`, row-major; for export and visualization.
    pub fn grid(&self, state: StateLabel) -> &[bool] {
        &self.pixels[state.index()]
    }

    /// Row-major indices of the pixels in the mask.
    pub fn indices(&self, state: StateLabel) -> &[u32] {
        &self.indices[state.index()]
    }

    pub fn pixel_count(&self, state: StateLabel) -> usize {
        self.indices[state.index()].len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.iter().any(|i| i.is_empty())
    }

    /// If the mask for `state` is a union of whole columns, those columns.
    pub fn full_columns(&self, state: StateLabel) -> Option<Vec<usize>> {
        let g = self.geometry;
        let grid = &self.pixels[state.index()];
        let mut cols = Vec::new();
        for c in 0..g.width {
            let first = grid[g.index(c, 0)];
            if (1..g.height).any(|r| grid[g.index(c, r)] != first) {
                return None;
            }
            if first {
                cols.push(c);
            }
        }
        Some(cols)
    }

    pub fn is_disjoint(&self, other: &RegionMask) -> bool {
        (0..2).all(|s| {
            self.pixels[s]
                .iter()
                .zip(&other.pixels[s])
                .all(|(a, b)| !(*a && *b))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaskPair {
    pub a: RegionMask,
    pub b: RegionMask,
}

impl MaskPair {
    pub fn get(&self, label: RegionLabel) -> &RegionMask {
        match label {
            RegionLabel::A => &self.a,
            RegionLabel::B => &self.b,
        }
    }
}

/// Pixel holding a centroid.
pub fn centroid_anchor(centroid: [f64; 2]) -> [i64; 2] {
    [centroid[0].floor() as i64, centroid[1].floor() as i64]
}

/// Which side of a gap a coordinate falls on: `Some(true)` for A.
fn split_side(u: i64, gap_center: i64, width: usize) -> Option<bool> {
    let start = gap_center - (width.saturating_sub(1) / 2) as i64;
    if u < start {
        Some(true)
    } else if u >= start + width as i64 {
        Some(false)
    } else {
        None
    }
}

/// Half-plane masks with a gap band, identical for both states.
pub fn make_split_masks(
    geometry: Geometry,
    orientation: Orientation,
    gap_center: i64,
    gap_width: usize,
) -> Result<MaskPair, RegionError> {
    if gap_width == 0 {
        return Err(RegionError::ZeroGap);
    }
    let extent = orientation.extent(geometry);
    let start = gap_center - ((gap_width - 1) / 2) as i64;
    if gap_center < 0 || gap_center >= extent as i64 || start < 0 || start + gap_width as i64 > extent as i64 {
        return Err(RegionError::GapOutsideImage {
            center: gap_center,
            width: gap_width,
            extent,
        });
    }
    let pattern = PatternDescriptor::Split {
        orientation,
        gap_offset: 0,
        gap_width,
    };
    let [col, row] = [gap_center; 2];
    build(geometry, &pattern, [[col, row]; 2], [[0.0; 2]; 2])
}

/// Masks for any pattern, anchored on the per-state density centroids
/// (index 0 for state |1⟩, index 1 for |2⟩).
pub fn make_pattern_masks(
    geometry: Geometry,
    pattern: &PatternDescriptor,
    centroids: [[f64; 2]; 2],
) -> Result<MaskPair, RegionError> {
    let anchors = [centroid_anchor(centroids[0]), centroid_anchor(centroids[1])];
    build(geometry, pattern, anchors, centroids)
}

fn build(
    geometry: Geometry,
    pattern: &PatternDescriptor,
    anchors: [[i64; 2]; 2],
    centroids: [[f64; 2]; 2],
) -> Result<MaskPair, RegionError> {
    let n = geometry.n_pixels();
    let mut grids = [[vec![false; n], vec![false; n]], [vec![false; n], vec![false; n]]];
    if let PatternDescriptor::Pixels { a, b } = pattern {
        for (r, list) in [a, b].into_iter().enumerate() {
            for &[col, row] in list {
                if col >= geometry.width || row >= geometry.height {
                    return Err(RegionError::PixelOutside { col, row });
                }
                let i = geometry.index(col, row);
                if r == 1 && grids[0][0][i] {
                    return Err(RegionError::Overlapping { col, row });
                }
                grids[r][0][i] = true;
                grids[r][1][i] = true;
            }
        }
    } else {
        if let PatternDescriptor::Stripes { period: 0, .. } = pattern {
            return Err(RegionError::InvalidPattern("stripe period must be positive".into()));
        }
        if let PatternDescriptor::Concentric {
            core_radius,
            gap_width,
        } = pattern
        {
            if !(*core_radius > 0.0 && *gap_width >= 0.0) {
                return Err(RegionError::InvalidPattern(format!(
                    "concentric radius {core_radius}, gap {gap_width}"
                )));
            }
        }
        for s in 0..2 {
            let [ac, ar] = anchors[s];
            for row in 0..geometry.height {
                for col in 0..geometry.width {
                    let side = classify(pattern, col, row, ac, ar, centroids[s]);
                    let i = geometry.index(col, row);
                    match side {
                        Some(true) => grids[0][s][i] = true,
                        Some(false) => grids[1][s][i] = true,
                        None => {}
                    }
                }
            }
        }
    }
    let [[a1, a2], [b1, b2]] = grids;
    let a = RegionMask::from_grids(RegionLabel::A, geometry, pattern.clone(), a1, a2);
    let b = RegionMask::from_grids(RegionLabel::B, geometry, pattern.clone(), b1, b2);
    if a.is_empty() {
        return Err(RegionError::EmptyRegion(RegionLabel::A));
    }
    if b.is_empty() {
        return Err(RegionError::EmptyRegion(RegionLabel::B));
    }
    Ok(MaskPair { a, b })
}

fn classify(
    pattern: &PatternDescriptor,
    col: usize,
    row: usize,
    ac: i64,
    ar: i64,
    centroid: [f64; 2],
) -> Option<bool> {
    match *pattern {
        PatternDescriptor::Split {
            orientation,
            gap_offset,
            gap_width,
        } => {
            let u = orientation.coordinate(col, row) as i64;
            let a = match orientation {
                Orientation::Horizontal => ac,
                Orientation::Vertical => ar,
            };
            split_side(u, a + gap_offset, gap_width)
        }
        PatternDescriptor::Quadrants { gap_width } => {
            let left = split_side(col as i64, ac, gap_width)?;
            let top = split_side(row as i64, ar, gap_width)?;
            Some(left == top)
        }
        PatternDescriptor::Concentric {
            core_radius,
            gap_width,
        } => {
            let r = (col as f64 + 0.5 - centroid[0]).hypot(row as f64 + 0.5 - centroid[1]);
            if r < core_radius {
                Some(true)
            } else if r >= core_radius + gap_width {
                Some(false)
            } else {
                None
            }
        }
        PatternDescriptor::Stripes {
            orientation,
            period,
            gap_width,
        } => {
            let a = match orientation {
                Orientation::Horizontal => ac,
                Orientation::Vertical => ar,
            };
            let u = orientation.coordinate(col, row) as i64 - a;
            let (p, w) = (period as i64, gap_width as i64);
            let phase = u.rem_euclid(2 * (p + w));
            if phase < p {
                Some(true)
            } else if phase < p + w {
                None
            } else if phase < 2 * p + w {
                Some(false)
            } else {
                None
            }
        }
        PatternDescriptor::Pixels { .. } => unreachable!("explicit pixels are handled separately"),
    }
}
