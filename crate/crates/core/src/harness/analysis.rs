//! Criteria for mask configurations applied to a dataset.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{HarnessError, ShotDataset, StateKind};
use crate::criteria::{
    aggregate_subsets, crosstalk_floor, evaluate_block, wineland_from_samples, Aggregate,
    BlockCriteria, CrosstalkFloor, EvaluationOptions, SubsetBlock, Wineland,
};
use crate::imaging::{CloudDensity, DetectionNoiseModel, Geometry, PsfModel, StateLabel};
use crate::regions::{
    count_atoms, make_pattern_masks, ColumnSums, MaskPair, Orientation, PatternDescriptor, Region,
    RegionLabel, RegionMask, SpinSample,
};

/// Aggregated criteria for one mask configuration, with the intermediate
/// quantities needed to audit them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub label: String,
    pub pattern: PatternDescriptor,
    pub seed: u64,
    pub state: StateKind,
    /// `N^A / (N^A + N^B)` from detected atoms.
    pub splitting_ratio: f64,
    /// Mean detected atoms per shot.
    pub atoms_a: f64,
    pub atoms_b: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub noise_var_a: f64,
    pub noise_var_b: f64,
    pub e_ent: Aggregate,
    pub e_epr_ab: Aggregate,
    pub e_epr_ba: Aggregate,
    pub product_a: Aggregate,
    pub product_b: Aggregate,
    pub crosstalk: CrosstalkFloor,
    pub wineland_db: Option<f64>,
    /// Subsets whose gain fell back to zero.
    pub fallbacks: usize,
    /// Subsets with a negative noise-subtracted variance.
    pub negative_variances: usize,
    pub subtract_noise: bool,
    pub subsets: Vec<BlockCriteria>,
}

impl CriteriaReport {
    fn mean_of(&self, f: impl Fn(&BlockCriteria) -> f64) -> f64 {
        self.subsets.iter().map(f).sum::<f64>() / self.subsets.len().max(1) as f64
    }

    pub fn mean_gains_ab(&self) -> (f64, f64) {
        (self.mean_of(|c| c.a_to_b.gains.g_z), self.mean_of(|c| c.a_to_b.gains.g_y))
    }

    pub fn mean_gains_ba(&self) -> (f64, f64) {
        (self.mean_of(|c| c.b_to_a.gains.g_z), self.mean_of(|c| c.b_to_a.gains.g_y))
    }

    pub fn mean_sx(&self) -> (f64, f64) {
        (self.mean_of(|c| c.sx_a), self.mean_of(|c| c.sx_b))
    }

    /// Mean inferred variances `(z raw, z, y raw, y)` for A→B.
    pub fn mean_variances_ab(&self) -> [f64; 4] {
        [
            self.mean_of(|c| c.a_to_b.var_z_raw),
            self.mean_of(|c| c.a_to_b.var_z),
            self.mean_of(|c| c.a_to_b.var_y_raw),
            self.mean_of(|c| c.a_to_b.var_y),
        ]
    }

    pub fn gap_offset(&self) -> Option<i64> {
        match self.pattern {
            PatternDescriptor::Split { gap_offset, .. } => Some(gap_offset),
            _ => None,
        }
    }

    pub fn gap_width(&self) -> Option<usize> {
        match self.pattern {
            PatternDescriptor::Split { gap_width, .. } => Some(gap_width),
            _ => None,
        }
    }
}

/// A pattern that produced no report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternDiagnostic {
    pub pattern: String,
    pub message: String,
}

/// Analysis context for a dataset: model parameters, per-state centroids and
/// cached column totals.
pub struct Analysis<'a> {
    dataset: &'a ShotDataset,
    density: CloudDensity,
    psf: PsfModel,
    noise: DetectionNoiseModel,
    centroids: [[f64; 2]; 2],
    columns: Vec<ColumnSums>,
    options: EvaluationOptions,
    wineland: Option<Wineland>,
}

fn centroid(sums: &[f64], g: Geometry) -> [f64; 2] {
    let (mut m, mut x, mut y) = (0.0, 0.0, 0.0);
    for (i, &v) in sums.iter().enumerate() {
        m += v;
        x += v * ((i % g.width) as f64 + 0.5);
        y += v * ((i / g.width) as f64 + 0.5);
    }
    [x / m, y / m]
}

impl<'a> Analysis<'a> {
    pub fn new(dataset: &'a ShotDataset) -> Result<Self, HarnessError> {
        let options = dataset.config().sweep.options();
        Self::with_options(dataset, options)
    }

    pub fn with_options(dataset: &'a ShotDataset, options: EvaluationOptions) -> Result<Self, HarnessError> {
        let config = dataset.config();
        let g = dataset.geometry();
        if dataset.shots.is_empty() {
            return Err(HarnessError::Corrupt("dataset has no shots".into()));
        }
        let mut centroids = [[0.0; 2]; 2];
        for state in StateLabel::BOTH {
            let mut sums = vec![0.0; g.n_pixels()];
            for shot in &dataset.shots {
                for (s, &v) in sums.iter_mut().zip(shot.images.frame(state)) {
                    *s += v as f64;
                }
            }
            centroids[state.index()] = centroid(&sums, g);
        }
        let columns = dataset.shots.par_iter().map(|s| ColumnSums::new(&s.images)).collect();
        let mut a = Self {
            dataset,
            density: config.cloud(),
            psf: config.imaging.psf,
            noise: config.imaging.noise,
            centroids,
            columns,
            options,
            wineland: None,
        };
        a.wineland = a.data_wineland().ok();
        Ok(a)
    }

    pub fn options(&self) -> EvaluationOptions {
        self.options
    }

    /// Ensemble-mean centroid of each state's frame, `[x, y]` in pixels.
    pub fn centroids(&self) -> [[f64; 2]; 2] {
        self.centroids
    }

    pub fn wineland(&self) -> Option<Wineland> {
        self.wineland
    }

    pub fn masks(&self, pattern: &PatternDescriptor) -> Result<MaskPair, HarnessError> {
        Ok(make_pattern_masks(self.dataset.geometry(), pattern, self.centroids)?)
    }

    fn counts(&self, region: &Region, shot: usize) -> Result<(f64, f64), HarnessError> {
        match region.counts_from_columns(&self.columns[shot]) {
            Some(c) => Ok(c),
            None => Ok(count_atoms(&self.dataset.shots[shot].images, &region.mask)?),
        }
    }

    fn samples(&self, region: &Region) -> Result<Vec<SpinSample>, HarnessError> {
        (0..self.dataset.shots.len())
            .into_par_iter()
            .map(|i| {
                let (n1, n2) = self.counts(region, i)?;
                Ok(SpinSample {
                    value: (n1 - n2) / (2.0 * region.eta),
                    axis: self.dataset.shots[i].entry.axis,
                    region: region.label(),
                    n1,
                    n2,
                    noise_var: region.noise_var,
                })
            })
            .collect()
    }

    fn blocks(&self, a: &Region, b: &Region) -> Result<Vec<SubsetBlock>, HarnessError> {
        let (sa, sb) = (self.samples(a)?, self.samples(b)?);
        let mut blocks: Vec<SubsetBlock> = (0..self.dataset.config().acquisition.subsets)
            .map(|s| SubsetBlock::new(s, a.noise_var, b.noise_var))
            .collect();
        for ((shot, x), y) in self.dataset.shots.iter().zip(&sa).zip(&sb) {
            blocks[shot.entry.subset].push(x, y);
        }
        Ok(blocks)
    }

    /// Fraction of detected atoms in A, without evaluating criteria.
    pub fn splitting_ratio(&self, masks: &MaskPair) -> Result<f64, HarnessError> {
        let total = |m: &RegionMask| -> Result<f64, HarnessError> {
            let r = Region::new(m.clone(), 1.0, &self.noise);
            (0..self.dataset.shots.len()).try_fold(0.0, |acc, i| {
                let (n1, n2) = self.counts(&r, i)?;
                Ok(acc + n1 + n2)
            })
        };
        let (a, b) = (total(&masks.a)?, total(&masks.b)?);
        Ok(a / (a + b))
    }

    pub fn evaluate(&self, label: impl Into<String>, masks: &MaskPair) -> Result<CriteriaReport, HarnessError> {
        let ra = Region::calibrate(masks.a.clone(), &self.density, &self.psf, &self.noise)?;
        let rb = Region::calibrate(masks.b.clone(), &self.density, &self.psf, &self.noise)?;
        let blocks = self.blocks(&ra, &rb)?;
        let per: Vec<BlockCriteria> = blocks
            .par_iter()
            .map(|b| evaluate_block(b, &self.options))
            .collect::<Result<_, _>>()?;
        let agg = |f: fn(&BlockCriteria) -> f64| -> Result<Aggregate, HarnessError> {
            Ok(aggregate_subsets(&per.iter().map(f).collect::<Vec<_>>())?)
        };
        let shots = self.dataset.shots.len() as f64;
        let atoms_a = blocks.iter().map(|b| b.atoms_a).sum::<f64>() / shots;
        let atoms_b = blocks.iter().map(|b| b.atoms_b).sum::<f64>() / shots;
        let config = self.dataset.config();
        Ok(CriteriaReport {
            label: label.into(),
            pattern: masks.a.pattern.clone(),
            seed: config.seed,
            state: config.state.kind,
            splitting_ratio: atoms_a / (atoms_a + atoms_b),
            atoms_a,
            atoms_b,
            eta_a: ra.eta,
            eta_b: rb.eta,
            noise_var_a: ra.noise_var,
            noise_var_b: rb.noise_var,
            e_ent: agg(|c| c.e_ent)?,
            e_epr_ab: agg(|c| c.e_epr_ab)?,
            e_epr_ba: agg(|c| c.e_epr_ba)?,
            product_a: agg(|c| c.product_a)?,
            product_b: agg(|c| c.product_b)?,
            crosstalk: crosstalk_floor(&self.density, &self.psf, &masks.a, &masks.b)?,
            wineland_db: self.wineland.map(|w| w.db),
            fallbacks: per.iter().filter(|c| c.a_to_b.fallbacks + c.b_to_a.fallbacks > 0).count(),
            negative_variances: per.iter().filter(|c| c.negative_variance).count(),
            subtract_noise: self.options.subtract_noise,
            subsets: per,
        })
    }

    pub fn evaluate_pattern(&self, pattern: &PatternDescriptor) -> Result<CriteriaReport, HarnessError> {
        self.evaluate(pattern.name(), &self.masks(pattern)?)
    }

    fn split(&self, orientation: Orientation, gap_offset: i64, gap_width: usize) -> PatternDescriptor {
        PatternDescriptor::Split {
            orientation,
            gap_offset,
            gap_width,
        }
    }

    /// One report per configured gap offset.
    pub fn sweep_gap_position(
        &self,
        orientation: Orientation,
        width: usize,
    ) -> Result<Vec<CriteriaReport>, HarnessError> {
        self.dataset
            .config()
            .sweep
            .gap_offsets
            .par_iter()
            .map(|&o| self.evaluate_pattern(&self.split(orientation, o, width)))
            .collect()
    }

    /// Configured gap offset whose width-1 split is closest to `ratio`.
    pub fn offset_for_ratio(&self, orientation: Orientation, ratio: f64) -> Result<i64, HarnessError> {
        let offsets = &self.dataset.config().sweep.gap_offsets;
        let mut best: Option<(f64, i64)> = None;
        for &o in offsets {
            let r = self.splitting_ratio(&self.masks(&self.split(orientation, o, 1))?)?;
            if best.map_or(true, |(d, _)| (r - ratio).abs() < d) {
                best = Some(((r - ratio).abs(), o));
            }
        }
        best.map(|b| b.1)
            .ok_or_else(|| HarnessError::Config("sweep.gap_offsets is empty".into()))
    }

    /// Reports for each configured width with the gap centred at the offset
    /// closest to the configured target ratio.
    pub fn sweep_gap_width(&self, orientation: Orientation) -> Result<(i64, Vec<CriteriaReport>), HarnessError> {
        let sweep = &self.dataset.config().sweep;
        let offset = self.offset_for_ratio(orientation, sweep.target_ratio)?;
        let reports = sweep
            .gap_widths
            .par_iter()
            .map(|&w| self.evaluate_pattern(&self.split(orientation, offset, w)))
            .collect::<Result<_, _>>()?;
        Ok((offset, reports))
    }

    /// Reports for valid patterns; invalid ones yield diagnostics instead.
    pub fn sweep_patterns(&self, patterns: &[PatternDescriptor]) -> (Vec<CriteriaReport>, Vec<PatternDiagnostic>) {
        let results: Vec<_> = patterns.par_iter().map(|p| (p, self.evaluate_pattern(p))).collect();
        let (mut ok, mut bad) = (Vec::new(), Vec::new());
        for (p, r) in results {
            match r {
                Ok(r) => ok.push(r),
                Err(e) => bad.push(PatternDiagnostic {
                    pattern: p.name(),
                    message: e.to_string(),
                }),
            }
        }
        (ok, bad)
    }

    /// Wineland parameter from the whole image: `z` variance against the
    /// `±x` contrast, per subset, averaged.
    fn data_wineland(&self) -> Result<Wineland, HarnessError> {
        let g = self.dataset.geometry();
        let full = Region::calibrate(RegionMask::full(RegionLabel::A, g), &self.density, &self.psf, &self.noise)?;
        let blocks = self.blocks(&full, &full)?;
        let xi2: Vec<f64> = blocks
            .iter()
            .map(|b| wineland_from_samples(b, b.atoms_a / b.shots as f64 / full.eta).map(|w| w.xi2))
            .collect::<Result<_, _>>()?;
        Ok(Wineland::from_xi2(aggregate_subsets(&xi2)?.mean))
    }
}
