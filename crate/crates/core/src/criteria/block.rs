//! Samples of one acquisition subset, grouped by readout axis.

use crate::regions::{RegionLabel, SpinSample};
use crate::spin::MeasurementAxis;

/// Paired local spins of regions A and B for one readout axis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxisSamples {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl AxisSamples {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn get(&self, region: RegionLabel) -> &[f64] {
        match region {
            RegionLabel::A => &self.a,
            RegionLabel::B => &self.b,
        }
    }
}

/// One subset: samples along ±x, y and z sharing masks and `η_eff`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SubsetBlock {
    pub subset: usize,
    pub plus_x: AxisSamples,
    pub minus_x: AxisSamples,
    pub y: AxisSamples,
    pub z: AxisSamples,
    pub noise_var_a: f64,
    pub noise_var_b: f64,
    /// Detected atoms `N₁ + N₂` summed over the subset's shots.
    pub atoms_a: f64,
    pub atoms_b: f64,
    pub shots: usize,
}

impl SubsetBlock {
    pub fn new(subset: usize, noise_var_a: f64, noise_var_b: f64) -> Self {
        Self {
            subset,
            noise_var_a,
            noise_var_b,
            ..Default::default()
        }
    }

    /// Adds one shot's pair of samples; the axis is taken from `a`.
    pub fn push(&mut self, a: &SpinSample, b: &SpinSample) {
        let s = self.axis_mut(a.axis);
        s.a.push(a.value);
        s.b.push(b.value);
        self.atoms_a += a.n1 + a.n2;
        self.atoms_b += b.n1 + b.n2;
        self.shots += 1;
    }

    pub fn push_values(&mut self, axis: MeasurementAxis, a: f64, b: f64) {
        let s = self.axis_mut(axis);
        s.a.push(a);
        s.b.push(b);
        self.shots += 1;
    }

    pub fn axis(&self, axis: MeasurementAxis) -> &AxisSamples {
        match axis {
            MeasurementAxis::PlusX => &self.plus_x,
            MeasurementAxis::MinusX => &self.minus_x,
            MeasurementAxis::Y => &self.y,
            MeasurementAxis::Z => &self.z,
        }
    }

    fn axis_mut(&mut self, axis: MeasurementAxis) -> &mut AxisSamples {
        match axis {
            MeasurementAxis::PlusX => &mut self.plus_x,
            MeasurementAxis::MinusX => &mut self.minus_x,
            MeasurementAxis::Y => &mut self.y,
            MeasurementAxis::Z => &mut self.z,
        }
    }

    /// The same block with regions A and B exchanged.
    pub fn swapped(&self) -> SubsetBlock {
        let sw = |s: &AxisSamples| AxisSamples {
            a: s.b.clone(),
            b: s.a.clone(),
        };
        SubsetBlock {
            subset: self.subset,
            plus_x: sw(&self.plus_x),
            minus_x: sw(&self.minus_x),
            y: sw(&self.y),
            z: sw(&self.z),
            noise_var_a: self.noise_var_b,
            noise_var_b: self.noise_var_a,
            atoms_a: self.atoms_b,
            atoms_b: self.atoms_a,
            shots: self.shots,
        }
    }

    /// The same block with the `+x` and `−x` groups exchanged.
    pub fn with_x_groups_exchanged(&self) -> SubsetBlock {
        SubsetBlock {
            plus_x: self.minus_x.clone(),
            minus_x: self.plus_x.clone(),
            ..self.clone()
        }
    }
}
