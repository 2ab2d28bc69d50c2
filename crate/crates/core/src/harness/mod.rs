//! End-to-end runs: configuration, acquisition, datasets, sweeps and tables.

mod acquisition;
mod analysis;
mod calibration;
mod config;
mod dataset;
mod report;

pub use acquisition::{
    acquisition_schedule, run_acquisition, shot_rng, Manifest, ShotDataset, ShotEntry, ShotRecord,
    ShotTruth, StatePreparer,
};
pub use analysis::{Analysis, CriteriaReport, PatternDiagnostic};
pub use calibration::{css_calibration, render_column_sums, CalibrationPoint};
pub use config::{AcquisitionSpec, ImagingSpec, RunConfig, StateKind, StateSpec, SweepSpec};
pub use dataset::{load_dataset, persist_dataset, FRAMES_FILE, MANIFEST_FILE, TRUTH_FILE};
pub use report::{read_jsonl, write_table, ReportFormat, ReportRow};

use std::path::PathBuf;

use crate::criteria::CriteriaError;
use crate::imaging::ImagingError;
use crate::regions::RegionError;
use crate::spin::SpinError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt dataset: {0}")]
    Corrupt(String),
    #[error("nothing to report")]
    EmptyReport,
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

impl HarnessError {
    /// Stable identifier for scripts consuming CLI errors.
    pub fn category(&self) -> &'static str {
        match self {
            HarnessError::Config(_) => "config",
            HarnessError::Io { .. } => "io",
            HarnessError::Corrupt(_) => "corrupt_dataset",
            HarnessError::EmptyReport => "empty_report",
            HarnessError::Serialize(_) => "serialize",
            HarnessError::Spin(_)
            | HarnessError::Imaging(_)
            | HarnessError::Region(_)
            | HarnessError::Criteria(_) => "invalid_input",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 3,
            HarnessError::Io { .. } => 4,
            HarnessError::Corrupt(_) => 5,
            HarnessError::EmptyReport => 6,
            HarnessError::Serialize(_) => 7,
            _ => 8,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
        let path = path.into();
        move |source| HarnessError::Io { path, source }
    }
}
