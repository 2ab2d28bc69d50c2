use std::fs;

use bec_steering::harness::{
    load_dataset, persist_dataset, run_acquisition, Analysis, HarnessError, RunConfig, FRAMES_FILE,
    MANIFEST_FILE,
};
use bec_steering::regions::Orientation;

fn small() -> RunConfig {
    let mut c = RunConfig::default();
    c.acquisition.subsets = 3;
    c.acquisition.store_truth = true;
    c.seed = 5;
    c
}

#[test]
fn round_trip_preserves_shots_and_criteria() {
    let ds = run_acquisition(&small()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    persist_dataset(&ds, dir.path()).unwrap();
    let back = load_dataset(dir.path()).unwrap();
    assert_eq!(back, ds);

    let direct = Analysis::new(&ds).unwrap().sweep_gap_position(Orientation::Horizontal, 1).unwrap();
    let loaded = Analysis::new(&back).unwrap().sweep_gap_position(Orientation::Horizontal, 1).unwrap();
    assert_eq!(direct.len(), loaded.len());
    for (a, b) in direct.iter().zip(&loaded) {
        assert_eq!(a.e_ent, b.e_ent);
        assert_eq!(a.e_epr_ab, b.e_epr_ab);
        assert_eq!(a.product_b, b.product_b);
    }
}

#[test]
fn same_seed_same_dataset() {
    let a = run_acquisition(&small()).unwrap();
    let b = run_acquisition(&small()).unwrap();
    assert_eq!(a, b);
}

fn persisted() -> tempfile::TempDir {
    let mut c = small();
    c.acquisition.subsets = 2;
    let ds = run_acquisition(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    persist_dataset(&ds, dir.path()).unwrap();
    dir
}

#[test]
fn truncated_frames_are_corrupt() {
    let dir = persisted();
    let path = dir.path().join(FRAMES_FILE);
    let bytes = fs::read(&path).unwrap();
    fs::write(&path, &bytes[..bytes.len() - 7]).unwrap();
    let err = load_dataset(dir.path()).unwrap_err();
    assert!(matches!(err, HarnessError::Corrupt(_)), "{err}");
    assert_eq!(err.category(), "corrupt_dataset");
}

#[test]
fn non_finite_pixels_are_corrupt() {
    let dir = persisted();
    let path = dir.path().join(FRAMES_FILE);
    let mut bytes = fs::read(&path).unwrap();
    bytes[40..44].copy_from_slice(&f32::NAN.to_le_bytes());
    fs::write(&path, bytes).unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(HarnessError::Corrupt(_))));
}

#[test]
fn garbled_manifest_is_corrupt() {
    let dir = persisted();
    fs::write(dir.path().join(MANIFEST_FILE), "format_version = \"x\"\n").unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(HarnessError::Corrupt(_))));
}

#[test]
fn missing_dataset_is_io() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_dataset(&dir.path().join("absent")).unwrap_err();
    assert_eq!(err.category(), "io");
}
