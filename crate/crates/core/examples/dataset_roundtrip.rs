//! Writes a small dataset to disk, reads it back and analyses the copy.

use bec_steering::harness::{load_dataset, persist_dataset, run_acquisition, Analysis, RunConfig};
use bec_steering::regions::{Orientation, PatternDescriptor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    config.acquisition.subsets = 4;
    config.acquisition.store_truth = true;
    let dataset = run_acquisition(&config)?;
    let dir = std::env::temp_dir().join(format!("bec-steering-roundtrip-{}", std::process::id()));
    persist_dataset(&dataset, &dir)?;
    let copy = load_dataset(&dir)?;
    println!("{} shots written to {} and read back identical: {}", copy.shots.len(), dir.display(), copy == dataset);
    let r = Analysis::new(&copy)?.evaluate_pattern(&PatternDescriptor::half_split(Orientation::Horizontal))?;
    println!("half split: E_ent {:.3} ± {:.3}", r.e_ent.mean, r.e_ent.sem);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
