//! Projection-noise calibration with a coherent state: raw local
//! fluctuations fall with the region's coupling, the corrected ones stay
//! at one.
//!
//! `cargo run --release --example projection_noise [shots]`

use bec_steering::harness::{css_calibration, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let shots: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let config = RunConfig::coherent();
    let offsets: Vec<i64> = (-4..=4).collect();
    println!("ratio   corrected         raw               predicted raw");
    for p in css_calibration(&config, shots, &offsets, 2000)? {
        println!(
            "{:.3}   {:.4} ± {:.4}   {:.4} ± {:.4}   {:.4}",
            p.splitting_ratio, p.normalized_variance, p.normalized_sem, p.raw_ratio, p.raw_ratio_sem, p.predicted_ratio
        );
    }
    Ok(())
}
