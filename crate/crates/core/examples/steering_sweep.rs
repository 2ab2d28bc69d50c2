//! Simulates a dataset and prints the gap-position sweep.
//!
//! `cargo run --release --example steering_sweep [subsets] [seed] [coherent]`

use std::time::Instant;

use bec_steering::harness::{run_acquisition, Analysis, RunConfig};
use bec_steering::regions::Orientation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config = if args.iter().any(|a| a == "coherent") {
        RunConfig::coherent()
    } else {
        RunConfig::default()
    };
    let mut args = args.into_iter().filter(|a| a != "coherent");
    if let Some(n) = args.next() {
        config.acquisition.subsets = n.parse()?;
    }
    if let Some(s) = args.next() {
        config.seed = s.parse()?;
    }
    let t = Instant::now();
    let dataset = run_acquisition(&config)?;
    println!(
        "{} shots, mu = {:.5}, prepared state {:.2} dB ({:.1} s)",
        dataset.shots.len(),
        dataset.manifest.mu,
        dataset.manifest.wineland_db,
        t.elapsed().as_secs_f64()
    );
    let analysis = Analysis::new(&dataset)?;
    if let Some(w) = analysis.wineland() {
        println!("squeezing measured on the whole image: {:.2} dB", w.db);
    }
    println!("offset  ratio   E_ent          E_epr(A->B)    E_epr(B->A)    product B      floor");
    for r in analysis.sweep_gap_position(Orientation::Horizontal, 1)? {
        println!(
            "{:>5}   {:.3}   {:.3} ± {:.3}  {:.3} ± {:.3}  {:.3} ± {:.3}  {:.3} ± {:.3}  {:.3}",
            r.gap_offset().unwrap_or_default(),
            r.splitting_ratio,
            r.e_ent.mean,
            r.e_ent.sem,
            r.e_epr_ab.mean,
            r.e_epr_ab.sem,
            r.e_epr_ba.mean,
            r.e_epr_ba.sem,
            r.product_b.mean,
            r.product_b.sem,
            r.crosstalk.epr_ab,
        );
    }
    println!("total {:.1} s", t.elapsed().as_secs_f64());
    Ok(())
}
