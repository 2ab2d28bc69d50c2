//! Criteria for the built-in library of region shapes.
//!
//! `cargo run --release --example region_patterns [subsets]`

use bec_steering::harness::{run_acquisition, Analysis, RunConfig};
use bec_steering::regions::PatternDescriptor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    if let Some(n) = std::env::args().nth(1) {
        config.acquisition.subsets = n.parse()?;
    }
    let dataset = run_acquisition(&config)?;
    let (reports, failed) = Analysis::new(&dataset)?.sweep_patterns(&PatternDescriptor::library());
    println!("{:<22} ratio  E_ent           floor   E_epr(A->B)     floor", "pattern");
    for r in reports {
        println!(
            "{:<22} {:.3}  {:.3} ± {:.3}   {:.3}   {:.3} ± {:.3}   {:.3}",
            r.label, r.splitting_ratio, r.e_ent.mean, r.e_ent.sem, r.crosstalk.ent, r.e_epr_ab.mean, r.e_epr_ab.sem, r.crosstalk.epr_ab
        );
    }
    for d in failed {
        println!("skipped {}: {}", d.pattern, d.message);
    }
    Ok(())
}
