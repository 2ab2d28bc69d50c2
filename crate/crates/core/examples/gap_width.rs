//! Widens the gap around the position nearest the target splitting ratio
//! and shows the steering fading as region B loses atoms.
//!
//! `cargo run --release --example gap_width [subsets]`

use bec_steering::harness::{run_acquisition, Analysis, RunConfig};
use bec_steering::regions::Orientation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    if let Some(n) = std::env::args().nth(1) {
        config.acquisition.subsets = n.parse()?;
    }
    let dataset = run_acquisition(&config)?;
    let analysis = Analysis::new(&dataset)?;
    let (offset, reports) = analysis.sweep_gap_width(Orientation::Horizontal)?;
    println!("gap centred at offset {offset}");
    println!("width  N_A     N_B     E_epr(A->B)     floor");
    for r in reports {
        println!(
            "{:>5}  {:>6.1}  {:>6.1}  {:.3} ± {:.3}   {:.3}",
            r.gap_width().unwrap_or_default(),
            r.atoms_a,
            r.atoms_b,
            r.e_epr_ab.mean,
            r.e_epr_ab.sem,
            r.crosstalk.epr_ab
        );
    }
    Ok(())
}
