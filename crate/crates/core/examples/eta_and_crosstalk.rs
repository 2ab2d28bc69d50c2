//! Effective coupling of each region and the crosstalk floors, per gap
//! position and width.

use bec_steering::criteria::crosstalk_floor;
use bec_steering::harness::RunConfig;
use bec_steering::regions::{eta_eff, make_pattern_masks, Orientation, PatternDescriptor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig::default();
    let density = config.cloud();
    let psf = config.imaging.psf;
    println!("width offset  eta_A  eta_B  floor_ent  floor_AB  floor_BA");
    for width in [1, 2, 4] {
        for offset in -4..=4 {
            let pattern = PatternDescriptor::Split {
                orientation: Orientation::Horizontal,
                gap_offset: offset,
                gap_width: width,
            };
            let m = make_pattern_masks(config.imaging.geometry, &pattern, density.center)?;
            let f = crosstalk_floor(&density, &psf, &m.a, &m.b)?;
            println!(
                "{width:>5} {offset:>6}  {:.3}  {:.3}  {:>9.4}  {:>8.4}  {:>8.4}",
                eta_eff(&density, &psf, &m.a)?,
                eta_eff(&density, &psf, &m.b)?,
                f.ent,
                f.epr_ab,
                f.epr_ba
            );
        }
    }
    Ok(())
}
