//! Analytic criteria versus splitting ratio, without sampling.
//!
//! Usage: `model_prediction [squeezed|coherent] [gap_width]`

use bec_steering::criteria::ModelCriteria;
use bec_steering::harness::RunConfig;
use bec_steering::imaging::StateLabel;
use bec_steering::regions::{
    eta_eff, make_pattern_masks, OverlapProfile, Orientation, PairStatistics, PatternDescriptor,
    QuadratureGrid, DEFAULT_SUPERSAMPLING,
};
use bec_steering::spin::{coherent_state, spin_moments, squeezed_state};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let kind = args.next().unwrap_or_else(|| "squeezed".into());
    let width: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let config = RunConfig::default();
    let n = config.state.n_mean.round() as usize;
    let moments = match kind.as_str() {
        "coherent" => spin_moments(&coherent_state(n, std::f64::consts::FRAC_PI_2, 0.0)?),
        _ => squeezed_state(n, config.resolve_twist()?, None)?.moments,
    };
    let g = config.imaging.geometry;
    let density = config.cloud();
    let psf = config.imaging.psf;
    println!("offset ratio  E_ent E_epr_ab E_epr_ba product_a product_b");
    for offset in -4..=4 {
        let pattern = PatternDescriptor::Split {
            orientation: Orientation::Horizontal,
            gap_offset: offset,
            gap_width: width,
        };
        let masks = make_pattern_masks(g, &pattern, density.center)?;
        // both image frames weigh equally in a state near the equator
        let mut s = [0.0; 5];
        for state in StateLabel::BOTH {
            let grid = QuadratureGrid::new(&density, state, g, DEFAULT_SUPERSAMPLING);
            let pa = OverlapProfile::new(&grid, &psf, &masks.a);
            let pb = OverlapProfile::new(&grid, &psf, &masks.b);
            let p = PairStatistics::new(&grid, &pa, &pb);
            for (x, v) in s.iter_mut().zip([p.mean_a, p.mean_b, p.mean_aa, p.mean_bb, p.mean_ab]) {
                *x += v / 2.0;
            }
        }
        let stats = PairStatistics {
            mean_a: s[0],
            mean_b: s[1],
            mean_aa: s[2],
            mean_bb: s[3],
            mean_ab: s[4],
        };
        let eta_a = eta_eff(&density, &psf, &masks.a)?;
        let eta_b = eta_eff(&density, &psf, &masks.b)?;
        let m = ModelCriteria::predict(&moments, n as f64, &stats, eta_a, eta_b)?;
        println!(
            "{offset:>6} {:.3} {:>6.3} {:>8.3} {:>8.3} {:>9.3} {:>9.3}",
            s[0] / (s[0] + s[1]),
            m.e_ent,
            m.e_epr_ab,
            m.e_epr_ba,
            m.product_a,
            m.product_b
        );
    }
    Ok(())
}
