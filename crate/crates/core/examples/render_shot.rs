//! Renders one shot of a coherent state and prints the |2⟩ frame as text.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bec_steering::harness::RunConfig;
use bec_steering::imaging::{render_shot, sample_positions, StateLabel};
use bec_steering::spin::{assign_outcomes, coherent_state, sample_excitation_count};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig::coherent();
    let g = config.imaging.geometry;
    let density = config.cloud();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 590;
    let k = sample_excitation_count(&coherent_state(n, std::f64::consts::FRAC_PI_2, 0.0)?, &mut rng);
    let outcomes = assign_outcomes(k, n, &mut rng)?;
    let mut two = sample_positions(&density, k, StateLabel::Two, &mut rng).into_iter();
    let mut one = sample_positions(&density, n - k, StateLabel::One, &mut rng).into_iter();
    let positions: Vec<[f64; 2]> = outcomes
        .iter()
        .map(|&o| if o > 0.0 { two.next() } else { one.next() }.expect("enough positions"))
        .collect();
    let shot = render_shot(&positions, &outcomes, &config.imaging.psf, &config.imaging.noise, g, &mut rng)?;
    let img = &shot.images;
    println!(
        "k = {k}; frame totals |2⟩ {:.1}, |1⟩ {:.1}; kernel mass lost at the edges {:.3}",
        img.total(StateLabel::Two),
        img.total(StateLabel::One),
        shot.lost_mass
    );
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for row in img.frame2.chunks(g.width) {
        let line: String = row
            .iter()
            .map(|&v| shades[((v.max(0.0) / 3.0 * 9.0) as usize).min(9)])
            .collect();
        println!("{line}");
    }
    Ok(())
}
