//! Recoil blur of the imaging pulse and the saturation that gives a chosen
//! total resolution.

use bec_steering::imaging::{blur_rms, BlurBudget, PIXEL_SIZE, RB87_GAMMA, RB87_RECOIL_VELOCITY};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dt = 50e-6;
    println!("saturation  blur (px)");
    for s in [0.25, 0.5, 1.0, 2.0, 4.0] {
        println!("{s:>10.2}  {:.3}", blur_rms(RB87_GAMMA, s, RB87_RECOIL_VELOCITY, dt) / PIXEL_SIZE);
    }
    let b = BlurBudget::for_total(1.1, 1.4, PIXEL_SIZE, dt)?;
    println!(
        "optical {:.2} px + blur {:.3} px = {:.3} px at saturation {:.4}",
        b.optical_px, b.blur_px, b.total_px, b.saturation
    );
    Ok(())
}
