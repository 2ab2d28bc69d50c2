//! Applies the four readout rotations to a squeezed state and prints the
//! moments of the measured z component.

use bec_steering::spin::{spin_moments, squeezed_state, tune_twist, MeasurementAxis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 200;
    let s = squeezed_state(n, tune_twist(n, -6.0)?.mu, None)?;
    println!("axis     <Sz>      Var(Sz)   norm");
    for axis in MeasurementAxis::ALL {
        let rotated = match axis.spin_rotation(n)? {
            Some(r) => r.apply(&s.state),
            None => s.state.clone(),
        };
        let m = spin_moments(&rotated);
        println!(
            "{:<7} {:>8.3} {:>10.3} {:.12}",
            axis.label(),
            m.mean[2],
            m.covariance[2][2],
            rotated.norm_sqr()
        );
    }
    Ok(())
}
