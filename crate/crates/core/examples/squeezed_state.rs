//! Tunes the one-axis twist to a squeezing target and compares the exact
//! state with the closed-form large-N result.
//!
//! `cargo run --example squeezed_state [atoms] [target_db]`

use bec_steering::spin::{kitagawa_ueda, squeezed_state, tune_twist};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(590);
    let target: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(-3.8);
    let tuning = tune_twist(n, target)?;
    let s = squeezed_state(n, tuning.mu, None)?;
    let ku = kitagawa_ueda(n, tuning.mu);
    let m = &s.moments;
    println!("N = {n}, mu = {:.6}, Wineland {:.3} dB", tuning.mu, tuning.wineland_db);
    println!("mean spin        {:>10.3} {:>10.3} {:>10.3}", m.mean[0], m.mean[1], m.mean[2]);
    println!("Var(Sy) Var(Sz)  {:>10.3} {:>10.3}", m.covariance[1][1], m.covariance[2][2]);
    println!(
        "closed form: var_min {:.3}, var_max {:.3}, Wineland {:.3} dB",
        ku.var_min,
        ku.var_max,
        10.0 * ku.wineland(n).log10()
    );
    Ok(())
}
