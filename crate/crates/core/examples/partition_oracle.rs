//! Exact moments of two weighted sub-ensembles of a small squeezed state,
//! checked against sampled shots.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bec_steering::spin::{assign_outcomes, partitioned_moments_exact, squeezed_state, ExcitationSampler};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 12;
    let s = squeezed_state(n, 0.15, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let wa: Vec<f64> = (0..n).map(|i| if i < n / 2 { rng.gen_range(0.6..1.0) } else { rng.gen_range(0.0..0.2) }).collect();
    let wb: Vec<f64> = wa.iter().map(|w| 1.0 - w).collect();
    let exact = partitioned_moments_exact(&s.state, &wa, &wb)?;
    let sampler = ExcitationSampler::new(&s.state);
    let shots = 200_000;
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..shots {
        let o = assign_outcomes(sampler.sample(&mut rng), n, &mut rng)?;
        let a: f64 = o.iter().zip(&wa).map(|(x, w)| x * w).sum();
        let b: f64 = o.iter().zip(&wb).map(|(x, w)| x * w).sum();
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    let m = shots as f64;
    let (ma, mb) = (sa / m, sb / m);
    println!("           exact      sampled");
    println!("Var(S_A)   {:.5}   {:.5}", exact.var_a, saa / m - ma * ma);
    println!("Var(S_B)   {:.5}   {:.5}", exact.var_b, sbb / m - mb * mb);
    println!("Cov        {:.5}   {:.5}", exact.cov_ab, sab / m - ma * mb);
    Ok(())
}
