//! Bias of the inferred variance when the gain is fitted on the same
//! subset: dividing by m−2 is unbiased, m−1 is not.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use bec_steering::criteria::{inferred_variance, optimal_gain, residual_variance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho: f64 = 0.7;
    let truth = 1.0 - rho * rho;
    println!("   m   mean(m-2)/true  mean(m-1)/true");
    for m in [5usize, 10, 30, 70] {
        let (mut s2, mut s1) = (0.0, 0.0);
        let reps = 20_000;
        for _ in 0..reps {
            let (mut a, mut b) = (Vec::with_capacity(m), Vec::with_capacity(m));
            for _ in 0..m {
                let (u, v): (f64, f64) = (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                a.push(u);
                b.push(rho * u + truth.sqrt() * v);
            }
            let g = optimal_gain(&a, &b, 0.0)?.g;
            s2 += inferred_variance(&a, &b, g)?;
            s1 += residual_variance(&a, &b, g, 1)?;
        }
        println!("{m:>4}   {:.4}          {:.4}", s2 / reps as f64 / truth, s1 / reps as f64 / truth);
    }
    Ok(())
}
