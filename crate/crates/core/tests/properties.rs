use num_complex::Complex64;
use proptest::prelude::*;
use statrs::distribution::{Binomial, Discrete};

use bec_steering::criteria::{inferred_variance, optimal_gain, residual_variance};
use bec_steering::imaging::Geometry;
use bec_steering::regions::{make_pattern_masks, make_split_masks, Orientation, PatternDescriptor};
use bec_steering::spin::{coherent_state, rotate, spin_moments, DickeState};

fn state(amps: &[(f64, f64)]) -> DickeState {
    let v = amps.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
    DickeState::from_unnormalized(v).unwrap()
}

fn axis(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

proptest! {
    #[test]
    fn rotation_preserves_norm_and_length(
        amps in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..40)
            .prop_filter("nonzero", |v| v.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3)),
        theta in 0.0..std::f64::consts::PI,
        phi in 0.0..std::f64::consts::TAU,
        angle in -6.3..6.3f64,
    ) {
        let s = state(&amps);
        let r = rotate(&s, axis(theta, phi), angle).unwrap();
        prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-9);
        let (m0, m1) = (spin_moments(&s), spin_moments(&r));
        let len = |m: [f64; 3]| m.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((len(m0.mean) - len(m1.mean)).abs() < 1e-7);
    }

    #[test]
    fn rotation_inverts(
        amps in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..25)
            .prop_filter("nonzero", |v| v.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3)),
        theta in 0.0..std::f64::consts::PI,
        phi in 0.0..std::f64::consts::TAU,
        angle in -3.2..3.2f64,
    ) {
        let s = state(&amps);
        let n = axis(theta, phi);
        let back = rotate(&rotate(&s, n, angle).unwrap(), n, -angle).unwrap();
        prop_assert!((back.overlap(&s) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn split_masks_are_disjoint(horizontal in any::<bool>(), center in 0i64..49, width in 1usize..12) {
        let o = if horizontal { Orientation::Horizontal } else { Orientation::Vertical };
        if let Ok(m) = make_split_masks(Geometry::default(), o, center, width) {
            prop_assert!(m.a.is_disjoint(&m.b));
        }
    }

    #[test]
    fn library_patterns_are_disjoint(cx in 18.0..31.0f64, cy in 18.0..31.0f64, dx in -2.0..2.0f64) {
        for p in PatternDescriptor::library() {
            let m = make_pattern_masks(Geometry::default(), &p, [[cx, cy], [cx + dx, cy]]).unwrap();
            prop_assert!(m.a.is_disjoint(&m.b), "{}", p.name());
        }
    }

    #[test]
    fn inferred_variance_is_shift_invariant_and_quadratic(
        pairs in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 5..60),
        shift in -100.0..100.0f64,
        scale in 0.1..10.0f64,
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let Ok(g) = optimal_gain(&a, &b, 0.0) else { return Ok(()) };
        let v = inferred_variance(&a, &b, g.g).unwrap();
        let a2: Vec<f64> = a.iter().map(|x| scale * x + shift).collect();
        let b2: Vec<f64> = b.iter().map(|x| scale * x - shift).collect();
        let v2 = inferred_variance(&a2, &b2, g.g).unwrap();
        prop_assert!((v2 - scale * scale * v).abs() <= 1e-8 * (1.0 + v2.abs()));
    }

    #[test]
    fn optimal_gain_minimizes_residual(
        pairs in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 5..60),
        dg in -2.0..2.0f64,
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let Ok(g) = optimal_gain(&a, &b, 0.0) else { return Ok(()) };
        let best = residual_variance(&a, &b, g.g, 1).unwrap();
        let other = residual_variance(&a, &b, g.g + dg, 1).unwrap();
        prop_assert!(best <= other + 1e-9);
    }
}

#[test]
fn equatorial_coherent_state_is_binomial() {
    let n = 40;
    let s = coherent_state(n, std::f64::consts::FRAC_PI_2, 0.7).unwrap();
    let b = Binomial::new(0.5, n as u64).unwrap();
    for (k, p) in s.probabilities().iter().enumerate() {
        assert!((p - b.pmf(k as u64)).abs() < 1e-12, "k = {k}");
    }
}
