//! Randomized invariants spanning the field, drift and estimator layers.

use gibbs_core::drift::{
    build_const_witness, integrated_drift, kinetic_closed_form, kinetic_path_eval,
    parametric_drift, BumpProfile, DriftWitnessSpec,
};
use gibbs_core::estimator::batch_stats;
use gibbs_core::field::{sample_coupled, sample_field, SpectralField};
use gibbs_core::rational::{rat, rat_int, Rat};
use gibbs_core::ray::RaySpec;
use gibbs_core::sigma::sigma_alpha_n;
use gibbs_core::wick::taming_exponent;
use gibbs_core::{Interaction, ModelParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn critical_1d() -> ModelParams {
    ModelParams::new(1, rat(1, 2)).unwrap()
}

fn cubic_spec(m_cut: u32) -> DriftWitnessSpec {
    let f = Interaction::univariate(vec![(3, rat_int(1))]).unwrap();
    let ray = RaySpec::new(vec![rat_int(1)], vec![1]).unwrap();
    build_const_witness(&f, &critical_1d(), &ray, &rat_int(2), None, m_cut, 0.0).unwrap()
}

fn alpha_choices() -> Vec<Rat> {
    vec![rat(1, 3), rat(2, 5), rat(4, 9), rat(1, 2)]
}

proptest! {
    /// The Riemann path evaluation of the kinetic integral agrees with the
    /// closed form for any early-time block and any step split.
    #[test]
    fn kinetic_routes_agree(
        m_cut in 2u32..6,
        seed in 0u64..1_000,
        rep in 0u64..50,
        s_early in 1usize..7,
        s_late in 1usize..7,
    ) {
        let p = critical_1d();
        let spec = cubic_spec(m_cut);
        let y = sample_coupled(&p, 1, m_cut, m_cut, spec.eta(), seed, rep)
            .unwrap()
            .eta_part;
        let kc = kinetic_closed_form(&spec, &p, Some(&y)).unwrap();
        let kp = kinetic_path_eval(&spec, &p, Some(&y), (s_early, s_late)).unwrap();
        prop_assert!(kc >= 0.0);
        prop_assert!((kc - kp).abs() <= 1e-9 * (1.0 + kc.abs()));
    }

    /// Without an early-time piece the kinetic cost is exactly half the
    /// weighted square norm, and both routes agree for any split.
    #[test]
    fn parametric_kinetic_routes_agree(
        v in -2.0f64..2.0,
        s in -2.0f64..2.0,
        s_early in 1usize..5,
        s_late in 1usize..5,
    ) {
        let p = critical_1d();
        let profile = BumpProfile::build(1, 3, 1.0, 1.0, 1.0).unwrap();
        let spec = parametric_drift(&p, &profile, &[v], s).unwrap();
        let kc = kinetic_closed_form(&spec, &p, None).unwrap();
        let kp = kinetic_path_eval(&spec, &p, None, (s_early, s_late)).unwrap();
        prop_assert!(kc >= 0.0);
        prop_assert!((kc - kp).abs() <= 1e-12 * (1.0 + kc.abs()));
    }

    /// The integrated drift of a constant-shift witness is the total shift
    /// minus the early-time block, mode by mode, with no extra arithmetic.
    #[test]
    fn integrated_drift_is_exact_difference(
        m_cut in 2u32..6,
        seed in 0u64..1_000,
        rep in 0u64..20,
    ) {
        let p = critical_1d();
        let spec = cubic_spec(m_cut);
        let y = sample_coupled(&p, 1, m_cut, m_cut, spec.eta(), seed, rep)
            .unwrap()
            .eta_part;
        let out = integrated_drift(&spec, Some(&y)).unwrap();
        prop_assert_eq!(out.cutoff(), m_cut);
        let n = m_cut as i64;
        for l in -n..=n {
            let want = spec.total_shift().get_or_zero(0, &[l]) - y.get(0, &[l]);
            let got = out.get(0, &[l]);
            prop_assert_eq!(got, want);
        }
    }

    /// Componentwise accumulation scales exactly and never touches the other
    /// components.
    #[test]
    fn accumulate_component_is_per_mode(
        re in proptest::collection::vec(-3.0f64..3.0, 3),
        im in proptest::collection::vec(-3.0f64..3.0, 3),
        scale in -4.0f64..4.0,
    ) {
        let mut src = SpectralField::zero_with(1, 1, 3).unwrap();
        for (i, (&a, &b)) in re.iter().zip(&im).enumerate() {
            src.set_pair(0, &[i as i64 + 1], Complex64::new(a, b));
        }
        let mut dst = SpectralField::zero_with(1, 2, 5).unwrap();
        dst.accumulate_component(1, &src, 0, scale).unwrap();
        for l in -5i64..=5 {
            prop_assert_eq!(dst.get(0, &[l]), Complex64::new(0.0, 0.0));
            let want = src.get_or_zero(0, &[l]) * scale;
            prop_assert_eq!(dst.get(1, &[l]), want);
        }
    }

    /// Hermitian symmetry survives sampling, pair assignment and
    /// accumulation, so the grid restriction stays real.
    #[test]
    fn hermitian_symmetry_closed_under_ops(
        seed in 0u64..500,
        l_set in 1i64..4,
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
        scale in -2.0f64..2.0,
    ) {
        let p = critical_1d();
        let mut field = sample_field(&p, 1, 4, seed, 0);
        field.set_pair(0, &[l_set], Complex64::new(re, im));
        let other = sample_field(&p, 1, 3, seed.wrapping_add(1), 1);
        field.accumulate(&other, scale).unwrap();
        for l in 0i64..=4 {
            let a = field.get(0, &[l]);
            let b = field.get(0, &[-l]);
            prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
        }
        prop_assert!(field.grid_values(0, 9).is_ok());
    }

    /// The reported mean is the plain arithmetic mean and the standard error
    /// is finite and nonnegative; constants get (value, ~0).
    #[test]
    fn batch_stats_mean_and_se(
        values in proptest::collection::vec(-1e3f64..1e3, 2..300),
    ) {
        let (mean, se) = batch_stats(&values);
        let want = values.iter().sum::<f64>() / values.len() as f64;
        prop_assert_eq!(mean, want);
        prop_assert!(se.is_finite());
        prop_assert!(se >= 0.0);
    }

    #[test]
    fn batch_stats_constant_input(c in -1e3f64..1e3, n in 2usize..200) {
        let (mean, se) = batch_stats(&vec![c; n]);
        prop_assert!((mean - c).abs() <= 1e-12 * (1.0 + c.abs()));
        prop_assert!(se.abs() <= 1e-12 * (1.0 + c.abs()));
    }

    /// The taming exponent is never positive and tightens with K.
    #[test]
    fn taming_exponent_nonpositive(
        wl2 in -100.0f64..100.0,
        k in 0.0f64..5.0,
        extra in 0.0f64..5.0,
        b in 0.5f64..3.0,
    ) {
        let t1 = taming_exponent(wl2, k, b);
        let t2 = taming_exponent(wl2, k + extra, b);
        prop_assert!(t1 <= 0.0);
        prop_assert!(t2 <= t1);
    }

    /// The renormalization constant grows strictly with the cutoff at every
    /// admissible regularity.
    #[test]
    fn sigma_strictly_increasing(idx in 0usize..4, n in 1u32..200, gap in 1u32..50) {
        let alpha = alpha_choices()[idx].clone();
        let p = ModelParams::new(1, alpha).unwrap();
        prop_assert!(sigma_alpha_n(&p, n + gap) > sigma_alpha_n(&p, n));
    }
}
