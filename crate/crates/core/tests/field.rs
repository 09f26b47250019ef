//! Spectral field sampling: symmetry, determinism, variance structure,
//! nested coupling, and Sobolev norms.

use gibbs_core::field::{sample_coupled, sample_field, SpectralField};
use gibbs_core::grid::next_smooth;
use gibbs_core::norms::h_s_norm_spectral;
use gibbs_core::rational::rat;
use gibbs_core::sigma::sigma_alpha_n;
use gibbs_core::ModelParams;
use num_complex::Complex64;

fn critical_1d() -> ModelParams {
    ModelParams::new(1, rat(1, 2)).unwrap()
}

#[test]
fn smooth_sizes() {
    assert_eq!(next_smooth(1), 1);
    assert_eq!(next_smooth(7), 8);
    assert_eq!(next_smooth(9), 9);
    assert_eq!(next_smooth(11), 12);
    assert_eq!(next_smooth(13), 15);
    assert_eq!(next_smooth(721), 729);
    assert_eq!(next_smooth(1537), 1600);
}

#[test]
fn hermitian_symmetry_and_real_grid() {
    let p = critical_1d();
    let field = sample_field(&p, 2, 6, 42, 0);
    for comp in 0..2 {
        for l in -6i64..=6 {
            let a = field.get(comp, &[l]);
            let b = field.get(comp, &[-l]);
            assert!((a - b.conj()).norm() < 1e-15);
        }
        assert!(field.get(comp, &[0]).im.abs() < 1e-15);
        let vals = field.grid_values(comp, next_smooth(13)).unwrap();
        assert!(vals.iter().all(|v| v.is_finite()));
    }
}

#[test]
fn seed_determinism() {
    let p = critical_1d();
    let a = sample_field(&p, 1, 8, 7, 3);
    let b = sample_field(&p, 1, 8, 7, 3);
    let c = sample_field(&p, 1, 8, 7, 4);
    let d = sample_field(&p, 1, 8, 8, 3);
    let mut same = true;
    let mut diff_replica = false;
    let mut diff_seed = false;
    for l in -8i64..=8 {
        same &= a.get(0, &[l]) == b.get(0, &[l]);
        diff_replica |= a.get(0, &[l]) != c.get(0, &[l]);
        diff_seed |= a.get(0, &[l]) != d.get(0, &[l]);
    }
    assert!(same);
    assert!(diff_replica);
    assert!(diff_seed);
}

#[test]
fn mode_variances_and_component_independence() {
    let p = critical_1d();
    let samples = 20_000usize;
    let weight = |l: f64| (1.0 + l * l).powf(-0.5);
    let mut sums = [0.0f64; 4];
    let mut sqs = [0.0f64; 4];
    let mut cross = 0.0;
    let mut point_sq = 0.0;
    let m = next_smooth(2 * 2 * 2 + 1);
    for rep in 0..samples {
        let f = sample_field(&p, 2, 2, 99, rep as u64);
        let obs = [
            f.get(0, &[1]).re,
            f.get(0, &[1]).im,
            f.get(0, &[2]).re,
            f.get(0, &[0]).re,
        ];
        for (i, o) in obs.iter().enumerate() {
            sums[i] += o;
            sqs[i] += o * o;
        }
        cross += f.get(0, &[1]).re * f.get(1, &[1]).re;
        let vals = f.grid_values(0, m).unwrap();
        point_sq += vals[0] * vals[0];
    }
    let n = samples as f64;
    let targets = [
        weight(1.0) / 2.0,
        weight(1.0) / 2.0,
        weight(2.0) / 2.0,
        1.0,
    ];
    for i in 0..4 {
        let mean_sq = sqs[i] / n;
        // Var of a squared Gaussian estimate: 2 target^2 / n.
        let se = (2.0 * targets[i] * targets[i] / n).sqrt();
        assert!(
            (mean_sq - targets[i]).abs() < 5.0 * se,
            "slot {i}: {mean_sq} vs {}",
            targets[i]
        );
    }
    let se_cross = (targets[0] * targets[0] / n).sqrt();
    assert!((cross / n).abs() < 5.0 * se_cross);

    let sigma = sigma_alpha_n(&p, 2);
    let se_pt = (2.0 * sigma * sigma / n).sqrt();
    assert!(
        (point_sq / n - sigma).abs() < 5.0 * se_pt,
        "E[Y(x)^2] = {} vs sigma = {sigma}",
        point_sq / n
    );
}

#[test]
fn pointwise_covariance_matches_the_kernel() {
    let p = critical_1d();
    let n_cut = 3u32;
    let m = next_smooth((2 * n_cut + 1) as usize);
    let samples = 20_000usize;
    let mut acc = [0.0f64; 3];
    for rep in 0..samples {
        let f = sample_field(&p, 1, n_cut, 1234, rep as u64);
        let vals = f.grid_values(0, m).unwrap();
        for (slot, &off) in [1usize, 2, 3].iter().enumerate() {
            acc[slot] += vals[0] * vals[off];
        }
    }
    for (slot, &off) in [1usize, 2, 3].iter().enumerate() {
        let x = off as f64 / m as f64;
        let mut want = 0.0;
        for l in -(n_cut as i64)..=n_cut as i64 {
            let w = (1.0 + (l * l) as f64).powf(-0.5);
            want += w * (2.0 * std::f64::consts::PI * l as f64 * x).cos();
        }
        let got = acc[slot] / samples as f64;
        let sigma = sigma_alpha_n(&p, n_cut);
        let se = (2.0 * sigma * sigma / samples as f64).sqrt();
        assert!((got - want).abs() < 5.0 * se, "offset {off}: {got} vs {want}");
    }
}

#[test]
fn coupled_pair_structure() {
    let p = critical_1d();
    let (n_cut, m_cut, eta) = (6u32, 3u32, 0.5f64);
    let samples = 20_000usize;
    let mut num = 0.0;
    let mut den_a = 0.0;
    let mut den_b = 0.0;
    for rep in 0..samples {
        let cs = sample_coupled(&p, 1, n_cut, m_cut, eta, 77, rep as u64).unwrap();
        assert_eq!(cs.eta_part.cutoff(), m_cut);
        assert_eq!(cs.eta_part.side(), (2 * m_cut + 1) as usize);
        let a = cs.full.get(0, &[2]).re;
        let b = cs.eta_part.get(0, &[2]).re;
        num += a * b;
        den_a += a * a;
        den_b += b * b;
    }
    let corr = num / (den_a.sqrt() * den_b.sqrt());
    let se = (1.0 - eta) / (samples as f64).sqrt();
    assert!(
        (corr - eta.sqrt()).abs() < 5.0 * se,
        "corr {corr} vs {}",
        eta.sqrt()
    );

    let cs = sample_coupled(&p, 1, 6, 6, 1.0 - 1e-12, 5, 0).unwrap();
    for l in -6i64..=6 {
        let diff = (cs.full.get(0, &[l]) - cs.eta_part.get(0, &[l])).norm();
        assert!(diff < 1e-5, "l={l}: {diff}");
    }

    // Euclidean ball, not the box: corner modes vanish in both fields.
    let p2 = ModelParams::new(2, rat(1, 1)).unwrap();
    let cs = sample_coupled(&p2, 1, 3, 2, 0.5, 9, 0).unwrap();
    assert_eq!(cs.eta_part.get(0, &[2, 2]).norm(), 0.0);
    assert_eq!(cs.full.get(0, &[3, 3]).norm(), 0.0);
    assert!(cs.full.get(0, &[2, 2]).norm() > 0.0);
}

#[test]
fn sobolev_norms_on_single_modes() {
    let p = critical_1d();
    let mut f = SpectralField::zero(&p, 1, 4).unwrap();
    let rho = 0.8;
    f.set_pair(0, &[3], Complex64::new(rho, 0.0));
    for &s in &[-0.5f64, 0.0, 1.25] {
        let want = (2.0 * rho * rho * 10.0f64.powf(s)).sqrt();
        let got = h_s_norm_spectral(&f, 0, s);
        assert!((got - want).abs() < 1e-12, "s={s}: {got} vs {want}");
    }

    let mut g = SpectralField::zero(&p, 1, 2).unwrap();
    g.set_pair(0, &[1], Complex64::new(0.3, -0.4));
    g.set_pair(0, &[0], Complex64::new(1.5, 0.0));
    let l2 = h_s_norm_spectral(&g, 0, 0.0);
    let want = (1.5f64 * 1.5 + 2.0 * 0.25).sqrt();
    assert!((l2 - want).abs() < 1e-12);
}
