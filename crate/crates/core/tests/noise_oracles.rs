use num_complex::Complex64;
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};
use xpm_core::{f0_closed, f0_exact, joint_phase_expectation, sample_noise, sample_stream, NoiseModel};

const DRAWS: usize = 1_000_000;

#[test]
fn sample_moments() {
    let model = NoiseModel::from_cell_variance(0.0, 0.01).unwrap();
    let mut rng = sample_stream(2024, 0);
    let (mut sa, mut sb, mut sp) = (0.0, 0.0, 0.0);
    let (mut qa, mut qb, mut qp) = (0.0, 0.0, 0.0);
    for _ in 0..DRAWS {
        let s = sample_noise(&model, &mut rng);
        sa += s.xi_a;
        sb += s.xi_b;
        sp += s.xi_p;
        qa += s.xi_a * s.xi_a;
        qb += s.xi_b * s.xi_b;
        qp += s.xi_p * s.xi_p;
    }
    let n = DRAWS as f64;
    // standard error of the mean is 0.1 / 1000
    for m in [sa / n, sb / n, sp / n / 2f64.sqrt()] {
        assert!(m.abs() < 3.0 * 0.1 / 1e3, "{m}");
    }
    // chi-square concentration: relative sd of the sample variance is sqrt(2/n) ≈ 1.4e-3
    assert!((qa / n - 0.01).abs() / 0.01 < 0.01);
    assert!((qb / n - 0.01).abs() / 0.01 < 0.01);
    assert!((qp / n - 0.02).abs() / 0.02 < 0.01);
}

#[test]
fn joint_expectation_matches_monte_carlo_at_zero_theta() {
    let (lambda, eta, sigma2) = (1.3, -0.7, 0.4);
    let exact = joint_phase_expectation(lambda, eta, 0.0, sigma2);
    let mut rng = sample_stream(99, 1);
    let sd = sigma2.sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut acc2 = 0.0;
    for _ in 0..DRAWS {
        let xs: f64 = StandardNormal.sample(&mut rng);
        let xp: f64 = StandardNormal.sample(&mut rng);
        let v = Complex64::from_polar(1.0, lambda * sd * xs + eta * sd * xp);
        acc += v;
        acc2 += v.re * v.re;
    }
    let n = DRAWS as f64;
    let mean = acc / n;
    let se = ((acc2 / n - mean.re * mean.re) / n).sqrt();
    assert!((mean.re - exact.re).abs() < 3.0 * se, "{mean} vs {exact}");
    assert!(mean.im.abs() < 3.0 * se);
    // and the product of marginals, exactly
    let marg = (-0.5 * lambda * lambda * sigma2).exp() * (-0.5 * eta * eta * sigma2).exp();
    assert!((exact.re - marg).abs() < 1e-15);
}

#[test]
fn f0_closed_and_exact_agree_in_small_angle_grid() {
    let worst_at_pivot = {
        let c = f0_closed(100.0, 0.01, 1e-6);
        let e = f0_exact(100.0, 0.01, 1e-6).unwrap();
        (c - e).abs() / e
    };
    assert!(worst_at_pivot <= 0.01, "{worst_at_pivot}");
    for alpha in [10.0, 100.0] {
        for theta in [0.005, 0.01, 0.02] {
            for s2 in [1e-6, 1e-4, 1e-3] {
                let c = f0_closed(alpha, theta, s2);
                let e = f0_exact(alpha, theta, s2).unwrap();
                assert!((c - e).abs() / e <= 0.05, "({alpha}, {theta}, {s2}): {c} vs {e}");
            }
        }
    }
}

#[test]
fn f0_exact_against_brute_force_average() {
    // plain Simpson over ±8σ on a fine grid
    let (alpha, theta, s2) = (30.0f64, 0.05f64, 2e-3f64);
    let sd = s2.sqrt();
    let f = |x: f64| {
        let g = (-0.5 * x * x / s2).exp() / (2.0 * std::f64::consts::PI * s2).sqrt();
        g * (-2.0 * alpha * alpha * (1.0 - (x + theta).cos())).exp()
    };
    let n = 400_000;
    let (a, b) = (-8.0 * sd, 8.0 * sd);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    let oracle = acc * h / 3.0;
    let got = f0_exact(alpha, theta, s2).unwrap();
    assert!((got - oracle).abs() / oracle < 1e-8, "{got} vs {oracle}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn f0_in_unit_interval(alpha in 0.0f64..100.0, theta in 0.0f64..0.05, s2 in 0.0f64..1e-3) {
        let c = f0_closed(alpha, theta, s2);
        let e = f0_exact(alpha, theta, s2).unwrap();
        prop_assert!(c > 0.0 && c <= 1.0);
        prop_assert!(e > 0.0 && e <= 1.0 + 1e-12);
    }

    #[test]
    fn f0_closed_monotone(alpha in 1.0f64..100.0, theta in 0.0f64..0.05, s2 in 0.0f64..1e-2, d in 1e-6f64..1e-2) {
        prop_assert!(f0_closed(alpha, 0.0, s2 + d) < f0_closed(alpha, 0.0, s2));
        prop_assert!(f0_closed(alpha, theta + d, s2) < f0_closed(alpha, theta, s2));
    }

    #[test]
    fn identical_streams_identical_samples(seed in any::<u64>(), idx in any::<u64>(), s2 in 0.0f64..1.0) {
        let m = NoiseModel::from_cell_variance(0.1, s2).unwrap();
        prop_assert_eq!(
            sample_noise(&m, &mut sample_stream(seed, idx)),
            sample_noise(&m, &mut sample_stream(seed, idx))
        );
    }
}
