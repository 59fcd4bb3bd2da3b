//! Independent numerical oracles for the closed forms and the channel model.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use linksim::channel::{apply_awgn, noise_sigma, rayleigh_gains, ChannelKind};
use linksim::metrics::{confidence_interval, count_errors, run_point, LinkConfig, StoppingRule};
use linksim::modem::Scheme;
use linksim::pn_codes::{assign_user_codes, msequence_code, BinarySequence};
use linksim::receiver::{receive_user, DespreadMode};
use linksim::spreading::build_downlink;
use linksim::theory::{ber_awgn, ber_rayleigh_qpsk, db_to_linear, q_function};

/// Composite Simpson rule on `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn bessel_j0(x: f64) -> f64 {
    simpson(|t| (x * t.sin()).cos(), 0.0, PI, 2000) / PI
}

#[test]
fn bessel_quadrature_sanity() {
    assert!((bessel_j0(0.0) - 1.0).abs() < 1e-12);
    // first zero of J0
    assert!(bessel_j0(2.404_825_557_695_773).abs() < 1e-9);
}

#[test]
fn fading_autocorrelation_follows_clarke() {
    let fs = 10_000.0;
    let fd = 100.0;
    let n = 4096;
    let runs = 300;
    let lags = [0usize, 10, 24, 40, 55, 80, 120];
    let mut acc = vec![Complex64::default(); lags.len()];
    for seed in 0..runs {
        let g = rayleigh_gains(n, fd, fs, seed).unwrap();
        let g = g.gains();
        for (slot, &lag) in acc.iter_mut().zip(&lags) {
            let s: Complex64 = (0..n - lag).map(|t| g[t + lag] * g[t].conj()).sum();
            *slot += s / (n - lag) as f64;
        }
    }
    for (value, &lag) in acc.iter().zip(&lags) {
        let got = value.re / runs as f64;
        let want = bessel_j0(2.0 * PI * fd * lag as f64 / fs);
        assert!((got - want).abs() < 0.05, "lag {lag}: {got} vs J0 {want}");
    }
}

#[test]
fn rayleigh_closed_form_matches_quadrature() {
    for db in [0.0, 5.0, 10.0, 20.0] {
        let mean = db_to_linear(db);
        // average Q(sqrt(2 g)) over g ~ Exp(mean), with g = u^2
        let density = |u: f64| 2.0 * u * (-u * u / mean).exp() / mean;
        let numeric = simpson(|u| q_function(2f64.sqrt() * u) * density(u), 0.0, (60.0 * mean).sqrt(), 200_000);
        let closed = ber_rayleigh_qpsk(mean).unwrap();
        assert!((numeric / closed - 1.0).abs() < 1e-6, "{db} dB: {numeric} vs {closed}");
    }
    assert!((ber_rayleigh_qpsk(1.0).unwrap() - 0.146_447).abs() < 1e-6);
    assert!((ber_rayleigh_qpsk(10.0).unwrap() - 0.023_269).abs() < 1e-6);
}

/// 16-QAM over AWGN with a textbook mapper and slicer written independently
/// of the crate's modem.
#[test]
fn qam16_closed_form_against_brute_force() {
    let gray = |two: u32| -> f64 {
        match two {
            0b00 => -3.0,
            0b01 => -1.0,
            0b11 => 1.0,
            _ => 3.0,
        }
    };
    let slice = |x: f64| -> u32 {
        if x < -2.0 {
            0b00
        } else if x < 0.0 {
            0b01
        } else if x < 2.0 {
            0b11
        } else {
            0b10
        }
    };
    let gamma_b = db_to_linear(10.0);
    let es = 10.0; // unnormalised grid
    let sigma = (es / (4.0 * gamma_b) / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let symbols = 10_000_000u64;
    let mut errors = 0u64;
    for _ in 0..symbols {
        let label: u32 = rng.random_range(0..16);
        let i = gray(label >> 2) + sigma * rng.sample::<f64, _>(StandardNormal);
        let q = gray(label & 3) + sigma * rng.sample::<f64, _>(StandardNormal);
        errors += ((slice(i) << 2 | slice(q)) ^ label).count_ones() as u64;
    }
    let mc = errors as f64 / (4 * symbols) as f64;
    let closed = ber_awgn(Scheme::Qam16, gamma_b).unwrap().ber;
    assert!((closed - 1.754e-3).abs() < 1e-6);
    assert!((mc / closed - 1.0).abs() < 0.05, "{mc} vs {closed}");
}

#[test]
fn wilson_interval_coverage() {
    let mut rng = ChaCha8Rng::seed_from_u64(95);
    let mut covered = 0;
    for trial in 0..200 {
        let p = [0.01, 0.05, 0.2, 0.5][trial % 4];
        let n = 2000u64;
        let k = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
        let (lo, hi) = confidence_interval(k, n, 0.95).unwrap();
        covered += (lo <= p && p <= hi) as usize;
    }
    assert!(covered >= 180, "{covered}/200");
}

/// With SF equal to the code period a shifted code correlates to -1 against
/// the intended one, so the decision statistic is `-d` instead of `N d`.
#[test]
fn wrong_code_receiver_is_inverted_and_noisy() {
    let code = msequence_code(&"x^3+x+1".parse().unwrap()).unwrap();
    let codes = assign_user_codes(&code, 2).unwrap();
    let mut link = LinkConfig::new(Scheme::Qpsk, ChannelKind::Awgn, &"x^3+x+1".parse().unwrap(), 7, 1).unwrap();
    link.codes = vec![codes[0].clone()];
    link.seed = 3;
    let right = run_point(&link, 0.0, StoppingRule::fixed(100_000)).unwrap();

    // transmit on code 0, detect with code 1
    let wrong = {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let bits = BinarySequence::new((0..70_000).map(|_| rng.random_range(0..2)).collect());
        let tx = build_downlink(std::slice::from_ref(&bits), &codes[..1], 7, Scheme::Qpsk).unwrap();
        let sigma = noise_sigma(0.0, 2, 7, 1.0).unwrap();
        let rx = apply_awgn(&tx.composite, sigma, 5);
        let got = receive_user(&rx, 1, &codes, 7, Scheme::Qpsk, DespreadMode::Soft).unwrap();
        let (n, e) = count_errors(&bits, &got).unwrap();
        e as f64 / n as f64
    };
    let expected = 1.0 - q_function((2.0f64).sqrt() / 7.0);
    let sd = (expected * (1.0 - expected) / 70_000.0).sqrt();
    assert!((wrong - expected).abs() < 4.0 * sd, "{wrong} vs {expected}");
    assert!((right.ber - q_function(2f64.sqrt())).abs() < 4.0 * (0.08f64 * 0.92 / 100_000.0).sqrt());
}
