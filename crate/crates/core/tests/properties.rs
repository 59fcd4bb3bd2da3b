use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linksim::channel::{apply_awgn, apply_fading, noise_sigma, rayleigh_gains, FadingRealization};
use linksim::correlation::{aperiodic_ccf, periodic_acf_profile, periodic_ccf};
use linksim::metrics::{confidence_interval, count_errors};
use linksim::modem::{demodulate_hard, modulate, soft_bit_metrics, Scheme, SymbolFrame};
use linksim::pn_codes::{
    assign_user_codes, generate_msequence, msequence_code, to_chip_sequence, BinarySequence, ChipSequence,
    GeneratorPolynomial,
};
use linksim::receiver::{compensate, receive_user, CsiMode, DespreadMode};
use linksim::spreading::{build_downlink, despread_hard, despread_soft, spread_bits};
use linksim::theory::{ber_awgn, ber_rayleigh_qpsk, db_to_linear, q_function, semianalytic_ber};

const PRIMITIVE: [&str; 8] =
    ["x^3+x+1", "x^4+x+1", "x^5+x^2+1", "x^6+x+1", "x^7+x+1", "x^8+x^4+x^3+x^2+1", "x^9+x^4+1", "x^10+x^3+1"];

fn poly(text: &str) -> GeneratorPolynomial {
    text.parse().unwrap()
}

fn scheme() -> impl Strategy<Value = Scheme> {
    prop::sample::select(Scheme::ALL.to_vec())
}

fn bits(len: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = BinarySequence> {
    prop::collection::vec(0u8..2, len).prop_map(BinarySequence::new)
}

fn chips(len: usize) -> impl Strategy<Value = ChipSequence> {
    prop::collection::vec(prop::sample::select(vec![-1i8, 1]), len).prop_map(|c| ChipSequence::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn msequence_period_and_balance_from_any_seed(idx in 0usize..PRIMITIVE.len(), raw_seed in 1u32..1024) {
        let p = poly(PRIMITIVE[idx]);
        let n = p.degree();
        let mut seed: Vec<u8> = (0..n).map(|i| (raw_seed >> (i % 10) & 1) as u8).collect();
        if seed.iter().all(|&b| b == 0) {
            seed[0] = 1;
        }
        let period = p.maximal_period();
        let seq = generate_msequence(&p, &seed, 2 * period).unwrap();
        prop_assert_eq!(seq.period(), period);
        let ones = seq.bits()[..period].iter().filter(|&&b| b == 1).count();
        prop_assert_eq!(ones, period.div_ceil(2));
        prop_assert_eq!(&seq.bits()[..period], &seq.bits()[period..]);
    }

    #[test]
    fn shifted_seed_gives_shifted_sequence(idx in 0usize..PRIMITIVE.len(), shift in 1usize..64) {
        let p = poly(PRIMITIVE[idx]);
        let period = p.maximal_period();
        let base = generate_msequence(&p, &linksim::pn_codes::unit_seed(p.degree()), period + shift + p.degree()).unwrap();
        let s = shift % period;
        let later = generate_msequence(&p, &base.bits()[s..s + p.degree()], period).unwrap();
        prop_assert_eq!(later.bits(), &base.bits()[s..s + period]);
    }

    #[test]
    fn ccf_symmetry(x in chips(15), y in chips(15), lag in -40i64..40) {
        let n = 15i64;
        prop_assert_eq!(
            periodic_ccf(&x, &y, lag).unwrap(),
            periodic_ccf(&y, &x, (-lag).rem_euclid(n)).unwrap()
        );
        prop_assert!(aperiodic_ccf(&x, &y, lag).abs() <= (n - lag.abs()).max(0));
    }

    #[test]
    fn normalized_acf_at_zero_is_one(x in (1usize..40).prop_flat_map(chips)) {
        prop_assert_eq!(periodic_acf_profile(&x).normalized(0), 1.0);
    }

    #[test]
    fn modem_round_trip(s in scheme(), groups in 1usize..200, seed in any::<u64>()) {
        let k = s.bits_per_symbol();
        let b = BinarySequence::new((0..groups * k).map(|i| ((seed >> (i % 64)) & 1) as u8 ^ (i % 3 == 0) as u8).collect());
        let frame = modulate(&b, s).unwrap();
        prop_assert_eq!(frame.len(), groups);
        prop_assert_eq!(demodulate_hard(&frame, s).unwrap(), b);
    }

    #[test]
    fn soft_metric_signs_follow_hard_decisions(s in scheme(), b in bits(96), sigma in 0.05f64..1.0, seed in any::<u64>()) {
        let k = s.bits_per_symbol();
        let len = b.len() / k * k;
        let b = BinarySequence::new(b.bits()[..len].to_vec());
        let noisy = apply_awgn(&modulate(&b, s).unwrap(), sigma, seed);
        let hard = demodulate_hard(&noisy, s).unwrap();
        let soft = soft_bit_metrics(&noisy, s).unwrap();
        for (m, &h) in soft.iter().zip(hard.bits()) {
            if m.abs() > 1e-12 {
                prop_assert_eq!(h, (*m < 0.0) as u8);
            }
        }
    }

    #[test]
    fn spreading_round_trip(b in bits(1..120), sf in 1usize..=7) {
        let code = msequence_code(&poly("x^3+x+1")).unwrap();
        let chip_bits = spread_bits(&b, &code, sf).unwrap();
        prop_assert_eq!(chip_bits.len(), b.len() * sf);
        prop_assert_eq!(&despread_hard(&chip_bits, &code, sf).unwrap(), &b);
        let metrics: Vec<f64> = chip_bits.bits().iter().map(|&c| 1.0 - 2.0 * c as f64).collect();
        prop_assert_eq!(&despread_soft(&metrics, &code, sf).unwrap(), &b);
    }

    #[test]
    fn single_user_chain_is_exact_without_noise(s in scheme(), sf in prop::sample::select(vec![1usize, 4, 7]), groups in 1usize..40, seed in any::<u64>()) {
        let k = s.bits_per_symbol();
        let n = groups * k;
        let b = BinarySequence::new((0..n).map(|i| ((seed.rotate_left(i as u32)) & 1) as u8).collect());
        let codes = assign_user_codes(&msequence_code(&poly("x^3+x+1")).unwrap(), 1).unwrap();
        let tx = build_downlink(std::slice::from_ref(&b), &codes, sf, s).unwrap();
        for mode in [DespreadMode::Soft, DespreadMode::Hard] {
            prop_assert_eq!(&receive_user(&tx.composite, 0, &codes, sf, s, mode).unwrap(), &b);
        }
    }

    #[test]
    fn composite_energy_is_unity(users in 1usize..=7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let codes = assign_user_codes(&msequence_code(&poly("x^3+x+1")).unwrap(), users).unwrap();
        let user_bits: Vec<BinarySequence> = (0..users)
            .map(|_| BinarySequence::new((0..700).map(|_| rng.random_range(0..2)).collect()))
            .collect();
        let tx = build_downlink(&user_bits, &codes, 7, Scheme::Qpsk).unwrap();
        let e = tx.composite.mean_energy();
        if users == 1 {
            prop_assert!((e - 1.0).abs() < 1e-12);
        } else {
            prop_assert!((e - 1.0).abs() < 0.1, "{}", e);
        }
    }

    #[test]
    fn perfect_csi_undoes_fading(seed in any::<u64>(), doppler in 0.0f64..5000.0) {
        let b = BinarySequence::new((0..256).map(|i| (i * 7 % 5 % 2) as u8).collect());
        let frame = modulate(&b, Scheme::Qam16).unwrap();
        let fading = rayleigh_gains(frame.len(), doppler, 48_000.0, seed).unwrap();
        let faded = apply_fading(&frame, &fading).unwrap();
        let back = compensate(&faded, &fading, CsiMode::Perfect).unwrap();
        for (a, b) in back.frame.symbols().iter().zip(frame.symbols()) {
            prop_assert!((a - b).norm() < 1e-9);
        }
        if doppler == 0.0 {
            let block = compensate(&faded, &fading, CsiMode::BlockEstimate(16)).unwrap();
            prop_assert_eq!(block, back);
        }
    }

    #[test]
    fn unity_gains_are_identity(s in scheme(), len in 1usize..50, block in 1usize..10) {
        let frame = SymbolFrame::new(s, vec![Complex64::new(0.3, -0.2); len]).unwrap();
        for mode in [CsiMode::Perfect, CsiMode::BlockEstimate(block)] {
            prop_assert_eq!(&compensate(&frame, &FadingRealization::unity(len), mode).unwrap().frame, &frame);
        }
    }

    #[test]
    fn noise_power_matches_ebn0(ebn0 in -5.0f64..20.0, sf in 1usize..=7, k in 2usize..=4) {
        let sigma = noise_sigma(ebn0, k, sf, 1.0).unwrap();
        let eb = sf as f64 / k as f64;
        prop_assert!((eb / (2.0 * sigma * sigma) - db_to_linear(ebn0)).abs() < 1e-9 * db_to_linear(ebn0));
    }

    #[test]
    fn q_is_symmetric_and_decreasing(x in -10.0f64..10.0, dx in 1e-3f64..1.0) {
        prop_assert!((q_function(x) + q_function(-x) - 1.0).abs() < 1e-10);
        prop_assert!(q_function(x + dx) <= q_function(x));
        if x > -5.0 {
            prop_assert!(q_function(x + dx) < q_function(x));
        }
    }

    #[test]
    fn theory_bounds_and_monotonicity(s in scheme(), db in 0.0f64..19.0) {
        let g = db_to_linear(db);
        let p = ber_awgn(s, g).unwrap();
        let k = s.bits_per_symbol() as f64;
        prop_assert!(p.ser / k <= p.ber + 1e-15 && p.ber <= p.ser && p.ser <= 1.0);
        let q = ber_awgn(s, db_to_linear(db + 1.0)).unwrap();
        prop_assert!(q.ber < p.ber && q.ser < p.ser);
        prop_assert!(ber_rayleigh_qpsk(db_to_linear(db + 1.0)).unwrap() < ber_rayleigh_qpsk(g).unwrap());
    }

    #[test]
    fn semianalytic_attenuation_hurts(s in scheme(), db in 0.0f64..12.0) {
        let b = BinarySequence::new((0..240).map(|i| (i * 5 % 7 % 2) as u8).collect());
        let frame = modulate(&b, s).unwrap();
        let g = db_to_linear(db);
        let clean = semianalytic_ber(&frame, s, g).unwrap();
        let weak = semianalytic_ber(&frame.scaled(Complex64::new(0.5, 0.0)), s, g).unwrap();
        prop_assert!(weak > clean);
    }

    #[test]
    fn error_counts_and_interval(a in bits(1..300), flips in prop::collection::vec(any::<bool>(), 300)) {
        let rx = BinarySequence::new(a.bits().iter().zip(&flips).map(|(&x, &f)| x ^ f as u8).collect());
        let (n, e) = count_errors(&a, &rx).unwrap();
        prop_assert_eq!(n, a.len() as u64);
        prop_assert_eq!(e, flips[..a.len()].iter().filter(|&&f| f).count() as u64);
        let (lo, hi) = confidence_interval(e, n, 0.95).unwrap();
        let p = e as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn bipolar_codes_have_unit_chips(idx in 0usize..PRIMITIVE.len()) {
        let p = poly(PRIMITIVE[idx]);
        let seq = generate_msequence(&p, &linksim::pn_codes::unit_seed(p.degree()), p.maximal_period()).unwrap();
        let code = to_chip_sequence(&seq).unwrap();
        prop_assert!(code.chips().iter().all(|&c| c == 1 || c == -1));
        prop_assert_eq!(code.chips().iter().map(|&c| c as i64).sum::<i64>(), -1);
    }
}
