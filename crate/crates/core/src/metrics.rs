//! Error counting, stopping rules and binomial confidence intervals, plus the
//! Monte-Carlo loop that measures one operating point.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::channel::{apply_awgn, apply_fading, noise_sigma, rayleigh_gains, ChannelKind};
use crate::error::{Error, Result};
use crate::modem::Scheme;
use crate::pn_codes::{assign_user_codes, msequence_code, BinarySequence, ChipSequence, GeneratorPolynomial};
use crate::receiver::{compensate, receive_user, CsiMode, DespreadMode};
use crate::seed::derive;
use crate::spreading::{build_downlink, SpreadingConfig, DEFAULT_BIT_RATE};

/// Data bits per user in one simulated frame unless configured otherwise.
pub const DEFAULT_FRAME_BITS: usize = 960;

/// Hamming distance between two equal-length sequences, returned as
/// `(bits, bit_errors)`.
pub fn count_errors(tx: &BinarySequence, rx: &BinarySequence) -> Result<(u64, u64)> {
    if tx.len() != rx.len() {
        return Err(Error::LengthMismatch { left: tx.len(), right: rx.len() });
    }
    let errors = tx.bits().iter().zip(rx.bits()).filter(|(a, b)| a != b).count();
    Ok((tx.len() as u64, errors as u64))
}

/// Wilson score interval for a binomial proportion.
pub fn confidence_interval(errors: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::arg("trials", "must be positive"));
    }
    if errors > trials {
        return Err(Error::arg("errors", format!("{errors} errors exceed {trials} trials")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::arg("level", format!("{level} is not in (0, 1)")));
    }
    let z = Normal::standard().inverse_cdf(0.5 + level / 2.0);
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if errors == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if errors == trials { 1.0 } else { (centre + half).min(1.0) };
    Ok((low.min(p), high.max(p)))
}

/// When to stop accumulating frames at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoppingRule {
    /// Stop once this many bit errors are seen; `None` runs to `max_bits`.
    pub min_errors: Option<u64>,
    pub max_bits: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule { min_errors: Some(100), max_bits: 10_000_000 }
    }
}

impl StoppingRule {
    /// A fixed-length run of exactly `max_bits` bits.
    pub fn fixed(max_bits: u64) -> Self {
        StoppingRule { min_errors: None, max_bits }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_errors == Some(0) {
            return Err(Error::arg("min_errors", "must be positive"));
        }
        if self.max_bits == 0 {
            return Err(Error::arg("max_bits", "must be positive"));
        }
        Ok(())
    }
}

/// Everything except Eb/N0 and the stopping rule that defines a link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub scheme: Scheme,
    pub channel: ChannelKind,
    pub spreading_factor: usize,
    /// One code per user; user `i` transmits on `codes[i]`.
    pub codes: Vec<ChipSequence>,
    pub bit_rate: f64,
    pub doppler_hz: f64,
    pub csi: CsiMode,
    pub despread: DespreadMode,
    /// Data bits per user per frame. Each frame sees a fresh fading
    /// realization.
    pub frame_bits: usize,
    pub seed: u64,
}

impl LinkConfig {
    /// Shifted M-sequence codes from `poly`, default rate, perfect CSI, soft
    /// despreading, no Doppler and seed 0.
    pub fn new(
        scheme: Scheme,
        channel: ChannelKind,
        poly: &GeneratorPolynomial,
        spreading_factor: usize,
        users: usize,
    ) -> Result<Self> {
        let codes = assign_user_codes(&msequence_code(poly)?, users)?;
        let cfg = LinkConfig {
            scheme,
            channel,
            spreading_factor,
            codes,
            bit_rate: DEFAULT_BIT_RATE,
            doppler_hz: 0.0,
            csi: CsiMode::Perfect,
            despread: DespreadMode::Soft,
            frame_bits: DEFAULT_FRAME_BITS,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn users(&self) -> usize {
        self.codes.len()
    }

    /// Channel symbols per second, which is also the fading sample rate.
    pub fn symbol_rate(&self) -> Result<f64> {
        Ok(SpreadingConfig::new(self.spreading_factor, self.bit_rate)?.symbol_rate(self.scheme))
    }

    pub fn validate(&self) -> Result<()> {
        if self.codes.is_empty() {
            return Err(Error::arg("num_users", "at least one user is required"));
        }
        let period = self.codes[0].period();
        if self.spreading_factor == 0 || self.spreading_factor > period {
            return Err(Error::SpreadingFactor { sf: self.spreading_factor, period });
        }
        if self.frame_bits == 0 {
            return Err(Error::arg("frame_bits", "must be positive"));
        }
        if let CsiMode::BlockEstimate(0) = self.csi {
            return Err(Error::arg("csi", "block length must be at least 1"));
        }
        let fs = self.symbol_rate()?;
        if !(self.doppler_hz >= 0.0) || self.doppler_hz >= fs / 2.0 {
            return Err(Error::arg(
                "doppler_hz",
                format!("{} Hz must lie in [0, {}) for a {} Hz symbol rate", self.doppler_hz, fs / 2.0, fs),
            ));
        }
        Ok(())
    }

    /// Frame length rounded up to whole symbols per user.
    fn frame_unit(&self) -> usize {
        self.scheme.bits_per_symbol()
    }
}

/// One measured operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scheme: Scheme,
    pub channel: ChannelKind,
    pub ebn0_db: f64,
    pub spreading_factor: usize,
    pub users: usize,
    pub doppler_hz: f64,
    pub csi: CsiMode,
    pub despread: DespreadMode,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    /// Groups of `k` consecutive data bits of one user.
    pub symbols: u64,
    pub symbol_errors: u64,
    pub ser: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    /// No error was observed before `max_bits`.
    pub below_resolution: bool,
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> BinarySequence {
    let mut bits = Vec::with_capacity(n);
    while bits.len() < n {
        let word = rng.next_u64();
        let take = (n - bits.len()).min(64);
        bits.extend((0..take).map(|i| ((word >> i) & 1) as u8));
    }
    BinarySequence::new(bits)
}

/// Simulate frames through the full chain until `rule` is satisfied.
///
/// Every user transmits at power `1/K`, so with one user the symbol energy is
/// 1 and with `K` users the per-user `Eb/N0` is still `ebn0_db`; the only
/// difference between the two is multiple-access interference.
pub fn run_point(config: &LinkConfig, ebn0_db: f64, rule: StoppingRule) -> Result<BerRecord> {
    config.validate()?;
    rule.validate()?;
    if !ebn0_db.is_finite() {
        return Err(Error::arg("ebn0_db", "must be finite"));
    }
    let scheme = config.scheme;
    let k = scheme.bits_per_symbol();
    let sf = config.spreading_factor;
    let users = config.users();
    let unit = config.frame_unit();
    let frame_bits = config.frame_bits.div_ceil(unit) * unit;
    let fs = config.symbol_rate()?;
    let sigma = noise_sigma(ebn0_db, k, sf, 1.0 / users as f64)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut bits, mut bit_errors, mut symbols, mut symbol_errors) = (0u64, 0u64, 0u64, 0u64);
    let mut frame = 0u64;
    loop {
        let remaining = (rule.max_bits - bits) / users as u64;
        let per_user = (frame_bits as u64).min(remaining / unit as u64 * unit as u64) as usize;
        if per_user == 0 {
            break;
        }
        let tx: Vec<BinarySequence> = (0..users).map(|_| random_bits(&mut rng, per_user)).collect();
        let downlink = build_downlink(&tx, &config.codes, sf, scheme)?;
        let n = downlink.composite.len();

        let rx = match config.channel {
            ChannelKind::Awgn => apply_awgn(&downlink.composite, sigma, derive(&[config.seed, frame, 2])),
            ChannelKind::RayleighAwgn => {
                let fading = rayleigh_gains(n, config.doppler_hz, fs, derive(&[config.seed, frame, 1]))?;
                let faded = apply_fading(&downlink.composite, &fading)?;
                let noisy = apply_awgn(&faded, sigma, derive(&[config.seed, frame, 2]));
                compensate(&noisy, &fading, config.csi)?.frame
            }
        };

        for (user, sent) in tx.iter().enumerate() {
            let got = receive_user(&rx, user, &config.codes, sf, scheme, config.despread)?;
            let (b, e) = count_errors(sent, &got)?;
            bits += b;
            bit_errors += e;
            for (a, r) in sent.bits().chunks(k).zip(got.bits().chunks(k)) {
                symbols += 1;
                symbol_errors += (a != r) as u64;
            }
        }
        frame += 1;
        if rule.min_errors.is_some_and(|m| bit_errors >= m) {
            break;
        }
    }
    if bits == 0 {
        return Err(Error::arg(
            "max_bits",
            format!("{} bits cannot hold one {k}-bit symbol for each of {users} users", rule.max_bits),
        ));
    }

    let (ci_low, ci_high) = confidence_interval(bit_errors, bits, 0.95)?;
    Ok(BerRecord {
        scheme,
        channel: config.channel,
        ebn0_db,
        spreading_factor: sf,
        users,
        doppler_hz: config.doppler_hz,
        csi: config.csi,
        despread: config.despread,
        bits,
        bit_errors,
        ber: bit_errors as f64 / bits as f64,
        symbols,
        symbol_errors,
        ser: symbol_errors as f64 / symbols as f64,
        ci_low,
        ci_high,
        seed: config.seed,
        below_resolution: bit_errors == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> BinarySequence {
        BinarySequence::new(s.bytes().map(|c| c - b'0').collect())
    }

    fn qpsk_awgn() -> LinkConfig {
        LinkConfig::new(Scheme::Qpsk, ChannelKind::Awgn, &"x^3+x+1".parse().unwrap(), 1, 1).unwrap()
    }

    #[test]
    fn hand_counted_errors() {
        assert_eq!(count_errors(&seq("0110"), &seq("0010")).unwrap(), (4, 1));
        assert_eq!(count_errors(&seq("0110"), &seq("0110")).unwrap(), (4, 0));
        assert_eq!(count_errors(&seq("0110"), &seq("1001")).unwrap(), (4, 4));
        assert!(count_errors(&seq("01"), &seq("011")).is_err());
    }

    #[test]
    fn wilson_boundaries() {
        let (lo, hi) = confidence_interval(0, 100, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = confidence_interval(50, 100, 0.95).unwrap();
        assert!(((lo + hi) / 2.0 - 0.5).abs() < 1e-12);
        assert!((hi - lo - 0.19).abs() < 0.005, "{}", hi - lo);
        let (lo, hi) = confidence_interval(15615, 200_000, 0.95).unwrap();
        assert!(lo < 0.078649 && 0.078649 < hi);
        assert!(confidence_interval(3, 2, 0.95).is_err());
        assert!(confidence_interval(0, 0, 0.95).is_err());
    }

    #[test]
    fn stopping_rule_defaults() {
        let r = StoppingRule::default();
        assert_eq!((r.min_errors, r.max_bits), (Some(100), 10_000_000));
        assert!(StoppingRule { min_errors: Some(0), max_bits: 1 }.validate().is_err());
        assert!(StoppingRule::fixed(0).validate().is_err());
    }

    #[test]
    fn fixed_length_run_sends_exact_bits() {
        let r = run_point(&qpsk_awgn(), 4.0, StoppingRule::fixed(10_001)).unwrap();
        assert_eq!(r.bits, 10_000);
        assert_eq!(r.symbols, 5_000);
        assert_eq!(r.ber, r.bit_errors as f64 / r.bits as f64);
        assert!(r.ci_low <= r.ber && r.ber <= r.ci_high);
    }

    #[test]
    fn noiseless_point_is_below_resolution() {
        let r = run_point(&qpsk_awgn(), 300.0, StoppingRule::fixed(20_000)).unwrap();
        assert_eq!(r.bit_errors, 0);
        assert!(r.below_resolution);
        assert_eq!(r.ci_low, 0.0);
    }

    #[test]
    fn min_errors_stops_early() {
        let r = run_point(&qpsk_awgn(), 0.0, StoppingRule { min_errors: Some(50), max_bits: 10_000_000 }).unwrap();
        assert!(r.bit_errors >= 50);
        assert!(r.bits < 10_000);
    }

    #[test]
    fn reproducible_from_seed() {
        let mut cfg = qpsk_awgn();
        cfg.seed = 99;
        let a = run_point(&cfg, 1.0, StoppingRule::fixed(5000)).unwrap();
        assert_eq!(a, run_point(&cfg, 1.0, StoppingRule::fixed(5000)).unwrap());
        cfg.seed = 100;
        assert_ne!(a, run_point(&cfg, 1.0, StoppingRule::fixed(5000)).unwrap());
    }

    #[test]
    fn rejects_doppler_above_half_symbol_rate() {
        let mut cfg = qpsk_awgn();
        cfg.doppler_hz = 96_000.0;
        assert!(run_point(&cfg, 0.0, StoppingRule::fixed(100)).is_err());
    }
}
