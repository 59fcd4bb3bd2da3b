//! AWGN calibrated to Eb/N0 and flat Rayleigh fading with Doppler.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::modem::SymbolFrame;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default carrier used to turn terminal speed into Doppler.
pub const DEFAULT_CARRIER_HZ: f64 = 2.0e9;

/// Oscillators in the sum-of-sinusoids fading generator.
pub const FADING_OSCILLATORS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Awgn,
    RayleighAwgn,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::RayleighAwgn => "rayleigh",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" => Ok(ChannelKind::Awgn),
            "rayleigh" | "rayleigh_awgn" => Ok(ChannelKind::RayleighAwgn),
            _ => Err(Error::arg("channel", format!("unknown channel `{s}` (awgn, rayleigh)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub ebn0_db: f64,
    pub doppler_hz: f64,
    pub sample_rate_hz: f64,
    pub rng_seed: u64,
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(Error::arg("sample_rate_hz", "must be positive"));
        }
        if !(self.doppler_hz >= 0.0) {
            return Err(Error::arg("doppler_hz", "must be non-negative"));
        }
        if self.doppler_hz >= self.sample_rate_hz / 2.0 {
            return Err(Error::arg(
                "doppler_hz",
                format!("{} Hz is not below half the sample rate ({} Hz)", self.doppler_hz, self.sample_rate_hz),
            ));
        }
        if self.ebn0_db.is_nan() {
            return Err(Error::arg("ebn0_db", "is NaN"));
        }
        Ok(())
    }
}

/// Per-component noise standard deviation for one symbol-rate sample.
///
/// Each data bit spans `sf` chips and each symbol carries `k` chips, so
/// `Eb = (sf / k) * Es` and `sigma = sqrt(Eb / (2 * 10^(ebn0_db / 10)))`.
pub fn noise_sigma(ebn0_db: f64, bits_per_symbol: usize, sf: usize, symbol_energy: f64) -> Result<f64> {
    if bits_per_symbol == 0 {
        return Err(Error::arg("bits_per_symbol", "must be positive"));
    }
    if sf == 0 {
        return Err(Error::arg("spreading_factor", "must be positive"));
    }
    if !(symbol_energy > 0.0) {
        return Err(Error::arg("symbol_energy", "must be positive"));
    }
    if ebn0_db.is_nan() {
        return Err(Error::arg("ebn0_db", "is NaN"));
    }
    let eb = sf as f64 / bits_per_symbol as f64 * symbol_energy;
    let n0 = eb / 10f64.powf(ebn0_db / 10.0);
    Ok((n0 / 2.0).sqrt())
}

/// Add complex Gaussian noise with variance `sigma^2` per component.
pub fn apply_awgn(frame: &SymbolFrame, sigma: f64, seed: u64) -> SymbolFrame {
    if sigma == 0.0 {
        return frame.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = frame
        .symbols()
        .iter()
        .map(|s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            s + Complex64::new(re, im) * sigma
        })
        .collect();
    SymbolFrame::from_parts(frame.scheme(), symbols)
}

/// Maximum Doppler shift `v * f_c / c` for a speed in km/h.
pub fn doppler_from_speed(speed_kmph: f64, carrier_hz: f64) -> Result<f64> {
    if !(speed_kmph >= 0.0) {
        return Err(Error::arg("speed_kmph", "must be non-negative"));
    }
    if !(carrier_hz > 0.0) {
        return Err(Error::arg("carrier_hz", "must be positive"));
    }
    Ok(speed_kmph / 3.6 * carrier_hz / SPEED_OF_LIGHT)
}

/// Complex channel gain for each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingRealization {
    gains: Vec<Complex64>,
}

impl FadingRealization {
    pub fn new(gains: Vec<Complex64>) -> Self {
        Self { gains }
    }

    /// A channel that leaves every sample untouched.
    pub fn unity(n: usize) -> Self {
        Self { gains: vec![Complex64::new(1.0, 0.0); n] }
    }

    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    pub fn mean_power(&self) -> f64 {
        self.gains.iter().map(|g| g.norm_sqr()).sum::<f64>() / self.gains.len().max(1) as f64
    }
}

// resync interval for the incremental phasor rotation
const RESYNC: usize = 512;

/// Clarke-model flat fading as a sum of complex sinusoids.
///
/// `g[t] = M^{-1/2} sum_m exp(j (2 pi f_d t / f_s cos a_m + p_m))` with
/// arrival angles `a_m = pi (m + u) / M` spread over a half circle, a random
/// offset `u` and independent uniform phases `p_m`. The angles give distinct
/// Doppler frequencies and an autocorrelation close to `J0(2 pi f_d tau)`.
pub fn rayleigh_gains(n_samples: usize, doppler_hz: f64, sample_rate_hz: f64, seed: u64) -> Result<FadingRealization> {
    ChannelSpec { kind: ChannelKind::RayleighAwgn, ebn0_db: 0.0, doppler_hz, sample_rate_hz, rng_seed: seed }
        .validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = FADING_OSCILLATORS;
    let offset: f64 = rng.random();
    let norm = 1.0 / (m as f64).sqrt();
    let w = 2.0 * PI * doppler_hz / sample_rate_hz;
    let (omega, phase): (Vec<f64>, Vec<f64>) = (0..m)
        .map(|i| {
            let angle = PI * (i as f64 + offset) / m as f64;
            (w * angle.cos(), 2.0 * PI * rng.random::<f64>())
        })
        .unzip();
    let step: Vec<Complex64> = omega.iter().map(|&o| Complex64::from_polar(1.0, o)).collect();

    let mut gains = Vec::with_capacity(n_samples);
    let mut cur = vec![Complex64::default(); m];
    for t in 0..n_samples {
        if t % RESYNC == 0 {
            for ((c, &o), &p) in cur.iter_mut().zip(&omega).zip(&phase) {
                *c = Complex64::from_polar(1.0, o * t as f64 + p);
            }
        }
        gains.push(cur.iter().sum::<Complex64>() * norm);
        for (c, s) in cur.iter_mut().zip(&step) {
            *c *= s;
        }
    }
    Ok(FadingRealization { gains })
}

/// Elementwise multiply by the channel gains.
pub fn apply_fading(frame: &SymbolFrame, realization: &FadingRealization) -> Result<SymbolFrame> {
    if frame.len() != realization.len() {
        return Err(Error::LengthMismatch { left: frame.len(), right: realization.len() });
    }
    let symbols = frame.symbols().iter().zip(realization.gains()).map(|(s, g)| s * g).collect();
    Ok(SymbolFrame::from_parts(frame.scheme(), symbols))
}
