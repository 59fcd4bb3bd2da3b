//! Bit-level DSSS spreading and the synchronous multi-user downlink.
//!
//! Chips are consumed cyclically from the code: chip `j` of data bit `i` uses
//! code position `(i * SF + j) mod N_c`, so bit boundaries need not line up
//! with code periods.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modem::{modulate_bits, Scheme, SymbolFrame};
use crate::pn_codes::{BinarySequence, ChipSequence};

/// Default information rate per user, bits per second.
pub const DEFAULT_BIT_RATE: f64 = 384_000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadingConfig {
    pub spreading_factor: usize,
    pub bit_rate: f64,
}

impl SpreadingConfig {
    pub fn new(spreading_factor: usize, bit_rate: f64) -> Result<Self> {
        if spreading_factor == 0 {
            return Err(Error::arg("spreading_factor", "must be at least 1"));
        }
        if !(bit_rate > 0.0 && bit_rate.is_finite()) {
            return Err(Error::arg("bit_rate", "must be positive"));
        }
        Ok(Self { spreading_factor, bit_rate })
    }

    pub fn chip_rate(&self) -> f64 {
        self.spreading_factor as f64 * self.bit_rate
    }

    /// Modulation symbols per second when `scheme` carries the chips.
    pub fn symbol_rate(&self, scheme: Scheme) -> f64 {
        self.chip_rate() / scheme.bits_per_symbol() as f64
    }
}

impl Default for SpreadingConfig {
    fn default() -> Self {
        Self { spreading_factor: 1, bit_rate: DEFAULT_BIT_RATE }
    }
}

fn check_sf(code: &ChipSequence, sf: usize) -> Result<()> {
    if sf == 0 {
        return Err(Error::arg("spreading_factor", "must be at least 1"));
    }
    if sf > code.period() {
        return Err(Error::SpreadingFactor { sf, period: code.period() });
    }
    Ok(())
}

/// XOR every data bit with `sf` consecutive code chips.
pub fn spread_bits(bits: &BinarySequence, code: &ChipSequence, sf: usize) -> Result<BinarySequence> {
    check_sf(code, sf)?;
    let chips =
        bits.bits().iter().enumerate().flat_map(|(i, &b)| (0..sf).map(move |j| b ^ code.bit(i * sf + j))).collect();
    Ok(BinarySequence::new(chips))
}

/// Correlation receiver on per-chip soft values. A non-negative correlation
/// decides bit 0.
pub fn despread_soft(metrics: &[f64], code: &ChipSequence, sf: usize) -> Result<BinarySequence> {
    check_sf(code, sf)?;
    if !metrics.len().is_multiple_of(sf) {
        return Err(Error::Indivisible { len: metrics.len(), per: sf });
    }
    let bits = metrics
        .chunks_exact(sf)
        .enumerate()
        .map(|(i, window)| {
            let corr: f64 = window.iter().enumerate().map(|(j, m)| m * code.chip(i * sf + j) as f64).sum();
            (corr < 0.0) as u8
        })
        .collect();
    Ok(BinarySequence::new(bits))
}

/// XOR each received chip bit with the code, then majority vote per window.
/// Ties decide bit 0.
pub fn despread_hard(chip_bits: &BinarySequence, code: &ChipSequence, sf: usize) -> Result<BinarySequence> {
    check_sf(code, sf)?;
    if !chip_bits.len().is_multiple_of(sf) {
        return Err(Error::Indivisible { len: chip_bits.len(), per: sf });
    }
    let bits = chip_bits
        .bits()
        .chunks_exact(sf)
        .enumerate()
        .map(|(i, window)| {
            let ones = window.iter().enumerate().filter(|&(j, &c)| c ^ code.bit(i * sf + j) == 1).count();
            (2 * ones > sf) as u8
        })
        .collect();
    Ok(BinarySequence::new(bits))
}

/// Composite downlink signal plus the bits each user sent.
#[derive(Debug, Clone, PartialEq)]
pub struct DownlinkFrame {
    pub composite: SymbolFrame,
    pub user_bits: Vec<BinarySequence>,
}

impl DownlinkFrame {
    pub fn num_users(&self) -> usize {
        self.user_bits.len()
    }
}

/// Spread each user's bits with its code, modulate the chip stream, and sum
/// the users at equal power `1/K` so the composite keeps unit average energy.
pub fn build_downlink(
    users: &[BinarySequence],
    codes: &[ChipSequence],
    sf: usize,
    scheme: Scheme,
) -> Result<DownlinkFrame> {
    if users.is_empty() {
        return Err(Error::arg("users", "at least one user is required"));
    }
    if codes.len() != users.len() {
        return Err(Error::LengthMismatch { left: users.len(), right: codes.len() });
    }
    for (i, c) in codes.iter().enumerate() {
        if codes[..i].contains(c) {
            return Err(Error::DuplicateCodes);
        }
    }
    let n = users[0].len();
    if let Some(u) = users.iter().find(|u| u.len() != n) {
        return Err(Error::LengthMismatch { left: n, right: u.len() });
    }

    let scale = 1.0 / (users.len() as f64).sqrt();
    let mut composite: Vec<Complex64> = Vec::new();
    for (bits, code) in users.iter().zip(codes) {
        let chips = spread_bits(bits, code, sf)?;
        let frame = modulate_bits(chips.bits(), scheme)?;
        if composite.is_empty() {
            composite = vec![Complex64::default(); frame.len()];
        }
        for (acc, s) in composite.iter_mut().zip(frame.symbols()) {
            *acc += s * scale;
        }
    }
    Ok(DownlinkFrame { composite: SymbolFrame::from_parts(scheme, composite), user_bits: users.to_vec() })
}
