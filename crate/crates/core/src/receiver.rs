//! Coherent detection: channel compensation, demapping, despreading.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channel::FadingRealization;
use crate::error::{Error, Result};
use crate::modem::{demodulate_hard, soft_bit_metrics, Scheme, SymbolFrame};
use crate::pn_codes::{BinarySequence, ChipSequence};
use crate::spreading::{despread_hard, despread_soft};

/// Gains below this magnitude are treated as erasures instead of inverted.
pub const ERASURE_THRESHOLD: f64 = 1e-12;

/// How the receiver learns the channel gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsiMode {
    /// True gain of every sample.
    Perfect,
    /// True gain of the first sample of each block, held for the whole block.
    BlockEstimate(usize),
}

impl fmt::Display for CsiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CsiMode::Perfect => f.write_str("perfect"),
            CsiMode::BlockEstimate(n) => write!(f, "block:{n}"),
        }
    }
}

impl FromStr for CsiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "perfect" {
            return Ok(CsiMode::Perfect);
        }
        let len = s
            .strip_prefix("block:")
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| Error::arg("csi", format!("expected `perfect` or `block:<len>`, got `{s}`")))?;
        if len == 0 {
            return Err(Error::arg("csi", "block length must be at least 1"));
        }
        Ok(CsiMode::BlockEstimate(len))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DespreadMode {
    #[default]
    Soft,
    Hard,
}

impl fmt::Display for DespreadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DespreadMode::Soft => "soft",
            DespreadMode::Hard => "hard",
        })
    }
}

impl FromStr for DespreadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "soft" => Ok(DespreadMode::Soft),
            "hard" => Ok(DespreadMode::Hard),
            _ => Err(Error::arg("despread", format!("expected `soft` or `hard`, got `{s}`"))),
        }
    }
}

/// Equalised samples and the positions that could not be equalised.
#[derive(Debug, Clone, PartialEq)]
pub struct Compensated {
    pub frame: SymbolFrame,
    pub erased: Vec<bool>,
}

/// Zero-forcing with perfect or block-held channel knowledge.
pub fn compensate(received: &SymbolFrame, realization: &FadingRealization, mode: CsiMode) -> Result<Compensated> {
    if received.len() != realization.len() {
        return Err(Error::LengthMismatch { left: received.len(), right: realization.len() });
    }
    let gains = realization.gains();
    let estimate = |t: usize| -> Complex64 {
        match mode {
            CsiMode::Perfect => gains[t],
            CsiMode::BlockEstimate(len) => gains[t - t % len],
        }
    };
    let mut erased = vec![false; received.len()];
    let symbols = received
        .symbols()
        .iter()
        .enumerate()
        .map(|(t, &r)| {
            let g = estimate(t);
            if g.norm() < ERASURE_THRESHOLD {
                erased[t] = true;
                r
            } else {
                r / g
            }
        })
        .collect();
    Ok(Compensated { frame: SymbolFrame::new(received.scheme(), symbols)?, erased })
}

/// Recover one user's bits from a (compensated) downlink frame.
pub fn receive_user(
    frame: &SymbolFrame,
    user_index: usize,
    codes: &[ChipSequence],
    sf: usize,
    scheme: Scheme,
    mode: DespreadMode,
) -> Result<BinarySequence> {
    let code = codes
        .get(user_index)
        .ok_or_else(|| Error::arg("user_index", format!("user {user_index} out of range for {} codes", codes.len())))?;
    match mode {
        DespreadMode::Soft => despread_soft(&soft_bit_metrics(frame, scheme)?, code, sf),
        DespreadMode::Hard => despread_hard(&demodulate_hard(frame, scheme)?, code, sf),
    }
}
