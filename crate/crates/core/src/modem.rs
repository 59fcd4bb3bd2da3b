//! Gray-labelled QPSK, 16-QAM and 8PSK mapping with coherent demapping.
//!
//! Symbols are complex-baseband points at unit average energy. Labels are
//! read most significant bit first from the bit stream. The tables are fixed:
//!
//! | scheme | labelling |
//! |--------|-----------|
//! | QPSK   | `b1b0`: 00 -> +1+j, 01 -> -1+j, 11 -> -1-j, 10 -> +1-j (over sqrt 2) |
//! | 16-QAM | `b3b2` on I, `b1b0` on Q, each axis 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3 (over sqrt 10) |
//! | 8PSK   | 000, 001, 011, 010, 110, 111, 101, 100 counter-clockwise from angle 0 |

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pn_codes::BinarySequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Scheme {
    Qpsk,
    Qam16,
    Psk8,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Qpsk, Scheme::Qam16, Scheme::Psk8];

    pub fn order(self) -> usize {
        1 << self.bits_per_symbol()
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Scheme::Qpsk => 2,
            Scheme::Qam16 => 4,
            Scheme::Psk8 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Qpsk => "qpsk",
            Scheme::Qam16 => "16qam",
            Scheme::Psk8 => "8psk",
        }
    }

    pub fn constellation(self) -> &'static Constellation {
        static TABLES: OnceLock<[Constellation; 3]> = OnceLock::new();
        let tables = TABLES.get_or_init(|| Scheme::ALL.map(Constellation::build));
        &tables[self as usize]
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "qpsk" | "4qam" | "qam4" => Ok(Scheme::Qpsk),
            "16qam" | "qam16" => Ok(Scheme::Qam16),
            "8psk" | "psk8" => Ok(Scheme::Psk8),
            _ => Err(Error::arg("scheme", format!("unknown modulation `{s}` (qpsk, 16qam, 8psk)"))),
        }
    }
}

impl TryFrom<String> for Scheme {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Scheme> for String {
    fn from(s: Scheme) -> String {
        s.name().to_string()
    }
}

/// Points indexed by label.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    scheme: Scheme,
    points: Vec<Complex64>,
}

const QAM16_AXIS: [f64; 4] = [-3.0, -1.0, 3.0, 1.0]; // indexed by the 2-bit axis label
const PSK8_GRAY: [usize; 8] = [0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100];

impl Constellation {
    fn build(scheme: Scheme) -> Self {
        let points = match scheme {
            Scheme::Qpsk => (0..4)
                .map(|label| {
                    let i = if label & 0b01 == 0 { 1.0 } else { -1.0 };
                    let q = if label & 0b10 == 0 { 1.0 } else { -1.0 };
                    Complex64::new(i, q) * FRAC_1_SQRT_2
                })
                .collect(),
            Scheme::Qam16 => {
                let scale = 1.0 / 10f64.sqrt();
                (0..16).map(|label| Complex64::new(QAM16_AXIS[label >> 2], QAM16_AXIS[label & 0b11]) * scale).collect()
            }
            Scheme::Psk8 => {
                let mut pts = vec![Complex64::default(); 8];
                for (pos, &label) in PSK8_GRAY.iter().enumerate() {
                    pts[label] = Complex64::from_polar(1.0, 2.0 * PI * pos as f64 / 8.0);
                }
                pts
            }
        };
        Self { scheme, points }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Point for each label `0..M`.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.min((a - b).norm());
            }
        }
        best
    }

    /// Nearest point by Euclidean distance; ties go to the lowest label.
    pub fn nearest(&self, r: Complex64) -> usize {
        let mut best = (0, f64::INFINITY);
        for (label, p) in self.points.iter().enumerate() {
            let d = (r - p).norm_sqr();
            if d < best.1 {
                best = (label, d);
            }
        }
        best.0
    }
}

/// Complex samples tagged with the scheme that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    scheme: Scheme,
    symbols: Vec<Complex64>,
}

impl SymbolFrame {
    /// Rejects NaN or infinite samples.
    pub fn new(scheme: Scheme, symbols: Vec<Complex64>) -> Result<Self> {
        if symbols.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::arg("symbols", "frame contains non-finite samples"));
        }
        Ok(Self { scheme, symbols })
    }

    pub(crate) fn from_parts(scheme: Scheme, symbols: Vec<Complex64>) -> Self {
        Self { scheme, symbols }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Complex64> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn mean_energy(&self) -> f64 {
        if self.symbols.is_empty() {
            return 0.0;
        }
        self.symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.symbols.len() as f64
    }

    /// Every sample multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_parts(self.scheme, self.symbols.iter().map(|s| s * factor).collect())
    }

    fn expect_scheme(&self, scheme: Scheme) -> Result<()> {
        if self.scheme != scheme {
            return Err(Error::SchemeMismatch { frame: self.scheme.to_string(), expected: scheme.to_string() });
        }
        Ok(())
    }
}

/// Map bits to symbols, `k` bits per symbol, most significant first.
/// The bit count must be a multiple of `k`; nothing is padded.
pub fn modulate(bits: &BinarySequence, scheme: Scheme) -> Result<SymbolFrame> {
    modulate_bits(bits.bits(), scheme)
}

pub(crate) fn modulate_bits(bits: &[u8], scheme: Scheme) -> Result<SymbolFrame> {
    let k = scheme.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(Error::Indivisible { len: bits.len(), per: k });
    }
    let table = scheme.constellation();
    let symbols = bits
        .chunks_exact(k)
        .map(|group| table.point(group.iter().fold(0, |acc, &b| (acc << 1) | b as usize)))
        .collect();
    Ok(SymbolFrame::from_parts(scheme, symbols))
}

/// Minimum-distance hard decisions.
pub fn demodulate_hard(frame: &SymbolFrame, scheme: Scheme) -> Result<BinarySequence> {
    frame.expect_scheme(scheme)?;
    let table = scheme.constellation();
    let k = scheme.bits_per_symbol();
    let mut bits = Vec::with_capacity(frame.len() * k);
    for &r in frame.symbols() {
        let label = table.nearest(r);
        bits.extend((0..k).rev().map(|j| ((label >> j) & 1) as u8));
    }
    Ok(BinarySequence::new(bits))
}

/// One real metric per bit; a positive value favours bit 0.
///
/// QPSK returns the quadrature component for the first bit of each pair and
/// the in-phase component for the second. The other schemes return the
/// max-log value `min |r - p1|^2 - min |r - p0|^2` over points whose label
/// carries a 1 or 0 in that position.
pub fn soft_bit_metrics(frame: &SymbolFrame, scheme: Scheme) -> Result<Vec<f64>> {
    frame.expect_scheme(scheme)?;
    let k = scheme.bits_per_symbol();
    let mut out = Vec::with_capacity(frame.len() * k);
    match scheme {
        Scheme::Qpsk => {
            for r in frame.symbols() {
                out.push(r.im);
                out.push(r.re);
            }
        }
        _ => {
            let pts = scheme.constellation().points();
            let mut dist = vec![0.0; pts.len()];
            for &r in frame.symbols() {
                for (d, p) in dist.iter_mut().zip(pts) {
                    *d = (r - p).norm_sqr();
                }
                for j in (0..k).rev() {
                    let (mut d0, mut d1) = (f64::INFINITY, f64::INFINITY);
                    for (label, &d) in dist.iter().enumerate() {
                        if (label >> j) & 1 == 0 {
                            d0 = d0.min(d);
                        } else {
                            d1 = d1.min(d);
                        }
                    }
                    out.push(d1 - d0);
                }
            }
        }
    }
    Ok(out)
}
