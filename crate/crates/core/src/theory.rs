//! Closed-form and semianalytic error-rate references.
//!
//! AWGN expressions are the usual coherent Gray-coded ones:
//!
//! * QPSK: `Pb = Q(sqrt(2 g))`
//! * square M-QAM: `Pb ~ (4/k)(1 - 1/sqrt M) Q(sqrt(3 k g / (M - 1)))`
//! * M-PSK: `Ps ~ 2 Q(sqrt(2 k g) sin(pi/M))`, `Pb ~ Ps / k`
//!
//! where `g` is Eb/N0 as a linear ratio.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use statrs::function::erf::erfc;

use crate::channel::ChannelKind;
use crate::error::{Error, Result};
use crate::modem::{Scheme, SymbolFrame};
use crate::pn_codes::BinarySequence;

/// Gaussian upper tail `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryPoint {
    pub scheme: Scheme,
    pub channel: ChannelKind,
    /// Eb/N0, linear.
    pub gamma_b: f64,
    pub ber: f64,
    pub ser: f64,
}

fn check_gamma(gamma_b: f64) -> Result<()> {
    if !(gamma_b >= 0.0) {
        return Err(Error::arg("gamma_b", format!("Eb/N0 must be non-negative, got {gamma_b}")));
    }
    Ok(())
}

/// Bit and symbol error probability in AWGN.
pub fn ber_awgn(scheme: Scheme, gamma_b: f64) -> Result<TheoryPoint> {
    check_gamma(gamma_b)?;
    let k = scheme.bits_per_symbol() as f64;
    let m = scheme.order() as f64;
    let (ber, ser) = match scheme {
        Scheme::Qpsk => {
            let pb = q_function((2.0 * gamma_b).sqrt());
            (pb, pb * (2.0 - pb))
        }
        Scheme::Qam16 => {
            let q = q_function((3.0 * k * gamma_b / (m - 1.0)).sqrt());
            let per_axis = 2.0 * (1.0 - 1.0 / m.sqrt()) * q;
            (4.0 / k * (1.0 - 1.0 / m.sqrt()) * q, per_axis * (2.0 - per_axis))
        }
        Scheme::Psk8 => {
            let ps = (2.0 * q_function((2.0 * k * gamma_b).sqrt() * (PI / m).sin())).min(1.0);
            (ps / k, ps)
        }
    };
    Ok(TheoryPoint { scheme, channel: ChannelKind::Awgn, gamma_b, ber, ser })
}

/// Average bit error probability of coherent QPSK over unit-power flat
/// Rayleigh fading with mean Eb/N0 `gamma_b_mean`.
pub fn ber_rayleigh_qpsk(gamma_b_mean: f64) -> Result<f64> {
    check_gamma(gamma_b_mean)?;
    Ok(0.5 * (1.0 - (gamma_b_mean / (1.0 + gamma_b_mean)).sqrt()))
}

/// QPSK symbol error probability over flat Rayleigh fading. Both quadrature
/// bits share the fade, so this is not `1 - (1 - Pb)^2`.
pub fn ser_rayleigh_qpsk(gamma_b_mean: f64) -> Result<f64> {
    check_gamma(gamma_b_mean)?;
    if gamma_b_mean == 0.0 {
        return Ok(0.75);
    }
    let g = gamma_b_mean;
    let mu = (g / (1.0 + g)).sqrt();
    Ok((1.0 - mu) - 0.25 * (1.0 - 4.0 / PI * mu * ((1.0 + g) / g).sqrt().atan()))
}

/// Reference point for `scheme` over `channel`. Rayleigh fading has a closed
/// form for QPSK only.
pub fn theory_point(scheme: Scheme, channel: ChannelKind, gamma_b: f64) -> Result<TheoryPoint> {
    match (channel, scheme) {
        (ChannelKind::Awgn, _) => ber_awgn(scheme, gamma_b),
        (ChannelKind::RayleighAwgn, Scheme::Qpsk) => Ok(TheoryPoint {
            scheme,
            channel,
            gamma_b,
            ber: ber_rayleigh_qpsk(gamma_b)?,
            ser: ser_rayleigh_qpsk(gamma_b)?,
        }),
        (ChannelKind::RayleighAwgn, _) => {
            Err(Error::arg("scheme", format!("no Rayleigh closed form for {scheme}; only qpsk is supported")))
        }
    }
}

// One decision interval on a rectangular axis.
struct Region {
    lo: f64,
    hi: f64,
    label: usize,
}

// Per-axis (regions, levels indexed by axis label, label bits per axis).
fn axis_layout(scheme: Scheme) -> (Vec<Region>, Vec<f64>, usize) {
    match scheme {
        Scheme::Qpsk => (
            vec![Region { lo: f64::NEG_INFINITY, hi: 0.0, label: 1 }, Region { lo: 0.0, hi: f64::INFINITY, label: 0 }],
            vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
            1,
        ),
        Scheme::Qam16 => {
            let s = 1.0 / 10f64.sqrt();
            (
                vec![
                    Region { lo: f64::NEG_INFINITY, hi: -2.0 * s, label: 0b00 },
                    Region { lo: -2.0 * s, hi: 0.0, label: 0b01 },
                    Region { lo: 0.0, hi: 2.0 * s, label: 0b11 },
                    Region { lo: 2.0 * s, hi: f64::INFINITY, label: 0b10 },
                ],
                vec![-3.0 * s, -s, 3.0 * s, 1.0 * s],
                2,
            )
        }
        Scheme::Psk8 => unreachable!("8PSK has no rectangular layout"),
    }
}

// Expected label-bit errors when a noiseless coordinate `v` that should carry
// `label` is perturbed by N(0, sigma^2).
fn axis_bit_errors(regions: &[Region], v: f64, label: usize, sigma: f64) -> f64 {
    regions
        .iter()
        .filter(|r| r.label != label)
        .map(|r| {
            let p = q_function((r.lo - v) / sigma) - q_function((r.hi - v) / sigma);
            p * (r.label ^ label).count_ones() as f64
        })
        .sum()
}

const PSK8_GRAY: [usize; 8] = [0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100];

/// Semianalytic BER of a noiseless received frame, taking the intended
/// labels to be the hard decisions on that frame.
pub fn semianalytic_ber(noiseless_rx: &SymbolFrame, scheme: Scheme, gamma_b: f64) -> Result<f64> {
    let reference = crate::modem::demodulate_hard(noiseless_rx, scheme)?;
    semianalytic_ber_with_reference(noiseless_rx, &reference, scheme, gamma_b)
}

/// Semianalytic BER of a noiseless received frame against the transmitted
/// bits.
///
/// For each sample the probability that Gaussian noise (variance fixed by
/// `gamma_b` at unit symbol energy) moves it into every other decision
/// region is weighted by the label Hamming distance. Rectangular schemes use
/// exact per-axis interval probabilities; 8PSK uses the two nearest angular
/// boundaries.
pub fn semianalytic_ber_with_reference(
    noiseless_rx: &SymbolFrame,
    tx_bits: &BinarySequence,
    scheme: Scheme,
    gamma_b: f64,
) -> Result<f64> {
    if noiseless_rx.is_empty() {
        return Err(Error::arg("noiseless_rx", "frame is empty"));
    }
    if noiseless_rx.scheme() != scheme {
        return Err(Error::SchemeMismatch { frame: noiseless_rx.scheme().to_string(), expected: scheme.to_string() });
    }
    if !(gamma_b > 0.0) {
        return Err(Error::arg("gamma_b", "semianalytic estimate needs a positive Eb/N0"));
    }
    let k = scheme.bits_per_symbol();
    if tx_bits.len() != noiseless_rx.len() * k {
        return Err(Error::LengthMismatch { left: noiseless_rx.len() * k, right: tx_bits.len() });
    }
    let sigma = (1.0 / (2.0 * k as f64 * gamma_b)).sqrt();
    let labels = tx_bits.bits().chunks_exact(k).map(|g| g.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize));

    let mut bit_errors = 0.0;
    match scheme {
        Scheme::Qpsk | Scheme::Qam16 => {
            let (regions, _, per_axis) = axis_layout(scheme);
            let mask = (1 << per_axis) - 1;
            for (r, label) in noiseless_rx.symbols().iter().zip(labels) {
                // QPSK: first bit on Q, second on I. 16-QAM: high pair on I.
                let (i_label, q_label) = match scheme {
                    Scheme::Qpsk => (label & 1, label >> 1),
                    _ => (label >> per_axis, label & mask),
                };
                bit_errors += axis_bit_errors(&regions, r.re, i_label, sigma);
                bit_errors += axis_bit_errors(&regions, r.im, q_label, sigma);
            }
        }
        Scheme::Psk8 => {
            let half = PI / 8.0;
            for (r, label) in noiseless_rx.symbols().iter().zip(labels) {
                let pos = PSK8_GRAY.iter().position(|&l| l == label).expect("3-bit label");
                let centre = 2.0 * PI * pos as f64 / 8.0;
                let offset = (r.arg() - centre + PI).rem_euclid(2.0 * PI) - PI;
                let radius = r.norm();
                let up = radius * (half - offset).sin();
                let down = radius * (half + offset).sin();
                let next = PSK8_GRAY[(pos + 1) % 8];
                let prev = PSK8_GRAY[(pos + 7) % 8];
                bit_errors += q_function(up / sigma) * (label ^ next).count_ones() as f64;
                bit_errors += q_function(down / sigma) * (label ^ prev).count_ones() as f64;
            }
        }
    }
    Ok(bit_errors / (noiseless_rx.len() * k) as f64)
}
