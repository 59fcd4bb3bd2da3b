//! Maximal-length (M-sequence) spreading codes from binary LFSRs.
//!
//! A generator polynomial `H(x) = x^n + h_{n-1} x^{n-1} + ... + h_1 x + 1`
//! drives the Fibonacci register whose output obeys
//! `a_{k+n} = h_{n-1} a_{k+n-1} + ... + h_1 a_{k+1} + a_k` over GF(2),
//! i.e. `H` is the characteristic polynomial of the recurrence. For
//! `x^3 + x + 1` this is `a_k = a_{k-2} ^ a_{k-3}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported register length. Maximality is checked by walking the
/// full state cycle, so this bounds that walk at 2^24 - 1 steps.
pub const MAX_DEGREE: usize = 24;

/// Feedback polynomial of a binary LFSR. The constant term is always 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorPolynomial {
    degree: usize,
    // bit i holds h_i for i in 0..=degree; bits 0 and `degree` are always set
    mask: u32,
}

impl GeneratorPolynomial {
    /// Build from the exponents with nonzero coefficients. The constant term
    /// is added if missing.
    pub fn from_exponents(exponents: &[usize]) -> Result<Self> {
        let degree = exponents.iter().copied().max().ok_or_else(|| Error::Polynomial("no terms".into()))?;
        if degree == 0 {
            return Err(Error::Polynomial("degree must be at least 1".into()));
        }
        if degree > MAX_DEGREE {
            return Err(Error::Polynomial(format!("degree {degree} exceeds {MAX_DEGREE}")));
        }
        let mut mask = 1u32;
        for &e in exponents {
            if e != 0 && mask & (1 << e) != 0 {
                return Err(Error::Polynomial(format!("repeated term x^{e}")));
            }
            mask |= 1 << e;
        }
        Ok(Self { degree, mask })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient `h_i`.
    pub fn coefficient(&self, i: usize) -> bool {
        i <= self.degree && self.mask & (1 << i) != 0
    }

    /// Exponents with nonzero coefficients, highest first.
    pub fn exponents(&self) -> Vec<usize> {
        (0..=self.degree).rev().filter(|&i| self.coefficient(i)).collect()
    }

    /// Period 2^n - 1 of the M-sequence this polynomial generates when it is
    /// primitive.
    pub fn maximal_period(&self) -> usize {
        (1usize << self.degree) - 1
    }

    fn feedback_mask(&self) -> u32 {
        self.mask & ((1u32 << self.degree) - 1)
    }
}

impl fmt::Display for GeneratorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

/// Accepts `x^5+x^2+1` style sums or the exponent shorthand `5,2,0`.
impl FromStr for GeneratorPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Polynomial("empty polynomial".into()));
        }
        let parse_exp = |t: &str| t.parse::<usize>().map_err(|_| Error::Polynomial(format!("bad term `{t}` in `{s}`")));
        let exponents = if text.contains('x') || text.contains('X') {
            text.split('+')
                .map(|term| match term {
                    "1" => Ok(0),
                    "x" | "X" => Ok(1),
                    t => {
                        let rest = t
                            .strip_prefix('x')
                            .or_else(|| t.strip_prefix('X'))
                            .ok_or_else(|| Error::Polynomial(format!("bad term `{t}` in `{s}`")))?;
                        parse_exp(rest.strip_prefix('^').unwrap_or(rest))
                    }
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(',').map(parse_exp).collect::<Result<Vec<_>>>()?
        };
        Self::from_exponents(&exponents)
    }
}

/// A sequence of bits in {0, 1}.
///
/// `period` is the repetition period of the generating process. It equals the
/// length for data that has no periodic structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    bits: Vec<u8>,
    period: usize,
}

impl BinarySequence {
    /// Aperiodic data bits. Any nonzero value is read as 1.
    pub fn new(bits: Vec<u8>) -> Self {
        let bits: Vec<u8> = bits.into_iter().map(|b| (b != 0) as u8).collect();
        let period = bits.len().max(1);
        Self { bits, period }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn period(&self) -> usize {
        self.period
    }
}

impl From<Vec<u8>> for BinarySequence {
    fn from(bits: Vec<u8>) -> Self {
        Self::new(bits)
    }
}

/// One period of a bipolar spreading code, chips in {-1, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChipSequence {
    chips: Vec<i8>,
}

impl ChipSequence {
    /// Fails if any chip is not +-1 or the sequence is empty.
    pub fn new(chips: Vec<i8>) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::arg("chips", "a spreading code needs at least one chip"));
        }
        if let Some(c) = chips.iter().find(|&&c| c != 1 && c != -1) {
            return Err(Error::arg("chips", format!("chip value {c} is not +-1")));
        }
        Ok(Self { chips })
    }

    pub fn chips(&self) -> &[i8] {
        &self.chips
    }

    /// Code period N_c.
    pub fn period(&self) -> usize {
        self.chips.len()
    }

    /// Chip at position `i` taken cyclically.
    pub fn chip(&self, i: usize) -> i8 {
        self.chips[i % self.chips.len()]
    }

    /// Bit view of chip `i` under the 0 -> +1, 1 -> -1 map.
    pub fn bit(&self, i: usize) -> u8 {
        (self.chip(i) < 0) as u8
    }

    /// Cyclic left shift: element i of the result is element i + shift here.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.chips.len();
        let chips = (0..n).map(|i| self.chips[(i + shift) % n]).collect();
        Self { chips }
    }
}

struct Lfsr {
    state: u32,
    taps: u32,
    top: u32,
}

impl Lfsr {
    fn new(poly: &GeneratorPolynomial, state: u32) -> Self {
        Self { state, taps: poly.feedback_mask(), top: (poly.degree() - 1) as u32 }
    }

    /// Emit a_k and advance the window (a_k .. a_{k+n-1}) by one.
    fn step(&mut self) -> u8 {
        let out = (self.state & 1) as u8;
        let fb = (self.state & self.taps).count_ones() & 1;
        self.state = (self.state >> 1) | (fb << self.top);
        out
    }
}

fn pack_seed(poly: &GeneratorPolynomial, seed: &[u8]) -> Result<u32> {
    if seed.len() != poly.degree() {
        return Err(Error::SeedLength { expected: poly.degree(), got: seed.len() });
    }
    let state = seed.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (((b != 0) as u32) << i));
    if state == 0 {
        return Err(Error::ZeroSeed);
    }
    Ok(state)
}

/// Number of steps before the register returns to `state`.
fn cycle_length(poly: &GeneratorPolynomial, state: u32) -> usize {
    let mut reg = Lfsr::new(poly, state);
    let mut steps = 0usize;
    loop {
        reg.step();
        steps += 1;
        if reg.state == state {
            return steps;
        }
    }
}

/// Run the LFSR for `length` outputs. `seed` holds the initial register
/// contents `(a_0, ..., a_{n-1})`, which are also the first `n` outputs.
pub fn generate_msequence(poly: &GeneratorPolynomial, seed: &[u8], length: usize) -> Result<BinarySequence> {
    let state = pack_seed(poly, seed)?;
    if length == 0 {
        return Err(Error::ZeroLength);
    }
    let mut reg = Lfsr::new(poly, state);
    let bits = (0..length).map(|_| reg.step()).collect();
    Ok(BinarySequence { bits, period: cycle_length(poly, state) })
}

/// The canonical seed `(1, 0, ..., 0)`.
pub fn unit_seed(degree: usize) -> Vec<u8> {
    let mut s = vec![0u8; degree];
    s[0] = 1;
    s
}

/// True iff the state cycle through `(1, 0, ..., 0)` has length 2^n - 1.
pub fn verify_maximal_period(poly: &GeneratorPolynomial) -> bool {
    cycle_length(poly, 1) == poly.maximal_period()
}

/// Bit 0 maps to +1 and bit 1 to -1, so XOR of bits is the product of chips.
pub fn to_bipolar(seq: &BinarySequence) -> Vec<i8> {
    seq.bits().iter().map(|&b| 1 - 2 * b as i8).collect()
}

/// Bipolar form of one period of `seq` as a spreading code.
pub fn to_chip_sequence(seq: &BinarySequence) -> Result<ChipSequence> {
    ChipSequence::new(to_bipolar(seq))
}

/// One period of the M-sequence of `poly` started from the unit seed.
pub fn msequence_code(poly: &GeneratorPolynomial) -> Result<ChipSequence> {
    let seq = generate_msequence(poly, &unit_seed(poly.degree()), poly.maximal_period())?;
    to_chip_sequence(&seq)
}

/// User `k` receives `base` cyclically shifted by `k` chips.
pub fn assign_user_codes(base: &ChipSequence, num_users: usize) -> Result<Vec<ChipSequence>> {
    if num_users == 0 {
        return Err(Error::arg("num_users", "at least one user is required"));
    }
    if num_users > base.period() {
        return Err(Error::UserCapacity { requested: num_users, capacity: base.period() });
    }
    Ok((0..num_users).map(|k| base.rotated(k)).collect())
}
