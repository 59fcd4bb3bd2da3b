//! Fast self-checks of the invariants the simulator relies on.

use std::fmt;

use crate::channel::ChannelKind;
use crate::correlation::periodic_acf_profile;
use crate::metrics::{confidence_interval, run_point, LinkConfig, StoppingRule};
use crate::modem::{demodulate_hard, modulate, Scheme};
use crate::pn_codes::{generate_msequence, msequence_code, verify_maximal_period, BinarySequence, GeneratorPolynomial};
use crate::receiver::DespreadMode;
use crate::theory::{ber_awgn, q_function, semianalytic_ber};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{tag} {:<28} {}", self.name, self.detail)
    }
}

fn check(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match body() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn poly(text: &str) -> GeneratorPolynomial {
    text.parse().expect("built-in polynomial")
}

/// Run every check. Takes well under a second.
pub fn run_checks() -> Vec<Check> {
    vec![
        check("lfsr_degree3", || {
            let seq = generate_msequence(&poly("x^3+x+1"), &[1, 0, 0], 7)?;
            Ok((seq.bits() == [1, 0, 0, 1, 0, 1, 1], format!("{:?}", seq.bits())))
        }),
        check("msequence_acf_two_valued", || {
            for text in ["x^3+x+1", "x^5+x^2+1", "x^7+x+1", "x^10+x^3+1"] {
                let p = poly(text);
                let code = msequence_code(&p)?;
                let acf = periodic_acf_profile(&code);
                let n = code.period() as i64;
                let ok = verify_maximal_period(&p)
                    && acf.raw()[0] == n
                    && acf.raw()[1..].iter().all(|&v| v == -1)
                    && code.chips().iter().map(|&c| c as i64).sum::<i64>() == -1;
                if !ok {
                    return Ok((false, format!("{text} violates period, balance or ACF")));
                }
            }
            Ok((true, "degrees 3, 5, 7, 10".into()))
        }),
        check("constellations_gray", || {
            for scheme in Scheme::ALL {
                let c = scheme.constellation();
                let dmin = c.min_distance();
                for (i, a) in c.points().iter().enumerate() {
                    for (j, b) in c.points().iter().enumerate().skip(i + 1) {
                        if ((a - b).norm() - dmin).abs() < 1e-9 && (i ^ j).count_ones() != 1 {
                            return Ok((false, format!("{scheme}: labels {i} and {j} are neighbours")));
                        }
                    }
                }
                if (c.average_energy() - 1.0).abs() > 1e-12 {
                    return Ok((false, format!("{scheme}: energy {}", c.average_energy())));
                }
            }
            Ok((true, "unit energy, neighbours differ in one bit".into()))
        }),
        check("modem_round_trip", || {
            let bits = BinarySequence::new((0..48).map(|i| ((i * 7 + i / 3) % 2) as u8).collect());
            for scheme in Scheme::ALL {
                let back = demodulate_hard(&modulate(&bits, scheme)?, scheme)?;
                if back != bits {
                    return Ok((false, format!("{scheme} round trip differs")));
                }
            }
            Ok((true, "qpsk, 16qam, 8psk".into()))
        }),
        check("q_function", || {
            let got = q_function(std::f64::consts::SQRT_2);
            Ok((((got - 0.0786496035251425) / got).abs() < 1e-10, format!("Q(sqrt 2) = {got:.10}")))
        }),
        check("semianalytic_degenerates", || {
            let bits = BinarySequence::new((0..64).map(|i| (i % 3 == 0) as u8).collect());
            let frame = modulate(&bits, Scheme::Qpsk)?;
            let semi = semianalytic_ber(&frame, Scheme::Qpsk, 2.0)?;
            let exact = ber_awgn(Scheme::Qpsk, 2.0)?.ber;
            Ok(((semi - exact).abs() < 1e-9, format!("{semi:.9} vs {exact:.9}")))
        }),
        check("wilson_interval", || {
            let (lo, hi) = confidence_interval(15615, 200_000, 0.95)?;
            Ok((lo < 0.078649 && 0.078649 < hi, format!("[{lo:.5}, {hi:.5}]")))
        }),
        check("noiseless_downlink", || {
            for scheme in Scheme::ALL {
                for despread in [DespreadMode::Soft, DespreadMode::Hard] {
                    let mut link = LinkConfig::new(scheme, ChannelKind::Awgn, &poly("x^3+x+1"), 7, 1)?;
                    link.despread = despread;
                    let r = run_point(&link, 300.0, StoppingRule::fixed(4200))?;
                    if r.bit_errors != 0 {
                        return Ok((false, format!("{scheme}/{despread}: {} errors", r.bit_errors)));
                    }
                }
            }
            Ok((true, "SF 7, all schemes, both despreaders".into()))
        }),
        check("seeded_determinism", || {
            let mut link = LinkConfig::new(Scheme::Qpsk, ChannelKind::RayleighAwgn, &poly("x^3+x+1"), 1, 1)?;
            link.doppler_hz = 222.0;
            link.seed = 42;
            let a = run_point(&link, 5.0, StoppingRule::fixed(20_000))?;
            let b = run_point(&link, 5.0, StoppingRule::fixed(20_000))?;
            Ok((a == b, format!("{} errors both times", a.bit_errors)))
        }),
    ]
}
