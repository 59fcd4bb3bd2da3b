//! Measure one operating point with a sequential stopping rule and report
//! its Wilson interval against theory.

use linksim::channel::ChannelKind;
use linksim::metrics::{run_point, LinkConfig, StoppingRule};
use linksim::modem::Scheme;
use linksim::receiver::CsiMode;
use linksim::theory::{ber_awgn, ber_rayleigh_qpsk, db_to_linear};

fn main() -> linksim::Result<()> {
    let poly = "x^3+x+1".parse()?;
    let rule = StoppingRule { min_errors: Some(500), max_bits: 5_000_000 };

    let awgn = LinkConfig::new(Scheme::Qam16, ChannelKind::Awgn, &poly, 1, 1)?;
    let r = run_point(&awgn, 8.0, rule)?;
    let p = ber_awgn(Scheme::Qam16, db_to_linear(8.0))?.ber;
    println!(
        "16qam awgn 8 dB: {} / {} = {:.3e} [{:.3e}, {:.3e}], theory {p:.3e}",
        r.bit_errors, r.bits, r.ber, r.ci_low, r.ci_high
    );

    let mut fading = LinkConfig::new(Scheme::Qpsk, ChannelKind::RayleighAwgn, &poly, 1, 1)?;
    fading.doppler_hz = 222.4;
    fading.frame_bits = 128;
    for csi in [CsiMode::Perfect, CsiMode::BlockEstimate(64)] {
        fading.csi = csi;
        let r = run_point(&fading, 10.0, rule)?;
        println!(
            "qpsk rayleigh 10 dB, 222 Hz, csi {csi}: {:.4} [{:.4}, {:.4}], closed form {:.4}",
            r.ber,
            r.ci_low,
            r.ci_high,
            ber_rayleigh_qpsk(10.0)?
        );
    }
    Ok(())
}
