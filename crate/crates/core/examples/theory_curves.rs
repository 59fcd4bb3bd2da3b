//! Closed-form BER and SER for every scheme next to the semianalytic estimate
//! of an ideal frame and of a frame attenuated by 1 dB.

use linksim::modem::{modulate, Scheme};
use linksim::pn_codes::BinarySequence;
use linksim::theory::{ber_awgn, ber_rayleigh_qpsk, db_to_linear, semianalytic_ber};
use linksim::Complex64;

fn main() -> linksim::Result<()> {
    let bits = BinarySequence::new((0..2400).map(|i| (i * 37 % 11 % 2) as u8).collect());
    println!("{:>5} {:>6} {:>11} {:>11} {:>11} {:>11}", "dB", "scheme", "ber", "ser", "semi", "semi -1dB");
    for db in (0..=12).step_by(2) {
        let g = db_to_linear(db as f64);
        for scheme in Scheme::ALL {
            let p = ber_awgn(scheme, g)?;
            let frame = modulate(&bits, scheme)?;
            let semi = semianalytic_ber(&frame, scheme, g)?;
            let faded = frame.scaled(Complex64::new(db_to_linear(-1.0).sqrt(), 0.0));
            let semi_faded = semianalytic_ber(&faded, scheme, g)?;
            println!("{db:>5} {scheme:>6} {:>11.4e} {:>11.4e} {semi:>11.4e} {semi_faded:>11.4e}", p.ber, p.ser);
        }
        println!("{db:>5} {:>6} {:>11.4e}", "ray", ber_rayleigh_qpsk(g)?);
    }
    Ok(())
}
