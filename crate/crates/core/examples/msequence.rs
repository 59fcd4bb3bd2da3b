//! Generate an M-sequence, check its period and print its correlation tables.
//!
//!     cargo run --example msequence -- x^5+x^2+1

use linksim::correlation::{aperiodic_ccf, periodic_acf_profile, periodic_ccf_profile};
use linksim::pn_codes::{generate_msequence, to_chip_sequence, unit_seed, verify_maximal_period, GeneratorPolynomial};

fn main() -> linksim::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "x^3+x+1".into());
    let poly: GeneratorPolynomial = text.parse()?;
    let period = poly.maximal_period();
    let seq = generate_msequence(&poly, &unit_seed(poly.degree()), period)?;
    println!("{poly}: primitive = {}, period {}", verify_maximal_period(&poly), seq.period());
    println!("bits: {}", seq.bits().iter().map(|b| b.to_string()).collect::<String>());

    let code = to_chip_sequence(&seq)?;
    let shifted = code.rotated(1);
    let acf = periodic_acf_profile(&code);
    let ccf = periodic_ccf_profile(&code, &shifted)?;
    println!("{:>4} {:>6} {:>10} {:>6} {:>10}", "lag", "acf", "acf/N", "ccf", "aperiodic");
    for ((lag, a, an), (_, c, _)) in acf.rows().zip(ccf.rows()) {
        println!("{lag:>4} {a:>6} {an:>10.4} {c:>6} {:>10}", aperiodic_ccf(&code, &code, lag as i64));
    }
    Ok(())
}
