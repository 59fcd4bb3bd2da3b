//! Build a seven-user synchronous downlink and recover each user, first
//! noiselessly and then at 4 dB, to expose multiple-access interference.

use linksim::channel::{apply_awgn, noise_sigma};
use linksim::metrics::count_errors;
use linksim::modem::Scheme;
use linksim::pn_codes::{assign_user_codes, msequence_code, BinarySequence};
use linksim::receiver::{receive_user, DespreadMode};
use linksim::spreading::{build_downlink, SpreadingConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> linksim::Result<()> {
    let sf = 7;
    let users = 7;
    let scheme = Scheme::Qpsk;
    let rates = SpreadingConfig::new(sf, 384_000.0)?;
    println!("chip rate {} chip/s, symbol rate {} sym/s", rates.chip_rate(), rates.symbol_rate(scheme));

    let codes = assign_user_codes(&msequence_code(&"x^3+x+1".parse()?)?, users)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tx: Vec<BinarySequence> =
        (0..users).map(|_| BinarySequence::new((0..20_000).map(|_| rng.random_range(0..2)).collect())).collect();
    let frame = build_downlink(&tx, &codes, sf, scheme)?;

    let sigma = noise_sigma(4.0, scheme.bits_per_symbol(), sf, 1.0 / users as f64)?;
    let noisy = apply_awgn(&frame.composite, sigma, 2);
    for (user, sent) in tx.iter().enumerate() {
        let clean = receive_user(&frame.composite, user, &codes, sf, scheme, DespreadMode::Soft)?;
        let rx = receive_user(&noisy, user, &codes, sf, scheme, DespreadMode::Soft)?;
        let (n, e0) = count_errors(sent, &clean)?;
        let (_, e) = count_errors(sent, &rx)?;
        println!("user {user}: noiseless errors {e0}, BER at 4 dB {:.4}", e as f64 / n as f64);
    }
    Ok(())
}
