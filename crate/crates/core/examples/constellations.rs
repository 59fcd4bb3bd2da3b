//! Print the Gray-labelled constellations and demap a few noisy symbols.

use linksim::channel::apply_awgn;
use linksim::modem::{demodulate_hard, modulate, soft_bit_metrics, Scheme};
use linksim::pn_codes::BinarySequence;

fn main() -> linksim::Result<()> {
    for scheme in Scheme::ALL {
        let c = scheme.constellation();
        let k = scheme.bits_per_symbol();
        println!("{scheme}: Es = {:.3}, d_min = {:.4}", c.average_energy(), c.min_distance());
        for (label, p) in c.points().iter().enumerate() {
            println!("  {label:0k$b} -> {:+.4} {:+.4}j", p.re, p.im);
        }
    }

    let bits = BinarySequence::new(vec![0, 1, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1]);
    for scheme in Scheme::ALL {
        let noisy = apply_awgn(&modulate(&bits, scheme)?, 0.15, 7);
        let hard = demodulate_hard(&noisy, scheme)?;
        let soft = soft_bit_metrics(&noisy, scheme)?;
        println!("{scheme}: sent {:?}", bits.bits());
        println!("{:width$}  got  {:?}", "", hard.bits(), width = scheme.name().len());
        println!(
            "{:width$}  llr  {:?}",
            "",
            soft.iter().map(|m| (m * 100.0).round() / 100.0).collect::<Vec<_>>(),
            width = scheme.name().len()
        );
    }
    Ok(())
}
