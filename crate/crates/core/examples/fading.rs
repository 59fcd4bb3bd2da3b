//! Doppler spreads for pedestrian and vehicular speeds and the statistics of
//! the resulting sum-of-sinusoids fading process.

use linksim::channel::{doppler_from_speed, rayleigh_gains, DEFAULT_CARRIER_HZ};

fn main() -> linksim::Result<()> {
    let fs = 192_000.0;
    for kmph in [3.0, 60.0, 120.0] {
        let fd = doppler_from_speed(kmph, DEFAULT_CARRIER_HZ)?;
        let runs = 50;
        let (mut power, mut deep) = (0.0, 0usize);
        let mut total = 0usize;
        for seed in 0..runs {
            let g = rayleigh_gains(20_000, fd, fs, seed)?;
            power += g.mean_power();
            deep += g.gains().iter().filter(|x| x.norm_sqr() < 0.1).count();
            total += g.len();
        }
        println!(
            "{kmph:>5} km/h  f_d {fd:7.2} Hz  mean power {:.3}  P(|h|^2 < 0.1) {:.4} (Rayleigh {:.4})",
            power / runs as f64,
            deep as f64 / total as f64,
            1.0 - (-0.1f64).exp()
        );
    }
    Ok(())
}
