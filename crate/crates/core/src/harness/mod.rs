//! Configured sweeps and CSV output.
//!
//! A sweep is described by a TOML document:
//!
//! ```toml
//! scheme = "qpsk"            # qpsk | 16qam | 8psk, or a list of them
//! channel = "awgn"           # awgn | rayleigh
//! ebn0_db = [0, 1, 2, 3, 4]  # scalar or strictly increasing list
//! spreading_factor = 1       # 1..=N_c
//! num_users = 1              # scalar or list, each 1..=N_c
//! code_polynomial = "x^3+x+1"
//! bit_rate = 384000          # per user, bit/s
//! doppler_hz = 0             # or speed_kmph (with carrier_hz), not both
//! csi = "perfect"            # perfect | block:<symbols>
//! despread = "soft"          # soft | hard
//! min_errors = 100           # count or "inf"
//! max_bits = 10000000
//! frame_bits = 960           # data bits per user per fading frame
//! seed = 0
//! output = "out.csv"         # relative to the config file
//! theory = false             # append closed-form rows
//! ```
//!
//! Unknown keys are rejected. Each grid point gets its own seed derived from
//! the master seed, its Eb/N0 and its grid index, so output does not depend on
//! the number of worker threads.

mod config;
mod report;
mod sweep;

pub use config::{apply_seed_env, load_config, parse_config, SimulationConfig, SEED_ENV};
pub use report::{to_csv_string, write_correlation_csv, write_csv, CsvRow, CSV_HEADER};
pub use sweep::{grid, run_grid_point, run_sweep, theory_rows, GridPoint};

use crate::error::Result;

/// Simulated rows followed, when requested, by theory rows.
pub fn sweep_rows(cfg: &SimulationConfig, jobs: usize) -> Result<Vec<CsvRow>> {
    let mut rows: Vec<CsvRow> = run_sweep(cfg, jobs)?.iter().map(CsvRow::from).collect();
    if cfg.theory {
        rows.extend(theory_rows(cfg)?.iter().map(|(db, p)| CsvRow::theory(*db, p)));
    }
    Ok(rows)
}

/// Expand `start:stop:step` into an inclusive grid.
pub fn parse_range(text: &str) -> crate::Result<Vec<f64>> {
    use crate::Error;
    let bad = |reason: &str| Error::config("ebn0", format!("`{text}`: {reason}"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad("expected start:stop:step")))
        .collect::<crate::Result<_>>()?;
    let (start, stop, step) = match parts[..] {
        [a] => (a, a, 1.0),
        [a, b] => (a, b, 1.0),
        [a, b, s] => (a, b, s),
        _ => return Err(bad("expected start:stop:step")),
    };
    if !(start.is_finite() && stop.is_finite()) || !(step > 0.0 && step.is_finite()) || stop < start {
        return Err(bad("need finite start <= stop and a positive step"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect())
}
