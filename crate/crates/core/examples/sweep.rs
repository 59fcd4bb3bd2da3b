//! Run a bundled sweep config in parallel and print its CSV.
//!
//!     cargo run --release --example sweep -- examples/fig8.toml 4

use std::path::PathBuf;

use linksim::harness::{load_config, sweep_rows, write_csv};

fn main() -> linksim::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/table1.toml"));
    let jobs = args.next().and_then(|j| j.parse().ok()).unwrap_or(1);
    let cfg = load_config(&path)?;
    let rows = sweep_rows(&cfg, jobs)?;
    write_csv(std::io::stdout().lock(), &rows)
}
