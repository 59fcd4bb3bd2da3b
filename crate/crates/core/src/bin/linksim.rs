use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linksim::channel::ChannelKind;
use linksim::correlation::{periodic_acf_profile, periodic_ccf_profile};
use linksim::harness::{self, CsvRow};
use linksim::modem::Scheme;
use linksim::pn_codes::{msequence_code, GeneratorPolynomial};
use linksim::theory::{db_to_linear, theory_point};
use linksim::{doctor, Error};

#[derive(Parser)]
#[command(name = "linksim", version, about = "DSSS W-CDMA downlink link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured Eb/N0 sweep and write CSV.
    Simulate {
        /// TOML config; `.toml` may be omitted.
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed, overriding the config and LINKSIM_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Closed-form BER/SER curve as CSV.
    Theory {
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        channel: ChannelKind,
        /// start:stop:step in dB.
        #[arg(long)]
        ebn0: String,
    },
    /// Correlation table of an M-sequence as CSV.
    Codes(CodesArgs),
    /// Run the built-in invariant checks.
    Doctor,
}

#[derive(Args)]
struct CodesArgs {
    /// Generator polynomial, e.g. `x^5+x^2+1` or `5,2,0`.
    #[arg(long)]
    poly: GeneratorPolynomial,
    #[arg(long, conflicts_with = "ccf", required_unless_present = "ccf")]
    acf: bool,
    /// Cross-correlate with the code shifted by this many chips.
    #[arg(long)]
    ccf: Option<usize>,
}

enum Failure {
    Invalid(Error),
    Runtime(Error),
}

fn io_err(path: &str) -> impl Fn(io::Error) -> Error + '_ {
    move |e| Error::Io { path: path.to_string(), reason: e.to_string() }
}

fn simulate(config: PathBuf, out: Option<PathBuf>, seed: Option<u64>, jobs: usize) -> Result<(), Failure> {
    let mut cfg = harness::load_config(&config).map_err(Failure::Invalid)?;
    harness::apply_seed_env(&mut cfg).map_err(Failure::Invalid)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let rows = harness::sweep_rows(&cfg, jobs).map_err(Failure::Runtime)?;
    match out.or(cfg.output) {
        Some(path) => {
            let shown = path.display().to_string();
            let file = File::create(&path).map_err(io_err(&shown)).map_err(Failure::Runtime)?;
            harness::write_csv(BufWriter::new(file), &rows).map_err(Failure::Runtime)
        }
        None => harness::write_csv(io::stdout().lock(), &rows).map_err(Failure::Runtime),
    }
}

fn theory(scheme: Scheme, channel: ChannelKind, ebn0: &str) -> Result<(), Failure> {
    let grid = harness::parse_range(ebn0).map_err(Failure::Invalid)?;
    let rows = grid
        .iter()
        .map(|&db| Ok(CsvRow::theory(db, &theory_point(scheme, channel, db_to_linear(db))?)))
        .collect::<linksim::Result<Vec<_>>>()
        .map_err(Failure::Invalid)?;
    harness::write_csv(io::stdout().lock(), &rows).map_err(Failure::Runtime)
}

fn codes(args: CodesArgs) -> Result<(), Failure> {
    let code = msequence_code(&args.poly).map_err(Failure::Invalid)?;
    let profile = match args.ccf {
        Some(shift) => periodic_ccf_profile(&code, &code.rotated(shift)).map_err(Failure::Invalid)?,
        None => periodic_acf_profile(&code),
    };
    harness::write_correlation_csv(io::stdout().lock(), profile.rows()).map_err(Failure::Runtime)
}

fn run_doctor() -> Result<(), Failure> {
    let checks = doctor::run_checks();
    let mut out = io::stdout().lock();
    for c in &checks {
        writeln!(out, "{c}").map_err(io_err("<stdout>")).map_err(Failure::Runtime)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(Failure::Runtime(Error::Io {
            path: "doctor".into(),
            reason: format!("{failed} of {} checks failed", checks.len()),
        }));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate { config, out, seed, jobs } => simulate(config, out, seed, jobs),
        Command::Theory { scheme, channel, ebn0 } => theory(scheme, channel, &ebn0),
        Command::Codes(args) => codes(args),
        Command::Doctor => run_doctor(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
