use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::channel::{doppler_from_speed, ChannelKind, DEFAULT_CARRIER_HZ};
use crate::error::{Error, Result};
use crate::metrics::{LinkConfig, StoppingRule, DEFAULT_FRAME_BITS};
use crate::modem::Scheme;
use crate::pn_codes::{assign_user_codes, msequence_code, verify_maximal_period, GeneratorPolynomial};
use crate::receiver::{CsiMode, DespreadMode};
use crate::spreading::{SpreadingConfig, DEFAULT_BIT_RATE};

/// Environment variable that replaces the configured master seed.
pub const SEED_ENV: &str = "LINKSIM_SEED";

const DEFAULT_POLYNOMIAL: &str = "x^3+x+1";

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ErrorTarget {
    Count(u64),
    Word(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scheme: OneOrMany<String>,
    channel: String,
    ebn0_db: OneOrMany<f64>,
    spreading_factor: Option<usize>,
    num_users: Option<OneOrMany<usize>>,
    code_polynomial: Option<String>,
    bit_rate: Option<f64>,
    speed_kmph: Option<OneOrMany<f64>>,
    doppler_hz: Option<OneOrMany<f64>>,
    carrier_hz: Option<f64>,
    csi: Option<String>,
    despread: Option<String>,
    min_errors: Option<ErrorTarget>,
    max_bits: Option<u64>,
    frame_bits: Option<usize>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    theory: Option<bool>,
}

/// A validated sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// One curve per scheme.
    pub schemes: Vec<Scheme>,
    pub channel: ChannelKind,
    /// Strictly increasing.
    pub ebn0_db: Vec<f64>,
    pub spreading_factor: usize,
    pub num_users: Vec<usize>,
    pub code_polynomial: GeneratorPolynomial,
    pub bit_rate: f64,
    pub doppler_hz: Vec<f64>,
    pub csi: CsiMode,
    pub despread: DespreadMode,
    pub stopping: StoppingRule,
    pub frame_bits: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Append closed-form rows after the simulated ones.
    pub theory: bool,
}

fn parse_key<T: FromStr<Err = Error>>(key: &str, text: &str) -> Result<T> {
    text.parse().map_err(|e: Error| Error::config(key, e.to_string()))
}

/// Parse and validate a TOML sweep description, filling defaults.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))?;

    let schemes = raw.scheme.into_vec().iter().map(|s| parse_key::<Scheme>("scheme", s)).collect::<Result<Vec<_>>>()?;
    if schemes.is_empty() {
        return Err(Error::config("scheme", "list is empty"));
    }
    let channel: ChannelKind = parse_key("channel", &raw.channel)?;

    let ebn0_db = raw.ebn0_db.into_vec();
    if ebn0_db.is_empty() {
        return Err(Error::config("ebn0_db", "sweep list is empty"));
    }
    if ebn0_db.iter().any(|x| !x.is_finite()) {
        return Err(Error::config("ebn0_db", "values must be finite"));
    }
    if ebn0_db.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("ebn0_db", "values must be strictly increasing"));
    }

    let code_polynomial: GeneratorPolynomial =
        parse_key("code_polynomial", raw.code_polynomial.as_deref().unwrap_or(DEFAULT_POLYNOMIAL))?;
    let period = code_polynomial.maximal_period();
    if !verify_maximal_period(&code_polynomial) {
        return Err(Error::config("code_polynomial", format!("{code_polynomial} is not primitive")));
    }

    let spreading_factor = raw.spreading_factor.unwrap_or(1);
    if spreading_factor == 0 || spreading_factor > period {
        return Err(Error::config(
            "spreading_factor",
            format!("{spreading_factor} must lie in 1..={period} for a period-{period} code"),
        ));
    }

    let num_users = raw.num_users.map_or_else(|| vec![1], OneOrMany::into_vec);
    if num_users.is_empty() {
        return Err(Error::config("num_users", "list is empty"));
    }
    if let Some(&bad) = num_users.iter().find(|&&k| k == 0 || k > period) {
        return Err(Error::config(
            "num_users",
            format!("{bad} users do not fit a period-{period} code family (1..={period})"),
        ));
    }

    let bit_rate = raw.bit_rate.unwrap_or(DEFAULT_BIT_RATE);
    if !(bit_rate > 0.0 && bit_rate.is_finite()) {
        return Err(Error::config("bit_rate", "must be positive"));
    }
    let carrier_hz = raw.carrier_hz.unwrap_or(DEFAULT_CARRIER_HZ);
    let (doppler_key, doppler_hz) = match (raw.speed_kmph, raw.doppler_hz) {
        (Some(_), Some(_)) => {
            return Err(Error::config("speed_kmph", "speed_kmph and doppler_hz are mutually exclusive"))
        }
        (Some(speeds), None) => (
            "speed_kmph",
            speeds
                .into_vec()
                .into_iter()
                .map(|v| doppler_from_speed(v, carrier_hz))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::config("speed_kmph", e.to_string()))?,
        ),
        (None, Some(d)) => ("doppler_hz", d.into_vec()),
        (None, None) => ("doppler_hz", vec![0.0]),
    };
    if doppler_hz.is_empty() {
        return Err(Error::config(doppler_key, "list is empty"));
    }
    // The lowest symbol rate (most bits per symbol) bounds the Doppler.
    let fs = schemes
        .iter()
        .map(|&s| SpreadingConfig::new(spreading_factor, bit_rate).map(|c| c.symbol_rate(s)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if let Some(bad) = doppler_hz.iter().find(|&&d| !(d >= 0.0 && d < fs / 2.0)) {
        return Err(Error::config(
            doppler_key,
            format!("Doppler {bad} Hz must lie in [0, {}) at a symbol rate of {fs} Hz", fs / 2.0),
        ));
    }

    let csi: CsiMode = parse_key("csi", raw.csi.as_deref().unwrap_or("perfect"))?;
    let despread: DespreadMode = parse_key("despread", raw.despread.as_deref().unwrap_or("soft"))?;

    let defaults = StoppingRule::default();
    let min_errors = match raw.min_errors {
        None => defaults.min_errors,
        Some(ErrorTarget::Count(0)) => return Err(Error::config("min_errors", "must be positive")),
        Some(ErrorTarget::Count(n)) => Some(n),
        Some(ErrorTarget::Word(w)) if w == "inf" => None,
        Some(ErrorTarget::Word(w)) => {
            return Err(Error::config("min_errors", format!("expected a count or \"inf\", got `{w}`")))
        }
    };
    let max_bits = raw.max_bits.unwrap_or(defaults.max_bits);
    if max_bits == 0 {
        return Err(Error::config("max_bits", "must be positive"));
    }
    let frame_bits = raw.frame_bits.unwrap_or(DEFAULT_FRAME_BITS);
    if frame_bits == 0 {
        return Err(Error::config("frame_bits", "must be positive"));
    }

    let theory = raw.theory.unwrap_or(false);
    if let Some(s) = schemes.iter().find(|&&s| theory && channel == ChannelKind::RayleighAwgn && s != Scheme::Qpsk) {
        return Err(Error::config("theory", format!("no Rayleigh closed form for {s}")));
    }

    let cfg = SimulationConfig {
        schemes,
        channel,
        ebn0_db,
        spreading_factor,
        num_users,
        code_polynomial,
        bit_rate,
        doppler_hz,
        csi,
        despread,
        stopping: StoppingRule { min_errors, max_bits },
        frame_bits,
        seed: raw.seed.unwrap_or(0),
        output: raw.output,
        theory,
    };
    for &s in &cfg.schemes {
        cfg.link(s, 1)?;
    }
    Ok(cfg)
}

/// Read a config file. A missing path is retried with a `.toml` suffix, and
/// a relative `output` is resolved against the file's directory.
pub fn load_config(path: &Path) -> Result<SimulationConfig> {
    let resolved = if path.exists() { path.to_path_buf() } else { path.with_extension("toml") };
    let text = std::fs::read_to_string(&resolved)
        .map_err(|e| Error::Io { path: path.display().to_string(), reason: e.to_string() })?;
    let mut cfg = parse_config(&text)?;
    if let Some(out) = cfg.output.take() {
        let base = resolved.parent().unwrap_or(Path::new(""));
        cfg.output = Some(if out.is_relative() { base.join(out) } else { out });
    }
    Ok(cfg)
}

/// Replace the seed with `LINKSIM_SEED` when that variable is set.
pub fn apply_seed_env(cfg: &mut SimulationConfig) -> Result<()> {
    if let Ok(value) = std::env::var(SEED_ENV) {
        cfg.seed = value
            .trim()
            .parse()
            .map_err(|_| Error::config(SEED_ENV, format!("`{value}` is not an unsigned integer")))?;
    }
    Ok(())
}

impl SimulationConfig {
    /// Link description for one scheme and user count; Doppler and seed are
    /// set per point.
    pub fn link(&self, scheme: Scheme, users: usize) -> Result<LinkConfig> {
        let codes = assign_user_codes(&msequence_code(&self.code_polynomial)?, users)?;
        let link = LinkConfig {
            scheme,
            channel: self.channel,
            spreading_factor: self.spreading_factor,
            codes,
            bit_rate: self.bit_rate,
            doppler_hz: 0.0,
            csi: self.csi,
            despread: self.despread,
            frame_bits: self.frame_bits,
            seed: self.seed,
        };
        link.validate()?;
        Ok(link)
    }
}
