use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::BerRecord;
use crate::theory::TheoryPoint;

/// Column order of every CSV this crate writes.
pub const CSV_HEADER: [&str; 18] = [
    "source",
    "scheme",
    "channel",
    "ebn0_db",
    "sf",
    "users",
    "doppler_hz",
    "csi",
    "despread",
    "bits",
    "bit_errors",
    "ber",
    "symbols",
    "symbol_errors",
    "ser",
    "ci_low",
    "ci_high",
    "seed",
];

/// One CSV line. Theory rows leave the count, interval and seed columns empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub source: &'static str,
    pub scheme: &'static str,
    pub channel: &'static str,
    pub ebn0_db: f64,
    pub sf: Option<usize>,
    pub users: Option<usize>,
    pub doppler_hz: Option<f64>,
    pub csi: Option<String>,
    pub despread: Option<String>,
    pub bits: Option<u64>,
    pub bit_errors: Option<u64>,
    pub ber: f64,
    pub symbols: Option<u64>,
    pub symbol_errors: Option<u64>,
    pub ser: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub seed: Option<u64>,
}

impl From<&BerRecord> for CsvRow {
    fn from(r: &BerRecord) -> Self {
        CsvRow {
            source: "sim",
            scheme: r.scheme.name(),
            channel: r.channel.name(),
            ebn0_db: r.ebn0_db,
            sf: Some(r.spreading_factor),
            users: Some(r.users),
            doppler_hz: Some(r.doppler_hz),
            csi: Some(r.csi.to_string()),
            despread: Some(r.despread.to_string()),
            bits: Some(r.bits),
            bit_errors: Some(r.bit_errors),
            ber: r.ber,
            symbols: Some(r.symbols),
            symbol_errors: Some(r.symbol_errors),
            ser: r.ser,
            ci_low: Some(r.ci_low),
            ci_high: Some(r.ci_high),
            seed: Some(r.seed),
        }
    }
}

impl CsvRow {
    pub fn theory(ebn0_db: f64, p: &TheoryPoint) -> Self {
        CsvRow {
            source: "theory",
            scheme: p.scheme.name(),
            channel: p.channel.name(),
            ebn0_db,
            sf: None,
            users: None,
            doppler_hz: None,
            csi: None,
            despread: None,
            bits: None,
            bit_errors: None,
            ber: p.ber,
            symbols: None,
            symbol_errors: None,
            ser: p.ser,
            ci_low: None,
            ci_high: None,
            seed: None,
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io { path: "<csv>".into(), reason: e.to_string() }
}

/// Write the header followed by `rows`.
pub fn write_csv<W: Write>(out: W, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io { path: "<csv>".into(), reason: e.to_string() })
}

/// Rows as a string, mostly for tests and examples.
pub fn to_csv_string(rows: &[CsvRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

/// Correlation table with columns `lag,raw,normalized`.
pub fn write_correlation_csv<W: Write>(out: W, rows: impl IntoIterator<Item = (usize, i64, f64)>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lag", "raw", "normalized"]).map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io { path: "<csv>".into(), reason: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelKind;
    use crate::modem::Scheme;
    use crate::theory::ber_awgn;

    #[test]
    fn header_and_theory_row() {
        let p = ber_awgn(Scheme::Qpsk, 1.0).unwrap();
        let text = to_csv_string(&[CsvRow::theory(0.0, &p)]).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "source,scheme,channel,ebn0_db,sf,users,doppler_hz,csi,despread,bits,bit_errors,ber,symbols,symbol_errors,ser,ci_low,ci_high,seed"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("theory,qpsk,awgn,0.0,,,,,,,,0.0786496"), "{row}");
        assert_eq!(p.channel, ChannelKind::Awgn);
    }
}
