//! Chip-wise auto- and cross-correlation of spreading codes.

use crate::error::{Error, Result};
use crate::pn_codes::ChipSequence;

/// Periodic correlation at every lag `0..period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationProfile {
    period: usize,
    raw: Vec<i64>,
}

impl CorrelationProfile {
    pub fn period(&self) -> usize {
        self.period
    }

    /// Unnormalized values indexed by lag.
    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    /// Value divided by the period, as numerator over denominator.
    pub fn normalized_ratio(&self, lag: usize) -> (i64, usize) {
        (self.raw[lag % self.period], self.period)
    }

    pub fn normalized(&self, lag: usize) -> f64 {
        let (num, den) = self.normalized_ratio(lag);
        num as f64 / den as f64
    }

    /// `(lag, raw, normalized)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, i64, f64)> + '_ {
        (0..self.period).map(|lag| (lag, self.raw[lag], self.normalized(lag)))
    }
}

/// `sum_i x_i * y_{(i + lag) mod N}`.
pub fn periodic_ccf(x: &ChipSequence, y: &ChipSequence, lag: i64) -> Result<i64> {
    let n = x.period();
    if y.period() != n {
        return Err(Error::PeriodMismatch { left: n, right: y.period() });
    }
    let shift = lag.rem_euclid(n as i64) as usize;
    Ok(x.chips().iter().enumerate().map(|(i, &a)| (a * y.chip(i + shift)) as i64).sum())
}

pub fn periodic_acf(x: &ChipSequence, lag: i64) -> i64 {
    periodic_ccf(x, x, lag).expect("a sequence always matches its own period")
}

/// Sum over the overlapping window only. A positive lag slides `y` left
/// against `x`; lags at or beyond the longer length give an empty overlap.
pub fn aperiodic_ccf(x: &ChipSequence, y: &ChipSequence, lag: i64) -> i64 {
    let (xs, ys) = (x.chips(), y.chips());
    let (a, b, shift) = if lag >= 0 { (xs, ys, lag as usize) } else { (ys, xs, lag.unsigned_abs() as usize) };
    a.iter().zip(b.iter().skip(shift)).map(|(&p, &q)| (p * q) as i64).sum()
}

pub fn periodic_ccf_profile(x: &ChipSequence, y: &ChipSequence) -> Result<CorrelationProfile> {
    let period = x.period();
    let raw = (0..period as i64).map(|lag| periodic_ccf(x, y, lag)).collect::<Result<Vec<_>>>()?;
    Ok(CorrelationProfile { period, raw })
}

pub fn periodic_acf_profile(x: &ChipSequence) -> CorrelationProfile {
    periodic_ccf_profile(x, x).expect("same period")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pn_codes::{msequence_code, GeneratorPolynomial};

    fn code(p: &str) -> ChipSequence {
        msequence_code(&p.parse::<GeneratorPolynomial>().unwrap()).unwrap()
    }

    fn seven() -> ChipSequence {
        // bipolar image of 1001011
        ChipSequence::new(vec![-1, 1, 1, -1, 1, -1, -1]).unwrap()
    }

    #[test]
    fn hand_summed_values() {
        let x = seven();
        assert_eq!(x, code("x^3+x+1"));
        assert_eq!(periodic_acf(&x, 0), 7);
        assert_eq!(periodic_ccf(&x, &x, 3).unwrap(), -1);
        for lag in 1..7 {
            assert_eq!(periodic_acf(&x, lag), -1);
        }
        // distinct shifts: CCF at 0 equals ACF at the shift difference
        assert_eq!(periodic_ccf(&x.rotated(2), &x.rotated(5), 0).unwrap(), -1);
        // five-chip overlap at lag 2: -1 -1 +1 +1 -1
        assert_eq!(aperiodic_ccf(&x, &x, 2), -1);
        assert_eq!(aperiodic_ccf(&x, &x, 0), 7);
        assert_eq!(aperiodic_ccf(&x, &x, 7), 0);
        assert_eq!(aperiodic_ccf(&x, &x, -7), 0);
    }

    #[test]
    fn length_31_two_valued() {
        let x = code("x^5+x^2+1");
        assert_eq!(periodic_acf(&x, 0), 31);
        for lag in 1..31 {
            assert_eq!(periodic_acf(&x, lag), -1);
        }
    }

    #[test]
    fn mismatched_periods_rejected() {
        assert!(matches!(
            periodic_ccf(&seven(), &code("x^5+x^2+1"), 0),
            Err(Error::PeriodMismatch { left: 7, right: 31 })
        ));
    }

    #[test]
    fn profile_rows() {
        let p = periodic_acf_profile(&seven());
        assert_eq!(p.raw(), &[7, -1, -1, -1, -1, -1, -1]);
        assert_eq!(p.normalized(0), 1.0);
        assert_eq!(p.normalized_ratio(3), (-1, 7));
        assert_eq!(p.rows().count(), 7);
    }

    #[test]
    fn aperiodic_bounded_by_overlap() {
        let x = code("x^5+x^2+1");
        let y = x.rotated(9);
        for lag in -40i64..40 {
            let overlap = 31usize.saturating_sub(lag.unsigned_abs() as usize) as i64;
            assert!(aperiodic_ccf(&x, &y, lag).abs() <= overlap);
        }
    }
}
