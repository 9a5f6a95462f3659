use std::fmt;

use crate::numerics::{linear_fit, NumericsError};
use crate::{Error, Result};

/// Least-squares power law `y ~ A sigma^k` on log-log axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// `ln A`.
    pub log_coefficient: f64,
    pub r_squared: f64,
}

pub fn power_law_fit(series: &[(f64, f64)]) -> Result<PowerLawFit> {
    if series.len() < 4 {
        return Err(NumericsError::TooFewPoints {
            needed: 4,
            got: series.len(),
        }
        .into());
    }
    if let Some(&(x, y)) = series.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "power-law point",
            value: if x > 0.0 { y } else { x },
            reason: "sigma and value must both be > 0",
        });
    }
    let xs: Vec<f64> = series.iter().map(|(x, _)| x.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|(_, y)| y.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(PowerLawFit {
        exponent: fit.slope,
        log_coefficient: fit.intercept,
        r_squared: fit.r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    RcbFloor,
    RcbTotal,
    FanoExact,
    FanoWeak,
    RsFloor,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::RcbFloor => "rcb_floor",
            BoundKind::RcbTotal => "rcb_total",
            BoundKind::FanoExact => "fano_exact",
            BoundKind::FanoWeak => "fano_weak",
            BoundKind::RsFloor => "rs_floor",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    /// SNR in dB or code rate, depending on the curve.
    pub x: f64,
    pub value: f64,
    pub kind: BoundKind,
}

/// Probability-valued bound evaluations, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundCurve {
    rows: Vec<BoundRow>,
}

impl BoundCurve {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64, value: f64, kind: BoundKind) -> Result<()> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidParameter {
                name: "bound value",
                value,
                reason: "probability bounds lie in [0, 1]",
            });
        }
        self.rows.push(BoundRow { x, value, kind });
        Ok(())
    }

    pub fn rows(&self) -> &[BoundRow] {
        &self.rows
    }

    /// `(x, value)` pairs of one kind.
    pub fn series(&self, kind: BoundKind) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| (r.x, r.value))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let series: Vec<(f64, f64)> = [0.01, 0.02, 0.05, 0.1, 0.2]
            .iter()
            .map(|&s: &f64| (s, 2.0 * s.powf(3.125)))
            .collect();
        let fit = power_law_fit(&series).unwrap();
        assert!((fit.exponent - 3.125).abs() < 1e-12);
        assert!((fit.log_coefficient - 2f64.ln()).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_series() {
        assert!(power_law_fit(&[(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)]).is_err());
        assert!(power_law_fit(&[(0.1, 1.0), (0.2, 0.0), (0.3, 3.0), (0.4, 1.0)]).is_err());
    }

    #[test]
    fn curve_rows() {
        let mut c = BoundCurve::new();
        c.push(10.0, 0.1, BoundKind::RcbFloor).unwrap();
        c.push(10.0, 0.01, BoundKind::FanoExact).unwrap();
        c.push(12.0, 0.05, BoundKind::RcbFloor).unwrap();
        assert!(c.push(12.0, 1.5, BoundKind::RcbTotal).is_err());
        assert_eq!(
            c.series(BoundKind::RcbFloor),
            vec![(10.0, 0.1), (12.0, 0.05)]
        );
        assert_eq!(c.rows().len(), 3);
        assert_eq!(BoundKind::FanoWeak.to_string(), "fano_weak");
    }
}
