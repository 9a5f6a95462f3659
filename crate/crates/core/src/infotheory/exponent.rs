use std::f64::consts::{LN_2, PI};

use crate::channel::ChannelParams;

use crate::numerics::{integrate_breaks, maximize_scalar, normal_pdf, QuadratureSpec};
use crate::{Error, Result};

use super::capacity::c_awgn;

fn check_inputs(rho: f64, p: f64, sigma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            reason: "must lie in [0, 1]",
        });
    }
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "must be finite and >= 0",
        });
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "must be finite and > 0",
        });
    }
    Ok(())
}

/// Gallager's function for the binary-input AWGN channel with amplitude
/// `p`, noise `sigma` and equiprobable inputs, in bits:
///
/// ```text
/// E0(rho) = -log2 Int [ w(r|0)^(1/(1+rho)) / 2 + w(r|1)^(1/(1+rho)) / 2 ]^(1+rho) dr
/// ```
///
/// In the centred variable `y = (r - p/2) / sigma` and with `f = p / sigma`
/// the integral equals
/// `2 Int_0^inf phi(y - f/2) 2^-(1+rho) (1 + exp(-f y / (1+rho)))^(1+rho) dy`,
/// whose integrand is bounded and peaked at `f / 2`.
pub fn gallager_e0(rho: f64, p: f64, sigma: f64) -> Result<f64> {
    check_inputs(rho, p, sigma)?;
    let f = p / sigma;
    if rho == 0.0 || f == 0.0 {
        return Ok(0.0);
    }
    let s = 1.0 + rho;
    let a = f / s;
    let centre = 0.5 * f;
    let lo = (centre - 14.0).max(0.0);
    let hi = centre + 14.0;
    let breaks: Vec<f64> = [
        lo,
        centre - 4.0,
        centre - 1.0,
        centre,
        centre + 1.0,
        centre + 4.0,
        hi,
    ]
    .into_iter()
    .filter(|&y| y >= lo && y <= hi)
    .collect();
    let z = integrate_breaks(
        |y| 2.0 * normal_pdf(y - centre) * (s * ((-a * y).exp().ln_1p() - LN_2)).exp(),
        &breaks,
        &QuadratureSpec::relative(1e-13),
    )?;
    Ok((-z.log2()).max(0.0))
}

/// Random-coding exponent at one amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPoint {
    pub p: f64,
    pub sigma: f64,
    pub rate: f64,
    pub rho_star: f64,
    /// Base-2 exponent: block error probability `<= 2^(-N E)`.
    pub value: f64,
}

/// `E(R) = max_{0 <= rho <= 1} E0(rho) - rho R`, in bits.
///
/// Rates at or above `C_AWGN(p, sigma)` give `E = 0` at `rho = 0`.
pub fn error_exponent(rate: f64, p: f64, sigma: f64) -> Result<ExponentPoint> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter {
            name: "rate",
            value: rate,
            reason: "must lie in (0, 1)",
        });
    }
    check_inputs(0.0, p, sigma)?;
    let zero = ExponentPoint {
        p,
        sigma,
        rate,
        rho_star: 0.0,
        value: 0.0,
    };
    if rate >= c_awgn(p, sigma)? {
        return Ok(zero);
    }
    let mut failure = None;
    let (rho_star, value) = maximize_scalar(
        |rho| match gallager_e0(rho, p, sigma) {
            Ok(e0) => e0 - rho * rate,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        0.0,
        1.0,
        1e-9,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if value <= 0.0 {
        return Ok(zero);
    }
    Ok(ExponentPoint {
        rho_star,
        value,
        ..zero
    })
}

/// Gallager's function of the reference channel in which every probe
/// suffers its own independent jitter.
///
/// Both output log-densities are tabulated once on a composite Simpson grid
/// of step `sigma / 24`, so repeated `E0` evaluations are cheap.
#[derive(Debug, Clone)]
pub struct IndependentJitterExponent {
    weights: Vec<f64>,
    ln_w0: Vec<f64>,
    ln_w1: Vec<f64>,
}

impl IndependentJitterExponent {
    pub fn new(params: &ChannelParams) -> Result<Self> {
        params.validate()?;
        check_inputs(0.0, 1.0, params.sigma)?;
        let sigma = params.sigma;
        let dist = params.amplitude();
        let lo = -12.0 * sigma;
        let hi = 1.0 + 12.0 * sigma;
        let panels = (((hi - lo) / (sigma / 24.0)).ceil() as usize).max(8);
        let n = 2 * panels.div_ceil(2);
        let h = (hi - lo) / n as f64;
        let ln_norm = (sigma * (2.0 * PI).sqrt()).ln();
        let mut weights = Vec::with_capacity(n + 1);
        let mut ln_w0 = Vec::with_capacity(n + 1);
        let mut ln_w1 = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let r = lo + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            weights.push(w * h / 3.0);
            ln_w0.push(-r * r / (2.0 * sigma * sigma) - ln_norm);
            ln_w1.push(dist.ln_gaussian_kernel(r, sigma)? - ln_norm);
        }
        Ok(Self {
            weights,
            ln_w0,
            ln_w1,
        })
    }

    /// `E0(rho)` in bits.
    pub fn e0(&self, rho: f64) -> Result<f64> {
        check_inputs(rho, 1.0, 1.0)?;
        if rho == 0.0 {
            return Ok(0.0);
        }
        let s = 1.0 + rho;
        let z: f64 = self
            .weights
            .iter()
            .zip(self.ln_w0.iter().zip(&self.ln_w1))
            .map(|(&w, (&a, &b))| {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                let lse = hi / s + ((lo - hi) / s).exp().ln_1p();
                w * (s * (lse - LN_2)).exp()
            })
            .sum();
        Ok((-z.log2()).max(0.0))
    }

    /// `max_{0 <= rho <= 1} E0(rho) - rho R`, in bits.
    pub fn error_exponent(&self, rate: f64) -> Result<f64> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: rate,
                reason: "must lie in (0, 1)",
            });
        }
        let (_, value) = maximize_scalar(
            |rho| self.e0(rho).map_or(f64::NEG_INFINITY, |e0| e0 - rho * rate),
            0.0,
            1.0,
            1e-9,
        );
        Ok(value.max(0.0))
    }

    /// Random coding bound `min(1, 2^(-N E(R)))` for block length `n`.
    pub fn rcb(&self, rate: f64, n: usize) -> Result<f64> {
        Ok((-(n as f64) * self.error_exponent(rate)?).exp2().min(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::capacity::awgn_deficit;

    #[test]
    fn e0_boundary_values() {
        assert_eq!(gallager_e0(0.0, 1.0, 0.25).unwrap(), 0.0);
        for rho in [0.2, 0.5, 1.0] {
            assert_eq!(gallager_e0(rho, 0.0, 0.25).unwrap(), 0.0);
        }
        // Cutoff rate of the binary AWGN channel: 1 - log2(1 + exp(-f^2 / 8)).
        for f in [0.5, 2.0, 4.0, 9.0] {
            let r0 = 1.0 - (-f * f / 8.0f64).exp().ln_1p() / LN_2;
            let e0 = gallager_e0(1.0, f, 1.0).unwrap();
            assert!((e0 - r0).abs() < 1e-12, "f {f}: {e0} vs {r0}");
        }
        assert!(gallager_e0(1.5, 1.0, 0.25).is_err());
    }

    #[test]
    fn e0_slope_at_zero_is_capacity() {
        let slope = gallager_e0(1e-4, 1.0, 0.25).unwrap() / 1e-4;
        let c = c_awgn(1.0, 0.25).unwrap();
        assert!((slope - c).abs() < 1e-3, "{slope} vs {c}");
    }

    #[test]
    fn exponent_regimes() {
        let (p, sigma) = (1.0, 0.5);
        let c = 1.0 - awgn_deficit(p / sigma);
        let at_capacity = error_exponent(c, p, sigma).unwrap();
        assert_eq!((at_capacity.value, at_capacity.rho_star), (0.0, 0.0));
        let above = error_exponent((c + 0.1).min(0.99), p, sigma).unwrap();
        assert_eq!(above.value, 0.0);

        let low = error_exponent(1e-3, p, sigma).unwrap();
        let mut grid_best = f64::NEG_INFINITY;
        for i in 0..=1000 {
            let rho = i as f64 / 1000.0;
            grid_best = grid_best.max(gallager_e0(rho, p, sigma).unwrap() - rho * 1e-3);
        }
        assert!((low.value - grid_best).abs() < 1e-9);
        assert_eq!(low.rho_star, 1.0);
        assert!((low.value + 1e-3 - gallager_e0(1.0, p, sigma).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn exponent_nonincreasing_and_convex_in_rate() {
        let (p, sigma) = (0.8, 0.3);
        let rates: Vec<f64> = (1..60).map(|i| i as f64 * 0.015).collect();
        let es: Vec<f64> = rates
            .iter()
            .map(|&r| error_exponent(r, p, sigma).unwrap().value)
            .collect();
        assert!(es.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(es.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-6));
    }

    #[test]
    fn exponent_is_flat_at_capacity() {
        let (p, sigma) = (1.0, 0.4);
        let c = c_awgn(p, sigma).unwrap();
        let h = 1e-4;
        let left = error_exponent(c - h, p, sigma).unwrap().value;
        assert!(left / h < 1e-3, "dE/dR at C ~ {}", left / h);
    }

    #[test]
    fn independent_exponent_reduces_to_awgn_and_has_capacity_slope() {
        let sigma = 0.3;
        let params = ChannelParams::new(sigma, 1e-6, 0.5, 1000, 10).unwrap();
        let ch = IndependentJitterExponent::new(&params).unwrap();
        for rho in [0.25, 1.0] {
            let want = gallager_e0(rho, 1.0, sigma).unwrap();
            assert!((ch.e0(rho).unwrap() - want).abs() < 1e-9);
        }

        let params = params.with_sigma_j(0.2);
        let ch = IndependentJitterExponent::new(&params).unwrap();
        let c = crate::infotheory::capacity_independent(&params).unwrap();
        let h = 1e-4;
        let slope = (ch.e0(2.0 * h).unwrap() - ch.e0(h).unwrap()) / h;
        assert!((slope - c).abs() < 2e-3, "{slope} vs {c}");
        assert_eq!(ch.error_exponent(c + 0.01).unwrap(), 0.0);
        assert!(ch.rcb(0.5 * c, 1000).unwrap() < 1e-6);
    }
}
