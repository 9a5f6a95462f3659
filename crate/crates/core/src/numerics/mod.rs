//! Shared numerical kernel: Gaussian tail, Bernoulli KL divergence,
//! quadrature, bracketing root finding and scalar maximization.
//!
//! Everything here is a pure function of its inputs. Divergences and rate
//! functions are in nats; callers convert to bits where their contract says so.

mod optimize;
mod quadrature;

pub use optimize::{find_root, maximize_scalar, RootBracket};
pub use quadrature::{
    gauss_hermite, integrate_1d, integrate_breaks, Domain, GaussHermite, QuadratureMethod,
    QuadratureSpec,
};

use std::f64::consts::FRAC_1_SQRT_2;

use thiserror::Error;

/// Failures of the numerical kernel.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error_estimate}")]
    NonConvergence { estimate: f64, error_estimate: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),

    #[error("{method} cannot integrate over {domain}")]
    UnsupportedDomain {
        method: &'static str,
        domain: &'static str,
    },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("non-finite function value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },
}

pub(crate) fn check_open_unit(what: &'static str, value: f64) -> Result<(), NumericsError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(NumericsError::Domain {
            what,
            value,
            expected: "(0, 1)",
        })
    }
}

/// Upper tail of the standard normal, `Pr(Z > x)`.
///
/// Computed as `erfc(x / sqrt 2) / 2`, which keeps full relative precision
/// deep into the upper tail and underflows cleanly to zero past x ~ 38.
pub fn q_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Kullback-Leibler divergence `D((1-t, t) || (1-e, e))` in nats.
pub fn kl_bernoulli(t: f64, e: f64) -> Result<f64, NumericsError> {
    check_open_unit("t", t)?;
    check_open_unit("e", e)?;
    let value = (1.0 - t) * ((1.0 - t) / (1.0 - e)).ln() + t * (t / e).ln();
    // Rounding can leave a -1e-17 residue when t == e.
    Ok(value.max(0.0))
}

/// Ordinary least-squares line through `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit, NumericsError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(NumericsError::TooFewPoints {
            needed: 2,
            got: xs.len().min(ys.len()),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}
