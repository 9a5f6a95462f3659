use std::f64::consts::{LN_2, PI};

use crate::channel::ChannelParams;
use crate::numerics::{gauss_hermite, integrate_breaks, normal_pdf, QuadratureSpec};
use crate::{Error, Result};

/// `log2(1 + e^y)` without overflow.
pub(crate) fn log2_1p_exp(y: f64) -> f64 {
    if y > 0.0 {
        (y + (-y).exp().ln_1p()) / LN_2
    } else {
        y.exp().ln_1p() / LN_2
    }
}

/// Largest amplitude-to-noise ratio handled by the Gauss-Hermite branch.
const GH_MAX_RATIO: f64 = 3.0;

/// Capacity deficit `1 - C_AWGN` in bits at amplitude-to-noise ratio
/// `f = p / sigma`, for equiprobable binary input.
///
/// For `f <= 3` the Gaussian expectation `E[log2(1 + exp(f X - f^2/2))]` is
/// taken with 128-point Gauss-Hermite. Above that the integrand develops a
/// kink of width `1/f`, so the substitution `z = f X - f^2/2` is used:
///
/// ```text
/// 1 - C = exp(-f^2/8) / (f ln2 sqrt(2 pi)) * Int exp(-z^2 / 2f^2) exp(-z/2) ln(1 + e^z) dz
/// ```
///
/// which isolates the exponentially small factor and keeps full relative
/// precision as `f -> infinity`.
pub fn awgn_deficit(f: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f <= GH_MAX_RATIO {
        let v = gauss_hermite(128).expectation(|x| log2_1p_exp(f * x - 0.5 * f * f), 0.0, 1.0);
        return v.clamp(0.0, 1.0);
    }
    let g = |z: f64| {
        let soft_plus = if z > 0.0 {
            z + (-z).exp().ln_1p()
        } else {
            z.exp().ln_1p()
        };
        (-z * z / (2.0 * f * f) - 0.5 * z).exp() * soft_plus
    };
    let integral = integrate_breaks(
        g,
        &[-80.0, -20.0, -5.0, 0.0, 5.0, 20.0, 80.0],
        &QuadratureSpec::relative(1e-13),
    )
    .expect("smooth bounded integrand");
    let prefactor = (-f * f / 8.0).exp() / (f * LN_2 * (2.0 * PI).sqrt());
    (prefactor * integral).clamp(0.0, 1.0)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "must be finite and > 0",
        })
    }
}

/// Capacity in bits of the binary-input AWGN channel with amplitude `p`
/// and noise standard deviation `sigma` (equiprobable inputs).
pub fn c_awgn(p: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "must be finite and >= 0",
        });
    }
    Ok(1.0 - awgn_deficit(p / sigma))
}

/// Weak-noise expansion `1 - sqrt(2 pi) / (f ln 2) * exp(-f^2 / 8)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCapacity {
    pub value: f64,
    /// The expansion is only meaningful for `f > 4`.
    pub accuracy_warning: bool,
}

pub fn c_awgn_asymptotic(p: f64, sigma: f64) -> Result<AsymptoticCapacity> {
    check_sigma(sigma)?;
    let f = p / sigma;
    Ok(AsymptoticCapacity {
        value: 1.0 - (2.0 * PI).sqrt() / (f * LN_2) * (-f * f / 8.0).exp(),
        accuracy_warning: f <= 4.0,
    })
}

/// Panel breaks in `u = |J| / sigma_J` where the amplitude ratio `p / sigma`
/// crosses the listed values.
fn jitter_breaks(params: &ChannelParams, ratios: &[f64], u_max: f64) -> Vec<f64> {
    let scale = params.sigma_j / params.pulse_width;
    let mut breaks = vec![0.0, 1.0, 2.0, 4.0, 8.0, u_max];
    for &x in ratios {
        let p = x * params.sigma;
        if p > 0.0 && p < 1.0 {
            let u = (-p.ln()).sqrt() / scale;
            if u < u_max {
                breaks.push(u);
            }
        }
    }
    breaks
}

/// `E_P[1 - C_AWGN(P)]`, the deficit of [`capacity_global`], in bits.
///
/// Integrated adaptively over `u = |J| / sigma_J` so the deficit keeps
/// relative precision when it is tiny.
pub fn capacity_global_deficit(params: &ChannelParams) -> Result<f64> {
    params.validate()?;
    check_sigma(params.sigma)?;
    if params.sigma_j == 0.0 {
        return Ok(awgn_deficit(1.0 / params.sigma));
    }
    let scale = params.sigma_j / params.pulse_width;
    let sigma = params.sigma;
    let breaks = jitter_breaks(params, &[0.5, 1.0, 3.0, 6.0, 10.0, 15.0], 40.0);
    let value = integrate_breaks(
        |u| {
            let x = scale * u;
            2.0 * normal_pdf(u) * awgn_deficit((-x * x).exp() / sigma)
        },
        &breaks,
        &QuadratureSpec::relative(1e-10),
    )?;
    Ok(value)
}

/// Per-probe capacity `E_P[C_AWGN(P)]` of the global-jitter channel with
/// i.u.d. inputs, in bits.
pub fn capacity_global(params: &ChannelParams) -> Result<f64> {
    Ok(1.0 - capacity_global_deficit(params)?)
}

/// Mutual information in bits of the single-probe channel with
/// independent jitter: `w(r|0) = N(r; 0, sigma^2)`,
/// `w(r|1) = E_P[N(r; P, sigma^2)]`, equiprobable input.
pub fn capacity_independent(params: &ChannelParams) -> Result<f64> {
    params.validate()?;
    check_sigma(params.sigma)?;
    let sigma = params.sigma;
    let dist = params.amplitude();
    let ln_norm = (sigma * (2.0 * PI).sqrt()).ln();

    // Log densities of both hypotheses; their difference is the LLR.
    let mut failure = None;
    let mut log_densities = |r: f64| -> (f64, f64) {
        let ln_w0 = -r * r / (2.0 * sigma * sigma) - ln_norm;
        let ln_w1 = match dist.ln_gaussian_kernel(r, sigma) {
            Ok(v) => v - ln_norm,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        };
        (ln_w0, ln_w1)
    };

    // 1 - I = (1/2) Int w0 log2(1 + w1/w0) + (1/2) Int w1 log2(1 + w0/w1)
    let s = sigma;
    let breaks = [
        -8.0 * s,
        -4.0 * s,
        0.0,
        4.0 * s,
        8.0 * s,
        0.25,
        0.5,
        0.75,
        1.0 - 8.0 * s,
        1.0 - 4.0 * s,
        1.0,
        1.0 + 4.0 * s,
        1.0 + 8.0 * s,
    ];
    let deficit = integrate_breaks(
        |r| {
            let (l0, l1) = log_densities(r);
            let d = l1 - l0;
            let a = if l0.is_finite() {
                0.5 * l0.exp() * log2_1p_exp(d)
            } else {
                0.0
            };
            let b = if l1.is_finite() {
                0.5 * l1.exp() * log2_1p_exp(-d)
            } else {
                0.0
            };
            a + b
        },
        &breaks,
        &QuadratureSpec::relative(1e-9),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((1.0 - deficit).clamp(0.0, 1.0))
}

/// Capacities at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub snr_db: f64,
    pub c_awgn_at_p1: f64,
    pub c_global: f64,
    pub c_independent: f64,
}

pub fn capacity_point(params: &ChannelParams) -> Result<CapacityPoint> {
    Ok(CapacityPoint {
        snr_db: params.snr_db()?,
        c_awgn_at_p1: c_awgn(1.0, params.sigma)?,
        c_global: capacity_global(params)?,
        c_independent: capacity_independent(params)?,
    })
}
