use std::f64::consts::{LN_2, PI};

use crate::channel::ChannelParams;
use crate::numerics::{find_root, integrate_breaks, normal_pdf, QuadratureSpec, RootBracket};
use crate::{Error, Result};

use super::capacity::{awgn_deficit, c_awgn, capacity_global};
use super::exponent::{error_exponent, gallager_e0};

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "rate",
            value: rate,
            reason: "must lie in (0, 1)",
        })
    }
}

/// Amplitude-to-noise ratio `x_c` with `C_AWGN` at `f = x_c` equal to `rate`.
pub fn capacity_critical_ratio(rate: f64) -> Result<f64> {
    check_rate(rate)?;
    Ok(find_root(
        |x| awgn_deficit(x) - (1.0 - rate),
        RootBracket::new(0.0, 80.0, 1e-13),
    )?)
}

/// Critical amplitude `p_c = sigma x_c` where the conditional channel
/// saturates the rate; degenerate when `C_AWGN(1, sigma) < rate`.
pub fn capacity_critical_amplitude(rate: f64, sigma: f64) -> Result<f64> {
    let c1 = c_awgn(1.0, sigma)?;
    check_rate(rate)?;
    if c1 < rate {
        return Err(Error::Degenerate(format!(
            "C_AWGN(1, sigma = {sigma}) = {c1:.6} is below the rate {rate}: \
             no critical amplitude in (0, 1]"
        )));
    }
    Ok(sigma * capacity_critical_ratio(rate)?)
}

/// One-sided second derivative from the left, `O(h^2)` accurate.
fn left_second_derivative<F: FnMut(f64) -> Result<f64>>(mut g: F, x: f64, h: f64) -> Result<f64> {
    Ok((2.0 * g(x)? - 5.0 * g(x - h)? + 4.0 * g(x - 2.0 * h)? - g(x - 3.0 * h)?) / (h * h))
}

/// Random coding bound for the global-jitter channel, split at `p_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcbBound {
    pub p_c: f64,
    /// `Pr(P < p_c)`; independent of `N`.
    pub floor_term: f64,
    /// `rho_P(p_c) sqrt(pi / (N E''_RR (dC/dp)^2))` with `E` in nats.
    pub laplace_term: f64,
    pub total: f64,
    /// `d^2 E / dR^2` at `(R, p_c)` in bits per squared bit.
    pub exponent_curvature: f64,
    /// `dC_AWGN / dp` at `p_c`, bits per unit amplitude.
    pub capacity_slope: f64,
    /// Elementary floor bound `p_c^gamma`.
    pub elementary_floor: f64,
    /// High-rate form `(-8 ln(1 - R))^(W^2 / 4 sigma_J^2) sigma^gamma`.
    pub high_rate_floor: f64,
}

/// Curvature `d^2 E / dR^2` of the random-coding exponent at `R = C(p)`.
///
/// `E` is flat to the right of capacity, so the curvature is taken from the
/// left with a one-sided stencil at `h = 1e-3 R` and one Richardson step.
pub fn exponent_curvature_at_capacity(rate: f64, p: f64, sigma: f64) -> Result<f64> {
    let e = |r: f64| -> Result<f64> { Ok(error_exponent(r, p, sigma)?.value) };
    let h = 1e-3 * rate;
    let coarse = left_second_derivative(e, rate, h)?;
    let fine = left_second_derivative(e, rate, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `-1 / E0''(0)`, the analytic curvature of `E(R)` at capacity.
pub fn exponent_curvature_from_e0(p: f64, sigma: f64) -> Result<f64> {
    let h = 1e-3;
    let e0 = |rho: f64| gallager_e0(rho, p, sigma);
    // E0(0) = 0; forward stencil for the second derivative at the boundary.
    let d2 = |h: f64| -> Result<f64> {
        Ok((2.0 * e0(0.0)? - 5.0 * e0(h)? + 4.0 * e0(2.0 * h)? - e0(3.0 * h)?) / (h * h))
    };
    let curvature = (4.0 * d2(0.5 * h)? - d2(h)?) / 3.0;
    Ok(-1.0 / curvature)
}

pub fn rcb_bound(rate: f64, num_probes: usize, params: &ChannelParams) -> Result<RcbBound> {
    params.validate()?;
    if num_probes == 0 {
        return Err(Error::InvalidParameter {
            name: "N",
            value: 0.0,
            reason: "block length must be >= 1",
        });
    }
    let sigma = params.sigma;
    let p_c = capacity_critical_amplitude(rate, sigma)?;
    let dist = params.amplitude();
    let gamma = dist.gamma();
    let floor_term = dist.tail_unchecked(p_c);

    let (laplace_term, curvature, slope) = if params.sigma_j == 0.0 || p_c >= 1.0 {
        (0.0, f64::NAN, f64::NAN)
    } else {
        let curvature = exponent_curvature_at_capacity(rate, p_c, sigma)?;
        let x_c = p_c / sigma;
        let dc = |h: f64| (awgn_deficit(x_c - h) - awgn_deficit(x_c + h)) / (2.0 * h);
        let h = 1e-3 * x_c;
        let slope_x = (4.0 * dc(0.5 * h) - dc(h)) / 3.0;
        let slope = slope_x / sigma;
        let curvature_nats = curvature * LN_2;
        let laplace =
            dist.pdf(p_c)? * (PI / (num_probes as f64 * curvature_nats * slope * slope)).sqrt();
        (laplace, curvature, slope)
    };
    Ok(RcbBound {
        p_c,
        floor_term,
        laplace_term,
        total: floor_term + laplace_term,
        exponent_curvature: curvature,
        capacity_slope: slope,
        elementary_floor: p_c.powf(gamma),
        high_rate_floor: (-8.0 * (1.0 - rate).ln()).powf(gamma / 2.0) * sigma.powf(gamma),
    })
}

/// Fano-type lower bounds on the sector error rate of any non-interleaved
/// code of rate `R` in the limit of large blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoBound {
    pub p_c: f64,
    /// `E[(1 - C_AWGN(P) / R) ; P <= p_c]`.
    pub exact_floor: f64,
    /// `max(0, 1 - C_global / R)`.
    pub weak_floor: f64,
    /// Weak-noise form `I(R) sigma^gamma W / sqrt(2 pi sigma_J^2 ln(1 / p_c))`;
    /// `None` unless `ln(1 / p_c) > 1/2`.
    pub asymptotic_floor: Option<f64>,
}

/// `I(R) = Int_0^{x_c} (dx / x_c) x^gamma (1 - F(x) / R)`, with `F` the
/// AWGN capacity at amplitude-to-noise ratio `x`.
pub fn fano_rate_integral(rate: f64, gamma: f64) -> Result<f64> {
    let x_c = capacity_critical_ratio(rate)?;
    let v = integrate_breaks(
        |x| x.powf(gamma) * (1.0 - (1.0 - awgn_deficit(x)) / rate).max(0.0),
        &[0.0, 0.25 * x_c, 0.5 * x_c, 0.75 * x_c, x_c],
        &QuadratureSpec::relative(1e-10),
    )?;
    Ok(v / x_c)
}

pub fn fano_bound(rate: f64, params: &ChannelParams) -> Result<FanoBound> {
    params.validate()?;
    let sigma = params.sigma;
    let p_c = capacity_critical_amplitude(rate, sigma)?;
    let weak_floor = (1.0 - capacity_global(params)? / rate).max(0.0);
    if params.sigma_j == 0.0 {
        return Ok(FanoBound {
            p_c,
            exact_floor: 0.0,
            weak_floor,
            asymptotic_floor: None,
        });
    }
    let dist = params.amplitude();
    let scale = params.sigma_j / params.pulse_width;
    let u_c = (-p_c.ln()).sqrt() / scale;
    let u_max = u_c.max(40.0) + 10.0;
    let breaks = [
        u_c,
        u_c + 0.05,
        u_c + 0.25,
        u_c + 1.0,
        u_c + 3.0,
        u_c + 8.0,
        u_max,
    ];
    let exact_floor = integrate_breaks(
        |u| {
            let x = scale * u;
            let p = (-x * x).exp();
            let c = 1.0 - awgn_deficit(p / sigma);
            2.0 * normal_pdf(u) * (1.0 - c / rate).max(0.0)
        },
        &breaks,
        &QuadratureSpec::relative(1e-9),
    )?;
    let log_inv = -p_c.ln();
    let asymptotic_floor = if log_inv > 0.5 {
        let gamma = dist.gamma();
        Some(
            fano_rate_integral(rate, gamma)? * sigma.powf(gamma) * params.pulse_width
                / (2.0 * PI * params.sigma_j * params.sigma_j * log_inv).sqrt(),
        )
    } else {
        None
    };
    Ok(FanoBound {
        p_c,
        exact_floor,
        weak_floor,
        asymptotic_floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sigma_from_snr;

    fn params(snr: f64, sj: f64) -> ChannelParams {
        ChannelParams::new(sigma_from_snr(snr), sj, 0.5, 1000, 10).unwrap()
    }

    #[test]
    fn critical_ratio_solves_capacity_equation() {
        for r in [0.1, 0.5, 0.8, 0.9] {
            let x = capacity_critical_ratio(r).unwrap();
            assert!((1.0 - awgn_deficit(x) - r).abs() < 1e-11);
        }
        assert!(matches!(
            capacity_critical_amplitude(0.9, 1.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn rcb_floor_is_block_length_free_and_laplace_scales() {
        let p = params(18.0, 0.2);
        let a = rcb_bound(0.8, 1000, &p).unwrap();
        let b = rcb_bound(0.8, 4000, &p).unwrap();
        assert_eq!(a.floor_term, b.floor_term);
        assert!((a.laplace_term / b.laplace_term - 2.0).abs() < 1e-12);
        assert!(a.floor_term <= a.elementary_floor);
    }

    #[test]
    fn rcb_floor_vanishes_at_low_rate() {
        let p = params(14.0, 0.2);
        let floors: Vec<f64> = [0.5, 0.2, 0.05, 0.01]
            .iter()
            .map(|&r| rcb_bound(r, 1000, &p).unwrap().floor_term)
            .collect();
        assert!(floors.windows(2).all(|w| w[1] < w[0]));
        assert!(floors[3] < 1e-4);
    }

    #[test]
    fn curvature_matches_e0_expansion() {
        for (p, sigma) in [(1.0, 0.4), (0.7, 0.2), (0.5, 0.25)] {
            let c = c_awgn(p, sigma).unwrap();
            let numeric = exponent_curvature_at_capacity(c, p, sigma).unwrap();
            let analytic = exponent_curvature_from_e0(p, sigma).unwrap();
            assert!(
                (numeric / analytic - 1.0).abs() < 0.02,
                "{numeric} vs {analytic}"
            );
        }
    }

    #[test]
    fn fano_weak_floor_arithmetic() {
        let p = params(10.0, 0.2);
        let cg = capacity_global(&p).unwrap();
        let f = fano_bound(cg * 0.99, &p).unwrap();
        assert_eq!(f.weak_floor, 0.0);
        if 2.0 * cg < 1.0 && c_awgn(1.0, p.sigma).unwrap() >= 2.0 * cg {
            let f = fano_bound(2.0 * cg, &p).unwrap();
            assert!((f.weak_floor - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn fano_below_rcb_floor() {
        for snr in [12.0, 16.0, 20.0, 26.0] {
            for r in [0.3, 0.5, 0.8] {
                let p = params(snr, 0.2);
                let (Ok(f), Ok(b)) = (fano_bound(r, &p), rcb_bound(r, 1000, &p)) else {
                    continue;
                };
                assert!(f.exact_floor <= b.floor_term);
                assert!(f.exact_floor >= 0.0);
                if let Some(a) = f.asymptotic_floor {
                    assert!(
                        a <= f.exact_floor * (1.0 + 1e-6),
                        "snr {snr} r {r}: {a} > {}",
                        f.exact_floor
                    );
                }
            }
        }
    }
}
