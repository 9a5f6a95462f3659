//! Large-deviation analysis of Reed-Solomon sectors on the jittered channel.
//!
//! One sector is one array snapshot: `N = n * N_s` bits grouped into `N_s`
//! symbols of `n` bits. Given the amplitude `p`, symbols fail independently
//! with probability `e1(p) = 1 - (1 - Q(p / 2 sigma))^n`, and a bounded-distance
//! decoder fails iff more than `t` symbols are wrong. Conditionally on `p`
//! that probability decays like `exp(-N_s I(tau, p))` with the Bernoulli
//! divergence `I = D(tau || e1(p))` as long as `e1(p) < tau`. The amplitude
//! `p_c` where `e1(p_c) = tau` splits the sector error rate into a
//! block-size-independent floor `Pr(P <= p_c)` and a Laplace term that
//! vanishes like `N_s^(-1/2)`.
//!
//! Rate functions are in nats per symbol.

use crate::channel::{AmplitudeDistribution, ChannelParams};
use crate::numerics::{
    find_root, integrate_breaks, kl_bernoulli, normal_pdf, q_tail, QuadratureSpec, RootBracket,
};
use crate::{Error, Result};

/// Symbol-level description of a (possibly shortened) RS code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RsCode {
    pub symbol_bits: usize,
    pub block_symbols: usize,
    pub info_symbols: usize,
}

impl RsCode {
    pub fn new(symbol_bits: usize, block_symbols: usize, info_symbols: usize) -> Result<Self> {
        let code = Self {
            symbol_bits,
            block_symbols,
            info_symbols,
        };
        code.validate()?;
        Ok(code)
    }

    /// Code with `K_s = round(rate * N_s)`.
    pub fn from_rate(symbol_bits: usize, block_symbols: usize, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: rate,
                reason: "must lie in (0, 1)",
            });
        }
        Self::new(
            symbol_bits,
            block_symbols,
            (rate * block_symbols as f64).round() as usize,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.symbol_bits == 0 || self.symbol_bits > 32 {
            return Err(Error::Shape(format!(
                "symbol size must be 1..=32 bits, got {}",
                self.symbol_bits
            )));
        }
        let max_len = (1u64 << self.symbol_bits) - 1;
        if self.block_symbols as u64 > max_len || self.block_symbols < 2 {
            return Err(Error::Shape(format!(
                "block length {} outside 2..={max_len} for {}-bit symbols",
                self.block_symbols, self.symbol_bits
            )));
        }
        if self.info_symbols == 0 || self.info_symbols >= self.block_symbols {
            return Err(Error::Shape(format!(
                "need 0 < K_s < N_s, got K_s = {}, N_s = {}",
                self.info_symbols, self.block_symbols
            )));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.info_symbols as f64 / self.block_symbols as f64
    }

    /// Maximal correctable fraction `(1 - R) / 2`.
    pub fn tau(&self) -> f64 {
        (1.0 - self.rate()) / 2.0
    }

    /// Correctable symbol count `floor((N_s - K_s) / 2)`.
    pub fn correctable(&self) -> usize {
        (self.block_symbols - self.info_symbols) / 2
    }

    pub fn num_bits(&self) -> usize {
        self.symbol_bits * self.block_symbols
    }
}

fn check_amplitude_and_sigma(p: f64, sigma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "amplitude must lie in [0, 1]",
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

/// `Q(p / 2 sigma)`, the bit error rate of the genie threshold at amplitude `p`.
pub fn cond_bit_error(p: f64, sigma: f64) -> Result<f64> {
    check_amplitude_and_sigma(p, sigma)?;
    let f = q_tail(p / (2.0 * sigma));
    debug_assert!(f <= chernoff_bit_bound(p, sigma) * (1.0 + 1e-12));
    Ok(f)
}

/// `exp(-p^2 / 8 sigma^2) / 2`, an upper bound on [`cond_bit_error`].
pub fn chernoff_bit_bound(p: f64, sigma: f64) -> f64 {
    0.5 * (-p * p / (8.0 * sigma * sigma)).exp()
}

/// Symbol error rate `1 - (1 - f)^n` from a bit error rate `f`.
pub fn symbol_error_from_bit(f: f64, n: usize) -> f64 {
    -(n as f64 * (-f).ln_1p()).exp_m1()
}

/// `e1(p) = 1 - (1 - Q(p / 2 sigma))^n`.
pub fn cond_symbol_error(p: f64, sigma: f64, n: usize) -> Result<f64> {
    Ok(symbol_error_from_bit(cond_bit_error(p, sigma)?, n))
}

/// High-rate linearization `n Q(p / 2 sigma)` of [`cond_symbol_error`].
pub fn cond_symbol_error_linear(p: f64, sigma: f64, n: usize) -> Result<f64> {
    Ok(n as f64 * cond_bit_error(p, sigma)?)
}

/// One evaluation of the conditional rate function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFunctionPoint {
    pub p: f64,
    pub e1: f64,
    /// Chernoff parameter at the optimum; `<= 0` when the bound is trivial.
    pub lambda_c: f64,
    /// `D(tau || e1)` in nats if `e1 < tau`, else 0.
    pub value: f64,
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "must lie in (0, 1/2)",
        })
    }
}

/// Rate function at a given symbol error rate `e1`.
pub fn rate_function_at(tau: f64, e1: f64) -> Result<RateFunctionPoint> {
    check_tau(tau)?;
    if !(0.0..=1.0).contains(&e1) {
        return Err(Error::InvalidParameter {
            name: "e1",
            value: e1,
            reason: "must lie in [0, 1]",
        });
    }
    let lambda_c = ((1.0 - e1) / e1 * tau / (1.0 - tau)).ln();
    let value = if e1 >= tau {
        0.0
    } else if e1 == 0.0 {
        f64::INFINITY
    } else {
        kl_bernoulli(tau, e1)?
    };
    Ok(RateFunctionPoint {
        p: f64::NAN,
        e1,
        lambda_c: if e1 == tau { 0.0 } else { lambda_c },
        value,
    })
}

/// `I(tau, p)` with `e1 = cond_symbol_error(p, sigma, n)`.
pub fn rate_function(tau: f64, p: f64, sigma: f64, n: usize) -> Result<RateFunctionPoint> {
    let e1 = cond_symbol_error(p, sigma, n)?;
    Ok(RateFunctionPoint {
        p,
        ..rate_function_at(tau, e1)?
    })
}

/// Root of `e1(p) = tau` together with its high-rate estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalAmplitude {
    pub p_c: f64,
    /// `sigma sqrt(8 ln(n / 2 tau))`, never below `p_c`.
    pub p_c_high_rate: f64,
}

/// Ratio `p / sigma` solving `1 - (1 - Q(x / 2))^n = tau`.
fn critical_ratio(tau: f64, n: usize) -> Result<f64> {
    let g = |x: f64| symbol_error_from_bit(q_tail(0.5 * x), n) - tau;
    Ok(find_root(g, RootBracket::new(0.0, 80.0, 1e-13))?)
}

/// Amplitude at which the conditional symbol error rate equals `tau`.
///
/// Fails with [`Error::Degenerate`] when even `p = 1` leaves `e1 > tau`.
pub fn critical_amplitude(tau: f64, sigma: f64, n: usize) -> Result<CriticalAmplitude> {
    check_tau(tau)?;
    let e1_full = cond_symbol_error(1.0, sigma, n)?;
    if e1_full > tau {
        return Err(Error::Degenerate(format!(
            "e1(1) = {e1_full:.6} exceeds tau = {tau} at sigma = {sigma}, n = {n}: \
             no critical amplitude in (0, 1]"
        )));
    }
    let p_c = sigma * critical_ratio(tau, n)?;
    let p_c_high_rate = sigma * (8.0 * (n as f64 / (2.0 * tau)).ln()).sqrt();
    debug_assert!(p_c_high_rate >= p_c * (1.0 - 1e-9));
    Ok(CriticalAmplitude { p_c, p_c_high_rate })
}

/// The Laplace-split sector error upper estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerBound {
    pub p_c: f64,
    /// `Pr(P <= p_c)`; independent of the block length.
    pub floor_term: f64,
    /// `rho_P(p_c) sqrt(pi / (N_s F''(p_c)))`.
    pub laplace_term: f64,
    pub total: f64,
}

fn check_symbol_bits(params: &ChannelParams, code: &RsCode) -> Result<()> {
    if params.symbol_bits != code.symbol_bits {
        return Err(Error::Shape(format!(
            "channel symbol size {} differs from code symbol size {}",
            params.symbol_bits, code.symbol_bits
        )));
    }
    Ok(())
}

/// Sector error rate estimate `Pr(P <= p_c) + rho_P(p_c) sqrt(pi / (N_s F''(p_c)))`
/// where `F(p) = D(tau || e1(p))`.
pub fn ser_upper_bound(params: &ChannelParams, code: &RsCode) -> Result<SerBound> {
    params.validate()?;
    code.validate()?;
    check_symbol_bits(params, code)?;
    let (tau, sigma, n) = (code.tau(), params.sigma, code.symbol_bits);
    let p_c = critical_amplitude(tau, sigma, n)?.p_c;
    let dist = params.amplitude();
    let floor_term = dist.tail_unchecked(p_c);

    let big_f = |p: f64| -> Result<f64> { Ok(kl_bernoulli(tau, cond_symbol_error(p, sigma, n)?)?) };
    let h = 1e-4 * p_c;
    let f2 = (big_f(p_c + h)? - 2.0 * big_f(p_c)? + big_f(p_c - h)?) / (h * h);
    let density = if p_c < 1.0 { dist.pdf(p_c)? } else { 0.0 };
    let laplace_term = if density == 0.0 {
        0.0
    } else {
        density * (std::f64::consts::PI / (code.block_symbols as f64 * f2)).sqrt()
    };
    Ok(SerBound {
        p_c,
        floor_term,
        laplace_term,
        total: floor_term + laplace_term,
    })
}

/// `Pr(Bin(n, e) > t)`, summed in log space from the upper end.
pub fn binomial_upper_tail(n: usize, e: f64, t: usize) -> f64 {
    if t >= n {
        return 0.0;
    }
    if e <= 0.0 {
        return 0.0;
    }
    if e >= 1.0 {
        return 1.0;
    }
    let (ln_e, ln_1me) = (e.ln(), (-e).ln_1p());
    let nf = n as f64;
    let ln_choose =
        |k: f64| libm::lgamma(nf + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(nf - k + 1.0);
    let terms: Vec<f64> = ((t + 1)..=n)
        .map(|k| {
            let k = k as f64;
            ln_choose(k) + k * ln_e + (nf - k) * ln_1me
        })
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|&l| (l - max).exp()).sum();
    (max + sum.ln()).exp().min(1.0)
}

/// Exact conditional sector error rate `Pr(Bin(N_s, e1(p)) > t)`.
pub fn cond_sector_error(p: f64, sigma: f64, code: &RsCode) -> Result<f64> {
    let e1 = cond_symbol_error(p, sigma, code.symbol_bits)?;
    Ok(binomial_upper_tail(
        code.block_symbols,
        e1,
        code.correctable(),
    ))
}

/// Sector error rate of the genie detector, `E_P[Pr(Bin(N_s, e1(P)) > t)]`.
pub fn ser_exact(params: &ChannelParams, code: &RsCode) -> Result<f64> {
    params.validate()?;
    code.validate()?;
    check_symbol_bits(params, code)?;
    let sigma = params.sigma;
    if params.sigma_j == 0.0 {
        return cond_sector_error(1.0, sigma, code);
    }
    let scale = params.sigma_j / params.pulse_width;
    let mut breaks = vec![0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0];
    if let Ok(c) = critical_amplitude(code.tau(), sigma, code.symbol_bits) {
        let u_c = (-c.p_c.ln()).sqrt() / scale;
        breaks.extend(
            [0.9 * u_c, u_c, 1.1 * u_c]
                .into_iter()
                .filter(|u| *u < 40.0),
        );
    }
    let mut failure = None;
    let value = integrate_breaks(
        |u| {
            let x = scale * u;
            let p = (-x * x).exp();
            match cond_sector_error(p, sigma, code) {
                Ok(s) => 2.0 * normal_pdf(u) * s,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &breaks,
        &QuadratureSpec::adaptive_simpson().with_tolerances(1e-15, 1e-7),
    )?;
    // Quadrature error can lift a saturated integral a hair above one.
    match failure {
        Some(e) => Err(e),
        None => Ok(value.clamp(0.0, 1.0)),
    }
}

/// High-rate power-law floor `coefficient * sigma^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighRateFloor {
    /// `(8 ln(n / 2 tau))^(W^2 / 4 sigma_J^2)`, independent of `sigma`.
    pub coefficient: f64,
    /// `gamma = W^2 / (2 sigma_J^2)`, independent of rate and block length.
    pub exponent: f64,
    /// The approximation assumes `tau << 1`; set when `tau > 0.15`.
    pub low_rate_warning: bool,
}

impl HighRateFloor {
    /// Slope of `log10(floor)` against SNR in dB.
    pub fn slope_db(&self) -> f64 {
        -self.exponent / 20.0
    }

    pub fn evaluate(&self, sigma: f64) -> f64 {
        self.coefficient * sigma.powf(self.exponent)
    }
}

pub fn high_rate_floor(dist: &AmplitudeDistribution, code: &RsCode) -> HighRateFloor {
    let gamma = dist.gamma();
    let tau = code.tau();
    HighRateFloor {
        coefficient: (8.0 * (code.symbol_bits as f64 / (2.0 * tau)).ln()).powf(gamma / 2.0),
        exponent: gamma,
        low_rate_warning: tau > 0.15,
    }
}

/// Interleaver size `10^3 N L` in bits needed to average out jitter with
/// correlation length `L` samples over an `N`-probe array.
pub fn interleaving_block_estimate(num_probes: u64, correlation_length: u64) -> Result<u64> {
    if num_probes == 0 || correlation_length == 0 {
        return Err(Error::InvalidParameter {
            name: "num_probes/correlation_length",
            value: 0.0,
            reason: "both must be >= 1",
        });
    }
    Ok(1000 * num_probes * correlation_length)
}
