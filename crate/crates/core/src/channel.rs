//! The global-jitter channel.
//!
//! At each sampling instant a single jitter `J ~ N(0, sigma_J^2)` scales the
//! amplitude of all `N` probes by `p(J) = exp(-J^2 / W^2)`, and each probe
//! adds independent Gaussian noise:
//!
//! ```text
//! r_k = p(J) * a_k + sigma * n_k
//! ```
//!
//! Signal units put the noiseless written `1` at amplitude 1, so the SNR is
//! `10 log10(1 / sigma^2)` dB.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::numerics::{gauss_hermite, integrate_breaks, q_tail, QuadratureSpec};
use crate::{Error, Result};

/// `exp(-J^2 / W^2)`.
pub fn pulse_response(jitter: f64, pulse_width: f64) -> f64 {
    let x = jitter / pulse_width;
    (-x * x).exp()
}

/// `10 log10(1 / sigma^2)`.
pub fn snr_db(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "SNR requires a finite sigma > 0",
        });
    }
    Ok(-20.0 * sigma.log10())
}

/// Inverse of [`snr_db`].
pub fn sigma_from_snr(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 20.0)
}

/// Physical parameters of one channel instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Additive noise standard deviation, in signal units.
    pub sigma: f64,
    /// Jitter standard deviation, in length units.
    pub sigma_j: f64,
    /// Pulse width `W`, in the same length units as `sigma_j`.
    pub pulse_width: f64,
    /// Number of probes `N` read in parallel.
    pub num_probes: usize,
    /// Bits per Reed-Solomon symbol.
    pub symbol_bits: usize,
}

impl ChannelParams {
    pub fn new(
        sigma: f64,
        sigma_j: f64,
        pulse_width: f64,
        num_probes: usize,
        symbol_bits: usize,
    ) -> Result<Self> {
        let params = Self {
            sigma,
            sigma_j,
            pulse_width,
            num_probes,
            symbol_bits,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| {
            Err(Error::InvalidParameter {
                name,
                value,
                reason,
            })
        };
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad("sigma", self.sigma, "must be finite and >= 0");
        }
        if !(self.sigma_j >= 0.0 && self.sigma_j.is_finite()) {
            return bad("sigma_j", self.sigma_j, "must be finite and >= 0");
        }
        if !(self.pulse_width > 0.0 && self.pulse_width.is_finite()) {
            return bad("pulse_width", self.pulse_width, "must be finite and > 0");
        }
        if self.num_probes == 0 {
            return bad("num_probes", 0.0, "must be >= 1");
        }
        if self.symbol_bits == 0 {
            return bad("symbol_bits", 0.0, "must be >= 1");
        }
        Ok(())
    }

    /// `W^2 / (2 sigma_J^2)`; infinite without jitter.
    pub fn gamma(&self) -> f64 {
        self.amplitude().gamma()
    }

    pub fn snr_db(&self) -> Result<f64> {
        snr_db(self.sigma)
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_snr_db(self, snr_db: f64) -> Self {
        self.with_sigma(sigma_from_snr(snr_db))
    }

    pub fn with_sigma_j(mut self, sigma_j: f64) -> Self {
        self.sigma_j = sigma_j;
        self
    }

    pub fn with_num_probes(mut self, num_probes: usize) -> Self {
        self.num_probes = num_probes;
        self
    }

    pub fn amplitude(&self) -> AmplitudeDistribution {
        AmplitudeDistribution {
            sigma_j: self.sigma_j,
            pulse_width: self.pulse_width,
        }
    }
}

/// Law of the amplitude `P = exp(-J^2 / W^2)` for Gaussian `J`.
///
/// With `gamma = W^2 / (2 sigma_J^2)` the density on `(0, 1)` is
/// `W / sqrt(2 pi sigma_J^2 ln(1/p)) * p^(gamma - 1)`. It is singular at
/// `p = 1`, so expectations are taken in `J` where the measure is Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDistribution {
    pub sigma_j: f64,
    pub pulse_width: f64,
}

impl AmplitudeDistribution {
    pub fn new(sigma_j: f64, pulse_width: f64) -> Result<Self> {
        ChannelParams::new(1.0, sigma_j, pulse_width, 1, 1).map(|p| p.amplitude())
    }

    pub fn gamma(&self) -> f64 {
        self.pulse_width * self.pulse_width / (2.0 * self.sigma_j * self.sigma_j)
    }

    fn check_p(p: f64) -> Result<()> {
        crate::numerics::check_open_unit("p", p).map_err(Error::from)
    }

    /// Density of `P` at `p in (0, 1)`.
    pub fn pdf(&self, p: f64) -> Result<f64> {
        Self::check_p(p)?;
        Ok(self.pdf_at_log_inverse(-p.ln()))
    }

    /// Density of `P` at the amplitude whose `ln(1/p)` equals `l > 0`.
    ///
    /// Passing `l` directly avoids the cancellation of `1 - p` near `p = 1`.
    pub fn pdf_at_log_inverse(&self, l: f64) -> f64 {
        if self.sigma_j == 0.0 {
            return 0.0;
        }
        let g = self.gamma();
        self.pulse_width / (2.0 * PI * self.sigma_j * self.sigma_j * l).sqrt()
            * (-(g - 1.0) * l).exp()
    }

    /// Density of `P` at `p(J)`, evaluated through `ln(1/p) = J^2 / W^2`.
    pub fn pdf_at_jitter(&self, jitter: f64) -> f64 {
        let x = jitter / self.pulse_width;
        self.pdf_at_log_inverse(x * x)
    }

    /// Jitter magnitude at which the amplitude falls to `p_c`.
    pub fn critical_jitter(&self, p_c: f64) -> f64 {
        self.pulse_width * (-p_c.ln()).sqrt()
    }

    /// `Pr(P <= p_c) = 2 Q(J_c / sigma_J)`.
    pub fn tail(&self, p_c: f64) -> Result<f64> {
        Self::check_p(p_c)?;
        Ok(self.tail_unchecked(p_c))
    }

    pub(crate) fn tail_unchecked(&self, p_c: f64) -> f64 {
        if p_c >= 1.0 {
            return 1.0;
        }
        if p_c <= 0.0 {
            return 0.0;
        }
        if self.sigma_j == 0.0 {
            return 0.0;
        }
        2.0 * q_tail(self.critical_jitter(p_c) / self.sigma_j)
    }

    /// Elementary upper bound `p_c^gamma` on [`tail`](Self::tail).
    pub fn tail_bound(&self, p_c: f64) -> Result<f64> {
        Self::check_p(p_c)?;
        Ok(p_c.powf(self.gamma()))
    }

    /// `E[P^k] = 1 / sqrt(1 + 2 k sigma_J^2 / W^2)`.
    pub fn moment(&self, k: f64) -> f64 {
        let r = self.sigma_j / self.pulse_width;
        1.0 / (1.0 + 2.0 * k * r * r).sqrt()
    }

    /// `E[f(P)]` by Gauss-Hermite quadrature in `J`.
    pub fn expect<F: FnMut(f64) -> f64>(&self, order: usize, mut f: F) -> f64 {
        let w = self.pulse_width;
        gauss_hermite(order).expectation(|j| f(pulse_response(j, w)), 0.0, self.sigma_j)
    }

    /// Jitter-averaged Gaussian density `E_P[N(r; P, sigma^2)]`.
    pub fn mixture_pdf(&self, r: f64, sigma: f64) -> Result<f64> {
        let ln_norm = (sigma * (2.0 * PI).sqrt()).ln();
        Ok((self.ln_gaussian_kernel(r, sigma)? - ln_norm).exp())
    }

    /// `ln E_P[exp(-(r - P)^2 / (2 sigma^2))]`, finite even where the
    /// expectation itself underflows.
    ///
    /// Integrates over `u = |J| / sigma_J` with the log-integrand shifted by
    /// its maximum, and panel breaks where `p(u)` crosses `r` and
    /// `r +- 8 sigma`, so the narrow noise peak is resolved at any SNR.
    pub fn ln_gaussian_kernel(&self, r: f64, sigma: f64) -> Result<f64> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: sigma,
                reason: "mixture density needs sigma > 0",
            });
        }
        let quad = |p: f64| -(r - p) * (r - p) / (2.0 * sigma * sigma);
        if self.sigma_j == 0.0 {
            return Ok(quad(1.0));
        }
        const LN_2_OVER_SQRT_2PI: f64 = -0.225_791_352_644_727_4; // ln(2 / sqrt(2 pi))
        let scale = self.sigma_j / self.pulse_width;
        let log_integrand = |u: f64| {
            let x = scale * u;
            LN_2_OVER_SQRT_2PI - 0.5 * u * u + quad((-x * x).exp())
        };
        let u_max = 40.0;
        let mut breaks = vec![0.0, 1.0, 2.0, 4.0, 8.0, 16.0, u_max];
        for c in [r - 8.0 * sigma, r, r + 8.0 * sigma] {
            if c > 0.0 && c < 1.0 {
                let u = (-c.ln()).sqrt() / scale;
                if u < u_max {
                    breaks.push(u);
                }
            }
        }
        let peak = breaks
            .iter()
            .copied()
            .chain((0..=400).map(|i| i as f64 * 0.05))
            .map(log_integrand)
            .fold(f64::NEG_INFINITY, f64::max);
        let spec = QuadratureSpec::relative(1e-10);
        let value = integrate_breaks(|u| (log_integrand(u) - peak).exp(), &breaks, &spec)?;
        Ok(peak + value.ln())
    }

    /// One draw of `(J, p(J))`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let z: f64 = rng.sample(StandardNormal);
        let j = self.sigma_j * z;
        (j, pulse_response(j, self.pulse_width))
    }
}

/// First-order autoregressive jitter with correlation length `L` samples.
///
/// Successive jitters have correlation `exp(-1 / L)` and marginal law
/// `N(0, sigma_J^2)`. Only used to illustrate interleaving depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Jitter {
    sigma_j: f64,
    rho: f64,
    state: f64,
}

impl Ar1Jitter {
    pub fn new<R: Rng + ?Sized>(
        sigma_j: f64,
        correlation_length: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if !(correlation_length > 0.0) {
            return Err(Error::InvalidParameter {
                name: "correlation_length",
                value: correlation_length,
                reason: "must be > 0",
            });
        }
        let z: f64 = rng.sample(StandardNormal);
        Ok(Self {
            sigma_j,
            rho: (-1.0 / correlation_length).exp(),
            state: sigma_j * z,
        })
    }

    pub fn correlation(&self) -> f64 {
        self.rho
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        let current = self.state;
        self.state = self.rho * self.state + (1.0 - self.rho * self.rho).sqrt() * self.sigma_j * z;
        current
    }
}

/// Source of written bits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BitSource {
    /// Independent fair coins.
    #[default]
    Iud,
    /// A fixed pattern of length `N`, entries 0 or 1.
    Pattern(Vec<u8>),
}

/// One sampling instant of the whole array.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArraySnapshot {
    pub bits: Vec<u8>,
    pub jitter: f64,
    pub amplitude: f64,
    pub outputs: Vec<f64>,
}

impl ArraySnapshot {
    pub fn with_capacity(num_probes: usize) -> Self {
        Self {
            bits: Vec::with_capacity(num_probes),
            jitter: 0.0,
            amplitude: 1.0,
            outputs: Vec::with_capacity(num_probes),
        }
    }
}

/// Draw a fresh snapshot.
pub fn sample_snapshot<R: Rng + ?Sized>(
    params: &ChannelParams,
    source: &BitSource,
    rng: &mut R,
) -> Result<ArraySnapshot> {
    let mut snap = ArraySnapshot::with_capacity(params.num_probes);
    fill_snapshot(&mut snap, params, source, rng)?;
    Ok(snap)
}

/// Overwrite `snap` with a fresh snapshot, reusing its buffers.
///
/// Draw order is fixed (jitter, then bits in 64-bit words, then noise in
/// probe order) so a given stream state always yields the same snapshot.
pub fn fill_snapshot<R: Rng + ?Sized>(
    snap: &mut ArraySnapshot,
    params: &ChannelParams,
    source: &BitSource,
    rng: &mut R,
) -> Result<()> {
    let n = params.num_probes;
    let (jitter, amplitude) = params.amplitude().sample(rng);
    snap.jitter = jitter;
    snap.amplitude = amplitude;
    snap.bits.clear();
    match source {
        BitSource::Iud => {
            let mut remaining = n;
            while remaining > 0 {
                let word: u64 = rng.random();
                let take = remaining.min(64);
                snap.bits.extend((0..take).map(|i| ((word >> i) & 1) as u8));
                remaining -= take;
            }
        }
        BitSource::Pattern(pattern) => {
            if pattern.len() != n || pattern.iter().any(|&b| b > 1) {
                return Err(Error::Shape(format!(
                    "bit pattern must hold {n} entries in {{0, 1}}, got {} entries",
                    pattern.len()
                )));
            }
            snap.bits.extend_from_slice(pattern);
        }
    }
    snap.outputs.clear();
    let sigma = params.sigma;
    snap.outputs.extend(snap.bits.iter().map(|&a| {
        let z: f64 = rng.sample(StandardNormal);
        amplitude * f64::from(a) + sigma * z
    }));
    Ok(())
}
