//! Bit-by-bit threshold detectors for one array snapshot.
//!
//! All three detectors decide `1` iff `r_k > threshold` and differ only in
//! the threshold:
//!
//! * **Genie** knows the realized amplitude `p` and uses `p / 2`.
//! * **LLN** estimates it from the data as the output mean `T_N`. For
//!   i.u.d. bits `T_N -> p / 2` as `N` grows.
//! * **Fixed** uses a single constant `r0`, the crossing point of the
//!   jitter-averaged per-probe likelihoods.
//!
//! Ties resolve to `0`. Only the genie entry point accepts an amplitude, so
//! the other detectors cannot see it.

use std::fmt;
use std::str::FromStr;

use crate::channel::ChannelParams;
use crate::numerics::{find_root, RootBracket};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    Genie,
    Lln,
    Fixed,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 3] =
        [DetectorKind::Genie, DetectorKind::Lln, DetectorKind::Fixed];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Genie => "genie",
            DetectorKind::Lln => "lln",
            DetectorKind::Fixed => "fixed",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "genie" => Ok(DetectorKind::Genie),
            "lln" => Ok(DetectorKind::Lln),
            "fixed" => Ok(DetectorKind::Fixed),
            other => Err(Error::Config(format!(
                "unknown detector {other:?} (expected genie, lln or fixed)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub estimated_bits: Vec<u8>,
    pub threshold_used: f64,
    pub detector_kind: DetectorKind,
}

fn decide(outputs: &[f64], threshold: f64, kind: DetectorKind) -> DetectionResult {
    DetectionResult {
        estimated_bits: outputs.iter().map(|&r| u8::from(r > threshold)).collect(),
        threshold_used: threshold,
        detector_kind: kind,
    }
}

/// Sample mean of the outputs, the LLN threshold `T_N`.
pub fn lln_threshold(outputs: &[f64]) -> Result<f64> {
    if outputs.is_empty() {
        return Err(Error::Shape(
            "LLN detection needs at least one output".into(),
        ));
    }
    Ok(outputs.iter().sum::<f64>() / outputs.len() as f64)
}

/// Threshold `p / 2` with the true amplitude.
pub fn genie_detect(outputs: &[f64], amplitude: f64) -> Result<DetectionResult> {
    if !(amplitude > 0.0 && amplitude <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "amplitude",
            value: amplitude,
            reason: "must lie in (0, 1]",
        });
    }
    Ok(decide(outputs, 0.5 * amplitude, DetectorKind::Genie))
}

/// Threshold at the output mean.
///
/// Assumes roughly balanced input bits; with biased input `T_N` drifts away
/// from `p / 2`.
pub fn lln_detect(outputs: &[f64]) -> Result<DetectionResult> {
    Ok(decide(outputs, lln_threshold(outputs)?, DetectorKind::Lln))
}

pub fn fixed_threshold_detect(outputs: &[f64], r0: f64) -> DetectionResult {
    decide(outputs, r0, DetectorKind::Fixed)
}

/// Crossing point `r0` of the single-probe likelihoods
/// `E_P[N(r; P, sigma^2)]` and `N(r; 0, sigma^2)` on `[0, 1/2]`.
///
/// The log-likelihood ratio `ln E_P[exp((2 r P - P^2) / (2 sigma^2))]` is
/// increasing in `r`, negative at 0 and nonnegative at 1/2, so the crossing
/// is unique. Without jitter it is exactly 1/2.
pub fn optimal_single_probe_threshold(params: &ChannelParams) -> Result<f64> {
    let sigma = params.sigma;
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "the likelihood crossing needs sigma > 0",
        });
    }
    let dist = params.amplitude();
    let mut failure = None;
    let llr = |r: f64| match dist.ln_gaussian_kernel(r, sigma) {
        Ok(v) => v + r * r / (2.0 * sigma * sigma),
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    if params.sigma_j == 0.0 {
        return Ok(0.5);
    }
    let root = find_root(llr, RootBracket::new(0.0, 0.5, 1e-10));
    if let Some(e) = failure {
        return Err(e);
    }
    root.map_err(|e| match e {
        crate::numerics::NumericsError::NoSignChange { .. } => Error::Degenerate(format!(
            "single-probe likelihoods do not cross on [0, 1/2] (sigma = {sigma}, sigma_j = {})",
            params.sigma_j
        )),
        other => other.into(),
    })
}

/// Bound on `|BER_lln - BER_genie|`:
/// `3 (1 + E[P^2] / (4 sigma^2))^(1/3) / (2 pi N)^(1/3)`.
pub fn gap_bound(params: &ChannelParams) -> Result<f64> {
    let (e_p2, sigma, n) = gap_inputs(params)?;
    Ok(3.0 * (1.0 + e_p2 / (4.0 * sigma * sigma)).cbrt() / (2.0 * std::f64::consts::PI * n).cbrt())
}

/// Threshold-error width at which the gap bound is tightest:
/// `((E[P^2] / 4 + sigma^2) sqrt(2 pi sigma^2) / N)^(1/3)`.
pub fn gap_epsilon_min(params: &ChannelParams) -> Result<f64> {
    let (e_p2, sigma, n) = gap_inputs(params)?;
    Ok(
        ((e_p2 / 4.0 + sigma * sigma) * (2.0 * std::f64::consts::PI * sigma * sigma).sqrt() / n)
            .cbrt(),
    )
}

fn gap_inputs(params: &ChannelParams) -> Result<(f64, f64, f64)> {
    params.validate()?;
    if !(params.sigma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: params.sigma,
            reason: "gap bound needs sigma > 0",
        });
    }
    Ok((
        params.amplitude().moment(2.0),
        params.sigma,
        params.num_probes as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_snapshot, BitSource};
    use crate::numerics::q_tail;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(sigma: f64, sigma_j: f64, n: usize) -> ChannelParams {
        ChannelParams::new(sigma, sigma_j, 0.5, n, 10).unwrap()
    }

    #[test]
    fn genie_semantics() {
        let p = 0.8;
        let bits = [0u8, 1, 1, 0, 1];
        let outputs: Vec<f64> = bits.iter().map(|&b| p * f64::from(b)).collect();
        let res = genie_detect(&outputs, p).unwrap();
        assert_eq!(res.estimated_bits, bits);
        assert_eq!(res.threshold_used, 0.4);
        let eps = 1e-12;
        let res = genie_detect(&[0.4 + eps, 0.4 - eps, 0.4], p).unwrap();
        assert_eq!(res.estimated_bits, vec![1, 0, 0]);
        assert!(genie_detect(&outputs, 0.0).is_err());
    }

    #[test]
    fn lln_semantics() {
        let p = 0.7;
        let outputs = [0.0, 0.0, p, p];
        let res = lln_detect(&outputs).unwrap();
        assert!((res.threshold_used - p / 2.0).abs() < 1e-16);
        assert_eq!(res.estimated_bits, vec![0, 0, 1, 1]);
        let res = lln_detect(&[0.3; 8]).unwrap();
        assert!(res.estimated_bits.iter().all(|&b| b == 0));
        assert!(lln_detect(&[]).is_err());
    }

    #[test]
    fn fixed_extremes() {
        let outputs = [-0.3, 0.1, 0.9, 1.4];
        assert!(fixed_threshold_detect(&outputs, -1e9)
            .estimated_bits
            .iter()
            .all(|&b| b == 1));
        assert!(fixed_threshold_detect(&outputs, 1e9)
            .estimated_bits
            .iter()
            .all(|&b| b == 0));
    }

    #[test]
    fn genie_ber_matches_q() {
        let p = params(0.25, 0.0, 1000);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (mut errors, mut bits) = (0usize, 0usize);
        for _ in 0..1000 {
            let s = sample_snapshot(&p, &BitSource::Iud, &mut rng).unwrap();
            let d = genie_detect(&s.outputs, s.amplitude).unwrap();
            errors += d
                .estimated_bits
                .iter()
                .zip(&s.bits)
                .filter(|(a, b)| a != b)
                .count();
            bits += s.bits.len();
        }
        let ber = errors as f64 / bits as f64;
        let q = q_tail(2.0);
        assert!((ber - q).abs() < 3.0 * (q * (1.0 - q) / bits as f64).sqrt());
    }

    #[test]
    fn threshold_without_jitter_is_half() {
        for sigma in [0.05, 0.3, 1.0] {
            assert_eq!(
                optimal_single_probe_threshold(&params(sigma, 0.0, 1)).unwrap(),
                0.5
            );
        }
    }

    #[test]
    fn threshold_lies_left_of_half() {
        for sigma in [0.02, 0.05, 0.1, 0.2, 0.4] {
            for sj in [0.05, 0.1, 0.2, 0.3] {
                let r0 = optimal_single_probe_threshold(&params(sigma, sj, 1)).unwrap();
                assert!(r0 > 0.0 && r0 <= 0.5, "sigma {sigma} sj {sj}: {r0}");
            }
        }
    }

    #[test]
    fn threshold_is_finite_at_very_high_snr() {
        let r0 = optimal_single_probe_threshold(&params(1e-3, 0.3, 1)).unwrap();
        assert!(r0 > 0.0 && r0 < 0.5);
    }

    #[test]
    fn threshold_minimizes_single_probe_error() {
        // Exact single-probe BER of a threshold t:
        // (Q(t / sigma) + E_P[1 - Q((t - P) / sigma)]) / 2, minimized over a 1e-4 grid.
        let p = params(0.15, 0.2, 1);
        let r0 = optimal_single_probe_threshold(&p).unwrap();
        let dist = p.amplitude();
        let ber = |t: f64| {
            0.5 * (q_tail(t / p.sigma) + dist.expect(128, |a| 1.0 - q_tail((t - a) / p.sigma)))
        };
        let (mut best_t, mut best) = (0.0, f64::INFINITY);
        for i in 2000..=5000 {
            let t = i as f64 * 1e-4;
            let b = ber(t);
            if b < best {
                best = b;
                best_t = t;
            }
        }
        assert!((best_t - r0).abs() <= 2e-4, "grid {best_t} vs root {r0}");
    }

    #[test]
    fn gap_bound_values() {
        let p = params(0.2, 0.2, 1000);
        assert!((gap_bound(&p).unwrap() - 0.293_447_892_554_443_85).abs() < 1e-12);
        assert!((gap_epsilon_min(&p).unwrap() - 0.049_037_652_307_189_92).abs() < 1e-12);
        let q = params(0.3, 0.0, 500);
        let expected =
            3.0 * (1.0 + 1.0 / (4.0 * 0.09f64)).cbrt() / (1000.0 * std::f64::consts::PI).cbrt();
        assert!((gap_bound(&q).unwrap() - expected).abs() < 1e-14);
        assert!(gap_bound(&params(0.0, 0.2, 10)).is_err());
    }

    #[test]
    fn detector_names_round_trip() {
        for k in DetectorKind::ALL {
            assert_eq!(k.name().parse::<DetectorKind>().unwrap(), k);
        }
        assert!("ml".parse::<DetectorKind>().is_err());
    }

    proptest! {
        #[test]
        fn gap_bound_monotone(sigma in 0.01f64..1.0, sj in 0.0f64..0.4, n in 1usize..100_000) {
            let p = params(sigma, sj, n);
            let b = gap_bound(&p).unwrap();
            prop_assert!(gap_bound(&p.with_num_probes(n + 1)).unwrap() < b);
            prop_assert!(gap_bound(&p.with_sigma(sigma * 0.9)).unwrap() > b);
        }

        #[test]
        fn genie_and_lln_agree_outside_threshold_interval(
            p in 0.05f64..1.0,
            outputs in proptest::collection::vec(-1.0f64..2.0, 1..64),
        ) {
            let g = genie_detect(&outputs, p).unwrap();
            let l = lln_detect(&outputs).unwrap();
            let (lo, hi) = if g.threshold_used < l.threshold_used {
                (g.threshold_used, l.threshold_used)
            } else {
                (l.threshold_used, g.threshold_used)
            };
            for (k, &r) in outputs.iter().enumerate() {
                if r < lo || r > hi {
                    prop_assert_eq!(g.estimated_bits[k], l.estimated_bits[k]);
                }
            }
        }
    }
}
