//! The information the outputs of one snapshot carry about its amplitude is
//! small per probe and shrinks as the array grows, so treating `P` as
//! unknown costs vanishing rate.

use jitterchan::channel::ChannelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

/// Monte Carlo estimate of `I(P; (A, R)) / N` in bits.
///
/// Given the bits, the mean output over the `m` written ones is a sufficient
/// statistic for `P`, observed in Gaussian noise of deviation `sigma / sqrt(m)`.
fn information_per_probe(params: &ChannelParams, samples: usize, seed: u64) -> f64 {
    let dist = params.amplitude();
    let counts = Binomial::new(params.num_probes as u64, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..samples {
        let m = counts.sample(&mut rng);
        if m == 0 {
            continue;
        }
        let s = params.sigma / (m as f64).sqrt();
        let (_, p) = dist.sample(&mut rng);
        let z: f64 = rng.sample(StandardNormal);
        let y = p + s * z;
        let ln_cond = -0.5 * z * z - s.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln();
        total += ln_cond - dist.mixture_pdf(y, s).unwrap().ln();
    }
    total / samples as f64 / std::f64::consts::LN_2 / params.num_probes as f64
}

#[test]
fn amplitude_information_per_probe_is_small_and_decreasing() {
    let base = ChannelParams::new(0.0, 0.2, 0.5, 16, 8)
        .unwrap()
        .with_snr_db(20.0);
    let small = information_per_probe(&base.with_num_probes(16), 20_000, 1);
    let large = information_per_probe(&base.with_num_probes(64), 20_000, 2);
    assert!(large < 0.1, "I/N at N = 64 is {large}");
    assert!(large < small, "I/N did not decrease: {small} -> {large}");
}
