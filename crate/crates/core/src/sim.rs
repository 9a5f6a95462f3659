//! Deterministic parallel Monte Carlo sweeps.
//!
//! Every trial (one array snapshot) owns a ChaCha8 stream. The 256-bit key
//! depends on `(master_seed, point)` and the stream id is the trial index:
//!
//! ```text
//! key word i = splitmix64(master_seed + (4 * point + i + 1) * 0x9E3779B97F4A7C15),  i = 0..4
//! stream     = trial
//! ```
//!
//! Trials are grouped in fixed blocks, blocks run on a rayon pool, and
//! counts are integers merged by addition, so results do not depend on the
//! number of threads or on how trials are sharded. All detectors requested
//! for a point see the same snapshots.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{fill_snapshot, ArraySnapshot, BitSource, ChannelParams};
use crate::detect::{lln_threshold, optimal_single_probe_threshold, DetectorKind};
use crate::rs::RsCode;
use crate::{Error, Result};

/// Trials per work unit. Fixed so the work decomposition never depends on
/// the thread count.
const BLOCK_TRIALS: u64 = 256;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 key for one sweep point.
pub fn point_key(master_seed: u64, point: usize) -> [u8; 32] {
    let mut key = [0u8; 32];
    for i in 0..4u64 {
        let word = splitmix64(
            master_seed.wrapping_add((4 * point as u64 + i + 1).wrapping_mul(GOLDEN_GAMMA)),
        );
        key[8 * i as usize..8 * (i as usize + 1)].copy_from_slice(&word.to_le_bytes());
    }
    key
}

/// The random stream of one trial.
pub fn trial_rng(master_seed: u64, point: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(point_key(master_seed, point));
    rng.set_stream(trial);
    rng
}

/// What to simulate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Channel parameters; `sigma` is overridden by each grid SNR.
    pub params_base: ChannelParams,
    pub snr_grid_db: Vec<f64>,
    /// Detectors evaluated on identical snapshots.
    pub detectors: Vec<DetectorKind>,
    /// Snapshots per grid point.
    pub trials_per_point: u64,
    pub master_seed: u64,
    /// When set, bits are grouped into symbols and sectors are counted.
    pub rs_code: Option<RsCode>,
    pub bit_source: BitSource,
}

impl SweepSpec {
    pub fn new(params_base: ChannelParams, snr_grid_db: Vec<f64>, detector: DetectorKind) -> Self {
        Self {
            params_base,
            snr_grid_db,
            detectors: vec![detector],
            trials_per_point: 100_000,
            master_seed: 0,
            rs_code: None,
            bit_source: BitSource::Iud,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params_base.validate()?;
        if self.trials_per_point == 0 {
            return Err(Error::Config("trials_per_point must be >= 1".into()));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::Config("SNR grid contains a non-finite value".into()));
        }
        if self.snr_grid_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("SNR grid must be strictly increasing".into()));
        }
        if self.detectors.is_empty() {
            return Err(Error::Config("no detector selected".into()));
        }
        if let Some(code) = &self.rs_code {
            code.validate()?;
            if code.num_bits() != self.params_base.num_probes {
                return Err(Error::Shape(format!(
                    "N = {} probes but the code needs n * N_s = {} * {} = {} bits",
                    self.params_base.num_probes,
                    code.symbol_bits,
                    code.block_symbols,
                    code.num_bits()
                )));
            }
        }
        Ok(())
    }

    /// Channel parameters at grid point `point`.
    pub fn params_at(&self, point: usize) -> ChannelParams {
        self.params_base.with_snr_db(self.snr_grid_db[point])
    }
}

/// Additive error counters for one (point, detector) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ErrorCounts {
    pub point: usize,
    pub trials: u64,
    pub bits_observed: u64,
    pub bit_errors: u64,
    pub sectors_observed: u64,
    pub sector_errors: u64,
    /// Sum over snapshots of the squared per-snapshot bit-error count; feeds
    /// the snapshot-clustered standard error.
    pub bit_errors_sq: u128,
}

impl ErrorCounts {
    pub fn zero(point: usize) -> Self {
        Self {
            point,
            ..Self::default()
        }
    }

    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits_observed)
    }

    pub fn ser(&self) -> f64 {
        ratio(self.sector_errors, self.sectors_observed)
    }

    /// Standard error of [`ber`](Self::ber), treating snapshots as clusters
    /// (all bits of a snapshot share one amplitude).
    pub fn ber_std_error(&self) -> f64 {
        let t = self.trials as f64;
        if self.trials < 2 || self.bits_observed == 0 {
            return f64::NAN;
        }
        let per_trial_bits = self.bits_observed as f64 / t;
        let mean = self.bit_errors as f64 / t;
        let ss = self.bit_errors_sq as f64 - t * mean * mean;
        (ss.max(0.0) / (t * (t - 1.0))).sqrt() / per_trial_bits
    }

    pub fn ser_std_error(&self) -> f64 {
        let n = self.sectors_observed as f64;
        let s = self.ser();
        (s * (1.0 - s) / n).sqrt()
    }

    /// 95% interval for the bit error rate.
    pub fn ber_ci95(&self) -> Interval {
        Interval::from_estimate(
            self.bit_errors,
            self.ber(),
            self.ber_std_error(),
            self.trials,
        )
    }

    /// 95% interval for the sector error rate.
    pub fn ser_ci95(&self) -> Interval {
        Interval::from_estimate(
            self.sector_errors,
            self.ser(),
            self.ser_std_error(),
            self.sectors_observed,
        )
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        f64::NAN
    } else {
        num as f64 / den as f64
    }
}

/// Confidence interval of a Monte Carlo rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Fewer than 10 errors: the normal approximation is unreliable.
    pub low_count: bool,
}

impl Interval {
    fn from_estimate(errors: u64, estimate: f64, std_error: f64, trials: u64) -> Self {
        if errors == 0 {
            // One-sided 95% upper bound for zero observed events.
            return Self {
                lo: 0.0,
                hi: (3.0 / trials as f64).min(1.0),
                low_count: true,
            };
        }
        Self {
            lo: (estimate - 1.96 * std_error).max(0.0),
            hi: (estimate + 1.96 * std_error).min(1.0),
            low_count: errors < 10,
        }
    }
}

/// Componentwise sum of counts of the same sweep point.
pub fn merge_counts(a: &ErrorCounts, b: &ErrorCounts) -> Result<ErrorCounts> {
    if a.point != b.point {
        return Err(Error::MismatchedPoint {
            left: a.point,
            right: b.point,
        });
    }
    Ok(ErrorCounts {
        point: a.point,
        trials: a.trials + b.trials,
        bits_observed: a.bits_observed + b.bits_observed,
        bit_errors: a.bit_errors + b.bit_errors,
        sectors_observed: a.sectors_observed + b.sectors_observed,
        sector_errors: a.sector_errors + b.sector_errors,
        bit_errors_sq: a.bit_errors_sq + b.bit_errors_sq,
    })
}

/// Counts for one detector at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub snr_db: f64,
    pub detector: DetectorKind,
    /// Threshold of the fixed detector at this point, if evaluated.
    pub fixed_threshold: Option<f64>,
    pub counts: ErrorCounts,
}

/// A rate with its interval, as reported by the sweep helpers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub snr_db: f64,
    pub detector: DetectorKind,
    pub rate: f64,
    pub ci95: Interval,
    pub errors: u64,
    pub observed: u64,
}

/// Precomputed per-point state shared by all blocks.
struct PointContext<'a> {
    spec: &'a SweepSpec,
    point: usize,
    params: ChannelParams,
    fixed_threshold: Option<f64>,
    key: [u8; 32],
}

impl PointContext<'_> {
    fn new(spec: &SweepSpec, point: usize) -> Result<PointContext<'_>> {
        let params = spec.params_at(point);
        let fixed_threshold = if spec.detectors.contains(&DetectorKind::Fixed) {
            Some(optimal_single_probe_threshold(&params)?)
        } else {
            None
        };
        Ok(PointContext {
            spec,
            point,
            params,
            fixed_threshold,
            key: point_key(spec.master_seed, point),
        })
    }

    fn run(&self, trials: Range<u64>) -> Result<Vec<ErrorCounts>> {
        let detectors = &self.spec.detectors;
        let code = self.spec.rs_code.as_ref();
        let n = self.params.num_probes as u64;
        let mut counts = vec![ErrorCounts::zero(self.point); detectors.len()];
        let mut snap = ArraySnapshot::with_capacity(self.params.num_probes);
        let mut wrong = vec![false; self.params.num_probes];
        let base = ChaCha8Rng::from_seed(self.key);
        for trial in trials {
            let mut rng = base.clone();
            rng.set_stream(trial);
            rng.set_word_pos(0);
            fill_snapshot(&mut snap, &self.params, &self.spec.bit_source, &mut rng)?;
            for (d, c) in detectors.iter().zip(counts.iter_mut()) {
                let threshold = match d {
                    DetectorKind::Genie => 0.5 * snap.amplitude,
                    DetectorKind::Lln => lln_threshold(&snap.outputs)?,
                    DetectorKind::Fixed => self.fixed_threshold.expect("computed for fixed"),
                };
                let mut errors = 0u64;
                for ((&r, &a), w) in snap.outputs.iter().zip(&snap.bits).zip(wrong.iter_mut()) {
                    *w = u8::from(r > threshold) != a;
                    errors += u64::from(*w);
                }
                c.trials += 1;
                c.bits_observed += n;
                c.bit_errors += errors;
                c.bit_errors_sq += u128::from(errors * errors);
                if let Some(code) = code {
                    let symbol_errors = wrong
                        .chunks_exact(code.symbol_bits)
                        .filter(|s| s.iter().any(|&w| w))
                        .count();
                    c.sectors_observed += 1;
                    c.sector_errors += u64::from(symbol_errors > code.correctable());
                }
            }
        }
        Ok(counts)
    }
}

/// Counts of trials `trials` at grid point `point`, one entry per detector.
///
/// Running disjoint trial ranges and merging gives exactly the counts of
/// running their union.
pub fn run_shard(spec: &SweepSpec, point: usize, trials: Range<u64>) -> Result<Vec<ErrorCounts>> {
    spec.validate()?;
    if point >= spec.snr_grid_db.len() {
        return Err(Error::Config(format!(
            "point {point} is outside the SNR grid"
        )));
    }
    PointContext::new(spec, point)?.run(trials)
}

fn run_point(ctx: &PointContext<'_>) -> Result<Vec<ErrorCounts>> {
    let total = ctx.spec.trials_per_point;
    let blocks = total.div_ceil(BLOCK_TRIALS);
    let partials: Vec<Vec<ErrorCounts>> = (0..blocks)
        .into_par_iter()
        .map(|b| ctx.run(b * BLOCK_TRIALS..((b + 1) * BLOCK_TRIALS).min(total)))
        .collect::<Result<_>>()?;
    let mut acc = vec![ErrorCounts::zero(ctx.point); ctx.spec.detectors.len()];
    for part in &partials {
        for (a, p) in acc.iter_mut().zip(part) {
            *a = merge_counts(a, p)?;
        }
    }
    Ok(acc)
}

/// Run every grid point and detector. `threads = 0` uses rayon's default.
pub fn run_sweep(spec: &SweepSpec, threads: usize) -> Result<Vec<PointResult>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| {
        let mut out = Vec::with_capacity(spec.snr_grid_db.len() * spec.detectors.len());
        for point in 0..spec.snr_grid_db.len() {
            let ctx = PointContext::new(spec, point)?;
            let counts = run_point(&ctx)?;
            for (&detector, counts) in spec.detectors.iter().zip(counts) {
                out.push(PointResult {
                    snr_db: spec.snr_grid_db[point],
                    detector,
                    fixed_threshold: ctx
                        .fixed_threshold
                        .filter(|_| detector == DetectorKind::Fixed),
                    counts,
                });
            }
        }
        Ok(out)
    })
}

/// Bit error rate per grid point and detector.
pub fn run_ber_sweep(spec: &SweepSpec, threads: usize) -> Result<Vec<RatePoint>> {
    Ok(run_sweep(spec, threads)?
        .into_iter()
        .map(|r| RatePoint {
            snr_db: r.snr_db,
            detector: r.detector,
            rate: r.counts.ber(),
            ci95: r.counts.ber_ci95(),
            errors: r.counts.bit_errors,
            observed: r.counts.bits_observed,
        })
        .collect())
}

/// Sector error rate per grid point and detector; requires `rs_code`.
pub fn run_rs_ser_sweep(spec: &SweepSpec, threads: usize) -> Result<Vec<RatePoint>> {
    if spec.rs_code.is_none() {
        return Err(Error::Config("sector sweep needs an RS code".into()));
    }
    Ok(run_sweep(spec, threads)?
        .into_iter()
        .map(|r| RatePoint {
            snr_db: r.snr_db,
            detector: r.detector,
            rate: r.counts.ser(),
            ci95: r.counts.ser_ci95(),
            errors: r.counts.sector_errors,
            observed: r.counts.sectors_observed,
        })
        .collect())
}
