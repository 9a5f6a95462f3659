use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::detect::gap_bound;
use crate::infotheory::{
    c_awgn, capacity_global, capacity_independent, fano_bound, rcb_bound, IndependentJitterExponent,
};
use crate::rs::{high_rate_floor, ser_exact, ser_upper_bound, RsCode};
use crate::sim::{run_sweep, SweepSpec};
use crate::{Error, Result};

use super::config::{ExperimentConfig, ExperimentKind};
use super::table::{opt_sci, sci, Table};

const BER_COLUMNS: [&str; 14] = [
    "snr_db",
    "sigma",
    "sigma_j",
    "num_probes",
    "detector",
    "trials",
    "bits",
    "bit_errors",
    "ber",
    "ci95_lo",
    "ci95_hi",
    "low_count",
    "threshold",
    "gap_bound",
];

const SER_COLUMNS: [&str; 19] = [
    "snr_db",
    "sigma",
    "sigma_j",
    "symbol_bits",
    "block_symbols",
    "info_symbols",
    "rate",
    "detector",
    "sectors",
    "sector_errors",
    "ser",
    "ci95_lo",
    "ci95_hi",
    "low_count",
    "ber",
    "rs_floor",
    "rs_bound",
    "ser_genie_exact",
    "fano_floor",
];

const CAPACITY_COLUMNS: [&str; 6] = [
    "snr_db",
    "sigma",
    "sigma_j",
    "c_awgn_at_p1",
    "c_global",
    "c_independent",
];

const RCB_COLUMNS: [&str; 12] = [
    "snr_db",
    "sigma",
    "sigma_j",
    "rate",
    "num_probes",
    "p_c",
    "rcb_floor",
    "rcb_laplace",
    "rcb_total",
    "rcb_elementary",
    "rcb_high_rate",
    "rcb_independent",
];

const FANO_COLUMNS: [&str; 9] = [
    "snr_db",
    "sigma",
    "sigma_j",
    "rate",
    "p_c",
    "c_global",
    "fano_exact",
    "fano_weak",
    "fano_asymptotic",
];

const FLOOR_COLUMNS: [&str; 16] = [
    "snr_db",
    "sigma",
    "sigma_j",
    "symbol_bits",
    "block_symbols",
    "rate",
    "gamma",
    "slope_db",
    "rs_p_c",
    "rs_floor",
    "rs_high_rate_floor",
    "rcb_p_c",
    "rcb_floor",
    "rcb_elementary",
    "rcb_high_rate",
    "fano_floor",
];

/// Column names of an experiment's CSV, in output order.
pub fn columns(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::BerSweep => &BER_COLUMNS,
        ExperimentKind::RsSerSweep => &SER_COLUMNS,
        ExperimentKind::CapacityCurve => &CAPACITY_COLUMNS,
        ExperimentKind::RcbCurve => &RCB_COLUMNS,
        ExperimentKind::FanoCurve => &FANO_COLUMNS,
        ExperimentKind::FloorReport => &FLOOR_COLUMNS,
        ExperimentKind::FigurePreset => &[],
    }
}

/// `None` for results that do not exist in a degenerate regime.
fn unless_degenerate<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Degenerate(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

struct Grid {
    /// `(snr_db, sigma)`.
    points: Vec<(f64, f64)>,
}

impl Grid {
    fn new(cfg: &ExperimentConfig) -> Self {
        Self {
            points: cfg.noise.as_ref().map(|g| g.points()).unwrap_or_default(),
        }
    }

    fn snrs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }
}

fn params(
    cfg: &ExperimentConfig,
    sigma: f64,
    sigma_j: f64,
    num_probes: usize,
) -> Result<ChannelParams> {
    ChannelParams::new(sigma, sigma_j, cfg.pulse_width, num_probes, cfg.symbol_bits)
}

/// Evaluates `f` on every job in parallel and collects rows in job order.
fn rows_parallel<J: Sync>(
    jobs: &[J],
    f: impl Fn(&J) -> Result<Vec<String>> + Sync + Send,
) -> Result<Vec<Vec<String>>> {
    jobs.par_iter().map(f).collect()
}

pub(super) fn compute(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(columns(cfg.kind));
    let rows = match cfg.kind {
        ExperimentKind::BerSweep => ber_sweep(cfg)?,
        ExperimentKind::RsSerSweep => rs_ser_sweep(cfg)?,
        ExperimentKind::CapacityCurve => capacity_curve(cfg)?,
        ExperimentKind::RcbCurve => rcb_curve(cfg)?,
        ExperimentKind::FanoCurve => fano_curve(cfg)?,
        ExperimentKind::FloorReport => floor_report(cfg)?,
        ExperimentKind::FigurePreset => {
            return Err(Error::Config("figure-preset needs a `preset` key".into()))
        }
    };
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

fn sweep_spec(
    cfg: &ExperimentConfig,
    base: ChannelParams,
    grid: &Grid,
    code: Option<RsCode>,
) -> SweepSpec {
    SweepSpec {
        params_base: base,
        snr_grid_db: grid.snrs(),
        detectors: cfg.detectors.clone(),
        trials_per_point: cfg.effective_trials(),
        master_seed: cfg.seed,
        rs_code: code,
        bit_source: Default::default(),
    }
}

fn ber_sweep(cfg: &ExperimentConfig) -> Result<Vec<Vec<String>>> {
    let grid = Grid::new(cfg);
    let n = cfg.probes();
    let mut rows = Vec::new();
    for &sj in &cfg.sigma_j {
        let spec = sweep_spec(cfg, params(cfg, grid.points[0].1, sj, n)?, &grid, None);
        let gaps: Vec<Option<f64>> = (0..grid.points.len())
            .map(|i| gap_bound(&spec.params_at(i)).ok())
            .collect();
        for r in run_sweep(&spec, cfg.threads)? {
            let point = r.counts.point;
            let c = &r.counts;
            let ci = c.ber_ci95();
            rows.push(vec![
                r.snr_db.to_string(),
                sci(spec.params_at(point).sigma),
                sj.to_string(),
                n.to_string(),
                r.detector.to_string(),
                c.trials.to_string(),
                c.bits_observed.to_string(),
                c.bit_errors.to_string(),
                sci(c.ber()),
                sci(ci.lo),
                sci(ci.hi),
                u8::from(ci.low_count).to_string(),
                opt_sci(r.fixed_threshold),
                opt_sci(gaps[point]),
            ]);
        }
    }
    Ok(rows)
}

fn rs_ser_sweep(cfg: &ExperimentConfig) -> Result<Vec<Vec<String>>> {
    let grid = Grid::new(cfg);
    let mut rows = Vec::new();
    for &sj in &cfg.sigma_j {
        for code in cfg.codes()? {
            let spec = sweep_spec(
                cfg,
                params(cfg, grid.points[0].1, sj, code.num_bits())?,
                &grid,
                Some(code),
            );
            let analytic: Vec<[Option<f64>; 4]> = (0..grid.points.len())
                .into_par_iter()
                .map(|i| -> Result<[Option<f64>; 4]> {
                    let p = spec.params_at(i);
                    let bound = unless_degenerate(ser_upper_bound(&p, &code))?;
                    Ok([
                        bound.map(|b| b.floor_term),
                        bound.map(|b| b.total),
                        Some(ser_exact(&p, &code)?),
                        unless_degenerate(fano_bound(code.rate(), &p))?.map(|f| f.exact_floor),
                    ])
                })
                .collect::<Result<_>>()?;
            for r in run_sweep(&spec, cfg.threads)? {
                let point = r.counts.point;
                let c = &r.counts;
                let ci = c.ser_ci95();
                let [floor, bound, exact, fano] = analytic[point];
                rows.push(vec![
                    r.snr_db.to_string(),
                    sci(spec.params_at(point).sigma),
                    sj.to_string(),
                    code.symbol_bits.to_string(),
                    code.block_symbols.to_string(),
                    code.info_symbols.to_string(),
                    sci(code.rate()),
                    r.detector.to_string(),
                    c.sectors_observed.to_string(),
                    c.sector_errors.to_string(),
                    sci(c.ser()),
                    sci(ci.lo),
                    sci(ci.hi),
                    u8::from(ci.low_count).to_string(),
                    sci(c.ber()),
                    opt_sci(floor),
                    opt_sci(bound),
                    opt_sci(exact),
                    opt_sci(fano),
                ]);
            }
        }
    }
    Ok(rows)
}

fn capacity_curve(cfg: &ExperimentConfig) -> Result<Vec<Vec<String>>> {
    let grid = Grid::new(cfg);
    let jobs: Vec<(f64, (f64, f64))> = cfg
        .sigma_j
        .iter()
        .flat_map(|&sj| grid.points.iter().map(move |&pt| (sj, pt)))
        .collect();
    rows_parallel(&jobs, |&(sj, (snr, sigma))| {
        let p = params(cfg, sigma, sj, cfg.probes())?;
        Ok(vec![
            snr.to_string(),
            sci(sigma),
            sj.to_string(),
            sci(c_awgn(1.0, sigma)?),
            sci(capacity_global(&p)?),
            sci(capacity_independent(&p)?),
        ])
    })
}

fn rcb_curve(cfg: &ExperimentConfig) -> Result<Vec<Vec<String>>> {
    let grid = Grid::new(cfg);
    let n = cfg.probes();
    let channels: Vec<(f64, (f64, f64))> = cfg
        .sigma_j
        .iter()
        .flat_map(|&sj| grid.points.iter().map(move |&pt| (sj, pt)))
        .collect();
    let independent: Vec<IndependentJitterExponent> = channels
        .par_iter()
        .map(|&(sj, (_, sigma))| IndependentJitterExponent::new(&params(cfg, sigma, sj, n)?))
        .collect::<Result<_>>()?;
    let points = grid.points.len();
    let mut jobs = Vec::new();
    for (s, _) in cfg.sigma_j.iter().enumerate() {
        for &rate in &cfg.rate {
            for i in 0..points {
                jobs.push((s * points + i, rate));
            }
        }
    }
    rows_parallel(&jobs, |&(c, rate)| {
        let (sj, (snr, sigma)) = channels[c];
        let p = params(cfg, sigma, sj, n)?;
        let b = unless_degenerate(rcb_bound(rate, n, &p))?;
        Ok(vec![
            snr.to_string(),
            sci(sigma),
            sj.to_string(),
            rate.to_string(),
            n.to_string(),
            opt_sci(b.map(|b| b.p_c)),
            opt_sci(b.map(|b| b.floor_term)),
            opt_sci(b.map(|b| b.laplace_term)),
            opt_sci(b.map(|b| b.total)),
            opt_sci(b.map(|b| b.elementary_floor)),
            opt_sci(b.map(|b| b.high_rate_floor)),
            sci(independent[c].rcb(rate, n)?),
        ])
    })
}

fn fano_curve(cfg: &ExperimentConfig) -> Result<Vec<Vec<String>>> {
    let grid = Grid::new(cfg);
    let mut jobs = Vec::new();
    for &sj in &cfg.sigma_j {
        for &rate in &cfg.rate {
            for &pt in &grid.points {
                jobs.push((sj, rate, pt));
            }
        }
    }
    rows_parallel(&jobs, |&(sj, rate, (snr, sigma))| {
        let p = params(cfg, sigma, sj, cfg.probes())?;
        let f = unless_degenerate(fano_bound(rate, &p))?;
        let c = capacity_global(&p)?;
        Ok(vec![
            snr.to_string(),
            sci(sigma),
            sj.to_string(),
            rate.to_string(),
            opt_sci(f.map(|f| f.p_c)),
            sci(c),
            opt_sci(f.map(|f| f.exact_floor)),
            sci((1.0 - c / rate).max(0.0)),
            opt_sci(f.and_then(|f| f.asymptotic_floor)),
        ])
    })
}

fn floor_report(cfg: &ExperimentConfig) -> Result<Vec<Vec<String>>> {
    let grid = Grid::new(cfg);
    let mut jobs = Vec::new();
    for &sj in &cfg.sigma_j {
        for code in cfg.codes()? {
            for &pt in &grid.points {
                jobs.push((sj, code, pt));
            }
        }
    }
    rows_parallel(&jobs, |&(sj, code, (snr, sigma))| {
        let p = params(cfg, sigma, sj, code.num_bits())?;
        let dist = p.amplitude();
        let rs = unless_degenerate(ser_upper_bound(&p, &code))?;
        let high = high_rate_floor(&dist, &code);
        let rcb = unless_degenerate(rcb_bound(code.rate(), code.num_bits(), &p))?;
        let fano = unless_degenerate(fano_bound(code.rate(), &p))?;
        Ok(vec![
            snr.to_string(),
            sci(sigma),
            sj.to_string(),
            code.symbol_bits.to_string(),
            code.block_symbols.to_string(),
            sci(code.rate()),
            sci(dist.gamma()),
            sci(high.slope_db()),
            opt_sci(rs.map(|b| b.p_c)),
            opt_sci(rs.map(|b| b.floor_term)),
            sci(high.evaluate(sigma)),
            opt_sci(rcb.map(|b| b.p_c)),
            opt_sci(rcb.map(|b| b.floor_term)),
            opt_sci(rcb.map(|b| b.elementary_floor)),
            opt_sci(rcb.map(|b| b.high_rate_floor)),
            opt_sci(fano.map(|f| f.exact_floor)),
        ])
    })
}
