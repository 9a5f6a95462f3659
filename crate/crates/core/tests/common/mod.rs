//! Independent oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use jitterchan::cli::{render_csv, run, CsvData, ExperimentConfig, Preset};

/// `Pr(Bin(n, e) > t)` by direct summation with exact log-factorials.
pub fn binomial_tail_oracle(n: usize, e: f64, t: usize) -> f64 {
    let mut ln_fact = vec![0.0f64; n + 1];
    for i in 1..=n {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    ((t + 1)..=n)
        .map(|k| {
            (ln_fact[n] - ln_fact[k] - ln_fact[n - k]
                + k as f64 * e.ln()
                + (n - k) as f64 * (-e).ln_1p())
            .exp()
        })
        .sum()
}

/// `Q(x)` for `x >= 0` by composite Simpson integration of the normal pdf.
pub fn q_oracle(x: f64) -> f64 {
    let hi = x + 14.0;
    let n = 200_000;
    let h = (hi - x) / n as f64;
    let pdf = |u: f64| (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(x) + pdf(hi);
    for i in 1..n {
        s += pdf(x + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// BER of the sample-mean threshold detector at `sigma_J = 0` and finite `N`.
///
/// The threshold `T_N` is modelled as `1/2 + delta` with
/// `delta ~ N(0, (1/4 + sigma^2) / N)`; the self-term of each bit in `T_N`
/// is `O(1/N)` and dropped.
pub fn lln_ber_finite_n(sigma: f64, n: usize) -> f64 {
    let sd = ((0.25 + sigma * sigma) / n as f64).sqrt();
    let steps = 4000;
    let h = 16.0 / steps as f64;
    let pdf = |u: f64| (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let q = |x: f64| 0.5 * libm::erfc(x / std::f64::consts::SQRT_2);
    let f = |u: f64| pdf(u) * 0.5 * (q((0.5 - sd * u) / sigma) + q((0.5 + sd * u) / sigma));
    let mut s = f(-8.0) + f(8.0);
    for i in 1..steps {
        s += f(-8.0 + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Ordinary least-squares slope.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// SNR at which a decreasing curve crosses `target`, interpolating
/// `log10(y)` linearly between grid points.
pub fn crossing_db(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 < target && y1 > 0.0 {
            let (l0, l1, lt) = (y0.log10(), y1.log10(), target.log10());
            Some(x0 + (l0 - lt) / (l0 - l1) * (x1 - x0))
        } else {
            None
        }
    })
}

/// Runs a preset and returns its config and CSV text.
pub fn run_preset(
    preset: Preset,
    trials_scale: f64,
    seed: u64,
    threads: usize,
) -> (ExperimentConfig, String) {
    let mut cfg = preset.config();
    cfg.trials_scale = trials_scale;
    cfg.seed = seed;
    cfg.threads = threads;
    let table = run(&cfg).expect("preset runs");
    let csv = render_csv(&cfg, &table);
    (cfg, csv)
}

/// Numeric column of a CSV; empty cells become `None`.
pub fn column(data: &CsvData, name: &str) -> Vec<Option<f64>> {
    data.column(name)
        .expect("column exists")
        .into_iter()
        .map(|c| {
            if c.is_empty() {
                None
            } else {
                Some(c.parse().expect("numeric cell"))
            }
        })
        .collect()
}

pub fn text_column(data: &CsvData, name: &str) -> Vec<String> {
    data.column(name)
        .expect("column exists")
        .into_iter()
        .map(str::to_string)
        .collect()
}

/// Prints the verdict line and returns `pass`.
pub fn verdict(criterion: u32, title: &str, pass: bool, detail: &str) -> bool {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("{status} criterion {criterion:>2} ({title}): {detail}");
    pass
}
