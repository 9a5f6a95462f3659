use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::NumericsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMethod {
    /// Fixed-order Gauss-Hermite rule against a Gaussian measure.
    GaussHermite,
    /// Globally adaptive Simpson with Richardson correction on a finite interval.
    AdaptiveSimpson,
}

/// How to evaluate a one-dimensional integral.
///
/// `order` is the number of Gauss-Hermite nodes, or the number of initial
/// panels for adaptive Simpson. `max_refinements` bounds the number of panel
/// splits before the adaptive rule gives up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_ABS_TOL: f64 = 1e-10;
    pub const DEFAULT_REL_TOL: f64 = 1e-8;

    pub fn gauss_hermite(order: usize) -> Self {
        Self {
            method: QuadratureMethod::GaussHermite,
            order,
            abs_tol: Self::DEFAULT_ABS_TOL,
            rel_tol: Self::DEFAULT_REL_TOL,
            max_refinements: 1,
        }
    }

    pub fn adaptive_simpson() -> Self {
        Self {
            method: QuadratureMethod::AdaptiveSimpson,
            order: 8,
            abs_tol: Self::DEFAULT_ABS_TOL,
            rel_tol: Self::DEFAULT_REL_TOL,
            max_refinements: 20_000,
        }
    }

    /// Purely relative tolerance, for integrals whose magnitude is unknown
    /// in advance (deep tails).
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol,
            ..Self::adaptive_simpson()
        }
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(NumericsError::InvalidSpec("tolerances must be >= 0"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(NumericsError::InvalidSpec(
                "abs_tol and rel_tol cannot both be zero",
            ));
        }
        if self.order < 2 {
            return Err(NumericsError::InvalidSpec("order must be >= 2"));
        }
        if self.max_refinements == 0 {
            return Err(NumericsError::InvalidSpec("max_refinements must be >= 1"));
        }
        Ok(())
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Lebesgue measure on `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// The normal probability measure `N(mean, std^2)` on the real line.
    Gaussian { mean: f64, std: f64 },
}

/// Nodes and weights for `Int f(x) e^{-x^2} dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Newton iteration on the orthonormal Hermite recurrence, which stays
    /// finite for orders in the hundreds.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Hermite order must be positive");
        const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0_f64;
        for i in 0..m {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = PIM4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `E[f(X)]` for `X ~ N(mean, std^2)`.
    pub fn expectation<F: FnMut(f64) -> f64>(&self, mut f: F, mean: f64, std: f64) -> f64 {
        if std == 0.0 {
            return f(mean);
        }
        let scale = std::f64::consts::SQRT_2 * std;
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mean + scale * x))
            .sum();
        sum / PI.sqrt()
    }
}

static GH64: OnceLock<GaussHermite> = OnceLock::new();
static GH128: OnceLock<GaussHermite> = OnceLock::new();

/// Gauss-Hermite rule of the given order; orders 64 and 128 are cached.
pub fn gauss_hermite(order: usize) -> Cow<'static, GaussHermite> {
    match order {
        64 => Cow::Borrowed(GH64.get_or_init(|| GaussHermite::new(64))),
        128 => Cow::Borrowed(GH128.get_or_init(|| GaussHermite::new(128))),
        _ => Cow::Owned(GaussHermite::new(order)),
    }
}

pub fn integrate_1d<F: FnMut(f64) -> f64>(
    f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<f64, NumericsError> {
    spec.validate()?;
    match (spec.method, domain) {
        (QuadratureMethod::GaussHermite, Domain::Gaussian { mean, std }) => {
            let value = gauss_hermite(spec.order).expectation(f, mean, std);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(NumericsError::NonFinite { x: mean, value })
            }
        }
        (QuadratureMethod::GaussHermite, Domain::Interval { .. }) => {
            Err(NumericsError::UnsupportedDomain {
                method: "gauss-hermite",
                domain: "a finite interval",
            })
        }
        (QuadratureMethod::AdaptiveSimpson, Domain::Interval { lo, hi }) => {
            integrate_breaks(f, &[lo, hi], spec)
        }
        (QuadratureMethod::AdaptiveSimpson, Domain::Gaussian { mean, std }) => {
            if std == 0.0 {
                let mut f = f;
                return Ok(f(mean));
            }
            let mut f = f;
            let g = |x: f64| f(x) * super::normal_pdf((x - mean) / std) / std;
            integrate_breaks(g, &[mean - 12.0 * std, mean, mean + 12.0 * std], spec)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    // f at a, a+h/4, a+h/2, a+3h/4, b
    fs: [f64; 5],
    value: f64,
    error: f64,
}

impl Panel {
    fn new(a: f64, b: f64, fs: [f64; 5]) -> Self {
        let h = b - a;
        let coarse = h / 6.0 * (fs[0] + 4.0 * fs[2] + fs[4]);
        let fine = h / 12.0 * (fs[0] + 4.0 * fs[1] + 2.0 * fs[2] + 4.0 * fs[3] + fs[4]);
        let delta = fine - coarse;
        Self {
            a,
            b,
            fs,
            value: fine + delta / 15.0,
            error: delta.abs() / 15.0,
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive Simpson over `[breaks[0], breaks[last]]`, with the listed
/// interior points forced to be panel boundaries.
///
/// Panels are split in order of decreasing error estimate until the summed
/// estimate is within `max(abs_tol, rel_tol * |value|)`.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64, NumericsError> {
    spec.validate()?;
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok(0.0);
    }

    let mut eval = |x: f64| -> Result<f64, NumericsError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::NonFinite { x, value: v })
        }
    };

    let pieces = pts.len() - 1;
    let per_piece = spec.order.div_ceil(pieces).max(2);
    let mut heap = BinaryHeap::with_capacity(pieces * per_piece * 4);
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let h = (hi - lo) / per_piece as f64;
        let mut f_left = eval(lo)?;
        for k in 0..per_piece {
            let a = lo + h * k as f64;
            let b = if k + 1 == per_piece { hi } else { a + h };
            let fs = [
                f_left,
                eval(a + 0.25 * (b - a))?,
                eval(a + 0.5 * (b - a))?,
                eval(a + 0.75 * (b - a))?,
                eval(b)?,
            ];
            f_left = fs[4];
            heap.push(Panel::new(a, b, fs));
        }
    }

    let mut splits = 0usize;
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tol {
            return Ok(value);
        }
        if splits >= spec.max_refinements {
            return Err(NumericsError::NonConvergence {
                estimate: value,
                error_estimate: error,
            });
        }
        // Split the worst panels in a batch before re-summing.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let (a, b) = (worst.a, worst.b);
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                // Cannot subdivide further in floating point; freeze it.
                heap.push(Panel {
                    error: 0.0,
                    ..worst
                });
                continue;
            }
            let fs = worst.fs;
            let left = [
                fs[0],
                eval(a + 0.125 * (b - a))?,
                fs[1],
                eval(a + 0.375 * (b - a))?,
                fs[2],
            ];
            let right = [
                fs[2],
                eval(a + 0.625 * (b - a))?,
                fs[3],
                eval(a + 0.875 * (b - a))?,
                fs[4],
            ];
            heap.push(Panel::new(a, m, left));
            heap.push(Panel::new(m, b, right));
            splits += 1;
        }
    }
}
