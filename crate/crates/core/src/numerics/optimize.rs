use super::NumericsError;

/// A bracketing interval for bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Self {
        Self { lo, hi, tol }
    }
}

/// Bisection. Returns the midpoint of a bracket of width at most `tol`
/// across which `f` changes sign (or an endpoint where `f` is exactly zero).
pub fn find_root<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: RootBracket,
) -> Result<f64, NumericsError> {
    let RootBracket {
        mut lo,
        mut hi,
        tol,
    } = bracket;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(NumericsError::Domain {
            what: "bracket",
            value: hi - lo,
            expected: "lo < hi and tol > 0",
        });
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return Err(NumericsError::NonFinite {
            x: if f_lo.is_nan() { lo } else { hi },
            value: f64::NAN,
        });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Both endpoints are evaluated too, so a boundary maximum is returned
/// exactly at the boundary.
pub fn maximize_scalar<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let fx = f(x);
        if fx >= best.1 {
            best = (x, fx);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::super::q_tail;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_root() {
        let x = find_root(|x| x - 0.3, RootBracket::new(0.0, 1.0, 1e-12)).unwrap();
        assert!((x - 0.3).abs() < 1e-12);
    }

    #[test]
    fn inverse_q_tail() {
        let x = find_root(
            |x| q_tail(x) - 0.022_750_1,
            RootBracket::new(0.0, 8.0, 1e-10),
        )
        .unwrap();
        // mpmath: Q^{-1}(0.0227501) = 2.0000005917
        assert!((x - 2.000_000_591_7).abs() < 1e-9);
    }

    #[test]
    fn half_amplitude_jitter() {
        let w = 0.5_f64;
        let x = find_root(
            |j| (-j * j / (w * w)).exp() - 0.5,
            RootBracket::new(0.0, 1.0, 1e-12),
        )
        .unwrap();
        assert!((x - w * std::f64::consts::LN_2.sqrt()).abs() < 1e-11);
        assert!((x - 0.416_28).abs() < 1e-5);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, RootBracket::new(-1.0, 1.0, 1e-6));
        assert!(matches!(err, Err(NumericsError::NoSignChange { .. })));
    }

    #[test]
    fn endpoint_roots() {
        assert_eq!(
            find_root(|x| x - 1.0, RootBracket::new(0.0, 1.0, 1e-6)).unwrap(),
            1.0
        );
        assert_eq!(
            find_root(|x| x, RootBracket::new(0.0, 1.0, 1e-6)).unwrap(),
            0.0
        );
    }

    #[test]
    fn maximize_examples() {
        let (x, m) = maximize_scalar(|r| -(r - 0.4) * (r - 0.4), 0.0, 1.0, 1e-10);
        assert!((x - 0.4).abs() < 1e-9 && m.abs() < 1e-18);
        let (x, m) = maximize_scalar(|r| r, 0.0, 1.0, 1e-10);
        assert_eq!((x, m), (1.0, 1.0));
        let (x, m) = maximize_scalar(|r| 0.2 * r - r * r, 0.0, 1.0, 1e-10);
        assert!((x - 0.1).abs() < 1e-9 && (m - 0.01).abs() < 1e-15);
        let (x, _) = maximize_scalar(|r| -r, 0.0, 1.0, 1e-10);
        assert_eq!(x, 0.0);
    }

    proptest! {
        #[test]
        fn root_brackets_sign_change(c in -0.9f64..0.9, k in 0.5f64..5.0) {
            let tol = 1e-9;
            let f = |x: f64| (k * (x - c)).tanh();
            let x = find_root(f, RootBracket::new(-1.0, 1.0, tol)).unwrap();
            prop_assert!(f(x - tol) <= 0.0 && f(x + tol) >= 0.0);
        }
    }
}
