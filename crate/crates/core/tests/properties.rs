//! Relations between modules that must hold for any valid parameters.

use jitterchan::channel::ChannelParams;
use jitterchan::infotheory::{
    c_awgn, capacity_global, capacity_independent, fano_bound, rcb_bound,
};
use jitterchan::rs::{cond_symbol_error, ser_exact, ser_upper_bound, RsCode};
use proptest::prelude::*;

fn params(snr_db: f64, sigma_j: f64) -> ChannelParams {
    ChannelParams::new(0.0, sigma_j, 0.5, 1000, 10)
        .unwrap()
        .with_snr_db(snr_db)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jitter_never_adds_capacity(snr in -5.0f64..40.0, sigma_j in 0.0f64..0.4) {
        let p = params(snr, sigma_j);
        let top = c_awgn(1.0, p.sigma).unwrap();
        let global = capacity_global(&p).unwrap();
        let independent = capacity_independent(&p).unwrap();
        prop_assert!((0.0..=top + 1e-9).contains(&global));
        prop_assert!((0.0..=top + 1e-9).contains(&independent));
    }

    #[test]
    fn fano_floor_sits_below_random_coding_floor(snr in 10.0f64..40.0, sigma_j in 0.1f64..0.35, rate in 0.3f64..0.95) {
        let p = params(snr, sigma_j);
        if let (Ok(fano), Ok(rcb)) = (fano_bound(rate, &p), rcb_bound(rate, 1000, &p)) {
            prop_assert!((fano.p_c - rcb.p_c).abs() < 1e-9);
            prop_assert!(fano.exact_floor <= rcb.floor_term * (1.0 + 1e-9));
        }
    }

    #[test]
    fn rs_floor_is_the_amplitude_tail(snr in 14.0f64..40.0, sigma_j in 0.1f64..0.35, rate in 0.5f64..0.9) {
        let code = RsCode::from_rate(10, 255, rate).unwrap();
        let p = params(snr, sigma_j).with_num_probes(code.num_bits());
        if let Ok(bound) = ser_upper_bound(&p, &code) {
            let tail = p.amplitude().tail(bound.p_c).unwrap();
            prop_assert!((bound.floor_term - tail).abs() <= 1e-12 + 1e-9 * tail);
            prop_assert!(bound.total >= bound.floor_term);
        }
    }

    #[test]
    fn exact_ser_never_exceeds_one(snr in 6.0f64..40.0, sigma_j in 0.0f64..0.35) {
        let code = RsCode::from_rate(10, 255, 0.8).unwrap();
        let p = params(snr, sigma_j).with_num_probes(code.num_bits());
        let ser = ser_exact(&p, &code).unwrap();
        prop_assert!((0.0..=1.0).contains(&ser));
    }

    #[test]
    fn symbol_errors_fall_with_amplitude(p0 in 0.05f64..0.95, dp in 0.01f64..0.05, snr in 6.0f64..30.0) {
        let sigma = 10f64.powf(-snr / 20.0);
        let lo = cond_symbol_error(p0, sigma, 10).unwrap();
        let hi = cond_symbol_error(p0 + dp, sigma, 10).unwrap();
        prop_assert!(hi <= lo);
    }
}
