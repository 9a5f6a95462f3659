//! Sector error rate of an RS(255, 204) code after LLN detection, against the
//! large-deviation bound and the exact genie-side value.

use jitterchan::channel::ChannelParams;
use jitterchan::detect::DetectorKind;
use jitterchan::rs::{high_rate_floor, ser_exact, ser_upper_bound, RsCode};
use jitterchan::sim::{run_rs_ser_sweep, SweepSpec};

fn main() -> jitterchan::Result<()> {
    let code = RsCode::from_rate(10, 255, 0.8)?;
    let params = ChannelParams::new(0.0, 0.2, 0.5, code.num_bits(), 10)?;
    let mut spec = SweepSpec::new(params, vec![16.0, 20.0, 24.0], DetectorKind::Lln);
    spec.rs_code = Some(code);
    spec.trials_per_point = 5_000;

    let floor = high_rate_floor(&params.amplitude(), &code);
    println!(
        "RS({}, {}), t = {}, floor slope {:.3} decades/dB",
        255,
        code.info_symbols,
        code.correctable(),
        floor.slope_db()
    );
    for point in run_rs_ser_sweep(&spec, 0)? {
        let at = params.with_snr_db(point.snr_db);
        let bound = ser_upper_bound(&at, &code)?;
        println!(
            "{:>4} dB: simulated {:.3e} ({} sectors), exact {:.3e}, bound {:.3e}",
            point.snr_db,
            point.rate,
            point.observed,
            ser_exact(&at, &code)?,
            bound.total
        );
    }
    Ok(())
}
