//! Monte Carlo BER of the LLN and genie detectors over an SNR grid.

use jitterchan::channel::ChannelParams;
use jitterchan::detect::DetectorKind;
use jitterchan::sim::{run_ber_sweep, SweepSpec};

fn main() -> jitterchan::Result<()> {
    let params = ChannelParams::new(0.0, 0.2, 0.5, 1000, 8)?;
    let mut spec = SweepSpec::new(params, vec![8.0, 12.0, 16.0, 20.0], DetectorKind::Lln);
    spec.detectors.push(DetectorKind::Genie);
    spec.trials_per_point = 20_000;
    spec.master_seed = 42;

    println!(
        "{:>6} {:>6} {:>12} {:>26}",
        "snr_db", "det", "ber", "95% interval"
    );
    for point in run_ber_sweep(&spec, 0)? {
        println!(
            "{:>6} {:>6} {:>12.4e} [{:.3e}, {:.3e}]",
            point.snr_db,
            point.detector.name(),
            point.rate,
            point.ci95.lo,
            point.ci95.hi
        );
    }
    Ok(())
}
