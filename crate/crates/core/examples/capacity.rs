//! i.u.d. capacity of the global and independent jitter channels.

use jitterchan::channel::ChannelParams;
use jitterchan::infotheory::capacity_point;

fn main() -> jitterchan::Result<()> {
    let base = ChannelParams::new(0.0, 0.3, 0.5, 1000, 8)?;
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "snr_db", "awgn", "global", "indep"
    );
    for snr in (-5..=40).step_by(5) {
        let c = capacity_point(&base.with_snr_db(f64::from(snr)))?;
        println!(
            "{:>6} {:>10.6} {:>10.6} {:>10.6}",
            snr, c.c_awgn_at_p1, c.c_global, c.c_independent
        );
    }
    Ok(())
}
