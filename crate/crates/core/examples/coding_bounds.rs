//! Random coding and Fano bounds on the block error floor versus SNR.

use jitterchan::channel::ChannelParams;
use jitterchan::infotheory::{fano_bound, power_law_fit, rcb_bound};

fn main() -> jitterchan::Result<()> {
    let rate = 0.8;
    let base = ChannelParams::new(0.0, 0.2, 0.5, 1000, 8)?;
    let mut floors = Vec::new();
    println!("{:>6} {:>8} {:>12} {:>12}", "snr_db", "p_c", "rcb", "fano");
    for snr in (16..=40).step_by(4) {
        let params = base.with_snr_db(f64::from(snr));
        let rcb = rcb_bound(rate, params.num_probes, &params)?;
        let fano = fano_bound(rate, &params)?;
        println!(
            "{:>6} {:>8.4} {:>12.4e} {:>12.4e}",
            snr, rcb.p_c, rcb.total, fano.exact_floor
        );
        floors.push((params.sigma, rcb.floor_term));
    }
    let fit = power_law_fit(&floors)?;
    println!(
        "rcb floor ~ sigma^{:.3} (gamma = {:.3})",
        fit.exponent,
        base.gamma()
    );
    Ok(())
}
