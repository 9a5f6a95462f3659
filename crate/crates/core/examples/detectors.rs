//! Runs the genie, LLN and fixed-threshold detectors on the same snapshot.

use jitterchan::channel::{sample_snapshot, BitSource, ChannelParams};
use jitterchan::detect::{
    fixed_threshold_detect, gap_bound, genie_detect, lln_detect, optimal_single_probe_threshold,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jitterchan::Result<()> {
    let params = ChannelParams::new(0.0, 0.3, 0.5, 1000, 8)?.with_snr_db(16.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r0 = optimal_single_probe_threshold(&params)?;
    println!(
        "fixed threshold r0 = {r0:.4}, LLN gap bound = {:.4}",
        gap_bound(&params)?
    );

    for _ in 0..5 {
        let snap = sample_snapshot(&params, &BitSource::Iud, &mut rng)?;
        let errors = |est: &[u8]| est.iter().zip(&snap.bits).filter(|(a, b)| a != b).count();
        let genie = genie_detect(&snap.outputs, snap.amplitude)?;
        let lln = lln_detect(&snap.outputs)?;
        let fixed = fixed_threshold_detect(&snap.outputs, r0);
        println!(
            "p = {:.3}: genie {:>3} errors, lln {:>3} (threshold {:.3}), fixed {:>3}",
            snap.amplitude,
            errors(&genie.estimated_bits),
            errors(&lln.estimated_bits),
            lln.threshold_used,
            errors(&fixed.estimated_bits),
        );
    }
    Ok(())
}
