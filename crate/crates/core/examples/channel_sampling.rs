//! Draws a few array snapshots and compares the empirical amplitude
//! distribution against the analytic tail `Pr(P <= p_c)`.

use jitterchan::channel::{sample_snapshot, BitSource, ChannelParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jitterchan::Result<()> {
    let params = ChannelParams::new(0.1, 0.2, 0.5, 16, 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    println!("gamma = W^2 / (2 sigma_J^2) = {:.3}", params.gamma());
    for _ in 0..3 {
        let snap = sample_snapshot(&params, &BitSource::Iud, &mut rng)?;
        let bits: String = snap.bits.iter().map(|b| char::from(b'0' + b)).collect();
        println!(
            "J = {:+.4}  p = {:.4}  bits = {bits}",
            snap.jitter, snap.amplitude
        );
    }

    let dist = params.amplitude();
    let draws = 200_000;
    for p_c in [0.5, 0.8, 0.95] {
        let hits = (0..draws)
            .filter(|_| dist.sample(&mut rng).1 <= p_c)
            .count();
        println!(
            "Pr(P <= {p_c}): empirical {:.5}, analytic {:.5}",
            hits as f64 / draws as f64,
            dist.tail(p_c)?
        );
    }
    Ok(())
}
