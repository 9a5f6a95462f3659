//! Runs a preset through the experiment runner at reduced size and prints
//! the CSV it would write.

use jitterchan::cli::{render_csv, run, validate, Preset};

fn main() -> jitterchan::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig7b".into());
    let preset: Preset = name.parse()?;
    let mut cfg = preset.config();
    cfg.trials_scale = 0.01;
    for diagnostic in validate(&cfg) {
        eprintln!("{diagnostic}");
    }
    print!("{}", render_csv(&cfg, &run(&cfg)?));
    Ok(())
}
