use std::fmt;
use std::str::FromStr;

use crate::detect::DetectorKind;
use crate::{Error, Result};

use super::config::{ExperimentConfig, ExperimentKind, NoiseGrid};

/// Named parameter sets that regenerate the standard figures.
///
/// Array settings are those of the original experiments: `N = 1000` probes
/// for the bit-level figures, `n = 10` bit symbols with `N_s` up to 1023
/// for the RS figures, `W = 0.5` throughout. SNR grids are chosen to cover
/// each curve's interesting range. Monte Carlo presets default to `10^5`
/// snapshots per point, which for the RS figures is ten times fewer sectors
/// than the original `10^6`; `--trials-scale` restores or shrinks it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// LLN versus genie BER for several jitter strengths.
    Fig3,
    /// LLN versus the per-probe fixed threshold.
    Fig4,
    /// RS sector error rate for three block sizes at `R = 0.8`.
    Fig5,
    /// RS sector error rate for three code rates, with analytic floors.
    Fig6,
    /// i.u.d. capacity versus SNR for several jitter strengths.
    Fig7,
    /// Global versus independent jitter capacity.
    Fig7b,
    /// Random coding bound versus SNR for several rates.
    Fig8,
    /// Random coding bound versus rate at fixed SNR.
    Fig9,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig7b,
        Preset::Fig8,
        Preset::Fig9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig7b => "fig7b",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
        }
    }

    /// The full configuration of the preset with seed 0.
    pub fn config(self) -> ExperimentConfig {
        let range = |start: f64, step: f64, stop: f64| {
            let n = ((stop - start) / step).round() as usize;
            (0..=n).map(|i| start + i as f64 * step).collect::<Vec<_>>()
        };
        let base = ExperimentConfig {
            preset: Some(self),
            ..ExperimentConfig::default()
        };
        match self {
            Preset::Fig3 => ExperimentConfig {
                kind: ExperimentKind::BerSweep,
                noise: Some(NoiseGrid::SnrDb(range(4.0, 2.0, 30.0))),
                sigma_j: vec![0.0, 0.1, 0.2, 0.3],
                num_probes: Some(1000),
                detectors: vec![DetectorKind::Genie, DetectorKind::Lln],
                ..base
            },
            Preset::Fig4 => ExperimentConfig {
                kind: ExperimentKind::BerSweep,
                noise: Some(NoiseGrid::SnrDb(range(20.0, 2.0, 60.0))),
                sigma_j: vec![0.2, 0.3],
                num_probes: Some(1000),
                detectors: vec![DetectorKind::Lln, DetectorKind::Fixed],
                ..base
            },
            Preset::Fig5 => ExperimentConfig {
                kind: ExperimentKind::RsSerSweep,
                noise: Some(NoiseGrid::SnrDb(range(14.0, 2.0, 30.0))),
                sigma_j: vec![0.2],
                block_symbols: vec![255, 511, 1023],
                rate: vec![0.8],
                ..base
            },
            Preset::Fig6 => ExperimentConfig {
                kind: ExperimentKind::RsSerSweep,
                noise: Some(NoiseGrid::SnrDb(range(14.0, 2.0, 32.0))),
                sigma_j: vec![0.2],
                block_symbols: vec![255],
                rate: vec![0.5, 0.8, 0.9],
                ..base
            },
            Preset::Fig7 => ExperimentConfig {
                kind: ExperimentKind::CapacityCurve,
                noise: Some(NoiseGrid::SnrDb(range(-10.0, 2.0, 40.0))),
                sigma_j: vec![0.0, 0.1, 0.2, 0.3],
                ..base
            },
            Preset::Fig7b => ExperimentConfig {
                kind: ExperimentKind::CapacityCurve,
                noise: Some(NoiseGrid::SnrDb(range(-5.0, 1.0, 40.0))),
                sigma_j: vec![0.3],
                ..base
            },
            Preset::Fig8 => ExperimentConfig {
                kind: ExperimentKind::RcbCurve,
                noise: Some(NoiseGrid::SnrDb(range(10.0, 2.0, 40.0))),
                sigma_j: vec![0.2],
                num_probes: Some(1000),
                rate: vec![0.5, 0.8, 0.9],
                ..base
            },
            Preset::Fig9 => ExperimentConfig {
                kind: ExperimentKind::RcbCurve,
                noise: Some(NoiseGrid::SnrDb(vec![20.0, 30.0])),
                sigma_j: vec![0.2],
                num_probes: Some(1000),
                rate: (1..=19).map(|i| i as f64 / 20.0).collect(),
                ..base
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!(
                    "unknown preset {s:?} (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_and_round_trip() {
        for p in Preset::ALL {
            let cfg = p.config();
            let errors: Vec<_> = cfg
                .validate()
                .into_iter()
                .filter(|d| d.is_error())
                .collect();
            assert!(errors.is_empty(), "{p}: {errors:?}");
            assert_eq!(
                ExperimentConfig::parse(&cfg.to_text(), None).unwrap(),
                cfg,
                "{p}"
            );
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fig10".parse::<Preset>().is_err());
    }
}
