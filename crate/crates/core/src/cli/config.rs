use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::channel::{sigma_from_snr, snr_db};
use crate::detect::DetectorKind;
use crate::rs::{critical_amplitude, RsCode};
use crate::{Error, Result};

use super::presets::Preset;

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    BerSweep,
    RsSerSweep,
    CapacityCurve,
    RcbCurve,
    FanoCurve,
    FloorReport,
    /// Resolved to the preset's concrete kind when the config is built.
    FigurePreset,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::BerSweep,
        ExperimentKind::RsSerSweep,
        ExperimentKind::CapacityCurve,
        ExperimentKind::RcbCurve,
        ExperimentKind::FanoCurve,
        ExperimentKind::FloorReport,
        ExperimentKind::FigurePreset,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BerSweep => "ber-sweep",
            ExperimentKind::RsSerSweep => "rs-ser-sweep",
            ExperimentKind::CapacityCurve => "capacity-curve",
            ExperimentKind::RcbCurve => "rcb-curve",
            ExperimentKind::FanoCurve => "fano-curve",
            ExperimentKind::FloorReport => "floor-report",
            ExperimentKind::FigurePreset => "figure-preset",
        }
    }

    /// Whether the experiment runs Monte Carlo trials.
    pub fn is_simulation(self) -> bool {
        matches!(self, ExperimentKind::BerSweep | ExperimentKind::RsSerSweep)
    }

    fn uses_rs_code(self) -> bool {
        matches!(
            self,
            ExperimentKind::RsSerSweep | ExperimentKind::FloorReport
        )
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::Config(format!(
                    "unknown experiment {s:?} (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// The noise axis, given either as SNR in dB or as `sigma` directly.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseGrid {
    SnrDb(Vec<f64>),
    Sigma(Vec<f64>),
}

impl NoiseGrid {
    pub fn len(&self) -> usize {
        match self {
            NoiseGrid::SnrDb(v) | NoiseGrid::Sigma(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(snr_db, sigma)` pairs in grid order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            NoiseGrid::SnrDb(v) => v.iter().map(|&s| (s, sigma_from_snr(s))).collect(),
            NoiseGrid::Sigma(v) => v
                .iter()
                .map(|&s| (snr_db(s).unwrap_or(f64::INFINITY), s))
                .collect(),
        }
    }
}

/// Every parameter of one run. Lists expand to their Cartesian product.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub preset: Option<Preset>,
    pub noise: Option<NoiseGrid>,
    pub sigma_j: Vec<f64>,
    pub pulse_width: f64,
    /// Array size. RS experiments derive it as `n * N_s` when unset.
    pub num_probes: Option<usize>,
    pub symbol_bits: usize,
    pub block_symbols: Vec<usize>,
    pub rate: Vec<f64>,
    pub detectors: Vec<DetectorKind>,
    /// Snapshots per grid point before scaling.
    pub trials: u64,
    pub trials_scale: f64,
    pub seed: u64,
    /// Not part of the serialized config.
    pub out: Option<PathBuf>,
    /// Worker threads, `0` for the default. Never affects output.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::FigurePreset,
            preset: None,
            noise: None,
            sigma_j: vec![0.2],
            pulse_width: 0.5,
            num_probes: None,
            symbol_bits: 10,
            block_symbols: vec![255],
            rate: vec![0.8],
            detectors: vec![DetectorKind::Lln],
            trials: 100_000,
            trials_scale: 1.0,
            seed: 0,
            out: None,
            threads: 0,
        }
    }
}

const KEYS: [&str; 14] = [
    "experiment",
    "preset",
    "snr_db",
    "sigma",
    "sigma_j",
    "pulse_width",
    "num_probes",
    "symbol_bits",
    "block_symbols",
    "rate",
    "detectors",
    "trials",
    "trials_scale",
    "seed",
];

const CONFIG_COMMENT: &str = "# config:";

/// Rounds away the representation noise of `start + i * step`.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {:?} as a number", s.trim())))
}

/// Comma-separated items, each a number or an inclusive `start:step:stop`.
fn parse_f64_list(key: &str, s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(parse_f64(key, x)?),
            [a, b, c] => {
                let (start, step, stop) =
                    (parse_f64(key, a)?, parse_f64(key, b)?, parse_f64(key, c)?);
                let span = (stop - start) / step;
                if !(step != 0.0 && span.is_finite() && span >= -1e-9) {
                    return Err(Error::Config(format!(
                        "{key}: range {:?} never reaches its end",
                        item.trim()
                    )));
                }
                let count = (span + 1e-9).floor() as usize + 1;
                if count > 100_000 {
                    return Err(Error::Config(format!(
                        "{key}: range {:?} is too long",
                        item.trim()
                    )));
                }
                out.extend((0..count).map(|i| tidy(start + i as f64 * step)));
            }
            _ => {
                return Err(Error::Config(format!(
                    "{key}: {:?} is neither a number nor start:step:stop",
                    item.trim()
                )))
            }
        }
    }
    Ok(out)
}

fn parse_int<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse::<T>().map_err(|_| {
        Error::Config(format!(
            "{key}: cannot parse {:?} as a non-negative integer",
            s.trim()
        ))
    })
}

fn parse_usize_list(key: &str, s: &str) -> Result<Vec<usize>> {
    parse_f64_list(key, s)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 && x < 1e15 {
                Ok(x as usize)
            } else {
                Err(Error::Config(format!(
                    "{key}: {x} is not a non-negative integer"
                )))
            }
        })
        .collect()
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Extracts `key = value` pairs. Text containing `# config:` lines (a CSV
/// written by this tool) is read from those lines only.
fn key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let embedded = text.lines().any(|l| l.starts_with(CONFIG_COMMENT));
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = if embedded {
            match line.strip_prefix(CONFIG_COMMENT) {
                Some(b) => b,
                None => continue,
            }
        } else {
            line.split('#').next().unwrap_or("")
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected `key = value`, got {body:?}",
                i + 1
            ))
        })?;
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Parses config text. `requested` is the experiment named on the command
    /// line, if any; it must agree with the text.
    pub fn parse(text: &str, requested: Option<ExperimentKind>) -> Result<Self> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (line, k, v) in key_values(text)? {
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!(
                    "line {line}: unknown key {k:?} (known keys: {})",
                    KEYS.join(", ")
                )));
            }
            if map.insert(k.clone(), v).is_some() {
                return Err(Error::Config(format!("line {line}: key {k:?} given twice")));
            }
        }

        let preset = map.get("preset").map(|s| s.parse::<Preset>()).transpose()?;
        let mut cfg = preset.map_or_else(Self::default, Preset::config);

        // `figure-preset` defers to the preset; every concrete name must agree.
        let in_text = map
            .get("experiment")
            .map(|s| s.parse::<ExperimentKind>())
            .transpose()?;
        let named = [in_text, requested, preset.map(|p| p.config().kind)];
        let mut kind = None;
        for k in named
            .into_iter()
            .flatten()
            .filter(|&k| k != ExperimentKind::FigurePreset)
        {
            match kind {
                Some(prev) if prev != k => {
                    return Err(Error::Config(format!(
                        "experiment: conflicting experiments {prev} and {k} (command line, config and preset must agree)"
                    )))
                }
                _ => kind = Some(k),
            }
        }
        let wants_preset = [in_text, requested].contains(&Some(ExperimentKind::FigurePreset));
        if wants_preset && preset.is_none() {
            return Err(Error::Config(
                "preset: figure-preset needs a `preset` key".into(),
            ));
        }
        let kind = kind.unwrap_or(ExperimentKind::FigurePreset);
        cfg.kind = kind;
        cfg.preset = preset;

        if map.contains_key("snr_db") && map.contains_key("sigma") {
            return Err(Error::Config(
                "snr_db and sigma are mutually exclusive".into(),
            ));
        }
        for (k, v) in &map {
            match k.as_str() {
                "experiment" | "preset" => {}
                "snr_db" => cfg.noise = Some(NoiseGrid::SnrDb(parse_f64_list(k, v)?)),
                "sigma" => cfg.noise = Some(NoiseGrid::Sigma(parse_f64_list(k, v)?)),
                "sigma_j" => cfg.sigma_j = parse_f64_list(k, v)?,
                "pulse_width" => cfg.pulse_width = parse_f64(k, v)?,
                "num_probes" => cfg.num_probes = Some(parse_int(k, v)?),
                "symbol_bits" => cfg.symbol_bits = parse_int(k, v)?,
                "block_symbols" => cfg.block_symbols = parse_usize_list(k, v)?,
                "rate" => cfg.rate = parse_f64_list(k, v)?,
                "detectors" => {
                    cfg.detectors = v.split(',').map(str::parse).collect::<Result<_>>()?;
                }
                "trials" => cfg.trials = parse_int(k, v)?,
                "trials_scale" => cfg.trials_scale = parse_f64(k, v)?,
                "seed" => cfg.seed = parse_int(k, v)?,
                _ => unreachable!("key list checked above"),
            }
        }
        Ok(cfg)
    }

    /// The canonical `key = value` form; parsing it gives back `self`
    /// (apart from `out` and `threads`).
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![("experiment", self.kind.to_string())];
        if let Some(p) = self.preset {
            out.push(("preset", p.to_string()));
        }
        match &self.noise {
            Some(NoiseGrid::SnrDb(v)) => out.push(("snr_db", join(v))),
            Some(NoiseGrid::Sigma(v)) => out.push(("sigma", join(v))),
            None => {}
        }
        out.push(("sigma_j", join(&self.sigma_j)));
        out.push(("pulse_width", self.pulse_width.to_string()));
        if let Some(n) = self.num_probes {
            out.push(("num_probes", n.to_string()));
        }
        out.push(("symbol_bits", self.symbol_bits.to_string()));
        out.push(("block_symbols", join(&self.block_symbols)));
        out.push(("rate", join(&self.rate)));
        out.push(("detectors", join(&self.detectors)));
        out.push(("trials", self.trials.to_string()));
        out.push(("trials_scale", self.trials_scale.to_string()));
        out.push(("seed", self.seed.to_string()));
        out
    }

    /// Config text, one `key = value` per line.
    pub fn to_text(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// The `# config:` block embedded in output files.
    pub fn comment_block(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{CONFIG_COMMENT} {k} = {v}\n"))
            .collect()
    }

    /// Snapshots per point after applying `trials_scale`, at least 1.
    pub fn effective_trials(&self) -> u64 {
        ((self.trials as f64 * self.trials_scale).round() as u64).max(1)
    }

    /// Array size for non-RS experiments.
    pub fn probes(&self) -> usize {
        self.num_probes.unwrap_or(1000)
    }

    /// RS codes of the run, in `block_symbols`-major order.
    pub fn codes(&self) -> Result<Vec<RsCode>> {
        let mut out = Vec::new();
        for &ns in &self.block_symbols {
            for &r in &self.rate {
                out.push(RsCode::from_rate(self.symbol_bits, ns, r)?);
            }
        }
        Ok(out)
    }

    /// Every violated precondition, without running anything.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut d = Vec::new();
        let kind = self.kind;
        if kind == ExperimentKind::FigurePreset {
            d.push(Diagnostic::error(
                "preset",
                "figure-preset needs a `preset` key",
            ));
            return d;
        }

        match &self.noise {
            None => d.push(Diagnostic::error(
                "snr_db",
                "no noise grid: give `snr_db` or `sigma`",
            )),
            Some(grid) if grid.is_empty() => {
                d.push(Diagnostic::error("snr_db", "noise grid is empty"))
            }
            Some(grid) => {
                let (field, values) = match grid {
                    NoiseGrid::SnrDb(v) => ("snr_db", v),
                    NoiseGrid::Sigma(v) => ("sigma", v),
                };
                for &x in values {
                    let bad = match grid {
                        NoiseGrid::SnrDb(_) => !x.is_finite(),
                        NoiseGrid::Sigma(_) => !(x > 0.0 && x.is_finite()),
                    };
                    if bad {
                        d.push(Diagnostic::error(
                            field,
                            format!(
                                "{x} is outside the domain of {kind} (need finite SNR, sigma > 0)"
                            ),
                        ));
                    }
                }
                let snrs: Vec<f64> = grid.points().iter().map(|p| p.0).collect();
                if d.is_empty() && snrs.windows(2).any(|w| w[1] <= w[0]) {
                    d.push(Diagnostic::error(
                        field,
                        "grid must run in strictly increasing SNR (decreasing sigma)",
                    ));
                }
            }
        }

        if self.sigma_j.is_empty() {
            d.push(Diagnostic::error("sigma_j", "list is empty"));
        }
        for &s in &self.sigma_j {
            if !(s >= 0.0 && s.is_finite()) {
                d.push(Diagnostic::error(
                    "sigma_j",
                    format!("{s} must be finite and >= 0"),
                ));
            }
        }
        if !(self.pulse_width > 0.0 && self.pulse_width.is_finite()) {
            d.push(Diagnostic::error(
                "pulse_width",
                format!("{} must be > 0", self.pulse_width),
            ));
        }

        let uses_rate = matches!(
            kind,
            ExperimentKind::RsSerSweep
                | ExperimentKind::RcbCurve
                | ExperimentKind::FanoCurve
                | ExperimentKind::FloorReport
        );
        if uses_rate {
            if self.rate.is_empty() {
                d.push(Diagnostic::error("rate", "list is empty"));
            }
            for &r in &self.rate {
                if !(r > 0.0 && r < 1.0) {
                    d.push(Diagnostic::error("rate", format!("{r} must lie in (0, 1)")));
                }
            }
        }

        if kind.uses_rs_code() {
            self.validate_codes(&mut d);
        } else if self.num_probes == Some(0) {
            d.push(Diagnostic::error("num_probes", "must be >= 1"));
        }

        if kind.is_simulation() {
            if self.detectors.is_empty() {
                d.push(Diagnostic::error("detectors", "no detector selected"));
            }
            if self.trials == 0 {
                d.push(Diagnostic::error("trials", "must be >= 1"));
            }
            if !(self.trials_scale > 0.0 && self.trials_scale.is_finite()) {
                d.push(Diagnostic::error(
                    "trials_scale",
                    format!("{} must be > 0", self.trials_scale),
                ));
            }
        }
        d
    }

    fn validate_codes(&self, d: &mut Vec<Diagnostic>) {
        if self.block_symbols.is_empty() {
            d.push(Diagnostic::error("block_symbols", "list is empty"));
        }
        let mut codes = Vec::new();
        for &ns in &self.block_symbols {
            for &r in &self.rate {
                if !(r > 0.0 && r < 1.0) {
                    continue;
                }
                match RsCode::from_rate(self.symbol_bits, ns, r) {
                    Ok(c) => codes.push(c),
                    Err(e) => d.push(Diagnostic::error(
                        "block_symbols",
                        format!("N_s = {ns}, R = {r}: {e}"),
                    )),
                }
            }
        }
        if self.kind == ExperimentKind::RsSerSweep {
            if let Some(n) = self.num_probes {
                for &ns in &self.block_symbols {
                    let bits = ns * self.symbol_bits;
                    if n != bits {
                        d.push(Diagnostic::error(
                            "num_probes",
                            format!(
                                "N = {n} but an RS block holds n * N_s = {} * {ns} = {bits} bits",
                                self.symbol_bits
                            ),
                        ));
                    }
                }
            }
        }
        let Some(grid) = &self.noise else { return };
        for code in &codes {
            for (snr, sigma) in grid.points() {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    continue;
                }
                if let Err(Error::Degenerate(_)) =
                    critical_amplitude(code.tau(), sigma, code.symbol_bits)
                {
                    d.push(Diagnostic::warning(
                        "rate",
                        format!(
                            "p_c is degenerate at SNR {snr} dB for R = {} (tau = {}): even p = 1 leaves \
                             symbol errors above tau, so RS bound columns stay empty",
                            code.rate(),
                            code.tau()
                        ),
                    ));
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

/// One finding of [`ExperimentConfig::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub field: &'static str,
    pub message: String,
}

impl Diagnostic {
    fn error(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            field,
            message: message.into(),
        }
    }

    fn warning(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            field,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{level}: {}: {}", self.field, self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(
            parse_f64_list("x", "10:2:16").unwrap(),
            vec![10.0, 12.0, 14.0, 16.0]
        );
        assert_eq!(
            parse_f64_list("x", "0.05:0.05:0.2").unwrap(),
            vec![0.05, 0.1, 0.15, 0.2]
        );
        assert_eq!(
            parse_f64_list("x", "1, 3:1:4, 9").unwrap(),
            vec![1.0, 3.0, 4.0, 9.0]
        );
        assert_eq!(parse_f64_list("x", "5:-1:3").unwrap(), vec![5.0, 4.0, 3.0]);
        assert!(parse_f64_list("x", "1:-1:3").is_err());
        assert!(parse_f64_list("x", "1:0:3").is_err());
        assert!(parse_f64_list("x", "a").is_err());
        assert_eq!(parse_usize_list("x", "255, 511").unwrap(), vec![255, 511]);
        assert!(parse_usize_list("x", "2.5").is_err());
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        let e = ExperimentConfig::parse("experiment = ber-sweep\nsnr = 3\n", None).unwrap_err();
        assert!(e.to_string().contains("unknown key \"snr\""), "{e}");
        assert!(ExperimentConfig::parse("seed = 1\nseed = 2\n", None).is_err());
        assert!(ExperimentConfig::parse("snr_db = 1\nsigma = 0.1\n", None).is_err());
        assert!(ExperimentConfig::parse("just words\n", None).is_err());
    }

    #[test]
    fn round_trip_through_text_and_comment_block() {
        let text = "experiment = rs-ser-sweep # inline comment\n\
                    snr_db = 14:2:18\nsigma_j = 0.2\nblock_symbols = 255, 511\n\
                    rate = 0.8\ndetectors = lln, genie\ntrials = 500\nseed = 7\n";
        let cfg = ExperimentConfig::parse(text, Some(ExperimentKind::RsSerSweep)).unwrap();
        assert_eq!(cfg.noise, Some(NoiseGrid::SnrDb(vec![14.0, 16.0, 18.0])));
        assert_eq!(cfg.detectors, vec![DetectorKind::Lln, DetectorKind::Genie]);
        let again = ExperimentConfig::parse(&cfg.to_text(), None).unwrap();
        assert_eq!(again, cfg);
        let csv = format!("# jitterchan 0\n{}a,b\n1,2\n", cfg.comment_block());
        assert_eq!(ExperimentConfig::parse(&csv, None).unwrap(), cfg);
    }

    #[test]
    fn experiment_names_must_agree() {
        let t = "experiment = ber-sweep\nsnr_db = 1\n";
        assert!(ExperimentConfig::parse(t, Some(ExperimentKind::CapacityCurve)).is_err());
        assert!(ExperimentConfig::parse(t, Some(ExperimentKind::BerSweep)).is_ok());
        assert!(
            ExperimentConfig::parse("snr_db = 1\n", Some(ExperimentKind::FigurePreset)).is_err()
        );
        let p =
            ExperimentConfig::parse("preset = fig7\n", Some(ExperimentKind::FigurePreset)).unwrap();
        assert_eq!(p.kind, ExperimentKind::CapacityCurve);
        assert!(
            ExperimentConfig::parse("preset = fig7\n", Some(ExperimentKind::BerSweep)).is_err()
        );
    }

    #[test]
    fn presets_can_be_overridden() {
        let cfg = ExperimentConfig::parse("preset = fig5\ntrials = 10\n", None).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::RsSerSweep);
        assert_eq!(cfg.trials, 10);
        assert_eq!(cfg.block_symbols, vec![255, 511, 1023]);
        assert_eq!(ExperimentConfig::parse(&cfg.to_text(), None).unwrap(), cfg);
    }

    fn errors_of(text: &str) -> Vec<Diagnostic> {
        ExperimentConfig::parse(text, None).unwrap().validate()
    }

    #[test]
    fn shape_diagnostic_for_mismatched_array() {
        let d = errors_of(
            "experiment = rs-ser-sweep\nsnr_db = 20\nnum_probes = 1000\nblock_symbols = 255\n",
        );
        assert!(
            d.iter()
                .any(|x| x.is_error() && x.field == "num_probes" && x.message.contains("2550")),
            "{d:?}"
        );
    }

    #[test]
    fn domain_diagnostic_for_zero_sigma() {
        let d = errors_of("experiment = capacity-curve\nsigma = 0\n");
        assert!(
            d.iter().any(|x| x.is_error() && x.field == "sigma"),
            "{d:?}"
        );
    }

    #[test]
    fn degenerate_critical_amplitude_warning() {
        // R = 0.9 gives tau = 0.05.
        let d = errors_of("experiment = rs-ser-sweep\nsigma = 0.5\nrate = 0.9\n");
        assert!(
            d.iter()
                .any(|x| !x.is_error() && x.message.contains("degenerate")),
            "{d:?}"
        );
        assert!(d.iter().all(|x| !x.is_error()), "{d:?}");
    }

    #[test]
    fn collects_every_problem() {
        let d = errors_of(
            "experiment = ber-sweep\nsnr_db = 10, 8\nsigma_j = -1\npulse_width = 0\ntrials = 0\ndetectors = lln\n",
        );
        let fields: Vec<_> = d.iter().map(|x| x.field).collect();
        for f in ["snr_db", "sigma_j", "pulse_width", "trials"] {
            assert!(fields.contains(&f), "{f} missing from {d:?}");
        }
    }

    #[test]
    fn trials_scaling() {
        let mut cfg = ExperimentConfig {
            trials: 1000,
            trials_scale: 0.25,
            ..Default::default()
        };
        assert_eq!(cfg.effective_trials(), 250);
        cfg.trials_scale = 1e-9;
        assert_eq!(cfg.effective_trials(), 1);
    }
}
