//! Experiment configuration as flat `key=value` text.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys,
//! repeated keys and missing required keys are errors; an empty file is
//! never silently replaced by defaults.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::baselines::{BpParams, GdbfParams};
use crate::error::{Error, Result};
use crate::flow::{EulerParams, InitPolicy};
use crate::potential::PotentialParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderId {
    Gf,
    Bp,
    Gdbf,
}

impl DecoderId {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecoderId::Gf => "gf",
            DecoderId::Bp => "bp",
            DecoderId::Gdbf => "gdbf",
        }
    }
}

impl fmt::Display for DecoderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecoderId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gf" => Ok(DecoderId::Gf),
            "bp" => Ok(DecoderId::Bp),
            "gdbf" => Ok(DecoderId::Gdbf),
            other => Err(Error::InvalidParameter(format!(
                "unknown decoder {other:?} (expected gf, bp or gdbf)"
            ))),
        }
    }
}

/// Parameters of all decoders; each run uses the ones its decoder needs.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderParams {
    pub potential: PotentialParams,
    pub euler: EulerParams,
    pub bp: BpParams,
    pub gdbf: GdbfParams,
}

impl Default for DecoderParams {
    fn default() -> Self {
        Self {
            potential: PotentialParams::ber_default(),
            euler: EulerParams::ber_default(),
            bp: BpParams::default(),
            gdbf: GdbfParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub code: PathBuf,
    pub decoders: Vec<DecoderId>,
    pub params: DecoderParams,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Stop an SNR point once this many word errors have been seen.
    pub min_errors: Option<u64>,
    /// Design rate; taken from the matrix when absent.
    pub rate: Option<f64>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// A config with the BER defaults for everything but the run itself.
    pub fn new(code: impl Into<PathBuf>, decoders: Vec<DecoderId>, snr_db: Vec<f64>) -> Self {
        Self {
            code: code.into(),
            decoders,
            params: DecoderParams::default(),
            snr_db,
            trials: 1000,
            seed: 0,
            min_errors: None,
            rate: None,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::InvalidParameter("snr_db list is empty".into()));
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("snr_db values must be finite".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::InvalidParameter("no decoder selected".into()));
        }
        if let Some(r) = self.rate {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::InvalidParameter(format!("rate must lie in (0, 1], got {r}")));
            }
        }
        if self.params.bp.max_iterations == 0 || self.params.gdbf.max_iterations == 0 {
            return Err(Error::InvalidParameter("iteration limits must be at least 1".into()));
        }
        Ok(())
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn render_init(init: &InitPolicy) -> String {
    match init {
        InitPolicy::Zero => "zero".into(),
        InitPolicy::ScaledReceived(d) => format!("scaled:{d}"),
        InitPolicy::Explicit(x) => format!("explicit:{}", join(x)),
    }
}

pub fn parse_init(s: &str) -> Result<InitPolicy> {
    let s = s.trim();
    if s == "zero" {
        return Ok(InitPolicy::Zero);
    }
    if let Some(d) = s.strip_prefix("scaled:") {
        return parse_num(d).map(InitPolicy::ScaledReceived);
    }
    if let Some(list) = s.strip_prefix("explicit:") {
        return parse_list(list).map(InitPolicy::Explicit);
    }
    Err(Error::InvalidParameter(format!(
        "init must be zero, scaled:<delta> or explicit:<x0,...>, got {s:?}"
    )))
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse {:?} as a number", s.trim())))
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_num).collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::InvalidParameter(format!("cannot parse {other:?} as a boolean"))),
    }
}

/// Renders every field; parsing the output gives back the same config.
pub fn render_config(c: &ExperimentConfig) -> String {
    let p = &c.params;
    let mut out = String::new();
    let _ = writeln!(out, "code={}", c.code.display());
    let _ = writeln!(out, "decoder={}", join(&c.decoders));
    let _ = writeln!(out, "alpha={}", p.potential.alpha());
    let _ = writeln!(out, "beta={}", p.potential.beta());
    let _ = writeln!(out, "T={}", p.euler.t_end());
    let _ = writeln!(out, "N={}", p.euler.steps());
    let _ = writeln!(out, "init={}", render_init(&p.euler.init));
    let _ = writeln!(out, "early_stop={}", p.euler.early_stop);
    let _ = writeln!(out, "guard={}", p.euler.guard);
    let _ = writeln!(out, "bp_max_iter={}", p.bp.max_iterations);
    let _ = writeln!(out, "bp_early_stop={}", p.bp.early_stop);
    let _ = writeln!(out, "gdbf_max_iter={}", p.gdbf.max_iterations);
    let _ = writeln!(out, "theta={}", p.gdbf.theta);
    let _ = writeln!(out, "snr_db={}", join(&c.snr_db));
    let _ = writeln!(out, "trials={}", c.trials);
    let _ = writeln!(out, "seed={}", c.seed);
    if let Some(e) = c.min_errors {
        let _ = writeln!(out, "min_errors={e}");
    }
    if let Some(r) = c.rate {
        let _ = writeln!(out, "rate={r}");
    }
    if let Some(o) = &c.output {
        let _ = writeln!(out, "output={}", o.display());
    }
    out
}

const REQUIRED: [&str; 5] = ["code", "decoder", "snr_db", "trials", "seed"];

/// Parses `key=value` text.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new("", Vec::new(), Vec::new());
    let (mut alpha, mut beta) = (cfg.params.potential.alpha(), cfg.params.potential.beta());
    let (mut t_end, mut steps) = (cfg.params.euler.t_end(), cfg.params.euler.steps());
    let mut seen: Vec<&str> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::Config { line, msg: format!("expected key=value, got {trimmed:?}") });
        };
        let (key, value) = (key.trim(), value.trim());
        let at = |e: Error| Error::Config { line, msg: e.to_string() };
        let key: &'static str = match key {
            "code" => {
                cfg.code = PathBuf::from(value);
                "code"
            }
            "decoder" => {
                cfg.decoders = parse_list(value).map_err(at)?;
                "decoder"
            }
            "alpha" => {
                alpha = parse_num(value).map_err(at)?;
                "alpha"
            }
            "beta" => {
                beta = parse_num(value).map_err(at)?;
                "beta"
            }
            "T" => {
                t_end = parse_num(value).map_err(at)?;
                "T"
            }
            "N" => {
                steps = parse_num(value).map_err(at)?;
                "N"
            }
            "init" => {
                cfg.params.euler.init = parse_init(value).map_err(at)?;
                "init"
            }
            "early_stop" => {
                cfg.params.euler.early_stop = parse_bool(value).map_err(at)?;
                "early_stop"
            }
            "guard" => {
                cfg.params.euler.guard = parse_num(value).map_err(at)?;
                "guard"
            }
            "bp_max_iter" => {
                cfg.params.bp.max_iterations = parse_num(value).map_err(at)?;
                "bp_max_iter"
            }
            "bp_early_stop" => {
                cfg.params.bp.early_stop = parse_bool(value).map_err(at)?;
                "bp_early_stop"
            }
            "gdbf_max_iter" => {
                cfg.params.gdbf.max_iterations = parse_num(value).map_err(at)?;
                "gdbf_max_iter"
            }
            "theta" => {
                cfg.params.gdbf.theta = parse_num(value).map_err(at)?;
                "theta"
            }
            "snr_db" => {
                cfg.snr_db = parse_list(value).map_err(at)?;
                "snr_db"
            }
            "trials" => {
                cfg.trials = parse_num(value).map_err(at)?;
                "trials"
            }
            "seed" => {
                cfg.seed = parse_num(value).map_err(at)?;
                "seed"
            }
            "min_errors" => {
                cfg.min_errors = Some(parse_num(value).map_err(at)?);
                "min_errors"
            }
            "rate" => {
                cfg.rate = Some(parse_num(value).map_err(at)?);
                "rate"
            }
            "output" => {
                cfg.output = Some(PathBuf::from(value));
                "output"
            }
            other => {
                return Err(Error::Config { line, msg: format!("unknown key {other:?}") });
            }
        };
        if seen.contains(&key) {
            return Err(Error::Config { line, msg: format!("key {key:?} given twice") });
        }
        seen.push(key);
    }

    if seen.is_empty() {
        return Err(Error::Config { line: last_line.max(1), msg: "config is empty".into() });
    }
    if let Some(missing) = REQUIRED.iter().find(|k| !seen.contains(k)) {
        return Err(Error::Config {
            line: last_line,
            msg: format!("missing required key {missing:?}"),
        });
    }
    let at_end = |e: Error| Error::Config { line: last_line, msg: e.to_string() };
    cfg.params.potential = PotentialParams::new(alpha, beta).map_err(at_end)?;
    let old = std::mem::take(&mut cfg.params.euler.init);
    let (early, guard) = (cfg.params.euler.early_stop, cfg.params.euler.guard);
    cfg.params.euler = EulerParams::new(t_end, steps).map_err(at_end)?.with_init(old);
    cfg.params.euler.early_stop = early;
    cfg.params.euler.guard = guard;
    cfg.validate().map_err(at_end)?;
    Ok(cfg)
}
