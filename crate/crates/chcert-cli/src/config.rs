//! Run configuration: defaults, the `key = value` config format, and the
//! parameter echo that makes every structured certificate re-parseable as
//! a configuration.
//!
//! Reserved namespaces (`schema`, `version`, `generated`, `check.*`,
//! `result.*`) are skipped during parsing, so feeding a structured
//! certificate back through `--config` reproduces the run that created
//! it. Any other unknown key is rejected with its line number.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use chcert::henon::{HenonParams, GOLDEN_MEAN_FRAC};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    HenonVerify,
    HenonScan,
    ConesCheck,
    CoveringCheck,
    AtlasValidate,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::HenonVerify => "henon-verify",
            Mode::HenonScan => "henon-scan",
            Mode::ConesCheck => "cones-check",
            Mode::CoveringCheck => "covering-check",
            Mode::AtlasValidate => "atlas-validate",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "henon-verify" => Ok(Mode::HenonVerify),
            "henon-scan" => Ok(Mode::HenonScan),
            "cones-check" => Ok(Mode::ConesCheck),
            "covering-check" => Ok(Mode::CoveringCheck),
            "atlas-validate" => Ok(Mode::AtlasValidate),
            other => Err(format!(
                "unknown mode '{other}' (expected henon-verify, henon-scan, \
                 cones-check, covering-check, or atlas-validate)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Structured,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Structured => "structured",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "structured" => Ok(OutputFormat::Structured),
            other => Err(format!(
                "unknown format '{other}' (expected text or structured)"
            )),
        }
    }
}

/// One run of the tool. Defaults reproduce the reference verification:
/// a = 0.68, b = 0.1, eps = 0.5, tau = 3, eta = 0.075, rates 2 and 200.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub a: f64,
    pub b: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub tau: f64,
    pub eta: f64,
    pub v: Option<u64>,
    pub m_forward: f64,
    pub m_backward: f64,
    /// `None` writes to stdout.
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::HenonVerify,
            a: 0.68,
            b: 0.1,
            omega: GOLDEN_MEAN_FRAC,
            epsilon: 0.5,
            tau: 3.0,
            eta: 0.075,
            v: None,
            m_forward: 2.0,
            m_backward: 200.0,
            out: None,
            format: OutputFormat::Text,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: malformed entry '{text}' (expected key = value)")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for '{key}': {message}")]
    BadValue {
        line: usize,
        key: String,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

const RESERVED_PREFIXES: [&str; 3] = ["check.", "result.", "scan."];
const RESERVED_KEYS: [&str; 3] = ["schema", "version", "generated"];

fn is_reserved(key: &str) -> bool {
    RESERVED_KEYS.contains(&key) || RESERVED_PREFIXES.iter().any(|p| key.starts_with(p))
}

/// Parses a configuration on top of the defaults. Numbers are parsed as
/// exact decimals into the nearest binary value; everything downstream
/// rounds outward, so the parse is the only nearest-rounding step.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    apply_config(&mut cfg, text)?;
    validate(&cfg)?;
    Ok(cfg)
}

fn apply_config(cfg: &mut RunConfig, text: &str) -> Result<(), ConfigError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(ConfigError::Malformed {
                line,
                text: stripped.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if is_reserved(key) {
            continue;
        }
        set_key(cfg, key, value).map_err(|message| match message {
            SetKeyError::Unknown => ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            },
            SetKeyError::Bad(message) => ConfigError::BadValue {
                line,
                key: key.to_string(),
                message,
            },
        })?;
    }
    Ok(())
}

enum SetKeyError {
    Unknown,
    Bad(String),
}

fn parse_num(value: &str) -> Result<f64, SetKeyError> {
    value
        .parse::<f64>()
        .map_err(|e| SetKeyError::Bad(e.to_string()))
}

fn set_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), SetKeyError> {
    match key {
        "mode" => cfg.mode = value.parse().map_err(SetKeyError::Bad)?,
        "a" => cfg.a = parse_num(value)?,
        "b" => cfg.b = parse_num(value)?,
        "omega" => cfg.omega = parse_num(value)?,
        "epsilon" => cfg.epsilon = parse_num(value)?,
        "tau" => cfg.tau = parse_num(value)?,
        "eta" => cfg.eta = parse_num(value)?,
        "v" => {
            cfg.v = if value == "auto" {
                None
            } else {
                Some(
                    value
                        .parse::<u64>()
                        .map_err(|e| SetKeyError::Bad(e.to_string()))?,
                )
            }
        }
        "m_forward" => cfg.m_forward = parse_num(value)?,
        "m_backward" => cfg.m_backward = parse_num(value)?,
        "out" => {
            cfg.out = if value == "-" {
                None
            } else {
                Some(PathBuf::from(value))
            }
        }
        "format" => cfg.format = value.parse().map_err(SetKeyError::Bad)?,
        _ => return Err(SetKeyError::Unknown),
    }
    Ok(())
}

/// Range checks that do not need the verification machinery.
pub fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    if !(cfg.epsilon.is_finite() && cfg.epsilon >= 0.0) {
        return Err(ConfigError::Invalid(format!(
            "epsilon = {} must be nonnegative",
            cfg.epsilon
        )));
    }
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if !positive(cfg.tau) || !positive(cfg.eta) {
        return Err(ConfigError::Invalid(
            "tau and eta must be positive".to_string(),
        ));
    }
    let rate_ok = |m: f64| m.is_finite() && m > 1.0;
    if !rate_ok(cfg.m_forward) || !rate_ok(cfg.m_backward) {
        return Err(ConfigError::Invalid(
            "expansion rates m_forward and m_backward must exceed 1".to_string(),
        ));
    }
    if let Some(v) = cfg.v {
        if v < 9 {
            return Err(ConfigError::Invalid(format!(
                "v = {v} is below the atlas minimum of 9"
            )));
        }
    }
    Ok(())
}

impl RunConfig {
    /// The map parameters this configuration describes.
    pub fn henon_params(&self) -> chcert::Result<HenonParams> {
        HenonParams::new(
            self.a,
            self.b,
            self.omega,
            self.epsilon,
            self.tau,
            self.eta,
            self.v,
        )
    }

    /// Parameter echo in config syntax; the output re-parses to `self`.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("mode = {}\n", self.mode.as_str()));
        s.push_str(&format!("a = {}\n", self.a));
        s.push_str(&format!("b = {}\n", self.b));
        s.push_str(&format!("omega = {}\n", self.omega));
        s.push_str(&format!("epsilon = {}\n", self.epsilon));
        s.push_str(&format!("tau = {}\n", self.tau));
        s.push_str(&format!("eta = {}\n", self.eta));
        match self.v {
            Some(v) => s.push_str(&format!("v = {v}\n")),
            None => s.push_str("v = auto\n"),
        }
        s.push_str(&format!("m_forward = {}\n", self.m_forward));
        s.push_str(&format!("m_backward = {}\n", self.m_backward));
        match &self.out {
            Some(p) => s.push_str(&format!("out = {}\n", p.display())),
            None => s.push_str("out = -\n"),
        }
        s.push_str(&format!("format = {}\n", self.format.as_str()));
        s
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
