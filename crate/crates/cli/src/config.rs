//! Experiment settings: `key = value` files overlaid by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

use crate::error::{CliError, Result};

/// Keys accepted in config files, spelled as the long flags (with `-` or `_`).
pub const KEYS: &[&str] = &[
    "m", "r", "d", "rate", "epsilon", "p", "sigma", "trials", "seed", "out", "format", "grid_step", "delta", "timing",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// Raw flags as typed on the command line. Lists accept `a,b,c` and the
/// inclusive integer range `a..b`.
#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// Number of variables; list or range.
    #[arg(long)]
    pub m: Option<String>,
    /// Polynomial degree; list or range.
    #[arg(long)]
    pub r: Option<String>,
    /// Minimum zero run between ones; list or range.
    #[arg(long)]
    pub d: Option<String>,
    /// Design rate of the RM sequence; list.
    #[arg(long)]
    pub rate: Option<String>,
    /// Erasure probabilities; list.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Crossover probabilities; list.
    #[arg(long)]
    pub p: Option<String>,
    /// Gaussian noise deviations (channel-cap only); list.
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub grid_step: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Add a wall-time column to simulation output (breaks byte-identical reruns).
    #[arg(long)]
    pub timing: bool,
}

/// Parsed and validated settings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub m: Option<Vec<usize>>,
    pub r: Option<Vec<usize>>,
    pub d: Option<Vec<usize>>,
    pub rate: Option<Vec<f64>>,
    pub epsilon: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub sigma: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub grid_step: Option<f64>,
    pub delta: Option<f64>,
    pub timing: bool,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(map)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn parse_scalar<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| CliError::Config(format!("bad value `{s}` for `{key}`")))
}

/// `1,3,5`, `2..6` (inclusive) or a mix such as `1,4..6`.
pub fn parse_usize_list(key: &str, s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = parse_scalar(key, a)?;
            let b: usize = parse_scalar(key, b.trim_start_matches('='))?;
            if a > b {
                return Err(CliError::Config(format!("empty range `{part}` for `{key}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_scalar(key, part)?);
        }
    }
    Ok(out)
}

pub fn parse_f64_list(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|part| {
            let v: f64 = parse_scalar(key, part)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::Config(format!("non-finite value for `{key}`")))
            }
        })
        .collect()
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(CliError::Config(format!("bad value `{other}` for `{key}`"))),
    }
}

impl Settings {
    /// Config file values first, then any flag given on the command line.
    pub fn resolve(flags: &Flags) -> Result<Settings> {
        let mut raw = match &flags.config {
            Some(path) => load_config(path)?,
            None => BTreeMap::new(),
        };
        let overrides = [
            ("m", &flags.m),
            ("r", &flags.r),
            ("d", &flags.d),
            ("rate", &flags.rate),
            ("epsilon", &flags.epsilon),
            ("p", &flags.p),
            ("sigma", &flags.sigma),
            ("trials", &flags.trials),
            ("seed", &flags.seed),
            ("out", &flags.out),
            ("format", &flags.format),
            ("grid_step", &flags.grid_step),
            ("delta", &flags.delta),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                raw.insert(key.to_string(), v.clone());
            }
        }
        if flags.timing {
            raw.insert("timing".into(), "true".into());
        }
        Settings::from_map(&raw)
    }

    pub fn from_map(raw: &BTreeMap<String, String>) -> Result<Settings> {
        let get = |k: &str| raw.get(k).map(String::as_str);
        let usizes = |k: &str| get(k).map(|v| parse_usize_list(k, v)).transpose();
        let floats = |k: &str| get(k).map(|v| parse_f64_list(k, v)).transpose();
        if let Some(k) = raw.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unknown key `{k}`")));
        }
        let s = Settings {
            m: usizes("m")?,
            r: usizes("r")?,
            d: usizes("d")?,
            rate: floats("rate")?,
            epsilon: floats("epsilon")?,
            p: floats("p")?,
            sigma: floats("sigma")?,
            trials: get("trials").map(|v| parse_scalar("trials", v)).transpose()?,
            seed: get("seed").map(|v| parse_scalar("seed", v)).transpose()?,
            out: get("out").map(PathBuf::from),
            format: get("format").map(str::parse).transpose()?,
            grid_step: get("grid_step").map(|v| parse_scalar("grid_step", v)).transpose()?,
            delta: get("delta").map(|v| parse_scalar("delta", v)).transpose()?,
            timing: get("timing").map(|v| parse_bool("timing", v)).transpose()?.unwrap_or(false),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CliError::Config(msg.to_string()));
        if let Some(rates) = &self.rate {
            if rates.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
                return bad("rate must lie in (0, 1)");
            }
        }
        for (name, list) in [("epsilon", &self.epsilon), ("p", &self.p)] {
            if let Some(list) = list {
                if list.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return Err(CliError::Config(format!("{name} must lie in [0, 1]")));
                }
            }
        }
        if let Some(sigmas) = &self.sigma {
            if sigmas.iter().any(|&s| s <= 0.0) {
                return bad("sigma must be positive");
            }
        }
        if self.trials == Some(0) {
            return bad("trials must be at least 1");
        }
        if let Some(step) = self.grid_step {
            if !(step > 0.0 && step < 1.0) {
                return bad("grid_step must lie in (0, 1)");
            }
        }
        if let Some(delta) = self.delta {
            if !(delta > 0.0 && delta < 1.0) {
                return bad("delta must lie in (0, 1)");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_usize_list("m", "7,9,11").unwrap(), vec![7, 9, 11]);
        assert_eq!(parse_usize_list("m", "2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_usize_list("m", "1, 4..6").unwrap(), vec![1, 4, 5, 6]);
        assert!(parse_usize_list("m", "5..2").is_err());
        assert!(parse_usize_list("m", "x").is_err());
        assert_eq!(parse_f64_list("epsilon", "0.1,0.6").unwrap(), vec![0.1, 0.6]);
    }

    #[test]
    fn config_text() {
        let map = parse_config_text("# sweep\nm = 7..9\ngrid-step = 0.05 # coarse\n\nseed=3\n").unwrap();
        assert_eq!(map["m"], "7..9");
        assert_eq!(map["grid_step"], "0.05");
        assert!(parse_config_text("colour = blue").is_err());
        assert!(parse_config_text("m 7").is_err());
        assert!(parse_config_text("m = 1\nm = 2").is_err());
    }

    #[test]
    fn validation() {
        let mut raw = BTreeMap::new();
        raw.insert("rate".to_string(), "1.5".to_string());
        assert!(matches!(Settings::from_map(&raw), Err(CliError::Config(_))));
        raw.insert("rate".to_string(), "0.5".to_string());
        raw.insert("trials".to_string(), "0".to_string());
        assert!(Settings::from_map(&raw).is_err());
        raw.insert("trials".to_string(), "10".to_string());
        let s = Settings::from_map(&raw).unwrap();
        assert_eq!(s.trials, Some(10));
        assert_eq!(s.rate, Some(vec![0.5]));
    }
}
