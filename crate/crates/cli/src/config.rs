//! Run configuration assembled from an optional JSON file and flags.

use std::fs;
use std::path::{Path, PathBuf};

use iprox::problems::circle_starting_points;
use iprox::{InnerParams, OuterParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable consulted when neither a flag nor the config file
/// names an output directory.
pub const OUT_DIR_ENV: &str = "IPROX_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "iprox-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TraceFormat {
    #[default]
    Csv,
    None,
}

/// Everything a `solve` invocation needs. Every field may come from the
/// config file; flags given on the command line win.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Option<String>,
    pub x0: Vec<Vec<f64>>,
    pub protocol: Option<String>,
    pub barrier: String,
    pub outer: OuterParams,
    pub inner: InnerParams,
    pub out_dir: Option<PathBuf>,
    pub trace_format: TraceFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            problem: None,
            x0: Vec::new(),
            protocol: None,
            barrier: "reciprocal".to_string(),
            outer: OuterParams::default(),
            inner: InnerParams::default(),
            out_dir: None,
            trace_format: TraceFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::ConfigFile { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::ConfigParse { path: path.into(), source })
    }

    /// Output directory: explicit setting, then the environment, then the default.
    pub fn resolved_out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn problem_name(&self) -> Result<&str, CliError> {
        self.problem.as_deref().ok_or_else(|| CliError::Config("no problem given (use --problem)".into()))
    }
}

/// Parses `"0,1.05"` into a point.
pub fn parse_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            match part.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Config(format!("bad coordinate '{part}' in --x0 '{text}'"))),
            }
        })
        .collect()
}

/// A multistart protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Points on the circle of radius 4/5 around (0, 1/4).
    Circle(usize),
}

impl Protocol {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("unknown protocol '{text}' (expected circle:<count>)"));
        let (kind, count) = text.split_once(':').ok_or_else(bad)?;
        match kind {
            "circle" => match count.parse::<usize>() {
                Ok(n) if n > 0 => Ok(Protocol::Circle(n)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }

    pub fn points(self, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
        match self {
            Protocol::Circle(count) => {
                if dim != 2 {
                    return Err(CliError::Config(format!("circle protocol needs a 2-d problem, got n={dim}")));
                }
                Ok(circle_starting_points(count).iter().map(|p| p.to_vec()).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("0,1.05").unwrap(), vec![0.0, 1.05]);
        assert_eq!(parse_point(" -2 ").unwrap(), vec![-2.0]);
        assert!(parse_point("1,,2").is_err());
        assert!(parse_point("nan").is_err());
    }

    #[test]
    fn protocols_parse() {
        assert_eq!(Protocol::parse("circle:20").unwrap(), Protocol::Circle(20));
        assert!(Protocol::parse("circle:0").is_err());
        assert!(Protocol::parse("grid:3").is_err());
        assert!(Protocol::Circle(3).points(3).is_err());
        let p = &Protocol::Circle(4).points(2).unwrap()[1];
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.05).abs() < 1e-15);
    }

    #[test]
    fn config_file_is_strict() {
        let cfg: RunConfig = serde_json::from_str(r#"{"problem":"rosenbrock","outer":{"eps_p":1e-3}}"#).unwrap();
        assert_eq!(cfg.outer.eps_p, 1e-3);
        assert_eq!(cfg.outer.eps_d, OuterParams::default().eps_d);
        assert!(serde_json::from_str::<RunConfig>(r#"{"problme":"x"}"#).is_err());
    }
}
