//! Experiment configuration files and command-line value parsing.

use serde::{Deserialize, Serialize};
use zonal::charpoly_mc::IdentityParams;
use zonal::ensembles::McmcConfig;
use zonal::special_functions::AsymptoticIdentity;
use zonal::{Complex64, Partition};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A complete, reproducible description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum ExperimentConfig {
    Verify(VerifyConfig),
    Ratio(RatioConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub identity: String,
    pub samples: u64,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
    #[serde(default)]
    pub params: IdentityParams,
    #[serde(default)]
    pub mcmc: McmcConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioConfig {
    pub identity: AsymptoticIdentity,
    pub k: usize,
    pub abs_z: Vec<f64>,
    pub n_schedule: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub format: Format,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialise")
    }

    /// The config with its output path cleared; this is what reports embed
    /// and hash, so moving a file does not change its contents.
    pub fn without_output(&self) -> Self {
        let mut c = self.clone();
        match &mut c {
            ExperimentConfig::Verify(v) => v.output = None,
            ExperimentConfig::Ratio(r) => r.output = None,
        }
        c
    }
}

fn bad(what: &str, input: &str) -> CliError {
    CliError::Config(format!("cannot parse {what} from {input:?}"))
}

/// `"re"` or `"re,im"`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("a complex number", s));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

/// Semicolon-separated complex numbers.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_complex).collect()
}

/// Semicolon- or comma-separated reals.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split([';', ','])
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| bad("a list of reals", s)))
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split([';', ','])
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| bad("a list of integers", s)))
        .collect()
}

/// Comma-separated parts, e.g. `"2,1"`.
pub fn parse_partition(s: &str) -> Result<Partition, CliError> {
    Ok(Partition::new(parse_usize_list(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_inputs() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert_eq!(parse_complex(" 2 ").unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_complex("0.5,").is_err());
        assert!(parse_complex("a,b").is_err());
        let l = parse_complex_list("0.5,0;0.3,0.1").unwrap();
        assert_eq!(l, vec![Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.1)]);
    }

    #[test]
    fn config_round_trips_and_rejects_unknown_keys() {
        let text = r#"
command = "verify"
identity = "A.3a"
samples = 1000
seed = 42

[params]
n = 2
z = [[0.5, 0.0]]
w = [[0.3, 0.0]]
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        assert!(ExperimentConfig::from_toml(&format!("{text}\nextra = 1\n")).is_err());
        assert!(ExperimentConfig::from_toml(&text.replace("n = 2", "n = 2\nbogus = 3")).is_err());
    }

    #[test]
    fn ratio_config_round_trips() {
        let cfg = ExperimentConfig::Ratio(RatioConfig {
            identity: AsymptoticIdentity::K1x,
            k: 1,
            abs_z: vec![0.1, 0.5],
            n_schedule: vec![100, 800],
            big_k: Some(12),
            output: None,
            format: Format::Json,
        });
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}
