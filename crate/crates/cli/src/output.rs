//! Report envelopes, config hashing and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::CliError;

/// Bumped whenever CSV columns or JSON keys change.
pub const SCHEMA_VERSION: u32 = 1;
pub const LIB_VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the canonical TOML form of `config`.
pub fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.to_toml().as_bytes()))
}

#[derive(Serialize)]
pub struct Envelope<'a, R: Serialize> {
    pub schema_version: u32,
    pub zonal_version: &'static str,
    pub config_sha256: String,
    pub config: ExperimentConfig,
    pub report: &'a R,
}

impl<'a, R: Serialize> Envelope<'a, R> {
    pub fn new(config: &ExperimentConfig, report: &'a R) -> Self {
        let config = config.without_output();
        Envelope {
            schema_version: SCHEMA_VERSION,
            zonal_version: LIB_VERSION,
            config_sha256: config_hash(&config),
            config,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
        s.push('\n');
        s
    }

    /// Leading comment line of every CSV file.
    pub fn csv_preamble(&self) -> String {
        format!(
            "# schema_version={} zonal_version={} config_sha256={}\n",
            self.schema_version, self.zonal_version, self.config_sha256
        )
    }
}

/// Writes `contents` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| CliError::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&str>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(Path::new(p), contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = std::env::temp_dir().join(format!("zonal-out-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("a.csv");
        write_atomic(&p, "one\n").unwrap();
        write_atomic(&p, "two\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two\n");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
