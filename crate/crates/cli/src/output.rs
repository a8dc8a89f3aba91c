//! Output directory handling and the run manifest.

use crate::error::CliError;
use bcnf::config::KvConfig;
use serde_json::{json, Map, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub const MANIFEST: &str = "manifest.json";

static STARTED: OnceLock<Instant> = OnceLock::new();

/// Starts the wall clock reported in the manifest.
pub fn start_clock() {
    STARTED.get_or_init(Instant::now);
}

/// Files written by one run, in order.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.push(path.clone());
        Ok(path)
    }

    /// Written last, only after every output succeeded.
    pub fn finish(self, subcommand: &str, config: &KvConfig, seed: Option<u64>) -> Result<PathBuf, CliError> {
        let resolved: Map<String, Value> = config.iter().map(|(k, v)| (k.to_string(), Value::from(v))).collect();
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let manifest = json!({
            "subcommand": subcommand,
            "version": env!("CARGO_PKG_VERSION"),
            "config": resolved,
            "outputs": self.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "seed": seed,
            "wall_time_s": STARTED.get_or_init(Instant::now).elapsed().as_secs_f64(),
            "timestamp_unix": timestamp,
        });
        let path = self.dir.join(MANIFEST);
        let text = serde_json::to_string_pretty(&manifest).expect("manifest is plain json");
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

pub fn load_config(path: Option<&Path>) -> Result<KvConfig, CliError> {
    match path {
        None => Ok(KvConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            Ok(KvConfig::parse(&text)?)
        }
    }
}
