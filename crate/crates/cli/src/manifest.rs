use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use hardreg::graphs::io::sha256_hex;
use hardreg::{Error, Result};

pub const FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub name: String,
    pub sha256: String,
}

/// Everything needed to rebuild a directory byte for byte.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    /// Effective configuration after command-line overrides, as TOML.
    pub config: String,
    pub config_sha256: String,
    /// Extra scalar arguments such as `k` and `s`.
    pub args: BTreeMap<String, String>,
    pub artifacts: Vec<Artifact>,
    pub elapsed_ms: u128,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, config: String, args: BTreeMap<String, String>) -> Self {
        RunManifest {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed,
            config_sha256: sha256_hex(config.as_bytes()),
            config,
            args,
            artifacts: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn arg(&self, key: &str) -> Result<&str> {
        self.args.get(key).map(String::as_str).ok_or_else(|| Error::Parse(format!("manifest lacks argument {key:?}")))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(dir.join(FILE), text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let path = if path.is_dir() { path.join(FILE) } else { path.to_path_buf() };
        let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Writes `files` into `dir` and returns their hashes in order.
pub fn write_all(dir: &Path, files: &[(String, String)]) -> Result<Vec<Artifact>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (name, text) in files {
        fs::write(dir.join(name), text)?;
        out.push(Artifact { name: name.clone(), sha256: sha256_hex(text.as_bytes()) });
    }
    Ok(out)
}

/// Recorded artifacts whose file is missing or hashes differently.
pub fn stale(dir: &Path, artifacts: &[Artifact]) -> Vec<String> {
    artifacts
        .iter()
        .filter(|a| fs::read(dir.join(&a.name)).map(|b| sha256_hex(&b) != a.sha256).unwrap_or(true))
        .map(|a| a.name.clone())
        .collect()
}
