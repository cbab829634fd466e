//! Job files: a TOML document with an optional `[job]` table whose keys
//! back any flag left off the command line.
//!
//! ```toml
//! [job]
//! group = "heisenberg:1"
//! language = "builtin:heisenberg"
//! type = "async"
//! radius = 3
//! len = 8
//! ```

use std::path::Path;

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default)]
    pub job: JobConfig,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub group: Option<String>,
    pub language: Option<String>,
    #[serde(rename = "type")]
    pub combing_type: Option<String>,
    pub radius: Option<usize>,
    pub len: Option<usize>,
    pub cutoff: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub threads: Option<usize>,
    pub output: Option<String>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let file: JobFile = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(file.job)
    }
}
