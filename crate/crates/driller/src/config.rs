//! Drilling configuration read from YAML.

use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, NaiveTime};
use grepo_core::ProjectId;
use serde::{Deserialize, Serialize};
use serde_yaml::Value;
use thiserror::Error;

pub const DEFAULT_BATCH_SIZE: usize = 50;

const KNOWN_KEYS: [&str; 8] = [
    "project_id",
    "repo_path",
    "start_date",
    "end_date",
    "batch_size",
    "index_source_code",
    "cache_dir",
    "db_path",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectConfig {
    pub project_id: ProjectId,
    pub repo_path: PathBuf,
    /// Inclusive lower bound on the author timestamp, Unix seconds.
    pub start_date: Option<i64>,
    /// Inclusive upper bound on the author timestamp, Unix seconds.
    pub end_date: Option<i64>,
    pub batch_size: usize,
    pub index_source_code: bool,
    pub cache_dir: Option<PathBuf>,
    pub db_path: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
struct RawConfig {
    project_id: Option<String>,
    repo_path: Option<PathBuf>,
    start_date: Option<Value>,
    end_date: Option<Value>,
    batch_size: Option<i64>,
    index_source_code: Option<bool>,
    cache_dir: Option<PathBuf>,
    db_path: Option<PathBuf>,
}

/// A parsed config plus warnings about keys it ignored.
#[derive(Debug)]
pub struct LoadedConfig {
    pub config: ProjectConfig,
    pub warnings: Vec<String>,
}

impl ProjectConfig {
    pub fn new(project_id: ProjectId, repo_path: impl Into<PathBuf>, db_path: impl Into<PathBuf>) -> Self {
        Self {
            project_id,
            repo_path: repo_path.into(),
            start_date: None,
            end_date: None,
            batch_size: DEFAULT_BATCH_SIZE,
            index_source_code: false,
            cache_dir: None,
            db_path: db_path.into(),
        }
    }

    /// Reads a config file. Relative paths inside it resolve against the
    /// file's directory; `db_override` replaces `db_path` when given.
    pub fn load(path: &Path, db_override: Option<&Path>) -> Result<LoadedConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, db_override)
    }

    pub fn parse(text: &str, base_dir: &Path, db_override: Option<&Path>) -> Result<LoadedConfig, ConfigError> {
        let doc: Value = serde_yaml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let Value::Mapping(map) = &doc else {
            return Err(ConfigError::Parse("top level must be a mapping".into()));
        };
        let mut warnings = Vec::new();
        for key in map.keys() {
            match key.as_str() {
                Some(k) if KNOWN_KEYS.contains(&k) => {}
                Some(k) => warnings.push(format!("unknown config key `{k}` ignored")),
                None => warnings.push(format!("non-string config key {key:?} ignored")),
            }
        }
        let mut known = map.clone();
        known.retain(|k, _| k.as_str().is_some_and(|k| KNOWN_KEYS.contains(&k)));
        let raw: RawConfig =
            serde_yaml::from_value(Value::Mapping(known)).map_err(|e| ConfigError::Parse(e.to_string()))?;

        let project_id = raw.project_id.ok_or_else(|| ConfigError::Invalid("missing project_id".into()))?;
        let project_id = ProjectId::new(project_id).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let repo_path = raw.repo_path.ok_or_else(|| ConfigError::Invalid("missing repo_path".into()))?;
        let db_path = db_override
            .map(Path::to_path_buf)
            .or(raw.db_path.map(|p| base_dir.join(p)))
            .ok_or_else(|| ConfigError::Invalid("missing db_path".into()))?;
        let batch_size = match raw.batch_size {
            None => DEFAULT_BATCH_SIZE,
            Some(n) if n >= 1 => n as usize,
            Some(n) => return Err(ConfigError::Invalid(format!("batch_size must be >= 1, got {n}"))),
        };
        let start_date = raw.start_date.as_ref().map(|v| parse_date(v, false)).transpose()?;
        let end_date = raw.end_date.as_ref().map(|v| parse_date(v, true)).transpose()?;
        if let (Some(s), Some(e)) = (start_date, end_date) {
            if s > e {
                return Err(ConfigError::Invalid(format!("start_date {s} is after end_date {e}")));
            }
        }
        let config = ProjectConfig {
            project_id,
            repo_path: base_dir.join(repo_path),
            start_date,
            end_date,
            batch_size,
            index_source_code: raw.index_source_code.unwrap_or(false),
            cache_dir: raw.cache_dir.map(|p| base_dir.join(p)),
            db_path,
        };
        Ok(LoadedConfig { config, warnings })
    }

    pub fn in_window(&self, timestamp: i64) -> bool {
        self.start_date.is_none_or(|s| s <= timestamp) && self.end_date.is_none_or(|e| timestamp <= e)
    }
}

/// Unix seconds, an RFC 3339 timestamp, or a `YYYY-MM-DD` date in UTC. A
/// bare date used as an upper bound covers the whole day.
fn parse_date(value: &Value, upper: bool) -> Result<i64, ConfigError> {
    if let Some(n) = value.as_i64() {
        return Ok(n);
    }
    let Some(s) = value.as_str().map(str::trim) else {
        return Err(ConfigError::Invalid(format!("date must be Unix seconds or a string, got {value:?}")));
    };
    if let Ok(n) = s.parse::<i64>() {
        return Ok(n);
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp());
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        let time = if upper { NaiveTime::from_hms_opt(23, 59, 59) } else { NaiveTime::from_hms_opt(0, 0, 0) };
        return Ok(d.and_time(time.expect("valid time")).and_utc().timestamp());
    }
    Err(ConfigError::Invalid(format!("unrecognised date `{s}`")))
}
