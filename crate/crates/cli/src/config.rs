//! `key = value` config files.
//!
//! Every key mirrors a long flag of the subcommand (`bath-m = 100` or
//! `bath_m = 100` for `--bath-m 100`). File entries are appended to the
//! command line only for flags that were not given explicitly, so flags
//! always win.

use std::fs;
use std::path::Path;

/// Flags that take no value; a config entry `key = true` enables them.
const SWITCHES: &[&str] = &["sequential"];

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Syntax { line: usize, text: String },
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "{e}"),
            ConfigError::Syntax { line, text } => {
                write!(f, "line {line}: expected `key = value`, got `{text}`")
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            });
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            });
        }
        entries.push((key, value));
    }
    Ok(entries)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            return iter.next().cloned();
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            return Some(path.to_string());
        }
    }
    None
}

fn has_flag(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_value = format!("--{key}=");
    args.iter()
        .any(|a| *a == flag || a.starts_with(&with_value))
}

/// Returns `args` extended with the entries of the `--config` file, if any.
pub fn merge(args: Vec<String>) -> Result<Vec<String>, ConfigError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path)).map_err(ConfigError::Io)?;
    Ok(merge_entries(args, parse(&text)?))
}

fn merge_entries(mut args: Vec<String>, entries: Vec<(String, String)>) -> Vec<String> {
    let explicit = args.clone();
    for (key, value) in entries {
        if key == "config" || has_flag(&explicit, &key) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            if matches!(value.as_str(), "true" | "1" | "yes") {
                args.push(format!("--{key}"));
            }
        } else {
            args.push(format!("--{key}"));
            args.push(value);
        }
    }
    args
}
