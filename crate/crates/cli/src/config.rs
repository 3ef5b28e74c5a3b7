//! `key=value` config files, merged underneath the command line.

use std::ffi::OsString;
use std::fmt;
use std::fs;

use clap::CommandFactory;

use crate::Cli;

#[derive(Debug)]
pub enum ConfigError {
    Io(String, std::io::Error),
    Line {
        path: String,
        line: usize,
        message: String,
    },
    NonUtf8Argument,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(path, e) => write!(f, "cannot read config {path}: {e}"),
            ConfigError::Line {
                path,
                line,
                message,
            } => write!(f, "{path}:{line}: {message}"),
            ConfigError::NonUtf8Argument => write!(f, "arguments must be valid UTF-8"),
        }
    }
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

fn present(args: &[String], flag: &str) -> bool {
    let eq = format!("{flag}=");
    args.iter().any(|a| a == flag || a.starts_with(&eq))
}

/// Returns `argv` with every config entry whose flag is absent appended.
pub fn merged_args(argv: Vec<OsString>) -> Result<Vec<String>, ConfigError> {
    let mut args = argv
        .into_iter()
        .map(|a| a.into_string().map_err(|_| ConfigError::NonUtf8Argument))
        .collect::<Result<Vec<_>, _>>()?;
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| ConfigError::Io(path.clone(), e))?;

    let root = Cli::command();
    let sub = args
        .iter()
        .skip(1)
        .find_map(|a| root.find_subcommand(a.as_str()).cloned());
    let known = |key: &str| {
        root.get_arguments()
            .chain(sub.iter().flat_map(|s| s.get_arguments()))
            .find(|a| a.get_long() == Some(key))
            .map(|a| a.get_action().takes_values())
    };

    let original = args.clone();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ConfigError::Line {
            path: path.clone(),
            line: i + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(err("config files cannot include other config files".into()));
        }
        let takes_value = known(&key).ok_or_else(|| err(format!("unknown key {key:?}")))?;
        let flag = format!("--{key}");
        if present(&original, &flag) {
            continue;
        }
        if key == "work-ceiling" && std::env::var_os("SYMFQ_WORK_CEILING").is_some() {
            continue;
        }
        if takes_value {
            args.push(flag);
            args.push(value.to_string());
        } else {
            match value {
                "true" | "yes" | "1" => args.push(flag),
                "false" | "no" | "0" => {}
                _ => return Err(err(format!("{key} expects true or false, got {value:?}"))),
            }
        }
    }
    Ok(args)
}
