//! `--config FILE` support.
//!
//! The file is a JSON object. Scalar top-level entries apply to every
//! command; an entry named after the subcommand (`"simulate": {...}`) holds
//! entries for that command only. Each entry becomes `--key=value` unless
//! the flag is already on the command line, so flags always win and unknown
//! keys are rejected by the argument parser like any other bad flag.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::CliError;

const SUBCOMMANDS: &[&str] = &[
    "bound",
    "table",
    "min-ratio",
    "guide",
    "johnson",
    "pvalue",
    "threshold",
    "ci",
    "simulate",
    "simulate-bh",
    "scenario",
    "extreme-bf",
    "gamma-dependence",
    "pooling",
];

/// Returns the config path named by `--config PATH` or `--config=PATH`.
fn config_path(args: &[String]) -> Result<Option<String>, CliError> {
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            return match args.get(i + 1) {
                Some(p) => Ok(Some(p.clone())),
                None => Err(CliError::usage("--config needs a file path")),
            };
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
    }
    Ok(None)
}

fn render_value(key: &str, v: &Value) -> Result<Option<String>, CliError> {
    Ok(match v {
        Value::Null | Value::Bool(false) => None,
        Value::Bool(true) => Some(format!("--{key}")),
        Value::Number(n) => Some(format!("--{key}={n}")),
        Value::String(s) => Some(format!("--{key}={s}")),
        Value::Array(items) => {
            let parts = items
                .iter()
                .map(|i| match i {
                    Value::Number(n) => Ok(n.to_string()),
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(CliError::usage(format!("config entry `{key}` must be a list of numbers"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(format!("--{key}={}", parts.join(",")))
        }
        Value::Object(_) => return Err(CliError::usage(format!("config entry `{key}` is a nested object"))),
    })
}

fn already_given(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Appends config-file defaults to `argv`.
pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let args: Vec<String> = argv
        .iter()
        .map(|a| a.to_str().map(str::to_owned))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::usage("arguments must be valid UTF-8"))?;
    let Some(path) = config_path(&args)? else {
        return Ok(argv);
    };
    let root = load(Path::new(&path))?;

    let commands: Vec<&str> =
        args.iter().skip(1).filter(|a| SUBCOMMANDS.contains(&a.as_str())).map(String::as_str).collect();

    let mut extra = Vec::new();
    let mut push_entries = |entries: &Map<String, Value>| -> Result<(), CliError> {
        for (key, value) in entries {
            if key == "config" || value.is_object() || already_given(&args, key) {
                continue;
            }
            if let Some(flag) = render_value(key, value)? {
                extra.push(flag);
            }
        }
        Ok(())
    };
    push_entries(&root)?;
    for cmd in commands {
        if let Some(Value::Object(section)) = root.get(cmd) {
            push_entries(section)?;
        }
    }
    let mut out = argv;
    out.extend(extra.into_iter().map(OsString::from));
    Ok(out)
}

fn load(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::usage("config file must hold a JSON object")),
        Err(e) => Err(CliError::usage(format!("config {}: {e}", path.display()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn argv(s: &[&str]) -> Vec<OsString> {
        s.iter().map(OsString::from).collect()
    }

    #[test]
    fn flags_override_file() {
        let mut f = tempfile();
        writeln!(f.1, r#"{{"format": "json", "simulate": {{"k": 1000, "seed": 5}}, "table": {{"ratios": [0.5]}}}}"#)
            .unwrap();
        let merged = merge(argv(&["fpbound", "--config", &f.0, "simulate", "--seed", "9"])).unwrap();
        let merged: Vec<String> = merged.into_iter().map(|s| s.into_string().unwrap()).collect();
        assert!(merged.contains(&"--format=json".to_string()));
        assert!(merged.contains(&"--k=1000".to_string()));
        assert!(!merged.iter().any(|a| a == "--seed=5"));
        assert!(!merged.iter().any(|a| a.starts_with("--ratios")));
    }

    #[test]
    fn no_config_is_identity() {
        let a = argv(&["fpbound", "bound", "--alpha", "0.05"]);
        assert_eq!(merge(a.clone()).unwrap(), a);
    }

    #[test]
    fn bad_files() {
        assert!(merge(argv(&["fpbound", "--config", "/nonexistent/cfg.json", "bound"])).is_err());
        let mut f = tempfile();
        writeln!(f.1, "[1, 2]").unwrap();
        assert!(merge(argv(&["fpbound", "--config", &f.0, "bound"])).is_err());
        assert!(merge(argv(&["fpbound", "bound", "--config"])).is_err());
    }

    fn tempfile() -> (String, std::fs::File) {
        use std::sync::atomic::{AtomicUsize, Ordering};
        static N: AtomicUsize = AtomicUsize::new(0);
        let path = std::env::temp_dir().join(format!(
            "fpbound-config-{}-{}.json",
            std::process::id(),
            N.fetch_add(1, Ordering::Relaxed)
        ));
        let f = std::fs::File::create(&path).unwrap();
        (path.to_string_lossy().into_owned(), f)
    }
}
