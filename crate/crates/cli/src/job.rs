//! JSON job files: `{"command": "inverse", "measure": {...}, "T": "pi", "N": 10}`.
//!
//! Every key other than `command` is the long name of a flag of that
//! subcommand (underscores may stand for hyphens); `name` is the positional
//! argument of `closed-form`. Arrays repeat the flag, objects are passed as
//! JSON text, `true` sets a switch.

use std::path::Path;

use clap::Parser;
use serde_json::Value;

use crate::args::{Cli, Command};
use crate::commands::CliError;

fn scalar(v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Object(_) => Ok(v.to_string()),
        other => Err(CliError::input(format!("unsupported job value {other}"))),
    }
}

pub fn to_argv(text: &str) -> Result<Vec<String>, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("job is not JSON: {e}")))?;
    let Value::Object(map) = value else {
        return Err(CliError::input("job must be a JSON object"));
    };
    let command = match map.get("command") {
        Some(Value::String(c)) => c.clone(),
        _ => return Err(CliError::input("job needs a \"command\" string")),
    };
    let mut argv = vec!["canon".to_string(), command];
    if let Some(name) = map.get("name") {
        argv.push(scalar(name)?);
    }
    for (key, v) in &map {
        if key == "command" || key == "name" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => argv.push(flag),
            Value::Array(items) => {
                for item in items {
                    argv.push(flag.clone());
                    argv.push(scalar(item)?);
                }
            }
            other => {
                argv.push(flag);
                argv.push(scalar(other)?);
            }
        }
    }
    Ok(argv)
}

pub fn load(path: &Path) -> Result<Command, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read job {}: {e}", path.display())))?;
    let argv = to_argv(&text)?;
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::input(format!("invalid job: {e}")))?;
    cli.command.ok_or_else(|| CliError::input("job has no command"))
}
