//! `key = value` config files merged under command-line flags.

use std::collections::HashSet;
use std::fs;

use clap::{ArgAction, Command};

use super::CliError;

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected `key = value`", n + 1))
        })?;
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
        }
        out.push((key, value));
    }
    Ok(out)
}

/// Finds the value of `--config` in raw arguments.
fn config_path(args: &[String]) -> Result<Option<String>, CliError> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it
                .next()
                .cloned()
                .map(Some)
                .ok_or_else(|| CliError::Usage("--config requires a file".into()));
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Ok(Some(v.to_string()));
        }
    }
    Ok(None)
}

/// Subcommand path (`["bound", "eval"]`) and the index where flags begin.
fn subcommand_path(root: &Command, args: &[String]) -> (Vec<String>, usize) {
    let mut cmd = root;
    let mut path = Vec::new();
    let mut i = 1;
    while let Some(a) = args.get(i) {
        match cmd.find_subcommand(a) {
            Some(sub) => {
                path.push(a.clone());
                cmd = sub;
                i += 1;
            }
            None => break,
        }
    }
    (path, i)
}

fn leaf<'a>(root: &'a Command, path: &[String]) -> &'a Command {
    path.iter()
        .fold(root, |c, p| c.find_subcommand(p).expect("path comes from the command tree"))
}

/// Long names of flags given explicitly on the command line.
fn explicit_flags(cmd: &Command, args: &[String]) -> HashSet<String> {
    let mut seen = HashSet::new();
    for a in args {
        if let Some(rest) = a.strip_prefix("--") {
            seen.insert(rest.split('=').next().unwrap_or(rest).to_string());
        } else if let Some(rest) = a.strip_prefix('-') {
            let mut chars = rest.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if let Some(long) = cmd
                    .get_arguments()
                    .find(|arg| arg.get_short() == Some(c))
                    .and_then(|arg| arg.get_long())
                {
                    seen.insert(long.to_string());
                }
            }
        }
    }
    seen
}

/// Returns `args` with config-file entries spliced in after the
/// subcommand, skipping keys the user already passed as flags.
pub fn merge_config(root: &Command, args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config `{path}`: {e}")))?;
    let entries = parse_config(&text)?;
    let (sub, flags_at) = subcommand_path(root, &args);
    let cmd = leaf(root, &sub);
    let explicit = explicit_flags(cmd, &args[flags_at..]);
    let mut injected = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            return Err(CliError::Usage("config files cannot nest `config`".into()));
        }
        let arg = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| CliError::Usage(format!("unknown config key `{key}`")))?;
        if explicit.contains(&key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue | ArgAction::SetFalse => match value.as_str() {
                "true" | "1" | "yes" => injected.push(format!("--{key}")),
                "false" | "0" | "no" => {}
                other => {
                    return Err(CliError::Usage(format!(
                        "config key `{key}` expects true/false, got `{other}`"
                    )))
                }
            },
            _ => injected.push(format!("--{key}={value}")),
        }
    }
    let mut merged = args[..flags_at].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&args[flags_at..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let cfg = parse_config("# c\npower = 2\n\nsigma2=1 # trailing\nunits = \"nats\"\n").unwrap();
        assert_eq!(
            cfg,
            vec![
                ("power".to_string(), "2".to_string()),
                ("sigma2".to_string(), "1".to_string()),
                ("units".to_string(), "nats".to_string())
            ]
        );
        assert!(parse_config("no equals sign").is_err());
    }
}
