//! Optional `key=value` configuration files. Each entry becomes the flag
//! `--key value`, placed before the user's own flags so that explicit
//! flags take precedence.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError(pub String);

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim();
        if k.is_empty() || k == "config" {
            return Err(ConfigError(format!("config line {}: invalid key '{k}'", i + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Locates `--config PATH` / `--config=PATH` after the subcommand.
fn config_path(args: &[OsString]) -> Option<(usize, usize, OsString)> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return args.get(i + 1).map(|p| (i, 2, p.clone()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some((i, 1, OsString::from(p)));
        }
    }
    None
}

/// Rewrites `argv` so the entries of a `--config` file appear as flags
/// right after the subcommand name.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let Some((pos, len, path)) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path))
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let entries = parse_config(&text)?;
    let mut rest = args;
    rest.drain(pos..pos + len);
    // program name, subcommand (and suite name for validate) come first
    let insert_at = rest.iter().skip(1).position(|a| a.to_string_lossy().starts_with('-')).map_or(rest.len(), |p| p + 1);
    let mut flags = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => flags.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => {
                flags.push(OsString::from(format!("--{k}")));
                flags.push(OsString::from(v));
            }
        }
    }
    rest.splice(insert_at..insert_at, flags);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_entries() {
        let e = parse_config("# comment\nalpha = 1.5\n\nbeta=0.5\nforce-walk=true\n").unwrap();
        assert_eq!(e[0], ("alpha".to_string(), "1.5".to_string()));
        assert_eq!(e.len(), 3);
        assert!(parse_config("nonsense").is_err());
    }

    #[test]
    fn config_flags_precede_user_flags() {
        let dir = std::env::temp_dir().join(format!("greywalk-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("run.conf");
        std::fs::write(&p, "alpha=0.5\nforce-walk=true\nquiet=false\n").unwrap();
        let args = os(&["greywalk", "ggbm", "--config", p.to_str().unwrap(), "--alpha", "1.5"]);
        let out = expand_config(args).unwrap();
        assert_eq!(out, os(&["greywalk", "ggbm", "--alpha", "0.5", "--force-walk", "--alpha", "1.5"]));
        let args = os(&["greywalk", "validate", "figure2", &format!("--config={}", p.display())]);
        let out = expand_config(args).unwrap();
        assert_eq!(out, os(&["greywalk", "validate", "figure2", "--alpha", "0.5", "--force-walk"]));
    }

    #[test]
    fn untouched_without_config() {
        let args = os(&["greywalk", "coeffs", "--beta", "0.5"]);
        assert_eq!(expand_config(args.clone()).unwrap(), args);
    }
}
