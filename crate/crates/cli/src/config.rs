//! `--config` files: flat `key = value` lines turned into flags placed right
//! after the subcommand, so that explicit flags (which come later) win.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`", i + 1));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k == "config" {
            return Err(format!("line {}: invalid key '{k}'", i + 1));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn as_flags(pairs: &[(String, String)]) -> Vec<OsString> {
    let mut flags = Vec::new();
    for (k, v) in pairs {
        match v.as_str() {
            "true" => flags.push(format!("--{k}").into()),
            "false" => {}
            _ => flags.push(format!("--{k}={v}").into()),
        }
    }
    flags
}

fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if s == "--config" {
            i += 2;
        } else if s.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

/// Argument vector with the config file's flags spliced in after the subcommand.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let flags = as_flags(&parse(&text)?);
    let Some(sub) = subcommand_index(&args) else {
        return Ok(args);
    };
    let at = sub + 1;
    let mut out = args[..at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let pairs = parse("# header\nmu = 3\n\nkappa = 0.01,0.1  # list\nexact-only = true\n").unwrap();
        assert_eq!(pairs.len(), 3);
        assert_eq!(pairs[1], ("kappa".into(), "0.01,0.1".into()));
        assert!(parse("mu 3").is_err());
    }

    #[test]
    fn flags_land_after_the_subcommand() {
        let args: Vec<OsString> = ["stickslip", "--config", "x.cfg", "escape", "--z0", "-1"]
            .iter()
            .map(OsString::from)
            .collect();
        assert_eq!(config_path(&args), Some("x.cfg".into()));
        assert_eq!(subcommand_index(&args), Some(3));
        let flags = as_flags(&[("mu".into(), "2".into()), ("asym-only".into(), "false".into())]);
        assert_eq!(flags, vec![OsString::from("--mu=2")]);
    }
}
