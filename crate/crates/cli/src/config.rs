//! Flat key-value configuration files.
//!
//! ```text
//! # comment            ; also a comment
//! seed = 7             # before any section: applies to every subcommand
//! [simulate-security]
//! attack-sweep = 1:15:1
//! ```
//!
//! Keys are long flag names; a section value overrides a global one. The selected
//! entries are turned back into flags so the file is validated by the same parser.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const SECTIONS: &[&str] = &[
    "bounds",
    "simulate-correctness",
    "simulate-security",
    "sweep",
    "compare",
    "oracle",
];

#[derive(Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub global: BTreeMap<String, String>,
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ConfigFile::default();
        let mut section: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            if let Some(name) = line.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    bail!("line {lineno}: unterminated section header `{line}`");
                };
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    bail!(
                        "line {lineno}: unknown section `{name}` (expected one of {})",
                        SECTIONS.join(", ")
                    );
                }
                cfg.sections.entry(name.to_string()).or_default();
                section = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {lineno}: expected `key = value`, got `{line}`");
            };
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if key.is_empty() {
                bail!("line {lineno}: empty key");
            }
            let value = unquote(value.trim()).to_string();
            let table = match &section {
                Some(s) => cfg.sections.get_mut(s).expect("section registered"),
                None => &mut cfg.global,
            };
            if table.insert(key.clone(), value).is_some() {
                bail!("line {lineno}: duplicate key `{key}`");
            }
        }
        Ok(cfg)
    }

    /// Entries for `command` as flag arguments, section values overriding globals.
    pub fn args_for(&self, command: &str) -> Vec<String> {
        let mut merged = self.global.clone();
        if let Some(s) = self.sections.get(command) {
            merged.extend(s.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        merged.into_iter().flat_map(|(k, v)| [format!("--{k}"), v]).collect()
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' | ';' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}
