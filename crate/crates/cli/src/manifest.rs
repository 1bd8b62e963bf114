//! Flat `key=value` record of a run's resolved parameters, written next to its
//! output. Options are stored as `arg.<long>=<value>` and switches as
//! `flag.<long>=true`, so a manifest maps back onto an argument vector.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgMatches, Command};

use crate::{CliError, CliResult, Context};

const HEADER: &str = "# subseg run manifest";

pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    /// Every argument of `sub` as resolved by the parser, defaults included.
    pub fn from_matches(cmd: &mut Command, sub: &str, m: &ArgMatches) -> Manifest {
        cmd.build();
        let mut entries = vec![
            ("tool".to_string(), format!("subseg {}", env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), sub.to_string()),
        ];
        let Some(sc) = cmd.find_subcommand(sub) else {
            return Manifest { entries };
        };
        let mut args: Vec<_> = sc.get_arguments().filter_map(|a| a.get_long().map(|l| (l, a))).collect();
        args.sort_by_key(|(l, _)| *l);
        for (long, arg) in args {
            let id = arg.get_id().as_str();
            if matches!(long, "help" | "version") {
                continue;
            }
            if arg.get_action().takes_values() {
                if let Some(vals) = m.get_raw(id) {
                    let joined = vals
                        .map(|v| v.to_string_lossy().into_owned())
                        .collect::<Vec<_>>()
                        .join(",");
                    entries.push((format!("arg.{long}"), joined));
                }
            } else if m.try_get_one::<bool>(id).ok().flatten() == Some(&true) {
                entries.push((format!("flag.{long}"), "true".to_string()));
            }
        }
        Manifest { entries }
    }

    pub fn render(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.render()).ctx(path.display())
    }
}

/// `<output>.manifest` unless an explicit path was given.
pub fn default_path(explicit: Option<&Path>, output: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        output.map(|o| {
            let mut s = o.as_os_str().to_owned();
            s.push(".manifest");
            PathBuf::from(s)
        })
    })
}

/// Rebuilds the argument vector recorded in a manifest.
pub fn argv_from(text: &str) -> CliResult<Vec<OsString>> {
    let mut command = None;
    let mut rest = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::Usage(format!("manifest line {}: malformed entry {line:?}", i + 1));
        let (k, v) = line.split_once('=').ok_or_else(bad)?;
        if k == "command" {
            command = Some(v.to_string());
        } else if let Some(long) = k.strip_prefix("arg.") {
            rest.push(OsString::from(format!("--{long}")));
            rest.push(OsString::from(v));
        } else if let Some(long) = k.strip_prefix("flag.") {
            if v == "true" {
                rest.push(OsString::from(format!("--{long}")));
            }
        } else if k != "tool" {
            return Err(bad());
        }
    }
    let command = command.ok_or_else(|| CliError::Usage("manifest has no command entry".into()))?;
    if command == "replay" {
        return Err(CliError::Usage("cannot replay a replay manifest".into()));
    }
    let mut argv = vec![OsString::from("subseg"), OsString::from(command)];
    argv.extend(rest);
    Ok(argv)
}
