use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};
use ini::Ini;

use crate::Fail;

/// Keys that do not change the results and are left out of the echo, so that
/// runs differing only in these produce identical files.
const NOT_ECHOED: [&str; 3] = ["threads", "out", "config"];

/// Effective configuration: config file values overridden by flags.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Merges the `[general]` part and the `[command]` section of the file with
    /// the flags given on the command line. Unknown file keys are rejected.
    pub fn resolve(cmd: &Command, m: &ArgMatches, file: Option<&Path>) -> Result<Self, Fail> {
        let known: Vec<&str> = cmd.get_arguments().map(|a| a.get_id().as_str()).filter(|id| *id != "config").collect();
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let ini = Ini::load_from_file(path).map_err(|e| Fail::Usage(format!("config file {}: {e}", path.display())))?;
            let name = cmd.get_name();
            for (section, props) in ini.iter() {
                if section.is_some_and(|s| s != name) {
                    continue;
                }
                for (k, v) in props.iter() {
                    if !known.contains(&k) {
                        return Err(Fail::Usage(format!("config file {}: unknown key `{k}` for `{name}`", path.display())));
                    }
                    values.insert(k.to_string(), v.trim().to_string());
                }
            }
        }
        for id in &known {
            if m.value_source(id) == Some(ValueSource::CommandLine) {
                let raw: Vec<String> = m
                    .get_raw(id)
                    .into_iter()
                    .flatten()
                    .map(|v| v.to_string_lossy().into_owned())
                    .collect();
                values.insert(id.to_string(), raw.join(","));
            }
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Fail> {
        self.raw(key)
            .map(|s| s.parse::<T>().map_err(|_| Fail::Usage(format!("--{key}: cannot parse `{s}`"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, Fail> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, Fail> {
        self.get(key)?.ok_or_else(|| Fail::Usage(format!("--{key} is required")))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, Fail> {
        self.raw(key)
            .map(|s| {
                s.split(',')
                    .map(|v| v.trim().parse::<T>().map_err(|_| Fail::Usage(format!("--{key}: cannot parse `{v}`"))))
                    .collect()
            })
            .transpose()
    }

    /// One value for both axes, or two comma-separated values.
    pub fn pair(&self, key: &str) -> Result<Option<[f64; 2]>, Fail> {
        match self.list::<f64>(key)?.as_deref() {
            None => Ok(None),
            Some([a]) => Ok(Some([*a, *a])),
            Some([a, b]) => Ok(Some([*a, *b])),
            Some(_) => Err(Fail::Usage(format!("--{key} takes one or two values"))),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, Fail> {
        self.get_or(key, false)
    }

    /// Settings that determine the results, in key order.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.values.iter().filter(|(k, _)| !NOT_ECHOED.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}
