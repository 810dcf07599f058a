use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::Fail;

/// An output file opened before the work starts, so that an unwritable path
/// fails fast.
pub struct Sink {
    path: PathBuf,
    file: File,
}

impl Sink {
    pub fn create(path: impl AsRef<Path>) -> Result<Self, Fail> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
        Ok(Self { path, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn write(mut self, bytes: &[u8]) -> Result<(), Fail> {
        self.file.write_all(bytes).map_err(|e| Fail::Io(format!("{}: {e}", self.path.display())))
    }
}

/// `# key = value` lines naming the tool version, the command and its settings.
pub fn preamble(command: &str, config: &BTreeMap<String, String>) -> String {
    let mut out = format!("# lorentz-lab {}\n# command = {command}\n", lorentz_lab::VERSION);
    for (k, v) in config {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out
}

/// Comma-separated file with the preamble as comment lines.
pub fn write_csv(
    sink: Sink,
    command: &str,
    config: &BTreeMap<String, String>,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), Fail> {
    let mut buf = preamble(command, config).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let err = |e: csv::Error| Fail::Other(format!("CSV encoding: {e}"));
        w.write_record(header).map_err(err)?;
        for row in rows {
            w.write_record(row).map_err(err)?;
        }
        w.flush().map_err(|e| Fail::Other(format!("CSV encoding: {e}")))?;
    }
    sink.write(&buf)
}

/// JSON document `{version, command, config, ...body}`.
pub fn write_json(
    sink: Sink,
    command: &str,
    config: &BTreeMap<String, String>,
    body: serde_json::Map<String, Value>,
) -> Result<(), Fail> {
    let mut doc = serde_json::Map::new();
    doc.insert("version".into(), json!(lorentz_lab::VERSION));
    doc.insert("command".into(), json!(command));
    doc.insert("config".into(), json!(config));
    doc.extend(body);
    let text = lorentz_lab::report::to_json_string(&Value::Object(doc)).map_err(|e| Fail::Other(e.to_string()))?;
    sink.write(text.as_bytes())
}

/// `STEM.ext`, keeping any directory part of the stem.
pub fn with_ext(stem: &str, ext: &str) -> PathBuf {
    let p = Path::new(stem);
    match p.extension() {
        Some(e) if e == "csv" || e == "json" => p.with_extension(ext),
        _ => PathBuf::from(format!("{stem}.{ext}")),
    }
}
