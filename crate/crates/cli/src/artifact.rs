//! Output artifacts. Each one embeds the manifest that produced it: JSON
//! reports under a `manifest` key, CSV tables as a `# manifest: {…}` first
//! line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

const CSV_MANIFEST_PREFIX: &str = "# manifest: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum CommandKind {
    Simulate,
    CheckConditions,
    CheckHypothesis,
    Counterexample,
    BoundScan,
    SupStat,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Simulate => "simulate",
            CommandKind::CheckConditions => "check-conditions",
            CommandKind::CheckHypothesis => "check-hypothesis",
            CommandKind::Counterexample => "counterexample",
            CommandKind::BoundScan => "bound-scan",
            CommandKind::SupStat => "sup-stat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to reproduce a run; the output directory is not part
/// of it, so artifacts written to different places stay identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: CommandKind,
    pub seed: u64,
    pub format: Format,
    pub config: Value,
}

/// A plot-ready table; cells are preformatted.
pub struct Table {
    /// Appended to the command name in the file name; empty for the main table.
    pub suffix: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(suffix: &'static str, header: Vec<&'static str>) -> Self {
        Self { suffix, header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub struct Outcome {
    pub result: Value,
    pub tables: Vec<Table>,
}

fn file_stem(m: &Manifest, suffix: &str) -> String {
    if suffix.is_empty() {
        m.command.name().to_string()
    } else {
        format!("{}_{suffix}", m.command.name())
    }
}

fn write_json(path: &Path, value: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)
}

/// Writes the report (and, for CSV output, one file per table); returns
/// the paths written.
pub fn write_outcome(dir: &Path, m: &Manifest, outcome: &Outcome) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let report = serde_json::json!({ "manifest": m, "result": outcome.result });
    let json_path = dir.join(format!("{}.json", m.command.name()));
    write_json(&json_path, &report)?;
    let mut written = vec![json_path];
    if m.format == Format::Csv {
        let manifest_line = serde_json::to_string(m)?;
        for t in &outcome.tables {
            let path = dir.join(format!("{}.csv", file_stem(m, t.suffix)));
            let mut file = fs::File::create(&path)?;
            writeln!(file, "{CSV_MANIFEST_PREFIX}{manifest_line}")?;
            let mut w = csv::Writer::from_writer(file);
            w.write_record(&t.header)?;
            for row in &t.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Report for a numeric refusal: the manifest plus the reason.
pub fn write_refusal(dir: &Path, m: &Manifest, kind: &str, reason: &str) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let report = serde_json::json!({
        "manifest": m,
        "refusal": { "kind": kind, "reason": reason },
    });
    let path = dir.join(format!("{}.refusal.json", m.command.name()));
    write_json(&path, &report)?;
    Ok(path)
}

/// Recovers the manifest embedded in a JSON report or CSV table.
pub fn read_manifest(path: &Path) -> Result<Manifest, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = if let Some(rest) = text.strip_prefix(CSV_MANIFEST_PREFIX) {
        let line = rest.lines().next().unwrap_or_default();
        serde_json::from_str::<Manifest>(line)
    } else {
        serde_json::from_str::<Value>(&text).and_then(|v| {
            let m = v.get("manifest").cloned().unwrap_or(Value::Null);
            serde_json::from_value::<Manifest>(m)
        })
    };
    parsed.map_err(|e| format!("{}: no usable manifest: {e}", path.display()))
}
