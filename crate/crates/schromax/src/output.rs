//! CSV tables, checksummed run manifests and gnuplot data emission.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};

/// A table of preformatted cells with a header row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    /// Writes `<dir>/<name>.csv` with LF line endings.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_path(path)?;
        let header = r.headers()?.iter().map(str::to_string).collect();
        let rows = r.records().map(|rec| Ok(rec?.iter().map(str::to_string).collect())).collect::<Result<Vec<_>>>()?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table").to_string();
        Ok(Table { name, header, rows })
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config_hash: String,
    pub version: String,
    /// File name to sha256 of its contents, excluding the manifest itself.
    pub files: BTreeMap<String, String>,
    pub seconds: f64,
    pub pass: bool,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(path)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axes {
    Linear,
    LogLog,
    /// Data written as natural logs, plotted on linear axes.
    LogValues,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub x: String,
    pub series: Vec<String>,
    pub axes: Axes,
    /// `y = slope·x + intercept` drawn over the data.
    pub overlay: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotFiles {
    pub data: PathBuf,
    pub script: PathBuf,
}

/// Projects `table` onto `spec.x` and `spec.series` as whitespace-separated data
/// plus a gnuplot script that reads only that file.
pub fn emit_plot_data(table: &Table, spec: &PlotSpec, dir: &Path) -> Result<PlotFiles> {
    if spec.series.is_empty() {
        return Err(invalid("empty plot selection"));
    }
    let xi = table.column(&spec.x)?;
    let yi = spec.series.iter().map(|s| table.column(s)).collect::<Result<Vec<_>>>()?;
    let transform = |cell: &str| -> Result<String> {
        let v: f64 = cell.parse().map_err(|_| invalid(format!("non-numeric cell {cell:?}")))?;
        Ok(match spec.axes {
            Axes::LogValues => num(v.ln()),
            _ => num(v),
        })
    };
    let mut data = format!("# {} {}\n", spec.x, spec.series.join(" "));
    for row in &table.rows {
        let mut line = vec![transform(&row[xi])?];
        for &i in &yi {
            line.push(transform(&row[i])?);
        }
        data.push_str(&line.join(" "));
        data.push('\n');
    }
    let stem = format!("{}_plot", table.name);
    let data_path = dir.join(format!("{stem}.dat"));
    let script_path = dir.join(format!("{stem}.gp"));
    let label = |s: &str| match spec.axes {
        Axes::LogValues => format!("log {s}"),
        _ => s.to_string(),
    };
    let mut script = String::new();
    if spec.axes == Axes::LogLog {
        script.push_str("set logscale xy\n");
    }
    script.push_str(&format!("set xlabel \"{}\"\nset key left top\n", label(&spec.x)));
    let mut parts: Vec<String> = spec
        .series
        .iter()
        .enumerate()
        .map(|(k, s)| format!("\"{stem}.dat\" using 1:{} with linespoints title \"{}\"", k + 2, label(s)))
        .collect();
    if let Some((slope, intercept)) = spec.overlay {
        script.push_str(&format!("fit_line(x) = {} * x + {}\n", num(slope), num(intercept)));
        parts.push("fit_line(x) with lines title \"fit\"".to_string());
    }
    script.push_str(&format!("plot {}\n", parts.join(", ")));
    fs::write(&data_path, data)?;
    fs::write(&script_path, script)?;
    Ok(PlotFiles { data: data_path, script: script_path })
}
