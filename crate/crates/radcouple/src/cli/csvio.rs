//! CSV output with fixed formatting and partial-flush discipline.

use std::io::Write;
use std::path::{Path, PathBuf};

/// Fixed 12-significant-digit formatting for every numeric CSV field, so
/// reruns with the same config and seed are byte-identical.
pub fn fmt_g12(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.11e}")
    }
}

/// A CSV table: comment line with run metadata, one header row, data rows.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub name: String,
    pub header: String,
    pub rows: Vec<String>,
    pub meta: String,
}

impl CsvTable {
    pub fn new(name: &str, header: &str, meta: &str) -> Self {
        CsvTable {
            name: name.to_string(),
            header: header.to_string(),
            rows: Vec::new(),
            meta: meta.to_string(),
        }
    }

    pub fn push_row(&mut self, fields: &[String]) {
        self.rows.push(fields.join(","));
    }

    fn write_to(&self, path: &Path) -> std::io::Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(f, "# radcouple {} generated_unix={now}", self.meta)?;
        writeln!(f, "{}", self.header)?;
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        f.flush()
    }

    /// Final output path for this table.
    pub fn path(&self, dir: &Path, prefix: &str) -> PathBuf {
        dir.join(format!("{prefix}_{}.csv", self.name))
    }

    pub fn write(&self, dir: &Path, prefix: &str) -> std::io::Result<PathBuf> {
        let path = self.path(dir, prefix);
        self.write_to(&path)?;
        Ok(path)
    }

    /// Flush whatever rows exist under a `.partial` suffix; used when a
    /// command aborts after producing some output.
    pub fn write_partial(&self, dir: &Path, prefix: &str) -> std::io::Result<PathBuf> {
        let path = dir.join(format!("{prefix}_{}.csv.partial", self.name));
        self.write_to(&path)?;
        Ok(path)
    }
}
