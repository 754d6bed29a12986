use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{RunRecord, SCHEMA_VERSION};

/// Append-only JSON-lines results file. Each record is written as one
/// complete line and flushed before `append` returns.
#[derive(Debug)]
pub struct ResultsSink {
    path: PathBuf,
    file: File,
}

impl ResultsSink {
    /// Opens `path` for appending, creating it and its parent directories.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self { path, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, record: &RunRecord) -> io::Result<()> {
        let mut line = serde_json::to_string(record).map_err(io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedLine {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadedResults {
    pub records: Vec<RunRecord>,
    pub skipped: Vec<SkippedLine>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read results: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: schema version {found}, this build reads version {SCHEMA_VERSION}")]
    VersionMismatch { line: usize, found: u64 },
}

/// Reads a results file. Blank lines are ignored and lines that do not
/// parse are reported in `skipped`; a record carrying another schema
/// version is an error.
pub fn load_results(path: impl AsRef<Path>) -> Result<LoadedResults, LoadError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = LoadedResults::default();
    for (k, line) in reader.split(b'\n').enumerate() {
        let line_no = k + 1;
        let bytes = line?;
        let Ok(text) = std::str::from_utf8(&bytes) else {
            out.skipped.push(SkippedLine {
                line: line_no,
                reason: "not valid UTF-8".into(),
            });
            continue;
        };
        if text.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                out.skipped.push(SkippedLine {
                    line: line_no,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(found) => {
                return Err(LoadError::VersionMismatch {
                    line: line_no,
                    found,
                })
            }
            None => {
                out.skipped.push(SkippedLine {
                    line: line_no,
                    reason: "missing schema_version".into(),
                });
                continue;
            }
        }
        match serde_json::from_value::<RunRecord>(value) {
            Ok(r) => out.records.push(r),
            Err(e) => out.skipped.push(SkippedLine {
                line: line_no,
                reason: e.to_string(),
            }),
        }
    }
    Ok(out)
}
