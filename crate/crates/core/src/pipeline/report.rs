use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};

/// Provenance embedded in every report file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub design_flags: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct JsonReport<'a, T> {
    meta: &'a Meta,
    data: &'a T,
}

/// Writes report files into one directory and collects warnings.
#[derive(Debug)]
pub struct Reporter {
    dir: PathBuf,
    meta: Meta,
    files: Vec<PathBuf>,
    warnings: Vec<String>,
}

impl Reporter {
    pub fn new(dir: &Path, meta: Meta) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Reporter {
            dir: dir.to_path_buf(),
            meta,
            files: Vec::new(),
            warnings: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    pub fn flag(&mut self, key: &str, value: impl ToString) {
        self.meta.design_flags.insert(key.to_string(), value.to_string());
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        warn!("{msg}");
        self.warnings.push(msg);
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let f = File::create(&path).map_err(|e| Error::io(&path, e))?;
        self.files.push(path);
        Ok(BufWriter::new(f))
    }

    /// CSV with `#` comment lines carrying the metadata, then a header row.
    pub fn csv<S: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = S>) -> Result<()> {
        let mut out = self.create(name)?;
        let flags: Vec<String> = self.meta.design_flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# {} {} {}", self.meta.tool, self.meta.version, self.meta.command)?;
        writeln!(out, "# config_sha256: {}", self.meta.config_sha256)?;
        writeln!(out, "# seed: {}", self.meta.seed)?;
        writeln!(out, "# design_flags: {}", flags.join("; "))?;
        let mut w = csv::Writer::from_writer(out);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn json<S: Serialize>(&mut self, name: &str, data: &S) -> Result<()> {
        let meta = self.meta.clone();
        let mut out = self.create(name)?;
        serde_json::to_writer_pretty(&mut out, &JsonReport { meta: &meta, data })?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    /// Raw file under the report directory, for non-tabular artifacts.
    pub fn raw(&mut self, name: &str) -> Result<BufWriter<File>> {
        self.create(name)
    }

    /// Writes the run summary and returns what was produced.
    pub fn finish(mut self) -> Result<RunOutcome> {
        #[derive(Serialize)]
        struct Summary<'a> {
            files: Vec<String>,
            warnings: &'a [String],
        }
        let files = self
            .files
            .iter()
            .filter_map(|p| p.strip_prefix(&self.dir).ok())
            .map(|p| p.display().to_string())
            .collect();
        let warnings = self.warnings.clone();
        self.json("run.json", &Summary { files, warnings: &warnings })?;
        Ok(RunOutcome {
            dir: self.dir,
            files: self.files,
            warnings: self.warnings,
        })
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl RunOutcome {
    pub fn is_partial(&self) -> bool {
        !self.warnings.is_empty()
    }
}

/// Keeps report file names portable whatever a community is called.
pub fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}
