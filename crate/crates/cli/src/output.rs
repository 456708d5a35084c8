//! Commented-header CSV tables, JSON documents and NDJSON sample dumps.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

/// Bumped whenever a column is added, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

/// `git describe` of the source tree at build time.
pub const GIT_DESCRIBE: &str = env!("DISCONC_GIT_DESCRIBE");

/// Run metadata written ahead of every table.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: u32,
    pub git: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub parameters: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &'static str, seed: Option<u64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
            git: GIT_DESCRIBE,
            command,
            seed,
            parameters: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    fn write_comments(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "# {} {}", self.tool, self.version)?;
        writeln!(w, "# schema: {}", self.schema)?;
        writeln!(w, "# git: {}", self.git)?;
        writeln!(w, "# command: {}", self.command)?;
        match self.seed {
            Some(s) => writeln!(w, "# seed: {s}")?,
            None => writeln!(w, "# seed: none")?,
        }
        for (k, v) in &self.parameters {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

/// Writes `rows` as CSV preceded by `#`-comment metadata.
pub fn write_csv<R: Serialize>(w: impl Write, header: &Header, rows: &[R]) -> anyhow::Result<()> {
    let mut w = BufWriter::new(w);
    header.write_comments(&mut w)?;
    let mut csv = csv::Writer::from_writer(w);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Document<'a, R> {
    header: &'a Header,
    rows: &'a [R],
}

/// Writes `{"header": …, "rows": […]}`.
pub fn write_json<R: Serialize>(path: &Path, header: &Header, rows: &[R]) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &Document { header, rows })?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Writes one JSON object per line.
pub fn write_ndjson<R: Serialize>(path: &Path, records: &[R]) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Where a table goes: an explicit path, `<dir>/<command>.csv`, or stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    File(PathBuf),
    Stdout,
}

impl Destination {
    pub fn resolve(explicit: Option<PathBuf>, dir: Option<PathBuf>, command: &str) -> Self {
        match (explicit, dir) {
            (Some(p), _) => Self::File(p),
            (None, Some(d)) => Self::File(d.join(format!("{command}.csv"))),
            (None, None) => Self::Stdout,
        }
    }

    pub fn write_csv<R: Serialize>(&self, header: &Header, rows: &[R]) -> anyhow::Result<()> {
        match self {
            Self::File(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
                let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
                write_csv(f, header, rows)
            }
            Self::Stdout => write_csv(io::stdout().lock(), header, rows),
        }
    }
}
