//! Output files: CSV with a provenance header, optional SVG figures.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::svg::Plot;

pub const SCHEMA_VERSION: u32 = 1;

pub struct Output {
    dir: PathBuf,
    command: &'static str,
    hash: String,
    seed: u64,
    svg: bool,
}

/// Shortest round-trip decimal; `inf`/`-inf` for infinities.
pub fn num(x: f64) -> String {
    format!("{x}")
}

impl Output {
    pub fn new(dir: &Path, command: &'static str, cfg: &Config, svg: bool) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command,
            hash: cfg.hash.clone(),
            seed: cfg.seed,
            svg,
        })
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        println!("wrote {}", path.display());
        Ok(path)
    }

    /// `name` with the comment header, `notes` as extra `# key=value` lines, then the table.
    pub fn csv(
        &self,
        name: &str,
        notes: &[String],
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> Result<PathBuf> {
        let mut out = format!(
            "# zrp {} schema={SCHEMA_VERSION}\n# config_sha256={}\n# seed={}\n",
            self.command, self.hash, self.seed
        );
        for n in notes {
            out.push_str(&format!("# {n}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io {
            path: self.dir.join(name),
            source: e.into(),
        };
        w.write_record(columns).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io {
            path: self.dir.join(name),
            source: e.into_error(),
        })?;
        out.push_str(&String::from_utf8_lossy(&body));
        self.write(name, out.as_bytes())
    }

    pub fn figure(&self, name: &str, plot: &Plot) -> Result<()> {
        if self.svg {
            self.write(name, plot.render().as_bytes())?;
        }
        Ok(())
    }
}
