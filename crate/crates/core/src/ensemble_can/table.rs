//! Canonical partition functions `Z_{l,n}` and bounded-composition counts.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::ensemble_can::counts::BoundedCounts;
use crate::ensemble_gc::log_weight;
use crate::error::{Result, ZrpError};
use crate::logspace::{log_add, log_sub, LogAccumulator};
use crate::model::RateModel;

/// Default cap on `(L + 1) (N_max + 1)`; two f64 tables of this size are ~800 MB.
pub const DEFAULT_CELL_BUDGET: usize = 50_000_000;

const MAGIC: &[u8; 4] = b"ZRPC";
const FORMAT_VERSION: u32 = 1;

/// `log Z_{l,n}` and `log |X^0_{l,n}|` for `l <= L`, `n <= N_max` at one cutoff.
#[derive(Debug, Clone)]
pub struct CanonicalTable {
    l: usize,
    n_max: usize,
    r: u64,
    model: RateModel,
    log_z: Vec<f64>,
    counts: BoundedCounts,
}

impl CanonicalTable {
    /// Table for the cutoff `model.cutoff(l, n_max)`.
    ///
    /// In particle mode the cutoff depends on the target `N`, so the table is
    /// only meaningful at `n = n_max`; see [`CanonicalTable::for_target`].
    pub fn build(l: usize, n_max: usize, model: &RateModel) -> Result<Self> {
        let r = model.cutoff(l, n_max as u64);
        Self::build_with_cutoff(l, n_max, r, model, DEFAULT_CELL_BUDGET)
    }

    /// Table whose cutoff is the one the model assigns to `(l, n)`.
    pub fn for_target(l: usize, n: u64, model: &RateModel) -> Result<Self> {
        Self::build(l, n as usize, model)
    }

    /// O(L N_max) construction.
    ///
    /// Works with `Y_l(n) = Z_{l,n} c0^n`, which is nondecreasing in `n`. The
    /// first `R + 1` terms of the recursion form a sliding window whose oldest
    /// entry is its smallest, and the tail terms obey `G(n) = q (G(n-1) + Y(n-R-1))`
    /// with `q = c0/c1`.
    pub fn build_with_cutoff(
        l: usize,
        n_max: usize,
        r: u64,
        model: &RateModel,
        cell_budget: usize,
    ) -> Result<Self> {
        check_budget(l, n_max, cell_budget)?;
        let width = n_max + 1;
        let ln_c0 = model.c0().ln();
        let ln_q = model.log_rate_ratio();
        let mut y = vec![f64::NEG_INFINITY; (l + 1) * width];
        y[0] = 0.0;
        let ru = r as usize;
        for row in 1..=l {
            let (done, rest) = y.split_at_mut(row * width);
            let prev = &done[(row - 1) * width..];
            let cur = &mut rest[..width];
            if row == 1 {
                for (n, v) in cur.iter_mut().enumerate() {
                    *v = if n <= ru { 0.0 } else { (n - ru) as f64 * ln_q };
                }
                continue;
            }
            let mut window = f64::NEG_INFINITY;
            let mut tail = f64::NEG_INFINITY;
            for n in 0..width {
                if n > ru {
                    let old = prev[n - ru - 1];
                    window = log_sub(window, old);
                    tail = ln_q + log_add(tail, old);
                }
                window = log_add(window, prev[n]);
                cur[n] = log_add(window, tail);
            }
        }
        let log_z = y
            .iter()
            .enumerate()
            .map(|(i, v)| v - (i % width) as f64 * ln_c0)
            .collect();
        Ok(Self {
            l,
            n_max,
            r,
            model: *model,
            log_z,
            counts: BoundedCounts::build(l, n_max, r),
        })
    }

    /// O(L N_max^2) construction straight from `Z_{l,n} = sum_k w(k) Z_{l-1,n-k}`.
    pub fn build_direct(l: usize, n_max: usize, r: u64, model: &RateModel) -> Result<Self> {
        check_budget(l, n_max, DEFAULT_CELL_BUDGET)?;
        let width = n_max + 1;
        let w: Vec<f64> = (0..width as u64).map(|k| log_weight(k, r, model)).collect();
        let mut z = vec![f64::NEG_INFINITY; (l + 1) * width];
        z[0] = 0.0;
        for row in 1..=l {
            for n in 0..width {
                let mut acc = LogAccumulator::default();
                for k in 0..=n {
                    acc.push(w[k] + z[(row - 1) * width + n - k]);
                }
                z[row * width + n] = acc.value();
            }
        }
        Ok(Self {
            l,
            n_max,
            r,
            model: *model,
            log_z: z,
            counts: BoundedCounts::build(l, n_max, r),
        })
    }

    /// `log Z_{l,n}`.
    #[inline]
    pub fn log_z(&self, l: usize, n: usize) -> f64 {
        assert!(l <= self.l && n <= self.n_max, "({l}, {n}) outside table");
        self.log_z[l * (self.n_max + 1) + n]
    }

    /// `log |X^0_{l,n}|`.
    #[inline]
    pub fn log_count_bounded(&self, l: usize, n: usize) -> f64 {
        self.counts.get(l, n)
    }

    pub fn counts(&self) -> &BoundedCounts {
        &self.counts
    }

    pub fn lattice_size(&self) -> usize {
        self.l
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn cutoff(&self) -> u64 {
        self.r
    }

    pub fn model(&self) -> &RateModel {
        &self.model
    }

    /// Write the table in the versioned binary cache format.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| ZrpError::Cache(format!("{}: {e}", path.display()));
        let mut f = BufWriter::new(File::create(path).map_err(io)?);
        let mut header = Vec::with_capacity(48);
        header.extend_from_slice(MAGIC);
        header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        header.extend_from_slice(&(self.l as u64).to_le_bytes());
        header.extend_from_slice(&(self.n_max as u64).to_le_bytes());
        header.extend_from_slice(&self.r.to_le_bytes());
        header.extend_from_slice(&self.model.c0().to_le_bytes());
        header.extend_from_slice(&self.model.c1().to_le_bytes());
        f.write_all(&header).map_err(io)?;
        for v in self.log_z.iter().chain(self.counts.raw()) {
            f.write_all(&v.to_le_bytes()).map_err(io)?;
        }
        f.flush().map_err(io)
    }

    /// Read a table written by [`CanonicalTable::save`]; the header must match `model`.
    pub fn load(path: &Path, model: &RateModel) -> Result<Self> {
        let io = |e: std::io::Error| ZrpError::Cache(format!("{}: {e}", path.display()));
        let mut f = BufReader::new(File::open(path).map_err(io)?);
        let mut header = [0u8; 48];
        f.read_exact(&mut header).map_err(io)?;
        if &header[0..4] != MAGIC {
            return Err(ZrpError::Cache(format!("{}: bad magic", path.display())));
        }
        let u32_at = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
        let u64_at = |i: usize| u64::from_le_bytes(header[i..i + 8].try_into().unwrap());
        let f64_at = |i: usize| f64::from_le_bytes(header[i..i + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != FORMAT_VERSION {
            return Err(ZrpError::Cache(format!(
                "{}: format version {version}, expected {FORMAT_VERSION}",
                path.display()
            )));
        }
        let (l, n_max, r) = (u64_at(8) as usize, u64_at(16) as usize, u64_at(24));
        let (c0, c1) = (f64_at(32), f64_at(40));
        if c0 != model.c0() || c1 != model.c1() {
            return Err(ZrpError::Cache(format!(
                "{}: rates ({c0}, {c1}) do not match model",
                path.display()
            )));
        }
        let cells = (l + 1) * (n_max + 1);
        let mut buf = vec![0u8; 16 * cells];
        f.read_exact(&mut buf).map_err(io)?;
        let mut vals = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let log_z: Vec<f64> = vals.by_ref().take(cells).collect();
        let counts: Vec<f64> = vals.collect();
        Ok(Self {
            l,
            n_max,
            r,
            model: *model,
            log_z,
            counts: BoundedCounts::from_raw(l, n_max, r, counts),
        })
    }
}

fn check_budget(l: usize, n_max: usize, budget: usize) -> Result<()> {
    if l == 0 {
        return Err(ZrpError::Domain("lattice needs at least one site".into()));
    }
    let cells = (l + 1).checked_mul(n_max + 1);
    match cells {
        Some(c) if c <= budget => Ok(()),
        _ => Err(ZrpError::Resource(format!(
            "table of {} x {} cells exceeds budget of {budget}",
            l + 1,
            n_max + 1
        ))),
    }
}

type TableKey = (usize, usize, u64, u64, u64);

/// Shared tables keyed by `(L, N_max, R, c0, c1)`, optionally backed by a directory.
#[derive(Debug, Default)]
pub struct TableCache {
    dir: Option<PathBuf>,
    budget: Option<usize>,
    tables: Mutex<HashMap<TableKey, Arc<CanonicalTable>>>,
}

impl TableCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, cells: usize) -> Self {
        self.budget = Some(cells);
        self
    }

    fn file_name(key: &TableKey) -> String {
        format!(
            "z_L{}_N{}_R{}_{:016x}_{:016x}.zrpc",
            key.0, key.1, key.2, key.3, key.4
        )
    }

    pub fn get(
        &self,
        l: usize,
        n_max: usize,
        r: u64,
        model: &RateModel,
    ) -> Result<Arc<CanonicalTable>> {
        let key = (l, n_max, r, model.c0().to_bits(), model.c1().to_bits());
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(Arc::clone(t));
        }
        let path = self.dir.as_ref().map(|d| d.join(Self::file_name(&key)));
        let loaded = path
            .as_ref()
            .filter(|p| p.exists())
            .and_then(|p| CanonicalTable::load(p, model).ok());
        let table = match loaded {
            Some(t) => t,
            None => {
                let budget = self.budget.unwrap_or(DEFAULT_CELL_BUDGET);
                let t = CanonicalTable::build_with_cutoff(l, n_max, r, model, budget)?;
                if let Some(p) = &path {
                    std::fs::create_dir_all(p.parent().unwrap())
                        .map_err(|e| ZrpError::Cache(e.to_string()))?;
                    t.save(p)?;
                }
                t
            }
        };
        let table = Arc::new(table);
        self.tables.lock().unwrap().insert(key, Arc::clone(&table));
        Ok(table)
    }

    /// Table for the cutoff the model assigns to `(l, n)`, covering `n`.
    pub fn for_target(&self, l: usize, n: u64, model: &RateModel) -> Result<Arc<CanonicalTable>> {
        self.get(l, n as usize, model.cutoff(l, n), model)
    }
}
