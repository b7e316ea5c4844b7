pub mod entropy;
pub mod lifetimes;
pub mod lln;
pub mod oracle;
pub mod phase_diagram;
pub mod rate_function;
pub mod simulate;

use crate::config::grid_point;
use crate::output::num;

/// `start, start + step, ..` up to `stop` inclusive.
pub(crate) fn range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| grid_point(start, step, i)).collect()
}

pub(crate) fn row(values: &[f64]) -> Vec<String> {
    values.iter().map(|&v| num(v)).collect()
}
