//! Composition counts: unconstrained (stars and bars) and with every part at most `R`.

use crate::logspace::{ln_binom, log_add, log_sub, xlogx};

/// `chi(rho) = (1 + rho) log(1 + rho) - rho log rho`, the growth rate of
/// `log |X_{L, rho L}| / L`.
pub fn chi(rho: f64) -> f64 {
    (1.0 + rho) * rho.ln_1p() - xlogx(rho)
}

/// `log binom(N + L - 1, L - 1)`, the number of ways to put `n` particles on `l` sites.
pub fn count_compositions(l: usize, n: u64) -> f64 {
    assert!(l >= 1, "need at least one site");
    ln_binom(n + l as u64 - 1, l as u64 - 1)
}

/// `log |X^0_{l,n}|`: compositions of `n` into `l` parts, each at most `r`.
/// Returns `-inf` when `n > l r`.
pub fn count_bounded(l: usize, n: u64, r: u64) -> f64 {
    assert!(l >= 1, "need at least one site");
    let counts = BoundedCounts::build(l, n as usize, r);
    counts.get(l, n as usize)
}

/// Table of `log |X^0_{l,n}|` for `l <= l_max`, `n <= n_max` at a fixed bound `r`.
///
/// Rows are filled with a sliding window over the previous row. On the rising
/// half of each (symmetric, unimodal) row the term leaving the window is the
/// smallest one in it, so the subtraction never cancels badly; the falling half
/// is filled by the reflection `C_l(n) = C_l(l r - n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedCounts {
    l_max: usize,
    n_max: usize,
    r: u64,
    data: Vec<f64>,
}

impl BoundedCounts {
    pub fn build(l_max: usize, n_max: usize, r: u64) -> Self {
        let width = n_max + 1;
        let mut data = vec![f64::NEG_INFINITY; (l_max + 1) * width];
        data[0] = 0.0;
        for l in 1..=l_max {
            let (prev_rows, rest) = data.split_at_mut(l * width);
            let prev = &prev_rows[(l - 1) * width..];
            let row = &mut rest[..width];
            fill_row(prev, row, l, r);
        }
        Self {
            l_max,
            n_max,
            r,
            data,
        }
    }

    pub(crate) fn from_raw(l_max: usize, n_max: usize, r: u64, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), (l_max + 1) * (n_max + 1));
        Self {
            l_max,
            n_max,
            r,
            data,
        }
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.data
    }

    /// `log |X^0_{l,n}|`; `l = 0` is the empty lattice (one configuration iff `n = 0`).
    #[inline]
    pub fn get(&self, l: usize, n: usize) -> f64 {
        assert!(
            l <= self.l_max && n <= self.n_max,
            "({l}, {n}) outside table"
        );
        self.data[l * (self.n_max + 1) + n]
    }

    pub fn bound(&self) -> u64 {
        self.r
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

fn fill_row(prev: &[f64], row: &mut [f64], l: usize, r: u64) {
    let n_max = row.len() - 1;
    if r == 0 {
        row[0] = 0.0;
        return;
    }
    let r = r as usize;
    let top = l.saturating_mul(r); // largest reachable n
    let half = top / 2;
    let at = |i: isize| -> f64 {
        if i < 0 || i as usize > n_max {
            f64::NEG_INFINITY
        } else {
            prev[i as usize]
        }
    };
    let mut window = f64::NEG_INFINITY;
    for (n, cell) in row.iter_mut().enumerate().take(n_max.min(half) + 1) {
        window = log_add(
            log_sub(window, at(n as isize - r as isize - 1)),
            at(n as isize),
        );
        *cell = window;
    }
    for n in half + 1..=n_max {
        row[n] = if n > top {
            f64::NEG_INFINITY
        } else {
            row[top - n]
        };
    }
}
