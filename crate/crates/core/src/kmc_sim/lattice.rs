//! Finite translation-invariant lattices and jump kernels.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZrpError};

/// Geometry of the lattice; sites are numbered `x + width * y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Topology {
    Ring { size: usize },
    Torus { width: usize, height: usize },
}

impl Topology {
    pub fn size(&self) -> usize {
        match *self {
            Topology::Ring { size } => size,
            Topology::Torus { width, height } => width * height,
        }
    }
}

/// Jump kernel `p`, as displacement `(dx, dy)` with probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Kernel {
    /// `p(+-e_i) = 1 / (2 d)`.
    SymmetricNearest,
    /// `p(+e_i) = 1 / d`.
    TotallyAsymmetric,
    /// Uniform over all nonzero displacements with every coordinate in `[-range, range]`.
    SymmetricRange {
        range: i64,
    },
    Custom {
        jumps: Vec<((i64, i64), f64)>,
    },
}

impl Kernel {
    fn jumps(&self, topology: &Topology) -> Vec<((i64, i64), f64)> {
        let two_d = matches!(topology, Topology::Torus { .. });
        let units: Vec<(i64, i64)> = if two_d {
            vec![(1, 0), (0, 1)]
        } else {
            vec![(1, 0)]
        };
        match self {
            Kernel::SymmetricNearest => {
                let p = 0.5 / units.len() as f64;
                units
                    .iter()
                    .flat_map(|&(x, y)| [((x, y), p), ((-x, -y), p)])
                    .collect()
            }
            Kernel::TotallyAsymmetric => {
                let p = 1.0 / units.len() as f64;
                units.iter().map(|&u| (u, p)).collect()
            }
            Kernel::SymmetricRange { range } => {
                let c = *range;
                let ys = if two_d { -c..=c } else { 0..=0 };
                let offs: Vec<(i64, i64)> = ys
                    .flat_map(|y| (-c..=c).map(move |x| (x, y)))
                    .filter(|&o| o != (0, 0))
                    .collect();
                let p = 1.0 / offs.len() as f64;
                offs.into_iter().map(|o| (o, p)).collect()
            }
            Kernel::Custom { jumps } => jumps.clone(),
        }
    }
}

/// Lattice with a precomputed neighbour table.
#[derive(Debug, Clone)]
pub struct Lattice {
    topology: Topology,
    kernel: Kernel,
    /// `targets[x * k + j]`: site reached from `x` by the `j`-th displacement.
    targets: Vec<u32>,
    /// Cumulative probabilities, or `None` when all displacements are equally likely.
    cumulative: Option<Vec<f64>>,
    k: usize,
    range: i64,
}

impl Lattice {
    pub fn new(topology: Topology, kernel: Kernel) -> Result<Self> {
        let size = topology.size();
        if size < 2 {
            return Err(ZrpError::InvalidLattice(format!(
                "need at least 2 sites, got {size}"
            )));
        }
        if size > u32::MAX as usize {
            return Err(ZrpError::InvalidLattice(format!(
                "{size} sites do not fit in u32"
            )));
        }
        let jumps: Vec<_> = kernel
            .jumps(&topology)
            .into_iter()
            .filter(|(_, p)| *p != 0.0)
            .collect();
        if jumps.is_empty() {
            return Err(ZrpError::InvalidLattice("kernel has no jumps".into()));
        }
        if jumps
            .iter()
            .any(|(o, p)| !(p.is_finite() && *p > 0.0) || *o == (0, 0))
        {
            return Err(ZrpError::InvalidLattice(
                "jump probabilities must be positive and displacements nonzero".into(),
            ));
        }
        if let Topology::Ring { .. } = topology {
            if jumps.iter().any(|((_, dy), _)| *dy != 0) {
                return Err(ZrpError::InvalidLattice(
                    "ring kernel must have dy = 0".into(),
                ));
            }
        }
        let total: f64 = jumps.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(ZrpError::InvalidLattice(format!(
                "jump probabilities sum to {total}, not 1"
            )));
        }
        let range = jumps
            .iter()
            .map(|((dx, dy), _)| dx.abs().max(dy.abs()))
            .max()
            .unwrap();
        let k = jumps.len();
        let (w, h) = match topology {
            Topology::Ring { size } => (size as i64, 1i64),
            Topology::Torus { width, height } => (width as i64, height as i64),
        };
        let mut targets = Vec::with_capacity(size * k);
        for site in 0..size as i64 {
            let (x, y) = (site % w, site / w);
            for ((dx, dy), _) in &jumps {
                let nx = (x + dx).rem_euclid(w);
                let ny = (y + dy).rem_euclid(h);
                targets.push((nx + w * ny) as u32);
            }
        }
        let p0 = jumps[0].1;
        let cumulative = if jumps.iter().all(|(_, p)| (*p - p0).abs() < 1e-15) {
            None
        } else {
            let mut acc = 0.0;
            Some(
                jumps
                    .iter()
                    .map(|(_, p)| {
                        acc += p;
                        acc / total
                    })
                    .collect(),
            )
        };
        let lattice = Self {
            topology,
            kernel,
            targets,
            cumulative,
            k,
            range,
        };
        lattice.check_irreducible()?;
        Ok(lattice)
    }

    /// Ring with `p(+1) = p(-1) = 1/2`.
    pub fn ring(size: usize) -> Result<Self> {
        Self::new(Topology::Ring { size }, Kernel::SymmetricNearest)
    }

    /// Irreducible iff every site is reachable from site 0 (translation invariance).
    fn check_irreducible(&self) -> Result<()> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &self.targets[x * self.k..(x + 1) * self.k] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push_back(y as usize);
                }
            }
        }
        if count != n {
            return Err(ZrpError::InvalidLattice(format!(
                "kernel reaches only {count} of {n} sites"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.topology.size()
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// Largest displacement in any coordinate.
    pub fn range(&self) -> i64 {
        self.range
    }

    /// Displacements from `site` with their probabilities.
    pub fn neighbours(&self, site: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let k = self.k;
        (0..k).map(move |j| {
            let p = match &self.cumulative {
                None => 1.0 / k as f64,
                Some(c) => c[j] - if j == 0 { 0.0 } else { c[j - 1] },
            };
            (self.targets[site * k + j] as usize, p)
        })
    }

    /// Destination of a jump from `site` given a uniform `u` in `[0, 1)`.
    #[inline]
    pub fn destination(&self, site: usize, u: f64) -> usize {
        let j = match &self.cumulative {
            None => ((u * self.k as f64) as usize).min(self.k - 1),
            Some(c) => c.iter().position(|&x| u < x).unwrap_or(self.k - 1),
        };
        self.targets[site * self.k + j] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_neighbours() {
        let l = Lattice::ring(5).unwrap();
        assert_eq!(l.destination(0, 0.2), 1);
        assert_eq!(l.destination(0, 0.7), 4);
        assert_eq!(l.destination(4, 0.2), 0);
        assert_eq!(l.range(), 1);
        let total: f64 = l.neighbours(3).map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn torus_and_range() {
        let t = Lattice::new(
            Topology::Torus {
                width: 4,
                height: 3,
            },
            Kernel::SymmetricNearest,
        )
        .unwrap();
        assert_eq!(t.size(), 12);
        let nb: Vec<usize> = t.neighbours(0).map(|(y, _)| y).collect();
        assert_eq!(nb, vec![1, 3, 4, 8]);
        let r = Lattice::new(
            Topology::Ring { size: 10 },
            Kernel::SymmetricRange { range: 3 },
        )
        .unwrap();
        assert_eq!(r.range(), 3);
        assert_eq!(r.neighbours(0).count(), 6);
        Lattice::new(
            Topology::Torus {
                width: 4,
                height: 4,
            },
            Kernel::TotallyAsymmetric,
        )
        .unwrap();
    }

    #[test]
    fn rejects_bad_kernels() {
        let bad_sum = Kernel::Custom {
            jumps: vec![((1, 0), 0.4), ((-1, 0), 0.4)],
        };
        assert!(Lattice::new(Topology::Ring { size: 6 }, bad_sum).is_err());
        // only even sites reachable
        let even = Kernel::Custom {
            jumps: vec![((2, 0), 0.5), ((-2, 0), 0.5)],
        };
        assert!(matches!(
            Lattice::new(Topology::Ring { size: 6 }, even),
            Err(ZrpError::InvalidLattice(_))
        ));
        assert!(Lattice::ring(1).is_err());
        let skewed = Kernel::Custom {
            jumps: vec![((1, 0), 0.75), ((-1, 0), 0.25)],
        };
        let l = Lattice::new(Topology::Ring { size: 6 }, skewed).unwrap();
        assert_eq!(l.destination(2, 0.74), 3);
        assert_eq!(l.destination(2, 0.76), 1);
    }
}
