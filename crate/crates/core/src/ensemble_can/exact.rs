//! Exact big-number counts and partition functions for small lattices.
//!
//! Used to cross-check the floating-point tables; rates are converted to
//! rationals exactly from their `f64` representation.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, ZrpError};
use crate::model::RateModel;

/// Largest lattice accepted by the exact routines.
pub const MAX_EXACT_SITES: usize = 12;

fn check_size(l: usize) -> Result<()> {
    if l == 0 || l > MAX_EXACT_SITES {
        return Err(ZrpError::Resource(format!(
            "exact mode supports 1 <= L <= {MAX_EXACT_SITES}, got {l}"
        )));
    }
    Ok(())
}

/// `|X^0_{l,n}|` exactly.
pub fn count_bounded_exact(l: usize, n: u64, r: u64) -> Result<BigUint> {
    check_size(l)?;
    let n = n as usize;
    let mut row = vec![BigUint::zero(); n + 1];
    row[0] = BigUint::one();
    for _ in 0..l {
        let next: Vec<BigUint> = (0..=n)
            .map(|j| {
                (0..=j.min(r as usize))
                    .map(|k| &row[j - k])
                    .fold(BigUint::zero(), |acc, x| acc + x)
            })
            .collect();
        row = next;
    }
    Ok(row.swap_remove(n))
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite rate")
}

/// `Z_{l,n}` as an exact rational.
pub fn partition_exact(l: usize, n: u64, r: u64, model: &RateModel) -> Result<BigRational> {
    check_size(l)?;
    let (c0, c1) = (rational(model.c0()), rational(model.c1()));
    let n = n as usize;
    let mut w = vec![BigRational::one(); n + 1];
    for k in 1..=n {
        let g = if k as u64 <= r { &c0 } else { &c1 };
        w[k] = &w[k - 1] / g;
    }
    let mut row = w.clone();
    for _ in 1..l {
        row = (0..=n)
            .map(|j| {
                (0..=j)
                    .map(|k| &w[k] * &row[j - k])
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect();
    }
    Ok(row.swap_remove(n))
}

/// Natural log of a positive big integer, accurate for any size.
pub fn ln_bigint(x: &BigInt) -> f64 {
    if x <= &BigInt::zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}
