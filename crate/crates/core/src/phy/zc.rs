//! Zadoff-Chu preambles for the legacy baseline.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Preamble length of the legacy format.
pub const LEGACY_ZC_LEN: usize = 839;
/// Preambles a legacy cell offers.
pub const LEGACY_POOL_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct ZcPreamble {
    pub root: usize,
    pub samples: Vec<Complex64>,
}

impl ZcPreamble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// x_μ[n] = exp(−jπμn(n+1)/N_ZC).
pub fn generate_zc(root: usize, n_zc: usize) -> Result<ZcPreamble> {
    if root == 0 || root >= n_zc || gcd(root, n_zc) != 1 {
        return Err(Error::InvalidRoot {
            root,
            length: n_zc,
        });
    }
    // Reduce the exponent modulo 2N in integers to keep the phase exact.
    let modulus = 2 * n_zc as u128;
    let samples = (0..n_zc as u128)
        .map(|n| {
            let e = (root as u128 * n * (n + 1)) % modulus;
            Complex64::from_polar(1.0, -PI * e as f64 / n_zc as f64)
        })
        .collect();
    Ok(ZcPreamble { root, samples })
}

/// Legacy pool: roots 1..=64 of length 839.
pub fn legacy_pool() -> Vec<ZcPreamble> {
    (1..=LEGACY_POOL_SIZE)
        .map(|r| generate_zc(r, LEGACY_ZC_LEN).expect("839 is prime"))
        .collect()
}
