//! Length-31 Gold sequence generator used for cell-specific scrambling and
//! for the reference symbols.
//!
//! x₁(n+31) = x₁(n+3) ⊕ x₁(n), seeded with x₁(0) = 1;
//! x₂(n+31) = x₂(n+3) ⊕ x₂(n+2) ⊕ x₂(n+1) ⊕ x₂(n), seeded with c_init;
//! c(n) = x₁(n+1600) ⊕ x₂(n+1600).

use alloc::vec::Vec;

const NC: usize = 1600;

/// First `len` bits of the Gold sequence for `c_init`.
pub fn gold_sequence(c_init: u32, len: usize) -> Vec<u8> {
    let mut x1: u32 = 1;
    let mut x2: u32 = c_init & 0x7fff_ffff;
    let mut out = Vec::with_capacity(len);
    for n in 0..NC + len {
        if n >= NC {
            out.push(((x1 ^ x2) & 1) as u8);
        }
        let f1 = (x1 ^ (x1 >> 3)) & 1;
        let f2 = (x2 ^ (x2 >> 1) ^ (x2 >> 2) ^ (x2 >> 3)) & 1;
        x1 = (x1 >> 1) | (f1 << 30);
        x2 = (x2 >> 1) | (f2 << 30);
    }
    out
}

/// Scrambling sequence of a cell.
pub fn cell_scrambler(cell_id: u16, len: usize) -> Vec<u8> {
    gold_sequence(cell_id as u32, len)
}

/// Seed of the reference-symbol sequence of a cell.
pub fn reference_seed(cell_id: u16) -> u32 {
    (1 << 16) | cell_id as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Array form taken straight from the recurrences.
    fn oracle(c_init: u32, len: usize) -> Vec<u8> {
        let total = NC + len + 31;
        let mut x1 = alloc::vec![0u8; total];
        let mut x2 = alloc::vec![0u8; total];
        x1[0] = 1;
        for i in 0..31 {
            x2[i] = ((c_init >> i) & 1) as u8;
        }
        for n in 0..total - 31 {
            x1[n + 31] = x1[n + 3] ^ x1[n];
            x2[n + 31] = x2[n + 3] ^ x2[n + 2] ^ x2[n + 1] ^ x2[n];
        }
        (0..len).map(|n| x1[n + NC] ^ x2[n + NC]).collect()
    }

    #[test]
    fn matches_recurrence() {
        for c in [0, 1, 42, 503, 0x1_0000 | 77] {
            assert_eq!(gold_sequence(c, 500), oracle(c, 500));
        }
    }

    #[test]
    fn roughly_balanced_and_cell_dependent() {
        let a = cell_scrambler(1, 4000);
        let b = cell_scrambler(2, 4000);
        let ones = a.iter().filter(|&&v| v == 1).count();
        assert!((ones as f64 / 4000.0 - 0.5).abs() < 0.05);
        let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        assert!((diff as f64 / 4000.0 - 0.5).abs() < 0.05);
    }
}
