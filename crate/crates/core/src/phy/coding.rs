//! Rate-1/3 tail-biting convolutional code (K = 7, generators 133/171/165
//! octal) with a wrap-around soft Viterbi decoder.

use alloc::vec;
use alloc::vec::Vec;

/// Generator taps; bit 6 multiplies the current input.
pub const GENERATORS: [u8; 3] = [0o133, 0o171, 0o165];
pub const CONSTRAINT_LENGTH: usize = 7;
const STATES: usize = 1 << (CONSTRAINT_LENGTH - 1);

fn parity(x: u8) -> u8 {
    (x.count_ones() & 1) as u8
}

fn branch_outputs(reg: u8) -> [u8; 3] {
    [
        parity(reg & GENERATORS[0]),
        parity(reg & GENERATORS[1]),
        parity(reg & GENERATORS[2]),
    ]
}

/// Encodes `bits` (values 0/1). The register starts loaded with the last six
/// input bits, so it ends in the state it began in. Output is interleaved
/// per input bit: g0, g1, g2.
pub fn encode_tail_biting(bits: &[u8]) -> Vec<u8> {
    let n = bits.len();
    let mut state: u8 = 0;
    // State bit 5 is the most recent input.
    for i in 0..(CONSTRAINT_LENGTH - 1).min(n) {
        state = (state >> 1) | ((bits[n - (CONSTRAINT_LENGTH - 1).min(n) + i] & 1) << 5);
    }
    let mut out = Vec::with_capacity(3 * n);
    for &b in bits {
        let reg = ((b & 1) << 6) | state;
        out.extend_from_slice(&branch_outputs(reg));
        state = reg >> 1;
    }
    out
}

/// Soft-input decoder. `llr[j] > 0` favours coded bit j = 0. Runs three
/// passes around the circular trellis and keeps the middle one.
pub fn decode_tail_biting(llr: &[f64], n_bits: usize) -> Vec<u8> {
    assert_eq!(llr.len(), 3 * n_bits, "need three soft values per bit");
    if n_bits == 0 {
        return Vec::new();
    }
    let mut table = [[0f64; 2]; STATES];
    let passes = 3;
    let steps = passes * n_bits;
    let mut metric = [0f64; STATES];
    let mut next = [0f64; STATES];
    let mut survivors = vec![[0u8; STATES]; steps];
    let mut outputs = [[[0u8; 3]; 2]; STATES];
    for (s, out) in outputs.iter_mut().enumerate() {
        for u in 0..2u8 {
            out[u as usize] = branch_outputs((u << 6) | s as u8);
        }
    }
    for t in 0..steps {
        let i = t % n_bits;
        let l = &llr[3 * i..3 * i + 3];
        for (s, row) in table.iter_mut().enumerate() {
            for u in 0..2 {
                let o = outputs[s][u];
                row[u] = (0..3)
                    .map(|j| if o[j] == 0 { l[j] } else { -l[j] })
                    .sum();
            }
        }
        next.fill(f64::NEG_INFINITY);
        let surv = &mut survivors[t];
        for (s, &m) in metric.iter().enumerate() {
            for u in 0..2 {
                let ns = (u << 5) | (s >> 1);
                let cand = m + table[s][u];
                if cand > next[ns] {
                    next[ns] = cand;
                    surv[ns] = s as u8;
                }
            }
        }
        metric = next;
    }
    let mut state = metric
        .iter()
        .enumerate()
        .fold(0, |best, (s, &m)| if m > metric[best] { s } else { best });
    let mut decided = vec![0u8; steps];
    for t in (0..steps).rev() {
        decided[t] = (state >> 5) as u8;
        state = survivors[t][state] as usize;
    }
    decided[n_bits..2 * n_bits].to_vec()
}
