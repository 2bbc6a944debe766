//! Transmit chain: message coding, resource mapping with frequency hopping,
//! OFDM modulation with the extended CP, and the Zadoff-Chu baseline.
//!
//! Subcarrier k of an S-point grid sits at baseband frequency (k − ⌊S/2⌋)/T.
//! Transforms are unitary, so the energy of a symbol is the same in both
//! domains.

pub mod coding;
pub mod scrambling;
pub mod zc;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use num_traits::Float;

use crate::dft::Dft;
use crate::types::{AccessRequestMessage, RachGrid, MIN_DATA_RES};
use crate::{Error, Result};

pub use zc::{generate_zc, legacy_pool, ZcPreamble};

/// Coded bits per message.
pub const CODED_BITS: usize = 3 * crate::types::MESSAGE_BITS;

/// Complex amplitudes indexed by (subcarrier, OFDM symbol).
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGrid {
    num_subcarriers: usize,
    n_symbols: usize,
    cells: Vec<Complex64>,
}

impl ResourceGrid {
    pub fn zeros(num_subcarriers: usize, n_symbols: usize) -> Self {
        Self {
            num_subcarriers,
            n_symbols,
            cells: vec![Complex64::new(0.0, 0.0); num_subcarriers * n_symbols],
        }
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn get(&self, subcarrier: usize, symbol: usize) -> Complex64 {
        self.cells[symbol * self.num_subcarriers + subcarrier]
    }

    pub fn set(&mut self, subcarrier: usize, symbol: usize, value: Complex64) {
        self.cells[symbol * self.num_subcarriers + subcarrier] = value;
    }

    /// All subcarriers of one symbol.
    pub fn symbol(&self, symbol: usize) -> &[Complex64] {
        &self.cells[symbol * self.num_subcarriers..(symbol + 1) * self.num_subcarriers]
    }

    pub fn symbol_mut(&mut self, symbol: usize) -> &mut [Complex64] {
        &mut self.cells[symbol * self.num_subcarriers..(symbol + 1) * self.num_subcarriers]
    }

    pub fn energy(&self) -> f64 {
        self.cells.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Distinct subcarriers carrying nonzero energy anywhere in the grid.
    pub fn occupied_subcarriers(&self) -> Vec<usize> {
        (0..self.num_subcarriers)
            .filter(|&k| (0..self.n_symbols).any(|n| self.get(k, n).norm_sqr() > 0.0))
            .collect()
    }

    pub fn add_assign(&mut self, other: &ResourceGrid) {
        assert_eq!(self.cells.len(), other.cells.len());
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            *a += b;
        }
    }
}

/// Complex baseband samples at `sample_rate_hz`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    pub samples: Vec<Complex64>,
    pub sample_rate_hz: f64,
}

impl ComplexSignal {
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64) -> Self {
        Self {
            samples,
            sample_rate_hz,
        }
    }

    pub fn zeros(len: usize, sample_rate_hz: f64) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); len], sample_rate_hz)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Interleaved I/Q as little-endian 32-bit floats.
    pub fn to_iq_f32_le(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * self.samples.len());
        for s in &self.samples {
            out.extend_from_slice(&(s.re as f32).to_le_bytes());
            out.extend_from_slice(&(s.im as f32).to_le_bytes());
        }
        out
    }
}

/// Gray-mapped QPSK with unit energy: bit 0 → +, bit 1 → −, first bit on I.
pub fn qpsk(b0: u8, b1: u8) -> Complex64 {
    let s = |b: u8| if b & 1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    Complex64::new(s(b0), s(b1))
}

/// Coded bits repeated cyclically to `2·n_re` bits and scrambled with the
/// cell sequence; exposed so the receiver can undo both steps.
pub fn rate_matched_bits(msg: &AccessRequestMessage, cell_id: u16, n_re: usize) -> Result<Vec<u8>> {
    rate_match(&msg.to_bits(), cell_id, n_re)
}

fn rate_match(message_bits: &[u8], cell_id: u16, n_re: usize) -> Result<Vec<u8>> {
    if n_re < MIN_DATA_RES {
        return Err(Error::TooFewResourceElements {
            got: n_re,
            min: MIN_DATA_RES,
        });
    }
    let coded = coding::encode_tail_biting(message_bits);
    let scramble = scrambling::cell_scrambler(cell_id, 2 * n_re);
    Ok(scramble
        .iter()
        .enumerate()
        .map(|(i, &c)| coded[i % CODED_BITS] ^ c)
        .collect())
}

/// Message → CRC-protected bits → tail-biting code → repetition → scrambling
/// → QPSK. Returns `n_re` unit-energy symbols.
pub fn encode_message(msg: &AccessRequestMessage, cell_id: u16, n_re: usize) -> Result<Vec<Complex64>> {
    let bits = rate_matched_bits(msg, cell_id, n_re)?;
    Ok(bits.chunks_exact(2).map(|p| qpsk(p[0], p[1])).collect())
}

/// [`encode_message`] for raw message bits, CRC included or not; the receiver
/// re-encodes tentative decisions with it.
pub fn encode_bits(message_bits: &[u8], cell_id: u16, n_re: usize) -> Result<Vec<Complex64>> {
    let bits = rate_match(message_bits, cell_id, n_re)?;
    Ok(bits.chunks_exact(2).map(|p| qpsk(p[0], p[1])).collect())
}

/// Known unit-energy QPSK symbols for the reference groups.
pub fn reference_symbols(cell_id: u16, count: usize) -> Vec<Complex64> {
    scrambling::gold_sequence(scrambling::reference_seed(cell_id), 2 * count)
        .chunks_exact(2)
        .map(|p| qpsk(p[0], p[1]))
        .collect()
}

/// Places data and reference symbols of slot-local `channel`.
///
/// Data symbol i goes to the (i / s)-th data group on tone i mod s and is
/// repeated on all l symbols of that group. Reference groups carry the
/// cell's reference sequence in the same way. Each resource element is scaled
/// by 1/√s so the device's total power is independent of s.
pub fn map_to_grid(
    symbols: &[Complex64],
    grid: &RachGrid,
    channel: usize,
    cell_id: u16,
) -> Result<ResourceGrid> {
    grid.check_channel(channel)?;
    if symbols.len() != grid.data_res() {
        return Err(Error::SymbolCountMismatch {
            got: symbols.len(),
            expected: grid.data_res(),
        });
    }
    let s = grid.subcarriers_per_channel();
    let amp = 1.0 / Float::sqrt(s as f64);
    let refs = reference_symbols(cell_id, grid.reference_res());
    let mut out = ResourceGrid::zeros(grid.num_subcarriers(), grid.n_ofdm());
    let mut place = |group: usize, values: &[Complex64]| {
        for (tone, &v) in values.iter().enumerate() {
            let k = grid.subcarrier(channel, tone, group);
            for n in grid.group_symbols(group) {
                out.set(k, n, v * amp);
            }
        }
    };
    for (ordinal, group) in grid.data_groups().enumerate() {
        place(group, &symbols[ordinal * s..(ordinal + 1) * s]);
    }
    for (ordinal, group) in grid.reference_groups().enumerate() {
        place(group, &refs[ordinal * s..(ordinal + 1) * s]);
    }
    Ok(out)
}

/// FFT bin holding subcarrier `k` of an `s`-point grid.
pub fn subcarrier_bin(k: usize, s: usize) -> usize {
    (k + s - s / 2) % s
}

/// Baseband frequency offset of subcarrier `k`, in subcarrier spacings.
pub fn subcarrier_frequency_index(k: usize, s: usize) -> isize {
    k as isize - (s / 2) as isize
}

/// Per symbol: unitary inverse transform, then the last `cp_samples`
/// samples prepended as the cyclic prefix.
pub fn ofdm_modulate(res: &ResourceGrid, cp_samples: usize, sample_rate_hz: f64) -> ComplexSignal {
    let s = res.num_subcarriers();
    let plan = Dft::new(s);
    let mut bins = vec![Complex64::new(0.0, 0.0); s];
    let mut samples = Vec::with_capacity(res.n_symbols() * (s + cp_samples));
    for n in 0..res.n_symbols() {
        for (k, &v) in res.symbol(n).iter().enumerate() {
            bins[subcarrier_bin(k, s)] = v;
        }
        let time = plan.inverse_unitary(&bins);
        samples.extend_from_slice(&time[s - cp_samples.min(s)..]);
        samples.extend_from_slice(&time);
    }
    ComplexSignal::new(samples, sample_rate_hz)
}

/// The complete waveform of one device for one TDM slot.
pub fn transmit_access(
    msg: &AccessRequestMessage,
    grid: &RachGrid,
    channel: usize,
    cell_id: u16,
) -> Result<ComplexSignal> {
    let symbols = encode_message(msg, cell_id, grid.data_res())?;
    let res = map_to_grid(&symbols, grid, channel, cell_id)?;
    Ok(ofdm_modulate(&res, grid.cp_samples(), grid.sample_rate_hz()))
}

/// Sums signals after delaying each by a whole number of samples
/// (round(delay·fs)) and scaling by its gain. The output is long enough to
/// hold every delayed input.
pub fn superpose(signals: &[(ComplexSignal, f64, f64)]) -> ComplexSignal {
    let fs = signals.first().map_or(1.0, |s| s.0.sample_rate_hz);
    let shifts: Vec<usize> = signals
        .iter()
        .map(|(_, d, _)| Float::round(d.max(0.0) * fs) as usize)
        .collect();
    let len = signals
        .iter()
        .zip(&shifts)
        .map(|((s, _, _), &d)| s.len() + d)
        .max()
        .unwrap_or(0);
    let mut out = ComplexSignal::zeros(len, fs);
    for ((sig, _, gain), &d) in signals.iter().zip(&shifts) {
        for (o, &x) in out.samples[d..].iter_mut().zip(&sig.samples) {
            *o += x * *gain;
        }
    }
    out
}
