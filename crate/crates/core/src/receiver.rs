//! Base-station receiver: fixed-window demodulation, blind per-channel
//! decoding with CRC detection, the frequency and timing offset estimators,
//! and the Zadoff-Chu correlation detector of the legacy baseline.
//!
//! Decoding one channel:
//! 1. coarse frequency offset from same-subcarrier symbol products inside
//!    each hop group (all lags);
//! 2. a MAP search around it over group sums: periodogram of the reference
//!    groups plus the fourth-power phase of the data groups, keeping a short
//!    list of candidates;
//! 3. per candidate, channel estimate from the reference groups (one complex
//!    gain per instant times the delay-induced phase ramp across subcarriers,
//!    smoothed over time), soft bits and Viterbi; the best-matching codeword
//!    wins;
//! 4. a second pass that treats the re-encoded tentative codeword as pilots
//!    everywhere, then a single CRC check.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Euclid, Float};

use crate::dft::Dft;
use crate::phy::{
    coding, encode_bits, reference_symbols, scrambling, subcarrier_bin, ComplexSignal,
    ResourceGrid, ZcPreamble, CODED_BITS,
};
use crate::types::{AccessRequestMessage, RachGrid, MESSAGE_BITS};
use crate::{Error, Result};

/// Widest frequency correction searched around the coarse estimate (Hz).
pub const MAX_CFO_SEARCH_HZ: f64 = 200.0;

/// Half-width of the triangular channel-smoothing window (s).
pub const CHANNEL_SMOOTHING_S: f64 = 0.06;

/// Per-channel decoding outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeResult {
    /// Slot-local channel index.
    pub channel_index: usize,
    pub message: Option<AccessRequestMessage>,
    pub est_delta_f_hz: f64,
    /// Whether the within-group products stood clear of the noise.
    pub cfo_reliable: bool,
    /// Present only with a decoded message.
    pub est_delta_t_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfoEstimate {
    pub hz: f64,
    pub reliable: bool,
}

/// Fixed DFT windows: for each symbol skip the CP and transform the next S
/// samples. Samples beyond the end of `signal` count as zero.
pub fn extract_symbols(signal: &ComplexSignal, grid: &RachGrid) -> ResourceGrid {
    let s = grid.num_subcarriers();
    let cp = grid.cp_samples();
    let plan = Dft::new(s);
    let mut out = ResourceGrid::zeros(s, grid.n_ofdm());
    let mut window = vec![Complex64::new(0.0, 0.0); s];
    let mut bins = vec![Complex64::new(0.0, 0.0); s];
    let scale = 1.0 / Float::sqrt(s as f64);
    for n in 0..grid.n_ofdm() {
        let start = n * (s + cp) + cp;
        for (i, w) in window.iter_mut().enumerate() {
            *w = signal
                .samples
                .get(start + i)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0));
        }
        plan.process(&window, &mut bins, false);
        let sym = out.symbol_mut(n);
        for (k, v) in sym.iter_mut().enumerate() {
            *v = bins[subcarrier_bin(k, s)] * scale;
        }
    }
    out
}

/// Removes the rotation a frequency offset of `cfo_hz` causes inside each
/// DFT window, leaving only the per-symbol phase steps.
fn derotate_windows(rx: &ResourceGrid, grid: &RachGrid, cfo_hz: f64) -> ResourceGrid {
    let s = grid.num_subcarriers();
    let plan = Dft::new(s);
    let step = -2.0 * PI * cfo_hz / grid.sample_rate_hz();
    let turn: Vec<Complex64> = (0..s).map(|i| Complex64::from_polar(1.0, step * i as f64)).collect();
    let mut out = ResourceGrid::zeros(s, rx.n_symbols());
    let mut bins = vec![Complex64::new(0.0, 0.0); s];
    for n in 0..rx.n_symbols() {
        for (k, &v) in rx.symbol(n).iter().enumerate() {
            bins[subcarrier_bin(k, s)] = v;
        }
        let mut time = plan.inverse_unitary(&bins);
        for (t, w) in time.iter_mut().zip(&turn) {
            *t *= w;
        }
        let freq = plan.forward_unitary(&time);
        for (k, v) in out.symbol_mut(n).iter_mut().enumerate() {
            *v = freq[subcarrier_bin(k, s)];
        }
    }
    out
}

/// The received resource elements of one channel, indexed (group, tone, repeat).
struct ChannelSamples<'a> {
    grid: &'a RachGrid,
    channel: usize,
    s: usize,
    l: usize,
    n_groups: usize,
    y: Vec<Complex64>,
}

impl<'a> ChannelSamples<'a> {
    fn new(rx: &ResourceGrid, grid: &'a RachGrid, channel: usize) -> Self {
        let s = grid.subcarriers_per_channel();
        let l = grid.group_len();
        let n_groups = grid.n_groups();
        let mut y = Vec::with_capacity(n_groups * s * l);
        for g in 0..n_groups {
            for j in 0..s {
                let k = grid.subcarrier(channel, j, g);
                for n in grid.group_symbols(g) {
                    y.push(rx.get(k, n));
                }
            }
        }
        Self {
            grid,
            channel,
            s,
            l,
            n_groups,
            y,
        }
    }

    fn re(&self, g: usize, j: usize, i: usize) -> Complex64 {
        self.y[(g * self.s + j) * self.l + i]
    }

    fn subcarrier(&self, g: usize, j: usize) -> usize {
        self.grid.subcarrier(self.channel, j, g)
    }

    /// Σ y[i+lag]·y*[i] within groups, and Σ |y[i+lag]|·|y[i]|.
    fn lag_products(&self, lag: usize) -> (Complex64, f64, usize) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        let mut count = 0;
        for g in 0..self.n_groups {
            for j in 0..self.s {
                for i in 0..self.l.saturating_sub(lag) {
                    let p = self.re(g, j, i + lag) * self.re(g, j, i).conj();
                    acc += p;
                    mag += p.norm();
                    count += 1;
                }
            }
        }
        (acc, mag, count)
    }

    /// Signal and noise power per RE: the repeats inside a group share their
    /// signal, so |Σ y[i+1]·y*[i]| / M measures it apart from the noise.
    fn re_powers(&self) -> (f64, f64) {
        let total = self.y.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.y.len().max(1) as f64;
        let (acc, _, count) = self.lag_products(1);
        if count == 0 {
            return (0.0, total);
        }
        let sig = (acc.norm() / count as f64).min(0.99 * total);
        (sig, total - sig)
    }

    /// Σ |y[i+lag]·y*[i]|² within groups.
    fn lag_power(&self, lag: usize) -> f64 {
        let mut acc = 0.0;
        for g in 0..self.n_groups {
            for j in 0..self.s {
                for i in 0..self.l.saturating_sub(lag) {
                    acc += (self.re(g, j, i + lag) * self.re(g, j, i).conj()).norm_sqr();
                }
            }
        }
        acc
    }

    /// Coherent sum of each group's repeats after removing a rotation of
    /// `omega` rad per symbol, indexed (group, tone).
    fn group_sums(&self, omega: f64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.n_groups * self.s);
        for g in 0..self.n_groups {
            for j in 0..self.s {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..self.l {
                    let n = (g * self.l + i) as f64;
                    acc += self.re(g, j, i) * Complex64::from_polar(1.0, -omega * n);
                }
                out.push(acc);
            }
        }
        out
    }
}

/// Frequency offset from products of adjacent same-subcarrier symbols inside
/// each hop group: Δf = ∠Σ y[n+1]·y*[n] / (2π(T + T_CP)). Flagged unreliable
/// when the accumulation is within three noise standard deviations, i.e. its
/// coherence |Σp|/Σ|p| falls below 3/√M for M products.
pub fn estimate_cfo(rx: &ResourceGrid, grid: &RachGrid, channel: usize) -> Result<CfoEstimate> {
    grid.check_channel(channel)?;
    let ch = ChannelSamples::new(rx, grid, channel);
    Ok(lag_one_estimate(&ch))
}

fn lag_one_estimate(ch: &ChannelSamples<'_>) -> CfoEstimate {
    let (acc, mag, count) = ch.lag_products(1);
    let period = ch.grid.symbol_period_s();
    let reliable = count > 0 && mag > 0.0 && acc.norm() / mag >= 3.0 / Float::sqrt(count as f64);
    CfoEstimate {
        hz: acc.arg() / (2.0 * PI * period),
        reliable,
    }
}

fn wrap(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    x - two_pi * Float::round(x / two_pi)
}

/// Frequency offset in rad per symbol using every in-group lag, each
/// unwrapped against the lag-1 value and weighted by lag² × product count,
/// with its estimated variance. The variance comes from the scatter of the
/// lag-1 products, scaled by the gain of the other lags.
fn refined_coarse_omega(ch: &ChannelSamples<'_>) -> (f64, f64) {
    let (r1, _, m1) = ch.lag_products(1);
    let omega1 = r1.arg();
    let mut num = 0.0;
    let mut den = 0.0;
    for lag in 1..ch.l {
        let (r, _, count) = ch.lag_products(lag);
        if count == 0 || r.norm() == 0.0 {
            continue;
        }
        let m = lag as f64;
        let phase = m * omega1 + wrap(r.arg() - m * omega1);
        let w = m * m * count as f64;
        num += w * phase / m;
        den += w;
    }
    if den == 0.0 {
        return (omega1, f64::INFINITY);
    }
    let power: f64 = ch.lag_power(1);
    let scatter = (power - r1.norm_sqr() / m1 as f64).max(0.0);
    let var1 = scatter / (2.0 * r1.norm_sqr());
    (num / den, var1 * m1 as f64 / den)
}

/// E[|z|·e^{j4∠z}] for z = √γ + n, n ~ CN(0, 1): the coherent part left by
/// the fourth-phase nonlinearity. Trapezoid rule over the Gaussian plane.
fn fourth_phase_mean(gamma: f64) -> f64 {
    const HALF: usize = 24;
    let h = 5.0 / HALF as f64;
    let mean = Float::sqrt(gamma);
    let mut acc = 0.0;
    let mut wsum = 0.0;
    for ia in 0..=2 * HALF {
        let a = (ia as f64 - HALF as f64) * h;
        for ib in 0..=2 * HALF {
            let b = (ib as f64 - HALF as f64) * h;
            let w = Float::exp(-(a * a + b * b));
            let z = Complex64::new(mean + a, b);
            acc += w * z.norm() * Float::cos(4.0 * z.arg());
            wsum += w;
        }
    }
    (acc / wsum).max(0.0)
}

/// Refines `omega` by maximising a posterior over the residual offset δ.
///
/// Two likelihood terms, each a tone of unknown complex amplitude in
/// Gaussian noise per (hop parity, tone) sequence, with the amplitude
/// marginalised so the log-likelihood is the periodogram times an SNR
/// factor that vanishes at low SNR:
/// - groups whose symbols are known, wiped and taken at δ;
/// - every group with its phase multiplied by four (magnitude kept), which
///   strips the QPSK data, taken at 4δ.
///
/// Per-term signal and noise powers follow from the per-RE SNR. The prior
/// is Gaussian around `omega` with the coarse variance, so short slots lean
/// on it and long ones on the data.
///
/// Returns up to `max` candidates, best first, at least a quarter of the
/// slot's frequency resolution apart and within a posterior ratio of e^12 of
/// the best.
fn fine_candidates(ch: &ChannelSamples<'_>, layout: &SymbolLayout, omega: f64, var: f64, max: usize) -> Vec<f64> {
    if ch.n_groups < 3 || !var.is_finite() || var <= 0.0 {
        return vec![omega];
    }
    let (p_sig, p_noise) = ch.re_powers();
    if p_sig <= 0.0 || p_noise <= 0.0 {
        return vec![omega];
    }
    let s = ch.s;
    let sums = ch.group_sums(omega);
    let gamma = ch.l as f64 * p_sig / p_noise;
    let sigma2 = ch.l as f64 * p_noise;
    let weight = |signal: f64, noise: f64, n: usize| signal / (noise * (noise + n as f64 * signal));

    let m = fourth_phase_mean(gamma);
    let (u_sig, u_noise) = (sigma2 * m * m, sigma2 * (gamma + 1.0 - m * m));
    let u: Vec<Complex64> = sums
        .iter()
        .map(|g| Complex64::from_polar(g.norm(), 4.0 * g.arg()))
        .collect();
    let u_weight = [ch.n_groups.div_ceil(2), ch.n_groups / 2].map(|n| weight(u_sig, u_noise, n));

    let mut known: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for g in (0..ch.n_groups).filter(|&g| layout.known(g)) {
        known[g % 2].push(g);
    }
    let wiped: Vec<Complex64> = (0..ch.n_groups * s)
        .map(|i| sums[i] * layout.symbol(i / s, i % s).conj())
        .collect();
    let k_weight = [0, 1].map(|p| weight(sigma2 * gamma, sigma2, known[p].len()));

    let log_likelihood = |delta: f64| -> f64 {
        let mut total = 0.0;
        let step = Complex64::from_polar(1.0, -delta * ch.l as f64);
        let mut rotation = Vec::with_capacity(ch.n_groups);
        let mut ph = Complex64::new(1.0, 0.0);
        for _ in 0..ch.n_groups {
            rotation.push(ph);
            ph *= step;
        }
        for parity in 0..2 {
            if known[parity].len() < 2 {
                continue;
            }
            for j in 0..s {
                let acc: Complex64 = known[parity].iter().map(|&g| wiped[g * s + j] * rotation[g]).sum();
                total += k_weight[parity] * acc.norm_sqr();
            }
        }
        let rot = step.powi(4);
        let rot2 = rot * rot;
        for parity in 0..2 {
            for j in 0..s {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut ph = if parity == 1 { rot } else { Complex64::new(1.0, 0.0) };
                for g in (parity..ch.n_groups).step_by(2) {
                    acc += u[g * s + j] * ph;
                    ph *= rot2;
                }
                total += u_weight[parity] * acc.norm_sqr();
            }
        }
        total
    };
    // The coarse variance runs somewhat optimistic at low SNR.
    let var = 1.5 * var;
    let objective = |d: f64| log_likelihood(d) - d * d / (2.0 * var);
    // Four grid points per main-lobe half width of the fourth-power term.
    let step = 2.0 * PI / (16.0 * (ch.n_groups * ch.l) as f64);
    let half = (4.0 * Float::sqrt(var)).min(2.0 * PI * MAX_CFO_SEARCH_HZ * ch.grid.symbol_period_s());
    let steps = (2.0 * half / step).ceil() as usize;
    if steps == 0 {
        return vec![omega];
    }
    let values: Vec<f64> = (0..=steps).map(|i| objective(-half + i as f64 * step)).collect();
    let refine = |i: usize| -> f64 {
        let d0 = -half + i as f64 * step;
        let (vm, v0, vp) = (objective(d0 - step), values[i], objective(d0 + step));
        let denom = vm - 2.0 * v0 + vp;
        let shift = if denom < 0.0 {
            (0.5 * (vm - vp) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        d0 + shift * step
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let best = values[order[0]];
    let spacing = 2.0 * PI / (4.0 * (ch.n_groups * ch.l) as f64);
    let mut picked: Vec<usize> = Vec::new();
    for i in order {
        if picked.len() == max || values[i] < best - 12.0 {
            break;
        }
        let d = i as f64 * step;
        if picked.iter().all(|&p| (p as f64 * step - d).abs() >= spacing) {
            picked.push(i);
        }
    }
    picked.into_iter().map(|i| omega + refine(i)).collect()
}

/// Maps a pair-product angle onto a delay. The 2π span T/|d| is placed so the
/// round-trip range [0, max_rtt] sits in its middle.
fn angle_to_delay(angle: f64, d: usize, grid: &RachGrid) -> f64 {
    let span = grid.symbol_duration_s() / d as f64;
    let lo = -(span - grid.max_rtt_s()).max(0.0) / 2.0;
    let raw = -angle / (2.0 * PI) * span;
    lo + Euclid::rem_euclid(&(raw - lo), &span)
}

/// Largest hop separation among the channel's tones.
fn max_hop(grid: &RachGrid, channel: usize) -> usize {
    (0..grid.subcarriers_per_channel())
        .map(|j| grid.hop_offset(grid.subcarrier(channel, j, 0)).unsigned_abs())
        .max()
        .unwrap_or(0)
}

/// Accumulates home→partner products of wiped group sums over every pair
/// whose two groups are known, using only tones hopping by `d_max`. Products
/// of tones hopping downward are conjugated so every term rotates by
/// −2π·d_max·Δt/T.
fn pair_products(ch: &ChannelSamples<'_>, sums: &[Complex64], layout: &SymbolLayout, d_max: usize) -> Complex64 {
    let s = ch.s;
    let mut q = Complex64::new(0.0, 0.0);
    for p in 0..ch.n_groups / 2 {
        let (gh, gp) = (2 * p, 2 * p + 1);
        if !layout.known(gh) || !layout.known(gp) {
            continue;
        }
        for j in 0..s {
            let d = ch.grid.hop_offset(ch.subcarrier(gh, j));
            if d.unsigned_abs() != d_max {
                continue;
            }
            let hh = sums[gh * s + j] * layout.symbol(gh, j).conj();
            let hp = sums[gp * s + j] * layout.symbol(gp, j).conj();
            let prod = hp * hh.conj();
            q += if d > 0 { prod } else { prod.conj() };
        }
    }
    q
}

/// Timing offset from the phase between hop partners once the message is
/// known: pair each home group with the following partner group, wipe the
/// data, and scale the accumulated angle by T/(2π·Δq). Needs the frequency
/// offset (`cfo_hz`) already estimated.
pub fn estimate_timing(
    rx: &ResourceGrid,
    grid: &RachGrid,
    channel: usize,
    cell_id: u16,
    msg: &AccessRequestMessage,
    cfo_hz: f64,
) -> Result<f64> {
    grid.check_channel(channel)?;
    let d_max = max_hop(grid, channel);
    if d_max == 0 {
        return Err(Error::NoHopSeparation);
    }
    let ch = ChannelSamples::new(rx, grid, channel);
    let sums = ch.group_sums(2.0 * PI * cfo_hz * grid.symbol_period_s());
    let layout = SymbolLayout::new(grid, cell_id, Some(&msg.to_bits()))?;
    let q = pair_products(&ch, &sums, &layout, d_max);
    let fine = angle_to_delay(q.arg(), d_max, grid);
    let ramp = tone_ramp(&ch, &sums, &layout);
    if ramp == Complex64::new(0.0, 0.0) {
        return Ok(fine);
    }
    // The hop phase repeats every T/Δq, barely more than the cell's delay
    // range at large Δq. Neighbouring tones see the same delay with a period
    // of T, so they pick the repetition among those near the window.
    let span = grid.symbol_duration_s() / d_max as f64;
    let coarse = angle_to_delay(ramp.arg(), 1, grid);
    let (lo, hi) = (-span / 2.0, grid.max_rtt_s() + span / 2.0);
    let best = (-2..=2)
        .map(|m| fine + m as f64 * span)
        .filter(|t| (lo..=hi).contains(t))
        .min_by(|a, b| (a - coarse).abs().total_cmp(&(b - coarse).abs()));
    Ok(best.unwrap_or(fine))
}

/// Products of wiped group sums on neighbouring subcarriers of the same
/// group, oriented so each rotates by −2π·Δt/T. Zero for one-tone channels.
fn tone_ramp(ch: &ChannelSamples<'_>, sums: &[Complex64], layout: &SymbolLayout) -> Complex64 {
    let s = ch.s;
    let mut acc = Complex64::new(0.0, 0.0);
    for g in (0..ch.n_groups).filter(|&g| layout.known(g)) {
        for j in 0..s {
            for i in j + 1..s {
                let step = ch.subcarrier(g, i) as isize - ch.subcarrier(g, j) as isize;
                if step.abs() != 1 {
                    continue;
                }
                let a = sums[g * s + j] * layout.symbol(g, j).conj();
                let b = sums[g * s + i] * layout.symbol(g, i).conj();
                let prod = b * a.conj();
                acc += if step > 0 { prod } else { prod.conj() };
            }
        }
    }
    acc
}

/// Known symbols per (group, tone): the reference groups always, the data
/// groups when message bits are supplied.
struct SymbolLayout {
    s: usize,
    values: Vec<Option<Complex64>>,
}

impl SymbolLayout {
    fn new(grid: &RachGrid, cell_id: u16, message_bits: Option<&[u8]>) -> Result<Self> {
        let s = grid.subcarriers_per_channel();
        let mut values = vec![None; grid.n_groups() * s];
        let refs = reference_symbols(cell_id, grid.reference_res());
        for (ordinal, g) in grid.reference_groups().enumerate() {
            for j in 0..s {
                values[g * s + j] = Some(refs[ordinal * s + j]);
            }
        }
        if let Some(bits) = message_bits {
            let data = encode_bits(bits, cell_id, grid.data_res())?;
            for (ordinal, g) in grid.data_groups().enumerate() {
                for j in 0..s {
                    values[g * s + j] = Some(data[ordinal * s + j]);
                }
            }
        }
        Ok(Self { s, values })
    }

    fn known(&self, g: usize) -> bool {
        self.values[g * self.s].is_some()
    }

    fn symbol(&self, g: usize, j: usize) -> Complex64 {
        self.values[g * self.s + j].unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Delay ramp and channel gain track from the known groups at frequency
/// offset `omega`, then soft bits (positive favours 0) combined over the
/// repetitions.
fn soft_bits(ch: &ChannelSamples<'_>, layout: &SymbolLayout, omega: f64, cell_id: u16) -> Vec<f64> {
    let grid = ch.grid;
    let (s, l) = (ch.s, ch.l);
    let period = grid.symbol_period_s();
    let t_sym = grid.symbol_duration_s();
    let sums = ch.group_sums(omega);
    let amp = l as f64 / Float::sqrt(s as f64);
    let known: Vec<usize> = (0..ch.n_groups).filter(|&g| layout.known(g)).collect();

    // Phase ramp across subcarriers, in rad per subcarrier. Adjacent tones
    // see −2πΔt/T without ambiguity but with little lever; hop partners see
    // d_max times that, ambiguous modulo T/d_max in Δt. The partners set the
    // value and the neighbours pick the alias.
    let mut adjacent = Complex64::new(0.0, 0.0);
    for &g in &known {
        for j in 0..s.saturating_sub(1) {
            let (k0, k1) = (ch.subcarrier(g, j), ch.subcarrier(g, j + 1));
            if k1 == k0 + 1 {
                let h0 = sums[g * s + j] * layout.symbol(g, j).conj();
                let h1 = sums[g * s + j + 1] * layout.symbol(g, j + 1).conj();
                adjacent += h1 * h0.conj();
            }
        }
    }
    let d_max = max_hop(grid, ch.channel);
    let ramp = if d_max > 0 {
        let q = pair_products(ch, &sums, layout, d_max);
        let dt = angle_to_delay(q.arg(), d_max, grid);
        let alias = t_sym / d_max as f64;
        let fit = |t: f64| (adjacent * Complex64::from_polar(1.0, 2.0 * PI * t / t_sym)).re;
        let dt = [dt - alias, dt, dt + alias]
            .into_iter()
            .max_by(|a, b| fit(*a).total_cmp(&fit(*b)))
            .unwrap_or(dt);
        -2.0 * PI * dt / t_sym
    } else {
        adjacent.arg()
    };

    // Common gain at each known group, smoothed over time.
    let group_time = |g: usize| (g * l) as f64 * period + 0.5 * (l - 1) as f64 * period;
    let anchors: Vec<(f64, Complex64)> = known
        .iter()
        .map(|&g| {
            let a: Complex64 = (0..s)
                .map(|j| {
                    let k = ch.subcarrier(g, j) as f64;
                    sums[g * s + j] * layout.symbol(g, j).conj() * Complex64::from_polar(1.0, -ramp * k)
                })
                .sum::<Complex64>()
                / (s as f64 * amp);
            (group_time(g), a)
        })
        .collect();
    let gap = grid.reference_pairs().windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0) as f64 * 2.0 * l as f64 * period;
    let half_width = CHANNEL_SMOOTHING_S.max(gap);
    let gain_at = |t: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut wsum = 0.0;
        for &(tp, a) in &anchors {
            let w = 1.0 - (t - tp).abs() / half_width;
            if w > 0.0 {
                acc += a * w;
                wsum += w;
            }
        }
        if wsum > 0.0 {
            acc / wsum
        } else {
            anchors
                .iter()
                .min_by(|x, y| (x.0 - t).abs().total_cmp(&(y.0 - t).abs()))
                .map_or(Complex64::new(0.0, 0.0), |x| x.1)
        }
    };

    // Soft bits with the descrambling folded in, combined over repetitions.
    let scramble = scrambling::cell_scrambler(cell_id, 2 * grid.data_res());
    let mut llr = vec![0.0; CODED_BITS];
    for (ordinal, g) in grid.data_groups().enumerate() {
        let a = gain_at(group_time(g)) * amp;
        for j in 0..s {
            let k = ch.subcarrier(g, j) as f64;
            let z = sums[g * s + j] * (a * Complex64::from_polar(1.0, ramp * k)).conj();
            let idx = 2 * (ordinal * s + j);
            for (b, v) in [z.re, z.im].into_iter().enumerate() {
                let sign = if scramble[idx + b] == 1 { -1.0 } else { 1.0 };
                llr[(idx + b) % CODED_BITS] += sign * v;
            }
        }
    }
    llr
}

/// Maximum-likelihood frequency with every symbol known: the offset that
/// makes the wiped group sums of each tone and hop parity add coherently.
/// Golden-section search over one grid step of [`fine_candidates`] either
/// side of `omega`, repeated once on resummed groups.
fn refine_known(ch: &ChannelSamples<'_>, layout: &SymbolLayout, mut omega: f64) -> f64 {
    if ch.n_groups < 2 {
        return omega;
    }
    let s = ch.s;
    let half = 2.0 * PI / (16.0 * (ch.n_groups * ch.l) as f64);
    for _ in 0..2 {
        let sums = ch.group_sums(omega);
        let wiped: Vec<Complex64> = (0..ch.n_groups * s)
            .map(|i| sums[i] * layout.symbol(i / s, i % s).conj())
            .collect();
        let coherence = |delta: f64| -> f64 {
            let step = Complex64::from_polar(1.0, -delta * ch.l as f64);
            let mut total = 0.0;
            for parity in 0..2 {
                for j in 0..s {
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut ph = step.powi(parity as i32);
                    let step2 = step * step;
                    for g in (parity..ch.n_groups).step_by(2) {
                        acc += wiped[g * s + j] * ph;
                        ph *= step2;
                    }
                    total += acc.norm_sqr();
                }
            }
            total
        };
        let ratio = (Float::sqrt(5.0) - 1.0) / 2.0;
        let (mut a, mut b) = (-half, half);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (coherence(c), coherence(d));
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = coherence(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = coherence(d);
            }
        }
        omega += 0.5 * (a + b);
    }
    omega
}

/// Viterbi decision on `llr` and how well its re-encoding agrees with the
/// soft bits, as a normalised correlation.
fn decide(llr: &[f64]) -> (Vec<u8>, f64) {
    let bits = coding::decode_tail_biting(llr, MESSAGE_BITS);
    let coded = coding::encode_tail_biting(&bits);
    let norm = llr.iter().map(|v| v * v).sum::<f64>().sqrt();
    let agree: f64 = llr
        .iter()
        .zip(&coded)
        .map(|(v, &c)| if c == 0 { *v } else { -*v })
        .sum();
    (bits, if norm > 0.0 { agree / norm } else { 0.0 })
}

/// Frequency hypotheses tried in the first pass.
const FIRST_PASS_CANDIDATES: usize = 8;

/// Blind decode of one slot-local channel.
///
/// The first pass works from the reference groups alone and tries several
/// frequency hypotheses, keeping the one whose Viterbi decision best agrees
/// with its soft bits. That decision, re-encoded without any CRC check,
/// serves as a reference for every group in a second pass. Only the second
/// decision meets the CRC, so the false-alarm rate stays that of one check.
pub fn decode_channel(rx: &ResourceGrid, grid: &RachGrid, channel: usize, cell_id: u16) -> Result<DecodeResult> {
    grid.check_channel(channel)?;
    let ch = ChannelSamples::new(rx, grid, channel);
    let to_hz = |omega: f64| omega / (2.0 * PI * grid.symbol_period_s());
    let cfo = lag_one_estimate(&ch);
    let (coarse, var) = refined_coarse_omega(&ch);
    let pilots = SymbolLayout::new(grid, cell_id, None)?;
    let mut first: Option<(f64, Vec<u8>, f64)> = None;
    for omega in fine_candidates(&ch, &pilots, coarse, var, FIRST_PASS_CANDIDATES) {
        let llr = soft_bits(&ch, &pilots, omega, cell_id);
        // Zero soft bits would decode to the all-zero word, whose CRC is zero.
        if llr.iter().all(|v| *v == 0.0) {
            continue;
        }
        let (bits, score) = decide(&llr);
        if first.as_ref().is_none_or(|f| score > f.2) {
            first = Some((omega, bits, score));
        }
    }
    let Some((omega1, tentative, _)) = first else {
        return Ok(DecodeResult {
            channel_index: channel,
            message: None,
            est_delta_f_hz: to_hz(coarse),
            cfo_reliable: cfo.reliable,
            est_delta_t_s: None,
        });
    };
    let full = SymbolLayout::new(grid, cell_id, Some(&tentative))?;
    let mut omega = fine_candidates(&ch, &full, omega1, var, 1)[0];
    let (bits, _) = decide(&soft_bits(&ch, &full, omega, cell_id));
    let message = AccessRequestMessage::from_bits(&bits).ok();
    let mut est_delta_t_s = None;
    if let Some(m) = &message {
        // The offset also turns the samples inside each DFT window, which
        // leaks between the channel's own tones and biases both estimates.
        // Undo it with the current estimate and refit; two rounds leave a
        // residual far below the noise.
        let known = SymbolLayout::new(grid, cell_id, Some(&m.to_bits()))?;
        let mut clean = derotate_windows(rx, grid, to_hz(omega));
        for round in 0..2 {
            omega = refine_known(&ChannelSamples::new(&clean, grid, channel), &known, omega);
            if round == 0 {
                clean = derotate_windows(rx, grid, to_hz(omega));
            }
        }
        if max_hop(grid, channel) > 0 {
            est_delta_t_s = Some(estimate_timing(&clean, grid, channel, cell_id, m, to_hz(omega))?);
        }
    }
    let est_delta_f_hz = to_hz(omega);
    Ok(DecodeResult {
        channel_index: channel,
        message,
        est_delta_f_hz,
        cfo_reliable: cfo.reliable,
        est_delta_t_s,
    })
}

/// Attempts every channel of the slot; a channel reports a message exactly
/// when its CRC verifies.
pub fn decode_all_channels(rx: &ResourceGrid, grid: &RachGrid, cell_id: u16) -> Vec<DecodeResult> {
    (0..grid.channels_per_slot())
        .map(|c| decode_channel(rx, grid, c, cell_id).expect("channel index in range"))
        .collect()
}

/// A preamble found by [`detect_zc`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZcDetection {
    pub preamble_index: usize,
    pub delay_s: f64,
    /// |R|²/(N·σ̂²) at the peak, in dB.
    pub metric_db: f64,
}

/// Sliding cyclic correlation of one N_ZC-sample window against every pool
/// sequence for lags inside `search_window_s`. The metric normalises the
/// squared correlation by N times the received power per sample, so a noise
/// window yields unit-mean exponential values; peaks above `threshold_db`
/// are reported with their lag as the delay.
pub fn detect_zc(
    signal: &ComplexSignal,
    pool: &[ZcPreamble],
    threshold_db: f64,
    search_window_s: f64,
) -> Vec<ZcDetection> {
    let mut found = Vec::new();
    let Some(first) = pool.first() else {
        return found;
    };
    let n = first.len();
    if signal.len() < n || n == 0 {
        return found;
    }
    let r = &signal.samples[..n];
    let power: f64 = r.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
    if power == 0.0 {
        return found;
    }
    let max_lag = (Float::floor(search_window_s * signal.sample_rate_hz) as usize).min(n - 1);
    let threshold = crate::units::db_to_linear(threshold_db);
    for (idx, pre) in pool.iter().enumerate() {
        let mut best = (0usize, 0.0f64);
        for lag in 0..=max_lag {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &v) in r.iter().enumerate() {
                acc += v * pre.samples[(i + n - lag) % n].conj();
            }
            let metric = acc.norm_sqr() / (n as f64 * power);
            if metric > best.1 {
                best = (lag, metric);
            }
        }
        if best.1 > threshold {
            found.push(ZcDetection {
                preamble_index: idx,
                delay_s: best.0 as f64 / signal.sample_rate_hz,
                metric_db: crate::units::linear_to_db(best.1),
            });
        }
    }
    found
}
