//! Domain types shared by every module.

use core::fmt;
use core::ops::Range;

use alloc::vec::Vec;
use num_traits::Float;

use crate::units::{db_to_linear, dbm_to_mw, dbm_to_watts};
use crate::{Error, Result};

/// Coverage tier, defined by the maximum coupling loss it must close.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelClass {
    Cc1,
    Cc2,
    Cc3,
    Cc4,
}

impl ChannelClass {
    pub const ALL: [ChannelClass; 4] = [Self::Cc1, Self::Cc2, Self::Cc3, Self::Cc4];

    pub fn index(self) -> u8 {
        match self {
            Self::Cc1 => 1,
            Self::Cc2 => 2,
            Self::Cc3 => 3,
            Self::Cc4 => 4,
        }
    }

    pub fn from_index(index: u8) -> Option<Self> {
        match index {
            1 => Some(Self::Cc1),
            2 => Some(Self::Cc2),
            3 => Some(Self::Cc3),
            4 => Some(Self::Cc4),
            _ => None,
        }
    }

    /// Maximum coupling loss in dB.
    pub fn alpha_db(self) -> f64 {
        match self {
            Self::Cc1 => 155.0,
            Self::Cc2 => 150.0,
            Self::Cc3 => 145.0,
            Self::Cc4 => 140.0,
        }
    }

    pub fn from_alpha_db(alpha_db: f64) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| (c.alpha_db() - alpha_db).abs() < 1e-9)
    }

    /// Coupling loss as a linear attenuation factor.
    pub fn alpha_linear(self) -> f64 {
        db_to_linear(self.alpha_db())
    }

    /// Access request transmission interval that closes this class's link on
    /// the 180 kHz, 3 kHz-spacing grid.
    pub fn nominal_tti_s(self) -> f64 {
        match self {
            Self::Cc1 => 0.245,
            Self::Cc2 => 0.098,
            Self::Cc3 => 0.021,
            Self::Cc4 => 0.007,
        }
    }

    /// Deficit-free channel bandwidth and TDM multiplicity for N = 7 on a
    /// 180 kHz band.
    pub fn nominal_channel(self) -> (f64, usize) {
        match self {
            Self::Cc1 => (3e3, 1),
            Self::Cc2 => (9e3, 3),
            Self::Cc3 => (30e3, 12),
            Self::Cc4 => (90e3, 36),
        }
    }
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CC{}", self.index())
    }
}

/// Link budget and battery scalars. Decibel fields are converted with
/// [`crate::units`] at the point of use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Device transmit power P (dBm).
    pub p_ul_dbm: f64,
    /// Implementation deficit β (dB, negative).
    pub beta_db: f64,
    /// Base-station noise figure ζ_UL (dB).
    pub zeta_ul_db: f64,
    /// Device noise figure ζ_DL (dB).
    pub zeta_dl_db: f64,
    /// Thermal noise density N₀ (dBm/Hz).
    pub n0_dbm_hz: f64,
    /// Base-station transmit power P_DL (dBm).
    pub p_dl_dbm: f64,
    /// System bandwidth Π (dB·Hz).
    pub pi_db_hz: f64,
    /// Power amplifier efficiency η.
    pub eta: f64,
    /// Battery voltage (V).
    pub v_batt: f64,
    /// Baseband current I₀ (mA).
    pub i0_ma: f64,
    /// Battery capacity (mAh).
    pub batt_capacity_mah: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            p_ul_dbm: 20.0,
            beta_db: -6.0,
            zeta_ul_db: 5.0,
            zeta_dl_db: 9.0,
            n0_dbm_hz: -174.0,
            p_dl_dbm: 46.0,
            pi_db_hz: 70.0,
            eta: 0.30,
            v_batt: 3.0,
            i0_ma: 150.0,
            batt_capacity_mah: 5000.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: "must lie in (0, 1]",
            });
        }
        if !(self.v_batt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "v_batt",
                reason: "must be positive",
            });
        }
        if !(self.i0_ma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "i0_ma",
                reason: "must be nonnegative",
            });
        }
        if !(self.batt_capacity_mah > 0.0) {
            return Err(Error::InvalidParameter {
                name: "batt_capacity_mah",
                reason: "must be positive",
            });
        }
        Ok(())
    }

    pub fn p_ul_watts(&self) -> f64 {
        dbm_to_watts(self.p_ul_dbm)
    }

    pub fn p_ul_mw(&self) -> f64 {
        dbm_to_mw(self.p_ul_dbm)
    }

    pub fn beta(&self) -> f64 {
        db_to_linear(self.beta_db)
    }

    pub fn zeta_ul(&self) -> f64 {
        db_to_linear(self.zeta_ul_db)
    }

    /// Noise density in W/Hz.
    pub fn n0_w_hz(&self) -> f64 {
        dbm_to_watts(self.n0_dbm_hz)
    }
}

/// Per-class layout parameters fed to [`RachGrid::build`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RachConfig {
    /// Per-channel bandwidth w (Hz).
    pub channel_bw_hz: f64,
    /// TDM multiplicity L.
    pub tdm_multiplicity: usize,
    /// OFDM symbols per TDM slot.
    pub n_ofdm: usize,
    /// Hop separation Δq in subcarriers.
    pub hop_dq: usize,
    /// Symbols per hop group (l).
    pub group_len: usize,
    /// Extended random access CP (s).
    pub cp_rach_s: f64,
    /// Traffic channel CP (s).
    pub cp_traffic_s: f64,
    /// Random access occasion period (s).
    pub rach_period_s: f64,
    /// Largest round trip the cell must absorb (s).
    pub max_rtt_s: f64,
    /// Approximate number of hop-group pairs per reference pair.
    pub reference_spacing: usize,
}

impl Default for RachConfig {
    fn default() -> Self {
        Self {
            channel_bw_hz: 3e3,
            tdm_multiplicity: 1,
            n_ofdm: 64,
            hop_dq: 9,
            group_len: 4,
            cp_rach_s: 35e-6,
            cp_traffic_s: 25e-6,
            rach_period_s: 2.5,
            max_rtt_s: 33.3e-6,
            reference_spacing: 8,
        }
    }
}

impl RachConfig {
    /// Nominal layout for `class` on a band of `total_bw_hz` split into
    /// `num_subcarriers`, with the slot length derived from the class TTI.
    pub fn for_class(class: ChannelClass, total_bw_hz: f64, num_subcarriers: usize) -> Self {
        let (channel_bw_hz, tdm_multiplicity) = class.nominal_channel();
        let mut cfg = Self {
            channel_bw_hz,
            tdm_multiplicity,
            ..Self::default()
        };
        cfg.n_ofdm = cfg.n_ofdm_for_tti(class.nominal_tti_s(), total_bw_hz, num_subcarriers);
        cfg
    }

    /// Symbols that fit in `tti_s`: rounded to the nearest whole symbol, then
    /// down to a multiple of one hop-group pair (at least one pair).
    pub fn n_ofdm_for_tti(&self, tti_s: f64, total_bw_hz: f64, num_subcarriers: usize) -> usize {
        let cp = Float::round(self.cp_rach_s * total_bw_hz) as usize;
        let period = (num_subcarriers + cp) as f64 / total_bw_hz;
        let raw = Float::round(tti_s / period) as usize;
        let pair = 2 * self.group_len.max(1);
        (raw / pair).max(1) * pair
    }
}

/// Validated time-frequency layout of the random access channels.
#[derive(Debug, Clone, PartialEq)]
pub struct RachGrid {
    total_bw_hz: f64,
    num_subcarriers: usize,
    channel_bw_hz: f64,
    subcarriers_per_channel: usize,
    channels_per_slot: usize,
    tdm_multiplicity: usize,
    n_ofdm: usize,
    hop_dq: usize,
    group_len: usize,
    cp_rach_s: f64,
    cp_traffic_s: f64,
    cp_samples: usize,
    rach_period_s: f64,
    max_rtt_s: f64,
    reference_pairs: Vec<usize>,
}

/// Smallest number of data resource elements that carries the 72 coded bits.
pub const MIN_DATA_RES: usize = 36;

impl RachGrid {
    pub fn build(total_bw_hz: f64, num_subcarriers: usize, cfg: &RachConfig) -> Result<Self> {
        if !(total_bw_hz > 0.0) || !total_bw_hz.is_finite() {
            return Err(Error::InvalidParameter {
                name: "total_bw_hz",
                reason: "must be positive and finite",
            });
        }
        if num_subcarriers == 0 {
            return Err(Error::InvalidParameter {
                name: "num_subcarriers",
                reason: "must be positive",
            });
        }
        if cfg.tdm_multiplicity == 0 {
            return Err(Error::InvalidParameter {
                name: "tdm_multiplicity",
                reason: "must be positive",
            });
        }
        if cfg.group_len == 0 {
            return Err(Error::InvalidParameter {
                name: "group_len",
                reason: "must be positive",
            });
        }
        if cfg.reference_spacing == 0 {
            return Err(Error::InvalidParameter {
                name: "reference_spacing",
                reason: "must be positive",
            });
        }
        if !(cfg.cp_rach_s >= 0.0) || !(cfg.max_rtt_s >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "cp_rach_s",
                reason: "durations must be nonnegative",
            });
        }

        let spacing = total_bw_hz / num_subcarriers as f64;
        let ratio = cfg.channel_bw_hz / spacing;
        let per_channel = Float::round(ratio);
        if per_channel < 1.0 || (ratio - per_channel).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::IncommensurateBandwidth {
                channel_bw_hz: cfg.channel_bw_hz,
                spacing_hz: spacing,
            });
        }
        let per_channel = per_channel as usize;
        if !num_subcarriers.is_multiple_of(per_channel) {
            return Err(Error::NonIntegerChannelCount {
                num_subcarriers,
                per_channel,
            });
        }

        let pair_len = 2 * cfg.group_len;
        if cfg.n_ofdm == 0 || !cfg.n_ofdm.is_multiple_of(pair_len) {
            return Err(Error::SymbolCount {
                n_ofdm: cfg.n_ofdm,
                pair_len,
            });
        }
        if cfg.hop_dq >= num_subcarriers {
            return Err(Error::HopPartnerOutsideGrid {
                hop_dq: cfg.hop_dq,
                num_subcarriers,
            });
        }
        // Partner-minus-home phase must stay inside one turn over the round trip.
        if cfg.hop_dq as f64 * spacing * cfg.max_rtt_s >= 1.0 {
            return Err(Error::AmbiguousHopSeparation {
                hop_dq: cfg.hop_dq,
                max_rtt_s: cfg.max_rtt_s,
            });
        }

        let n_pairs = cfg.n_ofdm / pair_len;
        let reference_pairs = reference_pair_positions(n_pairs, cfg.reference_spacing);
        let data_groups = 2 * (n_pairs - reference_pairs.len());
        let data_res = data_groups * per_channel;
        if data_res < MIN_DATA_RES {
            return Err(Error::TooFewResourceElements {
                got: data_res,
                min: MIN_DATA_RES,
            });
        }

        Ok(Self {
            total_bw_hz,
            num_subcarriers,
            channel_bw_hz: cfg.channel_bw_hz,
            subcarriers_per_channel: per_channel,
            channels_per_slot: num_subcarriers / per_channel,
            tdm_multiplicity: cfg.tdm_multiplicity,
            n_ofdm: cfg.n_ofdm,
            hop_dq: cfg.hop_dq,
            group_len: cfg.group_len,
            cp_rach_s: cfg.cp_rach_s,
            cp_traffic_s: cfg.cp_traffic_s,
            cp_samples: Float::round(cfg.cp_rach_s * total_bw_hz) as usize,
            rach_period_s: cfg.rach_period_s,
            max_rtt_s: cfg.max_rtt_s,
            reference_pairs,
        })
    }

    pub fn total_bw_hz(&self) -> f64 {
        self.total_bw_hz
    }
    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }
    pub fn subcarrier_spacing_hz(&self) -> f64 {
        self.total_bw_hz / self.num_subcarriers as f64
    }
    /// Useful OFDM symbol duration T.
    pub fn symbol_duration_s(&self) -> f64 {
        1.0 / self.subcarrier_spacing_hz()
    }
    pub fn channel_bw_hz(&self) -> f64 {
        self.channel_bw_hz
    }
    pub fn subcarriers_per_channel(&self) -> usize {
        self.subcarriers_per_channel
    }
    pub fn channels_per_slot(&self) -> usize {
        self.channels_per_slot
    }
    pub fn tdm_multiplicity(&self) -> usize {
        self.tdm_multiplicity
    }
    pub fn n_rach(&self) -> usize {
        self.tdm_multiplicity * self.channels_per_slot
    }
    pub fn n_ofdm(&self) -> usize {
        self.n_ofdm
    }
    pub fn hop_dq(&self) -> usize {
        self.hop_dq
    }
    pub fn group_len(&self) -> usize {
        self.group_len
    }
    pub fn cp_rach_s(&self) -> f64 {
        self.cp_rach_s
    }
    pub fn cp_traffic_s(&self) -> f64 {
        self.cp_traffic_s
    }
    pub fn rach_period_s(&self) -> f64 {
        self.rach_period_s
    }
    pub fn max_rtt_s(&self) -> f64 {
        self.max_rtt_s
    }
    /// Critically sampled: one sample per subcarrier spacing slot of W.
    pub fn sample_rate_hz(&self) -> f64 {
        self.total_bw_hz
    }
    /// Extended CP rounded to whole samples.
    pub fn cp_samples(&self) -> usize {
        self.cp_samples
    }
    /// CP duration actually realised on the sample grid.
    pub fn cp_effective_s(&self) -> f64 {
        self.cp_samples as f64 / self.total_bw_hz
    }
    /// T + T_CP on the sample grid.
    pub fn symbol_period_s(&self) -> f64 {
        (self.num_subcarriers + self.cp_samples) as f64 / self.total_bw_hz
    }
    pub fn symbol_samples(&self) -> usize {
        self.num_subcarriers + self.cp_samples
    }
    pub fn slot_samples(&self) -> usize {
        self.n_ofdm * self.symbol_samples()
    }
    /// Duration of one TDM slot.
    pub fn tti_s(&self) -> f64 {
        self.n_ofdm as f64 * self.symbol_period_s()
    }
    /// Airtime of a whole occasion (all TDM slots).
    pub fn occasion_s(&self) -> f64 {
        self.tti_s() * self.tdm_multiplicity as f64
    }
    pub fn n_groups(&self) -> usize {
        self.n_ofdm / self.group_len
    }
    pub fn n_pairs(&self) -> usize {
        self.n_groups() / 2
    }
    pub fn timing_estimable(&self) -> bool {
        self.hop_dq > 0
    }
    /// Hop-group pair indices carrying reference symbols.
    pub fn reference_pairs(&self) -> &[usize] {
        &self.reference_pairs
    }
    pub fn is_reference_group(&self, group: usize) -> bool {
        self.reference_pairs.binary_search(&(group / 2)).is_ok()
    }
    /// Groups carrying coded data, in transmission order.
    pub fn data_groups(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_groups()).filter(move |&g| !self.is_reference_group(g))
    }
    pub fn reference_groups(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_groups()).filter(move |&g| self.is_reference_group(g))
    }
    /// Distinct data symbols a channel carries per slot.
    pub fn data_res(&self) -> usize {
        2 * (self.n_pairs() - self.reference_pairs.len()) * self.subcarriers_per_channel
    }
    pub fn reference_res(&self) -> usize {
        2 * self.reference_pairs.len() * self.subcarriers_per_channel
    }
    /// OFDM symbols spanned by `group`.
    pub fn group_symbols(&self, group: usize) -> Range<usize> {
        group * self.group_len..(group + 1) * self.group_len
    }

    /// Subcarrier used by `tone` of slot-local `channel` during `group`.
    /// Even groups sit on the home subcarriers, odd groups on the hop partner.
    pub fn subcarrier(&self, channel: usize, tone: usize, group: usize) -> usize {
        let home = channel * self.subcarriers_per_channel + tone;
        if group % 2 == 1 {
            self.hop_partner(home)
        } else {
            home
        }
    }

    /// Signed separation from subcarrier `k` to its hop partner.
    ///
    /// Subcarriers are swapped pairwise at distance Δq inside consecutive
    /// blocks of 2Δq, so the hop is an involution and every channel hops at
    /// once without overlap. A trailing block shorter than 2Δq swaps at half
    /// its length; an odd leftover subcarrier stays put.
    pub fn hop_offset(&self, k: usize) -> isize {
        let dq = self.hop_dq;
        if dq == 0 {
            return 0;
        }
        let block = 2 * dq;
        let full = (self.num_subcarriers / block) * block;
        let (start, half) = if k < full {
            (k - k % block, dq)
        } else {
            (full, (self.num_subcarriers - full) / 2)
        };
        let pos = k - start;
        if half == 0 || pos >= 2 * half {
            0
        } else if pos < half {
            half as isize
        } else {
            -(half as isize)
        }
    }

    pub fn hop_partner(&self, k: usize) -> usize {
        (k as isize + self.hop_offset(k)) as usize
    }

    pub fn check_channel(&self, channel: usize) -> Result<()> {
        if channel >= self.channels_per_slot {
            return Err(Error::ChannelIndex {
                index: channel,
                available: self.channels_per_slot,
            });
        }
        Ok(())
    }

    /// Splits a global RACH index (0..N_RACH) into (slot, channel).
    pub fn split_index(&self, index: usize) -> (usize, usize) {
        (index / self.channels_per_slot, index % self.channels_per_slot)
    }
}

fn reference_pair_positions(n_pairs: usize, spacing: usize) -> Vec<usize> {
    let count = ((n_pairs + spacing / 2) / spacing).max(1).min(n_pairs);
    (0..count)
        .map(|i| ((2 * i + 1) * n_pairs) / (2 * count))
        .collect()
}

/// CRC-10 generator x¹⁰+x⁹+x⁵+x⁴+x+1, without the leading term.
pub const CRC10_POLY: u16 = 0x233;

/// CRC-10 over the low `nbits` of `bits`, most significant bit first, zero
/// initial register and no output inversion.
pub fn crc10(bits: u32, nbits: u32) -> u16 {
    let mut reg: u16 = 0;
    for i in (0..nbits).rev() {
        let feedback = ((reg >> 9) as u32 ^ (bits >> i)) & 1;
        reg = (reg << 1) & 0x3ff;
        if feedback == 1 {
            reg ^= CRC10_POLY;
        }
    }
    reg
}

/// Number of access IDs a device picks from.
pub const N_ACCESS_IDS: usize = 1 << 10;
/// Payload plus CRC.
pub const MESSAGE_BITS: usize = 24;
const PAYLOAD_BITS: u32 = 14;

/// The 24-bit access request: 10-bit access ID, 4-bit resource request,
/// 10-bit CRC over the first 14 bits. Bit 23 is sent first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AccessRequestMessage {
    access_id: u16,
    resource_request: u8,
}

impl AccessRequestMessage {
    pub fn new(access_id: u16, resource_request: u8) -> Result<Self> {
        if access_id as usize >= N_ACCESS_IDS {
            return Err(Error::AccessIdRange(access_id));
        }
        if resource_request >= 16 {
            return Err(Error::ResourceRequestRange(resource_request));
        }
        Ok(Self {
            access_id,
            resource_request,
        })
    }

    pub fn access_id(&self) -> u16 {
        self.access_id
    }

    pub fn resource_request(&self) -> u8 {
        self.resource_request
    }

    fn payload(&self) -> u32 {
        ((self.access_id as u32) << 4) | self.resource_request as u32
    }

    pub fn crc(&self) -> u16 {
        crc10(self.payload(), PAYLOAD_BITS)
    }

    /// Packed word, right-aligned in a `u32`.
    pub fn to_word(&self) -> u32 {
        (self.payload() << 10) | self.crc() as u32
    }

    /// Parses a packed word, rejecting it unless the CRC verifies.
    pub fn from_word(word: u32) -> Result<Self> {
        if word >> MESSAGE_BITS != 0 {
            return Err(Error::InvalidParameter {
                name: "word",
                reason: "more than 24 bits set",
            });
        }
        let payload = word >> 10;
        if crc10(payload, PAYLOAD_BITS) as u32 != word & 0x3ff {
            return Err(Error::CrcMismatch);
        }
        Self::new((payload >> 4) as u16, (payload & 0xf) as u8)
    }

    pub fn to_bits(&self) -> [u8; MESSAGE_BITS] {
        let word = self.to_word();
        let mut out = [0u8; MESSAGE_BITS];
        for (i, b) in out.iter_mut().enumerate() {
            *b = ((word >> (MESSAGE_BITS - 1 - i)) & 1) as u8;
        }
        out
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() != MESSAGE_BITS {
            return Err(Error::InvalidParameter {
                name: "bits",
                reason: "message must be exactly 24 bits",
            });
        }
        let word = bits
            .iter()
            .fold(0u32, |acc, &b| (acc << 1) | (b & 1) as u32);
        Self::from_word(word)
    }
}

/// Small-scale fading model applied to a device's signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fading {
    /// Unit gain, no multipath.
    Flat,
    /// Extended Pedestrian A taps with Jakes Doppler at `doppler_hz`.
    Epa { doppler_hz: f64 },
}

/// Per-device impairments at the base-station receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpairmentProfile {
    /// Round-trip timing offset Δt (s).
    pub delta_t_s: f64,
    /// Residual carrier offset Δf (Hz).
    pub delta_f_hz: f64,
    pub fading: Fading,
    /// Average per-RE receive SNR Γ (dB).
    pub snr_db: f64,
}

impl ImpairmentProfile {
    /// The extended CP only protects decoding for Δt within it.
    pub fn check_decodable(&self, cp_s: f64) -> Result<()> {
        if !(self.delta_t_s >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "delta_t_s",
                reason: "must be nonnegative",
            });
        }
        if self.delta_t_s > cp_s {
            return Err(Error::DelayBeyondCp {
                delta_t_s: self.delta_t_s,
                cp_s,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_for(class: ChannelClass) -> Result<RachGrid> {
        RachGrid::build(180e3, 60, &RachConfig::for_class(class, 180e3, 60))
    }

    #[test]
    fn class_alpha_bijection() {
        for c in ChannelClass::ALL {
            assert_eq!(ChannelClass::from_index(c.index()), Some(c));
            assert_eq!(ChannelClass::from_alpha_db(c.alpha_db()), Some(c));
        }
        assert_eq!(ChannelClass::from_alpha_db(141.0), None);
        assert_eq!(ChannelClass::from_index(0), None);
    }

    #[test]
    fn radio_defaults_validate() {
        RadioParams::default().validate().unwrap();
        let bad = RadioParams {
            eta: 0.0,
            ..RadioParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = RadioParams {
            eta: 1.2,
            ..RadioParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = RadioParams {
            v_batt: 0.0,
            ..RadioParams::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn cc1_grid_has_sixty_channels() {
        let g = grid_for(ChannelClass::Cc1).unwrap();
        assert_eq!(g.n_rach(), 60);
        assert_eq!(g.subcarrier_spacing_hz(), 3e3);
        assert_eq!(g.subcarriers_per_channel(), 1);
    }

    #[test]
    fn cc4_grid_has_seventy_two_channels() {
        let g = grid_for(ChannelClass::Cc4).unwrap();
        assert_eq!(g.n_rach(), 72);
        assert_eq!(g.channels_per_slot(), 2);
        assert_eq!(g.tdm_multiplicity(), 36);
    }

    #[test]
    fn sixty_one_subcarriers_is_incommensurate() {
        let cfg = RachConfig::for_class(ChannelClass::Cc1, 180e3, 60);
        assert!(matches!(
            RachGrid::build(180e3, 61, &cfg),
            Err(Error::IncommensurateBandwidth { .. })
        ));
    }

    #[test]
    fn every_nominal_class_builds() {
        for c in ChannelClass::ALL {
            let g = grid_for(c).unwrap();
            assert_eq!(g.n_ofdm() % (2 * g.group_len()), 0);
            assert!(g.data_res() >= MIN_DATA_RES);
        }
    }

    #[test]
    fn nominal_symbol_counts() {
        let counts: Vec<usize> = ChannelClass::ALL
            .iter()
            .map(|&c| grid_for(c).unwrap().n_ofdm())
            .collect();
        // 366.7 us symbols: 0.245 s -> 668 -> 664, 0.098 s -> 267 -> 264, ...
        assert_eq!(counts, [664, 264, 56, 16]);
    }

    #[test]
    fn rejects_non_divisible_channel() {
        let cfg = RachConfig {
            channel_bw_hz: 21e3,
            ..RachConfig::default()
        };
        assert!(matches!(
            RachGrid::build(180e3, 60, &cfg),
            Err(Error::NonIntegerChannelCount { .. })
        ));
    }

    #[test]
    fn rejects_ambiguous_hop() {
        let cfg = RachConfig {
            hop_dq: 10,
            max_rtt_s: 35e-6,
            ..RachConfig::default()
        };
        assert!(matches!(
            RachGrid::build(180e3, 60, &cfg),
            Err(Error::AmbiguousHopSeparation { .. })
        ));
        let cfg = RachConfig {
            hop_dq: 60,
            ..RachConfig::default()
        };
        assert!(matches!(
            RachGrid::build(180e3, 60, &cfg),
            Err(Error::HopPartnerOutsideGrid { .. })
        ));
    }

    #[test]
    fn rejects_odd_symbol_count() {
        let cfg = RachConfig {
            n_ofdm: 60,
            ..RachConfig::default()
        };
        assert!(matches!(
            RachGrid::build(180e3, 60, &cfg),
            Err(Error::SymbolCount { .. })
        ));
    }

    #[test]
    fn hopping_is_a_permutation() {
        let cfg = RachConfig {
            channel_bw_hz: 9e3,
            ..RachConfig::default()
        };
        let g = RachGrid::build(180e3, 60, &cfg).unwrap();
        for group in 0..2 {
            let mut seen = [false; 60];
            for ch in 0..g.channels_per_slot() {
                for tone in 0..g.subcarriers_per_channel() {
                    let k = g.subcarrier(ch, tone, group);
                    assert!(!seen[k]);
                    seen[k] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn hop_is_an_involution_within_reach() {
        for (s, dq) in [(60, 9), (60, 1), (360, 9), (60, 25), (61, 9), (12, 0)] {
            let cfg = RachConfig {
                hop_dq: dq,
                max_rtt_s: 0.0,
                n_ofdm: 320,
                ..RachConfig::default()
            };
            let g = RachGrid::build(3e3 * s as f64, s, &cfg).unwrap();
            for k in 0..s {
                let d = g.hop_offset(k);
                assert!(d.unsigned_abs() <= dq);
                assert_eq!(g.hop_partner(g.hop_partner(k)), k);
            }
        }
        let cfg = RachConfig {
            n_ofdm: 320,
            ..RachConfig::default()
        };
        let g = RachGrid::build(180e3, 60, &cfg).unwrap();
        assert_eq!(g.hop_offset(0), 9);
        assert_eq!(g.hop_offset(17), -9);
        assert_eq!(g.hop_offset(53), -9);
        assert_eq!(g.hop_offset(54), 3);
        assert_eq!(g.hop_offset(59), -3);
    }

    #[test]
    fn reference_pairs_spread_evenly() {
        assert_eq!(reference_pair_positions(83, 8), [4, 12, 20, 29, 37, 45, 53, 62, 70, 78]);
        assert_eq!(reference_pair_positions(2, 8), [1]);
        assert_eq!(reference_pair_positions(7, 8), [3]);
        assert_eq!(reference_pair_positions(33, 8), [4, 12, 20, 28]);
    }

    #[test]
    fn crc10_check_value() {
        // CRC-10/ATM check over ASCII "123456789" is 0x199.
        let mut reg = 0u16;
        for &byte in b"123456789" {
            for i in (0..8).rev() {
                let fb = ((reg >> 9) ^ (byte as u16 >> i)) & 1;
                reg = (reg << 1) & 0x3ff;
                if fb == 1 {
                    reg ^= CRC10_POLY;
                }
            }
        }
        assert_eq!(reg, 0x199);
        // The bit-serial helper agrees on a 24-bit prefix.
        assert_eq!(crc10(0x313233, 24), {
            let mut r = 0u16;
            for &byte in b"123" {
                for i in (0..8).rev() {
                    let fb = ((r >> 9) ^ (byte as u16 >> i)) & 1;
                    r = (r << 1) & 0x3ff;
                    if fb == 1 {
                        r ^= CRC10_POLY;
                    }
                }
            }
            r
        });
    }

    #[test]
    fn message_round_trips_all_payloads() {
        for id in 0..1024u16 {
            for rr in 0..16u8 {
                let m = AccessRequestMessage::new(id, rr).unwrap();
                assert!(m.to_word() < 1 << 24);
                assert_eq!(AccessRequestMessage::from_word(m.to_word()).unwrap(), m);
                assert_eq!(AccessRequestMessage::from_bits(&m.to_bits()).unwrap(), m);
            }
        }
    }

    #[test]
    fn message_rejects_corruption_and_range() {
        let m = AccessRequestMessage::new(513, 9).unwrap();
        for bit in 0..24 {
            assert_eq!(
                AccessRequestMessage::from_word(m.to_word() ^ (1 << bit)),
                Err(Error::CrcMismatch)
            );
        }
        assert!(AccessRequestMessage::new(1024, 0).is_err());
        assert!(AccessRequestMessage::new(0, 16).is_err());
        assert!(AccessRequestMessage::from_bits(&[0; 23]).is_err());
    }

    #[test]
    fn decodability_needs_delay_within_cp() {
        let p = ImpairmentProfile {
            delta_t_s: 30e-6,
            delta_f_hz: 0.0,
            fading: Fading::Flat,
            snr_db: 0.0,
        };
        assert!(p.check_decodable(35e-6).is_ok());
        let p = ImpairmentProfile {
            delta_t_s: 36e-6,
            ..p
        };
        assert!(matches!(p.check_decodable(35e-6), Err(Error::DelayBeyondCp { .. })));
    }
}
