use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("channel bandwidth {channel_bw_hz} Hz is not a whole number of {spacing_hz} Hz subcarriers")]
    IncommensurateBandwidth { channel_bw_hz: f64, spacing_hz: f64 },

    #[error("{num_subcarriers} subcarriers do not split into whole channels of {per_channel} subcarriers")]
    NonIntegerChannelCount {
        num_subcarriers: usize,
        per_channel: usize,
    },

    #[error("hop separation {hop_dq} makes timing ambiguous for a {max_rtt_s} s round trip")]
    AmbiguousHopSeparation { hop_dq: usize, max_rtt_s: f64 },

    #[error("hop partner offset {hop_dq} falls outside a {num_subcarriers}-subcarrier grid")]
    HopPartnerOutsideGrid {
        hop_dq: usize,
        num_subcarriers: usize,
    },

    #[error("{n_ofdm} OFDM symbols is not a positive multiple of {pair_len}")]
    SymbolCount { n_ofdm: usize, pair_len: usize },

    #[error("access id {0} does not fit in 10 bits")]
    AccessIdRange(u16),

    #[error("resource request {0} does not fit in 4 bits")]
    ResourceRequestRange(u8),

    #[error("CRC mismatch")]
    CrcMismatch,

    #[error("{got} resource elements cannot carry the coded message (need {min})")]
    TooFewResourceElements { got: usize, min: usize },

    #[error("symbol count {got} does not match the {expected} data resource elements")]
    SymbolCountMismatch { got: usize, expected: usize },

    #[error("channel {index} out of range for {available} channels")]
    ChannelIndex { index: usize, available: usize },

    #[error("invalid Zadoff-Chu root {root} for length {length}")]
    InvalidRoot { root: usize, length: usize },

    #[error("timing offset {delta_t_s} s exceeds the {cp_s} s cyclic prefix")]
    DelayBeyondCp { delta_t_s: f64, cp_s: f64 },

    #[error("no feasible channel bandwidth on the search grid")]
    NoFeasibleBandwidth,

    #[error("timing estimation needs a nonzero hop separation")]
    NoHopSeparation,
}
