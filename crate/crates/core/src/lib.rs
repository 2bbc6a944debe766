//! Narrowband machine-type-communication random access.
//!
//! The crate is `no_std` (with `alloc`) and covers everything that does not
//! touch the filesystem or threads:
//!
//! - [`types`]: channel classes, radio parameters, the RACH time-frequency grid
//!   and the 24-bit access request message.
//! - [`analytics`]: closed-form collision, rate, effective-bandwidth, link
//!   budget, battery and capacity expressions, plus the RACH configuration
//!   optimizer.
//! - [`phy`]: message coding chain, resource mapping with frequency hopping,
//!   OFDM modulation and the Zadoff-Chu preamble baseline.
//! - [`channel`]: EPA fading, timing/frequency offsets and AWGN.
//! - [`receiver`]: fixed-window demodulation, blind per-channel decoding and the
//!   frequency/timing offset estimators.
//!
//! Disable the default `std` feature to build for bare-metal targets.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod analytics;
pub mod channel;
pub mod dft;
mod error;
pub mod phy;
pub mod receiver;
pub mod rng;
pub mod types;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use types::{
    AccessRequestMessage, ChannelClass, Fading, ImpairmentProfile, RachConfig, RachGrid,
    RadioParams,
};
