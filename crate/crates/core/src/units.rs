//! dB/linear conversions. Everything inside the crate works in linear SI
//! units; these helpers are the only place decibels are converted.

use num_traits::Float;

/// Power ratio in dB to linear.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    Float::powf(10.0, db / 10.0)
}

/// Linear power ratio to dB.
#[inline]
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * Float::log10(lin)
}

/// dBm to watts.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// Watts to dBm.
#[inline]
pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

/// dBm to milliwatts.
#[inline]
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}
