//! Closed-form link, contention, battery and capacity calculations.
//!
//! Everything here is a pure function of its arguments. Rates follow the
//! Shannon form r = w·log₂(1 + g/w), where g = βP/(αζN₀) is the received
//! power to noise-density ratio in Hz.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use num_traits::Float;

use crate::types::{ChannelClass, RadioParams};
use crate::units::{dbm_to_mw, linear_to_db};
use crate::{Error, Result};

/// Subcarrier spacing used as the optimizer's bandwidth step.
pub const DEFAULT_SPACING_HZ: f64 = 3e3;
/// Grid for the effective-bandwidth search.
pub const DEFAULT_EFFECTIVE_GRID_HZ: f64 = 1e3;
/// Relative time penalty defining the effective bandwidth.
pub const DEFAULT_THRESHOLD: f64 = 0.10;
/// Access ID pool size.
pub const N_ID: usize = 1 << 10;

/// Current drawn while transmitting, in mA.
pub fn tx_current_ma(radio: &RadioParams) -> f64 {
    radio.i0_ma + dbm_to_mw(radio.p_ul_dbm) / radio.eta / radio.v_batt
}

/// Charge spent on one access, in mAh.
pub fn battery_per_access_mah(t_tx_s: f64, t_rx_s: f64, i_tx_ma: f64, i_rx_ma: f64) -> f64 {
    (t_tx_s * i_tx_ma + t_rx_s * i_rx_ma) / 3600.0
}

/// Probability another of `n_devices − 1` contenders picks the tagged pool entry.
fn pick_collision(pool: f64, n_devices: usize) -> f64 {
    if n_devices <= 1 {
        return 0.0;
    }
    1.0 - Float::powi(1.0 - 1.0 / pool, (n_devices - 1) as i32)
}

pub fn p_channel_collision(n_rach: usize, n_devices: usize) -> f64 {
    pick_collision(n_rach as f64, n_devices)
}

pub fn p_id_collision(n_id: usize, n_devices: usize) -> f64 {
    pick_collision(n_id as f64, n_devices)
}

pub fn p_total_collision(p_ch: f64, p_id: f64) -> f64 {
    1.0 - (1.0 - p_ch) * (1.0 - p_id)
}

/// g = βP/(αζN₀) in Hz.
pub fn link_ratio_hz(class: ChannelClass, radio: &RadioParams) -> f64 {
    radio.beta() * radio.p_ul_watts() / (class.alpha_linear() * radio.zeta_ul() * radio.n0_w_hz())
}

pub fn shannon_rate_bps(w_hz: f64, class: ChannelClass, radio: &RadioParams) -> f64 {
    let g = link_ratio_hz(class, radio);
    w_hz * Float::ln_1p(g / w_hz) / LN_2
}

pub fn tx_time_s(w_hz: f64, class: ChannelClass, msg_bits: usize, radio: &RadioParams) -> f64 {
    msg_bits as f64 / shannon_rate_bps(w_hz, class, radio)
}

/// Transmission time with unlimited bandwidth.
pub fn tx_time_floor_s(class: ChannelClass, msg_bits: usize, radio: &RadioParams) -> f64 {
    msg_bits as f64 * LN_2 / link_ratio_hz(class, radio)
}

/// τ(x)/τ(∞) − 1 written in terms of x = g/w.
fn excess_from_ratio(x: f64) -> f64 {
    if x < 1e-8 {
        // x/ln(1+x) − 1 = x/2 − x²/12 + …
        return x / 2.0 - x * x / 12.0;
    }
    x / Float::ln_1p(x) - 1.0
}

/// Relative excess transmission time over the infinite-bandwidth floor.
pub fn delta_tau(w_hz: f64, class: ChannelClass, radio: &RadioParams) -> f64 {
    excess_from_ratio(link_ratio_hz(class, radio) / w_hz)
}

/// Bandwidth at which the excess time equals `threshold` exactly.
pub fn effective_bandwidth_exact_hz(
    class: ChannelClass,
    radio: &RadioParams,
    threshold: f64,
) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidParameter {
            name: "threshold",
            reason: "must be positive",
        });
    }
    if threshold.is_infinite() {
        return Ok(0.0);
    }
    // excess_from_ratio is increasing in x; bracket then bisect.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while excess_from_ratio(hi) < threshold {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess_from_ratio(mid) < threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(link_ratio_hz(class, radio) / (0.5 * (lo + hi)))
}

/// Effective bandwidth w†: the exact crossing, floored onto multiples of
/// `grid_hz` (never below one grid step).
pub fn effective_bandwidth_hz(
    class: ChannelClass,
    radio: &RadioParams,
    threshold: f64,
    grid_hz: f64,
) -> Result<f64> {
    if !(grid_hz > 0.0) {
        return Err(Error::InvalidParameter {
            name: "grid_hz",
            reason: "must be positive",
        });
    }
    let exact = effective_bandwidth_exact_hz(class, radio, threshold)?;
    // Tolerate representation error right at a grid point.
    let steps = Float::floor(exact / grid_hz * (1.0 + 1e-12));
    Ok(steps.max(1.0) * grid_hz)
}

/// Collision probability with `tdm_multiplicity` time slots of W/w channels.
pub fn p_collision_tdm(w_hz: f64, total_bw_hz: f64, n_devices: usize, tdm_multiplicity: usize) -> f64 {
    pick_collision(tdm_multiplicity as f64 * total_bw_hz / w_hz, n_devices)
}

/// Expected time including retransmissions after collisions; +∞ when every
/// attempt collides.
pub fn contended_tx_time_s(
    w_hz: f64,
    class: ChannelClass,
    n_devices: usize,
    total_bw_hz: f64,
    tdm_multiplicity: usize,
    msg_bits: usize,
    radio: &RadioParams,
) -> f64 {
    let p_c = p_collision_tdm(w_hz, total_bw_hz, n_devices, tdm_multiplicity);
    if p_c >= 1.0 {
        return f64::INFINITY;
    }
    tx_time_s(w_hz, class, msg_bits, radio) / (1.0 - p_c)
}

/// Mean time to a successful access when each attempt of length `tti_s`
/// fails by collision with `p_c` and by decoding error with `p_e`.
pub fn mean_tx_time_s(tti_s: f64, p_c: f64, p_e: f64) -> f64 {
    tti_s / ((1.0 - p_c) * (1.0 - p_e))
}

/// Bandwidth-time product spent on one access.
pub fn resources_hz_s(bandwidth_hz: f64, time_s: f64) -> f64 {
    bandwidth_hz * time_s
}

/// Search settings for [`optimize_config_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchGrid {
    /// Step of candidate channel bandwidths.
    pub spacing_hz: f64,
    /// Threshold defining w†.
    pub threshold: f64,
    /// Grid for w†.
    pub effective_grid_hz: f64,
    pub msg_bits: usize,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            spacing_hz: DEFAULT_SPACING_HZ,
            threshold: DEFAULT_THRESHOLD,
            effective_grid_hz: DEFAULT_EFFECTIVE_GRID_HZ,
            msg_bits: crate::types::MESSAGE_BITS,
        }
    }
}

/// Optimal channel bandwidth for one class and TDM multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigSolution {
    pub channel_class: ChannelClass,
    pub w_opt_hz: f64,
    pub tdm_multiplicity: usize,
    pub n_rach: usize,
    /// Contended time relative to the time at w†, minus one.
    pub delta_tau_c: f64,
    pub w_effective_hz: f64,
}

/// One candidate of the optimizer sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyPoint {
    pub w_hz: f64,
    pub n_rach: usize,
    pub delta_tau_c: f64,
}

/// Contended time penalty relative to τ(w_ref).
#[allow(clippy::too_many_arguments)]
pub fn contended_penalty(
    w_hz: f64,
    w_ref_hz: f64,
    class: ChannelClass,
    total_bw_hz: f64,
    n_devices: usize,
    tdm_multiplicity: usize,
    radio: &RadioParams,
) -> f64 {
    let p_c = p_collision_tdm(w_hz, total_bw_hz, n_devices, tdm_multiplicity);
    if p_c >= 1.0 {
        return f64::INFINITY;
    }
    // τ(w)/τ(w_ref) = r(w_ref)/r(w); message size cancels.
    shannon_rate_bps(w_ref_hz, class, radio) / shannon_rate_bps(w_hz, class, radio) / (1.0 - p_c) - 1.0
}

/// Every feasible candidate: multiples of the spacing not above w† that split
/// W into a whole number of channels.
pub fn penalty_sweep(
    class: ChannelClass,
    total_bw_hz: f64,
    n_devices: usize,
    tdm_multiplicity: usize,
    radio: &RadioParams,
    search: &SearchGrid,
) -> Result<(f64, Vec<PenaltyPoint>)> {
    if tdm_multiplicity == 0 || n_devices == 0 {
        return Err(Error::InvalidParameter {
            name: "tdm_multiplicity",
            reason: "multiplicity and device count must be positive",
        });
    }
    if !(search.spacing_hz > 0.0) || !(total_bw_hz > 0.0) {
        return Err(Error::InvalidParameter {
            name: "spacing_hz",
            reason: "must be positive",
        });
    }
    let w_eff = effective_bandwidth_hz(class, radio, search.threshold, search.effective_grid_hz)?;
    let total_steps = Float::round(total_bw_hz / search.spacing_hz) as usize;
    let mut points = Vec::new();
    let mut k = 1;
    loop {
        let w = k as f64 * search.spacing_hz;
        if w > w_eff * (1.0 + 1e-12) || k > total_steps {
            break;
        }
        if total_steps.is_multiple_of(k) {
            let per_slot = total_steps / k;
            points.push(PenaltyPoint {
                w_hz: w,
                n_rach: per_slot * tdm_multiplicity,
                delta_tau_c: contended_penalty(
                    w,
                    w_eff,
                    class,
                    total_bw_hz,
                    n_devices,
                    tdm_multiplicity,
                    radio,
                ),
            });
        }
        k += 1;
    }
    Ok((w_eff, points))
}

pub fn optimize_config(
    class: ChannelClass,
    total_bw_hz: f64,
    n_devices: usize,
    tdm_multiplicity: usize,
    radio: &RadioParams,
) -> Result<ConfigSolution> {
    optimize_config_with(
        class,
        total_bw_hz,
        n_devices,
        tdm_multiplicity,
        radio,
        &SearchGrid::default(),
    )
}

/// Arg-min of the contended penalty; ties go to the smallest w.
pub fn optimize_config_with(
    class: ChannelClass,
    total_bw_hz: f64,
    n_devices: usize,
    tdm_multiplicity: usize,
    radio: &RadioParams,
    search: &SearchGrid,
) -> Result<ConfigSolution> {
    let (w_eff, points) = penalty_sweep(class, total_bw_hz, n_devices, tdm_multiplicity, radio, search)?;
    let best = points
        .iter()
        .fold(None::<&PenaltyPoint>, |best, p| match best {
            Some(b) if b.delta_tau_c <= p.delta_tau_c => Some(b),
            _ => Some(p),
        })
        .ok_or(Error::NoFeasibleBandwidth)?;
    Ok(ConfigSolution {
        channel_class: class,
        w_opt_hz: best.w_hz,
        tdm_multiplicity,
        n_rach: best.n_rach,
        delta_tau_c: best.delta_tau_c,
        w_effective_hz: w_eff,
    })
}

/// Largest L tried before giving up.
pub const MAX_TDM_MULTIPLICITY: usize = 4096;

/// Smallest L whose optimum sits at the widest feasible bandwidth (the one
/// closest to w†) with a penalty no greater than `penalty`.
pub fn required_tdm_multiplicity(
    class: ChannelClass,
    total_bw_hz: f64,
    n_devices: usize,
    penalty: f64,
    radio: &RadioParams,
) -> Result<usize> {
    let search = SearchGrid::default();
    for l in 1..=MAX_TDM_MULTIPLICITY {
        let (_, points) = penalty_sweep(class, total_bw_hz, n_devices, l, radio, &search)?;
        let widest = points.last().ok_or(Error::NoFeasibleBandwidth)?.w_hz;
        let sol = optimize_config_with(class, total_bw_hz, n_devices, l, radio, &search)?;
        if sol.w_opt_hz == widest && sol.delta_tau_c <= penalty {
            return Ok(l);
        }
    }
    Err(Error::NoFeasibleBandwidth)
}

/// Uplink per-RE SNR in dB for a channel of width `w_hz`.
pub fn uplink_snr_db(class: ChannelClass, w_hz: f64, radio: &RadioParams) -> f64 {
    radio.p_ul_dbm - class.alpha_db() - (linear_to_db(w_hz) + radio.n0_dbm_hz + radio.zeta_ul_db)
}

/// Downlink SNR in dB; the base station spreads its power over the system
/// bandwidth, so the result does not depend on w.
pub fn downlink_snr_db(class: ChannelClass, radio: &RadioParams) -> f64 {
    (radio.p_dl_dbm - radio.pi_db_hz) - class.alpha_db() - radio.n0_dbm_hz - radio.zeta_dl_db
}

/// Fraction of air time lost to the cyclic prefix.
pub fn cp_overhead(cp_s: f64, symbol_s: f64, duty_cycle: f64) -> f64 {
    if cp_s == 0.0 {
        return 0.0;
    }
    duty_cycle * cp_s / (cp_s + symbol_s)
}

/// Devices served over a wake-up period of `wakeup_period_min` minutes.
pub fn rach_capacity(period_s: f64, n_per_occasion: usize, wakeup_period_min: u64) -> u64 {
    let occasions = Float::floor(60.0 / period_s * (1.0 + 1e-12)) as u64;
    occasions * n_per_occasion as u64 * wakeup_period_min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use approx::assert_relative_eq;
    use rand::Rng;

    const CC: [ChannelClass; 4] = ChannelClass::ALL;

    fn radio() -> RadioParams {
        RadioParams::default()
    }

    /// dB → linear evaluated through exp with the constant ln(10)/10 written
    /// out, independent of the units helpers.
    fn g_oracle(alpha_db: f64) -> f64 {
        let db = 20.0 - 6.0 - alpha_db - 5.0 + 174.0;
        (db * 0.230_258_509_299_404_57).exp()
    }

    fn mc_collision(pool: usize, n: usize, trials: usize, seed: u64) -> (f64, f64) {
        let mut rng = rng_from_seed(seed);
        let mut hits = 0usize;
        for _ in 0..trials {
            let mine = rng.random_range(0..pool);
            if (1..n).any(|_| rng.random_range(0..pool) == mine) {
                hits += 1;
            }
        }
        let p = hits as f64 / trials as f64;
        (p, (p * (1.0 - p) / trials as f64).sqrt())
    }

    #[test]
    fn tx_current() {
        assert_relative_eq!(tx_current_ma(&radio()), 150.0 + 100.0 / 0.3 / 3.0, epsilon = 1e-9);
        assert!((tx_current_ma(&radio()) - 260.0).abs() < 2.0);
        let zero = RadioParams {
            p_ul_dbm: f64::NEG_INFINITY,
            ..radio()
        };
        assert_eq!(tx_current_ma(&zero), 150.0);
        let unit = RadioParams {
            p_ul_dbm: 0.0,
            eta: 1.0,
            v_batt: 1.0,
            ..radio()
        };
        assert_relative_eq!(tx_current_ma(&unit), 151.0, epsilon = 1e-12);
    }

    #[test]
    fn battery_examples() {
        assert!((battery_per_access_mah(0.27, 0.0, 260.0, 0.0) - 0.020).abs() < 0.001);
        assert!((battery_per_access_mah(1.06, 2.138, 260.0, 150.0) - 0.166).abs() < 0.001);
        assert_eq!(battery_per_access_mah(0.0, 0.0, 260.0, 150.0), 0.0);
    }

    #[test]
    fn channel_collision_matches_draws() {
        let p = p_channel_collision(60, 7);
        assert!((p - 0.0957).abs() < 5e-4);
        let (mc, se) = mc_collision(60, 7, 1_000_000, 11);
        assert!((mc - p).abs() < 3.0 * se, "{mc} vs {p}");
        assert_eq!(p_channel_collision(17, 1), 0.0);
        assert_eq!(p_channel_collision(1, 2), 1.0);
    }

    #[test]
    fn id_collision_matches_draws() {
        let p = p_id_collision(N_ID, 7);
        assert!((p - 0.00585).abs() < 5e-6);
        let (mc, se) = mc_collision(N_ID, 7, 1_000_000, 12);
        assert!((mc - p).abs() < 3.0 * se, "{mc} vs {p}");
        assert_eq!(p_id_collision(N_ID, 1), 0.0);
        assert_eq!(p_id_collision(1, 2), 1.0);
    }

    #[test]
    fn total_collision() {
        assert_eq!(p_total_collision(0.0, 0.0), 0.0);
        assert_relative_eq!(
            p_total_collision(0.0957, 0.00585),
            0.0957 + 0.00585 - 0.0957 * 0.00585,
            epsilon = 1e-15
        );
        assert!((p_total_collision(0.0957, 0.00585) - 0.1010).abs() < 1e-4);
        assert_eq!(p_total_collision(1.0, 0.3), 1.0);
    }

    #[test]
    fn link_ratio_against_oracle() {
        for c in CC {
            assert_relative_eq!(link_ratio_hz(c, &radio()), g_oracle(c.alpha_db()), max_relative = 1e-12);
        }
        assert!((link_ratio_hz(ChannelClass::Cc1, &radio()) - 630.6).abs() < 0.5);
    }

    #[test]
    fn rate_examples() {
        let g = g_oracle(155.0);
        let r = shannon_rate_bps(3e3, ChannelClass::Cc1, &radio());
        assert_relative_eq!(r, 3e3 * (1.0 + g / 3e3).log2(), max_relative = 1e-12);
        assert!((r - 826.0).abs() < 1.0);
        let far = shannon_rate_bps(1e12, ChannelClass::Cc1, &radio());
        assert!((far - g / LN_2).abs() < 1e-3);
        assert!((g / LN_2 - 909.8).abs() < 0.5);
        let r_far = RadioParams {
            p_ul_dbm: -1000.0,
            ..radio()
        };
        assert!(shannon_rate_bps(3e3, ChannelClass::Cc1, &r_far) < 1e-90);
    }

    #[test]
    fn time_examples() {
        let t = tx_time_s(3e3, ChannelClass::Cc1, 24, &radio());
        assert!((t - 24.0 / 826.0).abs() < 1e-4);
        let floor = tx_time_floor_s(ChannelClass::Cc1, 24, &radio());
        assert_relative_eq!(floor, 24.0 * LN_2 / g_oracle(155.0), max_relative = 1e-12);
        assert!((floor - 0.0264).abs() < 1e-4);
        assert!((t / floor - 1.0 - 0.10).abs() < 0.005);
    }

    #[test]
    fn delta_tau_examples() {
        assert!((delta_tau(94e3, ChannelClass::Cc4, &radio()) - 0.10).abs() < 0.005);
        assert!((delta_tau(30e3, ChannelClass::Cc3, &radio()) - 0.10).abs() < 0.005);
        assert!(delta_tau(1e15, ChannelClass::Cc1, &radio()) < 1e-9);
        // Independent of the message length.
        let a = tx_time_s(5e3, ChannelClass::Cc2, 24, &radio()) / tx_time_floor_s(ChannelClass::Cc2, 24, &radio());
        let b = tx_time_s(5e3, ChannelClass::Cc2, 1000, &radio()) / tx_time_floor_s(ChannelClass::Cc2, 1000, &radio());
        assert_relative_eq!(a, b, max_relative = 1e-12);
        assert_relative_eq!(a - 1.0, delta_tau(5e3, ChannelClass::Cc2, &radio()), max_relative = 1e-10);
    }

    #[test]
    fn effective_bandwidths() {
        let w: Vec<f64> = CC
            .iter()
            .map(|&c| effective_bandwidth_hz(c, &radio(), 0.10, 1e3).unwrap())
            .collect();
        assert_eq!(w, [3e3, 9e3, 30e3, 96e3]);
        let cc1_coarse = effective_bandwidth_hz(ChannelClass::Cc1, &radio(), 0.10, 3e3).unwrap();
        assert_eq!(cc1_coarse, 3e3);
        assert_eq!(
            effective_bandwidth_hz(ChannelClass::Cc2, &radio(), f64::INFINITY, 1e3).unwrap(),
            1e3
        );
        assert!(effective_bandwidth_hz(ChannelClass::Cc2, &radio(), 0.0, 1e3).is_err());
    }

    #[test]
    fn effective_bandwidth_fine_grid_against_bisection() {
        // Bisection on Δτ(w) itself rather than on the x = g/w form.
        let (mut lo, mut hi) = (1.0, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if delta_tau(mid, ChannelClass::Cc1, &radio()) > 0.10 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let w = effective_bandwidth_hz(ChannelClass::Cc1, &radio(), 0.10, 500.0).unwrap();
        assert!((w - hi).abs() <= 500.0);
        assert!((w - 3e3).abs() <= 500.0);
        assert_relative_eq!(
            effective_bandwidth_exact_hz(ChannelClass::Cc1, &radio(), 0.10).unwrap(),
            hi,
            max_relative = 1e-9
        );
    }

    #[test]
    fn tdm_collision() {
        assert_relative_eq!(p_collision_tdm(3e3, 180e3, 7, 1), p_channel_collision(60, 7), epsilon = 1e-15);
        assert_eq!(p_collision_tdm(180e3, 180e3, 2, 1), 1.0);
        assert_relative_eq!(
            p_collision_tdm(9e3, 180e3, 7, 3),
            1.0 - (1.0 - 1.0 / 60.0f64).powi(6),
            epsilon = 1e-12
        );
        assert!((p_collision_tdm(9e3, 180e3, 7, 3) - 0.0957).abs() < 5e-4);
    }

    #[test]
    fn contended_time() {
        let r = radio();
        let c = ChannelClass::Cc1;
        assert_eq!(contended_tx_time_s(3e3, c, 1, 180e3, 1, 24, &r), tx_time_s(3e3, c, 24, &r));
        let t = contended_tx_time_s(3e3, c, 7, 180e3, 1, 24, &r);
        // Geometric series oracle.
        let p = p_collision_tdm(3e3, 180e3, 7, 1);
        let series: f64 = (0..1000).map(|k| p.powi(k)).sum::<f64>() * tx_time_s(3e3, c, 24, &r);
        assert_relative_eq!(t, series, max_relative = 1e-9);
        assert!((t - 0.0321).abs() < 2e-4);
        assert!(contended_tx_time_s(180e3, c, 2, 180e3, 1, 24, &r).is_infinite());
    }

    #[test]
    fn optimizer_table_examples() {
        let r = radio();
        let s = optimize_config(ChannelClass::Cc4, 180e3, 7, 1, &r).unwrap();
        assert_eq!((s.w_opt_hz, s.n_rach), (12e3, 15));
        assert!((s.delta_tau_c - 1.334).abs() < 0.002);
        assert!(s.w_opt_hz <= s.w_effective_hz);
        let s = optimize_config(ChannelClass::Cc4, 180e3, 7, 36, &r).unwrap();
        assert_eq!((s.w_opt_hz, s.n_rach), (90e3, 72));
        assert!((s.delta_tau_c - 0.094).abs() < 0.002);
        let s = optimize_config(ChannelClass::Cc1, 1.08e6, 7, 1, &r).unwrap();
        assert_eq!((s.w_opt_hz, s.n_rach), (3e3, 360));
        assert!((s.delta_tau_c - 0.017).abs() < 0.002);
    }

    #[test]
    fn optimizer_matches_brute_force() {
        let r = radio();
        for c in CC {
            for l in [1, 2, 3, 7, 12, 36] {
                let s = optimize_config(c, 180e3, 7, l, &r).unwrap();
                let w_eff = s.w_effective_hz;
                let mut best = (f64::INFINITY, 0.0);
                for k in 1..=60 {
                    let w = 3e3 * k as f64;
                    if w > w_eff || 60 % k != 0 {
                        continue;
                    }
                    let pc = 1.0 - (1.0 - w / (l as f64 * 180e3)).powi(6);
                    let d = tx_time_s(w, c, 24, &r) / (1.0 - pc) / tx_time_s(w_eff, c, 24, &r) - 1.0;
                    if d < best.0 {
                        best = (d, w);
                    }
                }
                assert_eq!(s.w_opt_hz, best.1, "{c} L={l}");
                assert_relative_eq!(s.delta_tau_c, best.0, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn required_multiplicity() {
        let r = radio();
        let got: Vec<usize> = CC
            .iter()
            .map(|&c| required_tdm_multiplicity(c, 180e3, 7, 0.10, &r).unwrap())
            .collect();
        assert_eq!(got, [2, 4, 11, 34]);
        for c in CC {
            assert_eq!(required_tdm_multiplicity(c, 180e3, 1, 0.10, &r).unwrap(), 1);
        }
    }

    #[test]
    fn snr_examples() {
        let r = radio();
        assert!((uplink_snr_db(ChannelClass::Cc4, 1.08e6, &r) + 11.0).abs() < 0.5);
        assert!((uplink_snr_db(ChannelClass::Cc4, 180e3, &r) + 4.0).abs() < 0.5);
        assert!((downlink_snr_db(ChannelClass::Cc4, &r) - 1.0).abs() < 1e-9);
        assert!((downlink_snr_db(ChannelClass::Cc1, &r) + 14.0).abs() < 1e-9);
        assert_relative_eq!(
            uplink_snr_db(ChannelClass::Cc1, 3e3, &r),
            189.0 - 155.0 - 10.0 * 3e3f64.log10(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn cp_overhead_examples() {
        assert!((cp_overhead(35e-6, 1.0 / 3e3, 1.0) - 0.095).abs() < 0.001);
        assert!((cp_overhead(235e-6, 1.0 / 3e3, 0.1) - 0.041).abs() < 0.001);
        assert_eq!(cp_overhead(0.0, 1e-3, 0.5), 0.0);
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(rach_capacity(2.5, 7, 1), 168);
        assert_eq!(rach_capacity(2.5, 7, 15), 2520);
        assert_eq!(rach_capacity(2.5, 7, 30), 5040);
        assert_eq!(rach_capacity(2.5, 7, 60), 10080);
        assert_eq!(rach_capacity(60.0, 1, 1), 1);
    }

    #[test]
    fn mean_time_closed_form() {
        let t = mean_tx_time_s(0.245, p_channel_collision(60, 7), 0.01);
        assert!((t - 0.2737).abs() < 1e-3);
    }
}
