//! Monte Carlo contention engine: device populations drawing channels and
//! access IDs, the full waveform path per TDM slot with blind decoding,
//! retransmission campaigns, link-level PER and TTI calibration, and the
//! eMTC cost model.
//!
//! Every trial owns a random stream derived from (master seed, trial index),
//! trials run in parallel and results are aggregated in index order, so
//! outputs do not depend on the thread count.

use nmtc_core::analytics::{
    battery_per_access_mah, mean_tx_time_s, p_channel_collision, p_id_collision, p_total_collision,
    resources_hz_s, tx_current_ma, N_ID,
};
use nmtc_core::channel::{apply_awgn, impair_device};
use nmtc_core::phy::{superpose, transmit_access, ComplexSignal};
use nmtc_core::receiver::{decode_all_channels, decode_channel, extract_symbols, DecodeResult};
use nmtc_core::rng::{derive_seed, rng_from_seed};
use nmtc_core::{
    AccessRequestMessage, ChannelClass, Fading, ImpairmentProfile, RachConfig, RachGrid, RadioParams,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{FadingKind, LinkKind, RunConfig};
use crate::reference::{by_class, reference};
use crate::{Error, Result};

/// Everything one occasion needs besides the device count and seed.
#[derive(Debug, Clone)]
pub struct LinkSetup {
    pub grid: RachGrid,
    pub cell_id: u16,
    /// Average per-RE receive SNR Γ (dB) of every device.
    pub snr_db: f64,
    pub fading: Fading,
    /// Δt ~ U[0, delta_t_max_s].
    pub delta_t_max_s: f64,
    /// Δf ~ U[−delta_f_max_hz, delta_f_max_hz].
    pub delta_f_max_hz: f64,
    pub link: LinkKind,
    /// Decoding failure probability of the abstract link.
    pub abstract_per: f64,
}

impl LinkSetup {
    pub fn new(grid: RachGrid, snr_db: f64, cfg: &RunConfig) -> Self {
        Self {
            grid,
            cell_id: cfg.band.cell_id,
            snr_db,
            fading: match cfg.sim.fading {
                FadingKind::Flat => Fading::Flat,
                FadingKind::Epa => Fading::Epa {
                    doppler_hz: cfg.sim.doppler_hz,
                },
            },
            delta_t_max_s: cfg.sim.delta_t_max_s,
            delta_f_max_hz: cfg.sim.delta_f_max_hz,
            link: cfg.sim.link,
            abstract_per: cfg.sim.abstract_per,
        }
    }

    /// The class's configured grid.
    pub fn for_class(class: ChannelClass, snr_db: f64, cfg: &RunConfig) -> Result<Self> {
        Ok(Self::new(cfg.band.grid(class)?, snr_db, cfg))
    }

    /// Per-RE power of a single device, the noise reference.
    fn re_power(&self) -> f64 {
        1.0 / self.grid.subcarriers_per_channel() as f64
    }
}

/// One device's random draws for one attempt.
#[derive(Debug, Clone, Copy)]
struct DeviceDraw {
    rach_index: usize,
    msg: AccessRequestMessage,
    delta_t_s: f64,
    delta_f_hz: f64,
    fading_seed: u64,
    /// Uniform variate for the abstract link.
    link_u: f64,
}

fn draw_device<R: Rng>(rng: &mut R, setup: &LinkSetup) -> DeviceDraw {
    let rach_index = rng.random_range(0..setup.grid.n_rach());
    let access_id = rng.random_range(0..N_ID as u16);
    let request = rng.random_range(0..16u8);
    let delta_t_s = rng.random::<f64>() * setup.delta_t_max_s;
    let delta_f_hz = (2.0 * rng.random::<f64>() - 1.0) * setup.delta_f_max_hz;
    DeviceDraw {
        rach_index,
        msg: AccessRequestMessage::new(access_id, request).expect("drawn in range"),
        delta_t_s,
        delta_f_hz,
        fading_seed: rng.random(),
        link_u: rng.random(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviceOutcome {
    pub rach_index: usize,
    pub slot: usize,
    pub channel: usize,
    pub access_id: u16,
    pub decoded: bool,
    /// Another device picked the same (slot, channel).
    pub collided_channel: bool,
    /// Another device picked the same access ID.
    pub collided_id: bool,
    /// Estimated minus true Δt, when decoded on the waveform path.
    pub timing_error_s: Option<f64>,
}

impl DeviceOutcome {
    /// The base station can answer this device unambiguously.
    pub fn succeeded(&self) -> bool {
        self.decoded && !self.collided_id
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccasionOutcome {
    pub devices: Vec<DeviceOutcome>,
    /// Decoded messages that no device sent.
    pub false_alarms: usize,
}

impl OccasionOutcome {
    pub fn channel_collided(&self) -> usize {
        self.devices.iter().filter(|d| d.collided_channel).count()
    }
}

/// One random access occasion with `n_devices` contenders; the receiver
/// decodes every channel of every occupied slot.
pub fn run_occasion(n_devices: usize, setup: &LinkSetup, seed: u64) -> Result<OccasionOutcome> {
    simulate_occasion(n_devices, setup, seed, None)
}

/// `focus` restricts decoding to the slot and channel of one device, which is
/// all a campaign tracking that device needs.
fn simulate_occasion(
    n_devices: usize,
    setup: &LinkSetup,
    seed: u64,
    focus: Option<usize>,
) -> Result<OccasionOutcome> {
    let grid = &setup.grid;
    let mut rng = rng_from_seed(seed);
    let draws: Vec<DeviceDraw> = (0..n_devices).map(|_| draw_device(&mut rng, setup)).collect();
    let noise_seed: u64 = rng.random();

    let count = |f: &dyn Fn(&DeviceDraw) -> bool| draws.iter().filter(|d| f(d)).count();
    let mut devices: Vec<DeviceOutcome> = draws
        .iter()
        .map(|d| {
            let (slot, channel) = grid.split_index(d.rach_index);
            DeviceOutcome {
                rach_index: d.rach_index,
                slot,
                channel,
                access_id: d.msg.access_id(),
                decoded: false,
                collided_channel: count(&|o| o.rach_index == d.rach_index) > 1,
                collided_id: count(&|o| o.msg.access_id() == d.msg.access_id()) > 1,
                timing_error_s: None,
            }
        })
        .collect();

    let mut false_alarms = 0;
    match setup.link {
        LinkKind::Abstract => {
            for (o, d) in devices.iter_mut().zip(&draws) {
                o.decoded = !o.collided_channel && d.link_u >= setup.abstract_per;
            }
        }
        LinkKind::Waveform => {
            let slots: Vec<usize> = match focus {
                Some(i) => vec![devices[i].slot],
                None => {
                    let mut s: Vec<usize> = devices.iter().map(|d| d.slot).collect();
                    s.sort_unstable();
                    s.dedup();
                    s
                }
            };
            for slot in slots {
                let members: Vec<usize> = (0..n_devices).filter(|&i| devices[i].slot == slot).collect();
                let rx = slot_waveform(setup, &members, &draws, &devices, derive_seed(noise_seed, slot as u64))?;
                let res = extract_symbols(&rx, grid);
                let decoded: Vec<DecodeResult> = match focus {
                    Some(i) => vec![decode_channel(&res, grid, devices[i].channel, setup.cell_id)?],
                    None => decode_all_channels(&res, grid, setup.cell_id),
                };
                for r in &decoded {
                    let Some(msg) = r.message else { continue };
                    let mut matched = false;
                    for &i in &members {
                        if devices[i].channel == r.channel_index && draws[i].msg == msg {
                            matched = true;
                            devices[i].decoded = true;
                            devices[i].timing_error_s = r.est_delta_t_s.map(|t| t - draws[i].delta_t_s);
                        }
                    }
                    if !matched {
                        false_alarms += 1;
                    }
                }
            }
        }
    }
    Ok(OccasionOutcome {
        devices,
        false_alarms,
    })
}

/// Superposed, impaired transmissions of one slot plus receiver noise.
fn slot_waveform(
    setup: &LinkSetup,
    members: &[usize],
    draws: &[DeviceDraw],
    devices: &[DeviceOutcome],
    noise_seed: u64,
) -> Result<ComplexSignal> {
    let mut signals = Vec::with_capacity(members.len());
    for &i in members {
        let d = &draws[i];
        let tx = transmit_access(&d.msg, &setup.grid, devices[i].channel, setup.cell_id)?;
        let profile = ImpairmentProfile {
            delta_t_s: d.delta_t_s,
            delta_f_hz: d.delta_f_hz,
            fading: setup.fading,
            snr_db: setup.snr_db,
        };
        signals.push((impair_device(&tx, &profile, d.fading_seed), 0.0, 1.0));
    }
    Ok(apply_awgn(
        &superpose(&signals),
        setup.snr_db,
        setup.re_power(),
        noise_seed,
    ))
}

/// Empirical per-device channel collision rate over many occasions, with the
/// standard error of the per-occasion fractions and the closed-form value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionEstimate {
    pub occasions: usize,
    pub n_devices: usize,
    pub n_rach: usize,
    pub rate: f64,
    pub std_error: f64,
    pub expected: f64,
}

pub fn collision_rate(setup: &LinkSetup, n_devices: usize, occasions: usize, seed: u64) -> Result<CollisionEstimate> {
    let fractions: Vec<f64> = (0..occasions)
        .into_par_iter()
        .map(|o| {
            simulate_occasion(n_devices, setup, derive_seed(seed, o as u64), None)
                .map(|out| out.channel_collided() as f64 / n_devices as f64)
        })
        .collect::<Result<_>>()?;
    let (mean, se) = mean_and_se(&fractions);
    Ok(CollisionEstimate {
        occasions,
        n_devices,
        n_rach: setup.grid.n_rach(),
        rate: mean,
        std_error: se,
        expected: p_channel_collision(setup.grid.n_rach(), n_devices),
    })
}

fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    if x.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Nearest-rank percentile of already sorted values.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn sorted_abs(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.map(f64::abs).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Retransmission campaign of one class: each trial follows a tagged device
/// through fresh occasions until it succeeds or hits the attempt cap.
#[derive(Debug, Clone, Copy)]
pub struct CampaignSetup<'a> {
    pub class: ChannelClass,
    pub link: &'a LinkSetup,
    pub n_devices: usize,
    pub max_attempts: u32,
    pub radio: RadioParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CampaignStats {
    #[serde(serialize_with = "crate::io::ser_class")]
    pub class: ChannelClass,
    pub trials: usize,
    pub snr_db: f64,
    pub tti_s: f64,
    pub n_rach: usize,
    pub n_devices: usize,
    pub mean_attempts: f64,
    pub censored_fraction: f64,
    /// Channel or ID collision, per attempt.
    pub collision_rate: f64,
    /// Closed-form total collision probability.
    pub collision_expected: f64,
    /// Decoding failures among attempts free of channel collisions.
    pub per: f64,
    /// Decoded share of channel-collided attempts (capture).
    pub capture_rate: f64,
    /// Mean time on air until success.
    pub t_tx_s: f64,
    /// TTI/((1−p_c)(1−p_e)) with the closed-form p_c and the measured PER.
    pub t_tx_closed_form_s: f64,
    pub battery_mah: f64,
    pub battery_fraction_pct: f64,
    pub resources_hz_s: f64,
    pub timing_samples: usize,
    pub timing_p50_us: f64,
    pub timing_p95_us: f64,
}

#[derive(Debug, Clone, Default)]
struct TrialRecord {
    attempts: u32,
    censored: bool,
    collisions: u32,
    clean_attempts: u32,
    clean_failures: u32,
    channel_collisions: u32,
    captured: u32,
    timing_errors: Vec<f64>,
}

pub fn run_campaign(setup: &CampaignSetup, n_trials: usize, seed: u64) -> Result<CampaignStats> {
    let records: Vec<TrialRecord> = (0..n_trials)
        .into_par_iter()
        .map(|t| campaign_trial(setup, derive_seed(seed, t as u64)))
        .collect::<Result<_>>()?;

    let link = setup.link;
    let tti_s = link.grid.tti_s();
    let total_attempts: u64 = records.iter().map(|r| r.attempts as u64).sum();
    let collisions: u64 = records.iter().map(|r| r.collisions as u64).sum();
    let clean: u64 = records.iter().map(|r| r.clean_attempts as u64).sum();
    let clean_fail: u64 = records.iter().map(|r| r.clean_failures as u64).sum();
    let ch_coll: u64 = records.iter().map(|r| r.channel_collisions as u64).sum();
    let captured: u64 = records.iter().map(|r| r.captured as u64).sum();
    let mean_attempts = total_attempts as f64 / n_trials as f64;
    let per = if clean == 0 { f64::NAN } else { clean_fail as f64 / clean as f64 };
    let p_c = p_total_collision(
        p_channel_collision(link.grid.n_rach(), setup.n_devices),
        p_id_collision(N_ID, setup.n_devices),
    );
    let t_tx_s = mean_attempts * tti_s;
    let battery = battery_per_access_mah(t_tx_s, 0.0, tx_current_ma(&setup.radio), setup.radio.i0_ma);
    let timing = sorted_abs(records.iter().flat_map(|r| r.timing_errors.iter().copied()));

    let stats = CampaignStats {
        class: setup.class,
        trials: n_trials,
        snr_db: link.snr_db,
        tti_s,
        n_rach: link.grid.n_rach(),
        n_devices: setup.n_devices,
        mean_attempts,
        censored_fraction: records.iter().filter(|r| r.censored).count() as f64 / n_trials as f64,
        collision_rate: collisions as f64 / total_attempts as f64,
        collision_expected: p_c,
        per,
        capture_rate: if ch_coll == 0 { f64::NAN } else { captured as f64 / ch_coll as f64 },
        t_tx_s,
        t_tx_closed_form_s: mean_tx_time_s(tti_s, p_c, if per.is_nan() { 0.0 } else { per }),
        battery_mah: battery,
        battery_fraction_pct: 100.0 * battery / setup.radio.batt_capacity_mah,
        resources_hz_s: resources_hz_s(link.grid.total_bw_hz(), t_tx_s),
        timing_samples: timing.len(),
        timing_p50_us: percentile(&timing, 0.5) * 1e6,
        timing_p95_us: percentile(&timing, 0.95) * 1e6,
    };
    if !(stats.t_tx_s >= tti_s) {
        return Err(Error::Invariant(format!(
            "mean transmit time {} s below one TTI {tti_s} s",
            stats.t_tx_s
        )));
    }
    Ok(stats)
}

fn campaign_trial(setup: &CampaignSetup, seed: u64) -> Result<TrialRecord> {
    let mut rec = TrialRecord::default();
    for attempt in 0..setup.max_attempts {
        let out = simulate_occasion(setup.n_devices, setup.link, derive_seed(seed, attempt as u64), Some(0))?;
        let me = out.devices[0];
        rec.attempts += 1;
        if me.collided_channel || me.collided_id {
            rec.collisions += 1;
        }
        if me.collided_channel {
            rec.channel_collisions += 1;
            rec.captured += me.decoded as u32;
        } else {
            rec.clean_attempts += 1;
            if !me.decoded {
                rec.clean_failures += 1;
            }
        }
        if let Some(e) = me.timing_error_s {
            rec.timing_errors.push(e);
        }
        if me.succeeded() {
            return Ok(rec);
        }
    }
    rec.censored = true;
    Ok(rec)
}

/// Outcome of one single-device link trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkTrial {
    pub decoded: bool,
    pub delta_t_s: f64,
    pub delta_f_hz: f64,
    pub est_delta_t_s: Option<f64>,
    pub est_delta_f_hz: f64,
}

impl LinkTrial {
    pub fn timing_error_s(&self) -> Option<f64> {
        self.est_delta_t_s.filter(|_| self.decoded).map(|t| t - self.delta_t_s)
    }
}

/// One device alone on a random channel of its slot: no contention, so the
/// outcome is purely the link.
pub fn link_trial(setup: &LinkSetup, seed: u64) -> Result<LinkTrial> {
    let grid = &setup.grid;
    let mut rng = rng_from_seed(seed);
    let d = draw_device(&mut rng, setup);
    let channel = d.rach_index % grid.channels_per_slot();
    let noise_seed: u64 = rng.random();
    let tx = transmit_access(&d.msg, grid, channel, setup.cell_id)?;
    let profile = ImpairmentProfile {
        delta_t_s: d.delta_t_s,
        delta_f_hz: d.delta_f_hz,
        fading: setup.fading,
        snr_db: setup.snr_db,
    };
    let rx = apply_awgn(&impair_device(&tx, &profile, d.fading_seed), setup.snr_db, setup.re_power(), noise_seed);
    let r = decode_channel(&extract_symbols(&rx, grid), grid, channel, setup.cell_id)?;
    Ok(LinkTrial {
        decoded: r.message == Some(d.msg),
        delta_t_s: d.delta_t_s,
        delta_f_hz: d.delta_f_hz,
        est_delta_t_s: r.est_delta_t_s,
        est_delta_f_hz: r.est_delta_f_hz,
    })
}

/// Trials `0..n` of the stream `seed`; trial t always sees the same draws,
/// whatever the grid, so sweeps use common random numbers.
pub fn link_trials(setup: &LinkSetup, n: usize, seed: u64) -> Result<Vec<LinkTrial>> {
    (0..n)
        .into_par_iter()
        .map(|t| link_trial(setup, derive_seed(seed, t as u64)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerPoint {
    pub n_ofdm: usize,
    pub tti_s: f64,
    pub trials: usize,
    pub errors: usize,
    pub per: f64,
    /// Stopped once the error budget of the full run was exceeded.
    pub stopped_early: bool,
}

const PER_CHUNK: usize = 500;

/// PER over up to `trials` link trials. With `target`, stops as soon as more
/// than target·trials errors have been seen, since the full run can no
/// longer meet it.
pub fn measure_per(setup: &LinkSetup, trials: usize, seed: u64, target: Option<f64>) -> Result<PerPoint> {
    let budget = target.map(|p| (p * trials as f64).floor() as usize);
    let mut errors = 0;
    let mut done = 0;
    let mut stopped_early = false;
    while done < trials {
        let end = (done + PER_CHUNK).min(trials);
        let chunk: Vec<bool> = (done..end)
            .into_par_iter()
            .map(|t| link_trial(setup, derive_seed(seed, t as u64)).map(|r| r.decoded))
            .collect::<Result<_>>()?;
        errors += chunk.iter().filter(|&&ok| !ok).count();
        done = end;
        if budget.is_some_and(|b| errors > b) && done < trials {
            stopped_early = true;
            break;
        }
    }
    Ok(PerPoint {
        n_ofdm: setup.grid.n_ofdm(),
        tti_s: setup.grid.tti_s(),
        trials: done,
        errors,
        per: errors as f64 / done as f64,
        stopped_early,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    #[serde(serialize_with = "crate::io::ser_class")]
    pub class: ChannelClass,
    pub snr_db: f64,
    pub target_per: f64,
    /// Smallest TTI meeting the target, if any within the cap.
    pub tti_s: Option<f64>,
    pub n_ofdm: Option<usize>,
    pub per: Option<f64>,
    pub max_tti_s: f64,
    pub reference_tti_s: f64,
    pub evaluations: Vec<PerPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions {
    pub target_per: f64,
    pub trials: usize,
    pub max_tti_s: f64,
    pub seed: u64,
}

/// Smallest TTI, in whole hop-group pairs, whose PER at `snr_db` is at most
/// the target. Binary search between the shortest buildable slot and the
/// cap; an unreachable target is reported through `tti_s == None`.
pub fn calibrate_tti(
    class: ChannelClass,
    snr_db: f64,
    cfg: &RunConfig,
    opts: &CalibrationOptions,
) -> Result<Calibration> {
    let base = cfg.band.rach_config(class, cfg.band.tti_s[class.index() as usize - 1]);
    let pair = 2 * base.group_len;
    let build = |pairs: usize| -> Option<RachGrid> {
        let rc = RachConfig {
            n_ofdm: pairs * pair,
            ..base
        };
        RachGrid::build(cfg.band.total_bw_hz, cfg.band.num_subcarriers, &rc).ok()
    };
    let probe = build(1).ok_or_else(|| Error::Config(format!("{class}: grid does not build")));
    let pair_s = match probe {
        Ok(g) => g.tti_s(),
        Err(_) => {
            // One pair may be too short to carry the message; any longer
            // grid gives the same pair duration.
            (1..10_000)
                .find_map(|p| build(p).map(|g| g.tti_s() / p as f64))
                .ok_or_else(|| Error::Config(format!("{class}: grid does not build")))?
        }
    };
    let p_max = ((opts.max_tti_s / pair_s) + 1e-9).floor() as usize;
    let p_min = (1..=p_max.max(1)).find(|&p| build(p).is_some());
    let mut evaluations = Vec::new();
    let mut result = Calibration {
        class,
        snr_db,
        target_per: opts.target_per,
        tti_s: None,
        n_ofdm: None,
        per: None,
        max_tti_s: opts.max_tti_s,
        reference_tti_s: by_class(&reference().tti.nmtc_tx1, class),
        evaluations: Vec::new(),
    };
    let Some(p_min) = p_min.filter(|&p| p <= p_max) else {
        return Ok(result);
    };

    let mut eval = |p: usize| -> Result<PerPoint> {
        let setup = LinkSetup::new(build(p).expect("within buildable range"), snr_db, cfg);
        let pt = measure_per(&setup, opts.trials, opts.seed, Some(opts.target_per))?;
        evaluations.push(pt);
        Ok(pt)
    };
    let passes = |pt: &PerPoint| !pt.stopped_early && pt.per <= opts.target_per;

    let top = eval(p_max)?;
    if passes(&top) {
        let (mut lo, mut hi, mut best) = (p_min - 1, p_max, top);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let pt = eval(mid)?;
            if passes(&pt) {
                hi = mid;
                best = pt;
            } else {
                lo = mid;
            }
        }
        result.tti_s = Some(best.tti_s);
        result.n_ofdm = Some(best.n_ofdm);
        result.per = Some(best.per);
    }
    result.evaluations = evaluations;
    Ok(result)
}

/// eMTC stage durations (s): preamble, random access response, connection
/// request, contention resolution, connection setup.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EmtcStages {
    pub tx1: f64,
    pub rx1: f64,
    pub tx2: f64,
    pub rx2: f64,
    pub tx3: f64,
}

impl EmtcStages {
    pub fn for_class(class: ChannelClass) -> Self {
        let t = &reference().tti;
        Self {
            tx1: by_class(&t.emtc_tx1, class),
            rx1: by_class(&t.emtc_rx1, class),
            tx2: by_class(&t.emtc_tx2, class),
            rx2: by_class(&t.emtc_rx2, class),
            tx3: by_class(&t.emtc_tx3, class),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmtcCost {
    pub t_tx_s: f64,
    pub t_rx_s: f64,
    pub battery_mah: f64,
}

pub fn emtc_cost(stages: &EmtcStages, radio: &RadioParams) -> EmtcCost {
    let t_tx_s = stages.tx1 + stages.tx2 + stages.tx3;
    let t_rx_s = stages.rx1 + stages.rx2;
    EmtcCost {
        t_tx_s,
        t_rx_s,
        battery_mah: battery_per_access_mah(t_tx_s, t_rx_s, tx_current_ma(radio), radio.i0_ma),
    }
}

pub fn emtc_cost_model(class: ChannelClass, radio: &RadioParams) -> EmtcCost {
    emtc_cost(&EmtcStages::for_class(class), radio)
}
