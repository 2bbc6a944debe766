//! The five commands. Each writes its data files into the output directory
//! and returns the paths plus a diff report against the published values.

use std::path::PathBuf;

use nmtc_core::analytics::{
    cp_overhead, delta_tau, downlink_snr_db, effective_bandwidth_hz, mean_tx_time_s, optimize_config_with,
    p_channel_collision, penalty_sweep, rach_capacity, required_tdm_multiplicity, resources_hz_s,
    tx_current_ma, uplink_snr_db, battery_per_access_mah, SearchGrid,
};
use nmtc_core::rng::derive_seed;
use nmtc_core::ChannelClass;
use serde::Serialize;

use crate::config::RunConfig;
use crate::io::{ser_class, write_json, write_rows};
use crate::reference::{by_class, reference};
use crate::sim::{
    calibrate_tti, emtc_cost_model, link_trials, percentile, run_campaign, CampaignSetup, CampaignStats,
    CalibrationOptions, LinkSetup, LinkTrial,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffStatus {
    Match,
    Mismatch,
    /// Computed under settings the published value does not cover.
    Unreferenced,
}

/// One computed quantity next to its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffRow {
    pub item: String,
    pub computed: f64,
    pub published: Option<f64>,
    pub tolerance: Option<f64>,
    /// "abs" or "rel".
    pub tolerance_kind: &'static str,
    pub status: DiffStatus,
}

impl DiffRow {
    fn abs(item: impl Into<String>, computed: f64, published: f64, tol: f64) -> Self {
        Self::judge(item.into(), computed, published, tol, "abs", (computed - published).abs())
    }

    fn rel(item: impl Into<String>, computed: f64, published: f64, tol: f64) -> Self {
        let err = ((computed - published) / published).abs();
        Self::judge(item.into(), computed, published, tol, "rel", err)
    }

    fn judge(item: String, computed: f64, published: f64, tol: f64, kind: &'static str, err: f64) -> Self {
        Self {
            item,
            computed,
            published: Some(published),
            tolerance: Some(tol),
            tolerance_kind: kind,
            // Exact comparisons carry float noise from unit conversions.
            status: if err <= tol + 1e-9 { DiffStatus::Match } else { DiffStatus::Mismatch },
        }
    }

    fn unreferenced(item: impl Into<String>, computed: f64) -> Self {
        Self {
            item: item.into(),
            computed,
            published: None,
            tolerance: None,
            tolerance_kind: "abs",
            status: DiffStatus::Unreferenced,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CommandReport {
    pub files: Vec<PathBuf>,
    pub diffs: Vec<DiffRow>,
}

impl CommandReport {
    pub fn mismatches(&self) -> usize {
        self.diffs.iter().filter(|d| d.status == DiffStatus::Mismatch).count()
    }
}

fn search_grid(cfg: &RunConfig) -> SearchGrid {
    SearchGrid {
        spacing_hz: cfg.analytics.spacing_hz,
        threshold: cfg.analytics.threshold,
        effective_grid_hz: cfg.analytics.effective_grid_hz,
        msg_bits: cfg.analytics.msg_bits,
    }
}

fn class_seed(cfg: &RunConfig, class: ChannelClass, stream: u64) -> u64 {
    derive_seed(derive_seed(cfg.seed, stream), class.index() as u64)
}

fn pct(x: f64) -> f64 {
    100.0 * x
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Serialize)]
pub struct EffectiveBandwidthRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub w_eff_hz: u64,
    pub alpha_db: f64,
    pub delta_tau_pct: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub bandwidth_hz: u64,
    pub tdm_multiplicity: usize,
    pub n_rach: usize,
    pub w_opt_hz: u64,
    pub w_eff_hz: u64,
    pub delta_tau_c_pct: f64,
    /// Smallest L whose optimum is deficit-free at the threshold penalty.
    pub required_l: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SnrRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub scheme: &'static str,
    pub stage: &'static str,
    /// Empty for the downlink stage.
    pub bandwidth_hz: Option<u64>,
    pub snr_db: f64,
}

/// TDM multiplicities worth tabulating: L = 1, the required L and any
/// published L for this bandwidth.
fn multiplicities(cfg: &RunConfig, class: ChannelClass, bandwidth_hz: f64) -> Result<(usize, Vec<usize>)> {
    let required = required_tdm_multiplicity(
        class,
        bandwidth_hz,
        cfg.analytics.n_devices,
        cfg.analytics.threshold,
        &cfg.radio(),
    )?;
    let mut ls = vec![1, required];
    if cfg.analytics.n_devices == reference().rach_config.n_devices {
        ls.extend(
            reference()
                .rows_for_bandwidth(bandwidth_hz)
                .filter(|r| r.class == class.index())
                .map(|r| r.tdm_multiplicity),
        );
    }
    ls.sort_unstable();
    ls.dedup();
    Ok((required, ls))
}

fn config_rows(cfg: &RunConfig, bandwidth_hz: f64, diffs: &mut Vec<DiffRow>) -> Result<Vec<ConfigRow>> {
    let radio = cfg.radio();
    let search = search_grid(cfg);
    let referenced = same(cfg.analytics.threshold, reference().effective_bandwidth.threshold)
        && cfg.analytics.n_devices == reference().rach_config.n_devices
        && same(cfg.analytics.spacing_hz, 3e3)
        && same(cfg.analytics.effective_grid_hz, 1e3);
    let tol = reference().rach_config.delta_tau_tolerance_pct;
    let mut rows = Vec::new();
    for class in cfg.channel_classes() {
        let (required, ls) = multiplicities(cfg, class, bandwidth_hz)?;
        for l in ls {
            let sol = optimize_config_with(class, bandwidth_hz, cfg.analytics.n_devices, l, &radio, &search)?;
            let row = ConfigRow {
                class,
                bandwidth_hz: bandwidth_hz.round() as u64,
                tdm_multiplicity: l,
                n_rach: sol.n_rach,
                w_opt_hz: sol.w_opt_hz.round() as u64,
                w_eff_hz: sol.w_effective_hz.round() as u64,
                delta_tau_c_pct: pct(sol.delta_tau_c),
                required_l: l == required,
            };
            let tag = format!("{class} W={bandwidth_hz} L={l}");
            let published = reference()
                .rows_for_bandwidth(bandwidth_hz)
                .find(|r| r.class == class.index() && r.tdm_multiplicity == l);
            match published.filter(|_| referenced) {
                Some(p) => {
                    diffs.push(DiffRow::abs(format!("{tag} n_rach"), row.n_rach as f64, p.n_rach as f64, 0.0));
                    diffs.push(DiffRow::abs(format!("{tag} w_opt_khz"), sol.w_opt_hz / 1e3, p.w_khz, 0.0));
                    diffs.push(DiffRow::abs(
                        format!("{tag} delta_tau_c_pct"),
                        row.delta_tau_c_pct,
                        p.delta_tau_c_pct,
                        tol,
                    ));
                }
                None => diffs.push(DiffRow::unreferenced(format!("{tag} delta_tau_c_pct"), row.delta_tau_c_pct)),
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Deficit-free channel bandwidth: the optimum at the required L.
fn nmtc_bandwidth(cfg: &RunConfig, class: ChannelClass) -> Result<f64> {
    let radio = cfg.radio();
    let bw = cfg.analytics.bandwidth_hz;
    let l = required_tdm_multiplicity(class, bw, cfg.analytics.n_devices, cfg.analytics.threshold, &radio)?;
    Ok(optimize_config_with(class, bw, cfg.analytics.n_devices, l, &radio, &search_grid(cfg))?.w_opt_hz)
}

/// table1..table4 plus `diff_tables`.
pub fn cmd_tables(cfg: &RunConfig) -> Result<CommandReport> {
    let radio = cfg.radio();
    let out = &cfg.output.out;
    let fmt = cfg.output.format;
    let r = reference();
    let mut report = CommandReport::default();
    let eb_referenced = same(cfg.analytics.threshold, r.effective_bandwidth.threshold)
        && same(cfg.analytics.effective_grid_hz, r.effective_bandwidth.grid_khz * 1e3);

    let mut t1 = Vec::new();
    for class in cfg.channel_classes() {
        let w = effective_bandwidth_hz(class, &radio, cfg.analytics.threshold, cfg.analytics.effective_grid_hz)?;
        t1.push(EffectiveBandwidthRow {
            class,
            w_eff_hz: w.round() as u64,
            alpha_db: class.alpha_db(),
            delta_tau_pct: pct(delta_tau(w, class, &radio)),
        });
        let item = format!("{class} w_eff_khz");
        if eb_referenced {
            let w_cmp = if class == ChannelClass::Cc1 {
                effective_bandwidth_hz(class, &radio, cfg.analytics.threshold, r.effective_bandwidth.cc1_grid_khz * 1e3)?
            } else {
                w
            };
            report
                .diffs
                .push(DiffRow::abs(item, w_cmp / 1e3, by_class(&r.effective_bandwidth.w_khz, class), 0.0));
        } else {
            report.diffs.push(DiffRow::unreferenced(item, w / 1e3));
        }
    }
    report.files.push(write_rows(out, "table1", fmt, &t1)?);

    let t2 = config_rows(cfg, cfg.analytics.bandwidth_hz, &mut report.diffs)?;
    report.files.push(write_rows(out, "table2", fmt, &t2)?);
    let t3 = config_rows(cfg, cfg.analytics.alt_bandwidth_hz, &mut report.diffs)?;
    report.files.push(write_rows(out, "table3", fmt, &t3)?);

    let snr = &r.operating_snr;
    let mut t4 = Vec::new();
    for class in cfg.channel_classes() {
        let w = nmtc_bandwidth(cfg, class)?;
        let rows = [
            ("nmtc", "tx1", w, uplink_snr_db(class, w, &radio), snr.nmtc_tx1),
            (
                "emtc",
                "tx1",
                cfg.analytics.emtc_preamble_bw_hz,
                uplink_snr_db(class, cfg.analytics.emtc_preamble_bw_hz, &radio),
                snr.emtc_tx1,
            ),
            (
                "emtc",
                "tx23",
                cfg.analytics.emtc_prb_bw_hz,
                uplink_snr_db(class, cfg.analytics.emtc_prb_bw_hz, &radio),
                snr.emtc_tx23,
            ),
            ("emtc", "rx12", f64::NAN, downlink_snr_db(class, &radio), snr.emtc_rx12),
        ];
        for (scheme, stage, bw, value, published) in rows {
            t4.push(SnrRow {
                class,
                scheme,
                stage,
                bandwidth_hz: bw.is_finite().then(|| bw.round() as u64),
                snr_db: value,
            });
            let item = format!("{class} {scheme} {stage} snr_db");
            // The nMTC width follows the optimizer, so it is only comparable
            // under the published optimizer settings.
            if scheme == "nmtc" && !(eb_referenced && cfg.analytics.n_devices == r.rach_config.n_devices) {
                report.diffs.push(DiffRow::unreferenced(item, value));
            } else {
                report
                    .diffs
                    .push(DiffRow::abs(item, value, by_class(&published, class), snr.tolerance_db));
            }
        }
    }
    report.files.push(write_rows(out, "table4", fmt, &t4)?);
    report.files.push(write_rows(out, "diff_tables", fmt, &report.diffs)?);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub tdm_multiplicity: usize,
    pub w_hz: u64,
    pub n_rach: usize,
    pub delta_tau_c_pct: f64,
    pub optimal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaTauRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub w_hz: u64,
    pub delta_tau_pct: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PenaltyRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub tdm_multiplicity: usize,
    pub n_devices: usize,
    pub w_opt_hz: u64,
    pub delta_tau_c_pct: f64,
}

/// `optimize` (the (w, Δτ_c) sweep with its arg-min), `delta_tau` (excess
/// time versus w) and `penalty_vs_devices` (minimum penalty versus N).
pub fn cmd_optimize(cfg: &RunConfig) -> Result<CommandReport> {
    let radio = cfg.radio();
    let search = search_grid(cfg);
    let bw = cfg.analytics.bandwidth_hz;
    let n = cfg.analytics.n_devices;
    let mut sweep = Vec::new();
    let mut dtau = Vec::new();
    let mut penalty = Vec::new();
    for class in cfg.channel_classes() {
        let (_, ls) = multiplicities(cfg, class, bw)?;
        for &l in &ls {
            let (_, points) = penalty_sweep(class, bw, n, l, &radio, &search)?;
            let best = optimize_config_with(class, bw, n, l, &radio, &search)?;
            sweep.extend(points.iter().map(|p| SweepRow {
                class,
                tdm_multiplicity: l,
                w_hz: p.w_hz.round() as u64,
                n_rach: p.n_rach,
                delta_tau_c_pct: pct(p.delta_tau_c),
                optimal: p.w_hz == best.w_opt_hz,
            }));
            for devices in 1..=cfg.analytics.max_devices {
                let s = optimize_config_with(class, bw, devices, l, &radio, &search)?;
                penalty.push(PenaltyRow {
                    class,
                    tdm_multiplicity: l,
                    n_devices: devices,
                    w_opt_hz: s.w_opt_hz.round() as u64,
                    delta_tau_c_pct: pct(s.delta_tau_c),
                });
            }
        }
        let steps = (bw / cfg.analytics.effective_grid_hz).round() as u64;
        dtau.extend((1..=steps).map(|k| {
            let w = k as f64 * cfg.analytics.effective_grid_hz;
            DeltaTauRow {
                class,
                w_hz: w.round() as u64,
                delta_tau_pct: pct(delta_tau(w, class, &radio)),
            }
        }));
    }
    let out = &cfg.output.out;
    let fmt = cfg.output.format;
    Ok(CommandReport {
        files: vec![
            write_rows(out, "optimize", fmt, &sweep)?,
            write_rows(out, "delta_tau", fmt, &dtau)?,
            write_rows(out, "penalty_vs_devices", fmt, &penalty)?,
        ],
        diffs: Vec::new(),
    })
}

/// Uplink SNR of the configured channel width.
pub fn operating_snr_db(cfg: &RunConfig, class: ChannelClass) -> f64 {
    uplink_snr_db(class, cfg.band.channel_bw_hz[class.index() as usize - 1], &cfg.radio())
}

#[derive(Debug, Clone, Serialize)]
pub struct PerRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub snr_db: f64,
    pub tti_s: f64,
    pub trials: usize,
    pub errors: usize,
    pub per: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CdfRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub snr_db: f64,
    pub abs_error_us: f64,
    pub cdf: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub nmtc_t_tx_s: f64,
    pub nmtc_battery_mah: f64,
    pub emtc_t_tx_s: f64,
    pub emtc_t_rx_s: f64,
    pub emtc_battery_mah: f64,
    pub reduction_pct: f64,
}

/// `per_vs_snr`, `timing_cdf`, `campaign`, `battery.json` and, when
/// enabled, `calibration`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<CommandReport> {
    let radio = cfg.radio();
    let out = &cfg.output.out;
    let fmt = cfg.output.format;
    let trials = cfg.sim.trials;
    let mut per_rows = Vec::new();
    let mut cdf_rows = Vec::new();
    let mut campaigns: Vec<CampaignStats> = Vec::new();
    let mut battery = Vec::new();
    let mut calibrations = Vec::new();
    for class in cfg.channel_classes() {
        for &snr in &cfg.sim.snr_db {
            let setup = LinkSetup::for_class(class, snr, cfg)?;
            let res = link_trials(&setup, trials, class_seed(cfg, class, 1))?;
            let errors = res.iter().filter(|r| !r.decoded).count();
            per_rows.push(PerRow {
                class,
                snr_db: snr,
                tti_s: setup.grid.tti_s(),
                trials,
                errors,
                per: errors as f64 / trials as f64,
            });
        }

        let gamma = operating_snr_db(cfg, class);
        let setup = LinkSetup::for_class(class, gamma, cfg)?;
        let res = link_trials(&setup, trials, class_seed(cfg, class, 2))?;
        let errs = sorted_abs_timing(&res);
        let n = errs.len() as f64;
        cdf_rows.extend(errs.iter().enumerate().map(|(i, e)| CdfRow {
            class,
            snr_db: gamma,
            abs_error_us: e * 1e6,
            cdf: (i + 1) as f64 / n,
        }));

        let stats = run_campaign(
            &CampaignSetup {
                class,
                link: &setup,
                n_devices: cfg.sim.n_devices,
                max_attempts: cfg.sim.max_attempts,
                radio,
            },
            trials,
            class_seed(cfg, class, 3),
        )?;
        let emtc = emtc_cost_model(class, &radio);
        battery.push(BatteryRow {
            class,
            nmtc_t_tx_s: stats.t_tx_s,
            nmtc_battery_mah: stats.battery_mah,
            emtc_t_tx_s: emtc.t_tx_s,
            emtc_t_rx_s: emtc.t_rx_s,
            emtc_battery_mah: emtc.battery_mah,
            reduction_pct: pct(1.0 - stats.battery_mah / emtc.battery_mah),
        });
        campaigns.push(stats);

        if cfg.sim.calibrate {
            let nominal = cfg.band.tti_s[class.index() as usize - 1];
            calibrations.push(calibrate_tti(
                class,
                gamma,
                cfg,
                &CalibrationOptions {
                    target_per: cfg.sim.target_per,
                    trials: cfg.sim.calibration_trials,
                    max_tti_s: cfg.sim.max_tti_factor * nominal,
                    seed: class_seed(cfg, class, 4),
                },
            )?);
        }
    }
    let mut files = vec![
        write_rows(out, "per_vs_snr", fmt, &per_rows)?,
        write_rows(out, "timing_cdf", fmt, &cdf_rows)?,
        write_rows(out, "campaign", fmt, &campaigns)?,
    ];
    let path = out.join("battery.json");
    write_json(&path, &battery)?;
    files.push(path);
    if cfg.sim.calibrate {
        let flat: Vec<CalibrationRow> = calibrations.iter().map(CalibrationRow::from).collect();
        files.push(write_rows(out, "calibration", fmt, &flat)?);
    }
    Ok(CommandReport { files, diffs: Vec::new() })
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub snr_db: f64,
    pub target_per: f64,
    pub tti_s: Option<f64>,
    pub n_ofdm: Option<usize>,
    pub per: Option<f64>,
    pub max_tti_s: f64,
    pub reference_tti_s: f64,
    pub evaluations: usize,
}

impl From<&crate::sim::Calibration> for CalibrationRow {
    fn from(c: &crate::sim::Calibration) -> Self {
        Self {
            class: c.class,
            snr_db: c.snr_db,
            target_per: c.target_per,
            tti_s: c.tti_s,
            n_ofdm: c.n_ofdm,
            per: c.per,
            max_tti_s: c.max_tti_s,
            reference_tti_s: c.reference_tti_s,
            evaluations: c.evaluations.len(),
        }
    }
}

fn sorted_abs_timing(res: &[LinkTrial]) -> Vec<f64> {
    let mut v: Vec<f64> = res.iter().filter_map(LinkTrial::timing_error_s).map(f64::abs).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Error statistics of one estimator sweep point, over decoded trials.
#[derive(Debug, Clone, Serialize)]
pub struct EstimatorRow {
    pub sweep: &'static str,
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub snr_db: f64,
    pub hop_dq: usize,
    pub trials: usize,
    pub decoded: usize,
    pub cfo_bias_hz: f64,
    pub cfo_rmse_hz: f64,
    pub timing_bias_us: f64,
    pub timing_rmse_us: f64,
    /// Against the whole-sample delay the channel applied.
    pub timing_rmse_applied_us: f64,
    pub timing_p95_us: f64,
}

pub fn estimator_stats(
    sweep: &'static str,
    class: ChannelClass,
    setup: &LinkSetup,
    res: &[LinkTrial],
) -> EstimatorRow {
    let fs = setup.grid.sample_rate_hz();
    let ok: Vec<&LinkTrial> = res.iter().filter(|r| r.decoded).collect();
    let n = ok.len() as f64;
    let mean = |f: &dyn Fn(&LinkTrial) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / n;
    let cfo_err = |r: &LinkTrial| r.est_delta_f_hz - r.delta_f_hz;
    let t_err = |r: &LinkTrial| r.timing_error_s().unwrap_or(f64::NAN);
    let t_applied = |r: &LinkTrial| r.est_delta_t_s.unwrap_or(f64::NAN) - (r.delta_t_s * fs).round() / fs;
    let timing = sorted_abs_timing(res);
    EstimatorRow {
        sweep,
        class,
        snr_db: setup.snr_db,
        hop_dq: setup.grid.hop_dq(),
        trials: res.len(),
        decoded: ok.len(),
        cfo_bias_hz: mean(&cfo_err),
        cfo_rmse_hz: mean(&|r| cfo_err(r).powi(2)).sqrt(),
        timing_bias_us: mean(&t_err) * 1e6,
        timing_rmse_us: mean(&|r| t_err(r).powi(2)).sqrt() * 1e6,
        timing_rmse_applied_us: mean(&|r| t_applied(r).powi(2)).sqrt() * 1e6,
        timing_p95_us: percentile(&timing, 0.95) * 1e6,
    }
}

/// Estimator error at one hop separation, with the configured impairments.
pub fn hop_sweep_point(cfg: &RunConfig, class: ChannelClass, hop_dq: usize, snr_db: f64) -> Result<EstimatorRow> {
    let mut c = cfg.clone();
    c.band.hop_dq = hop_dq;
    let setup = LinkSetup::for_class(class, snr_db, &c)?;
    let res = link_trials(&setup, cfg.sim.trials, class_seed(cfg, class, 6))?;
    Ok(estimator_stats("hop_dq", class, &setup, &res))
}

/// `estimator`: bias and RMSE of the frequency and timing estimates versus
/// SNR and versus Δq.
pub fn cmd_estimate(cfg: &RunConfig) -> Result<CommandReport> {
    let mut rows = Vec::new();
    for class in cfg.channel_classes() {
        for &snr in &cfg.estimate.snr_db {
            let setup = LinkSetup::for_class(class, snr, cfg)?;
            let res = link_trials(&setup, cfg.sim.trials, class_seed(cfg, class, 5))?;
            rows.push(estimator_stats("snr", class, &setup, &res));
        }
        for &dq in &cfg.estimate.hop_dq {
            rows.push(hop_sweep_point(cfg, class, dq, cfg.estimate.dq_snr_db)?);
        }
    }
    Ok(CommandReport {
        files: vec![write_rows(&cfg.output.out, "estimator", cfg.output.format, &rows)?],
        diffs: Vec::new(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    #[serde(serialize_with = "ser_class")]
    pub class: ChannelClass,
    pub tti_s: f64,
    pub n_rach: usize,
    pub p_collision: f64,
    pub p_e: f64,
    pub nmtc_t_tx_s: f64,
    pub nmtc_battery_mah: f64,
    pub nmtc_battery_pct: f64,
    pub nmtc_resources_hz_s: f64,
    pub emtc_t_tx_s: f64,
    pub emtc_t_rx_s: f64,
    pub emtc_battery_mah: f64,
    pub emtc_battery_pct: f64,
    pub emtc_resources_hz_s: f64,
    pub battery_reduction_pct: f64,
    pub resource_reduction_pct: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityRow {
    pub wakeup_min: u64,
    pub devices: u64,
}

/// Closed-form nMTC versus eMTC cost for one class.
pub fn compare_row(cfg: &RunConfig, class: ChannelClass) -> Result<CompareRow> {
    let radio = cfg.radio();
    let grid = cfg.band.grid(class)?;
    let tti = cfg.band.tti_s[class.index() as usize - 1];
    let p_c = p_channel_collision(grid.n_rach(), cfg.analytics.n_devices);
    let p_e = cfg.analytics.p_e;
    let t_tx = mean_tx_time_s(tti, p_c, p_e);
    let nmtc_mah = battery_per_access_mah(t_tx, 0.0, tx_current_ma(&radio), radio.i0_ma);
    let emtc = emtc_cost_model(class, &radio);
    let nmtc_res = resources_hz_s(cfg.band.total_bw_hz, t_tx);
    let emtc_res = resources_hz_s(cfg.analytics.emtc_preamble_bw_hz, emtc.t_tx_s);
    Ok(CompareRow {
        class,
        tti_s: tti,
        n_rach: grid.n_rach(),
        p_collision: p_c,
        p_e,
        nmtc_t_tx_s: t_tx,
        nmtc_battery_mah: nmtc_mah,
        nmtc_battery_pct: pct(nmtc_mah / radio.batt_capacity_mah),
        nmtc_resources_hz_s: nmtc_res,
        emtc_t_tx_s: emtc.t_tx_s,
        emtc_t_rx_s: emtc.t_rx_s,
        emtc_battery_mah: emtc.battery_mah,
        emtc_battery_pct: pct(emtc.battery_mah / radio.batt_capacity_mah),
        emtc_resources_hz_s: emtc_res,
        battery_reduction_pct: pct(1.0 - nmtc_mah / emtc.battery_mah),
        resource_reduction_pct: pct(1.0 - nmtc_res / emtc_res),
    })
}

/// `compare`, `capacity` and `diff_compare`.
pub fn cmd_compare(cfg: &RunConfig) -> Result<CommandReport> {
    let r = reference();
    let ac = &r.access_cost;
    let radio = cfg.radio();
    let mut report = CommandReport::default();
    let rows: Vec<CompareRow> = cfg
        .channel_classes()
        .into_iter()
        .map(|c| compare_row(cfg, c))
        .collect::<Result<_>>()?;
    for row in &rows {
        if !(row.nmtc_t_tx_s >= row.tti_s) {
            return Err(Error::Invariant(format!("{}: mean transmit time below one TTI", row.class)));
        }
    }
    if let Some(c1) = rows.iter().find(|r| r.class == ChannelClass::Cc1) {
        let d = &mut report.diffs;
        d.push(DiffRow::abs("CC1 p_collision", c1.p_collision, ac.collision_probability, 0.01));
        d.push(DiffRow::rel("CC1 nmtc_t_tx_s", c1.nmtc_t_tx_s, ac.mean_tx_time_s, ac.mean_tx_time_tolerance));
        d.push(DiffRow::rel("tx_current_ma", tx_current_ma(&radio), ac.tx_current_ma, 0.01));
        d.push(DiffRow::rel("CC1 nmtc_battery_mah", c1.nmtc_battery_mah, ac.nmtc_battery_mah, ac.battery_tolerance));
        d.push(DiffRow::rel("CC1 emtc_battery_mah", c1.emtc_battery_mah, ac.emtc_battery_mah, ac.battery_tolerance));
        d.push(DiffRow::rel(
            "CC1 nmtc_battery_pct",
            c1.nmtc_battery_pct,
            ac.nmtc_battery_fraction_pct,
            0.5,
        ));
        d.push(DiffRow::rel(
            "CC1 emtc_battery_pct",
            c1.emtc_battery_pct,
            ac.emtc_battery_fraction_pct,
            0.05,
        ));
        d.push(DiffRow::abs(
            "CC1 battery_reduction_pct",
            c1.battery_reduction_pct,
            ac.battery_reduction_pct,
            ac.reduction_tolerance_pts,
        ));
        d.push(DiffRow::rel("CC1 nmtc_resources_hz_s", c1.nmtc_resources_hz_s, ac.nmtc_resources_hz_s, 0.02));
        d.push(DiffRow::rel("CC1 emtc_resources_hz_s", c1.emtc_resources_hz_s, ac.emtc_resources_hz_s, 0.02));
        d.push(DiffRow::abs(
            "CC1 resource_reduction_pct",
            c1.resource_reduction_pct,
            ac.resource_reduction_pct,
            ac.reduction_tolerance_pts,
        ));
    }
    let cap: Vec<CapacityRow> = cfg
        .analytics
        .wakeup_min
        .iter()
        .map(|&m| CapacityRow {
            wakeup_min: m,
            devices: rach_capacity(cfg.band.rach_period_s, cfg.analytics.n_devices, m),
        })
        .collect();
    for c in &cap {
        let published = r.capacity.wakeup_min.iter().position(|&m| m == c.wakeup_min);
        let item = format!("capacity {} min", c.wakeup_min);
        match published.filter(|_| {
            same(cfg.band.rach_period_s, r.capacity.rach_period_s)
                && cfg.analytics.n_devices == r.capacity.devices_per_occasion
        }) {
            Some(i) => report
                .diffs
                .push(DiffRow::abs(item, c.devices as f64, r.capacity.devices[i] as f64, 0.0)),
            None => report.diffs.push(DiffRow::unreferenced(item, c.devices as f64)),
        }
    }
    let cp = &r.cp_overhead;
    let symbol_s = 1.0 / (cfg.band.total_bw_hz / cfg.band.num_subcarriers as f64);
    report.diffs.push(DiffRow::abs(
        "cp_overhead_symbol_pct",
        pct(cp_overhead(cfg.band.cp_rach_s, symbol_s, 1.0)),
        cp.symbol_overhead_pct,
        1.0,
    ));
    report.diffs.push(DiffRow::abs(
        "cp_overhead_large_cell_pct",
        pct(cp_overhead(cfg.analytics.large_cell_cp_s, symbol_s, cfg.analytics.duty_cycle)),
        cp.large_cell_overall_pct,
        0.5,
    ));

    let out = &cfg.output.out;
    let fmt = cfg.output.format;
    report.files.push(write_rows(out, "compare", fmt, &rows)?);
    report.files.push(write_rows(out, "capacity", fmt, &cap)?);
    report.files.push(write_rows(out, "diff_compare", fmt, &report.diffs)?);
    Ok(report)
}
