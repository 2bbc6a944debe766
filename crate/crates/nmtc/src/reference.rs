//! Published reference values, embedded at build time from
//! `data/reference_values.toml`.

use std::sync::OnceLock;

use nmtc_core::ChannelClass;
use serde::Deserialize;

const SOURCE: &str = include_str!("../data/reference_values.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceValues {
    pub effective_bandwidth: EffectiveBandwidthRef,
    pub rach_config: RachConfigRef,
    pub operating_snr: OperatingSnrRef,
    pub tti: TtiRef,
    pub access_cost: AccessCostRef,
    pub capacity: CapacityRef,
    pub cp_overhead: CpOverheadRef,
    pub timing: TimingRef,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveBandwidthRef {
    pub threshold: f64,
    pub w_khz: [f64; 4],
    pub grid_khz: f64,
    pub cc1_grid_khz: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RachConfigRef {
    pub n_devices: usize,
    pub delta_tau_tolerance_pct: f64,
    pub rows: Vec<RachConfigRow>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RachConfigRow {
    pub bandwidth_hz: f64,
    pub class: u8,
    pub tdm_multiplicity: usize,
    pub n_rach: usize,
    pub w_khz: f64,
    pub delta_tau_c_pct: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatingSnrRef {
    pub tolerance_db: f64,
    pub nmtc_tx1: [f64; 4],
    pub emtc_tx1: [f64; 4],
    pub emtc_tx23: [f64; 4],
    pub emtc_rx12: [f64; 4],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TtiRef {
    pub nmtc_tx1: [f64; 4],
    pub emtc_tx1: [f64; 4],
    pub emtc_rx1: [f64; 4],
    pub emtc_tx2: [f64; 4],
    pub emtc_rx2: [f64; 4],
    pub emtc_tx3: [f64; 4],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessCostRef {
    pub collision_probability: f64,
    pub p_e: f64,
    pub mean_tx_time_s: f64,
    pub mean_tx_time_tolerance: f64,
    pub tx_current_ma: f64,
    pub nmtc_battery_mah: f64,
    pub emtc_battery_mah: f64,
    pub battery_tolerance: f64,
    pub nmtc_battery_fraction_pct: f64,
    pub emtc_battery_fraction_pct: f64,
    pub battery_reduction_pct: f64,
    pub nmtc_resources_hz_s: f64,
    pub emtc_resources_hz_s: f64,
    pub resource_reduction_pct: f64,
    pub reduction_tolerance_pts: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityRef {
    pub rach_period_s: f64,
    pub devices_per_occasion: usize,
    pub wakeup_min: Vec<u64>,
    pub devices: Vec<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpOverheadRef {
    pub symbol_cp_s: f64,
    pub symbol_overhead_pct: f64,
    pub large_cell_cp_s: f64,
    pub duty_cycle: f64,
    pub large_cell_overall_pct: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingRef {
    pub p95_us: f64,
}

/// Per-class slot of a CC1..CC4 array.
pub fn by_class<T: Copy>(values: &[T; 4], class: ChannelClass) -> T {
    values[class.index() as usize - 1]
}

impl ReferenceValues {
    pub fn rows_for_bandwidth(&self, bandwidth_hz: f64) -> impl Iterator<Item = &RachConfigRow> {
        self.rach_config
            .rows
            .iter()
            .filter(move |r| (r.bandwidth_hz - bandwidth_hz).abs() < 1e-6 * bandwidth_hz)
    }
}

/// The embedded table, parsed once.
pub fn reference() -> &'static ReferenceValues {
    static CELL: OnceLock<ReferenceValues> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(SOURCE).expect("embedded reference data parses"))
}
