//! Run configuration: a TOML file whose every key is optional. Missing keys
//! take the published defaults, unknown keys are rejected.

use std::path::{Path, PathBuf};

use nmtc_core::{ChannelClass, RachConfig, RachGrid, RadioParams};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Master seed; every random stream is derived from it.
    pub seed: u64,
    /// Channel classes to run, by index 1..=4.
    pub classes: Vec<u8>,
    pub radio: RadioSection,
    pub analytics: AnalyticsSection,
    pub band: BandSection,
    pub sim: SimSection,
    pub estimate: EstimateSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            classes: vec![1, 2, 3, 4],
            radio: RadioSection::default(),
            analytics: AnalyticsSection::default(),
            band: BandSection::default(),
            sim: SimSection::default(),
            estimate: EstimateSection::default(),
            output: OutputSection::default(),
        }
    }
}

/// Mirrors [`RadioParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioSection {
    pub p_ul_dbm: f64,
    pub beta_db: f64,
    pub zeta_ul_db: f64,
    pub zeta_dl_db: f64,
    pub n0_dbm_hz: f64,
    pub p_dl_dbm: f64,
    pub pi_db_hz: f64,
    pub eta: f64,
    pub v_batt: f64,
    pub i0_ma: f64,
    pub batt_capacity_mah: f64,
}

impl Default for RadioSection {
    fn default() -> Self {
        RadioParams::default().into()
    }
}

impl From<RadioParams> for RadioSection {
    fn from(r: RadioParams) -> Self {
        Self {
            p_ul_dbm: r.p_ul_dbm,
            beta_db: r.beta_db,
            zeta_ul_db: r.zeta_ul_db,
            zeta_dl_db: r.zeta_dl_db,
            n0_dbm_hz: r.n0_dbm_hz,
            p_dl_dbm: r.p_dl_dbm,
            pi_db_hz: r.pi_db_hz,
            eta: r.eta,
            v_batt: r.v_batt,
            i0_ma: r.i0_ma,
            batt_capacity_mah: r.batt_capacity_mah,
        }
    }
}

impl From<RadioSection> for RadioParams {
    fn from(r: RadioSection) -> Self {
        Self {
            p_ul_dbm: r.p_ul_dbm,
            beta_db: r.beta_db,
            zeta_ul_db: r.zeta_ul_db,
            zeta_dl_db: r.zeta_dl_db,
            n0_dbm_hz: r.n0_dbm_hz,
            p_dl_dbm: r.p_dl_dbm,
            pi_db_hz: r.pi_db_hz,
            eta: r.eta,
            v_batt: r.v_batt,
            i0_ma: r.i0_ma,
            batt_capacity_mah: r.batt_capacity_mah,
        }
    }
}

/// Closed-form tables and the configuration optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyticsSection {
    /// Total bandwidth W the optimizer splits into channels.
    pub bandwidth_hz: f64,
    /// Second bandwidth reproduced alongside the first.
    pub alt_bandwidth_hz: f64,
    pub threshold: f64,
    pub effective_grid_hz: f64,
    pub spacing_hz: f64,
    pub n_devices: usize,
    pub msg_bits: usize,
    /// Largest N in the penalty-versus-N sweep.
    pub max_devices: usize,
    /// eMTC preamble and single-PRB bandwidths.
    pub emtc_preamble_bw_hz: f64,
    pub emtc_prb_bw_hz: f64,
    /// Decoding error probability in the mean transmit time.
    pub p_e: f64,
    pub wakeup_min: Vec<u64>,
    pub duty_cycle: f64,
    pub large_cell_cp_s: f64,
}

impl Default for AnalyticsSection {
    fn default() -> Self {
        Self {
            bandwidth_hz: 180e3,
            alt_bandwidth_hz: 1.08e6,
            threshold: 0.10,
            effective_grid_hz: 1e3,
            spacing_hz: 3e3,
            n_devices: 7,
            msg_bits: 24,
            max_devices: 20,
            emtc_preamble_bw_hz: 1.08e6,
            emtc_prb_bw_hz: 180e3,
            p_e: 0.01,
            wakeup_min: vec![1, 15, 30, 60],
            duty_cycle: 0.1,
            large_cell_cp_s: 235e-6,
        }
    }
}

/// The simulated air interface. Per-class arrays are ordered CC1..CC4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandSection {
    pub total_bw_hz: f64,
    pub num_subcarriers: usize,
    pub cp_rach_s: f64,
    pub cp_traffic_s: f64,
    pub rach_period_s: f64,
    pub max_rtt_s: f64,
    pub hop_dq: usize,
    pub group_len: usize,
    pub reference_spacing: usize,
    pub cell_id: u16,
    pub channel_bw_hz: [f64; 4],
    pub tdm_multiplicity: [usize; 4],
    pub tti_s: [f64; 4],
}

impl Default for BandSection {
    fn default() -> Self {
        let rc = RachConfig::default();
        Self {
            total_bw_hz: 180e3,
            num_subcarriers: 60,
            cp_rach_s: rc.cp_rach_s,
            cp_traffic_s: rc.cp_traffic_s,
            rach_period_s: rc.rach_period_s,
            max_rtt_s: rc.max_rtt_s,
            hop_dq: rc.hop_dq,
            group_len: rc.group_len,
            reference_spacing: rc.reference_spacing,
            cell_id: 1,
            channel_bw_hz: ChannelClass::ALL.map(|c| c.nominal_channel().0),
            tdm_multiplicity: ChannelClass::ALL.map(|c| c.nominal_channel().1),
            tti_s: ChannelClass::ALL.map(|c| c.nominal_tti_s()),
        }
    }
}

impl BandSection {
    /// Layout of `class` with a slot of `tti_s`.
    pub fn rach_config(&self, class: ChannelClass, tti_s: f64) -> RachConfig {
        let i = class.index() as usize - 1;
        let mut cfg = RachConfig {
            channel_bw_hz: self.channel_bw_hz[i],
            tdm_multiplicity: self.tdm_multiplicity[i],
            n_ofdm: 0,
            hop_dq: self.hop_dq,
            group_len: self.group_len,
            cp_rach_s: self.cp_rach_s,
            cp_traffic_s: self.cp_traffic_s,
            rach_period_s: self.rach_period_s,
            max_rtt_s: self.max_rtt_s,
            reference_spacing: self.reference_spacing,
        };
        cfg.n_ofdm = cfg.n_ofdm_for_tti(tti_s, self.total_bw_hz, self.num_subcarriers);
        cfg
    }

    pub fn grid(&self, class: ChannelClass) -> Result<RachGrid> {
        self.grid_with_tti(class, self.tti_s[class.index() as usize - 1])
    }

    pub fn grid_with_tti(&self, class: ChannelClass, tti_s: f64) -> Result<RachGrid> {
        let cfg = self.rach_config(class, tti_s);
        Ok(RachGrid::build(self.total_bw_hz, self.num_subcarriers, &cfg)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FadingKind {
    Flat,
    Epa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    /// Full waveform path with blind decoding.
    Waveform,
    /// Collisions always fail, other attempts fail with `abstract_per`.
    Abstract,
}

/// Monte Carlo campaigns and link-level sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub trials: usize,
    pub n_devices: usize,
    pub snr_db: Vec<f64>,
    pub fading: FadingKind,
    pub doppler_hz: f64,
    pub delta_t_max_s: f64,
    pub delta_f_max_hz: f64,
    pub link: LinkKind,
    pub abstract_per: f64,
    pub max_attempts: u32,
    /// Run the TTI calibration as part of `simulate`.
    pub calibrate: bool,
    pub target_per: f64,
    pub calibration_trials: usize,
    /// Calibration never goes beyond this multiple of the nominal TTI.
    pub max_tti_factor: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            trials: 1000,
            n_devices: 7,
            snr_db: vec![-4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0],
            fading: FadingKind::Epa,
            doppler_hz: 1.0,
            delta_t_max_s: 35e-6,
            delta_f_max_hz: 50.0,
            link: LinkKind::Waveform,
            abstract_per: 0.01,
            max_attempts: 100,
            calibrate: false,
            target_per: 0.01,
            calibration_trials: 10_000,
            max_tti_factor: 2.0,
        }
    }
}

/// Estimator benchmark sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateSection {
    pub snr_db: Vec<f64>,
    pub hop_dq: Vec<usize>,
    /// SNR of the hop-separation sweep.
    pub dq_snr_db: f64,
}

impl Default for EstimateSection {
    fn default() -> Self {
        Self {
            snr_db: vec![-4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0],
            hop_dq: vec![1, 2, 3, 5, 7, 9],
            dq_snr_db: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub out: PathBuf,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            out: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub classes: Option<Vec<u8>>,
    pub bandwidth_hz: Option<f64>,
    pub threshold: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.trials {
            self.sim.trials = v;
        }
        if let Some(v) = &o.classes {
            self.classes = v.clone();
        }
        if let Some(v) = o.bandwidth_hz {
            self.analytics.bandwidth_hz = v;
        }
        if let Some(v) = o.threshold {
            self.analytics.threshold = v;
        }
        if let Some(v) = &o.out {
            self.output.out = v.clone();
        }
        if let Some(v) = o.format {
            self.output.format = v;
        }
        self.validate()
    }

    pub fn radio(&self) -> RadioParams {
        self.radio.into()
    }

    pub fn channel_classes(&self) -> Vec<ChannelClass> {
        self.classes
            .iter()
            .filter_map(|&c| ChannelClass::from_index(c))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.classes.is_empty() {
            return bad("classes must not be empty");
        }
        if let Some(c) = self.classes.iter().find(|&&c| ChannelClass::from_index(c).is_none()) {
            return Err(Error::Config(format!("unknown channel class {c}")));
        }
        let mut sorted = self.classes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.classes.len() {
            return bad("classes must not repeat");
        }
        self.radio().validate()?;
        let a = &self.analytics;
        if !(a.bandwidth_hz > 0.0) || !(a.alt_bandwidth_hz > 0.0) {
            return bad("analytics bandwidths must be positive");
        }
        if !(a.threshold > 0.0 && a.threshold < 1.0) {
            return bad("threshold must lie in (0, 1)");
        }
        if !(a.spacing_hz > 0.0) || !(a.effective_grid_hz > 0.0) {
            return bad("search grids must be positive");
        }
        if a.n_devices == 0 || a.max_devices == 0 || a.msg_bits == 0 {
            return bad("device counts and message size must be positive");
        }
        if !(0.0..1.0).contains(&a.p_e) {
            return bad("p_e must lie in [0, 1)");
        }
        let s = &self.sim;
        if s.trials == 0 || s.calibration_trials == 0 {
            return bad("trial counts must be positive");
        }
        if s.n_devices == 0 || s.max_attempts == 0 {
            return bad("sim device count and attempt cap must be positive");
        }
        if s.snr_db.iter().any(|v| !v.is_finite()) || self.estimate.snr_db.iter().any(|v| !v.is_finite()) {
            return bad("SNR lists must be finite");
        }
        if !(0.0..1.0).contains(&s.abstract_per) || !(s.target_per > 0.0 && s.target_per < 1.0) {
            return bad("error rates must lie in [0, 1)");
        }
        if !(s.max_tti_factor >= 1.0) {
            return bad("max_tti_factor must be at least 1");
        }
        if !(s.delta_t_max_s >= 0.0) || s.delta_t_max_s > self.band.cp_rach_s {
            return bad("delta_t_max_s must lie within the random access CP");
        }
        if !(s.delta_f_max_hz >= 0.0) || !(s.doppler_hz >= 0.0) {
            return bad("offsets must be nonnegative");
        }
        if self.band.tti_s.iter().any(|t| !(*t > 0.0)) {
            return bad("tti_s entries must be positive");
        }
        for class in self.channel_classes() {
            self.band.grid(class)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn defaults_round_trip() {
        let text = toml::to_string(&RunConfig::default()).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("sede = 3").is_err());
        assert!(RunConfig::from_toml("[radio]\np_ul = 20").is_err());
        assert!(RunConfig::from_toml("[sim]\nlink = \"magic\"").is_err());
    }

    #[test]
    fn partial_sections_keep_defaults() {
        let cfg = RunConfig::from_toml("seed = 9\n[radio]\np_ul_dbm = 23.0").unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.radio.p_ul_dbm, 23.0);
        assert_eq!(cfg.radio.zeta_ul_db, 5.0);
        assert_eq!(cfg.sim, SimSection::default());
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(RunConfig::from_toml("classes = [5]").is_err());
        assert!(RunConfig::from_toml("classes = []").is_err());
        assert!(RunConfig::from_toml("[analytics]\nthreshold = 1.5").is_err());
        assert!(RunConfig::from_toml("[sim]\ndelta_t_max_s = 1e-3").is_err());
        assert!(RunConfig::from_toml("[band]\nhop_dq = 12").is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = RunConfig::default();
        cfg.apply(&Overrides {
            seed: Some(5),
            bandwidth_hz: Some(1.08e6),
            classes: Some(vec![4]),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.analytics.bandwidth_hz, 1.08e6);
        assert_eq!(cfg.channel_classes(), vec![ChannelClass::Cc4]);
    }

    #[test]
    fn default_grids_match_nominal_symbol_counts() {
        let band = BandSection::default();
        let n: Vec<usize> = ChannelClass::ALL.iter().map(|&c| band.grid(c).unwrap().n_ofdm()).collect();
        assert_eq!(n, vec![664, 264, 56, 16]);
    }
}
