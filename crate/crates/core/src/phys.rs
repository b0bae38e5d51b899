//! Path-level SNR: transmitter noise, span amplifier ASE and nonlinear interference.
//!
//! The transmit power spectral density is the same for every symbol rate, so the ASE
//! and NLI contributions are independent of the configuration while the transmitter
//! term shrinks as the signal bandwidth grows beyond the 12.5 GHz reference.
//!
//! Nonlinear interference uses the incoherent closed-form GN model with the whole
//! C-band occupied at the reference PSD, regardless of the actual spectrum state.

use std::f64::consts::PI;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::netgraph::RoutePath;
use crate::txmodel::{ase_noise_power, AmplifierSpec, PhysicalConstants};
use crate::units::{dbm_to_watts, linear_to_db};
use crate::{Error, Result};

/// Symbol rate at which the launch power is 0 dBm per channel.
pub const REFERENCE_SYMBOL_RATE_GBD: f64 = 32.0;

pub const SLOT_WIDTH_GHZ: f64 = 12.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiberParams {
    pub attenuation_db_per_km: f64,
    pub beta2_ps2_per_km: f64,
    pub gamma_per_w_km: f64,
    pub span_length_km: f64,
    pub span_amp_noise_figure_db: f64,
    /// Occupied bandwidth assumed for nonlinear interference.
    pub loaded_bandwidth_ghz: f64,
}

impl Default for FiberParams {
    fn default() -> Self {
        Self {
            attenuation_db_per_km: 0.2,
            beta2_ps2_per_km: -21.7,
            gamma_per_w_km: 1.3,
            span_length_km: 80.0,
            span_amp_noise_figure_db: 5.0,
            loaded_bandwidth_ghz: 400.0 * SLOT_WIDTH_GHZ,
        }
    }
}

impl FiberParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("attenuation_db_per_km", self.attenuation_db_per_km),
            ("gamma_per_w_km", self.gamma_per_w_km),
            ("span_length_km", self.span_length_km),
            ("span_amp_noise_figure_db", self.span_amp_noise_figure_db),
            ("loaded_bandwidth_ghz", self.loaded_bandwidth_ghz),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!(
                    "fiber {name} must be positive, got {v}"
                )));
            }
        }
        if self.beta2_ps2_per_km == 0.0 || !self.beta2_ps2_per_km.is_finite() {
            return Err(Error::Config("fiber beta2 must be non-zero".into()));
        }
        Ok(())
    }

    fn span_amplifier(&self) -> AmplifierSpec {
        AmplifierSpec {
            noise_figure_db: self.span_amp_noise_figure_db,
            max_output_power_dbm: None,
        }
    }

    /// Power attenuation in 1/m.
    fn power_attenuation_per_m(&self) -> f64 {
        self.attenuation_db_per_km / (10.0 * std::f64::consts::LOG10_E) / 1e3
    }

    /// Lengths of the amplified spans of one link; only the last span may be short.
    pub fn span_lengths(&self, link_length_km: f64) -> impl Iterator<Item = f64> {
        let n = (link_length_km / self.span_length_km).ceil().max(1.0) as usize;
        let last = link_length_km - (n - 1) as f64 * self.span_length_km;
        let full = self.span_length_km;
        (0..n).map(move |i| if i + 1 == n { last } else { full })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Modulation {
    #[serde(rename = "QPSK")]
    Qpsk,
    #[serde(rename = "16QAM")]
    Qam16,
    #[serde(rename = "64QAM")]
    Qam64,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> u32 {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Modulation::Qpsk => "QPSK",
            Modulation::Qam16 => "16QAM",
            Modulation::Qam64 => "64QAM",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransceiverConfig {
    pub symbol_rate_gbd: u32,
    pub modulation: Modulation,
    pub required_snr_db: f64,
    pub channel_spacing_ghz: f64,
    pub width_slots: u32,
    pub data_rate_gbps: f64,
}

impl TransceiverConfig {
    pub fn label(&self) -> String {
        format!("{}@{}", self.modulation.as_str(), self.symbol_rate_gbd)
    }

    /// Ladder order: higher data rate first, narrower block on ties.
    pub fn ladder_cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .data_rate_gbps
            .total_cmp(&self.data_rate_gbps)
            .then(self.width_slots.cmp(&other.width_slots))
    }
}

pub const SYMBOL_RATES_GBD: [u32; 4] = [35, 70, 105, 140];

/// Required SNR in dB, indexed by modulation then symbol rate.
pub const REQUIRED_SNR_DB: [(Modulation, [f64; 4]); 3] = [
    (Modulation::Qpsk, [6.2, 6.7, 7.2, 7.7]),
    (Modulation::Qam16, [13.0, 13.5, 14.0, 14.5]),
    (Modulation::Qam64, [19.1, 19.6, 20.1, 20.6]),
];

/// Net line rate with dual polarization and 25 % FEC overhead.
fn net_rate_gbps(symbol_rate_gbd: u32, modulation: Modulation) -> f64 {
    // 2 · bits · SR · 0.8, kept in integers so that the rates are exact
    f64::from(2 * modulation.bits_per_symbol() * symbol_rate_gbd * 8) / 10.0
}

static CONFIG_LADDER: LazyLock<Vec<TransceiverConfig>> = LazyLock::new(|| {
    let mut v = Vec::with_capacity(12);
    for (modulation, snrs) in REQUIRED_SNR_DB {
        for (i, sr) in SYMBOL_RATES_GBD.into_iter().enumerate() {
            let width_slots = 3 * (i as u32 + 1);
            v.push(TransceiverConfig {
                symbol_rate_gbd: sr,
                modulation,
                required_snr_db: snrs[i],
                channel_spacing_ghz: f64::from(width_slots) * SLOT_WIDTH_GHZ,
                width_slots,
                data_rate_gbps: net_rate_gbps(sr, modulation),
            });
        }
    }
    v.sort_by(TransceiverConfig::ladder_cmp);
    v
});

/// All twelve configurations in ladder order.
pub fn config_ladder() -> &'static [TransceiverConfig] {
    &CONFIG_LADDER
}

pub fn find_config(modulation: Modulation, symbol_rate_gbd: u32) -> Option<TransceiverConfig> {
    config_ladder()
        .iter()
        .find(|c| c.modulation == modulation && c.symbol_rate_gbd == symbol_rate_gbd)
        .copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrMode {
    /// Transmitter and ASE noise only.
    LinearOnly,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrBreakdown {
    pub snr_tx_db: f64,
    pub snr_ase_db: f64,
    /// `+inf` when nonlinear interference is left out.
    pub snr_nli_db: f64,
    pub snr_total_db: f64,
}

/// Per-channel launch power at constant PSD.
pub fn launch_power_dbm(symbol_rate_gbd: f64) -> Result<f64> {
    if !(symbol_rate_gbd > 0.0) {
        return Err(Error::Domain(format!(
            "symbol rate must be positive, got {symbol_rate_gbd} GBd"
        )));
    }
    Ok(linear_to_db(symbol_rate_gbd / REFERENCE_SYMBOL_RATE_GBD))
}

fn require_spans(path: &RoutePath) -> Result<()> {
    if path.link_lengths_km.is_empty() {
        Err(Error::Domain("path has no links".into()))
    } else {
        Ok(())
    }
}

fn spans<'a>(path: &'a RoutePath, fiber: &'a FiberParams) -> impl Iterator<Item = f64> + 'a {
    path.link_lengths_km
        .iter()
        .flat_map(move |&l| fiber.span_lengths(l))
}

/// ASE-limited SNR over the signal bandwidth, in dB.
pub fn ase_snr(
    path: &RoutePath,
    symbol_rate_gbd: f64,
    fiber: &FiberParams,
    consts: &PhysicalConstants,
) -> Result<f64> {
    require_spans(path)?;
    let amp = fiber.span_amplifier();
    let mut noise_ref = 0.0;
    for span_km in spans(path, fiber) {
        noise_ref += ase_noise_power(2, fiber.attenuation_db_per_km * span_km, &amp, consts)?;
    }
    let in_band = noise_ref * symbol_rate_gbd * 1e9 / consts.reference_bandwidth;
    let signal = dbm_to_watts(launch_power_dbm(symbol_rate_gbd)?);
    Ok(linear_to_db(signal / in_band))
}

/// Nonlinear interference PSD (W/Hz) generated in one span of `span_km`.
pub fn gn_span_psd(span_km: f64, launch_psd_w_per_hz: f64, fiber: &FiberParams) -> f64 {
    let a = fiber.power_attenuation_per_m();
    let l = span_km * 1e3;
    let l_eff = (1.0 - (-a * l).exp()) / a;
    let l_eff_a = 1.0 / a;
    let beta2 = fiber.beta2_ps2_per_km.abs() * 1e-27; // s²/m
    let gamma = fiber.gamma_per_w_km * 1e-3; // 1/(W·m)
    let b = fiber.loaded_bandwidth_ghz * 1e9;
    (8.0 / 27.0)
        * gamma.powi(2)
        * launch_psd_w_per_hz.powi(3)
        * l_eff.powi(2)
        * ((PI.powi(2) / 2.0) * beta2 * l_eff_a * b.powi(2)).asinh()
        / (PI * beta2 * l_eff_a)
}

/// NLI-limited SNR in dB with incoherent accumulation over spans.
pub fn gn_nli_snr(path: &RoutePath, symbol_rate_gbd: f64, fiber: &FiberParams) -> Result<f64> {
    require_spans(path)?;
    let signal = dbm_to_watts(launch_power_dbm(symbol_rate_gbd)?);
    let bandwidth = symbol_rate_gbd * 1e9;
    let psd = signal / bandwidth;
    let nli_psd: f64 = spans(path, fiber).map(|s| gn_span_psd(s, psd, fiber)).sum();
    Ok(linear_to_db(signal / (nli_psd * bandwidth)))
}

/// Transmit OSNR (12.5 GHz reference) converted to an SNR over the signal bandwidth.
pub fn tx_snr_db(osnr_tx_db: f64, symbol_rate_gbd: f64, consts: &PhysicalConstants) -> f64 {
    osnr_tx_db - linear_to_db(symbol_rate_gbd * 1e9 / consts.reference_bandwidth)
}

fn combine(snr_tx_db: f64, snr_ase_db: f64, snr_nli_db: f64) -> SnrBreakdown {
    SnrBreakdown {
        snr_tx_db,
        snr_ase_db,
        snr_nli_db,
        snr_total_db: crate::units::inverse_sum_db([snr_tx_db, snr_ase_db, snr_nli_db]),
    }
}

pub fn path_snr(
    path: &RoutePath,
    config: &TransceiverConfig,
    osnr_tx_db: f64,
    fiber: &FiberParams,
    consts: &PhysicalConstants,
    mode: SnrMode,
) -> Result<SnrBreakdown> {
    if osnr_tx_db.is_nan() {
        return Err(Error::Domain("transmit OSNR is NaN".into()));
    }
    let sr = f64::from(config.symbol_rate_gbd);
    let nli = match mode {
        SnrMode::Full => gn_nli_snr(path, sr, fiber)?,
        SnrMode::LinearOnly => f64::INFINITY,
    };
    Ok(combine(
        tx_snr_db(osnr_tx_db, sr, consts),
        ase_snr(path, sr, fiber, consts)?,
        nli,
    ))
}

/// Configurations whose required SNR is met, in ladder order.
pub fn feasible_configs(
    path: &RoutePath,
    osnr_tx_db: f64,
    fiber: &FiberParams,
    consts: &PhysicalConstants,
    mode: SnrMode,
) -> Result<Vec<TransceiverConfig>> {
    let budget = PathBudget::new(path, fiber, consts)?;
    Ok(budget.feasible(osnr_tx_db, mode))
}

/// Configuration-independent noise of one route, evaluated once and reused for
/// every configuration and transmit OSNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathBudget {
    snr_ase_db: f64,
    snr_nli_db: f64,
    reference_bandwidth: f64,
}

impl PathBudget {
    pub fn new(path: &RoutePath, fiber: &FiberParams, consts: &PhysicalConstants) -> Result<Self> {
        Ok(Self {
            snr_ase_db: ase_snr(path, REFERENCE_SYMBOL_RATE_GBD, fiber, consts)?,
            snr_nli_db: gn_nli_snr(path, REFERENCE_SYMBOL_RATE_GBD, fiber)?,
            reference_bandwidth: consts.reference_bandwidth,
        })
    }

    pub fn snr(&self, config: &TransceiverConfig, osnr_tx_db: f64, mode: SnrMode) -> SnrBreakdown {
        let tx = osnr_tx_db
            - linear_to_db(f64::from(config.symbol_rate_gbd) * 1e9 / self.reference_bandwidth);
        let nli = match mode {
            SnrMode::Full => self.snr_nli_db,
            SnrMode::LinearOnly => f64::INFINITY,
        };
        combine(tx, self.snr_ase_db, nli)
    }

    pub fn is_feasible(&self, config: &TransceiverConfig, osnr_tx_db: f64, mode: SnrMode) -> bool {
        self.snr(config, osnr_tx_db, mode).snr_total_db >= config.required_snr_db
    }

    pub fn feasible(&self, osnr_tx_db: f64, mode: SnrMode) -> Vec<TransceiverConfig> {
        config_ladder()
            .iter()
            .filter(|c| self.is_feasible(c, osnr_tx_db, mode))
            .copied()
            .collect()
    }
}
