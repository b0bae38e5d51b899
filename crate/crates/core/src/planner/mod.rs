//! Routing, configuration and spectrum assignment (RCSA).
//!
//! Demands are served one after another, largest first. Each lightpath takes the
//! first of the k shortest routes that admits a placement; its configuration is
//! picked by linear SNR (transmitter + ASE), then checked against the full SNR
//! including nonlinear interference and downgraded in place when it falls short.
//!
//! Three policies are supported:
//!
//! - `sws`: every lightpath has its own laser.
//! - `fixed_fsr`: demands that would need at least `n_cutoff` lightpaths get comb
//!   sources whose lines share one route, one configuration and one contiguous block
//!   reserved for all lines up front. Smaller demands, and demands for which no
//!   comb block fits, are served by single lasers.
//! - `flexible_fsr`: lines are unconstrained, so planning equals the `sws` case with a
//!   reduced transmit OSNR; lines are grouped into sources per terminal node afterwards.

mod engine;

pub use engine::{downgrade, group_flexible_mws, plan, Planner, PlannerParams};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::netgraph::{DemandId, RoutePath};
use crate::phys::{SnrBreakdown, TransceiverConfig};
use crate::spectrum::{LightpathId, MwsId, SlotBlock, SlotState, SpectrumGrid};
use crate::txmodel::FsrMode;
use crate::{Error, Result};

/// Transmit OSNR of the reference laser-based transponder.
pub const BASE_OSNR_TX_DB: f64 = 36.0;

/// Transmit OSNR penalty assumed for fixed-FSR comb sources.
pub const FIXED_FSR_PENALTY_DB: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyMode {
    Sws,
    FixedFsr,
    FlexibleFsr,
}

impl PolicyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyMode::Sws => "sws",
            PolicyMode::FixedFsr => "fixed_fsr",
            PolicyMode::FlexibleFsr => "flexible_fsr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerPolicy {
    pub mode: PolicyMode,
    pub n_lines: u32,
    pub n_cutoff: u32,
    pub osnr_tx_penalty_db: f64,
    pub base_osnr_tx_db: f64,
}

impl PlannerPolicy {
    pub fn sws() -> Self {
        Self {
            mode: PolicyMode::Sws,
            n_lines: 1,
            n_cutoff: 1,
            osnr_tx_penalty_db: 0.0,
            base_osnr_tx_db: BASE_OSNR_TX_DB,
        }
    }

    pub fn fixed_fsr(n_lines: u32, n_cutoff: u32) -> Self {
        Self {
            mode: PolicyMode::FixedFsr,
            n_lines,
            n_cutoff,
            osnr_tx_penalty_db: FIXED_FSR_PENALTY_DB,
            base_osnr_tx_db: BASE_OSNR_TX_DB,
        }
    }

    pub fn flexible_fsr(n_lines: u32, penalty_db: f64) -> Self {
        Self {
            mode: PolicyMode::FlexibleFsr,
            n_lines,
            n_cutoff: 1,
            osnr_tx_penalty_db: penalty_db,
            base_osnr_tx_db: BASE_OSNR_TX_DB,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.osnr_tx_penalty_db >= 0.0) || !self.osnr_tx_penalty_db.is_finite() {
            return Err(Error::Config(format!(
                "OSNR penalty must be >= 0 dB, got {}",
                self.osnr_tx_penalty_db
            )));
        }
        if !self.base_osnr_tx_db.is_finite() {
            return Err(Error::Config("base transmit OSNR must be finite".into()));
        }
        match self.mode {
            PolicyMode::Sws => Ok(()),
            PolicyMode::FixedFsr | PolicyMode::FlexibleFsr if self.n_lines == 0 => {
                Err(Error::Config("comb sources need at least one line".into()))
            }
            PolicyMode::FixedFsr if !(1..=self.n_lines).contains(&self.n_cutoff) => {
                Err(Error::Config(format!(
                    "n_cutoff must lie in 1..={}, got {}",
                    self.n_lines, self.n_cutoff
                )))
            }
            _ => Ok(()),
        }
    }

    /// Short identifier such as `fixed_fsr_n4_c2_p1`.
    pub fn label(&self) -> String {
        match self.mode {
            PolicyMode::Sws => "sws".to_string(),
            PolicyMode::FixedFsr => format!(
                "fixed_fsr_n{}_c{}_p{}",
                self.n_lines, self.n_cutoff, self.osnr_tx_penalty_db
            ),
            PolicyMode::FlexibleFsr => {
                format!(
                    "flexible_fsr_n{}_p{}",
                    self.n_lines, self.osnr_tx_penalty_db
                )
            }
        }
    }

    /// Transmit OSNR of comb-fed lightpaths under this policy.
    pub fn mws_osnr_tx_db(&self) -> f64 {
        self.base_osnr_tx_db - self.osnr_tx_penalty_db
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightSource {
    Sws,
    Mws { id: MwsId, line: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lightpath {
    pub id: LightpathId,
    pub demand: DemandId,
    /// Node hosting the transmitter.
    pub terminal: usize,
    pub route: RoutePath,
    pub config: TransceiverConfig,
    /// May be wider than the configuration after a downgrade.
    pub block: SlotBlock,
    pub source: LightSource,
    pub snr: SnrBreakdown,
    pub data_rate_gbps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineState {
    /// Unused; for fixed-FSR sources its slots stay reserved.
    Inactive,
    Active(LightpathId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MwsInstance {
    pub id: MwsId,
    pub terminal: usize,
    pub fsr_mode: FsrMode,
    pub lines: Vec<LineState>,
    /// Fixed-FSR only: the single demand, route, configuration and block of all lines.
    pub demand: Option<DemandId>,
    pub route: Option<RoutePath>,
    pub config: Option<TransceiverConfig>,
    pub block: Option<SlotBlock>,
}

impl MwsInstance {
    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn active_lines(&self) -> usize {
        self.lines
            .iter()
            .filter(|l| matches!(l, LineState::Active(_)))
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NoRoute,
    NoSpectrum,
    NoFeasibleConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub demand: DemandId,
    pub shortfall_gbps: f64,
    pub reason: FailureReason,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub policy: PlannerPolicy,
    pub lightpaths: Vec<Lightpath>,
    pub mws_instances: Vec<MwsInstance>,
    pub provisioned_gbps: BTreeMap<DemandId, f64>,
    pub failures: Vec<Failure>,
    /// Fixed-FSR demands that fell back to single lasers because no comb block fit.
    pub fallbacks: Vec<DemandId>,
    pub grid: SpectrumGrid,
}

impl PlanResult {
    pub fn lp_count(&self) -> usize {
        self.lightpaths.len()
    }

    pub fn total_provisioned_gbps(&self) -> f64 {
        self.provisioned_gbps.values().sum()
    }

    /// Checks the structural invariants of a finished plan: slot conservation, unique
    /// slot ownership with spectrum continuity, SNR margins, provisioning sums and the
    /// fixed-FSR line tiling.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let grid = &self.grid;
        let slots = grid.slots_per_link();
        for link in 0..grid.link_count() {
            let c = grid.counts(link);
            if c.free + c.used + c.reserved != slots {
                return Err(format!("link {link}: slot counts {c:?} do not add up"));
            }
        }

        for (i, lp) in self.lightpaths.iter().enumerate() {
            if lp.id != i {
                return Err(format!("lightpath at index {i} has id {}", lp.id));
            }
            if lp.block.width < lp.config.width_slots as usize {
                return Err(format!(
                    "lp {}: block narrower than its configuration",
                    lp.id
                ));
            }
            if lp.snr.snr_total_db < lp.config.required_snr_db {
                return Err(format!(
                    "lp {}: SNR {:.2} dB below the {:.2} dB required",
                    lp.id, lp.snr.snr_total_db, lp.config.required_snr_db
                ));
            }
            for &link in &lp.route.links {
                for s in lp.block.slots() {
                    if grid.state(link, s) != SlotState::Used(lp.id) {
                        return Err(format!(
                            "lp {}: slot {s} on link {link} is {}",
                            lp.id,
                            grid.state(link, s)
                        ));
                    }
                }
            }
        }

        // every used slot must belong to a lightpath that actually crosses the link
        for link in 0..grid.link_count() {
            for (s, state) in grid.link_states(link).iter().enumerate() {
                match *state {
                    SlotState::Free => {}
                    SlotState::Used(id) => {
                        let Some(lp) = self.lightpaths.get(id) else {
                            return Err(format!("link {link} slot {s}: unknown lp {id}"));
                        };
                        if !lp.route.links.contains(&link) || !lp.block.slots().contains(&s) {
                            return Err(format!("link {link} slot {s}: stray owner lp {id}"));
                        }
                    }
                    SlotState::Reserved(m) => {
                        let Some(res) = grid.reservation(m) else {
                            return Err(format!("link {link} slot {s}: unknown source {m}"));
                        };
                        let line = (s - res.block.start) / res.line_width;
                        if !res.links.contains(&link)
                            || !res.block.slots().contains(&s)
                            || res.active[line].is_some()
                        {
                            return Err(format!("link {link} slot {s}: stray reservation {m}"));
                        }
                    }
                }
            }
        }

        let mut sums: BTreeMap<DemandId, f64> = BTreeMap::new();
        for lp in &self.lightpaths {
            *sums.entry(lp.demand).or_default() += lp.data_rate_gbps;
        }
        for (d, &p) in &self.provisioned_gbps {
            let s = sums.get(d).copied().unwrap_or(0.0);
            if (s - p).abs() > 1e-6 {
                return Err(format!("demand {d}: provisioned {p} != lightpath sum {s}"));
            }
        }

        for m in &self.mws_instances {
            if m.fsr_mode != FsrMode::Fixed {
                continue;
            }
            let (Some(route), Some(config), Some(block), Some(demand)) =
                (&m.route, &m.config, &m.block, m.demand)
            else {
                return Err(format!(
                    "fixed source {} lacks route/config/block/demand",
                    m.id
                ));
            };
            let Some(res) = grid.reservation(m.id) else {
                return Err(format!("fixed source {} has no reservation", m.id));
            };
            if res.block != *block || res.line_width * m.n_lines() != block.width {
                return Err(format!(
                    "fixed source {}: lines do not tile its block",
                    m.id
                ));
            }
            for (line, state) in m.lines.iter().enumerate() {
                if let LineState::Active(id) = *state {
                    let lp = &self.lightpaths[id];
                    if lp.route.nodes != route.nodes
                        || lp.config != *config
                        || lp.demand != demand
                        || lp.block != res.line_block(line)
                        || lp.source != (LightSource::Mws { id: m.id, line })
                    {
                        return Err(format!("fixed source {} line {line} is inconsistent", m.id));
                    }
                }
            }
        }
        Ok(())
    }
}
