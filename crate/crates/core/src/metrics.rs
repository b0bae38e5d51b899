//! Scenario metrics: underprovisioning, source counts and the comb-block cost bound.

use serde::{Deserialize, Serialize};

use crate::netgraph::Demand;
use crate::planner::{LightSource, PlanResult, PolicyMode};
use crate::{Error, Result};

/// Fraction of the requested traffic that is not provisioned. Only demands that
/// fall short contribute; overshoot on one demand never offsets another's shortfall.
pub fn underprovisioning(demands: &[Demand], plan: &PlanResult) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = demands
        .iter()
        .map(|d| {
            let p = plan.provisioned_gbps.get(&d.id).copied().unwrap_or(0.0);
            (d.requested_gbps, p)
        })
        .collect();
    underprovisioning_ratio(&pairs)
}

/// Same as [`underprovisioning`] on plain `(requested, provisioned)` pairs.
pub fn underprovisioning_ratio(pairs: &[(f64, f64)]) -> Result<f64> {
    let total: f64 = pairs.iter().map(|&(r, _)| r).sum();
    if !(total > 0.0) {
        return Err(Error::Domain("total requested traffic is zero".into()));
    }
    let short: f64 = pairs
        .iter()
        .filter(|&&(r, p)| p < r)
        .fold(0.0, |acc, &(r, p)| acc + (r - p));
    Ok((short / total).clamp(0.0, 1.0))
}

/// Lasers in use: one per lightpath for single lasers, one per comb source otherwise.
pub fn wavelength_source_count(plan: &PlanResult) -> usize {
    match plan.policy.mode {
        PolicyMode::Sws => plan.lp_count(),
        PolicyMode::FlexibleFsr | PolicyMode::FixedFsr => {
            let lasers = plan
                .lightpaths
                .iter()
                .filter(|lp| lp.source == LightSource::Sws)
                .count();
            plan.mws_instances.len() + lasers
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockCost {
    /// Break-even comb block price as a multiple of one single-laser source.
    Viable(f64),
    /// Even a free comb block cannot compensate the extra lightpaths.
    NeverViable,
}

impl BlockCost {
    pub fn multiple(self) -> Option<f64> {
        match self {
            BlockCost::Viable(m) => Some(m),
            BlockCost::NeverViable => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostAnalysis {
    pub laser_share: f64,
    pub n_sws_lp: usize,
    pub n_mws_lp: usize,
    pub n_mws: usize,
    pub max_block_cost: BlockCost,
}

impl CostAnalysis {
    pub fn new(n_sws_lp: usize, n_mws_lp: usize, n_mws: usize, laser_share: f64) -> Result<Self> {
        Ok(Self {
            laser_share,
            n_sws_lp,
            n_mws_lp,
            n_mws,
            max_block_cost: max_mws_block_cost(n_sws_lp, n_mws_lp, n_mws, laser_share)?,
        })
    }
}

/// Highest comb block price, in units of a single laser, at which the comb scenario
/// costs no more than the single-laser one. A transponder costs 1, of which the laser
/// is the share `s`; the comb scenario pays `1 - s` per lightpath plus its blocks.
pub fn max_mws_block_cost(
    n_sws_lp: usize,
    n_mws_lp: usize,
    n_mws: usize,
    laser_share: f64,
) -> Result<BlockCost> {
    if !(laser_share > 0.0 && laser_share < 1.0) {
        return Err(Error::Domain(format!(
            "laser share must lie in (0, 1), got {laser_share}"
        )));
    }
    if n_mws == 0 {
        return Ok(BlockCost::NeverViable);
    }
    let c_block = (n_sws_lp as f64 - n_mws_lp as f64 * (1.0 - laser_share)) / n_mws as f64;
    if c_block <= 0.0 {
        return Ok(BlockCost::NeverViable);
    }
    Ok(BlockCost::Viable(c_block / laser_share))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMetrics {
    pub art_tbps: f64,
    pub provisioned_tbps: f64,
    pub lp_count: usize,
    pub ws_count: usize,
    pub up_ratio: f64,
    pub extra_lp_ratio: Option<f64>,
    /// Fixed-FSR only.
    pub fallback_count: Option<usize>,
}

pub fn scenario_metrics(
    demands: &[Demand],
    plan: &PlanResult,
    baseline: Option<&PlanResult>,
) -> Result<ScenarioMetrics> {
    let art_tbps = demands.iter().map(|d| d.requested_gbps).sum::<f64>() / 1000.0;
    let extra_lp_ratio = baseline.and_then(|b| {
        let base = b.lp_count();
        (base > 0).then(|| (plan.lp_count() as f64 - base as f64) / base as f64)
    });
    Ok(ScenarioMetrics {
        art_tbps,
        provisioned_tbps: plan.total_provisioned_gbps() / 1000.0,
        lp_count: plan.lp_count(),
        ws_count: wavelength_source_count(plan),
        up_ratio: underprovisioning(demands, plan)?,
        extra_lp_ratio,
        fallback_count: (plan.policy.mode == PolicyMode::FixedFsr).then_some(plan.fallbacks.len()),
    })
}
