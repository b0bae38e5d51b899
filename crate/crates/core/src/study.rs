//! Traffic sweeps over policies and ART points, and the cost table built from them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metrics::{max_mws_block_cost, scenario_metrics, BlockCost};
use crate::netgraph::{generate_demands, scale_demands, Demand, Topology};
use crate::planner::{group_flexible_mws, PlanResult, Planner, PlannerPolicy, PolicyMode};
use crate::{Error, Result};

/// Inclusive ART range in Tbit/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for ArtRange {
    fn default() -> Self {
        Self {
            min: 20.0,
            max: 200.0,
            step: 10.0,
        }
    }
}

impl ArtRange {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0) || !(self.step > 0.0) || !(self.max >= self.min) {
            return Err(Error::Config(format!(
                "ART range needs 0 < min <= max and step > 0, got {}..{} step {}",
                self.min, self.max, self.step
            )));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        Ok((0..=n)
            .map(|i| ((self.min + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect())
    }
}

/// One row of the metrics table. Fields that do not apply to a policy stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub topology: String,
    pub policy: PolicyMode,
    pub n_lines: Option<u32>,
    pub n_cutoff: Option<u32>,
    pub penalty_db: Option<f64>,
    pub art_tbps: f64,
    pub provisioned_tbps: f64,
    pub lp_count: usize,
    pub ws_count: usize,
    pub up_ratio: f64,
    pub extra_lp_ratio: Option<f64>,
    pub fallback_count: Option<usize>,
}

/// Demands of `topo` scaled to `art_tbps`.
pub fn demands_at(topo: &Topology, art_tbps: f64) -> Result<Vec<Demand>> {
    scale_demands(&generate_demands(topo)?, art_tbps)
}

fn record(
    topo: &Topology,
    art_tbps: f64,
    policy: &PlannerPolicy,
    demands: &[Demand],
    plan: &PlanResult,
    baseline: &PlanResult,
) -> Result<MetricsRecord> {
    let m = scenario_metrics(demands, plan, Some(baseline))?;
    let comb = policy.mode != PolicyMode::Sws;
    Ok(MetricsRecord {
        topology: topo.name.clone(),
        policy: policy.mode,
        n_lines: comb.then_some(policy.n_lines),
        n_cutoff: (policy.mode == PolicyMode::FixedFsr).then_some(policy.n_cutoff),
        penalty_db: comb.then_some(policy.osnr_tx_penalty_db),
        art_tbps,
        provisioned_tbps: m.provisioned_tbps,
        lp_count: m.lp_count,
        ws_count: m.ws_count,
        up_ratio: m.up_ratio,
        extra_lp_ratio: m.extra_lp_ratio,
        fallback_count: m.fallback_count,
    })
}

/// Plans every policy at one ART point. Flexible policies that differ only in their
/// line count share one placement and are regrouped.
fn plans_at<F>(
    planner: &Planner<'_>,
    policies: &[PlannerPolicy],
    art: f64,
    demands: &[Demand],
    inspect: &F,
) -> Result<(PlanResult, Vec<PlanResult>)>
where
    F: Fn(f64, &PlannerPolicy, &PlanResult) -> Result<()> + Sync,
{
    let baseline = planner.plan(demands, &PlannerPolicy::sws())?;
    let mut flexible: BTreeMap<u64, PlanResult> = BTreeMap::new();
    let mut out = Vec::with_capacity(policies.len());
    for p in policies {
        let plan = match p.mode {
            PolicyMode::Sws => baseline.clone(),
            PolicyMode::FixedFsr => planner.plan(demands, p)?,
            PolicyMode::FlexibleFsr => {
                p.validate()?;
                let key = p.osnr_tx_penalty_db.to_bits();
                let base = match flexible.get(&key) {
                    Some(plan) => plan.clone(),
                    None => {
                        let plan = planner.plan(demands, p)?;
                        flexible.insert(key, plan.clone());
                        plan
                    }
                };
                let mut plan = base;
                plan.mws_instances = group_flexible_mws(&mut plan.lightpaths, p.n_lines as usize);
                plan.policy = *p;
                plan
            }
        };
        inspect(art, p, &plan)?;
        out.push(plan);
    }
    Ok((baseline, out))
}

/// Runs all `policies` at every ART point in parallel. Rows come out grouped by
/// policy in the given order, ART ascending within a policy, independent of
/// scheduling. Each row's extra-LP ratio is relative to the single-laser plan at the
/// same ART.
pub fn run_sweep(
    planner: &Planner<'_>,
    policies: &[PlannerPolicy],
    arts: &[f64],
) -> Result<Vec<MetricsRecord>> {
    run_sweep_inspect(planner, policies, arts, &|_, _, _| Ok(()))
}

/// [`run_sweep`] with a hook that sees every plan with its ART, e.g. to audit or dump
/// it. The hook runs on worker threads.
pub fn run_sweep_inspect<F>(
    planner: &Planner<'_>,
    policies: &[PlannerPolicy],
    arts: &[f64],
    inspect: &F,
) -> Result<Vec<MetricsRecord>>
where
    F: Fn(f64, &PlannerPolicy, &PlanResult) -> Result<()> + Sync,
{
    for p in policies {
        p.validate()?;
    }
    let topo = planner.topology();
    let per_art: Vec<Vec<MetricsRecord>> = arts
        .par_iter()
        .map(|&art| {
            let demands = demands_at(topo, art)?;
            let (baseline, plans) = plans_at(planner, policies, art, &demands, inspect)?;
            policies
                .iter()
                .zip(&plans)
                .map(|(p, plan)| record(topo, art, p, &demands, plan, &baseline))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(arts.len() * policies.len());
    for i in 0..policies.len() {
        for art_rows in &per_art {
            rows.push(art_rows[i].clone());
        }
    }
    Ok(rows)
}

/// Laser shares 0.10, 0.15, …, 0.60.
pub fn default_laser_shares() -> Vec<f64> {
    (0..=10).map(|i| (10.0 + 5.0 * i as f64) / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRecord {
    pub s: f64,
    pub topology: String,
    pub n_lines: u32,
    pub penalty_db: f64,
    pub max_block_cost: BlockCost,
    /// Extremes of the per-ART multiples; `None` when no point is viable.
    pub band_min: Option<f64>,
    pub band_max: Option<f64>,
    /// ART points that entered the aggregate.
    pub points: usize,
}

/// Break-even comb block cost for each flexible-FSR group in `scenario`, compared with
/// the single-laser rows in `baseline` at matching topology and ART. Only ART points
/// where both plans serve all traffic count. The main value uses lightpath and source
/// counts summed over those points; the band spans the per-point values.
pub fn cost_table(
    baseline: &[MetricsRecord],
    scenario: &[MetricsRecord],
    shares: &[f64],
) -> Result<Vec<CostRecord>> {
    let key = |r: &MetricsRecord| (r.topology.clone(), (r.art_tbps * 1e6).round() as i64);
    let base: BTreeMap<_, &MetricsRecord> = baseline
        .iter()
        .filter(|r| r.policy == PolicyMode::Sws)
        .map(|r| (key(r), r))
        .collect();
    if base.is_empty() {
        return Err(Error::Config(
            "baseline contains no single-laser rows".into(),
        ));
    }

    // (topology, n_lines, penalty bits) -> matched (baseline, scenario) pairs
    type Pairs<'a> = Vec<(&'a MetricsRecord, &'a MetricsRecord)>;
    let mut groups: BTreeMap<(String, u32, i64), (f64, Pairs<'_>)> = BTreeMap::new();
    for r in scenario
        .iter()
        .filter(|r| r.policy == PolicyMode::FlexibleFsr)
    {
        let (Some(n_lines), Some(penalty)) = (r.n_lines, r.penalty_db) else {
            return Err(Error::Config(format!(
                "flexible row at ART {} lacks n_lines or penalty_db",
                r.art_tbps
            )));
        };
        let (_, g) = groups
            .entry((r.topology.clone(), n_lines, (penalty * 1e6).round() as i64))
            .or_insert((penalty, Vec::new()));
        if let Some(&b) = base.get(&key(r)) {
            if b.up_ratio == 0.0 && r.up_ratio == 0.0 {
                g.push((b, r));
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::Config(
            "scenario contains no flexible-FSR rows".into(),
        ));
    }

    let mut out = Vec::new();
    for ((topology, n_lines, _), (penalty_db, pairs)) in &groups {
        let sws_lp: usize = pairs.iter().map(|(b, _)| b.lp_count).sum();
        let mws_lp: usize = pairs.iter().map(|(_, r)| r.lp_count).sum();
        let mws: usize = pairs.iter().map(|(_, r)| r.ws_count).sum();
        for &s in shares {
            let max_block_cost = max_mws_block_cost(sws_lp, mws_lp, mws, s)?;
            let mut band: Option<(f64, f64)> = None;
            for (b, r) in pairs {
                if let BlockCost::Viable(m) =
                    max_mws_block_cost(b.lp_count, r.lp_count, r.ws_count, s)?
                {
                    band = Some(band.map_or((m, m), |(lo, hi)| (lo.min(m), hi.max(m))));
                }
            }
            out.push(CostRecord {
                s,
                topology: topology.clone(),
                n_lines: *n_lines,
                penalty_db: *penalty_db,
                max_block_cost,
                band_min: band.map(|b| b.0),
                band_max: band.map(|b| b.1),
                points: pairs.len(),
            });
        }
    }
    Ok(out)
}
