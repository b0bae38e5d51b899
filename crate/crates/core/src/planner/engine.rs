use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    Failure, FailureReason, LightSource, Lightpath, LineState, MwsInstance, PlanResult,
    PlannerPolicy, PolicyMode,
};
use crate::netgraph::{k_shortest_paths, Demand, DemandId, RoutePath, Topology};
use crate::phys::{config_ladder, FiberParams, PathBudget, SnrMode, TransceiverConfig};
use crate::spectrum::{GridParams, LightpathId, MwsId, SlotState, SpectrumGrid};
use crate::txmodel::{FsrMode, PhysicalConstants};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerParams {
    pub fiber: FiberParams,
    pub grid: GridParams,
    pub consts: PhysicalConstants,
    /// Candidate routes per demand.
    pub k: usize,
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            fiber: FiberParams::default(),
            grid: GridParams::default(),
            consts: PhysicalConstants::default(),
            k: 3,
        }
    }
}

#[derive(Debug, Clone)]
struct Route {
    path: RoutePath,
    budget: PathBudget,
}

/// A topology with its candidate routes and their SNR budgets precomputed, so that
/// many scenarios can be planned against it cheaply.
#[derive(Debug, Clone)]
pub struct Planner<'t> {
    topo: &'t Topology,
    params: PlannerParams,
    routes: BTreeMap<(usize, usize), Vec<Route>>,
}

struct Work {
    grid: SpectrumGrid,
    lightpaths: Vec<Lightpath>,
    mws: Vec<MwsInstance>,
    provisioned: BTreeMap<DemandId, f64>,
    failures: Vec<Failure>,
    fallbacks: Vec<DemandId>,
}

impl Work {
    fn remaining(&self, d: &Demand) -> f64 {
        d.requested_gbps - self.provisioned[&d.id]
    }
}

fn is_met(d: &Demand, remaining: f64) -> bool {
    remaining <= 1e-9 * d.requested_gbps.max(1.0)
}

/// Candidates in the order they are tried for a lightpath that still has to carry
/// `remaining`: first the narrowest configuration that covers it alone (lower rate on
/// ties), or the top of the ladder if none does; then the rest in ladder order.
fn preference_order(candidates: &[TransceiverConfig], remaining: f64) -> Vec<TransceiverConfig> {
    let preferred = candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.data_rate_gbps >= remaining)
        .min_by(|(_, a), (_, b)| {
            a.width_slots
                .cmp(&b.width_slots)
                .then(a.data_rate_gbps.total_cmp(&b.data_rate_gbps))
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut out = Vec::with_capacity(candidates.len());
    if let Some(&c) = candidates.get(preferred) {
        out.push(c);
    }
    out.extend(
        candidates
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != preferred)
            .map(|(_, &c)| c),
    );
    out
}

/// Keeps `config` if its full SNR (with nonlinear interference) meets the threshold,
/// otherwise steps down the ladder to the first configuration that does and still fits
/// into `block_width` slots. The allocated block is never re-shrunk.
pub fn downgrade(
    budget: &PathBudget,
    config: &TransceiverConfig,
    block_width: usize,
    osnr_tx_db: f64,
) -> Option<TransceiverConfig> {
    if budget.is_feasible(config, osnr_tx_db, SnrMode::Full) {
        return Some(*config);
    }
    config_ladder()
        .iter()
        .filter(|c| c.ladder_cmp(config) == Ordering::Greater)
        .filter(|c| c.width_slots as usize <= block_width)
        .find(|c| budget.is_feasible(c, osnr_tx_db, SnrMode::Full))
        .copied()
}

/// Packs flexible-FSR lightpaths into sources of `n_lines` lines, per terminal node in
/// lightpath order, and relabels each lightpath with the line it was given.
pub fn group_flexible_mws(lightpaths: &mut [Lightpath], n_lines: usize) -> Vec<MwsInstance> {
    assert!(n_lines > 0, "a comb source needs at least one line");
    let mut by_node: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, lp) in lightpaths.iter().enumerate() {
        by_node.entry(lp.terminal).or_default().push(i);
    }
    let mut out = Vec::new();
    for (node, members) in by_node {
        for chunk in members.chunks(n_lines) {
            let id = out.len();
            let mut lines = vec![LineState::Inactive; n_lines];
            for (line, &i) in chunk.iter().enumerate() {
                lightpaths[i].source = LightSource::Mws { id, line };
                lines[line] = LineState::Active(lightpaths[i].id);
            }
            out.push(MwsInstance {
                id,
                terminal: node,
                fsr_mode: FsrMode::Flexible,
                lines,
                demand: None,
                route: None,
                config: None,
                block: None,
            });
        }
    }
    out
}

impl<'t> Planner<'t> {
    pub fn new(topo: &'t Topology, params: PlannerParams) -> Result<Self> {
        params.fiber.validate()?;
        if params.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if params.grid.slots_per_link == 0 {
            return Err(Error::Config(
                "the grid needs at least one slot per link".into(),
            ));
        }
        let n = topo.node_count();
        let mut routes = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut list = Vec::new();
                for path in k_shortest_paths(topo, a, b, params.k) {
                    let budget = PathBudget::new(&path, &params.fiber, &params.consts)?;
                    list.push(Route { path, budget });
                }
                routes.insert((a, b), list);
            }
        }
        Ok(Self {
            topo,
            params,
            routes,
        })
    }

    pub fn topology(&self) -> &Topology {
        self.topo
    }

    pub fn params(&self) -> &PlannerParams {
        &self.params
    }

    /// Candidate routes of a node pair, in either direction.
    pub fn routes(&self, a: usize, b: usize) -> impl Iterator<Item = &RoutePath> {
        self.route_list(a, b).iter().map(|r| &r.path)
    }

    fn route_list(&self, a: usize, b: usize) -> &[Route] {
        self.routes
            .get(&(a.min(b), a.max(b)))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    fn empty_grid(&self) -> SpectrumGrid {
        SpectrumGrid::new(self.topo.link_count(), self.params.grid)
    }

    fn check_demands(&self, demands: &[Demand]) -> Result<()> {
        let n = self.topo.node_count();
        let mut ids = BTreeSet::new();
        for d in demands {
            if d.src >= n || d.dst >= n {
                return Err(Error::Domain(format!(
                    "demand {} refers to a node outside 0..{n}",
                    d.id
                )));
            }
            if !(d.requested_gbps >= 0.0) || !d.requested_gbps.is_finite() {
                return Err(Error::Domain(format!(
                    "demand {} has invalid volume {}",
                    d.id, d.requested_gbps
                )));
            }
            if !ids.insert(d.id) {
                return Err(Error::Domain(format!("duplicate demand id {}", d.id)));
            }
        }
        Ok(())
    }

    /// Adds one single-laser lightpath for `demand` on the first route and configuration
    /// that fit, without touching anything else than `grid`.
    fn place_one(
        &self,
        grid: &mut SpectrumGrid,
        demand: &Demand,
        remaining: f64,
        osnr_tx_db: f64,
        id: LightpathId,
    ) -> std::result::Result<Lightpath, FailureReason> {
        let routes = self.route_list(demand.src, demand.dst);
        if routes.is_empty() {
            return Err(FailureReason::NoRoute);
        }
        let mut blocked = false;
        for route in routes {
            let candidates = route.budget.feasible(osnr_tx_db, SnrMode::LinearOnly);
            for cfg in preference_order(&candidates, remaining) {
                let links = &route.path.links;
                let Some(block) = grid.first_fit(links, cfg.width_slots as usize) else {
                    blocked = true;
                    continue;
                };
                let Some(cfg) = downgrade(&route.budget, &cfg, block.width, osnr_tx_db) else {
                    continue;
                };
                grid.allocate(links, block, SlotState::Used(id))
                    .expect("a first-fit block is free");
                return Ok(Lightpath {
                    id,
                    demand: demand.id,
                    terminal: demand.src,
                    route: route.path.clone(),
                    config: cfg,
                    block,
                    source: LightSource::Sws,
                    snr: route.budget.snr(&cfg, osnr_tx_db, SnrMode::Full),
                    data_rate_gbps: cfg.data_rate_gbps,
                });
            }
        }
        Err(if blocked {
            FailureReason::NoSpectrum
        } else {
            FailureReason::NoFeasibleConfig
        })
    }

    /// Places single-laser lightpaths until `demand` is met or nothing more fits.
    fn place_lightpaths(
        &self,
        grid: &mut SpectrumGrid,
        demand: &Demand,
        provisioned: f64,
        osnr_tx_db: f64,
        first_id: LightpathId,
    ) -> (Vec<Lightpath>, Option<Failure>) {
        let mut lps = Vec::new();
        let mut prov = provisioned;
        loop {
            let remaining = demand.requested_gbps - prov;
            if is_met(demand, remaining) {
                return (lps, None);
            }
            match self.place_one(grid, demand, remaining, osnr_tx_db, first_id + lps.len()) {
                Ok(lp) => {
                    prov += lp.data_rate_gbps;
                    lps.push(lp);
                }
                Err(reason) => {
                    let failure = Failure {
                        demand: demand.id,
                        shortfall_gbps: remaining,
                        reason,
                    };
                    return (lps, Some(failure));
                }
            }
        }
    }

    /// Number of single-laser lightpaths `demand` would take on top of `grid`, or
    /// `None` if it cannot be fully served that way.
    pub fn estimate_sws_lp_count(
        &self,
        grid: &SpectrumGrid,
        demand: &Demand,
        osnr_tx_db: f64,
    ) -> Option<usize> {
        let mut scratch = grid.clone();
        match self.place_lightpaths(&mut scratch, demand, 0.0, osnr_tx_db, 0) {
            (lps, None) => Some(lps.len()),
            (_, Some(_)) => None,
        }
    }

    fn commit_sws(&self, w: &mut Work, demand: &Demand, osnr_tx_db: f64) {
        let prov = w.provisioned[&demand.id];
        let first = w.lightpaths.len();
        let (lps, failure) = self.place_lightpaths(&mut w.grid, demand, prov, osnr_tx_db, first);
        let added: f64 = lps.iter().map(|lp| lp.data_rate_gbps).sum();
        *w.provisioned
            .get_mut(&demand.id)
            .expect("demand is tracked") += added;
        w.lightpaths.extend(lps);
        w.failures.extend(failure);
    }

    /// Reserves a full comb block for `demand` on the first route and uniform
    /// configuration that fit, already downgraded for nonlinear interference.
    fn open_fixed_mws(
        &self,
        w: &mut Work,
        demand: &Demand,
        remaining: f64,
        osnr_tx_db: f64,
        n_lines: usize,
    ) -> Option<MwsId> {
        let id = w.mws.len();
        for route in self.route_list(demand.src, demand.dst) {
            let links = &route.path.links;
            let candidates = route.budget.feasible(osnr_tx_db, SnrMode::LinearOnly);
            for cfg in preference_order(&candidates, remaining) {
                let width = cfg.width_slots as usize;
                if w.grid.first_fit(links, n_lines * width).is_none() {
                    continue;
                }
                let Some(cfg) = downgrade(&route.budget, &cfg, width, osnr_tx_db) else {
                    continue;
                };
                let block = w
                    .grid
                    .reserve_fixed_fsr(links, n_lines, width, id)
                    .expect("source ids are fresh")
                    .expect("a first-fit block exists");
                w.mws.push(MwsInstance {
                    id,
                    terminal: demand.src,
                    fsr_mode: FsrMode::Fixed,
                    lines: vec![LineState::Inactive; n_lines],
                    demand: Some(demand.id),
                    route: Some(route.path.clone()),
                    config: Some(cfg),
                    block: Some(block),
                });
                return Some(id);
            }
        }
        None
    }

    fn activate_lines(&self, w: &mut Work, demand: &Demand, mws: MwsId, osnr_tx_db: f64) {
        let (route, cfg) = {
            let m = &w.mws[mws];
            (
                m.route.clone().expect("fixed sources carry a route"),
                m.config.expect("fixed sources carry a configuration"),
            )
        };
        let budget = self
            .route_list(demand.src, demand.dst)
            .iter()
            .find(|r| r.path.nodes == route.nodes)
            .map(|r| r.budget)
            .expect("the source route is a candidate route");
        for line in 0..w.mws[mws].n_lines() {
            if is_met(demand, w.remaining(demand)) {
                break;
            }
            let id = w.lightpaths.len();
            let block = w
                .grid
                .activate_reserved_line(mws, line, id)
                .expect("lines are activated once, in order");
            w.mws[mws].lines[line] = LineState::Active(id);
            *w.provisioned
                .get_mut(&demand.id)
                .expect("demand is tracked") += cfg.data_rate_gbps;
            w.lightpaths.push(Lightpath {
                id,
                demand: demand.id,
                terminal: demand.src,
                route: route.clone(),
                config: cfg,
                block,
                source: LightSource::Mws { id: mws, line },
                snr: budget.snr(&cfg, osnr_tx_db, SnrMode::Full),
                data_rate_gbps: cfg.data_rate_gbps,
            });
        }
    }

    fn place_fixed(&self, w: &mut Work, demand: &Demand, policy: &PlannerPolicy) {
        let base = policy.base_osnr_tx_db;
        let estimate = self.estimate_sws_lp_count(&w.grid, demand, base);
        if matches!(estimate, Some(n) if n < policy.n_cutoff as usize) {
            self.commit_sws(w, demand, base);
            return;
        }
        let osnr = policy.mws_osnr_tx_db();
        loop {
            let remaining = w.remaining(demand);
            if is_met(demand, remaining) {
                return;
            }
            match self.open_fixed_mws(w, demand, remaining, osnr, policy.n_lines as usize) {
                Some(mws) => self.activate_lines(w, demand, mws, osnr),
                None => {
                    w.fallbacks.push(demand.id);
                    self.commit_sws(w, demand, base);
                    return;
                }
            }
        }
    }

    /// Serves `demands` in descending volume (ties by id) under `policy`.
    pub fn plan(&self, demands: &[Demand], policy: &PlannerPolicy) -> Result<PlanResult> {
        policy.validate()?;
        self.check_demands(demands)?;

        let mut order: Vec<&Demand> = demands.iter().collect();
        order.sort_by(|a, b| {
            b.requested_gbps
                .total_cmp(&a.requested_gbps)
                .then(a.id.cmp(&b.id))
        });

        let mut w = Work {
            grid: self.empty_grid(),
            lightpaths: Vec::new(),
            mws: Vec::new(),
            provisioned: demands.iter().map(|d| (d.id, 0.0)).collect(),
            failures: Vec::new(),
            fallbacks: Vec::new(),
        };
        for d in order {
            match policy.mode {
                PolicyMode::Sws => self.commit_sws(&mut w, d, policy.base_osnr_tx_db),
                PolicyMode::FlexibleFsr => self.commit_sws(&mut w, d, policy.mws_osnr_tx_db()),
                PolicyMode::FixedFsr => self.place_fixed(&mut w, d, policy),
            }
        }
        if policy.mode == PolicyMode::FlexibleFsr {
            w.mws = group_flexible_mws(&mut w.lightpaths, policy.n_lines as usize);
        }

        Ok(PlanResult {
            policy: *policy,
            lightpaths: w.lightpaths,
            mws_instances: w.mws,
            provisioned_gbps: w.provisioned,
            failures: w.failures,
            fallbacks: w.fallbacks,
            grid: w.grid,
        })
    }
}

/// One-shot planning; prefer [`Planner`] when several policies share a topology.
pub fn plan(
    topo: &Topology,
    demands: &[Demand],
    policy: &PlannerPolicy,
    params: &PlannerParams,
) -> Result<PlanResult> {
    Planner::new(topo, *params)?.plan(demands, policy)
}
