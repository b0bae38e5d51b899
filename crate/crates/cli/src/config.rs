//! Scenario configuration files.
//!
//! ```json
//! {
//!   "topology": "nobel-germany",
//!   "policies": [
//!     { "mode": "sws" },
//!     { "mode": "flexible_fsr", "n_lines": [4, 8], "penalty_db": [1, 3, 5] },
//!     { "mode": "fixed_fsr", "n_lines": 4, "n_cutoff": [1, 2, 3, 4] }
//!   ],
//!   "art": { "min": 20, "max": 200, "step": 10 },
//!   "fiber": { "alpha_db_per_km": 0.2 },
//!   "k": 3,
//!   "output_dir": "out"
//! }
//! ```
//!
//! `topology` names a bundled topology or a file, relative to the config file. List
//! valued policy fields expand to one policy per combination.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use combplan::netgraph::{bundled_topology, load_topology, Topology};
use combplan::phys::FiberParams;
use combplan::planner::{PlannerParams, PlannerPolicy, PolicyMode, FIXED_FSR_PENALTY_DB};
use combplan::spectrum::GridParams;
use combplan::study::ArtRange;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyBlock {
    mode: PolicyMode,
    n_lines: Option<OneOrMany<u32>>,
    n_cutoff: Option<OneOrMany<u32>>,
    penalty_db: Option<OneOrMany<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    topology: String,
    policy: Option<PolicyBlock>,
    policies: Option<Vec<PolicyBlock>>,
    #[serde(default)]
    art: ArtRange,
    #[serde(default)]
    fiber: FiberParams,
    #[serde(default)]
    grid: GridParams,
    k: Option<usize>,
    output_dir: Option<PathBuf>,
}

/// Fully expanded configuration; this is what gets echoed into output files.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioConfig {
    pub topology: String,
    pub policies: Vec<PlannerPolicy>,
    pub art: ArtRange,
    pub params: PlannerParams,
    pub output_dir: PathBuf,
    #[serde(skip)]
    pub topology_source: TopologySource,
}

#[derive(Debug, Clone, Default)]
pub enum TopologySource {
    #[default]
    Bundled,
    File(PathBuf),
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let blocks = match (raw.policy, raw.policies) {
            (Some(_), Some(_)) => bail!("give either `policy` or `policies`, not both"),
            (Some(p), None) => vec![p],
            (None, Some(ps)) if !ps.is_empty() => ps,
            _ => bail!("no policy given"),
        };
        let mut policies = Vec::new();
        for b in &blocks {
            policies.extend(expand(b)?);
        }
        for p in &policies {
            p.validate()?;
        }
        raw.art.points()?;
        raw.fiber.validate()?;

        let params = PlannerParams {
            fiber: raw.fiber,
            grid: raw.grid,
            k: raw.k.unwrap_or(3),
            ..PlannerParams::default()
        };
        if params.k == 0 {
            bail!("k must be at least 1");
        }
        if params.grid.slots_per_link == 0 {
            bail!("grid.slots_per_link must be positive");
        }

        let topology_source = if bundled_topology(&raw.topology).is_some() {
            TopologySource::Bundled
        } else {
            TopologySource::File(base_dir.join(&raw.topology))
        };
        Ok(Self {
            topology: raw.topology,
            policies,
            art: raw.art,
            params,
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
            topology_source,
        })
    }

    pub fn load_topology(&self) -> Result<Topology> {
        match &self.topology_source {
            TopologySource::Bundled => {
                Ok(bundled_topology(&self.topology).expect("checked at parse time"))
            }
            TopologySource::File(p) => {
                load_topology(p).with_context(|| format!("cannot load topology {}", p.display()))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

fn expand(b: &PolicyBlock) -> Result<Vec<PlannerPolicy>> {
    let lines = b.n_lines.as_ref().map_or(vec![4], OneOrMany::to_vec);
    let cutoffs = b.n_cutoff.as_ref().map_or(vec![1], OneOrMany::to_vec);
    let penalties = b.penalty_db.as_ref().map(OneOrMany::to_vec);
    let mut out = Vec::new();
    match b.mode {
        PolicyMode::Sws => {
            if b.n_lines.is_some() || b.n_cutoff.is_some() || b.penalty_db.is_some() {
                bail!("the sws policy takes no n_lines, n_cutoff or penalty_db");
            }
            out.push(PlannerPolicy::sws());
        }
        PolicyMode::FixedFsr => {
            for &n in &lines {
                for &c in &cutoffs {
                    for &pen in penalties.as_deref().unwrap_or(&[FIXED_FSR_PENALTY_DB]) {
                        let mut p = PlannerPolicy::fixed_fsr(n, c);
                        p.osnr_tx_penalty_db = pen;
                        out.push(p);
                    }
                }
            }
        }
        PolicyMode::FlexibleFsr => {
            if b.n_cutoff.is_some() {
                bail!("n_cutoff applies to fixed_fsr only");
            }
            for &pen in penalties.as_deref().unwrap_or(&[0.0]) {
                for &n in &lines {
                    out.push(PlannerPolicy::flexible_fsr(n, pen));
                }
            }
        }
    }
    Ok(out)
}
