use serde::{Deserialize, Serialize};

use super::Topology;
use crate::{Error, Result};

pub type DemandId = usize;

/// Aggregated traffic between an unordered node pair, `src < dst`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    pub id: DemandId,
    pub src: usize,
    pub dst: usize,
    pub requested_gbps: f64,
}

/// One demand per node pair whose weight product is positive. `requested_gbps`
/// holds the relative magnitude `w_src · w_dst` until [`scale_demands`] is applied.
pub fn generate_demands(topo: &Topology) -> Result<Vec<Demand>> {
    let w: Vec<f64> = topo.nodes().iter().map(|n| n.traffic_weight).collect();
    let mut out = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let m = w[i] * w[j];
            if m > 0.0 {
                out.push(Demand {
                    id: out.len(),
                    src: i,
                    dst: j,
                    requested_gbps: m,
                });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Domain(
            "no node pair has positive combined traffic weight".into(),
        ));
    }
    Ok(out)
}

/// Rescales all demands by one common factor so they add up to `art_tbps`.
pub fn scale_demands(demands: &[Demand], art_tbps: f64) -> Result<Vec<Demand>> {
    if !(art_tbps > 0.0) || !art_tbps.is_finite() {
        return Err(Error::Domain(format!(
            "ART must be positive, got {art_tbps} Tbit/s"
        )));
    }
    let total: f64 = demands.iter().map(|d| d.requested_gbps).sum();
    if !(total > 0.0) {
        return Err(Error::Domain("demand magnitudes sum to zero".into()));
    }
    let factor = art_tbps * 1000.0 / total;
    Ok(demands
        .iter()
        .map(|d| Demand {
            requested_gbps: d.requested_gbps * factor,
            ..d.clone()
        })
        .collect())
}
