//! Yen's loop-free k-shortest paths with Dijkstra as the spur-path engine.
//!
//! Paths are ordered by total length and ties are broken by the lexicographic order
//! of their node sequences, which makes the result a deterministic function of the
//! topology. The spur search returns the lexicographically smallest among equally
//! short paths, so Yen's candidate set always contains the next path in that order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Topology;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePath {
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    pub link_lengths_km: Vec<f64>,
    pub total_length_km: f64,
    pub total_span_count: u32,
}

impl RoutePath {
    fn from_nodes(topo: &Topology, nodes: Vec<usize>) -> Self {
        let mut links = Vec::with_capacity(nodes.len().saturating_sub(1));
        let mut link_lengths_km = Vec::with_capacity(links.capacity());
        let mut total_length_km = 0.0;
        let mut total_span_count = 0;
        for w in nodes.windows(2) {
            let l = topo
                .link_between(w[0], w[1])
                .expect("consecutive path nodes are adjacent");
            links.push(l.id);
            link_lengths_km.push(l.length_km);
            total_length_km += l.length_km;
            total_span_count += l.span_count;
        }
        Self {
            nodes,
            links,
            link_lengths_km,
            total_length_km,
            total_span_count,
        }
    }

    pub fn src(&self) -> usize {
        self.nodes[0]
    }

    pub fn dst(&self) -> usize {
        *self.nodes.last().expect("paths are non-empty")
    }

    pub fn hop_count(&self) -> usize {
        self.links.len()
    }

    /// Total order used for ranking: length, then node sequence.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        self.total_length_km
            .total_cmp(&other.total_length_km)
            .then_with(|| self.nodes.cmp(&other.nodes))
    }
}

/// Shortest path from `src` to `dst` avoiding banned nodes and links; among equally
/// short paths the one with the smallest node sequence wins.
fn lexmin_shortest_path(
    topo: &Topology,
    src: usize,
    dst: usize,
    banned_nodes: &[bool],
    banned_links: &[bool],
) -> Option<Vec<usize>> {
    let n = topo.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut path: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    dist[src] = 0.0;
    path[src] = vec![src];

    loop {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if settled[v] || !dist[v].is_finite() {
                continue;
            }
            best = match best {
                None => Some(v),
                Some(b) => match dist[v]
                    .total_cmp(&dist[b])
                    .then_with(|| path[v].cmp(&path[b]))
                {
                    Ordering::Less => Some(v),
                    _ => Some(b),
                },
            };
        }
        let v = best?;
        if v == dst {
            return Some(std::mem::take(&mut path[v]));
        }
        settled[v] = true;
        for &(u, link) in topo.neighbors(v) {
            if settled[u] || banned_nodes[u] || banned_links[link] {
                continue;
            }
            let nd = dist[v] + topo.link(link).length_km;
            let better = match nd.total_cmp(&dist[u]) {
                Ordering::Less => true,
                Ordering::Equal => {
                    // compare path[v] ++ [u] against path[u] without allocating
                    let cand = path[v].iter().chain(std::iter::once(&u));
                    cand.cmp(path[u].iter()) == Ordering::Less
                }
                Ordering::Greater => false,
            };
            if better {
                dist[u] = nd;
                let mut p = path[v].clone();
                p.push(u);
                path[u] = p;
            }
        }
    }
}

/// Up to `k` loop-free paths from `src` to `dst`, shortest first. Unreachable
/// destinations (or `src == dst`) yield an empty list.
pub fn k_shortest_paths(topo: &Topology, src: usize, dst: usize, k: usize) -> Vec<RoutePath> {
    let n = topo.node_count();
    if k == 0 || src == dst || src >= n || dst >= n {
        return Vec::new();
    }
    let no_nodes = vec![false; n];
    let no_links = vec![false; topo.link_count()];
    let Some(first) = lexmin_shortest_path(topo, src, dst, &no_nodes, &no_links) else {
        return Vec::new();
    };

    let mut accepted = vec![RoutePath::from_nodes(topo, first)];
    let mut candidates: Vec<RoutePath> = Vec::new();

    while accepted.len() < k {
        let prev = accepted.last().expect("at least one accepted path").clone();
        for j in 0..prev.nodes.len() - 1 {
            let spur = prev.nodes[j];
            let root = &prev.nodes[..=j];

            let mut banned_links = no_links.clone();
            for p in &accepted {
                if p.nodes.len() > j + 1 && &p.nodes[..=j] == root {
                    banned_links[p.links[j]] = true;
                }
            }
            let mut banned_nodes = no_nodes.clone();
            for &r in &root[..j] {
                banned_nodes[r] = true;
            }

            if let Some(spur_path) =
                lexmin_shortest_path(topo, spur, dst, &banned_nodes, &banned_links)
            {
                let mut nodes = root[..j].to_vec();
                nodes.extend(spur_path);
                if !accepted.iter().any(|p| p.nodes == nodes)
                    && !candidates.iter().any(|p| p.nodes == nodes)
                {
                    candidates.push(RoutePath::from_nodes(topo, nodes));
                }
            }
        }

        let Some(best) = candidates
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.rank_cmp(b.1))
            .map(|(i, _)| i)
        else {
            break;
        };
        accepted.push(candidates.swap_remove(best));
    }
    accepted
}
