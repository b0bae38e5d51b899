//! Network topologies, k-shortest-path routing and traffic matrices.

mod demand;
mod ksp;

pub use demand::{generate_demands, scale_demands, Demand, DemandId};
pub use ksp::{k_shortest_paths, RoutePath};

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Amplified span length; links are cut into `ceil(length / SPAN_LENGTH_KM)` spans.
pub const SPAN_LENGTH_KM: f64 = 80.0;

/// Detour factor applied to great-circle distances when a link carries no length.
pub const ROUTING_FACTOR: f64 = 1.2;

const EARTH_RADIUS_KM: f64 = 6371.0;

pub const NOBEL_GERMANY: &str = include_str!("../../data/nobel-germany.json");
pub const NOBEL_EU: &str = include_str!("../../data/nobel-eu.json");

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub name: String,
    pub latitude: f64,
    pub longitude: f64,
    pub traffic_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: usize,
    pub endpoints: (usize, usize),
    pub length_km: f64,
    pub span_count: u32,
}

impl Link {
    pub fn other_end(&self, node: usize) -> usize {
        if self.endpoints.0 == node {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }
}

pub fn span_count(length_km: f64) -> u32 {
    (length_km / SPAN_LENGTH_KM).ceil().max(1.0) as u32
}

/// Undirected, connected mesh. Immutable once built.
#[derive(Debug, Clone)]
pub struct Topology {
    pub name: String,
    nodes: Vec<Node>,
    links: Vec<Link>,
    /// adjacency[node] = (neighbor, link id), sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Deserialize, Serialize)]
struct TopologyFile {
    #[serde(default)]
    name: Option<String>,
    nodes: Vec<NodeRecord>,
    links: Vec<LinkRecord>,
}

#[derive(Debug, Deserialize, Serialize)]
struct NodeRecord {
    id: usize,
    name: String,
    lat: f64,
    lon: f64,
    #[serde(default)]
    weight: Option<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
struct LinkRecord {
    a: usize,
    b: usize,
    #[serde(default)]
    length_km: Option<f64>,
}

pub fn great_circle_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().asin()
}

/// Parses and validates a topology document.
pub fn parse_topology(document: &str) -> Result<Topology> {
    let file: TopologyFile = serde_json::from_str(document).map_err(|e| {
        Error::parse(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;

    let n = file.nodes.len();
    if n < 2 {
        return Err(Error::parse("nodes", "a topology needs at least two nodes"));
    }
    let mut slots: Vec<Option<Node>> = vec![None; n];
    for (i, rec) in file.nodes.into_iter().enumerate() {
        let loc = format!("nodes[{i}]");
        if rec.id >= n {
            return Err(Error::parse(
                loc,
                format!(
                    "id {} out of range; ids must be dense from 0 to {}",
                    rec.id,
                    n - 1
                ),
            ));
        }
        if slots[rec.id].is_some() {
            return Err(Error::parse(loc, format!("duplicate node id {}", rec.id)));
        }
        let weight = rec.weight.unwrap_or(1.0);
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::parse(
                loc,
                format!("traffic weight {weight} must be >= 0"),
            ));
        }
        if !rec.lat.is_finite() || !rec.lon.is_finite() {
            return Err(Error::parse(loc, "coordinates must be finite"));
        }
        slots[rec.id] = Some(Node {
            id: rec.id,
            name: rec.name,
            latitude: rec.lat,
            longitude: rec.lon,
            traffic_weight: weight,
        });
    }
    // n records with distinct ids in 0..n fill every slot
    let nodes: Vec<Node> = slots.into_iter().map(|s| s.expect("dense ids")).collect();

    let mut seen = BTreeSet::new();
    let mut links = Vec::with_capacity(file.links.len());
    for (i, rec) in file.links.into_iter().enumerate() {
        let loc = format!("links[{i}]");
        if rec.a >= n || rec.b >= n {
            return Err(Error::parse(
                loc,
                format!("unknown endpoint in ({}, {})", rec.a, rec.b),
            ));
        }
        if rec.a == rec.b {
            return Err(Error::parse(loc, format!("self-loop at node {}", rec.a)));
        }
        let key = (rec.a.min(rec.b), rec.a.max(rec.b));
        if !seen.insert(key) {
            return Err(Error::parse(loc, format!("parallel link {:?}", key)));
        }
        let length_km = match rec.length_km {
            Some(l) => l,
            None => {
                let (na, nb) = (&nodes[rec.a], &nodes[rec.b]);
                ROUTING_FACTOR
                    * great_circle_km(na.latitude, na.longitude, nb.latitude, nb.longitude)
            }
        };
        if !(length_km > 0.0) || !length_km.is_finite() {
            return Err(Error::parse(
                loc,
                format!("link length {length_km} km must be positive"),
            ));
        }
        links.push(Link {
            id: i,
            endpoints: key,
            length_km,
            span_count: span_count(length_km),
        });
    }

    Topology::new(file.name.unwrap_or_default(), nodes, links)
}

pub fn load_topology(path: impl AsRef<Path>) -> Result<Topology> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_topology(&text)
}

/// Resolves a bundled topology by name (`nobel-germany`, `nobel-eu`).
pub fn bundled_topology(name: &str) -> Option<Topology> {
    let doc = match name {
        "nobel-germany" | "germany" => NOBEL_GERMANY,
        "nobel-eu" | "eu" => NOBEL_EU,
        _ => return None,
    };
    Some(parse_topology(doc).expect("bundled topologies are valid"))
}

impl Topology {
    fn new(name: String, nodes: Vec<Node>, links: Vec<Link>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for l in &links {
            adjacency[l.endpoints.0].push((l.endpoints.1, l.id));
            adjacency[l.endpoints.1].push((l.endpoints.0, l.id));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let topo = Self {
            name,
            nodes,
            links,
            adjacency,
        };
        if let Some(orphan) = topo.unreachable_from_first() {
            return Err(Error::parse(
                "links",
                format!("graph is disconnected; node {orphan} is unreachable"),
            ));
        }
        Ok(topo)
    }

    /// Builds a topology directly from node weights and `(a, b, length_km)` triples.
    pub fn from_links(
        name: impl Into<String>,
        weights: &[f64],
        links: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let file = TopologyFile {
            name: Some(name.into()),
            nodes: weights
                .iter()
                .enumerate()
                .map(|(id, &w)| NodeRecord {
                    id,
                    name: format!("n{id}"),
                    lat: 0.0,
                    lon: 0.0,
                    weight: Some(w),
                })
                .collect(),
            links: links
                .iter()
                .map(|&(a, b, l)| LinkRecord {
                    a,
                    b,
                    length_km: Some(l),
                })
                .collect(),
        };
        parse_topology(&serde_json::to_string(&file)?)
    }

    fn unreachable_from_first(&self) -> Option<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn link(&self, id: usize) -> &Link {
        &self.links[id]
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn link_between(&self, a: usize, b: usize) -> Option<&Link> {
        self.adjacency[a]
            .iter()
            .find(|&&(v, _)| v == b)
            .map(|&(_, l)| &self.links[l])
    }

    /// Average shortest-path length over all node pairs, weighted by demand magnitude.
    pub fn average_shortest_path_km(&self, demands: &[Demand]) -> f64 {
        let total: f64 = demands.iter().map(|d| d.requested_gbps).sum();
        demands
            .iter()
            .map(|d| {
                let p = k_shortest_paths(self, d.src, d.dst, 1);
                p[0].total_length_km * d.requested_gbps
            })
            .sum::<f64>()
            / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_instances_have_published_sizes() {
        let de = bundled_topology("nobel-germany").unwrap();
        assert_eq!((de.node_count(), de.link_count()), (17, 26));
        let eu = bundled_topology("nobel-eu").unwrap();
        assert_eq!((eu.node_count(), eu.link_count()), (28, 41));
        assert!(bundled_topology("atlantis").is_none());
    }

    #[test]
    fn bundled_average_path_lengths_track_published_values() {
        for (name, target) in [("nobel-germany", 420.0), ("nobel-eu", 1100.0)] {
            let t = bundled_topology(name).unwrap();
            let d = generate_demands(&t).unwrap();
            let avg = t.average_shortest_path_km(&d);
            assert!((avg / target - 1.0).abs() <= 0.25, "{name}: {avg}");
        }
    }

    #[test]
    fn spans_bracket_link_length() {
        for t in [
            bundled_topology("nobel-germany").unwrap(),
            bundled_topology("nobel-eu").unwrap(),
        ] {
            for l in t.links() {
                let s = f64::from(l.span_count);
                assert!(s * SPAN_LENGTH_KM >= l.length_km);
                assert!(l.length_km > (s - 1.0) * SPAN_LENGTH_KM);
            }
        }
    }

    #[test]
    fn single_span_link() {
        let doc = r#"{"nodes":[{"id":0,"name":"a","lat":0,"lon":0},{"id":1,"name":"b","lat":0,"lon":1}],
                      "links":[{"a":0,"b":1,"length_km":80}]}"#;
        let t = parse_topology(doc).unwrap();
        assert_eq!(t.link(0).span_count, 1);
        assert_eq!(t.nodes()[0].traffic_weight, 1.0);
    }

    #[test]
    fn missing_length_uses_great_circle_with_detour() {
        let doc = r#"{"nodes":[{"id":0,"name":"a","lat":0,"lon":0},{"id":1,"name":"b","lat":0,"lon":1}],
                      "links":[{"a":0,"b":1}]}"#;
        let t = parse_topology(doc).unwrap();
        // one degree of longitude on the equator
        let expected = 1.2 * 6371.0 * 1f64.to_radians();
        assert!((t.link(0).length_km - expected).abs() < 1e-9);
    }

    fn parse_err(doc: &str) -> String {
        match parse_topology(doc) {
            Err(Error::Parse { location, message }) => format!("{location}: {message}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_invalid_documents() {
        let two = r#"{"id":0,"name":"a","lat":0,"lon":0},{"id":1,"name":"b","lat":0,"lon":1}"#;
        let e = parse_err(&format!(
            r#"{{"nodes":[{two},{{"id":2,"name":"c","lat":1,"lon":1}}],"links":[{{"a":0,"b":1,"length_km":5}}]}}"#
        ));
        assert!(e.contains("disconnected"), "{e}");

        let e = parse_err(
            r#"{"nodes":[{"id":0,"name":"a","lat":0,"lon":0},{"id":0,"name":"b","lat":0,"lon":1}],"links":[]}"#,
        );
        assert!(e.starts_with("nodes[1]") && e.contains("duplicate"), "{e}");

        let e = parse_err(&format!(
            r#"{{"nodes":[{two}],"links":[{{"a":0,"b":1,"length_km":0}}]}}"#
        ));
        assert!(e.starts_with("links[0]") && e.contains("positive"), "{e}");

        let e = parse_err(&format!(
            r#"{{"nodes":[{two}],"links":[{{"a":0,"b":1,"length_km":3}},{{"a":1,"b":0,"length_km":4}}]}}"#
        ));
        assert!(e.starts_with("links[1]") && e.contains("parallel"), "{e}");

        let e = parse_err(r#"{"nodes":[ oops"#);
        assert!(e.starts_with("line 1"), "{e}");
    }
}
