//! Reference implementations and generators shared by the property suites.
#![allow(dead_code)]

use combplan::metrics::underprovisioning_ratio;
use combplan::netgraph::{k_shortest_paths, Topology};
use combplan::spectrum::{GridParams, SlotBlock, SlotState, SpectrumGrid};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;

pub fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

// ---------- first fit ----------

#[derive(Debug, Clone)]
pub struct GridCase {
    pub slots: usize,
    /// occupancy[link][slot], true when taken
    pub occupancy: Vec<Vec<bool>>,
    pub path: Vec<usize>,
    pub width: usize,
}

pub fn grid_case() -> impl Strategy<Value = GridCase> {
    (1usize..=5, 1usize..=48).prop_flat_map(|(links, slots)| {
        (
            prop::collection::vec(
                prop::collection::vec(prop::bool::weighted(0.3), slots),
                links,
            ),
            prop::sample::subsequence((0..links).collect::<Vec<_>>(), 1..=links),
            1usize..=14,
        )
            .prop_map(move |(occupancy, path, width)| GridCase {
                slots,
                occupancy,
                path,
                width,
            })
    })
}

/// Lowest start whose window is free on every path link, by brute force.
pub fn first_fit_oracle(c: &GridCase) -> Option<usize> {
    if c.width > c.slots {
        return None;
    }
    (0..=c.slots - c.width).find(|&start| {
        c.path
            .iter()
            .all(|&l| (start..start + c.width).all(|s| !c.occupancy[l][s]))
    })
}

pub fn check_first_fit(c: &GridCase) -> Result<(), TestCaseError> {
    let mut grid = SpectrumGrid::new(
        c.occupancy.len(),
        GridParams {
            slots_per_link: c.slots,
            ..GridParams::default()
        },
    );
    for (l, row) in c.occupancy.iter().enumerate() {
        for (s, &taken) in row.iter().enumerate() {
            if taken {
                grid.allocate(&[l], SlotBlock::new(s, 1), SlotState::Used(0))
                    .unwrap();
            }
        }
    }
    let got = grid.first_fit(&c.path, c.width).map(|b| b.start);
    prop_assert_eq!(got, first_fit_oracle(c));
    if let Some(b) = grid.first_fit(&c.path, c.width) {
        prop_assert_eq!(b.width, c.width);
    }
    Ok(())
}

// ---------- k shortest paths ----------

#[derive(Debug, Clone)]
pub struct GraphCase {
    pub n: usize,
    pub links: Vec<(usize, usize, f64)>,
    pub src: usize,
    pub dst: usize,
    pub k: usize,
}

/// Connected graphs on up to 8 nodes with small integer lengths, so ties are common.
pub fn graph_case() -> impl Strategy<Value = GraphCase> {
    (2usize..=8).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let m = pairs.len();
        (
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec(prop::bool::weighted(0.35), m),
            prop::collection::vec(1u32..=6, m),
            0..n,
            0..n,
            1usize..=5,
        )
            .prop_map(move |(parents, extra, lengths, src, dst, k)| {
                let mut used = vec![false; pairs.len()];
                // random spanning tree: node i attaches to some node before it
                for i in 1..n {
                    let p = parents[i - 1].index(i);
                    let idx = pairs.iter().position(|&e| e == (p, i)).unwrap();
                    used[idx] = true;
                }
                for (u, e) in used.iter_mut().zip(&extra) {
                    *u |= *e;
                }
                let links = pairs
                    .iter()
                    .zip(&lengths)
                    .zip(&used)
                    .filter(|(_, &u)| u)
                    .map(|((&(a, b), &len), _)| (a, b, f64::from(len)))
                    .collect();
                GraphCase {
                    n,
                    links,
                    src,
                    dst,
                    k,
                }
            })
    })
}

/// Every simple path, ranked by length then node sequence.
pub fn ksp_oracle(c: &GraphCase) -> Vec<(f64, Vec<usize>)> {
    let mut adj = vec![Vec::new(); c.n];
    for &(a, b, l) in &c.links {
        adj[a].push((b, l));
        adj[b].push((a, l));
    }
    let mut out = Vec::new();
    if c.src == c.dst {
        return out;
    }
    fn dfs(
        u: usize,
        dst: usize,
        adj: &[Vec<(usize, f64)>],
        path: &mut Vec<usize>,
        len: f64,
        out: &mut Vec<(f64, Vec<usize>)>,
    ) {
        if u == dst {
            out.push((len, path.clone()));
            return;
        }
        for &(v, l) in &adj[u] {
            if !path.contains(&v) {
                path.push(v);
                dfs(v, dst, adj, path, len + l, out);
                path.pop();
            }
        }
    }
    dfs(c.src, c.dst, &adj, &mut vec![c.src], 0.0, &mut out);
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out.truncate(c.k);
    out
}

pub fn check_ksp(c: &GraphCase) -> Result<(), TestCaseError> {
    let topo = Topology::from_links("g", &vec![1.0; c.n], &c.links).unwrap();
    let got: Vec<(f64, Vec<usize>)> = k_shortest_paths(&topo, c.src, c.dst, c.k)
        .into_iter()
        .map(|p| (p.total_length_km, p.nodes))
        .collect();
    prop_assert_eq!(got, ksp_oracle(c));
    Ok(())
}

// ---------- underprovisioning ----------

pub fn up_case() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(
        (0.0f64..2000.0, 0.0f64..2500.0, prop::bool::weighted(0.3)).prop_map(|(r, p, exact)| {
            if exact {
                (r, r)
            } else {
                (r, p)
            }
        }),
        1..40,
    )
    .prop_filter("some traffic", |v| v.iter().any(|&(r, _)| r > 0.0))
}

/// Direct evaluation: collect the underserved demands first, then sum their gaps.
pub fn up_oracle(pairs: &[(f64, f64)]) -> f64 {
    let underserved: Vec<&(f64, f64)> = pairs.iter().filter(|(r, p)| p < r).collect();
    let mut gap = 0.0;
    for (r, p) in underserved {
        gap += r - p;
    }
    let mut total = 0.0;
    for (r, _) in pairs {
        total += r;
    }
    gap / total
}

pub fn check_up(pairs: &[(f64, f64)]) -> Result<(), TestCaseError> {
    let got = underprovisioning_ratio(pairs).unwrap();
    let want = up_oracle(pairs);
    prop_assert!((got - want).abs() <= 1e-12, "got {got}, want {want}");
    prop_assert!((0.0..=1.0).contains(&got));
    prop_assert_eq!(got == 0.0, pairs.iter().all(|(r, p)| p >= r));
    Ok(())
}
