mod common;

use combplan::metrics::{max_mws_block_cost, underprovisioning_ratio, wavelength_source_count};
use combplan::netgraph::{generate_demands, scale_demands, Topology};
use combplan::phys::{config_ladder, PathBudget, SnrMode};
use combplan::planner::{downgrade, PlanResult, Planner, PlannerParams, PlannerPolicy};
use combplan::spectrum::{GridParams, SlotBlock, SlotState, SpectrumGrid};
use combplan::txmodel::PhysicalConstants;
use proptest::prelude::*;

fn small_params(slots: usize) -> PlannerParams {
    PlannerParams {
        grid: GridParams {
            slots_per_link: slots,
            ..GridParams::default()
        },
        ..PlannerParams::default()
    }
}

/// Random networks with lengths in the hundreds of kilometres and random weights.
fn network() -> impl Strategy<Value = (Topology, Vec<f64>)> {
    common::graph_case()
        .prop_flat_map(|g| {
            let n = g.n;
            (Just(g), prop::collection::vec(0.0f64..3.0, n))
        })
        .prop_filter_map("needs a demand", |(g, w)| {
            let links: Vec<_> = g.links.iter().map(|&(a, b, l)| (a, b, l * 150.0)).collect();
            let topo = Topology::from_links("rand", &w, &links).ok()?;
            generate_demands(&topo).ok()?;
            Some((topo, w))
        })
}

fn same_placement(a: &PlanResult, b: &PlanResult) -> bool {
    a.lightpaths.len() == b.lightpaths.len()
        && a.lightpaths.iter().zip(&b.lightpaths).all(|(x, y)| {
            x.demand == y.demand
                && x.route == y.route
                && x.config == y.config
                && x.block == y.block
                && x.snr == y.snr
        })
        && a.provisioned_gbps == b.provisioned_gbps
        && a.failures == b.failures
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn every_plan_passes_its_audit(
        (topo, _) in network(),
        art in 0.5f64..60.0,
        slots in prop::sample::select(vec![24usize, 64, 400]),
        n_lines in prop::sample::select(vec![2u32, 4, 8]),
        cutoff_frac in 0.0f64..1.0,
        penalty in 0.0f64..6.0,
    ) {
        let demands = scale_demands(&generate_demands(&topo).unwrap(), art).unwrap();
        let planner = Planner::new(&topo, small_params(slots)).unwrap();
        let cutoff = 1 + ((n_lines - 1) as f64 * cutoff_frac) as u32;
        for policy in [
            PlannerPolicy::sws(),
            PlannerPolicy::fixed_fsr(n_lines, cutoff),
            PlannerPolicy::flexible_fsr(n_lines, penalty),
        ] {
            let plan = planner.plan(&demands, &policy).unwrap();
            if let Err(e) = plan.audit() {
                return Err(TestCaseError::fail(format!("{policy:?}: {e}")));
            }
            prop_assert!(wavelength_source_count(&plan) <= plan.lp_count());
            for d in &demands {
                let p = plan.provisioned_gbps[&d.id];
                let failed = plan.failures.iter().any(|f| f.demand == d.id);
                prop_assert!(p + 1e-6 >= d.requested_gbps || failed);
            }
        }
    }

    #[test]
    fn zero_penalty_flexible_places_like_sws((topo, _) in network(), art in 0.5f64..80.0) {
        let demands = scale_demands(&generate_demands(&topo).unwrap(), art).unwrap();
        let planner = Planner::new(&topo, small_params(96)).unwrap();
        let sws = planner.plan(&demands, &PlannerPolicy::sws()).unwrap();
        let flex = planner.plan(&demands, &PlannerPolicy::flexible_fsr(4, 0.0)).unwrap();
        prop_assert!(same_placement(&sws, &flex));
    }

    #[test]
    fn planning_is_deterministic((topo, _) in network(), art in 0.5f64..40.0) {
        let demands = scale_demands(&generate_demands(&topo).unwrap(), art).unwrap();
        let planner = Planner::new(&topo, small_params(64)).unwrap();
        let policy = PlannerPolicy::fixed_fsr(4, 2);
        let a = planner.plan(&demands, &policy).unwrap();
        let b = planner.plan(&demands, &policy).unwrap();
        prop_assert!(same_placement(&a, &b));
        prop_assert_eq!(a.mws_instances, b.mws_instances);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn up_is_scale_invariant(pairs in common::up_case(), k in 0.01f64..100.0) {
        let scaled: Vec<_> = pairs.iter().map(|&(r, p)| (r * k, p * k)).collect();
        let a = underprovisioning_ratio(&pairs).unwrap();
        let b = underprovisioning_ratio(&scaled).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn block_cost_monotone(
        sws in 1usize..500,
        extra in 0usize..50,
        mws in 1usize..200,
        s in 0.05f64..0.9,
        ds in 0.001f64..0.05,
    ) {
        let f = |a, b, c, s| max_mws_block_cost(a, b, c, s).unwrap().multiple();
        let base = f(sws, sws + extra, mws, s);
        if let Some(m) = base {
            // flat in s when the comb plan needs no extra lightpaths
            let up = f(sws, sws + extra, mws, s + ds).unwrap();
            if extra == 0 {
                prop_assert!((up - m).abs() < 1e-9);
            } else {
                prop_assert!(up > m);
            }
            prop_assert!(f(sws + 1, sws + extra, mws, s).unwrap() > m);
            prop_assert!(f(sws, sws + extra, mws + 1, s).unwrap() < m);
            if let Some(m2) = f(sws, sws + extra + 1, mws, s) {
                prop_assert!(m2 < m);
            }
        }
    }

    #[test]
    fn full_snr_feasibility_implies_linear(lengths in prop::collection::vec(1.0f64..900.0, 1..8), osnr in 20.0f64..45.0) {
        let n = lengths.len();
        let links: Vec<_> = lengths.iter().enumerate().map(|(i, &l)| (i, i + 1, l)).collect();
        let topo = Topology::from_links("chain", &vec![1.0; n + 1], &links).unwrap();
        let path = &combplan::netgraph::k_shortest_paths(&topo, 0, n, 1)[0];
        let budget = PathBudget::new(path, &Default::default(), &PhysicalConstants::default()).unwrap();
        let linear = budget.feasible(osnr, SnrMode::LinearOnly);
        for c in budget.feasible(osnr, SnrMode::Full) {
            prop_assert!(linear.contains(&c));
        }
        for c in &linear {
            for width in c.width_slots as usize..=12 {
                if let Some(d) = downgrade(&budget, c, width, osnr) {
                    prop_assert!(d.width_slots as usize <= width);
                    prop_assert!(budget.is_feasible(&d, osnr, SnrMode::Full));
                    prop_assert!(d.data_rate_gbps <= c.data_rate_gbps);
                }
            }
        }
        prop_assert!(config_ladder().len() == 12);
    }

    #[test]
    fn spectrum_operations_conserve_slots(
        ops in prop::collection::vec((0usize..3, 0usize..40, 1usize..8, prop::sample::subsequence(vec![0usize, 1, 2, 3], 1..=4)), 1..60),
    ) {
        let mut grid = SpectrumGrid::new(4, GridParams { slots_per_link: 40, ..GridParams::default() });
        let mut next_mws = 0;
        for (i, (kind, start, width, links)) in ops.into_iter().enumerate() {
            let before: Vec<Vec<SlotState>> = (0..4).map(|l| grid.link_states(l).to_vec()).collect();
            match kind {
                0 => {
                    if grid.allocate(&links, SlotBlock::new(start, width), SlotState::Used(i)).is_err() {
                        let after: Vec<Vec<SlotState>> = (0..4).map(|l| grid.link_states(l).to_vec()).collect();
                        prop_assert_eq!(before, after, "failed allocation must not change anything");
                    }
                }
                1 => {
                    if let Ok(Some(_)) = grid.reserve_fixed_fsr(&links, 2, width.min(4), next_mws) {
                        grid.activate_reserved_line(next_mws, 0, 1000 + i).unwrap();
                        prop_assert!(grid.activate_reserved_line(next_mws, 0, 2000 + i).is_err());
                        next_mws += 1;
                    }
                }
                _ => {
                    if let Some(b) = grid.first_fit(&links, width) {
                        for &l in &links {
                            prop_assert!(b.slots().all(|s| grid.state(l, s) == SlotState::Free));
                        }
                    }
                }
            }
            for l in 0..4 {
                let c = grid.counts(l);
                prop_assert_eq!(c.free + c.used + c.reserved, 40);
            }
        }
    }
}
