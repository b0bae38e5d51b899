mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: common::CASES, ..ProptestConfig::default() })]

    #[test]
    fn first_fit_matches_exhaustive_scan(c in common::grid_case()) {
        common::check_first_fit(&c)?;
    }

    #[test]
    fn ksp_matches_path_enumeration(c in common::graph_case()) {
        common::check_ksp(&c)?;
    }

    #[test]
    fn underprovisioning_matches_direct_evaluation(pairs in common::up_case()) {
        common::check_up(&pairs)?;
    }
}
