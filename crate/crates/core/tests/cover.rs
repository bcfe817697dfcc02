//! Pipeline covers against the exact path cover number.

use pathcover_core::cover::{
    certified_lower_bound, exact_mu, is_hamiltonian, lower_bound_mu, verify_cover,
};
use pathcover_core::graph::{sample_gnp, SampleParams};
use pathcover_core::pipeline::{solve, PipelineConfig};
use pathcover_testkit as oracle;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn small_covers_are_sandwiched(n in 6usize..=14, c in 1.0f64..4.0, seed in any::<u64>()) {
        let g = sample_gnp(&SampleParams::new(n, c, seed)).unwrap();
        let mu = oracle::path_cover_number(&g);
        prop_assert_eq!(exact_mu(&g).unwrap(), mu);
        prop_assert_eq!(is_hamiltonian(&g).unwrap(), oracle::is_hamiltonian(&g));
        prop_assert!(lower_bound_mu(&g) <= mu);
        if mu > 0 {
            prop_assert!(certified_lower_bound(&g) <= mu);
        }
        let run = solve(&g, c, &PipelineConfig::for_c(c), seed).unwrap();
        prop_assert!(verify_cover(&g, &run.result.cover).is_valid());
        prop_assert!(run.result.cover.size() >= mu);
    }

    #[test]
    fn larger_covers_are_valid(n in 50usize..400, c in 2.0f64..10.0, seed in any::<u64>()) {
        let g = sample_gnp(&SampleParams::new(n, c, seed)).unwrap();
        let run = solve(&g, c, &PipelineConfig::for_c(c), seed).unwrap();
        let r = &run.result;
        prop_assert!(r.cover_valid);
        prop_assert!(verify_cover(&g, &r.cover).is_valid());
        prop_assert!(r.cover.size() >= r.gap.lower_bound);
        prop_assert_eq!(r.success, r.fallback.is_none() && r.reduction.gstar_vertices >= 3);
    }
}
