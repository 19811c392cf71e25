use lbkd::random::{alphabet_points, distinct_points, uniform_points};
use lbkd::tree_math::num_levels;
use lbkd::verify::{
    brute_knn, brute_radius, brute_subtree_boxes, check_valid, is_permutation_of, reference_build,
    widest_dim_mismatch, InvariantChecker,
};
use lbkd::{knn, radius_query, Builder, Points, SplitMode};
use proptest::prelude::*;

const MODES: [SplitMode; 2] = [SplitMode::RoundRobin, SplitMode::Widest];

fn points_strategy(max_n: usize) -> impl Strategy<Value = Points> {
    (1usize..=4, 0usize..=max_n).prop_flat_map(|(dims, n)| {
        prop::collection::vec(-8i32..8, n * dims).prop_map(move |raw| {
            let coords = raw.into_iter().map(f64::from).collect();
            Points::from_flat(dims, coords, (0..n as u64).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn builds_are_valid_permutations(points in points_strategy(300)) {
        for mode in MODES {
            let tree = Builder::new(mode).build(points.clone()).unwrap();
            prop_assert!(is_permutation_of(&tree, &points));
            let report = check_valid(&tree);
            prop_assert!(report.is_valid(), "{:?}", report.violation);
        }
    }

    #[test]
    fn phase_invariants_hold(points in points_strategy(200), skip in any::<bool>()) {
        let n = points.len();
        let dims = points.dims();
        for mode in MODES {
            let mut checker = match mode {
                SplitMode::RoundRobin => InvariantChecker::round_robin(n, dims),
                SplitMode::Widest => InvariantChecker::widest(n, dims),
            };
            let (_, stats) = Builder::new(mode)
                .skip_placed_prefix(skip)
                .build_observed(points.clone(), &mut checker)
                .unwrap();
            prop_assert!(checker.is_clean(), "{:?}", checker.failures);
            if n >= 2 {
                prop_assert_eq!(stats.sort_phases, num_levels(n as u32));
                prop_assert_eq!(stats.update_phases, num_levels(n as u32) - 1);
            }
            prop_assert_eq!(stats.tag_entries, n);
        }
    }

    #[test]
    fn widest_boxes_nest_and_contain_their_points(points in points_strategy(200)) {
        let tree = Builder::new(SplitMode::Widest).build(points).unwrap();
        prop_assert_eq!(widest_dim_mismatch(&tree), None);
        let boxes = brute_subtree_boxes(&tree);
        for s in 0..tree.len() {
            if s > 0 {
                prop_assert!(boxes[(s - 1) / 2].contains_box(&boxes[s]));
            }
            prop_assert!(boxes[s].contains(tree.points().point(s)));
            // every ancestor's box holds this point
            let mut a = s;
            while a > 0 {
                a = (a - 1) / 2;
                prop_assert!(boxes[a].contains(tree.points().point(s)));
            }
        }
    }

    #[test]
    fn queries_match_linear_scan(points in points_strategy(150), q in prop::collection::vec(-9.0f64..9.0, 4), m in 1usize..20, r in 0.0f64..6.0) {
        prop_assume!(!points.is_empty());
        let q = &q[..points.dims()];
        for mode in MODES {
            let tree = Builder::new(mode).build(points.clone()).unwrap();
            let expected = brute_knn(tree.points(), q, m);
            prop_assert_eq!(&knn(&tree, q, m).unwrap(), &expected);
            prop_assert_eq!(&lbkd::queries::knn_exhaustive(&tree, q, m).unwrap(), &expected);
            let within = brute_radius(tree.points(), q, r);
            prop_assert_eq!(&radius_query(&tree, q, r).unwrap(), &within);
            prop_assert_eq!(&lbkd::queries::radius_query_exhaustive(&tree, q, r).unwrap(), &within);
        }
    }
}

#[test]
fn distinct_coordinates_reproduce_the_reference_builder() {
    for (i, n) in [2usize, 5, 17, 100, 511, 512, 513, 2000]
        .into_iter()
        .enumerate()
    {
        for dims in 1..=4 {
            let points = distinct_points(n, dims, 1234 + i as u64 * 10 + dims as u64);
            for mode in MODES {
                let built = Builder::new(mode).build(points.clone()).unwrap();
                let reference = reference_build(&points, mode).unwrap();
                assert_eq!(built, reference, "{mode} n={n} k={dims}");
            }
        }
    }
}

#[test]
fn parallel_and_serial_phases_agree() {
    // above the parallel threshold
    let points = distinct_points(40_000, 3, 77);
    for mode in MODES {
        let par = Builder::new(mode)
            .parallel(true)
            .build(points.clone())
            .unwrap();
        let ser = Builder::new(mode)
            .parallel(false)
            .build(points.clone())
            .unwrap();
        assert_eq!(par, ser, "{mode}");
        assert!(check_valid(&par).is_valid());
    }
}

#[test]
fn large_duplicate_heavy_build_is_valid() {
    let points = alphabet_points(50_000, 2, &[0.0, 1.0, 2.0], 5);
    for mode in MODES {
        let tree = Builder::new(mode).build(points.clone()).unwrap();
        assert!(check_valid(&tree).is_valid(), "{mode}");
        assert!(is_permutation_of(&tree, &points));
    }
}

#[test]
fn widest_tree_of_256_uniform_points_records_domain_widest_dims() {
    let points = uniform_points(256, 3, 2024);
    let tree = Builder::new(SplitMode::Widest).build(points).unwrap();
    assert_eq!(widest_dim_mismatch(&tree), None);
    let queries = uniform_points(20, 3, 9);
    for (q, _) in queries.iter() {
        assert_eq!(knn(&tree, q, 5).unwrap(), brute_knn(tree.points(), q, 5));
    }
}
