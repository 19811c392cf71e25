use lbkd::tree_math::*;
use lbkd::verify::{
    brute_segment_begin, brute_segment_begins, brute_subtree_size, brute_subtree_sizes,
};
use proptest::prelude::*;

fn recursive_size(s: u32, n: u32) -> u32 {
    1 + [l_child(s), r_child(s)]
        .into_iter()
        .filter(|&c| c < n)
        .map(|c| subtree_size(c, n))
        .sum::<u32>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn subtree_size_matches_recursion(n in 1u32..=65536, frac in 0.0f64..1.0) {
        let s = ((n as f64 * frac) as u32).min(n - 1);
        prop_assert_eq!(subtree_size(s, n), brute_subtree_size(s, n));
        prop_assert_eq!(subtree_size(s, n), recursive_size(s, n));
    }

    #[test]
    fn segment_begin_matches_sum(n in 1u32..=65536, frac in 0.0f64..1.0) {
        let s = ((n as f64 * frac) as u32).min(n - 1);
        prop_assert_eq!(segment_begin(s, n), brute_segment_begin(s, n));
    }

    #[test]
    fn parent_child_relations(s in 1u32..(1 << 30)) {
        prop_assert_eq!(level(parent(s)), level(s) - 1);
        prop_assert_eq!(parent(l_child(s)), s);
        prop_assert_eq!(parent(r_child(s)), s);
        prop_assert_eq!(num_levels(s + 1), level(s) + 1);
    }

    #[test]
    fn level_sizes_sum_to_remaining_nodes(n in 1u32..=65536) {
        let sizes = brute_subtree_sizes(n);
        for l in 0..num_levels(n) {
            let first = full_tree_size(l);
            let last = full_tree_size(l + 1).min(n);
            let total: u32 = (first..last).map(|s| subtree_size(s, n)).sum();
            prop_assert_eq!(total, n - first);
            let brute: u32 = (first..last).map(|s| sizes[s as usize]).sum();
            prop_assert_eq!(brute, n - first);
        }
    }

    #[test]
    fn segment_begin_increases_within_level(n in 2u32..=8192) {
        let begins = brute_segment_begins(n);
        for l in 0..num_levels(n) {
            let first = full_tree_size(l);
            prop_assert_eq!(segment_begin(first, n), first);
            let last = full_tree_size(l + 1).min(n);
            for s in first + 1..last {
                prop_assert!(segment_begin(s, n) > segment_begin(s - 1, n));
                prop_assert_eq!(segment_begin(s, n), begins[s as usize]);
            }
        }
    }
}

#[test]
fn pivot_is_segment_begin_plus_left_size() {
    for n in 1..=600u32 {
        let sizes = brute_subtree_sizes(n);
        let begins = brute_segment_begins(n);
        for s in 0..n {
            let left = l_child(s);
            let left_size = if left < n { sizes[left as usize] } else { 0 };
            assert_eq!(
                pivot_pos(s, n),
                begins[s as usize] + left_size,
                "n={n} s={s}"
            );
        }
    }
}
