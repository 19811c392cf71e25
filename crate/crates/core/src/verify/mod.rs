//! Reference builders, brute-force oracles and validity checks.

mod fixture;
mod invariants;
mod oracles;
mod selftest;

pub use fixture::{
    walkthrough_input, FixtureMismatch, StateTable, WalkthroughFixture, WALKTHROUGH_INPUT,
};
pub use invariants::InvariantChecker;
pub use oracles::{
    brute_knn, brute_radius, brute_segment_begin, brute_segment_begins, brute_subtree_boxes,
    brute_subtree_size, brute_subtree_sizes, check_valid, is_permutation_of, reference_build,
    widest_dim_mismatch, ValidityReport, Violation,
};
pub use selftest::{run_selftest, CaseResult, SelftestConfig, SelftestReport};
