//! Left-balanced, complete k-d trees built by iterative tag-and-sort.
//!
//! Trees are stored without pointers: node `s` lives at index `s` of a flat
//! array, its children at `2s + 1` and `2s + 2`. Construction runs
//! `num_levels(n)` rounds of one full-array sort and one independent
//! per-element tag update, so both phases parallelize without tracking
//! subtrees.
//!
//! ```
//! use lbkd::{build_round_robin, knn, Points};
//!
//! let points = Points::from_rows(2, &[[10.0, 15.0], [46.0, 63.0], [68.0, 21.0]]).unwrap();
//! let tree = build_round_robin(points).unwrap();
//! assert_eq!(tree.points().point(0), &[46.0, 63.0]);
//!
//! let nearest = knn(&tree, &[60.0, 20.0], 1).unwrap();
//! assert_eq!(tree.points().point(nearest[0].index as usize), &[68.0, 21.0]);
//! ```

pub mod builder;
mod error;
mod points;
pub mod queries;
pub mod random;
mod tree;
pub mod tree_math;
pub mod verify;
pub mod widest;

pub use builder::{build_round_robin, BuildObserver, BuildStats, Builder, PhaseRecorder};
pub use error::{Error, Result};
pub use points::Points;
pub use queries::{knn, radius_query, Neighbor};
pub use tree::{KdTree, SplitMode, TreeShape};
pub use widest::{build_widest, Aabb};
