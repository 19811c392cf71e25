//! Index arithmetic for left-balanced complete binary trees stored in level order.
//!
//! Node `0` is the root, the children of node `i` are `2i + 1` and `2i + 2`, and a
//! tree of `n` nodes occupies exactly the indices `0..n`. Every level except the
//! last is full; the last level is filled from the left. Because of that, the
//! size of any subtree and the position of any subtree's points in a
//! tag-sorted array are functions of `n` alone and can be computed with a
//! couple of `clz`s and shifts.
//!
//! ```text
//!                 0
//!           /           \
//!          1             2
//!        /   \         /   \
//!       3     4       5     6
//!      / \   / \
//!     7   8 9  (10 and beyond absent for n = 10)
//! ```
//!
//! All functions are pure and allocation-free. Indices and counts are `u32`;
//! callers are expected to keep `n <= MAX_NODES` so that `2i + 2` cannot wrap.

/// Largest supported node count. Keeps `r_child` of every valid node inside `u32`.
pub const MAX_NODES: u32 = (1 << 31) - 1;

/// Level-order index of a node. The root is node 0.
pub type NodeIndex = u32;

/// Parent of node `i`. The root has no parent.
#[inline]
pub fn parent(i: NodeIndex) -> NodeIndex {
    debug_assert!(i >= 1, "the root has no parent");
    (i - 1) / 2
}

#[inline]
pub fn l_child(i: NodeIndex) -> NodeIndex {
    2 * i + 1
}

#[inline]
pub fn r_child(i: NodeIndex) -> NodeIndex {
    2 * i + 2
}

/// Level of node `i` (the root is on level 0), i.e. `floor(log2(i + 1))`.
#[inline]
pub fn level(i: NodeIndex) -> u32 {
    31 - (i + 1).leading_zeros()
}

/// Number of levels of a tree with `n >= 1` nodes. Same as `level(n - 1) + 1`.
#[inline]
pub fn num_levels(n: u32) -> u32 {
    debug_assert!(n >= 1, "an empty tree has no levels");
    32 - n.leading_zeros()
}

/// Number of nodes in a full tree of `l` levels, `2^l - 1`.
#[inline]
pub fn full_tree_size(l: u32) -> u32 {
    debug_assert!(l <= 31);
    (1u32 << l) - 1
}

/// First lowest-level child: the leftmost slot on level `num_levels(n) - 1` that
/// the subtree under `s` would cover in a full tree. Computed by appending
/// one-bits to `s`, once per level between `s` and the last level.
#[inline]
pub fn fllc(s: NodeIndex, n: u32) -> NodeIndex {
    let below = levels_below(s, n);
    !((!s) << below)
}

/// Number of nodes in the subtree rooted at `s` in a tree of `n` nodes.
///
/// The levels from `level(s)` down to the second-to-last are full; the last level
/// contributes whatever part of `s`'s would-be range `[fllc, fllc + 2^below)`
/// actually exists.
#[inline]
pub fn subtree_size(s: NodeIndex, n: u32) -> u32 {
    let below = levels_below(s, n);
    let lowest_width = 1u32 << below;
    let inner = lowest_width - 1;
    let lowest = n.saturating_sub(fllc(s, n)).min(lowest_width);
    inner + lowest
}

/// How many nodes sit left of `s` on its own level: `s - F(level(s))`.
#[inline]
pub fn num_left_siblings(s: NodeIndex) -> u32 {
    s - full_tree_size(level(s))
}

/// Start of the segment holding subtree `s` in an array sorted by level-`level(s)`
/// ancestor tags.
///
/// The array begins with the `F(l)` already-placed nodes of the upper levels,
/// followed by the subtrees of `s`'s left siblings. Those siblings contribute
/// their full inner levels plus their share of the (left-filled) last level.
#[inline]
pub fn segment_begin(s: NodeIndex, n: u32) -> u32 {
    let l = level(s);
    let total = num_levels(n);
    let below = levels_below(s, n);
    let nls = num_left_siblings(s);
    let lowest_width = 1u32 << below;
    let last_level_nodes = n - full_tree_size(total - 1);
    full_tree_size(l) + nls * (lowest_width - 1) + (nls * lowest_width).min(last_level_nodes)
}

/// Array position of the element that becomes node `s` once its segment is sorted
/// along `s`'s split dimension: everything before it goes left, everything after
/// it goes right.
#[inline]
pub fn pivot_pos(s: NodeIndex, n: u32) -> u32 {
    let left = l_child(s);
    let left_size = if left < n { subtree_size(left, n) } else { 0 };
    segment_begin(s, n) + left_size
}

/// Levels strictly below `s` down to the last level of an `n`-node tree.
#[inline]
fn levels_below(s: NodeIndex, n: u32) -> u32 {
    let l = level(s);
    let total = num_levels(n);
    debug_assert!(
        l < total,
        "node {s} lies below the last level of a {n}-node tree"
    );
    total - l - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parent_and_children() {
        assert_eq!(parent(1), 0);
        assert_eq!(parent(2), 0);
        assert_eq!(parent(9), 4);
        assert_eq!(l_child(0), 1);
        assert_eq!(r_child(2), 6);
        assert_eq!(l_child(4), 9);
    }

    #[test]
    fn levels() {
        assert_eq!(level(0), 0);
        assert_eq!(level(6), 2);
        assert_eq!(level(7), 3);
        assert_eq!(num_levels(1), 1);
        assert_eq!(num_levels(10), 4);
        assert_eq!(num_levels(1024), 11);
        assert_eq!(num_levels(MAX_NODES), 31);
    }

    #[test]
    fn full_sizes() {
        assert_eq!(full_tree_size(0), 0);
        assert_eq!(full_tree_size(1), 1);
        assert_eq!(full_tree_size(3), 7);
        assert_eq!(full_tree_size(31), MAX_NODES);
    }

    #[test]
    fn first_lowest_level_child() {
        assert_eq!(fllc(0, 10), 7);
        assert_eq!(fllc(3, 10), 7);
        assert_eq!(fllc(5, 10), 11);
    }

    #[test]
    fn subtree_sizes_for_ten_nodes() {
        assert_eq!(subtree_size(0, 10), 10);
        assert_eq!(subtree_size(1, 10), 6);
        assert_eq!(subtree_size(5, 10), 1);
        assert_eq!(subtree_size(2, 10), 3);
        // last-level nodes are leaves
        assert_eq!(subtree_size(9, 10), 1);
    }

    #[test]
    fn left_siblings() {
        assert_eq!(num_left_siblings(0), 0);
        assert_eq!(num_left_siblings(2), 1);
        assert_eq!(num_left_siblings(7), 0);
    }

    #[test]
    fn segment_begins_for_ten_nodes() {
        assert_eq!(segment_begin(0, 10), 0);
        assert_eq!(segment_begin(1, 10), 1);
        assert_eq!(segment_begin(2, 10), 7);
        // a last-level node's segment is its own final slot
        for s in 7..10 {
            assert_eq!(segment_begin(s, 10), s);
        }
    }

    #[test]
    fn pivots_for_ten_nodes() {
        assert_eq!(pivot_pos(0, 10), 6);
        assert_eq!(pivot_pos(1, 10), 4);
        assert_eq!(pivot_pos(2, 10), 8);
        // node 5 has no children in a 10-node tree
        assert_eq!(pivot_pos(5, 10), segment_begin(5, 10));
    }

    #[test]
    fn largest_tree_does_not_overflow() {
        let n = MAX_NODES;
        assert_eq!(subtree_size(0, n), n);
        assert_eq!(segment_begin(n - 1, n), n - 1);
        assert_eq!(pivot_pos(0, n), full_tree_size(30));
        assert_eq!(r_child(n - 2), u32::MAX - 3);
    }
}
