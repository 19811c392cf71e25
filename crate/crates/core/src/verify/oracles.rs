//! Slow, direct reference implementations. None of them use the closed-form
//! index formulas or the tag-and-sort builder, so they can check both.

use std::cmp::Ordering;

use crate::error::Result;
use crate::points::Points;
use crate::queries::{squared_distance, Neighbor};
use crate::tree::{KdTree, SplitMode};
use crate::widest::{widest_dim, Aabb};

/// Size of the subtree under `s` by direct recursion over existing children.
pub fn brute_subtree_size(s: u32, n: u32) -> u32 {
    let s = s as u64;
    let n = n as u64;
    fn count(s: u64, n: u64) -> u64 {
        if s >= n {
            0
        } else {
            1 + count(2 * s + 1, n) + count(2 * s + 2, n)
        }
    }
    count(s, n) as u32
}

/// Subtree sizes of all `n` nodes, children before parents.
pub fn brute_subtree_sizes(n: u32) -> Vec<u32> {
    let n = n as usize;
    let mut sizes = vec![1u32; n];
    for s in (0..n).rev() {
        for child in [2 * s + 1, 2 * s + 2] {
            if child < n {
                sizes[s] += sizes[child];
            }
        }
    }
    sizes
}

/// Start of `s`'s segment: nodes on the levels above `s`, plus the sizes of
/// all subtrees left of `s` on its level.
pub fn brute_segment_begin(s: u32, n: u32) -> u32 {
    let first = first_on_level_of(s);
    first + (first..s).map(|i| brute_subtree_size(i, n)).sum::<u32>()
}

/// Segment starts of all `n` nodes from one pass of per-level prefix sums.
pub fn brute_segment_begins(n: u32) -> Vec<u32> {
    let sizes = brute_subtree_sizes(n);
    let mut begins = vec![0u32; n as usize];
    let mut running = 0;
    for s in 0..n {
        let first = first_on_level_of(s);
        if s == first {
            running = first;
        }
        begins[s as usize] = running;
        running += sizes[s as usize];
    }
    begins
}

/// Index of the leftmost node on `s`'s level, found by walking up to the root.
fn first_on_level_of(s: u32) -> u32 {
    let mut depth = 0;
    let mut node = s;
    while node > 0 {
        node = (node - 1) / 2;
        depth += 1;
    }
    (1u32 << depth) - 1
}

/// Top-down recursive builder: sort the subtree's points along the node's
/// dimension, take the element after the left subtree's worth of points as the
/// node, recurse into both sides.
pub fn reference_build(points: &Points, mode: SplitMode) -> Result<KdTree> {
    points.validate_finite()?;
    let n = points.len();
    if n == 0 {
        let dims = (mode == SplitMode::Widest).then(Vec::new);
        return Ok(KdTree::new_unchecked(points.clone(), dims));
    }
    let sizes = brute_subtree_sizes(n as u32);
    let mut placed = vec![usize::MAX; n];
    let mut dims = vec![0u8; n];
    let mut slots: Vec<usize> = (0..n).collect();
    let world = bounds_of(points);
    place(
        points,
        mode,
        &sizes,
        &mut slots,
        0,
        0,
        world,
        &mut placed,
        &mut dims,
    );
    let mut out = Points::with_capacity(points.dims(), n)?;
    for &i in &placed {
        out.push(points.point(i), points.payload(i))?;
    }
    let split_dims = (mode == SplitMode::Widest).then_some(dims);
    Ok(KdTree::new_unchecked(out, split_dims))
}

#[allow(clippy::too_many_arguments)]
fn place(
    points: &Points,
    mode: SplitMode,
    sizes: &[u32],
    slots: &mut [usize],
    node: usize,
    depth: usize,
    domain: Aabb,
    placed: &mut [usize],
    dims: &mut [u8],
) {
    if slots.is_empty() {
        return;
    }
    assert_eq!(
        slots.len(),
        sizes[node] as usize,
        "subtree {node} size mismatch"
    );
    let dim = match mode {
        SplitMode::RoundRobin => depth % points.dims(),
        SplitMode::Widest => widest_dim(&domain),
    };
    slots.sort_by(|&a, &b| {
        points
            .coord(a, dim)
            .partial_cmp(&points.coord(b, dim))
            .unwrap_or(Ordering::Equal)
    });
    let left_child = 2 * node + 1;
    let left = sizes.get(left_child).copied().unwrap_or(0) as usize;
    let pivot = slots[left];
    placed[node] = pivot;
    dims[node] = dim as u8;
    let plane = points.coord(pivot, dim);
    let (left_slots, rest) = slots.split_at_mut(left);
    let mut left_domain = domain.clone();
    left_domain.hi[dim] = left_domain.hi[dim].min(plane);
    let mut right_domain = domain;
    right_domain.lo[dim] = right_domain.lo[dim].max(plane);
    place(
        points,
        mode,
        sizes,
        left_slots,
        left_child,
        depth + 1,
        left_domain,
        placed,
        dims,
    );
    place(
        points,
        mode,
        sizes,
        &mut rest[1..],
        left_child + 1,
        depth + 1,
        right_domain,
        placed,
        dims,
    );
}

fn bounds_of(points: &Points) -> Aabb {
    let k = points.dims();
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    for (p, _) in points.iter() {
        for d in 0..k {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    Aabb::new(lo, hi)
}

/// First node/descendant pair found breaking the k-d ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub node: u32,
    pub descendant: u32,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub nodes: usize,
    pub violation: Option<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks every (node, descendant) pair: left descendants must not exceed the
/// node along its split dimension, right descendants must not fall below it.
/// Nodes are scanned in index order, so the reported violation has the lowest
/// offending node.
pub fn check_valid(tree: &KdTree) -> ValidityReport {
    let n = tree.len() as u64;
    let points = tree.points();
    for s in 0..n {
        let dim = tree.split_dim(s as u32);
        let plane = points.coord(s as usize, dim);
        for (child, left) in [(2 * s + 1, true), (2 * s + 2, false)] {
            let mut first = child;
            let mut width = 1u64;
            while first < n {
                for d in first..(first + width).min(n) {
                    let c = points.coord(d as usize, dim);
                    let ok = if left { c <= plane } else { c >= plane };
                    if !ok {
                        return ValidityReport {
                            nodes: tree.len(),
                            violation: Some(Violation {
                                node: s as u32,
                                descendant: d as u32,
                                dim,
                            }),
                        };
                    }
                }
                first = 2 * first + 1;
                width *= 2;
            }
        }
    }
    ValidityReport {
        nodes: tree.len(),
        violation: None,
    }
}

/// Linear scan ranked by (distance, index).
pub fn brute_knn(points: &Points, query: &[f64], m: usize) -> Vec<Neighbor> {
    let mut all: Vec<Neighbor> = points
        .iter()
        .enumerate()
        .map(|(i, (p, _))| Neighbor {
            index: i as u32,
            dist2: squared_distance(p, query),
        })
        .collect();
    all.sort_by(|a, b| a.cmp_rank(b));
    all.truncate(m);
    all
}

pub fn brute_radius(points: &Points, query: &[f64], r: f64) -> Vec<u32> {
    points
        .iter()
        .enumerate()
        .filter(|(_, (p, _))| squared_distance(p, query) <= r * r)
        .map(|(i, _)| i as u32)
        .collect()
}

/// Domain of every node, top-down from the world box, clipping at each node's
/// stored plane.
pub fn brute_subtree_boxes(tree: &KdTree) -> Vec<Aabb> {
    let n = tree.len();
    if n == 0 {
        return Vec::new();
    }
    let points = tree.points();
    let mut boxes = vec![bounds_of(points); n];
    for s in 0..n {
        let dim = tree.split_dim(s as u32);
        let plane = points.coord(s, dim);
        if 2 * s + 1 < n {
            let mut b = boxes[s].clone();
            b.hi[dim] = b.hi[dim].min(plane);
            boxes[2 * s + 1] = b;
        }
        if 2 * s + 2 < n {
            let mut b = boxes[s].clone();
            b.lo[dim] = b.lo[dim].max(plane);
            boxes[2 * s + 2] = b;
        }
    }
    boxes
}

/// Node whose recorded split dimension differs from its domain's widest one.
pub fn widest_dim_mismatch(tree: &KdTree) -> Option<(u32, usize, usize)> {
    let dims = tree.split_dims()?;
    brute_subtree_boxes(tree)
        .iter()
        .enumerate()
        .find_map(|(s, b)| {
            let expected = widest_dim(b);
            (dims[s] as usize != expected).then_some((s as u32, dims[s] as usize, expected))
        })
}

/// Whether payloads in `tree` are a permutation of those in `input`, with each
/// point's coordinates unchanged.
pub fn is_permutation_of(tree: &KdTree, input: &Points) -> bool {
    if tree.len() != input.len() || tree.dims() != input.dims() {
        return false;
    }
    let mut a: Vec<(u64, Vec<u64>)> = tree
        .points()
        .iter()
        .map(|(p, id)| (id, p.iter().map(|c| c.to_bits()).collect()))
        .collect();
    let mut b: Vec<(u64, Vec<u64>)> = input
        .iter()
        .map(|(p, id)| (id, p.iter().map(|c| c.to_bits()).collect()))
        .collect();
    a.sort();
    b.sort();
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::fixture::walkthrough_input;

    #[test]
    fn brute_sizes_and_begins() {
        assert_eq!(brute_subtree_size(1, 10), 6);
        assert_eq!(brute_segment_begin(2, 10), 7);
        for n in [1, 2, 10, 77] {
            assert_eq!(brute_subtree_size(0, n), n);
            let sizes = brute_subtree_sizes(n);
            let begins = brute_segment_begins(n);
            for s in 0..n {
                assert_eq!(sizes[s as usize], brute_subtree_size(s, n));
                assert_eq!(begins[s as usize], brute_segment_begin(s, n));
            }
        }
    }

    #[test]
    fn reference_build_matches_walkthrough() {
        let tree = reference_build(&walkthrough_input(), SplitMode::RoundRobin).unwrap();
        assert_eq!(
            tree.points().column(0),
            vec![46.0, 15.0, 53.0, 40.0, 44.0, 68.0, 62.0, 10.0, 45.0, 25.0]
        );
        assert_eq!(
            tree.points().column(1),
            vec![63.0, 43.0, 67.0, 33.0, 58.0, 21.0, 69.0, 15.0, 40.0, 54.0]
        );
    }

    #[test]
    fn reference_build_of_seven_sorted_values() {
        let rows: Vec<[f64; 1]> = (0..7).map(|v| [v as f64]).collect();
        let tree =
            reference_build(&Points::from_rows(1, &rows).unwrap(), SplitMode::RoundRobin).unwrap();
        assert_eq!(
            tree.points().column(0),
            vec![3.0, 1.0, 5.0, 0.0, 2.0, 4.0, 6.0]
        );

        let one = Points::from_rows(2, &[[1.0, 2.0]]).unwrap();
        assert_eq!(
            reference_build(&one, SplitMode::RoundRobin)
                .unwrap()
                .points(),
            &one
        );
    }

    #[test]
    fn validity_checker() {
        let tree = reference_build(&walkthrough_input(), SplitMode::RoundRobin).unwrap();
        assert!(check_valid(&tree).is_valid());

        let mut order: Vec<u32> = (0..10).collect();
        order.swap(0, 1);
        let mut swapped = tree.points().clone();
        swapped.permute(&order);
        let broken = KdTree::new_unchecked(swapped, None);
        let report = check_valid(&broken);
        assert_eq!(report.violation.map(|v| (v.node, v.dim)), Some((0, 0)));

        let single = KdTree::new_unchecked(Points::from_rows(3, &[[0.0, 1.0, 2.0]]).unwrap(), None);
        assert!(check_valid(&single).is_valid());
    }

    #[test]
    fn brute_knn_orders_everything() {
        let points = walkthrough_input();
        let all = brute_knn(&points, &[45.0, 40.0], 10);
        assert_eq!(all.len(), 10);
        assert_eq!(
            all[0],
            Neighbor {
                index: 7,
                dist2: 0.0
            }
        );
        assert!(all.windows(2).all(|w| w[0].dist2 <= w[1].dist2));
    }

    #[test]
    fn boxes_nest_and_share_faces() {
        let tree = reference_build(&walkthrough_input(), SplitMode::Widest).unwrap();
        let boxes = brute_subtree_boxes(&tree);
        assert_eq!(boxes[0], Aabb::new(vec![10.0, 15.0], vec![68.0, 69.0]));
        let dim = tree.split_dim(0);
        assert_eq!(boxes[1].hi[dim], boxes[2].lo[dim]);
        for s in 1..boxes.len() {
            assert!(boxes[(s - 1) / 2].contains_box(&boxes[s]));
        }
        assert_eq!(widest_dim_mismatch(&tree), None);
    }
}
