//! Nearest-neighbor and radius queries over the level-order layout.
//!
//! Traversal is pure index arithmetic: from node `s` descend into the child on
//! the query's side of `s`'s plane, and push the other child together with its
//! squared plane distance. A pushed side is skipped when that distance already
//! exceeds the current bound. The stack never holds more than one entry per
//! level.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::tree::KdTree;
use crate::tree_math::{l_child, r_child, NodeIndex};

/// Levels of the deepest supported tree.
const MAX_DEPTH: usize = 32;

/// A result entry: node index and squared Euclidean distance to the query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: NodeIndex,
    pub dist2: f64,
}

impl Neighbor {
    /// Ascending distance, then ascending index.
    pub fn cmp_rank(&self, other: &Self) -> Ordering {
        self.dist2
            .total_cmp(&other.dist2)
            .then(self.index.cmp(&other.index))
    }
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The `m` nearest points to `query`, ascending by distance with ties broken by
/// lower node index. Returns all points when the tree has fewer than `m`.
pub fn knn(tree: &KdTree, query: &[f64], m: usize) -> Result<Vec<Neighbor>> {
    knn_with(tree, query, m, true)
}

/// [`knn`] without pruning: every node is visited. Exists to check that pruning
/// never changes an answer.
pub fn knn_exhaustive(tree: &KdTree, query: &[f64], m: usize) -> Result<Vec<Neighbor>> {
    knn_with(tree, query, m, false)
}

/// Indices of all points within distance `r` (inclusive), ascending.
pub fn radius_query(tree: &KdTree, query: &[f64], r: f64) -> Result<Vec<NodeIndex>> {
    radius_with(tree, query, r, true)
}

pub fn radius_query_exhaustive(tree: &KdTree, query: &[f64], r: f64) -> Result<Vec<NodeIndex>> {
    radius_with(tree, query, r, false)
}

fn check_query(tree: &KdTree, query: &[f64]) -> Result<()> {
    if query.len() != tree.dims() {
        return Err(Error::DimensionMismatch {
            expected: tree.dims(),
            got: query.len(),
        });
    }
    if let Some(dim) = query.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite { point: 0, dim });
    }
    Ok(())
}

/// Sorted list of the best `m` candidates seen so far.
struct Candidates {
    m: usize,
    best: Vec<Neighbor>,
}

impl Candidates {
    fn new(m: usize) -> Self {
        Self {
            m,
            best: Vec::with_capacity(m + 1),
        }
    }

    /// Squared distance a new point must not exceed to be of interest.
    fn bound(&self) -> f64 {
        if self.best.len() < self.m {
            f64::INFINITY
        } else {
            self.best[self.m - 1].dist2
        }
    }

    fn offer(&mut self, candidate: Neighbor) {
        if self.best.len() == self.m && candidate.cmp_rank(&self.best[self.m - 1]) != Ordering::Less
        {
            return;
        }
        let at = self
            .best
            .partition_point(|b| b.cmp_rank(&candidate) == Ordering::Less);
        self.best.insert(at, candidate);
        self.best.truncate(self.m);
    }
}

/// Walks the tree, calling `visit` for each node reached. `bound` is consulted
/// before descending into a deferred far side.
fn traverse(
    tree: &KdTree,
    query: &[f64],
    prune: bool,
    mut bound: impl FnMut() -> f64,
    mut visit: impl FnMut(NodeIndex, f64),
) {
    let n = tree.len() as u32;
    let points = tree.points();
    let mut stack: [(NodeIndex, f64); MAX_DEPTH] = [(0, 0.0); MAX_DEPTH];
    let mut depth = 1;
    while depth > 0 {
        depth -= 1;
        let (mut node, plane_dist2) = stack[depth];
        if prune && plane_dist2 > bound() {
            continue;
        }
        while node < n {
            let p = points.point(node as usize);
            visit(node, squared_distance(p, query));
            let dim = tree.split_dim(node);
            let diff = query[dim] - p[dim];
            let (near, far) = if diff < 0.0 {
                (l_child(node), r_child(node))
            } else {
                (r_child(node), l_child(node))
            };
            if far < n {
                stack[depth] = (far, diff * diff);
                depth += 1;
            }
            node = near;
        }
    }
}

fn knn_with(tree: &KdTree, query: &[f64], m: usize, prune: bool) -> Result<Vec<Neighbor>> {
    if tree.is_empty() {
        return Err(Error::EmptyTree);
    }
    check_query(tree, query)?;
    if m == 0 {
        return Ok(Vec::new());
    }
    let m = m.min(tree.len());
    let candidates = std::cell::RefCell::new(Candidates::new(m));
    traverse(
        tree,
        query,
        prune,
        || candidates.borrow().bound(),
        |index, dist2| candidates.borrow_mut().offer(Neighbor { index, dist2 }),
    );
    Ok(candidates.into_inner().best)
}

fn radius_with(tree: &KdTree, query: &[f64], r: f64, prune: bool) -> Result<Vec<NodeIndex>> {
    if tree.is_empty() {
        return Ok(Vec::new());
    }
    check_query(tree, query)?;
    let r2 = r * r;
    let mut found = Vec::new();
    traverse(
        tree,
        query,
        prune,
        || r2,
        |index, dist2| {
            if dist2 <= r2 {
                found.push(index);
            }
        },
    );
    found.sort_unstable();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_round_robin;
    use crate::points::Points;

    fn walkthrough_tree() -> KdTree {
        let points = Points::from_rows(
            2,
            &[
                [10.0, 15.0],
                [46.0, 63.0],
                [68.0, 21.0],
                [40.0, 33.0],
                [25.0, 54.0],
                [15.0, 43.0],
                [44.0, 58.0],
                [45.0, 40.0],
                [62.0, 69.0],
                [53.0, 67.0],
            ],
        )
        .unwrap();
        build_round_robin(points).unwrap()
    }

    #[test]
    fn exact_hit() {
        let tree = walkthrough_tree();
        let hit = knn(&tree, &[45.0, 40.0], 1).unwrap();
        assert_eq!(
            hit,
            vec![Neighbor {
                index: 8,
                dist2: 0.0
            }]
        );
        for s in 0..10u32 {
            let p = tree.points().point(s as usize).to_vec();
            assert_eq!(
                knn(&tree, &p, 1).unwrap()[0],
                Neighbor {
                    index: s,
                    dist2: 0.0
                }
            );
        }
    }

    #[test]
    fn knn_returns_everything_when_m_exceeds_n() {
        let tree = walkthrough_tree();
        let all = knn(&tree, &[0.0, 0.0], 50).unwrap();
        assert_eq!(all.len(), 10);
        assert!(all
            .windows(2)
            .all(|w| w[0].cmp_rank(&w[1]) == Ordering::Less));
    }

    #[test]
    fn ties_prefer_lower_index() {
        let points = Points::from_rows(1, &[[0.0], [2.0], [-2.0], [2.0]]).unwrap();
        let tree = build_round_robin(points).unwrap();
        let got = knn(&tree, &[0.0], 3).unwrap();
        assert_eq!(got[0].dist2, 0.0);
        assert_eq!(got[1].dist2, 4.0);
        assert_eq!(got[2].dist2, 4.0);
        assert!(got[1].index < got[2].index);
    }

    #[test]
    fn radius_edges() {
        let tree = walkthrough_tree();
        assert!(radius_query(&tree, &[0.5, 0.5], 0.0).unwrap().is_empty());
        let all = radius_query(&tree, &[40.0, 40.0], 1000.0).unwrap();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(radius_query(&tree, &[45.0, 40.0], 0.0).unwrap(), vec![8]);
    }

    #[test]
    fn errors() {
        let empty = build_round_robin(Points::new(2).unwrap()).unwrap();
        assert_eq!(knn(&empty, &[0.0, 0.0], 1), Err(Error::EmptyTree));
        let tree = walkthrough_tree();
        assert!(matches!(
            knn(&tree, &[0.0], 1),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }
}
