//! Split-widest-dimension variant.
//!
//! Each subtree partitions along the dimension in which its domain (the world
//! box clipped by every ancestor's split plane) is widest. The chosen dimension
//! rides in the low `ceil(log2 k)` bits of each tag, so the sort comparator can
//! read it without any per-subtree bookkeeping, and sorting by the packed value
//! still orders by node index.
//!
//! A child's domain is recovered in the update phase by walking from the parent
//! up to the root: ancestors sit at their final array slots by then and their
//! split dimensions are already recorded.

use std::sync::atomic::{AtomicU8, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::builder::Builder;
use crate::error::Result;
use crate::points::Points;
use crate::tree::{KdTree, SplitMode};
use crate::tree_math::{full_tree_size, l_child, parent, pivot_pos, r_child, NodeIndex};

/// Split dimensions are stored in one byte per node.
pub const MAX_DIMS: usize = 256;

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct Aabb {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Aabb {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    /// Degenerate box around a single point.
    pub fn point(p: &[f64]) -> Self {
        Self {
            lo: p.to_vec(),
            hi: p.to_vec(),
        }
    }

    pub fn dims(&self) -> usize {
        self.lo.len()
    }

    pub fn extent(&self, dim: usize) -> f64 {
        self.hi[dim] - self.lo[dim]
    }

    pub fn grow(&mut self, p: &[f64]) {
        for (d, &c) in p.iter().enumerate() {
            self.lo[d] = self.lo[d].min(c);
            self.hi[d] = self.hi[d].max(c);
        }
    }

    /// Keeps the part with `coord[dim] <= plane`.
    pub fn clip_below(&mut self, dim: usize, plane: f64) {
        self.hi[dim] = self.hi[dim].min(plane);
    }

    /// Keeps the part with `coord[dim] >= plane`.
    pub fn clip_above(&mut self, dim: usize, plane: f64) {
        self.lo[dim] = self.lo[dim].max(plane);
    }

    /// Closed containment.
    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .enumerate()
            .all(|(d, &c)| self.lo[d] <= c && c <= self.hi[d])
    }

    pub fn contains_box(&self, other: &Aabb) -> bool {
        (0..self.dims()).all(|d| self.lo[d] <= other.lo[d] && other.hi[d] <= self.hi[d])
    }

    fn copy_from(&mut self, other: &Aabb) {
        self.lo.copy_from_slice(&other.lo);
        self.hi.copy_from_slice(&other.hi);
    }
}

/// Component-wise bounds of all points, or `None` for an empty set.
pub fn world_bounds(points: &Points) -> Option<Aabb> {
    let mut rows = points.iter();
    let (first, _) = rows.next()?;
    let mut bounds = Aabb::point(first);
    for (p, _) in rows {
        bounds.grow(p);
    }
    Some(bounds)
}

/// Dimension of largest extent; ties go to the lowest index.
pub fn widest_dim(bounds: &Aabb) -> usize {
    let mut best = 0;
    let mut best_extent = bounds.extent(0);
    for d in 1..bounds.dims() {
        let extent = bounds.extent(d);
        if extent > best_extent {
            best = d;
            best_extent = extent;
        }
    }
    best
}

/// Low tag bits reserved for the split dimension: `ceil(log2 k)`.
pub fn dim_bits(dims: usize) -> u32 {
    if dims <= 1 {
        0
    } else {
        usize::BITS - (dims - 1).leading_zeros()
    }
}

/// Whether `n` node indices shifted past the dimension bits stay below `2^31`.
pub fn tags_fit(n: usize, dims: usize) -> bool {
    (n as u64) << dim_bits(dims) < 1u64 << 31
}

/// A node index with its subtree's split dimension packed into the low bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackedTag {
    pub node: NodeIndex,
    pub dim: u32,
}

impl PackedTag {
    #[inline]
    pub fn pack(self, dim_bits: u32) -> u32 {
        debug_assert!(self.dim < (1 << dim_bits) || (dim_bits == 0 && self.dim == 0));
        (self.node << dim_bits) | self.dim
    }

    #[inline]
    pub fn unpack(tag: u32, dim_bits: u32) -> Self {
        Self {
            node: tag >> dim_bits,
            dim: tag & ((1 << dim_bits) - 1),
        }
    }
}

/// Domain of `child`, a child of `parent.node`.
///
/// `split_coord` is where the parent's freshly chosen plane lies along
/// `parent.dim`. Every strict ancestor `a` of the parent must already sit at
/// index `a` of `points`, with its dimension available from `split_dim_of(a)`.
pub fn subtree_bounds(
    child: NodeIndex,
    split_coord: f64,
    parent_tag: PackedTag,
    points: &Points,
    split_dim_of: impl Fn(NodeIndex) -> usize,
    world: &Aabb,
) -> Aabb {
    let mut out = world.clone();
    subtree_bounds_into(
        &mut out,
        child,
        split_coord,
        parent_tag,
        points,
        split_dim_of,
        world,
    );
    out
}

fn subtree_bounds_into(
    out: &mut Aabb,
    child: NodeIndex,
    split_coord: f64,
    parent_tag: PackedTag,
    points: &Points,
    split_dim_of: impl Fn(NodeIndex) -> usize,
    world: &Aabb,
) {
    debug_assert!(child == l_child(parent_tag.node) || child == r_child(parent_tag.node));
    out.copy_from(world);
    clip_toward(out, child, parent_tag.dim as usize, split_coord);
    let mut node = parent_tag.node;
    while node > 0 {
        let up = parent(node);
        let dim = split_dim_of(up);
        clip_toward(out, node, dim, points.coord(up as usize, dim));
        node = up;
    }
}

/// Clips to the side of a split plane that `node` descends into. Left
/// children have odd indices.
#[inline]
fn clip_toward(bounds: &mut Aabb, node: NodeIndex, dim: usize, plane: f64) {
    if node % 2 == 1 {
        bounds.clip_below(dim, plane);
    } else {
        bounds.clip_above(dim, plane);
    }
}

/// Builds a tree whose nodes split along their domain's widest dimension.
pub fn build_widest(points: Points) -> Result<KdTree> {
    Builder::new(SplitMode::Widest).build(points)
}

/// Widest-split tag update for iteration `l`. The pivot of each segment records
/// its node's dimension; everything else moves to a child tagged with the
/// widest dimension of that child's domain.
pub(crate) fn update_tags(
    tags: &mut [u32],
    points: &Points,
    split_dims: &[AtomicU8],
    l: u32,
    dim_bits: u32,
    world: &Aabb,
    parallel: bool,
) {
    let n = tags.len() as u32;
    let placed = full_tree_size(l) as usize;
    if placed >= tags.len() {
        return;
    }
    let split_dim_of = |a: NodeIndex| split_dims[a as usize].load(AtomicOrdering::Relaxed) as usize;
    let update = |scratch: &mut Aabb, i: usize, tag: &mut u32| {
        let current = PackedTag::unpack(*tag, dim_bits);
        let s = current.node;
        let pivot = pivot_pos(s, n) as usize;
        let child = match i.cmp(&pivot) {
            std::cmp::Ordering::Equal => {
                split_dims[s as usize].store(current.dim as u8, AtomicOrdering::Relaxed);
                return;
            }
            std::cmp::Ordering::Less => l_child(s),
            std::cmp::Ordering::Greater => r_child(s),
        };
        let split_coord = points.coord(pivot, current.dim as usize);
        subtree_bounds_into(
            scratch,
            child,
            split_coord,
            current,
            points,
            split_dim_of,
            world,
        );
        *tag = PackedTag {
            node: child,
            dim: widest_dim(scratch) as u32,
        }
        .pack(dim_bits);
    };
    let pending = &mut tags[placed..];
    if parallel {
        pending.par_iter_mut().enumerate().for_each_init(
            || world.clone(),
            |scratch, (j, tag)| update(scratch, placed + j, tag),
        );
    } else {
        let mut scratch = world.clone();
        for (j, tag) in pending.iter_mut().enumerate() {
            update(&mut scratch, placed + j, tag);
        }
    }
}
