//! Tag-and-sort construction.
//!
//! Every point carries a 32-bit tag holding its level-`l` ancestor. Each
//! iteration sorts the whole array by (tag, coordinate along the node's split
//! dimension), which lays every level-`l` subtree out as one contiguous,
//! coordinate-sorted segment at a position fixed by `n` alone. A per-element
//! pass then moves each tag one level down: elements before the segment's pivot
//! go to the left child, elements after it to the right child, and the pivot
//! itself stays as node `s`. After `num_levels(n)` sorts every tag is the
//! element's final node index and the array is in level order.
//!
//! The last level never needs an update pass: its subtrees have size one, so the
//! final sort is by tag alone.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU8, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::points::{apply_permutation, Points};
use crate::tree::{KdTree, SplitMode};
use crate::tree_math::{self, full_tree_size, l_child, num_levels, pivot_pos, r_child, MAX_NODES};
use crate::widest::{self, Aabb, PackedTag};

/// Below this many elements the phases run on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// A point paired with its current tag, as seen by the sort comparator.
#[derive(Debug, Clone, Copy)]
pub struct TaggedPoint<'a> {
    pub tag: u32,
    pub coords: &'a [f64],
}

/// The sort order of iteration `l`: ascending tag, then ascending coordinate
/// `dim` between equal tags. A strict weak ordering on finite coordinates.
#[inline]
pub fn less(a: TaggedPoint<'_>, b: TaggedPoint<'_>, dim: usize) -> bool {
    a.tag < b.tag || (a.tag == b.tag && a.coords[dim] < b.coords[dim])
}

/// All-zero tags: every point starts in the subtree of the root.
pub fn init_tags(n: usize) -> Vec<u32> {
    vec![0; n]
}

/// One round-robin sort phase over the whole array, splitting along `l mod k`.
pub fn sort_phase(points: &mut Points, tags: &mut [u32], l: u32) {
    let dim = l as usize % points.dims();
    let mut scratch = SortScratch::default();
    sort_range(points, tags, 0, SortKey::Dim(dim), &mut scratch, false);
}

/// One round-robin tag update for iteration `l`, on an array in post-sort state.
/// Indices below `F(l)` already hold their final node and are left alone.
pub fn update_tags_phase(tags: &mut [u32], l: u32) {
    update_round_robin(tags, l, false);
}

/// Counters reported by an instrumented build.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub sort_phases: u32,
    pub update_phases: u32,
    /// Number of 32-bit tags the builder allocated.
    pub tag_entries: usize,
    pub tag_bytes: usize,
}

/// Hooks called between phases with the current array state. The tags passed
/// to a widest-split build are packed (see [`PackedTag`]).
pub trait BuildObserver {
    fn initial(&mut self, _tags: &[u32], _points: &Points) {}
    fn after_sort(&mut self, _level: u32, _tags: &[u32], _points: &Points) {}
    fn after_update(&mut self, _level: u32, _tags: &[u32], _points: &Points) {}
}

impl BuildObserver for () {}

/// Which phase produced a [`PhaseSnapshot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Initial,
    Sorted(u32),
    Updated(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSnapshot {
    pub phase: Phase,
    pub tags: Vec<u32>,
    pub points: Points,
}

/// Observer that copies the full state after every phase.
#[derive(Debug, Default)]
pub struct PhaseRecorder {
    pub snapshots: Vec<PhaseSnapshot>,
}

impl PhaseRecorder {
    fn record(&mut self, phase: Phase, tags: &[u32], points: &Points) {
        self.snapshots.push(PhaseSnapshot {
            phase,
            tags: tags.to_vec(),
            points: points.clone(),
        });
    }
}

impl BuildObserver for PhaseRecorder {
    fn initial(&mut self, tags: &[u32], points: &Points) {
        self.record(Phase::Initial, tags, points);
    }

    fn after_sort(&mut self, level: u32, tags: &[u32], points: &Points) {
        self.record(Phase::Sorted(level), tags, points);
    }

    fn after_update(&mut self, level: u32, tags: &[u32], points: &Points) {
        self.record(Phase::Updated(level), tags, points);
    }
}

/// Configures and runs a build.
#[derive(Debug, Clone)]
pub struct Builder {
    mode: SplitMode,
    skip_placed_prefix: bool,
    parallel: bool,
}

impl Builder {
    pub fn new(mode: SplitMode) -> Self {
        Self {
            mode,
            skip_placed_prefix: true,
            parallel: true,
        }
    }

    /// Leave the already-placed prefix out of each sort. Those elements hold the
    /// smallest tags in final order, so the result is the same either way.
    pub fn skip_placed_prefix(mut self, skip: bool) -> Self {
        self.skip_placed_prefix = skip;
        self
    }

    /// Run large phases on the rayon pool.
    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    /// First index sort `l` has to touch. Sort `l - 1` placed nodes `0..F(l-1)`
    /// and update `l - 1` leaves them alone; the level `l - 1` pivots are still
    /// inside their segments, so `F(l-1)` is as far as the sort can skip.
    fn sort_start(&self, l: u32) -> usize {
        if self.skip_placed_prefix && l > 0 {
            full_tree_size(l - 1) as usize
        } else {
            0
        }
    }

    pub fn build(&self, points: Points) -> Result<KdTree> {
        self.build_observed(points, &mut ()).map(|(tree, _)| tree)
    }

    pub fn build_observed(
        &self,
        mut points: Points,
        observer: &mut dyn BuildObserver,
    ) -> Result<(KdTree, BuildStats)> {
        let n = points.len();
        if n > MAX_NODES as usize {
            return Err(Error::TooManyPoints { n, max: MAX_NODES });
        }
        points.validate_finite()?;
        let widest = match self.mode {
            SplitMode::RoundRobin => None,
            SplitMode::Widest => Some(WidestState::prepare(&points)?),
        };

        let mut stats = BuildStats::default();
        let mut tags = match &widest {
            None => init_tags(n),
            Some(state) => vec![state.root_tag(); n],
        };
        stats.tag_entries = tags.len();
        stats.tag_bytes = std::mem::size_of_val(tags.as_slice());
        observer.initial(&tags, &points);

        if n <= 1 {
            let split_dims =
                widest.map(|state| tags.iter().map(|&t| state.unpack(t).dim as u8).collect());
            return Ok((KdTree::new_unchecked(points, split_dims), stats));
        }

        let n32 = n as u32;
        let levels = num_levels(n32);
        let dims = points.dims();
        let parallel = self.parallel && n >= PARALLEL_THRESHOLD;
        let split_dims: Vec<AtomicU8> = match &widest {
            Some(_) => (0..n).map(|_| AtomicU8::new(0)).collect(),
            None => Vec::new(),
        };
        let mut scratch = SortScratch::default();

        for l in 0..levels - 1 {
            let start = self.sort_start(l);
            let key = match &widest {
                None => SortKey::Dim(l as usize % dims),
                Some(state) => SortKey::PackedDim {
                    dim_mask: state.dim_mask(),
                },
            };
            sort_range(&mut points, &mut tags, start, key, &mut scratch, parallel);
            stats.sort_phases += 1;
            observer.after_sort(l, &tags, &points);

            match &widest {
                None => update_round_robin(&mut tags, l, parallel),
                Some(state) => widest::update_tags(
                    &mut tags,
                    &points,
                    &split_dims,
                    l,
                    state.dim_bits,
                    &state.world,
                    parallel,
                ),
            }
            stats.update_phases += 1;
            observer.after_update(l, &tags, &points);
        }

        let last = levels - 1;
        let start = self.sort_start(last);
        sort_range(
            &mut points,
            &mut tags,
            start,
            SortKey::None,
            &mut scratch,
            parallel,
        );
        stats.sort_phases += 1;
        observer.after_sort(last, &tags, &points);

        let split_dims = widest.map(|state| {
            // last-level nodes never pass through an update phase; their dimension
            // is the one their own tag carries
            let first_leaf_level = full_tree_size(last) as usize;
            for (s, &tag) in tags.iter().enumerate().skip(first_leaf_level) {
                split_dims[s].store(state.unpack(tag).dim as u8, AtomicOrdering::Relaxed);
            }
            split_dims.into_iter().map(AtomicU8::into_inner).collect()
        });
        Ok((KdTree::new_unchecked(points, split_dims), stats))
    }
}

/// Builds with split dimension `level(s) mod k`.
pub fn build_round_robin(points: Points) -> Result<KdTree> {
    Builder::new(SplitMode::RoundRobin).build(points)
}

struct WidestState {
    world: Aabb,
    dim_bits: u32,
}

impl WidestState {
    fn prepare(points: &Points) -> Result<Self> {
        let dims = points.dims();
        if dims > widest::MAX_DIMS {
            return Err(Error::TooManyDims {
                dims,
                max: widest::MAX_DIMS,
            });
        }
        let dim_bits = widest::dim_bits(dims);
        if !widest::tags_fit(points.len(), dims) {
            return Err(Error::TagOverflow {
                n: points.len(),
                dims,
                dim_bits,
            });
        }
        let world = widest::world_bounds(points).unwrap_or_else(|| Aabb::point(&vec![0.0; dims]));
        Ok(Self { world, dim_bits })
    }

    fn root_tag(&self) -> u32 {
        PackedTag {
            node: 0,
            dim: widest::widest_dim(&self.world) as u32,
        }
        .pack(self.dim_bits)
    }

    fn dim_mask(&self) -> u32 {
        (1 << self.dim_bits) - 1
    }

    fn unpack(&self, tag: u32) -> PackedTag {
        PackedTag::unpack(tag, self.dim_bits)
    }
}

/// Secondary key of a sort phase; every phase orders by tag first.
#[derive(Debug, Clone, Copy)]
enum SortKey {
    /// Coordinate along one fixed dimension.
    Dim(usize),
    /// Coordinate along the dimension packed in each element's own tag. Equal
    /// tags share a dimension, so coordinates are only compared along one axis.
    PackedDim { dim_mask: u32 },
    /// Tag only: the final phase, where every tag is already a distinct node.
    None,
}

/// One element of the sort scratch: the sort key pulled out of the point array
/// so comparisons stay cache-local, plus the element's current position.
#[derive(Debug, Clone, Copy)]
struct SortEntry {
    tag: u32,
    pos: u32,
    coord: f64,
}

/// Reusable scratch for the sort phases.
#[derive(Debug, Default)]
struct SortScratch {
    entries: Vec<SortEntry>,
    order: Vec<u32>,
}

/// Sorts `tags[start..]` and the matching points together under `key`.
fn sort_range(
    points: &mut Points,
    tags: &mut [u32],
    start: usize,
    key: SortKey,
    scratch: &mut SortScratch,
    parallel: bool,
) {
    let n = tags.len();
    if n - start <= 1 {
        return;
    }
    let entries = &mut scratch.entries;
    entries.clear();
    entries.extend((start..n).map(|i| {
        let tag = tags[i];
        let coord = match key {
            SortKey::None => 0.0,
            SortKey::Dim(dim) => points.coord(i, dim),
            // equal tags carry equal dimensions, so each entry may use its own
            SortKey::PackedDim { dim_mask } => points.coord(i, (tag & dim_mask) as usize),
        };
        SortEntry {
            tag,
            pos: (i - start) as u32,
            coord,
        }
    }));
    let compare = |a: &SortEntry, b: &SortEntry| -> Ordering {
        a.tag.cmp(&b.tag).then_with(|| {
            a.coord
                .partial_cmp(&b.coord)
                .expect("coordinates are finite")
        })
    };
    if parallel {
        entries.par_sort_unstable_by(compare);
    } else {
        entries.sort_unstable_by(compare);
    }
    let order = &mut scratch.order;
    order.clear();
    order.extend(entries.iter().map(|e| e.pos));
    apply_permutation(order, |a, b| {
        tags.swap(start + a, start + b);
        points.swap(start + a, start + b);
    });
}

fn update_round_robin(tags: &mut [u32], l: u32, parallel: bool) {
    let n = tags.len() as u32;
    let placed = full_tree_size(l) as usize;
    if placed >= tags.len() {
        return;
    }
    let update = |i: usize, tag: &mut u32| {
        let s = *tag;
        debug_assert_eq!(
            tree_math::level(s),
            l,
            "tag {s} at index {i} is not on level {l}"
        );
        let pivot = pivot_pos(s, n) as usize;
        match i.cmp(&pivot) {
            Ordering::Less => *tag = l_child(s),
            Ordering::Greater => *tag = r_child(s),
            Ordering::Equal => {}
        }
    };
    let pending = &mut tags[placed..];
    if parallel {
        pending
            .par_iter_mut()
            .enumerate()
            .for_each(|(j, tag)| update(placed + j, tag));
    } else {
        pending
            .iter_mut()
            .enumerate()
            .for_each(|(j, tag)| update(placed + j, tag));
    }
}
