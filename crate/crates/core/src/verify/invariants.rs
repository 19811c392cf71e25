//! Observer that asserts the per-phase array invariants of a build.

use crate::builder::BuildObserver;
use crate::points::Points;
use crate::verify::oracles::{brute_segment_begins, brute_subtree_sizes};
use crate::widest::PackedTag;

/// Checks, after every sort, that the first `F(l)` tags are `0..F(l)` and that
/// each level-`l` subtree forms one segment at its oracle position, sorted along
/// a single dimension; after every update, that exactly `F(l+1)` tags name
/// nodes above level `l+1` and the rest name level-`l+1` nodes.
#[derive(Debug)]
pub struct InvariantChecker {
    dims: usize,
    /// Zero for round-robin builds.
    dim_bits: u32,
    round_robin: bool,
    sizes: Vec<u32>,
    begins: Vec<u32>,
    pub sort_phases: u32,
    pub update_phases: u32,
    pub failures: Vec<String>,
}

impl InvariantChecker {
    pub fn round_robin(n: usize, dims: usize) -> Self {
        Self::new(n, dims, 0, true)
    }

    pub fn widest(n: usize, dims: usize) -> Self {
        Self::new(n, dims, crate::widest::dim_bits(dims), false)
    }

    fn new(n: usize, dims: usize, dim_bits: u32, round_robin: bool) -> Self {
        Self {
            dims,
            dim_bits,
            round_robin,
            sizes: brute_subtree_sizes(n as u32),
            begins: brute_segment_begins(n as u32),
            sort_phases: 0,
            update_phases: 0,
            failures: Vec::new(),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    fn unpack(&self, tag: u32) -> PackedTag {
        PackedTag::unpack(tag, self.dim_bits)
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 16 {
            self.failures.push(msg);
        }
    }
}

fn depth(mut node: u32) -> u32 {
    let mut d = 0;
    while node > 0 {
        node = (node - 1) / 2;
        d += 1;
    }
    d
}

impl BuildObserver for InvariantChecker {
    fn after_sort(&mut self, l: u32, tags: &[u32], points: &Points) {
        self.sort_phases += 1;
        let n = tags.len();
        let placed = ((1usize << l) - 1).min(n);
        for (i, &tag) in tags.iter().enumerate().take(placed) {
            if self.unpack(tag).node as usize != i {
                self.fail(format!(
                    "sort {l}: index {i} holds node {}",
                    self.unpack(tag).node
                ));
                return;
            }
        }
        let last = ((1usize << (l + 1)) - 1).min(n);
        for s in placed..last {
            let begin = self.begins[s] as usize;
            let end = begin + self.sizes[s] as usize;
            let segment = &tags[begin..end];
            let dim = if self.round_robin {
                l as usize % self.dims
            } else {
                self.unpack(segment[0]).dim as usize
            };
            if segment.iter().any(|&t| self.unpack(t).node as usize != s) {
                self.fail(format!(
                    "sort {l}: segment of node {s} at {begin}..{end} is not uniform"
                ));
                return;
            }
            if !self.round_robin && segment.iter().any(|&t| self.unpack(t).dim as usize != dim) {
                self.fail(format!(
                    "sort {l}: segment of node {s} mixes split dimensions"
                ));
                return;
            }
            if (begin + 1..end).any(|i| points.coord(i - 1, dim) > points.coord(i, dim)) {
                self.fail(format!(
                    "sort {l}: segment of node {s} is not sorted along {dim}"
                ));
                return;
            }
        }
    }

    fn after_update(&mut self, l: u32, tags: &[u32], _points: &Points) {
        self.update_phases += 1;
        let next = l + 1;
        let mut above = 0usize;
        for &tag in tags {
            let d = depth(self.unpack(tag).node);
            if d < next {
                above += 1;
            } else if d > next {
                self.fail(format!(
                    "update {l}: tag names node {} below level {next}",
                    self.unpack(tag).node
                ));
                return;
            }
        }
        let expected = ((1usize << next) - 1).min(tags.len());
        if above != expected {
            self.fail(format!(
                "update {l}: {above} tags above level {next}, expected {expected}"
            ));
        }
    }
}
