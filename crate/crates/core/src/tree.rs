use crate::error::{Error, Result};
use crate::points::Points;
use crate::tree_math::{self, NodeIndex, MAX_NODES};

/// Element count, dimensionality and level count of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeShape {
    pub n: u32,
    pub dims: usize,
    pub levels: u32,
}

impl TreeShape {
    pub fn new(n: u32, dims: usize) -> Self {
        let levels = if n == 0 { 0 } else { tree_math::num_levels(n) };
        Self { n, dims, levels }
    }
}

/// How a tree chooses the dimension each node partitions along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitMode {
    /// Node `s` splits along `level(s) mod k`.
    RoundRobin,
    /// Node `s` splits along the widest extent of its subtree's domain.
    Widest,
}

impl SplitMode {
    pub fn name(self) -> &'static str {
        match self {
            SplitMode::RoundRobin => "round-robin",
            SplitMode::Widest => "widest",
        }
    }
}

impl std::str::FromStr for SplitMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "round-robin" => Ok(SplitMode::RoundRobin),
            "widest" => Ok(SplitMode::Widest),
            other => Err(format!("unknown split mode `{other}`")),
        }
    }
}

impl std::fmt::Display for SplitMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A left-balanced complete k-d tree: the points in level order, with node `s`
/// at index `s`. Widest-split trees also carry one split dimension per node.
#[derive(Debug, Clone, PartialEq)]
pub struct KdTree {
    shape: TreeShape,
    points: Points,
    split_dims: Option<Vec<u8>>,
}

impl KdTree {
    /// Wraps points that are already in level order. The k-d ordering itself is
    /// not checked here; use [`crate::verify::check_valid`] for that.
    pub fn from_parts(points: Points, split_dims: Option<Vec<u8>>) -> Result<Self> {
        if points.len() > MAX_NODES as usize {
            return Err(Error::TooManyPoints {
                n: points.len(),
                max: MAX_NODES,
            });
        }
        points.validate_finite()?;
        if let Some(dims) = &split_dims {
            if dims.len() != points.len() {
                return Err(Error::DimensionMismatch {
                    expected: points.len(),
                    got: dims.len(),
                });
            }
            if let Some(&bad) = dims.iter().find(|&&d| d as usize >= points.dims()) {
                return Err(Error::DimensionMismatch {
                    expected: points.dims(),
                    got: bad as usize + 1,
                });
            }
        }
        Ok(Self::new_unchecked(points, split_dims))
    }

    pub(crate) fn new_unchecked(points: Points, split_dims: Option<Vec<u8>>) -> Self {
        let shape = TreeShape::new(points.len() as u32, points.dims());
        Self {
            shape,
            points,
            split_dims,
        }
    }

    pub fn shape(&self) -> TreeShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.points.dims()
    }

    pub fn points(&self) -> &Points {
        &self.points
    }

    pub fn into_points(self) -> Points {
        self.points
    }

    pub fn split_dims(&self) -> Option<&[u8]> {
        self.split_dims.as_deref()
    }

    pub fn mode(&self) -> SplitMode {
        if self.split_dims.is_some() {
            SplitMode::Widest
        } else {
            SplitMode::RoundRobin
        }
    }

    /// Dimension node `s` partitions along.
    #[inline]
    pub fn split_dim(&self, s: NodeIndex) -> usize {
        match &self.split_dims {
            Some(dims) => dims[s as usize] as usize,
            None => tree_math::level(s) as usize % self.points.dims(),
        }
    }
}
