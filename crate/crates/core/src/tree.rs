//! Rooted-tree geometry on finite truncations.
//!
//! A [`TreeTruncation`] holds every vertex of length at most `D` of an
//! infinite rooted tree without terminal vertices. Vertices are numbered in
//! breadth-first order: sphere `j` (all vertices with `|v| = j`) occupies a
//! contiguous index range, and inside a sphere the order is lexicographic in
//! the child-index path. Parent links are computed arithmetically from that
//! layout, so nothing per-vertex is stored.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on the number of vertices in a truncation.
pub const DEFAULT_VERTEX_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("the root has no parent")]
    RootHasNoParent,
    #[error("invalid tree shape: {0}")]
    InvalidShape(String),
    #[error("truncation depth must be at least 1")]
    ZeroDepth,
    #[error("truncation would hold {count} vertices, above the cap of {cap}")]
    Capacity { count: String, cap: usize },
    #[error("sphere {j} is outside the truncation (depth {depth})")]
    SphereOutOfRange { j: usize, depth: usize },
    #[error("vertex {vertex} is outside the truncation: {reason}")]
    VertexOutside { vertex: VertexId, reason: String },
    #[error("cannot parse vertex path {0:?}")]
    BadVertex(String),
}

/// Address of a vertex as the sequence of child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId {
    path: Vec<u32>,
}

impl VertexId {
    pub fn root() -> Self {
        Self { path: Vec::new() }
    }

    pub fn from_path(path: Vec<u32>) -> Self {
        Self { path }
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    /// The length `|v|`, i.e. the distance to the root.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn parent(&self) -> Result<VertexId, TreeError> {
        if self.is_root() {
            return Err(TreeError::RootHasNoParent);
        }
        let mut path = self.path.clone();
        path.pop();
        Ok(Self { path })
    }

    pub fn child(&self, i: u32) -> VertexId {
        let mut path = self.path.clone();
        path.push(i);
        Self { path }
    }

    /// True when `self` lies on the path from the root to `other` (inclusive).
    pub fn is_ancestor_of(&self, other: &VertexId) -> bool {
        other.path.starts_with(&self.path)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return f.write_str("o");
        }
        for (i, c) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for VertexId {
    type Err = TreeError;

    /// Accepts `o`, `root` or the empty string for the root, otherwise
    /// slash-separated child indices such as `0/1/0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "o" || s == "root" {
            return Ok(Self::root());
        }
        let path = s
            .split('/')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| TreeError::BadVertex(s.to_string()))?;
        Ok(Self { path })
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Edge distance between two vertices: `|v| + |w| - 2 |common ancestor|`.
pub fn distance(v: &VertexId, w: &VertexId) -> usize {
    let common = v
        .path
        .iter()
        .zip(&w.path)
        .take_while(|(a, b)| a == b)
        .count();
    v.len() + w.len() - 2 * common
}

/// Branching pattern of the modeled infinite tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeShape {
    /// Every vertex has `b` children.
    Uniform(u32),
    /// Entry `i` is the child count of vertices at length `i`; the last
    /// entry repeats for deeper levels.
    PerLevel(Vec<u32>),
}

impl TreeShape {
    fn validate(&self) -> Result<(), TreeError> {
        match self {
            TreeShape::Uniform(0) => Err(TreeError::InvalidShape(
                "branching must be at least 1".into(),
            )),
            TreeShape::Uniform(_) => Ok(()),
            TreeShape::PerLevel(v) if v.is_empty() => Err(TreeError::InvalidShape(
                "per-level branching list is empty".into(),
            )),
            TreeShape::PerLevel(v) => match v.iter().position(|&b| b == 0) {
                Some(i) => Err(TreeError::InvalidShape(format!(
                    "level {i} has child count 0"
                ))),
                None => Ok(()),
            },
        }
    }

    /// Number of children of a vertex of length `level`.
    pub fn children_at(&self, level: usize) -> u32 {
        match self {
            TreeShape::Uniform(b) => *b,
            TreeShape::PerLevel(v) => *v.get(level).unwrap_or_else(|| v.last().unwrap()),
        }
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeShape::Uniform(b) => write!(f, "uniform({b})"),
            TreeShape::PerLevel(v) => {
                let parts: Vec<String> = v.iter().map(u32::to_string).collect();
                write!(f, "per-level({})", parts.join(","))
            }
        }
    }
}

/// Children of a vertex inside a truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Children {
    pub vertices: Vec<VertexId>,
    /// Set when the vertex sits at the cut depth; its children exist in the
    /// modeled tree but not in the truncation.
    pub boundary: bool,
}

/// The vertices of length at most `depth`, in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTruncation {
    shape: TreeShape,
    depth: usize,
    /// `branching[j]` is the child count of vertices of length `j`, for `j < depth`.
    branching: Vec<usize>,
    /// `offsets[j]` is the breadth-first index of the first vertex of sphere `j`;
    /// `offsets[depth + 1]` is the vertex count.
    offsets: Vec<usize>,
}

impl TreeTruncation {
    pub fn new(shape: TreeShape, depth: usize) -> Result<Self, TreeError> {
        Self::with_cap(shape, depth, DEFAULT_VERTEX_CAP)
    }

    pub fn uniform(b: u32, depth: usize) -> Result<Self, TreeError> {
        Self::new(TreeShape::Uniform(b), depth)
    }

    pub fn with_cap(shape: TreeShape, depth: usize, cap: usize) -> Result<Self, TreeError> {
        shape.validate()?;
        if depth == 0 {
            return Err(TreeError::ZeroDepth);
        }
        let branching: Vec<usize> = (0..depth).map(|j| shape.children_at(j) as usize).collect();
        let mut offsets = Vec::with_capacity(depth + 2);
        let mut start = 0usize;
        let mut size = 1usize;
        let overflow = |start: usize| TreeError::Capacity {
            count: format!("more than {start}"),
            cap,
        };
        for j in 0..=depth {
            offsets.push(start);
            start = start.checked_add(size).ok_or_else(|| overflow(start))?;
            if start > cap {
                return Err(TreeError::Capacity {
                    count: estimate_count(&branching, depth),
                    cap,
                });
            }
            if j < depth {
                size = size.checked_mul(branching[j]).ok_or_else(|| overflow(start))?;
            }
        }
        offsets.push(start);
        Ok(Self {
            shape,
            depth,
            branching,
            offsets,
        })
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets[self.depth + 1]
    }

    /// Child count of vertices of length `level` (`level < depth`).
    pub fn branching_at(&self, level: usize) -> usize {
        self.branching[level]
    }

    pub fn sphere_size(&self, j: usize) -> usize {
        self.offsets[j + 1] - self.offsets[j]
    }

    /// Breadth-first index range of sphere `j`.
    pub fn sphere_range(&self, j: usize) -> Range<usize> {
        self.offsets[j]..self.offsets[j + 1]
    }

    pub fn sphere(&self, j: usize) -> Result<Vec<VertexId>, TreeError> {
        if j > self.depth {
            return Err(TreeError::SphereOutOfRange {
                j,
                depth: self.depth,
            });
        }
        Ok(self.sphere_range(j).map(|i| self.vertex_at(i)).collect())
    }

    /// Length of the vertex with breadth-first index `index`.
    pub fn depth_of(&self, index: usize) -> usize {
        debug_assert!(index < self.vertex_count());
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    /// Breadth-first index of the parent, `None` for the root.
    pub fn parent_index(&self, index: usize) -> Option<usize> {
        if index == 0 {
            return None;
        }
        let j = self.depth_of(index);
        Some(self.parent_index_in_sphere(index, j))
    }

    /// Parent index when the sphere `j >= 1` of `index` is already known.
    #[inline]
    pub fn parent_index_in_sphere(&self, index: usize, j: usize) -> usize {
        self.offsets[j - 1] + (index - self.offsets[j]) / self.branching[j - 1]
    }

    pub fn index_of(&self, v: &VertexId) -> Result<usize, TreeError> {
        if v.len() > self.depth {
            return Err(TreeError::VertexOutside {
                vertex: v.clone(),
                reason: format!("length {} exceeds depth {}", v.len(), self.depth),
            });
        }
        let mut rank = 0usize;
        for (level, &c) in v.path().iter().enumerate() {
            let b = self.branching[level];
            if c as usize >= b {
                return Err(TreeError::VertexOutside {
                    vertex: v.clone(),
                    reason: format!("child index {c} at level {} but branching is {b}", level + 1),
                });
            }
            rank = rank * b + c as usize;
        }
        Ok(self.offsets[v.len()] + rank)
    }

    pub fn vertex_at(&self, index: usize) -> VertexId {
        let j = self.depth_of(index);
        let mut rank = index - self.offsets[j];
        let mut path = vec![0u32; j];
        for level in (0..j).rev() {
            let b = self.branching[level];
            path[level] = (rank % b) as u32;
            rank /= b;
        }
        VertexId::from_path(path)
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index_of(v).is_ok()
    }

    pub fn children(&self, v: &VertexId) -> Children {
        if v.len() >= self.depth {
            return Children {
                vertices: Vec::new(),
                boundary: true,
            };
        }
        let b = self.branching[v.len()] as u32;
        Children {
            vertices: (0..b).map(|i| v.child(i)).collect(),
            boundary: false,
        }
    }

    /// Breadth-first indices of the children of `index` (empty at the cut depth).
    pub fn child_indices(&self, index: usize) -> Range<usize> {
        let j = self.depth_of(index);
        if j >= self.depth {
            return 0..0;
        }
        let b = self.branching[j];
        let first = self.offsets[j + 1] + (index - self.offsets[j]) * b;
        first..first + b
    }

    /// Breadth-first indices of the ancestors of `index` from the root down
    /// to `index` itself.
    pub fn root_path(&self, index: usize) -> Vec<usize> {
        let mut path = vec![index];
        let mut cur = index;
        while let Some(p) = self.parent_index(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

fn estimate_count(branching: &[usize], depth: usize) -> String {
    let mut total = 1f64;
    let mut size = 1f64;
    for b in branching.iter().take(depth) {
        size *= *b as f64;
        total += size;
    }
    format!("{total:.3e}")
}
