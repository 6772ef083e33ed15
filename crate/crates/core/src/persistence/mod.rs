//! Vietoris–Rips persistence in homology dimensions 0 and 1.
//!
//! The filtration is the full 2-skeleton of the Rips complex on a distance
//! matrix: every edge enters at its length, every triangle at its longest
//! edge. Dimension 0 is computed with union-find over the edge order,
//! dimension 1 by reducing the coboundary matrix of the edges with clearing
//! of the spanning-tree edges found in dimension 0. Both give the same
//! interval multiset as the plain boundary-matrix reduction, which the
//! verification oracle in [`crate::verify::oracle`] computes independently.

mod h0;
mod h1;
pub(crate) mod union_find;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::pointcloud::DistanceMatrix;

pub use h0::persistence_h0;
pub use h1::{persistence_h1, persistence_h1_capped};

/// Largest vertex count accepted by [`persistence_h1`] before it would
/// enumerate the O(n^3) triangles.
pub const DEFAULT_MAX_VERTICES_H1: usize = 600;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PersistenceError {
    #[error("complex too large: {n_vertices} vertices exceeds the cap of {cap}")]
    ComplexTooLarge { n_vertices: usize, cap: usize },
    #[error("unsupported homology dimension {0} (only 0 and 1)")]
    UnsupportedDimension(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub birth: f64,
    /// `f64::INFINITY` for classes that never die.
    pub death: f64,
}

impl Interval {
    pub fn new(birth: f64, death: f64) -> Self {
        debug_assert!(birth <= death);
        Self { birth, death }
    }

    pub fn is_finite(&self) -> bool {
        self.death.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    /// Half-open membership: alive at `eps` iff `birth <= eps < death`.
    #[inline]
    pub fn contains(&self, eps: f64) -> bool {
        self.birth <= eps && eps < self.death
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.total_cmp(&other.death))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.death.is_finite() {
            write!(f, "[{}, {})", self.birth, self.death)
        } else {
            write!(f, "[{}, inf)", self.birth)
        }
    }
}

/// Persistence intervals of one homology dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    pub dimension: usize,
    pub intervals: Vec<Interval>,
}

impl Barcode {
    pub fn new(dimension: usize, mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(Interval::total_cmp);
        Self { dimension, intervals }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn finite(&self) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(|iv| iv.is_finite())
    }

    pub fn infinite_count(&self) -> usize {
        self.intervals.iter().filter(|iv| !iv.is_finite()).count()
    }

    /// Number of intervals alive at `eps` (half-open convention).
    pub fn betti_at(&self, eps: f64) -> usize {
        self.intervals.iter().filter(|iv| iv.contains(eps)).count()
    }

    /// Copy with every birth and death multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self::new(
            self.dimension,
            self.intervals
                .iter()
                .map(|iv| Interval::new(iv.birth * c, iv.death * c))
                .collect(),
        )
    }

    /// Multiset equality with an absolute tolerance on endpoints.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dimension == other.dimension
            && self.intervals.len() == other.intervals.len()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| close(a.birth, b.birth, tol) && close(a.death, b.death, tol))
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

/// Largest finite death, or 0 when there is none.
pub fn max_finite_death(bc: &Barcode) -> f64 {
    bc.finite().map(|iv| iv.death).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: u32,
    pub j: u32,
    pub value: f64,
}

/// Edges of the Rips complex in filtration order: ascending length, ties by
/// `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RipsFiltration {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl RipsFiltration {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

pub fn build_filtration(dm: &DistanceMatrix) -> RipsFiltration {
    let n = dm.size();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push(Edge {
                i: i as u32,
                j: j as u32,
                value: dm.get(i, j),
            });
        }
    }
    // Stable sort keeps the lexicographic generation order among ties.
    edges.sort_by(|a, b| a.value.total_cmp(&b.value));
    RipsFiltration { n_vertices: n, edges }
}

/// Barcode of the requested dimension (0 or 1).
pub fn barcode(filt: &RipsFiltration, dimension: usize) -> Result<Barcode, PersistenceError> {
    match dimension {
        0 => Ok(persistence_h0(filt)),
        1 => persistence_h1(filt),
        d => Err(PersistenceError::UnsupportedDimension(d)),
    }
}
