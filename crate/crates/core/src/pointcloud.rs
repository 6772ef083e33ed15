//! Point clouds, greedy farthest-point subsampling and distance matrices.

use thiserror::Error;

use crate::systems::Trajectory;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointCloudError {
    #[error("target count {target} exceeds the {available} available points")]
    TargetTooLarge { target: usize, available: usize },
    #[error("target count must be positive")]
    ZeroTarget,
    #[error("seed index {seed} out of range for {len} points")]
    BadSeed { seed: usize, len: usize },
    #[error("point cloud is empty")]
    Empty,
}

/// Points in `R^dim` together with the trajectory indices they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    source_indices: Vec<usize>,
}

impl PointCloud {
    /// Builds a cloud whose source indices are `0..n`.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self, PointCloudError> {
        if dim == 0 || coords.is_empty() {
            return Err(PointCloudError::Empty);
        }
        assert_eq!(coords.len() % dim, 0, "coordinate count not a multiple of dim");
        let n = coords.len() / dim;
        Ok(Self {
            dim,
            coords,
            source_indices: (0..n).collect(),
        })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self, PointCloudError> {
        let first = points.first().ok_or(PointCloudError::Empty)?;
        let dim = first.as_ref().len();
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            assert_eq!(p.as_ref().len(), dim, "ragged point list");
            coords.extend_from_slice(p.as_ref());
        }
        Self::new(dim, coords)
    }

    pub fn from_trajectory(traj: &Trajectory) -> Self {
        Self::new(traj.dim(), traj.as_flat().to_vec()).expect("trajectories are non-empty")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.source_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source_indices.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_indices
    }

    /// Sub-cloud of the given positions, in that order. Source indices are
    /// carried over.
    pub fn select(&self, positions: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(positions.len() * self.dim);
        for &p in positions {
            coords.extend_from_slice(self.point(p));
        }
        Self {
            dim: self.dim,
            coords,
            source_indices: positions.iter().map(|&p| self.source_indices[p]).collect(),
        }
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Farthest-point subsample (greedy permutation prefix).
///
/// Starts at `seed_index` and repeatedly adds the point farthest from the
/// points already chosen; ties go to the smallest index. Output is in
/// selection order.
pub fn greedy_subsample(
    cloud: &PointCloud,
    target_count: usize,
    seed_index: usize,
) -> Result<PointCloud, PointCloudError> {
    Ok(cloud.select(&greedy_order(cloud, target_count, seed_index)?))
}

/// Positions chosen by [`greedy_subsample`], in selection order.
pub fn greedy_order(cloud: &PointCloud, target_count: usize, seed_index: usize) -> Result<Vec<usize>, PointCloudError> {
    let n = cloud.len();
    if target_count == 0 {
        return Err(PointCloudError::ZeroTarget);
    }
    if target_count > n {
        return Err(PointCloudError::TargetTooLarge {
            target: target_count,
            available: n,
        });
    }
    if seed_index >= n {
        return Err(PointCloudError::BadSeed {
            seed: seed_index,
            len: n,
        });
    }

    let mut chosen = Vec::with_capacity(target_count);
    // Distance from each point to the chosen set; chosen points sit at -1 so
    // they are never picked twice, even when duplicates leave ties at 0.
    let mut nearest = vec![f64::INFINITY; n];
    let mut current = seed_index;
    loop {
        chosen.push(current);
        nearest[current] = -1.0;
        if chosen.len() == target_count {
            break;
        }
        let anchor = cloud.point(current);
        let mut best = usize::MAX;
        let mut best_dist = f64::NEG_INFINITY;
        for (i, slot) in nearest.iter_mut().enumerate() {
            if *slot < 0.0 {
                continue;
            }
            let d = euclidean(anchor, cloud.point(i));
            if d < *slot {
                *slot = d;
            }
            if *slot > best_dist {
                best_dist = *slot;
                best = i;
            }
        }
        current = best;
    }
    Ok(chosen)
}

/// Largest distance from any point of `cloud` to its nearest point in
/// `subset` (given as positions into `cloud`).
pub fn covering_radius(cloud: &PointCloud, subset: &[usize]) -> f64 {
    cloud
        .points()
        .map(|p| {
            subset
                .iter()
                .map(|&s| euclidean(p, cloud.point(s)))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric matrix of pairwise Euclidean distances, stored dense.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a dense row-major matrix, checking symmetry, the zero diagonal
    /// and finiteness.
    pub fn from_dense(n: usize, entries: Vec<f64>) -> Result<Self, String> {
        if n == 0 || entries.len() != n * n {
            return Err(format!("expected {n}x{n} entries, got {}", entries.len()));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(format!("nonzero diagonal at {i}"));
            }
            for j in 0..i {
                let v = entries[i * n + j];
                if !v.is_finite() || v < 0.0 || v != entries[j * n + i] {
                    return Err(format!("bad or asymmetric entry at ({i}, {j})"));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Copy with every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    /// Matrix of the relabeled cloud whose point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for (a, &pa) in perm.iter().enumerate() {
            for (b, &pb) in perm.iter().enumerate() {
                entries[a * n + b] = self.get(pa, pb);
            }
        }
        Self { n, entries }
    }
}

pub fn distance_matrix(cloud: &PointCloud) -> DistanceMatrix {
    let n = cloud.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(cloud.point(i), cloud.point(j));
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    DistanceMatrix { n, entries }
}
