use super::union_find::UnionFind;
use super::{Barcode, Interval, RipsFiltration};

/// Connected-component persistence.
///
/// Every vertex is born at 0, so the elder rule only decides which root
/// survives a merge; each merging edge closes one `(0, length)` interval and
/// the last component lives forever.
pub fn persistence_h0(filt: &RipsFiltration) -> Barcode {
    Barcode::new(0, h0_intervals(filt, |_| {}))
}

/// Runs the union-find sweep, reporting the filtration position of every
/// merging edge to `on_merge`.
pub(super) fn h0_intervals(filt: &RipsFiltration, mut on_merge: impl FnMut(usize)) -> Vec<Interval> {
    let n = filt.n_vertices();
    let mut uf = UnionFind::new(n);
    let mut intervals = Vec::with_capacity(n);
    for (rank, e) in filt.edges().iter().enumerate() {
        if uf.union(e.i, e.j) {
            intervals.push(Interval::new(0.0, e.value));
            on_merge(rank);
            if intervals.len() + 1 == n {
                break;
            }
        }
    }
    if n > 0 {
        intervals.push(Interval::new(0.0, f64::INFINITY));
    }
    intervals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::build_filtration;
    use crate::pointcloud::{distance_matrix, PointCloud};

    fn h0_of(points: &[[f64; 2]]) -> Barcode {
        persistence_h0(&build_filtration(&distance_matrix(
            &PointCloud::from_points(points).unwrap(),
        )))
    }

    #[test]
    fn single_point() {
        assert_eq!(h0_of(&[[1.0, 1.0]]).intervals, vec![Interval::new(0.0, f64::INFINITY)]);
    }

    #[test]
    fn line_merges_at_one_then_nine() {
        let bc = h0_of(&[[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]]);
        assert_eq!(
            bc.intervals,
            vec![
                Interval::new(0.0, 1.0),
                Interval::new(0.0, 9.0),
                Interval::new(0.0, f64::INFINITY)
            ]
        );
    }

    #[test]
    fn square_three_unit_merges() {
        let bc = h0_of(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(bc.finite().filter(|iv| iv.death == 1.0).count(), 3);
        assert_eq!(bc.len(), 4);
        assert_eq!(bc.infinite_count(), 1);
    }

    #[test]
    fn duplicates_give_zero_length_bars() {
        let bc = h0_of(&[[0.0, 0.0], [0.0, 0.0], [2.0, 0.0]]);
        assert_eq!(bc.intervals[0], Interval::new(0.0, 0.0));
        assert_eq!(bc.betti_at(0.0), 2);
    }
}
