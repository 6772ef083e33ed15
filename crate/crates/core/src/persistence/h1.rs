//! One-dimensional persistence by coboundary reduction.
//!
//! Reducing the anti-transposed boundary matrix yields the same pairs as
//! reducing the boundary matrix itself. Columns are edges in decreasing
//! filtration order, each holding its cofacet triangles; the pivot of a
//! column is its earliest triangle. Spanning-tree edges of the dimension-0
//! sweep are pivots of vertex columns, so their columns reduce to zero and
//! are skipped outright (clearing).
//!
//! Triangles are keyed by `rank(longest edge) * n + opposite vertex`, where
//! the longest edge is taken in filtration order. This is a total order
//! refining the filtration values, so the resulting intervals agree with
//! any other compatible order.

use std::collections::HashMap;

use super::h0::h0_intervals;
use super::{Barcode, Interval, PersistenceError, RipsFiltration, DEFAULT_MAX_VERTICES_H1};

/// Loop persistence with the default vertex cap.
pub fn persistence_h1(filt: &RipsFiltration) -> Result<Barcode, PersistenceError> {
    persistence_h1_capped(filt, DEFAULT_MAX_VERTICES_H1)
}

/// Loop persistence; refuses complexes with more than `max_vertices` points.
///
/// Only intervals with `birth < death` are reported.
pub fn persistence_h1_capped(filt: &RipsFiltration, max_vertices: usize) -> Result<Barcode, PersistenceError> {
    let n = filt.n_vertices();
    if n > max_vertices {
        return Err(PersistenceError::ComplexTooLarge {
            n_vertices: n,
            cap: max_vertices,
        });
    }
    let edges = filt.edges();
    if n < 3 {
        return Ok(Barcode::new(1, Vec::new()));
    }

    let mut rank = vec![u32::MAX; n * n];
    for (r, e) in edges.iter().enumerate() {
        rank[e.i as usize * n + e.j as usize] = r as u32;
        rank[e.j as usize * n + e.i as usize] = r as u32;
    }
    let mut cleared = vec![false; edges.len()];
    h0_intervals(filt, |r| cleared[r] = true);

    let n64 = n as u64;
    let mut reduced: Vec<Vec<u64>> = Vec::new();
    let mut pivot_owner: HashMap<u64, u32> = HashMap::new();
    let mut intervals = Vec::new();
    let mut column: Vec<u64> = Vec::with_capacity(n);
    let mut scratch: Vec<u64> = Vec::with_capacity(n);

    for r in (0..edges.len()).rev() {
        if cleared[r] {
            continue;
        }
        let e = edges[r];
        let (i, j) = (e.i as usize, e.j as usize);
        column.clear();
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            let (rik, rjk) = (rank[i * n + k], rank[j * n + k]);
            let (longest, opposite) = if r as u32 > rik && r as u32 > rjk {
                (r as u32, k)
            } else if rik > rjk {
                (rik, j)
            } else {
                (rjk, i)
            };
            column.push(longest as u64 * n64 + opposite as u64);
        }
        column.sort_unstable();

        while let Some(&low) = column.first() {
            match pivot_owner.get(&low) {
                Some(&owner) => {
                    xor_sorted(&mut column, &reduced[owner as usize], &mut scratch);
                }
                None => break,
            }
        }

        match column.first() {
            None => intervals.push(Interval::new(e.value, f64::INFINITY)),
            Some(&low) => {
                let death = edges[(low / n64) as usize].value;
                if death > e.value {
                    intervals.push(Interval::new(e.value, death));
                }
                pivot_owner.insert(low, reduced.len() as u32);
                reduced.push(column.clone());
            }
        }
    }
    Ok(Barcode::new(1, intervals))
}

/// `a ^= b` over sorted, duplicate-free index lists.
fn xor_sorted(a: &mut Vec<u64>, b: &[u64], scratch: &mut Vec<u64>) {
    scratch.clear();
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                scratch.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
            }
        }
    }
    scratch.extend_from_slice(&a[x..]);
    scratch.extend_from_slice(&b[y..]);
    std::mem::swap(a, scratch);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::build_filtration;
    use crate::pointcloud::{distance_matrix, PointCloud};

    fn h1_of(points: &[[f64; 2]]) -> Barcode {
        persistence_h1(&build_filtration(&distance_matrix(
            &PointCloud::from_points(points).unwrap(),
        )))
        .unwrap()
    }

    #[test]
    fn xor_of_sorted_lists() {
        let mut a = vec![1, 3, 5, 7];
        let mut s = Vec::new();
        xor_sorted(&mut a, &[2, 3, 7, 9], &mut s);
        assert_eq!(a, vec![1, 2, 5, 9]);
    }

    #[test]
    fn path_has_no_loops() {
        assert!(h1_of(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_empty());
    }

    #[test]
    fn square_has_one_loop() {
        let bc = h1_of(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(bc.intervals, vec![Interval::new(1.0, 2f64.sqrt())]);
    }

    #[test]
    fn hexagon_loop_born_at_side_length() {
        use std::f64::consts::PI;
        let pts: Vec<[f64; 2]> = (0..6)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 6.0;
                [t.cos(), t.sin()]
            })
            .collect();
        let bc = h1_of(&pts);
        assert_eq!(bc.len(), 1);
        let iv = bc.intervals[0];
        assert!((iv.birth - 1.0).abs() < 1e-12);
        // Filled once the triangles {k, k+2, k+4} and the short-diagonal fans appear.
        assert!((iv.death - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let pts: Vec<[f64; 2]> = (0..10).map(|k| [k as f64, 0.0]).collect();
        let f = build_filtration(&distance_matrix(&PointCloud::from_points(&pts).unwrap()));
        assert_eq!(
            persistence_h1_capped(&f, 9),
            Err(PersistenceError::ComplexTooLarge { n_vertices: 10, cap: 9 })
        );
        assert!(persistence_h1_capped(&f, 10).unwrap().is_empty());
    }
}
