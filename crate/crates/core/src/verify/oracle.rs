//! Slow reference implementations, written independently of the fast paths.
//!
//! Nothing here shares code with `persistence`, `pointcloud::greedy_order`
//! or `lyapunov`: each routine recomputes its answer from first principles
//! so that agreement with the fast path means something.

use crate::persistence::{Barcode, Interval};
use crate::pointcloud::{euclidean, DistanceMatrix, PointCloud};
use crate::systems::SystemSpec;

struct Simplex {
    verts: Vec<usize>,
    value: f64,
}

fn all_simplices(dm: &DistanceMatrix) -> Vec<Simplex> {
    let n = dm.size();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(Simplex {
            verts: vec![i],
            value: 0.0,
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(Simplex {
                verts: vec![i, j],
                value: dm.get(i, j),
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let v = dm.get(i, j).max(dm.get(i, k)).max(dm.get(j, k));
                out.push(Simplex {
                    verts: vec![i, j, k],
                    value: v,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.verts.len().cmp(&b.verts.len()))
            .then(a.verts.cmp(&b.verts))
    });
    out
}

/// Dimension 0 and 1 barcodes by reducing the full boundary matrix of the
/// Rips 2-skeleton, one dense column per simplex.
///
/// Zero-length dimension-1 pairs are dropped; zero-length dimension-0 pairs
/// are kept.
pub fn naive_barcodes(dm: &DistanceMatrix) -> (Barcode, Barcode) {
    let simplices = all_simplices(dm);
    let m = simplices.len();
    let index_of = |verts: &[usize]| simplices.iter().position(|s| s.verts == verts).unwrap();

    let mut columns: Vec<Vec<bool>> = simplices
        .iter()
        .map(|s| {
            let mut col = vec![false; m];
            if s.verts.len() > 1 {
                for skip in 0..s.verts.len() {
                    let face: Vec<usize> = s
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    col[index_of(&face)] = true;
                }
            }
            col
        })
        .collect();

    let low = |col: &[bool]| col.iter().rposition(|&b| b);
    let mut low_owner: Vec<Option<usize>> = vec![None; m];
    for j in 0..m {
        while let Some(l) = low(&columns[j]) {
            match low_owner[l] {
                Some(k) => {
                    let other = columns[k].clone();
                    for (a, b) in columns[j].iter_mut().zip(other) {
                        *a ^= b;
                    }
                }
                None => {
                    low_owner[l] = Some(j);
                    break;
                }
            }
        }
    }

    let mut h0 = Vec::new();
    let mut h1 = Vec::new();
    for (i, s) in simplices.iter().enumerate() {
        let dim = s.verts.len() - 1;
        if dim > 1 {
            continue;
        }
        let negative = low(&columns[i]).is_some();
        if negative {
            continue;
        }
        let death = low_owner[i].map_or(f64::INFINITY, |j| simplices[j].value);
        match dim {
            0 => h0.push(Interval::new(s.value, death)),
            _ if death > s.value => h1.push(Interval::new(s.value, death)),
            _ => {}
        }
    }
    (Barcode::new(0, h0), Barcode::new(1, h1))
}

/// Betti numbers of the Rips complex at `eps` (simplices with value ≤ eps),
/// computed directly: components by graph search, loops as
/// `edges − vertices + components − rank ∂2`.
pub fn betti_at_threshold(dm: &DistanceMatrix, eps: f64) -> (usize, usize) {
    let n = dm.size();
    let adjacent = |i: usize, j: usize| i != j && dm.get(i, j) <= eps;

    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for (w, s) in seen.iter_mut().enumerate() {
                if !*s && adjacent(v, w) {
                    *s = true;
                    stack.push(w);
                }
            }
        }
    }

    let mut edge_ids = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if adjacent(i, j) {
                edge_ids.push((i, j));
            }
        }
    }
    let edge_index = |a: usize, b: usize| edge_ids.iter().position(|&e| e == (a, b)).unwrap();
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if adjacent(i, j) && adjacent(i, k) && adjacent(j, k) {
                    let mut r = vec![false; edge_ids.len()];
                    r[edge_index(i, j)] = true;
                    r[edge_index(i, k)] = true;
                    r[edge_index(j, k)] = true;
                    rows.push(r);
                }
            }
        }
    }
    let rank = f2_rank(rows);
    let loops = edge_ids.len() + components - n - rank;
    (components, loops)
}

fn f2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= *b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Greedy permutation recomputed from scratch at every step.
pub fn brute_greedy(cloud: &PointCloud, k: usize, seed: usize) -> Vec<usize> {
    let mut chosen = vec![seed];
    while chosen.len() < k {
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for i in 0..cloud.len() {
            if chosen.contains(&i) {
                continue;
            }
            let d = chosen
                .iter()
                .map(|&c| euclidean(cloud.point(i), cloud.point(c)))
                .fold(f64::INFINITY, f64::min);
            if d > best.0 {
                best = (d, i);
            }
        }
        chosen.push(best.1);
    }
    chosen
}

/// Maximal Lyapunov exponent by direct finite separation.
///
/// A companion starts `1e-9` away along the diagonal; whenever the
/// separation leaves `[1e-12, 1e-6]`, or 10 time units pass, the growth is
/// logged and the companion is rescaled. Uses its own RK4 loop.
pub fn direct_lyapunov(spec: &SystemSpec, x0: &[f64], dt: f64, transient_time: f64, total_time: f64) -> f64 {
    const D0: f64 = 1e-9;
    let dim = spec.dimension();
    let step = |x: &mut Vec<f64>| {
        let f = |s: &[f64]| spec.eval(s);
        let k1 = f(x);
        let k2 = f(&x.iter().zip(&k1).map(|(a, k)| a + 0.5 * dt * k).collect::<Vec<_>>());
        let k3 = f(&x.iter().zip(&k2).map(|(a, k)| a + 0.5 * dt * k).collect::<Vec<_>>());
        let k4 = f(&x.iter().zip(&k3).map(|(a, k)| a + dt * k).collect::<Vec<_>>());
        for i in 0..dim {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    };

    let mut x = x0.to_vec();
    for _ in 0..(transient_time / dt).round() as usize {
        step(&mut x);
    }
    let unit = 1.0 / (dim as f64).sqrt();
    let mut y: Vec<f64> = x.iter().map(|v| v + D0 * unit).collect();

    let steps = (total_time / dt).round() as usize;
    let max_block = (10.0 / dt).round() as usize;
    let mut log_sum = 0.0;
    let mut since = 0;
    for s in 1..=steps {
        step(&mut x);
        step(&mut y);
        since += 1;
        let d = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if !(1e-12..=1e-6).contains(&d) || since >= max_block || s == steps {
            log_sum += (d / D0).ln();
            for (yi, xi) in y.iter_mut().zip(&x) {
                *yi = xi + (*yi - xi) * (D0 / d);
            }
            since = 0;
        }
    }
    log_sum / (steps as f64 * dt)
}
