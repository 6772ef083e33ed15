//! Betti vectors over ε-partitions and CROCKER matrices.
//!
//! A Betti vector samples a barcode at the values of a [`Partition`]: entry
//! `i` counts the intervals with `birth <= ε_i < death`. A CROCKER matrix
//! stacks one Betti vector per value of the swept parameter, all sharing a
//! single partition.

use thiserror::Error;

use crate::persistence::Barcode;

/// Number of ε values used when none is given.
pub const DEFAULT_EPSILON_COUNT: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrockerError {
    #[error("degenerate ε range: d_max = {0} (must be positive and finite)")]
    DegenerateRange(f64),
    #[error("a partition needs at least 2 values, got {0}")]
    TooFewValues(usize),
    #[error("partition values must be finite, non-negative and strictly increasing")]
    NotIncreasing,
    #[error("{barcodes} barcodes for {params} parameter values")]
    LengthMismatch { barcodes: usize, params: usize },
    #[error("barcode of dimension {got} in a dimension-{expected} matrix")]
    MixedDimensions { expected: usize, got: usize },
}

/// Strictly increasing, non-negative ε values.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    values: Vec<f64>,
}

impl Partition {
    pub fn new(values: Vec<f64>) -> Result<Self, CrockerError> {
        let ok = values.iter().all(|v| v.is_finite())
            && values.first().is_none_or(|&v| v >= 0.0)
            && values.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(CrockerError::NotIncreasing);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `count` equally spaced values from 0 to `d_max`, both included.
pub fn make_partition(d_max: f64, count: usize) -> Result<Partition, CrockerError> {
    if !(d_max > 0.0 && d_max.is_finite()) {
        return Err(CrockerError::DegenerateRange(d_max));
    }
    if count < 2 {
        return Err(CrockerError::TooFewValues(count));
    }
    let last = (count - 1) as f64;
    let values = (0..count)
        .map(|i| if i + 1 == count { d_max } else { d_max * i as f64 / last })
        .collect();
    Partition::new(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BettiVector {
    pub dimension: usize,
    pub partition: Partition,
    pub counts: Vec<u32>,
}

impl BettiVector {
    pub fn l1_norm(&self) -> u64 {
        l1_norm(self)
    }
}

/// Samples `bc` at every value of `part`.
pub fn betti_vector(bc: &Barcode, part: &Partition) -> BettiVector {
    BettiVector {
        dimension: bc.dimension,
        partition: part.clone(),
        counts: betti_counts(bc, part.values()),
    }
}

fn betti_counts(bc: &Barcode, eps: &[f64]) -> Vec<u32> {
    // Difference array over the partition: +1 at the first ε ≥ birth, −1 at
    // the first ε ≥ death.
    let mut delta = vec![0i64; eps.len() + 1];
    for iv in &bc.intervals {
        let start = eps.partition_point(|&e| e < iv.birth);
        let end = eps.partition_point(|&e| e < iv.death);
        if start < end {
            delta[start] += 1;
            delta[end] -= 1;
        }
    }
    let mut running = 0i64;
    delta[..eps.len()]
        .iter()
        .map(|d| {
            running += d;
            running as u32
        })
        .collect()
}

/// Sum of the Betti numbers over the partition.
pub fn l1_norm(bv: &BettiVector) -> u64 {
    bv.counts.iter().map(|&c| c as u64).sum()
}

/// Betti vectors of one homology dimension across a parameter sweep.
///
/// Columns are `None` where the sweep produced no barcode (a diverged run).
#[derive(Debug, Clone, PartialEq)]
pub struct CrockerMatrix {
    pub dimension: usize,
    pub partition: Partition,
    pub param_values: Vec<f64>,
    pub columns: Vec<Option<Vec<u32>>>,
}

impl CrockerMatrix {
    pub fn n_params(&self) -> usize {
        self.param_values.len()
    }

    /// Count at partition row `row`, parameter column `col`.
    pub fn get(&self, row: usize, col: usize) -> Option<u32> {
        self.columns[col].as_ref().map(|c| c[row])
    }

    /// Column sums, i.e. the L1 norm of each Betti vector.
    pub fn l1_curve(&self) -> Vec<Option<u64>> {
        self.columns
            .iter()
            .map(|c| c.as_ref().map(|c| c.iter().map(|&v| v as u64).sum()))
            .collect()
    }

    pub fn max_count(&self) -> u32 {
        self.columns.iter().flatten().flatten().copied().max().unwrap_or(0)
    }
}

pub fn crocker_matrix(
    barcodes: &[Barcode],
    part: &Partition,
    param_values: &[f64],
) -> Result<CrockerMatrix, CrockerError> {
    crocker_matrix_with_gaps(&barcodes.iter().map(Some).collect::<Vec<_>>(), part, param_values)
}

/// As [`crocker_matrix`], with `None` barcodes left as gap columns.
pub fn crocker_matrix_with_gaps(
    barcodes: &[Option<&Barcode>],
    part: &Partition,
    param_values: &[f64],
) -> Result<CrockerMatrix, CrockerError> {
    if barcodes.len() != param_values.len() {
        return Err(CrockerError::LengthMismatch {
            barcodes: barcodes.len(),
            params: param_values.len(),
        });
    }
    let mut dims = barcodes.iter().flatten().map(|b| b.dimension);
    let dimension = dims.next().unwrap_or(0);
    if let Some(got) = dims.find(|&d| d != dimension) {
        return Err(CrockerError::MixedDimensions {
            expected: dimension,
            got,
        });
    }
    Ok(CrockerMatrix {
        dimension,
        partition: part.clone(),
        param_values: param_values.to_vec(),
        columns: barcodes
            .iter()
            .map(|b| b.map(|b| betti_counts(b, part.values())))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::Interval;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    fn bc(dim: usize, ivs: &[(f64, f64)]) -> Barcode {
        Barcode::new(dim, ivs.iter().map(|&(b, d)| Interval::new(b, d)).collect())
    }

    fn square_h0() -> Barcode {
        bc(0, &[(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, INF)])
    }

    fn square_h1() -> Barcode {
        bc(1, &[(1.0, 2f64.sqrt())])
    }

    #[test]
    fn partition_examples() {
        assert_eq!(make_partition(1.0, 5).unwrap().values(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(make_partition(9.0, 2).unwrap().values(), &[0.0, 9.0]);
        let p = make_partition(2.0, 100).unwrap();
        assert_eq!(p.len(), 100);
        assert_eq!(p.values()[99], 2.0);
        for w in p.values().windows(2) {
            assert!((w[1] - w[0] - 2.0 / 99.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partition_errors() {
        assert_eq!(make_partition(0.0, 10), Err(CrockerError::DegenerateRange(0.0)));
        assert!(matches!(
            make_partition(f64::NAN, 10),
            Err(CrockerError::DegenerateRange(_))
        ));
        assert_eq!(make_partition(1.0, 1), Err(CrockerError::TooFewValues(1)));
        assert_eq!(Partition::new(vec![0.0, 0.7, 0.15]), Err(CrockerError::NotIncreasing));
        assert_eq!(Partition::new(vec![-1.0, 0.0]), Err(CrockerError::NotIncreasing));
    }

    #[test]
    fn square_betti_vectors() {
        let p = Partition::new(vec![0.0, 1.0, 1.2, 1.5]).unwrap();
        assert_eq!(betti_vector(&square_h0(), &p).counts, vec![4, 1, 1, 1]);
        assert_eq!(betti_vector(&square_h1(), &p).counts, vec![0, 1, 1, 0]);
    }

    #[test]
    fn single_point_vectors() {
        let p = make_partition(1.0, 100).unwrap();
        let v0 = betti_vector(&bc(0, &[(0.0, INF)]), &p);
        assert!(v0.counts.iter().all(|&c| c == 1));
        assert_eq!(l1_norm(&v0), 100);
        let v1 = betti_vector(&bc(1, &[]), &p);
        assert!(v1.counts.iter().all(|&c| c == 0));
        assert_eq!(l1_norm(&v1), 0);
    }

    #[test]
    fn caption_vector_norm() {
        let bv = BettiVector {
            dimension: 0,
            partition: Partition::new(vec![0.0, 0.07, 0.15, 0.23, 0.34, 0.44, 0.54]).unwrap(),
            counts: vec![19, 18, 10, 1, 1, 1, 1],
        };
        assert_eq!(bv.l1_norm(), 51);
    }

    #[test]
    fn crocker_matrix_examples() {
        let p = Partition::new(vec![0.0, 1.0, 2.0]).unwrap();
        let one = crocker_matrix(&[square_h0()], &p, &[0.5]).unwrap();
        assert_eq!(one.columns, vec![Some(betti_vector(&square_h0(), &p).counts)]);

        let two = crocker_matrix(&[square_h1(), square_h1()], &p, &[0.1, 0.2]).unwrap();
        assert_eq!(two.columns[0], two.columns[1]);

        let bars = [
            bc(1, &[(0.5, 1.5)]),
            bc(1, &[(0.0, 2.5), (1.0, 2.0)]),
            bc(1, &[(1.0, 1.0 + 1e-9), (2.0, 3.0)]),
        ];
        let m = crocker_matrix(&bars, &p, &[1.0, 2.0, 3.0]).unwrap();
        for (j, b) in bars.iter().enumerate() {
            for (i, &eps) in p.values().iter().enumerate() {
                assert_eq!(m.get(i, j), Some(b.betti_at(eps) as u32));
            }
        }
        assert_eq!(m.columns[1], Some(vec![1, 2, 1]));
    }

    #[test]
    fn crocker_matrix_errors() {
        let p = Partition::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(
            crocker_matrix(&[square_h0()], &p, &[1.0, 2.0]),
            Err(CrockerError::LengthMismatch { barcodes: 1, params: 2 })
        );
        assert_eq!(
            crocker_matrix(&[square_h0(), square_h1()], &p, &[1.0, 2.0]),
            Err(CrockerError::MixedDimensions { expected: 0, got: 1 })
        );
    }

    #[test]
    fn gaps_stay_gaps() {
        let p = Partition::new(vec![0.0, 1.0]).unwrap();
        let h = square_h0();
        let m = crocker_matrix_with_gaps(&[Some(&h), None, Some(&h)], &p, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m.l1_curve(), vec![Some(5), None, Some(5)]);
    }

    fn arb_barcode() -> impl Strategy<Value = Barcode> {
        prop::collection::vec((0.0f64..5.0, 0.0f64..5.0, any::<bool>()), 0..20).prop_map(|raw| {
            let ivs = raw
                .into_iter()
                .map(|(a, b, inf)| {
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    Interval::new(lo, if inf { INF } else { hi })
                })
                .collect();
            Barcode::new(1, ivs)
        })
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        prop::collection::btree_set(0u32..600, 1..40)
            .prop_map(|s| Partition::new(s.into_iter().map(|v| v as f64 / 100.0).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn counts_match_pointwise_membership(b in arb_barcode(), p in arb_partition()) {
            let v = betti_vector(&b, &p);
            for (eps, c) in p.values().iter().zip(&v.counts) {
                prop_assert_eq!(*c as usize, b.betti_at(*eps));
            }
        }

        #[test]
        fn refinement_keeps_existing_counts(b in arb_barcode(), p in arb_partition(), extra in prop::collection::vec(0u32..600, 1..20)) {
            let mut all: Vec<f64> = p.values().to_vec();
            all.extend(extra.iter().map(|&v| v as f64 / 100.0));
            all.sort_by(f64::total_cmp);
            all.dedup();
            let fine = Partition::new(all).unwrap();
            let coarse_v = betti_vector(&b, &p);
            let fine_v = betti_vector(&b, &fine);
            for (eps, c) in p.values().iter().zip(&coarse_v.counts) {
                let idx = fine.values().iter().position(|v| v == eps).unwrap();
                prop_assert_eq!(fine_v.counts[idx], *c);
            }
        }

        #[test]
        fn l1_bounds_and_additivity(b in arb_barcode(), p in arb_partition(), q in arb_partition()) {
            let v = betti_vector(&b, &p);
            let max = v.counts.iter().copied().max().unwrap_or(0) as u64;
            prop_assert!(l1_norm(&v) <= p.len() as u64 * max);
            // Concatenation of two partitions, the second shifted past the first.
            let shift = p.values().last().unwrap() + 1.0;
            let q_shift: Vec<f64> = q.values().iter().map(|v| v + shift).collect();
            let mut cat = p.values().to_vec();
            cat.extend(&q_shift);
            let cat = Partition::new(cat).unwrap();
            let q_shift = Partition::new(q_shift).unwrap();
            prop_assert_eq!(
                l1_norm(&betti_vector(&b, &cat)),
                l1_norm(&v) + l1_norm(&betti_vector(&b, &q_shift))
            );
        }
    }
}
