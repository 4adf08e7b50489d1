//! Exact matrix rank over the rationals via fraction-free elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Bareiss elimination with row pivoting; every division is exact.
pub(crate) fn rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                debug_assert!((&num % &prev).is_zero());
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank of a 0/1 matrix given by a membership predicate.
pub(crate) fn rank_from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> usize {
    let m = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| BigInt::from(u8::from(f(r, c))))
                .collect()
        })
        .collect();
    rank_bigint(m)
}

/// Rank of a bit-packed matrix with one machine word per row.
pub(crate) fn rank_of_bit_rows(masks: &[u64], cols: usize) -> usize {
    rank_from_fn(masks.len(), cols, |r, c| masks[r] >> c & 1 == 1)
}
