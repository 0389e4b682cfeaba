//! Exact integer linear algebra: matrix rank by fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Rank of an integer matrix, computed by Bareiss-style fraction-free
/// elimination with column pivoting. All divisions are exact, so entries
/// stay the size of minors of the input.
pub fn integer_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |row| row.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let t = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "fraction-free step must divide exactly");
                a[i][j] = q;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Plain rational Gaussian elimination, as an independent oracle.
    fn rational_rank(rows: &[&[i64]]) -> usize {
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
            .collect();
        let nrows = a.len();
        let ncols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..nrows {
                let factor = &a[i][col] / &a[rank][col];
                for j in col..ncols {
                    let delta = &factor * &a[rank][j];
                    a[i][j] -= delta;
                }
            }
            rank += 1;
            if rank == nrows {
                break;
            }
        }
        rank
    }

    #[test]
    fn empty_and_zero_matrices() {
        assert_eq!(integer_rank(vec![]), 0);
        assert_eq!(integer_rank(mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(integer_rank(vec![vec![], vec![]]), 0);
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(integer_rank(mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
    }

    #[test]
    fn dependent_rows_drop_rank() {
        assert_eq!(integer_rank(mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
    }

    #[test]
    fn rectangular_matrices() {
        assert_eq!(integer_rank(mat(&[&[3, 1, 4, 1], &[5, 9, 2, 6]])), 2);
        assert_eq!(integer_rank(mat(&[&[2], &[4], &[8]])), 1);
    }

    #[test]
    fn zero_leading_column_is_skipped() {
        assert_eq!(integer_rank(mat(&[&[0, 1, 1], &[0, 2, 3]])), 2);
    }

    #[test]
    fn matches_rational_elimination() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, -3, 1], vec![4, -6, 2], vec![1, 1, 1]],
            vec![vec![7, 0, -2, 5], vec![0, 0, 0, 0], vec![14, 0, -4, 10], vec![1, 2, 3, 4]],
            vec![vec![-1, 2], vec![3, -6], vec![5, -10]],
            vec![vec![6, 10, 15], vec![10, 15, 6], vec![15, 6, 10]],
        ];
        for case in cases {
            let slices: Vec<&[i64]> = case.iter().map(|r| r.as_slice()).collect();
            assert_eq!(integer_rank(mat(&slices)), rational_rank(&slices));
        }
    }
}
