//! Brute-force cross-checks that share no code with the Smith normal form.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::snf::IntMatrix;
use super::LocalizedMap;

/// `|Hom(Z^rows / im M, Z_N)|`, counted as the vectors `x` in `(Z_N)^rows`
/// with `x^T M = 0 mod N`. These counts over all `N` determine a finitely
/// generated abelian group.
pub fn coker_hom_count(m: &IntMatrix, modulus: u64) -> u64 {
    let rows = m.rows();
    let total = modulus.pow(rows as u32);
    let n = BigInt::from(modulus);
    let mut count = 0;
    let mut x = vec![0u64; rows];
    for idx in 0..total {
        let mut r = idx;
        for xi in x.iter_mut() {
            *xi = r % modulus;
            r /= modulus;
        }
        let kills = (0..m.cols()).all(|j| {
            let s: BigInt = (0..rows).map(|i| BigInt::from(x[i]) * m.get(i, j)).sum();
            (s % &n).is_zero()
        });
        count += u64::from(kills);
    }
    count
}

/// Rank over `Q` by fraction-free elimination.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.entries().to_vec();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            let (f, g) = (a[rank][col].clone(), a[i][col].clone());
            let pivot_row = a[rank].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x = &*x * &f - y * &g;
            }
        }
        rank += 1;
    }
    rank
}

/// Number of classes of the integers `0..=|1 - c|` modulo `(1 - c) Z[1/d]`,
/// deciding membership by trying denominators `d^e` for `e <= depth`.
/// Every class of `Z[1/d] / (1 - c) Z[1/d]` contains an integer, so for
/// `c != 1` this is the order of the cokernel.
pub fn localized_coker_order(map: LocalizedMap, depth: u32) -> u64 {
    let a = (1 - map.c).unsigned_abs() as u128;
    assert!(a != 0, "zero map has an infinite cokernel");
    let d = map.d as u128;
    let in_image = |y: u128| (0..=depth).any(|e| (y * d.pow(e)).is_multiple_of(a));
    let mut reps: BTreeSet<u128> = BTreeSet::new();
    for y in 0..a {
        if !reps.iter().any(|&r| in_image(y - r)) {
            reps.insert(y);
        }
    }
    reps.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktheory::{cokernel, localized_coker_ker};

    #[test]
    fn hom_counts_match_snf() {
        let m = IntMatrix::from_i64(&[vec![2, 0], vec![0, 4], vec![0, 0]]).unwrap();
        let g = cokernel(&m).group;
        for n in 1..=8 {
            assert_eq!(BigInt::from(coker_hom_count(&m, n)), g.hom_count(n));
        }
        assert_eq!(rational_rank(&m), 2);
    }

    #[test]
    fn localized_orders_match() {
        for d in 1..=10u64 {
            for c in -10..=10i64 {
                if c == 1 {
                    continue;
                }
                let (coker, _) = localized_coker_ker(LocalizedMap { d, c }).unwrap();
                let order = coker.torsion.first().map_or(1, |t| u64::try_from(t).unwrap());
                assert_eq!(localized_coker_order(LocalizedMap { d, c }, 6), order, "d={d} c={c}");
            }
        }
    }
}
