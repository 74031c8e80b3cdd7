use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows: rows.len(), cols, entries: rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let mut m = Self::zero(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.entries[i][i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += &self.entries[i][k] * &other.entries[k][j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.entries.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.entries[i][j].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.entries {
            r.swap(a, b);
        }
    }

    /// `row_a += q row_b`.
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        let src = self.entries[b].clone();
        for (x, y) in self.entries[a].iter_mut().zip(src) {
            *x += q * y;
        }
    }

    /// `col_a += q col_b`.
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for r in &mut self.entries {
            let y = r[b].clone();
            r[a] += q * y;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for x in &mut self.entries[a] {
            *x = -x.clone();
        }
    }

    fn negate_col(&mut self, a: usize) {
        for r in &mut self.entries {
            r[a] = -r[a].clone();
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, nonnegative,
/// each diagonal entry dividing the next. `u_inv` is kept alongside so that
/// cokernel generators can be read off as its columns.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.entries[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        self.a.add_row(i, j, q);
        self.u.add_row(i, j, q);
        self.u_inv.add_col(j, i, &-q);
    }

    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        self.a.add_col(i, j, q);
        self.v.add_col(i, j, q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero entry in the trailing block.
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a.entries[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a.entries[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut w = Work { a: m.clone(), u: IntMatrix::identity(m.rows), u_inv: IntMatrix::identity(m.rows), v: IntMatrix::identity(m.cols) };
    for t in 0..m.rows.min(m.cols) {
        let Some((pi, pj)) = w.smallest(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m.rows {
                let q = w.a.entries[i][t].div_floor(&w.a.entries[t][t]);
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
                dirty |= !w.a.entries[i][t].is_zero();
            }
            for j in t + 1..m.cols {
                let q = w.a.entries[t][j].div_floor(&w.a.entries[t][t]);
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
                dirty |= !w.a.entries[t][j].is_zero();
            }
            if !dirty {
                // Enforce divisibility against the trailing block.
                let p = w.a.entries[t][t].clone();
                let bad = (t + 1..m.rows).find(|&i| (t + 1..m.cols).any(|j| !w.a.entries[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => w.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            // A smaller remainder appeared somewhere in row or column t: move it to the pivot.
            let (bi, bj) = w.smallest_in_cross(t);
            w.swap_rows(t, bi);
            w.swap_cols(t, bj);
        }
        if w.a.entries[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    Snf { u: w.u, u_inv: w.u_inv, d: w.a, v: w.v }
}

impl Work {
    /// Smallest nonzero entry of row `t` or column `t`, within the trailing block.
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs = self.a.entries[t][t].abs();
        let cands = (t..self.a.rows).map(|i| (i, t)).chain((t..self.a.cols).map(|j| (t, j)));
        for (i, j) in cands {
            let x = self.a.entries[i][j].abs();
            if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
                best = (i, j);
                best_abs = x;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d, "U M V != D for {m}");
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        let d = s.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{d:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn zero_and_scalar() {
        let z = IntMatrix::zero(2, 3);
        assert_eq!(smith_normal_form(&z).d, z);
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![-2]]).unwrap());
        assert_eq!(s.diagonal(), vec![BigInt::from(2)]);
    }

    #[test]
    fn known_example() {
        let m = IntMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        check(&m);
        let d: Vec<i64> = smith_normal_form(&m).diagonal().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    proptest! {
        #[test]
        fn reconstruction(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            check(&IntMatrix::from_i64(&m).unwrap());
        }
    }
}
