//! Dense matrices over the rationals with exact linear algebra.
//!
//! Provides reduced row echelon form, rank, inverses, linear solving, and
//! the inertia of a symmetric matrix via congruence reduction. Everything
//! is exact; no floating point is used anywhere.

use crate::rat::{rat_sign, Rat};
use num::{One, Zero};
use std::fmt;

/// A dense `nrows x ncols` matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols)
                .map(|j| crate::rat::rat_to_string(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        QMatrix {
            nrows,
            ncols,
            data: vec![Rat::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix construction"
        );
        QMatrix {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows)
                .all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = Self::zero(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.ncols, v.len(), "dimension mismatch in matrix-vector");
        (0..self.nrows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// In-place Gauss-Jordan reduction; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.ncols {
                    self.data
                        .swap(p * self.ncols + j, r * self.ncols + j);
                }
            }
            let inv = self.get(r, c).clone().recip();
            for j in c..self.ncols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.nrows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.ncols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form with its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.nrows, self.ncols, "inverse of non-square matrix");
        let n = self.nrows;
        let mut aug = Self::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() != n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// One solution of `self * x = b` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.nrows, b.len(), "dimension mismatch in solve");
        let mut aug = Self::zero(self.nrows, self.ncols + 1);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.ncols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last().is_some_and(|&c| c == self.ncols) {
            return None; // a pivot in the constant column: inconsistent
        }
        let mut x = vec![Rat::zero(); self.ncols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.ncols).clone();
        }
        Some(x)
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, computed
    /// by exact congruence reduction. When every remaining diagonal entry is
    /// zero but some off-diagonal entry `b` is not, adding row/column `j`
    /// into `i` creates the diagonal entry `2b` and reduction proceeds; this
    /// preserves inertia because it is a congruence transform.
    pub fn symmetric_inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "inertia of non-symmetric matrix");
        let n = self.nrows;
        let mut m = self.clone();
        let mut active: Vec<usize> = (0..n).collect();
        let (mut pos, mut neg) = (0, 0);
        while !active.is_empty() {
            if let Some(k) = active
                .iter()
                .position(|&i| !m.get(i, i).is_zero())
            {
                let i = active.remove(k);
                let p = m.get(i, i).clone();
                match rat_sign(&p) {
                    1 => pos += 1,
                    _ => neg += 1,
                }
                for &a in &active {
                    let fa = m.get(a, i) / &p;
                    if fa.is_zero() {
                        continue;
                    }
                    for &b in &active {
                        let v = m.get(a, b) - &fa * m.get(i, b);
                        m.set(a, b, v);
                    }
                }
                for &a in &active {
                    m.set(a, i, Rat::zero());
                    m.set(i, a, Rat::zero());
                }
            } else {
                let off = active.iter().enumerate().find_map(|(k, &i)| {
                    active[k + 1..]
                        .iter()
                        .find(|&&j| !m.get(i, j).is_zero())
                        .map(|&j| (i, j))
                });
                let Some((i, j)) = off else {
                    break; // remaining block is zero
                };
                for &a in active.clone().iter() {
                    let v = m.get(i, a) + m.get(j, a);
                    m.set(i, a, v);
                }
                for &a in active.clone().iter() {
                    let v = m.get(a, i) + m.get(a, j);
                    m.set(a, i, v);
                }
            }
        }
        (pos, neg, n - pos - neg)
    }

    /// `true` when the symmetric matrix is positive semidefinite.
    pub fn is_psd(&self) -> bool {
        self.symmetric_inertia().1 == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(*r.get(0, 0), rat_int(1));
        assert_eq!(*r.get(0, 1), rat_int(0));
        assert_eq!(*r.get(2, 2), rat_int(0));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[5, 3]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert_eq!(*inv.get(0, 0), rat_int(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_systems() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = a.solve(&[rat_int(3), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        // inconsistent
        let b = m(&[&[1, 1], &[1, 1]]);
        assert!(b.solve(&[rat_int(0), rat_int(1)]).is_none());
        // underdetermined: free variable pinned to zero
        let c = m(&[&[1, 1]]);
        assert_eq!(c.solve(&[rat_int(5)]).unwrap(), vec![rat_int(5), rat_int(0)]);
    }

    #[test]
    fn inertia_diagonal_and_hyperbolic() {
        assert_eq!(
            m(&[&[1, 0, 0], &[0, -2, 0], &[0, 0, 0]]).symmetric_inertia(),
            (1, 1, 1)
        );
        assert_eq!(m(&[&[0, 1], &[1, 0]]).symmetric_inertia(), (1, 1, 0));
        let psd = m(&[&[2, 1], &[1, 2]]);
        assert!(psd.is_psd());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_psd());
        // PSD with rational entries and zero eigenvalue
        let g = QMatrix::from_rows(vec![
            vec![rat(1, 1), rat(1, 2)],
            vec![rat(1, 2), rat(1, 4)],
        ]);
        assert_eq!(g.symmetric_inertia(), (1, 0, 1));
        assert!(g.is_psd());
    }

    #[test]
    fn inertia_matches_rank() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let s = a.mul(&a.transpose()); // positive semidefinite, full rank
        let (p, n, z) = s.symmetric_inertia();
        assert_eq!((p, n, z), (2, 0, 0));
        assert_eq!(s.rank(), p + n);
    }
}
