//! Symmetric linear matrix pencils with rational coefficients.
//!
//! A pencil is the affine matrix map `A(x) = A_0 + x_1 A_1 + ... + x_n A_n`
//! with all `A_k` symmetric of a common size `m`. This module provides
//! validated construction, exact evaluation, entrywise polynomial views,
//! affine changes of variables, the slice obtained by pinning the first
//! coordinate, and seeded random generators used by the command line tool
//! and the test suite.

use crate::multipoly::{Monomial, MonomialOrder, MultiPoly};
use crate::qmatrix::QMatrix;
use crate::rat::{Int, Rat};
use num::{One, Zero};
use rand::Rng;

/// Construction errors for pencils.
#[derive(Debug, thiserror::Error)]
pub enum PencilError {
    #[error("expected {expected} matrices (one constant plus one per variable), got {got}")]
    WrongMatrixCount { expected: usize, got: usize },
    #[error("matrix {index} is {rows}x{cols}, expected {m}x{m}")]
    WrongShape {
        index: usize,
        rows: usize,
        cols: usize,
        m: usize,
    },
    #[error("matrix {index} is not symmetric at entry ({row},{col})")]
    NotSymmetric {
        index: usize,
        row: usize,
        col: usize,
    },
    #[error("matrix size must be at least 1")]
    EmptyMatrix,
}

/// The pencil `A(x) = A_0 + sum_k x_k A_k` of symmetric rational matrices.
#[derive(Clone, Debug)]
pub struct Pencil {
    m: usize,
    n: usize,
    /// `mats[0]` is the constant matrix, `mats[k]` multiplies `x_k`.
    mats: Vec<QMatrix>,
}

impl Pencil {
    /// Validates sizes and symmetry.
    pub fn new(m: usize, n: usize, mats: Vec<QMatrix>) -> Result<Self, PencilError> {
        if m == 0 {
            return Err(PencilError::EmptyMatrix);
        }
        if mats.len() != n + 1 {
            return Err(PencilError::WrongMatrixCount {
                expected: n + 1,
                got: mats.len(),
            });
        }
        for (index, a) in mats.iter().enumerate() {
            if a.nrows() != m || a.ncols() != m {
                return Err(PencilError::WrongShape {
                    index,
                    rows: a.nrows(),
                    cols: a.ncols(),
                    m,
                });
            }
            for i in 0..m {
                for j in 0..i {
                    if a.get(i, j) != a.get(j, i) {
                        return Err(PencilError::NotSymmetric {
                            index,
                            row: i,
                            col: j,
                        });
                    }
                }
            }
        }
        Ok(Pencil { m, n, mats })
    }

    /// Matrix size.
    pub fn size(&self) -> usize {
        self.m
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.n
    }

    /// The coefficient matrices, constant part first.
    pub fn matrices(&self) -> &[QMatrix] {
        &self.mats
    }

    /// Exact evaluation `A(x)`.
    pub fn eval(&self, x: &[Rat]) -> QMatrix {
        assert_eq!(x.len(), self.n, "point dimension mismatch");
        let mut out = self.mats[0].clone();
        for (k, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for i in 0..self.m {
                for j in 0..self.m {
                    let v = out.get(i, j) + xi * self.mats[k + 1].get(i, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Entry `(i, j)` as a degree-one polynomial in a ring with
    /// `total_vars >= n` variables, the pencil variables occupying
    /// positions `0..n`.
    pub fn entry_poly(
        &self,
        i: usize,
        j: usize,
        total_vars: usize,
        ord: MonomialOrder,
    ) -> MultiPoly {
        assert!(total_vars >= self.n);
        let mut terms = Vec::new();
        let c0 = self.mats[0].get(i, j);
        if !c0.is_zero() {
            terms.push((Monomial::one(total_vars), c0.clone()));
        }
        for k in 0..self.n {
            let c = self.mats[k + 1].get(i, j);
            if !c.is_zero() {
                terms.push((Monomial::var(total_vars, k), c.clone()));
            }
        }
        MultiPoly::new(total_vars, ord, terms)
    }

    /// The pencil after the affine change of variables `x = M y` (square
    /// invertible `M` expected; not checked here): the constant part stays,
    /// and the new coefficient of `y_j` is `sum_i M[i][j] A_{i+1}`.
    pub fn transform(&self, m_mat: &QMatrix) -> Pencil {
        assert_eq!(m_mat.nrows(), self.n);
        assert_eq!(m_mat.ncols(), self.n);
        let mut mats = vec![self.mats[0].clone()];
        for j in 0..self.n {
            let mut acc = QMatrix::zero(self.m, self.m);
            for i in 0..self.n {
                let c = m_mat.get(i, j);
                if c.is_zero() {
                    continue;
                }
                for r in 0..self.m {
                    for s in 0..self.m {
                        let v = acc.get(r, s) + c * self.mats[i + 1].get(r, s);
                        acc.set(r, s, v);
                    }
                }
            }
            mats.push(acc);
        }
        Pencil {
            m: self.m,
            n: self.n,
            mats,
        }
    }

    /// The slice pencil in one fewer variable obtained by pinning the first
    /// coordinate: `(A_0 + t A_1, A_2, ..., A_n)`. Requires `n >= 1`.
    pub fn fix_first(&self, t: &Rat) -> Pencil {
        assert!(self.n >= 1, "no variable to pin");
        let mut a0 = self.mats[0].clone();
        for i in 0..self.m {
            for j in 0..self.m {
                let v = a0.get(i, j) + t * self.mats[1].get(i, j);
                a0.set(i, j, v);
            }
        }
        let mut mats = vec![a0];
        mats.extend(self.mats[2..].iter().cloned());
        Pencil {
            m: self.m,
            n: self.n - 1,
            mats,
        }
    }

    /// Rank of `A(x)` at a rational point.
    pub fn rank_at_point(&self, x: &[Rat]) -> usize {
        self.eval(x).rank()
    }

    /// `true` when `A(x)` is positive semidefinite at the point.
    pub fn is_psd_at(&self, x: &[Rat]) -> bool {
        self.eval(x).is_psd()
    }
}

/// A uniformly random rational with numerator in `[-bound, bound]` and
/// denominator in `[1, bound]`.
pub fn random_rat<R: Rng>(rng: &mut R, bound: u64) -> Rat {
    let bound = bound.max(1) as i64;
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    Rat::new(Int::from(num), Int::from(den))
}

/// A random symmetric matrix with entries from [`random_rat`].
pub fn random_symmetric<R: Rng>(rng: &mut R, m: usize, bound: u64) -> QMatrix {
    let mut a = QMatrix::zero(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = random_rat(rng, bound);
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    a
}

/// A random pencil with entries bounded by `bound`.
pub fn random_pencil<R: Rng>(rng: &mut R, m: usize, n: usize, bound: u64) -> Pencil {
    let mats = (0..=n).map(|_| random_symmetric(rng, m, bound)).collect();
    Pencil::new(m, n, mats).expect("random construction is well-formed")
}

/// A pencil guaranteed feasible: random linear parts, with the constant
/// part chosen so that `A(x*) = I` at a random rational point `x*`.
pub fn random_feasible_pencil<R: Rng>(
    rng: &mut R,
    m: usize,
    n: usize,
    bound: u64,
) -> (Pencil, Vec<Rat>) {
    let linear: Vec<QMatrix> = (0..n).map(|_| random_symmetric(rng, m, bound)).collect();
    let witness: Vec<Rat> = (0..n).map(|_| random_rat(rng, bound)).collect();
    let mut a0 = QMatrix::identity(m);
    for (k, xk) in witness.iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                let v = a0.get(i, j) - xk * linear[k].get(i, j);
                a0.set(i, j, v);
            }
        }
    }
    let mut mats = vec![a0];
    mats.extend(linear);
    let p = Pencil::new(m, n, mats).expect("feasible construction is well-formed");
    debug_assert!(p.eval(&witness) == QMatrix::identity(m));
    (p, witness)
}

/// A pencil guaranteed infeasible: a random pencil extended by one extra
/// row and column that are identically zero except for a constant `-1` on
/// the new diagonal entry, so every evaluation has a negative eigenvalue.
pub fn random_infeasible_pencil<R: Rng>(
    rng: &mut R,
    m: usize,
    n: usize,
    bound: u64,
) -> Pencil {
    assert!(m >= 2, "need room for the forced negative entry");
    let inner = random_pencil(rng, m - 1, n, bound);
    let lift = |a: &QMatrix, constant: bool| {
        let mut out = QMatrix::zero(m, m);
        for i in 0..m - 1 {
            for j in 0..m - 1 {
                out.set(i, j, a.get(i, j).clone());
            }
        }
        if constant {
            out.set(m - 1, m - 1, -Rat::one());
        }
        out
    };
    let mats = inner
        .matrices()
        .iter()
        .enumerate()
        .map(|(k, a)| lift(a, k == 0))
        .collect();
    Pencil::new(m, n, mats).expect("infeasible construction is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::seed::SeedStream;

    fn simple_pencil() -> Pencil {
        // A(x) = [[1, x1], [x1, x2]]
        let a0 = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0)],
        ]);
        let a1 = QMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ]);
        let a2 = QMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ]);
        Pencil::new(2, 2, vec![a0, a1, a2]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_input() {
        let asym = QMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(2), rat_int(0)],
        ]);
        let id = QMatrix::identity(2);
        assert!(matches!(
            Pencil::new(2, 1, vec![id.clone(), asym]),
            Err(PencilError::NotSymmetric { index: 1, .. })
        ));
        assert!(matches!(
            Pencil::new(2, 1, vec![id.clone()]),
            Err(PencilError::WrongMatrixCount { .. })
        ));
        assert!(matches!(
            Pencil::new(3, 0, vec![id]),
            Err(PencilError::WrongShape { .. })
        ));
    }

    #[test]
    fn evaluation_and_psd() {
        let p = simple_pencil();
        let a = p.eval(&[rat(1, 2), rat_int(1)]);
        assert_eq!(*a.get(0, 1), rat(1, 2));
        assert_eq!(*a.get(1, 1), rat_int(1));
        assert!(p.is_psd_at(&[rat(1, 2), rat_int(1)])); // det = 3/4 > 0
        assert!(!p.is_psd_at(&[rat_int(2), rat_int(1)])); // det = -3
        assert_eq!(p.rank_at_point(&[rat_int(0), rat_int(0)]), 1);
    }

    #[test]
    fn entry_polys_match_evaluation() {
        let p = simple_pencil();
        let pt = [rat(2, 3), rat(-1, 5)];
        for i in 0..2 {
            for j in 0..2 {
                let poly = p.entry_poly(i, j, 2, MonomialOrder::GrevLex);
                assert_eq!(poly.eval(&pt), *p.eval(&pt).get(i, j));
            }
        }
    }

    #[test]
    fn transform_matches_substitution() {
        let p = simple_pencil();
        let m = QMatrix::from_rows(vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ]);
        let q = p.transform(&m);
        let y = [rat(1, 3), rat(2, 7)];
        let x = m.mul_vec(&y);
        assert_eq!(q.eval(&y), p.eval(&x));
    }

    #[test]
    fn fix_first_pins_coordinate() {
        let p = simple_pencil();
        let t = rat(5, 4);
        let sliced = p.fix_first(&t);
        assert_eq!(sliced.nvars(), 1);
        let x2 = rat(-3, 2);
        assert_eq!(sliced.eval(&[x2.clone()]), p.eval(&[t, x2]));
    }

    #[test]
    fn random_generators_have_promised_properties() {
        let stream = SeedStream::new(7);
        for k in 0..5 {
            let mut rng = stream.rng("feasible", &[k]);
            let (p, witness) = random_feasible_pencil(&mut rng, 3, 2, 10);
            assert!(p.is_psd_at(&witness));
            assert_eq!(p.rank_at_point(&witness), 3);

            let mut rng = stream.rng("infeasible", &[k]);
            let q = random_infeasible_pencil(&mut rng, 3, 2, 10);
            // the forced corner keeps every evaluation indefinite
            let probe = [rat_int(k as i64), rat_int(-(k as i64))];
            assert!(!q.is_psd_at(&probe));
            assert_eq!(*q.eval(&probe).get(2, 2), rat_int(-1));
        }
    }
}
