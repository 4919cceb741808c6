//! Exact positive-semidefiniteness and rank certification along a
//! parametrized family of candidate points.
//!
//! For the symmetric pencil `A(x)`, write
//! `det(A(x) + s I) = s^m + f_1(x) s^(m-1) + ... + f_m(x)`;
//! each `f_k` is the sum of the `k x k` principal minors. A symmetric
//! matrix is positive semidefinite exactly when all `f_k` are nonnegative,
//! and its rank is `m` minus the length of the trailing chain of vanishing
//! coefficients `f_m, f_(m-1), ...`.
//!
//! Composing the `f_k` with a rational parametrization and clearing the
//! common denominator turns both criteria into exact sign evaluations of
//! integer polynomials at real algebraic numbers. An independent
//! elimination-based rank computation on the composed matrix serves as a
//! cross-check.

use crate::multipoly::{poly_matrix_det, MonomialOrder, MultiPoly};
use crate::pencil::Pencil;
use crate::ratpar::Parametrization;
use crate::realroots::RealRoot;
use crate::unipoly::UniPoly;
use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FeasError {
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Coefficients `f_1 .. f_m` of the shifted determinant.
#[derive(Clone, Debug)]
pub struct CharCoeffs {
    m: usize,
    coeffs: Vec<MultiPoly>,
}

impl CharCoeffs {
    pub fn new(pencil: &Pencil) -> Self {
        let m = pencil.size();
        let n = pencil.nvars();
        let ord = MonomialOrder::GrevLex;
        let entries: Vec<Vec<MultiPoly>> = (0..m)
            .map(|i| (0..m).map(|j| pencil.entry_poly(i, j, n, ord)).collect())
            .collect();
        let coeffs = (1..=m)
            .map(|k| {
                let mut acc = MultiPoly::zero(n, ord);
                for rows in (0..m).combinations(k) {
                    let sub: Vec<Vec<MultiPoly>> = rows
                        .iter()
                        .map(|&i| rows.iter().map(|&j| entries[i][j].clone()).collect())
                        .collect();
                    acc = acc.add(&poly_matrix_det(n, ord, &sub));
                }
                acc
            })
            .collect();
        CharCoeffs { m, coeffs }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// `f_k` for `1 <= k <= m`.
    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k - 1]
    }

    /// Values `f_1(x) .. f_m(x)` at a rational point.
    pub fn eval_at(&self, x: &[crate::rat::Rat]) -> Vec<crate::rat::Rat> {
        self.coeffs.iter().map(|f| f.eval(x)).collect()
    }
}

/// Substitutes the parametrized point into a polynomial and clears the
/// denominator: returns the numerator reduced modulo the defining
/// polynomial together with the cleared power `d` (the total degree), so
/// that `poly(x(t)) = numerator(t) / q_0(t)^d` at every root.
pub fn compose_with_param(poly: &MultiPoly, param: &Parametrization) -> (UniPoly, usize) {
    assert_eq!(poly.nvars(), param.n(), "variable count mismatch");
    assert!(!param.is_empty(), "empty parametrization has no points");
    let qn1 = param.defining_poly();
    let q0 = param.denominator();
    let d = poly.total_degree().unwrap_or(0) as usize;

    // power tables for the denominator and each coordinate numerator
    let pow_table = |base: &UniPoly, upto: usize| -> Vec<UniPoly> {
        let mut t = Vec::with_capacity(upto + 1);
        t.push(UniPoly::one());
        for k in 1..=upto {
            t.push(t[k - 1].mul_mod(base, qn1));
        }
        t
    };
    let q0_pows = pow_table(q0, d);
    let max_exp: Vec<usize> = (0..param.n())
        .map(|v| {
            poly.terms()
                .iter()
                .map(|(mono, _)| mono.exp(v) as usize)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let qi_pows: Vec<Vec<UniPoly>> = param
        .numerators()
        .iter()
        .zip(&max_exp)
        .map(|(q, &e)| pow_table(q, e))
        .collect();

    let mut acc = UniPoly::zero();
    for (mono, c) in poly.terms() {
        let mut term = UniPoly::constant(c.clone());
        let mut used = 0usize;
        for v in 0..param.n() {
            let e = mono.exp(v) as usize;
            if e > 0 {
                term = term.mul_mod(&qi_pows[v][e], qn1);
                used += e;
            }
        }
        term = term.mul_mod(&q0_pows[d - used], qn1);
        acc = acc.add(&term);
    }
    (acc.rem(qn1), d)
}

/// Verdict for one real root of a parametrization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    /// Position in the ascending list of real roots.
    pub index: usize,
    /// All characteristic coefficients nonnegative at the point.
    pub psd: bool,
    /// Rank of the pencil at the point.
    pub rank: usize,
}

/// Classifies every real root of the parametrization (ascending order).
pub fn evaluate_roots(
    pencil: &Pencil,
    param: &Parametrization,
) -> Result<Vec<RootReport>, FeasError> {
    if param.is_empty() {
        return Ok(Vec::new());
    }
    let chars = CharCoeffs::new(pencil);
    let composed: Vec<(UniPoly, usize)> = (1..=pencil.size())
        .map(|k| compose_with_param(chars.coeff(k), param))
        .collect();
    let q0 = param.denominator();
    let mut out = Vec::new();
    for (index, mut root) in param.real_roots().into_iter().enumerate() {
        let q0_sign = root.sign_of(q0);
        if q0_sign == 0 {
            return Err(FeasError::Internal(
                "denominator vanishes at a root of the defining polynomial".into(),
            ));
        }
        let signs: Vec<i8> = composed
            .iter()
            .map(|(num, d)| {
                let s = root.sign_of(num);
                if d % 2 == 1 {
                    s * q0_sign
                } else {
                    s
                }
            })
            .collect();
        let psd = signs.iter().all(|&s| s >= 0);
        let trailing = signs.iter().rev().take_while(|&&s| s == 0).count();
        out.push(RootReport {
            index,
            psd,
            rank: pencil.size() - trailing,
        });
    }
    Ok(out)
}

/// First accepted root (all characteristic coefficients nonnegative),
/// if any.
pub fn check_lmi(
    pencil: &Pencil,
    param: &Parametrization,
) -> Result<Option<RootReport>, FeasError> {
    Ok(evaluate_roots(pencil, param)?.into_iter().find(|r| r.psd))
}

/// Rank of `A(x(t))` at one real root, via Gaussian elimination on the
/// denominator-cleared composed matrix with exact sign tests at the root.
/// Cross-multiplication keeps everything in polynomial arithmetic modulo
/// the defining polynomial; scaling rows by values nonzero at the root
/// leaves zero-ness at the root intact.
pub fn rank_at_by_elimination(
    pencil: &Pencil,
    param: &Parametrization,
    root: &mut RealRoot,
) -> usize {
    let m = pencil.size();
    let qn1 = param.defining_poly();
    let mut b = param.composed_matrix(pencil);
    let mut rank = 0;
    let mut next_row = 0;
    for col in 0..m {
        let pivot_row = (next_row..m).find(|&i| root.sign_of(&b[i][col]) != 0);
        let Some(pivot_row) = pivot_row else {
            continue;
        };
        b.swap(next_row, pivot_row);
        let pivot = b[next_row][col].clone();
        for i in next_row + 1..m {
            let factor = b[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..m {
                b[i][j] = b[i][j]
                    .mul_mod(&pivot, qn1)
                    .sub(&b[next_row][j].mul_mod(&factor, qn1))
                    .rem(qn1);
            }
        }
        rank += 1;
        next_row += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::random_pencil;
    use crate::qmatrix::QMatrix;
    use crate::rat::rat_int;
    use crate::seed::SeedStream;
    use num::{Signed, Zero};

    fn diag_pencil() -> Pencil {
        // A(x) = diag(1 + x, 1 - x)
        let a0 = QMatrix::identity(2);
        let a1 = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(-1)],
        ]);
        Pencil::new(2, 1, vec![a0, a1]).unwrap()
    }

    fn line_param(defining: &[i64]) -> Parametrization {
        Parametrization::from_algebraic_coords(
            1,
            &UniPoly::from_ints(defining),
            &[UniPoly::from_ints(&[0, 1])],
            None,
        )
        .unwrap()
    }

    #[test]
    fn char_coeffs_of_diagonal_pencil() {
        let chars = CharCoeffs::new(&diag_pencil());
        // f1 = trace = 2, f2 = det = 1 - x^2
        let at = |x: i64| chars.eval_at(&[rat_int(x)]);
        assert_eq!(at(0), vec![rat_int(2), rat_int(1)]);
        assert_eq!(at(2), vec![rat_int(2), rat_int(-3)]);
        assert_eq!(at(1), vec![rat_int(2), rat_int(0)]);
    }

    #[test]
    fn signs_match_inertia_on_random_points() {
        let stream = SeedStream::new(123);
        for case in 0..20u64 {
            let mut rng = stream.rng("inertia", &[case]);
            let p = random_pencil(&mut rng, 3, 2, 6);
            let chars = CharCoeffs::new(&p);
            let x = vec![
                crate::pencil::random_rat(&mut rng, 5),
                crate::pencil::random_rat(&mut rng, 5),
            ];
            let values = chars.eval_at(&x);
            let (pos, neg, _zero) = p.eval(&x).symmetric_inertia();
            let psd_by_inertia = neg == 0;
            let psd_by_signs = values.iter().all(|v| !v.is_negative());
            assert_eq!(psd_by_inertia, psd_by_signs, "case {case}");
            let trailing = values.iter().rev().take_while(|v| v.is_zero()).count();
            assert_eq!(3 - trailing, pos + neg, "rank mismatch case {case}");
        }
    }

    #[test]
    fn root_reports_classify_psd_and_rank() {
        // roots x = 0 (inside, rank 2) and x = 3/2 (outside)
        let p = diag_pencil();
        let param = line_param(&[0, -3, 2]); // t(2t - 3)
        let reports = evaluate_roots(&p, &param).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports[0].psd && reports[0].rank == 2);
        assert!(!reports[1].psd);
        let first = check_lmi(&p, &param).unwrap().unwrap();
        assert_eq!(first.index, 0);
        // boundary point x = 1: rank drops to 1
        let boundary = line_param(&[-1, 1]);
        let reports = evaluate_roots(&p, &boundary).unwrap();
        assert_eq!(reports, vec![RootReport { index: 0, psd: true, rank: 1 }]);
    }

    #[test]
    fn elimination_rank_agrees() {
        let p = diag_pencil();
        for (defining, expected) in [
            (vec![-1i64, 1], vec![1usize]),     // x = 1
            (vec![0, -3, 2], vec![2, 2]),       // x = 0 and x = 3/2
            (vec![-2, 0, 1], vec![2, 2]),       // x = +-sqrt(2)
        ] {
            let param = line_param(&defining);
            let reports = evaluate_roots(&p, &param).unwrap();
            let mut roots = param.real_roots();
            for (report, root) in reports.iter().zip(roots.iter_mut()) {
                assert_eq!(
                    rank_at_by_elimination(&p, &param, root),
                    expected[report.index]
                );
                assert_eq!(report.rank, expected[report.index]);
            }
        }
    }

    #[test]
    fn composition_clears_denominator_correctly() {
        // f = x^2 on points x = t over t^2 - 2: f(x(t)) = 2 at both roots
        let param = line_param(&[-2, 0, 1]);
        let n = 1;
        let ord = MonomialOrder::GrevLex;
        let f = MultiPoly::var(n, ord, 0).mul(&MultiPoly::var(n, ord, 0));
        let (num, d) = compose_with_param(&f, &param);
        assert_eq!(d, 2);
        // numerator / q0^2 must equal 2 at t = sqrt(2): check
        // numerator - 2 q0^2 vanishes modulo the defining polynomial
        let q0 = param.denominator();
        let diff = num
            .sub(&q0.mul_mod(q0, param.defining_poly()).scale(&rat_int(2)))
            .rem(param.defining_poly());
        assert!(diff.is_zero(), "difference {diff:?}");
    }
}
