//! Incidence systems pinning a kernel of prescribed size onto the pencil.
//!
//! For a target rank `r` and a set `iota` of `m - r` rows, the incidence
//! system couples the pencil variables `x` with a tall kernel matrix `Y`
//! (size `m x (m-r)`) through `A(x) Y = 0`, normalized by `Y_iota = I`:
//! solutions project exactly onto the points where the rank of `A(x)` drops
//! to `r` or below (with kernel visible on the chosen rows).
//!
//! Key operations:
//! - the full equation set (all entries of `A(x) Y` plus the normalization),
//! - the reduced equation set that discards entries made redundant by the
//!   symmetry of `A` (row `i` against column `j` is kept only when the
//!   relabeled position of `i` is at least `j`),
//! - the substituted system in the small ring where `Y_iota = I` has been
//!   eliminated, leaving bilinear equations in `x` and the free `y` block,
//! - a regularity check (smoothness and expected dimension of the
//!   substituted system) used to validate genericity assumptions.

use crate::groebner::{buchberger, GbError, GroebnerBasis, Limits, ZeroDimQuotient};
use crate::multipoly::{poly_matrix_det, Monomial, MonomialOrder, MultiPoly};
use crate::pencil::Pencil;
use crate::qmatrix::QMatrix;
use crate::rat::Rat;
use itertools::Itertools;
use num::One;

/// Outcome of the regularity check for one row choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    /// The incidence system has no solutions at all.
    EmptyVariety,
    /// Smooth of the expected dimension.
    Regular,
    /// The variety exists but has the wrong dimension.
    WrongDimension { found: isize, expected: isize },
    /// The Jacobian drops rank somewhere on the variety.
    SingularLocus,
}

/// The incidence system for one pencil, target rank, and row choice.
#[derive(Clone, Debug)]
pub struct Incidence {
    pencil: Pencil,
    r: usize,
    /// Pinned rows, ascending; length `m - r`.
    iota: Vec<usize>,
    /// Complement rows, ascending; length `r`.
    complement: Vec<usize>,
    /// Relabeled position of each original row: pinned rows first (in
    /// order), then complement rows (in order).
    position: Vec<usize>,
}

impl Incidence {
    /// Builds the system; `iota` must hold `m - r` distinct row indices.
    pub fn new(pencil: &Pencil, r: usize, iota: &[usize]) -> Self {
        let m = pencil.size();
        assert!(r < m, "target rank must be below the matrix size");
        let mut iota: Vec<usize> = iota.to_vec();
        iota.sort_unstable();
        iota.dedup();
        assert_eq!(iota.len(), m - r, "need m - r distinct pinned rows");
        assert!(iota.iter().all(|&i| i < m), "row index out of range");
        let complement: Vec<usize> = (0..m).filter(|i| !iota.contains(i)).collect();
        let mut position = vec![0usize; m];
        for (s, &row) in iota.iter().enumerate() {
            position[row] = s;
        }
        for (k, &row) in complement.iter().enumerate() {
            position[row] = iota.len() + k;
        }
        Incidence {
            pencil: pencil.clone(),
            r,
            iota,
            complement,
            position,
        }
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn rank_target(&self) -> usize {
        self.r
    }

    pub fn pinned_rows(&self) -> &[usize] {
        &self.iota
    }

    /// Corank `m - r` (kernel width).
    pub fn corank(&self) -> usize {
        self.pencil.size() - self.r
    }

    /// Equation count of the reduced system: all of `A(x)Y` except the
    /// symmetry-redundant entries, plus the normalization block.
    pub fn reduced_count(&self) -> usize {
        let (m, r) = (self.pencil.size(), self.r);
        m * (m - r) + (m - r + 1) * (m - r) / 2
    }

    /// Number of discarded redundant equations.
    pub fn redundant_count(&self) -> usize {
        let k = self.corank();
        k * (k - 1) / 2
    }

    /// Equation count of the substituted system.
    pub fn substituted_count(&self) -> usize {
        let (m, r) = (self.pencil.size(), self.r);
        (m - r) * (m + r + 1) / 2
    }

    /// Variables of the full ring: `x` then all entries of `Y`, row-major.
    pub fn full_ring_vars(&self) -> usize {
        self.pencil.nvars() + self.pencil.size() * self.corank()
    }

    /// Variables of the substituted ring: `x` then the free `y` block
    /// (complement rows, row-major).
    pub fn small_ring_vars(&self) -> usize {
        self.pencil.nvars() + self.r * self.corank()
    }

    fn yvar_full(&self, row: usize, col: usize) -> usize {
        self.pencil.nvars() + row * self.corank() + col
    }

    /// Index of the free variable `y[k][col]` for complement slot `k`.
    pub fn yvar_small(&self, k: usize, col: usize) -> usize {
        self.pencil.nvars() + k * self.corank() + col
    }

    /// Entry `(i, j)` of `A(x) Y` in the full ring.
    fn product_entry_full(&self, i: usize, j: usize, ord: MonomialOrder) -> MultiPoly {
        let total = self.full_ring_vars();
        let m = self.pencil.size();
        let mut acc = MultiPoly::zero(total, ord);
        for k in 0..m {
            let a = self.pencil.entry_poly(i, k, total, ord);
            if a.is_zero() {
                continue;
            }
            let y = MultiPoly::var(total, ord, self.yvar_full(k, j));
            acc = acc.add(&a.mul(&y));
        }
        acc
    }

    /// The full system: every entry of `A(x) Y`, then `Y_iota - I`.
    pub fn full_system(&self, ord: MonomialOrder) -> Vec<MultiPoly> {
        let total = self.full_ring_vars();
        let m = self.pencil.size();
        let k = self.corank();
        let mut out = Vec::with_capacity(m * k + k * k);
        for i in 0..m {
            for j in 0..k {
                out.push(self.product_entry_full(i, j, ord));
            }
        }
        for (s, &row) in self.iota.iter().enumerate() {
            for j in 0..k {
                let mut p = MultiPoly::var(total, ord, self.yvar_full(row, j));
                if s == j {
                    p = p.sub(&MultiPoly::one(total, ord));
                }
                out.push(p);
            }
        }
        out
    }

    /// The reduced system: entries of `A(x) Y` at row `i`, column `j` with
    /// relabeled position of `i` at least `j`, then `Y_iota - I`.
    pub fn reduced_system(&self, ord: MonomialOrder) -> Vec<MultiPoly> {
        let total = self.full_ring_vars();
        let m = self.pencil.size();
        let k = self.corank();
        let mut out = Vec::with_capacity(self.reduced_count());
        for i in 0..m {
            for j in 0..k {
                if self.position[i] >= j {
                    out.push(self.product_entry_full(i, j, ord));
                }
            }
        }
        for (s, &row) in self.iota.iter().enumerate() {
            for j in 0..k {
                let mut p = MultiPoly::var(total, ord, self.yvar_full(row, j));
                if s == j {
                    p = p.sub(&MultiPoly::one(total, ord));
                }
                out.push(p);
            }
        }
        debug_assert_eq!(out.len(), self.reduced_count());
        out
    }

    /// The discarded entries (relabeled position below the column index);
    /// each lies in the ideal of the reduced system by the symmetry of `A`.
    pub fn redundant_system(&self, ord: MonomialOrder) -> Vec<MultiPoly> {
        let m = self.pencil.size();
        let k = self.corank();
        let mut out = Vec::with_capacity(self.redundant_count());
        for i in 0..m {
            for j in 0..k {
                if self.position[i] < j {
                    out.push(self.product_entry_full(i, j, ord));
                }
            }
        }
        debug_assert_eq!(out.len(), self.redundant_count());
        out
    }

    /// Entry `(i, j)` of `A(x) Y` in the small ring after substituting
    /// `Y_iota = I`: pinned rows contribute constants, complement rows
    /// contribute free variables.
    fn product_entry_small(&self, i: usize, j: usize, ord: MonomialOrder) -> MultiPoly {
        let total = self.small_ring_vars();
        let mut acc = MultiPoly::zero(total, ord);
        // pinned rows: Y[iota_s][j] = delta(s, j)
        let row = self.iota[j];
        acc = acc.add(&self.pencil.entry_poly(i, row, total, ord));
        for (k, &crow) in self.complement.iter().enumerate() {
            let a = self.pencil.entry_poly(i, crow, total, ord);
            if a.is_zero() {
                continue;
            }
            let y = MultiPoly::var(total, ord, self.yvar_small(k, j));
            acc = acc.add(&a.mul(&y));
        }
        acc
    }

    /// The substituted system: the kept entries of `A(x) Y` with
    /// `Y_iota = I` eliminated. Bilinear in `(x, y)`; kept entries appear
    /// row-major.
    pub fn substituted_system(&self, ord: MonomialOrder) -> Vec<MultiPoly> {
        let m = self.pencil.size();
        let k = self.corank();
        let mut out = Vec::with_capacity(self.substituted_count());
        for i in 0..m {
            for j in 0..k {
                if self.position[i] >= j {
                    out.push(self.product_entry_small(i, j, ord));
                }
            }
        }
        debug_assert_eq!(out.len(), self.substituted_count());
        out
    }

    /// Checks that the substituted system cuts out a smooth variety of the
    /// expected dimension (equivalently for the reduced system, which adds
    /// one pinned variable per extra equation).
    ///
    /// When the base ideal is zero-dimensional, the Jacobian-minor
    /// condition is decided by linear algebra in the quotient instead of a
    /// second basis computation.
    pub fn regularity(&self, limits: &Limits) -> Result<Regularity, GbError> {
        let ord = MonomialOrder::GrevLex;
        let sys = self.substituted_system(ord);
        let gb = buchberger(&sys, limits)?;
        if gb.is_trivial() {
            return Ok(Regularity::EmptyVariety);
        }
        let nvars = self.small_ring_vars();
        let neq = self.substituted_count();
        let expected = nvars as isize - neq as isize;
        let found = gb.dimension();
        if found != expected {
            return Ok(Regularity::WrongDimension { found, expected });
        }
        // Jacobian of the substituted system over all small-ring variables.
        let jac: Vec<Vec<MultiPoly>> = sys
            .iter()
            .map(|g| (0..nvars).map(|v| g.derivative(v)).collect())
            .collect();
        if neq > nvars {
            return Ok(Regularity::SingularLocus);
        }
        let minors: Vec<MultiPoly> = (0..nvars)
            .combinations(neq)
            .map(|cols| {
                let rows: Vec<Vec<MultiPoly>> = jac
                    .iter()
                    .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                    .collect();
                poly_matrix_det(nvars, ord, &rows)
            })
            .collect();
        let regular = if found == 0 {
            minors_span_quotient(&gb, &minors)
        } else {
            let mut gens = sys;
            gens.extend(minors);
            buchberger(&gens, limits)?.is_trivial()
        };
        Ok(if regular {
            Regularity::Regular
        } else {
            Regularity::SingularLocus
        })
    }
}

/// `true` when the residues of `polys` generate the unit ideal in the
/// zero-dimensional quotient: the linear span of `poly * basis_monomial`
/// normal forms must fill the whole quotient space.
fn minors_span_quotient(gb: &GroebnerBasis, polys: &[MultiPoly]) -> bool {
    let Some(quot) = ZeroDimQuotient::new(gb.clone()) else {
        return false;
    };
    let d = quot.dim();
    if d == 0 {
        return true;
    }
    let basis = quot.basis_monomials().to_vec();
    let nvars = gb.nvars();
    let ord = gb.order();
    let mut span = QMatrix::zero(polys.len() * d, d);
    let mut row = 0;
    let index: std::collections::BTreeMap<Monomial, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    for p in polys {
        for b in &basis {
            let shifted = p.mul(&MultiPoly::new(
                nvars,
                ord,
                vec![(b.clone(), Rat::one())],
            ));
            let nf = gb.normal_form(&shifted);
            for (mono, c) in nf.terms() {
                span.set(row, index[mono], c.clone());
            }
            row += 1;
        }
    }
    span.rank() == d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::random_pencil;
    use crate::qmatrix::QMatrix;
    use crate::rat::rat_int;
    use crate::seed::SeedStream;

    fn small_pencil() -> Pencil {
        // A(x) = [[1 + x1, x2], [x2, 1 - x1]]
        let a0 = QMatrix::identity(2);
        let a1 = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(-1)],
        ]);
        let a2 = QMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ]);
        Pencil::new(2, 2, vec![a0, a1, a2]).unwrap()
    }

    #[test]
    fn counts_match_formulas() {
        for (m, n) in [(2usize, 2usize), (3, 2), (4, 3), (5, 2)] {
            let stream = SeedStream::new(99);
            let mut rng = stream.rng("pencil", &[m as u64, n as u64]);
            let p = random_pencil(&mut rng, m, n, 5);
            for r in 0..m {
                let iota: Vec<usize> = (0..m - r).collect();
                let inc = Incidence::new(&p, r, &iota);
                let k = m - r;
                assert_eq!(inc.reduced_count(), m * k + k * (k + 1) / 2);
                assert_eq!(inc.substituted_count(), k * (m + r + 1) / 2);
                assert_eq!(inc.redundant_count(), k * (k - 1) / 2);
                assert_eq!(
                    inc.full_system(MonomialOrder::GrevLex).len(),
                    m * k + k * k
                );
                assert_eq!(
                    inc.reduced_system(MonomialOrder::GrevLex).len()
                        + inc.redundant_system(MonomialOrder::GrevLex).len(),
                    inc.full_system(MonomialOrder::GrevLex).len()
                );
            }
        }
    }

    #[test]
    fn substituted_system_is_bilinear() {
        let p = small_pencil();
        let inc = Incidence::new(&p, 1, &[0]);
        let n = p.nvars();
        for g in inc.substituted_system(MonomialOrder::GrevLex) {
            for (mono, _) in g.terms() {
                let xdeg: u32 = (0..n).map(|v| u32::from(mono.exp(v))).sum();
                let ydeg: u32 = (n..inc.small_ring_vars())
                    .map(|v| u32::from(mono.exp(v)))
                    .sum();
                assert!(xdeg <= 1 && ydeg <= 1, "term {:?} not bilinear", mono);
            }
        }
    }

    #[test]
    fn reduced_equals_full_ideal() {
        // mutual containment of the two ideals for a small generic case
        let stream = SeedStream::new(5);
        let mut rng = stream.rng("lemma", &[0]);
        let p = random_pencil(&mut rng, 3, 2, 4);
        let inc = Incidence::new(&p, 1, &[0, 2]);
        let ord = MonomialOrder::GrevLex;
        let full = inc.full_system(ord);
        let red = inc.reduced_system(ord);
        let gb_full = buchberger(&full, &Limits::default()).unwrap();
        let gb_red = buchberger(&red, &Limits::default()).unwrap();
        for g in &red {
            assert!(gb_full.contains(g));
        }
        for g in &full {
            assert!(gb_red.contains(g), "full generator escapes reduced ideal");
        }
    }

    #[test]
    fn regularity_of_generic_small_case() {
        let stream = SeedStream::new(12);
        let mut rng = stream.rng("reg", &[1]);
        // one variable, 2x2: rank-1 locus is finitely many points
        let p = random_pencil(&mut rng, 2, 1, 6);
        let inc = Incidence::new(&p, 1, &[0]);
        let reg = inc.regularity(&Limits::default()).unwrap();
        assert_eq!(reg, Regularity::Regular);
    }

    #[test]
    fn rank_zero_pins_whole_kernel() {
        let p = small_pencil();
        let inc = Incidence::new(&p, 0, &[0, 1]);
        // rank target 0 has no free y variables: system is linear in x
        assert_eq!(inc.small_ring_vars(), p.nvars());
        let sys = inc.substituted_system(MonomialOrder::GrevLex);
        assert_eq!(sys.len(), 3);
        assert!(sys
            .iter()
            .all(|g| g.total_degree().unwrap_or(0) <= 1));
        // A(x) = 0 forces x1 = -1 and x1 = 1: empty
        let gb = buchberger(&sys, &Limits::default()).unwrap();
        assert!(gb.is_trivial());
    }
}
