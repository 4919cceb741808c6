//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending monomial order, so the leading term
//! is always first. Each polynomial carries the order it is sorted under
//! (graded reverse lexicographic or lexicographic); mixing orders in one
//! operation is a bug and is checked. Coefficient arithmetic is exact.
//!
//! Key operations:
//! - ring arithmetic (`add`, `sub`, `mul`, `mul_term`) preserving sortedness,
//! - partial derivatives and exact evaluation,
//! - primitive integer normalization (content 1, positive leading
//!   coefficient) used to keep Groebner-basis coefficients integral.

use crate::rat::{content, denominator_lcm, Int, Rat};
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial; index `i` is the exponent of variable `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u16>);

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.0)
    }
}

impl Monomial {
    /// The constant monomial in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    /// Exponent of variable `var`.
    pub fn exp(&self, var: usize) -> u16 {
        self.0[var]
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// `true` when `self` divides `other` componentwise.
    pub fn divides(&self, other: &Self) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise quotient; caller must ensure divisibility.
    pub fn div(&self, other: &Self) -> Self {
        debug_assert!(other.divides(self));
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Componentwise maximum (least common multiple).
    pub fn lcm(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// `true` when no variable appears in both monomials.
    pub fn is_coprime_with(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Monomial comparison rule; `Greater` sorts toward the leading position.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic: compare total degree, then the
    /// rightmost differing exponent decides (smaller exponent wins).
    GrevLex,
    /// Lexicographic with variable 0 most significant.
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.0.len(), b.0.len());
        match self {
            MonomialOrder::GrevLex => {
                match a.total_degree().cmp(&b.total_degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => {}
                        // rightmost difference: the smaller exponent is larger
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Lex => {
                for (x, y) in a.0.iter().zip(&b.0) {
                    match x.cmp(y) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// A sparse multivariate polynomial with terms sorted descending under a
/// fixed monomial order.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    ord: MonomialOrder,
    /// `(monomial, coefficient)` pairs, descending, no zero coefficients.
    terms: Vec<(Monomial, Rat)>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if !a.is_one() || m.is_one() {
                write!(f, "{}", crate::rat::rat_to_string(&a))?;
                if !m.is_one() {
                    write!(f, "*")?;
                }
            }
            let mut sep = "";
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "{}x{}", sep, v)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
                sep = "*";
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    /// Builds a polynomial from raw terms: sorts, combines duplicates, and
    /// drops zero coefficients.
    pub fn new(nvars: usize, ord: MonomialOrder, mut terms: Vec<(Monomial, Rat)>) -> Self {
        debug_assert!(terms.iter().all(|(m, _)| m.nvars() == nvars));
        terms.sort_unstable_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Rat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
            if out.last().is_some_and(|(_, c)| c.is_zero()) {
                out.pop();
            }
        }
        MultiPoly {
            nvars,
            ord,
            terms: out,
        }
    }

    pub fn zero(nvars: usize, ord: MonomialOrder) -> Self {
        MultiPoly {
            nvars,
            ord,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, ord: MonomialOrder, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero(nvars, ord);
        }
        MultiPoly {
            nvars,
            ord,
            terms: vec![(Monomial::one(nvars), c)],
        }
    }

    pub fn one(nvars: usize, ord: MonomialOrder) -> Self {
        Self::constant(nvars, ord, Rat::one())
    }

    /// The variable `x_var` as a polynomial.
    pub fn var(nvars: usize, ord: MonomialOrder, var: usize) -> Self {
        MultiPoly {
            nvars,
            ord,
            terms: vec![(Monomial::var(nvars, var), Rat::one())],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.ord
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `true` when the polynomial is a nonzero constant.
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading monomial; panics on zero.
    pub fn leading_monomial(&self) -> &Monomial {
        &self.terms.first().expect("leading term of zero").0
    }

    /// Leading coefficient; panics on zero.
    pub fn leading_coeff(&self) -> &Rat {
        &self.terms.first().expect("leading term of zero").1
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    /// Re-sorts the terms under a different monomial order.
    /// Reinterprets the polynomial in a larger ring; the new trailing
    /// variables get exponent zero everywhere. Relative term order is
    /// unchanged for both supported orders.
    pub fn extended(&self, new_nvars: usize) -> Self {
        assert!(new_nvars >= self.nvars, "cannot shrink the ring");
        if new_nvars == self.nvars {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.0.clone();
                exps.resize(new_nvars, 0);
                (Monomial(exps), c.clone())
            })
            .collect();
        MultiPoly {
            nvars: new_nvars,
            ord: self.ord,
            terms,
        }
    }

    pub fn with_order(&self, ord: MonomialOrder) -> Self {
        if self.ord == ord {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_unstable_by(|a, b| ord.cmp(&b.0, &a.0));
        MultiPoly {
            nvars: self.nvars,
            ord,
            terms,
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.ord, other.ord, "monomial order mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match self.ord.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        MultiPoly {
            nvars: self.nvars,
            ord: self.ord,
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            ord: self.ord,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.ord);
        }
        MultiPoly {
            nvars: self.nvars,
            ord: self.ord,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the single term `c * mono` (coefficient must be
    /// nonzero). Sort order is preserved because monomial multiplication by
    /// a fixed factor is order-preserving.
    pub fn mul_term(&self, mono: &Monomial, c: &Rat) -> Self {
        debug_assert!(!c.is_zero());
        MultiPoly {
            nvars: self.nvars,
            ord: self.ord,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars, self.ord);
        }
        // multiply by the shorter factor termwise, accumulating via add
        let (short, long) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Self::zero(self.nvars, self.ord);
        for (m, c) in &short.terms {
            acc = acc.add(&long.mul_term(m, c));
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                let mut em = m.clone();
                em.0[var] = e - 1;
                (em, c * Rat::from_integer(Int::from(e)))
            })
            .collect();
        Self::new(self.nvars, self.ord, terms)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    v *= &point[var];
                }
            }
            acc += v;
        }
        acc
    }

    /// Primitive integer normalization: clears denominators, divides by the
    /// coefficient gcd, and makes the leading coefficient positive. Zero
    /// maps to zero.
    pub fn primitive(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let lcm = denominator_lcm(self.terms.iter().map(|(_, c)| c));
        let ints: Vec<Int> = self
            .terms
            .iter()
            .map(|(_, c)| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut cont = content(ints.iter());
        if cont.is_zero() {
            cont = Int::one();
        }
        if ints[0].is_negative() {
            cont = -cont;
        }
        MultiPoly {
            nvars: self.nvars,
            ord: self.ord,
            terms: self
                .terms
                .iter()
                .zip(ints)
                .map(|((m, _), i)| (m.clone(), Rat::from_integer(i / &cont)))
                .collect(),
        }
    }

    /// `true` when every coefficient is an integer.
    pub fn is_integer(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.denom().is_one())
    }
}

/// Determinant of a square matrix of polynomials, by Laplace expansion
/// along the first remaining row with memoization on the set of remaining
/// columns. The empty matrix has determinant one.
pub fn poly_matrix_det(
    nvars: usize,
    ord: MonomialOrder,
    rows: &[Vec<MultiPoly>],
) -> MultiPoly {
    let k = rows.len();
    assert!(k <= 64, "determinant limited to 64 rows");
    assert!(rows.iter().all(|r| r.len() == k), "non-square matrix");
    fn rec(
        rows: &[Vec<MultiPoly>],
        nvars: usize,
        ord: MonomialOrder,
        cols: u64,
        memo: &mut std::collections::BTreeMap<u64, MultiPoly>,
    ) -> MultiPoly {
        if cols == 0 {
            return MultiPoly::one(nvars, ord);
        }
        if let Some(d) = memo.get(&cols) {
            return d.clone();
        }
        let i = rows.len() - cols.count_ones() as usize;
        let mut acc = MultiPoly::zero(nvars, ord);
        let mut sign = Rat::one();
        for j in 0..rows.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = &rows[i][j];
            if !entry.is_zero() {
                let sub = rec(rows, nvars, ord, cols & !(1 << j), memo);
                acc = acc.add(&sub.mul(entry).scale(&sign));
            }
            sign = -sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    rec(rows, nvars, ord, full, &mut std::collections::BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn mono(e: &[u16]) -> Monomial {
        Monomial(e.to_vec())
    }

    fn poly(ord: MonomialOrder, terms: &[(&[u16], i64)]) -> MultiPoly {
        let nvars = terms[0].0.len();
        MultiPoly::new(
            nvars,
            ord,
            terms
                .iter()
                .map(|(e, c)| (mono(e), rat_int(*c)))
                .collect(),
        )
    }

    #[test]
    fn grevlex_ordering() {
        let ord = MonomialOrder::GrevLex;
        // degree dominates
        assert_eq!(ord.cmp(&mono(&[2, 0]), &mono(&[0, 1])), Ordering::Greater);
        // same degree: x0^2 > x0*x1 > x1^2
        assert_eq!(ord.cmp(&mono(&[2, 0]), &mono(&[1, 1])), Ordering::Greater);
        assert_eq!(ord.cmp(&mono(&[1, 1]), &mono(&[0, 2])), Ordering::Greater);
        // classic grevlex vs grlex distinction in 3 vars:
        // x0*x2 vs x1^2 -> diff (1,-2,1), rightmost nonzero positive -> less
        assert_eq!(
            ord.cmp(&mono(&[1, 0, 1]), &mono(&[0, 2, 0])),
            Ordering::Less
        );
    }

    #[test]
    fn lex_ordering() {
        let ord = MonomialOrder::Lex;
        assert_eq!(ord.cmp(&mono(&[1, 0]), &mono(&[0, 9])), Ordering::Greater);
        assert_eq!(ord.cmp(&mono(&[1, 2]), &mono(&[1, 3])), Ordering::Less);
    }

    #[test]
    fn arithmetic_and_leading_term() {
        let ord = MonomialOrder::GrevLex;
        let f = poly(ord, &[(&[1, 0], 1), (&[0, 1], 1)]); // x0 + x1
        let g = poly(ord, &[(&[1, 0], 1), (&[0, 1], -1)]); // x0 - x1
        let prod = f.mul(&g); // x0^2 - x1^2
        assert_eq!(prod, poly(ord, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert_eq!(*prod.leading_monomial(), mono(&[2, 0]));
        assert!(f.sub(&f).is_zero());
        assert_eq!(prod.total_degree(), Some(2));
    }

    #[test]
    fn derivative_and_eval() {
        let ord = MonomialOrder::GrevLex;
        // f = x0^2*x1 + 3*x1
        let f = poly(ord, &[(&[2, 1], 1), (&[0, 1], 3)]);
        assert_eq!(f.derivative(0), poly(ord, &[(&[1, 1], 2)]));
        assert_eq!(f.derivative(1), poly(ord, &[(&[2, 0], 1), (&[0, 0], 3)]));
        assert_eq!(f.eval(&[rat_int(2), rat_int(5)]), rat_int(35));
    }

    #[test]
    fn primitive_normalization() {
        let ord = MonomialOrder::GrevLex;
        let f = MultiPoly::new(
            2,
            ord,
            vec![
                (mono(&[1, 0]), crate::rat::rat(-2, 3)),
                (mono(&[0, 1]), crate::rat::rat(4, 3)),
            ],
        );
        // leading term is -2/3 x0; primitive form flips sign: x0 - 2 x1
        assert_eq!(f.primitive(), poly(ord, &[(&[1, 0], 1), (&[0, 1], -2)]));
        assert!(f.primitive().is_integer());
    }

    #[test]
    fn determinant_of_poly_matrix() {
        let ord = MonomialOrder::GrevLex;
        let x = MultiPoly::var(2, ord, 0);
        let y = MultiPoly::var(2, ord, 1);
        let one = MultiPoly::one(2, ord);
        // det [[x, 1], [1, y]] = xy - 1
        let d = poly_matrix_det(2, ord, &[vec![x.clone(), one.clone()], vec![one.clone(), y.clone()]]);
        assert_eq!(d, x.mul(&y).sub(&one));
        // 3x3 known determinant with a zero row block
        let z = MultiPoly::zero(2, ord);
        let d3 = poly_matrix_det(
            2,
            ord,
            &[
                vec![x.clone(), z.clone(), z.clone()],
                vec![z.clone(), y.clone(), one.clone()],
                vec![z.clone(), one.clone(), y.clone()],
            ],
        );
        assert_eq!(d3, x.mul(&y.mul(&y).sub(&one)));
        assert!(poly_matrix_det(2, ord, &[]).is_nonzero_constant());
    }

    #[test]
    fn new_combines_duplicates() {
        let ord = MonomialOrder::Lex;
        let f = MultiPoly::new(
            1,
            ord,
            vec![
                (mono(&[1]), rat_int(2)),
                (mono(&[1]), rat_int(-2)),
                (mono(&[0]), rat_int(7)),
            ],
        );
        assert_eq!(f, MultiPoly::constant(1, ord, rat_int(7)));
    }
}
