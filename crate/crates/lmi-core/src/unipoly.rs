//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree with no trailing zeros, so
//! the zero polynomial is the empty vector. This module carries the exact
//! univariate toolbox used by parametrizations and real-root work: ring
//! arithmetic, Euclidean division, primitive-PRS gcd, squarefree parts,
//! modular arithmetic mod a fixed polynomial, and integer normalization.

use crate::rat::{content, denominator_lcm, rat_sign, Int, Rat};
use num::{One, Signed, Zero};
use std::fmt;

/// A dense univariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    /// Coefficients in ascending degree; no trailing zeros.
    coeffs: Vec<Rat>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            first = false;
            match k {
                0 => write!(f, "{}", crate::rat::rat_to_string(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", crate::rat::rat_to_string(&a))?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl UniPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Builds a polynomial from ascending machine-integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::rat::rat_int(c)).collect())
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial one.
    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![Rat::one()],
        }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::one();
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `true` when the polynomial is a nonzero constant.
    pub fn is_nonzero_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficients (no trailing zeros).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Leading coefficient; panics on the zero polynomial.
    pub fn leading(&self) -> &Rat {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(Int::from(k)))
            .collect();
        Self::new(out)
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = q*div + r` and `deg r < deg div`. Panics on zero divisor.
    pub fn divrem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        let lead = div.leading();
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let f = &rem[k] / lead;
            for (j, c) in div.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                let delta = c * &f;
                rem[idx] -= delta;
            }
            quot[k - dd] = f;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Remainder of `self` modulo `modulus`.
    pub fn rem(&self, modulus: &Self) -> Self {
        self.divrem(modulus).1
    }

    /// Product reduced modulo `modulus`.
    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    /// Tests exact divisibility.
    pub fn divides(&self, other: &Self) -> bool {
        // TEMPORARY instrumentation (remove before ship)
        let t0 = std::time::Instant::now();
        let out = self.divides_inner(other);
        crate::groebner::stats::add(
            &crate::groebner::stats::UDIV_NANOS,
            t0.elapsed().as_nanos() as u64,
        );
        out
    }

    fn divides_inner(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Primitive integer form: the unique integer-coefficient polynomial
    /// with content 1 and positive leading coefficient that is a rational
    /// multiple of `self`. Returns the zero polynomial for zero input.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lcm = denominator_lcm(self.coeffs.iter());
        let ints: Vec<Int> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut cont = content(ints.iter());
        if cont.is_zero() {
            cont = Int::one();
        }
        if ints.last().expect("nonzero").is_negative() {
            cont = -cont;
        }
        UniPoly {
            coeffs: ints
                .into_iter()
                .map(|i| Rat::from_integer(i / &cont))
                .collect(),
        }
    }

    /// Monic form (leading coefficient one). Panics on zero.
    pub fn monic(&self) -> Self {
        let lead = self.leading().clone();
        self.scale(&lead.recip())
    }

    /// `true` when all coefficients are integers.
    pub fn is_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Integer coefficients in ascending degree; `None` if any coefficient
    /// is non-integral.
    pub fn int_coeffs(&self) -> Option<Vec<Int>> {
        if !self.is_integer() {
            return None;
        }
        Some(self.coeffs.iter().map(|c| c.numer().clone()).collect())
    }

    /// Content of an integer polynomial (gcd of coefficients, sign of the
    /// leading coefficient). Panics if non-integral; zero input gives 0.
    pub fn int_content(&self) -> Int {
        let ints = self.int_coeffs().expect("integer polynomial");
        let mut cont = content(ints.iter());
        if !cont.is_zero() && ints.last().is_some_and(Signed::is_negative) {
            cont = -cont;
        }
        cont
    }

    /// Greatest common divisor, returned in primitive integer form with
    /// positive leading coefficient (primitive pseudo-remainder sequence to
    /// keep coefficient growth in check). `gcd(0,0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        // TEMPORARY instrumentation (remove before ship)
        let t0 = std::time::Instant::now();
        let out = self.gcd_inner(other);
        crate::groebner::stats::add(
            &crate::groebner::stats::UGCD_NANOS,
            t0.elapsed().as_nanos() as u64,
        );
        crate::groebner::stats::add(&crate::groebner::stats::UGCD_CALLS, 1);
        out
    }

    fn gcd_inner(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.coeffs.len() == 1 || b.coeffs.len() == 1 {
            return Self::one();
        }
        if let Some(g) = crate::modgb::modular_int_gcd(&a, &b) {
            return g;
        }
        if a.coeffs.len() < b.coeffs.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            // pseudo-remainder: lead(b)^(da-db+1) * a mod b stays integral
            let da = a.coeffs.len() - 1;
            let db = b.coeffs.len() - 1;
            let lead = b.leading().clone();
            let scaled = a.scale(&num::pow::pow(lead, da - db + 1));
            let r = scaled.divrem(&b).1;
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Squarefree part `p / gcd(p, p')` in primitive integer form.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.coeffs.len() == 1 {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero(), "gcd must divide the polynomial");
        q.primitive_part()
    }

    /// `true` when the polynomial is squarefree (nonzero, coprime with its
    /// derivative). Constants count as squarefree.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.coeffs.len() == 1 {
            return true;
        }
        self.gcd(&self.derivative()).is_one()
    }

    /// Extended gcd: returns `(g, u, v)` with `u*self + v*other = g`,
    /// `g` monic (or zero).
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        // TEMPORARY instrumentation (remove before ship)
        let t0 = std::time::Instant::now();
        let out = self.extended_gcd_inner(other);
        crate::groebner::stats::add(
            &crate::groebner::stats::UXGCD_NANOS,
            t0.elapsed().as_nanos() as u64,
        );
        out
    }

    fn extended_gcd_inner(&self, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (Self::zero(), Self::zero(), Self::zero());
        }
        let lead = r0.leading().clone().recip();
        (
            r0.scale(&lead),
            s0.scale(&lead),
            t0.scale(&lead),
        )
    }

    /// Inverse of `self` modulo `modulus`; `None` when not coprime.
    pub fn inverse_mod(&self, modulus: &Self) -> Option<Self> {
        if let Some(answer) = crate::modgb::modular_inverse_mod(self, modulus) {
            return answer;
        }
        let (g, u, _) = self.extended_gcd(modulus);
        if g.is_one() {
            Some(u.rem(modulus))
        } else {
            None
        }
    }

    /// Exact quotient; panics if the division is not exact.
    pub fn exact_div(&self, div: &Self) -> Self {
        let (q, r) = self.divrem(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Composition `self(other(t))`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other);
            acc = acc.add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Sign of the value at a rational point.
    pub fn sign_at_rat(&self, x: &Rat) -> i8 {
        rat_sign(&self.eval(x))
    }

    /// Number of sign variations in the coefficient sequence (Descartes).
    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for c in &self.coeffs {
            let s = rat_sign(c);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

// ----------------------------------------------------------------------
// Raw integer-coefficient polynomial arithmetic (ascending coefficient
// vectors, trailing zeros tolerated, empty = zero): the cheap inner loops
// behind fraction-free determinant and substitution work.
// ----------------------------------------------------------------------

/// Product of two integer coefficient vectors.
pub(crate) fn ip_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// In-place sum `acc += b`.
pub(crate) fn ip_add(acc: &mut Vec<Int>, b: &[Int]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), Int::zero());
    }
    for (a, y) in acc.iter_mut().zip(b) {
        *a += y;
    }
}

/// In-place difference `acc -= b`.
pub(crate) fn ip_sub(acc: &mut Vec<Int>, b: &[Int]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), Int::zero());
    }
    for (a, y) in acc.iter_mut().zip(b) {
        *a -= y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn p(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_ints(coeffs)
    }

    #[test]
    fn arithmetic_round_trip() {
        let a = p(&[1, 2, 3]); // 3t^2 + 2t + 1
        let b = p(&[-1, 1]); // t - 1
        let prod = a.mul(&b);
        let (q, r) = prod.divrem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(a.eval(&rat_int(2)), rat_int(17));
    }

    #[test]
    fn derivative_and_compose() {
        let a = p(&[0, 0, 0, 8]).sub(&p(&[1, 8])); // 8t^3 - 8t - 1
        assert_eq!(a.derivative(), p(&[-8, 0, 24]));
        let shifted = a.compose(&p(&[1, 1])); // a(t+1)
        assert_eq!(shifted.eval(&rat_int(0)), a.eval(&rat_int(1)));
    }

    #[test]
    fn gcd_is_primitive() {
        let a = p(&[-2, 0, 2]); // 2t^2 - 2 = 2(t-1)(t+1)
        let b = p(&[-3, 3]); // 3t - 3
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert!(p(&[1]).gcd(&UniPoly::zero()).is_one());
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let sq = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        assert_eq!(sq.squarefree_part(), p(&[-1, 1]).mul(&p(&[2, 1])));
        assert!(!sq.is_squarefree());
        assert!(p(&[-1, 0, 1]).is_squarefree());
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let a = UniPoly::new(vec![rat(1, 2), rat(-3, 4)]);
        assert_eq!(a.primitive_part(), p(&[-2, 3]));
        assert_eq!(p(&[2, 4]).primitive_part(), p(&[1, 2]));
    }

    #[test]
    fn modular_inverse() {
        let m = p(&[-2, 0, 1]); // t^2 - 2
        let a = p(&[0, 1]); // t
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!(a.mul_mod(&inv, &m), UniPoly::one());
        // t^2 - 2 and t - sqrt2-ish share no factor with 2t^2 - 4
        assert!(p(&[-4, 0, 2]).inverse_mod(&m).is_none());
    }

    #[test]
    fn extended_gcd_bezout() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (g, u, v) = a.extended_gcd(&b);
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
        assert_eq!(g, b.monic());
    }

    #[test]
    fn variations() {
        assert_eq!(p(&[-1, 0, 3, -2, 5]).sign_variations(), 3);
        assert_eq!(UniPoly::zero().sign_variations(), 0);
    }
}
