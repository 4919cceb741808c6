//! Exact real-root isolation and sign evaluation at algebraic numbers.
//!
//! Roots of a squarefree integer polynomial are isolated in open intervals
//! with dyadic rational endpoints by Descartes' rule of signs with interval
//! bisection. Each isolated root knows its defining polynomial and can
//! answer, exactly, the sign of any other rational polynomial at the root:
//! a gcd test decides vanishing algebraically, and otherwise the interval
//! is refined until the sign is locked. No floating point is involved;
//! decimal output is produced by exact rounding at the requested precision.

use crate::rat::{rat_to_decimal, Int, Rat};
use crate::unipoly::UniPoly;
use num::{One, Signed, Zero};

/// A real algebraic number: the unique root of `poly` inside the open
/// interval `(lo, hi)`.
///
/// Invariants: `poly` is squarefree with integer coefficients, content 1,
/// and positive leading coefficient; the endpoints are dyadic rationals,
/// are not roots of `poly`, and `poly` changes sign between them.
#[derive(Clone, Debug)]
pub struct RealRoot {
    poly: UniPoly,
    lo: Rat,
    hi: Rat,
}

/// Shifts `p(t)` to `p(t + c)` in place (iterated Horner, quadratic time).
fn taylor_shift(coeffs: &mut [Rat], c: &Rat) {
    if c.is_zero() {
        return;
    }
    let n = coeffs.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let add = c * &coeffs[j + 1];
            coeffs[j] += add;
        }
    }
}

/// Number of sign variations of the Descartes test polynomial for the open
/// interval `(lo, hi)`: an upper bound on the number of roots of `g`
/// inside, exact when it returns 0 or 1 (for squarefree `g`).
fn descartes_variations(g: &UniPoly, lo: &Rat, hi: &Rat) -> usize {
    debug_assert!(lo < hi);
    if g.is_zero() {
        return 0;
    }
    // h(t) = g(lo + (hi - lo) t): roots in (lo, hi) map to (0, 1)
    let width = hi - lo;
    let mut coeffs: Vec<Rat> = g.coeffs().to_vec();
    taylor_shift(&mut coeffs, lo);
    let mut pw = Rat::one();
    for c in coeffs.iter_mut() {
        *c *= &pw;
        pw *= &width;
    }
    // reverse (t -> 1/t, clearing denominators) then shift by 1:
    // roots in (0, 1) map to (1, inf) map to (0, inf)
    coeffs.reverse();
    taylor_shift(&mut coeffs, &Rat::one());
    UniPoly::new(coeffs).sign_variations()
}

/// A power-of-two bound `B` with all real roots of `p` inside `(-B, B)`.
fn root_bound(p: &UniPoly) -> Rat {
    let lead = p.leading().abs();
    let max_ratio = p
        .coeffs()
        .iter()
        .rev()
        .skip(1)
        .map(|c| c.abs() / &lead)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let cauchy = max_ratio + Rat::one(); // every root has |root| < cauchy
    let mut b = Rat::one();
    let two = Rat::from_integer(Int::from(2));
    while b < cauchy {
        b *= &two;
    }
    b
}

/// Isolates all real roots of `p` (any nonzero rational polynomial; its
/// squarefree primitive part is used). Roots are returned in ascending
/// order, each in its own open isolating interval.
pub fn isolate_real_roots(p: &UniPoly) -> Vec<RealRoot> {
    assert!(!p.is_zero(), "cannot isolate roots of the zero polynomial");
    let sf = p.squarefree_part();
    if sf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let bound = root_bound(&sf);
    let mut out: Vec<RealRoot> = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    let half = Rat::new(Int::one(), Int::from(2));
    while let Some((a, b)) = stack.pop() {
        match descartes_variations(&sf, &a, &b) {
            0 => {}
            1 => {
                debug_assert!(sf.sign_at_rat(&a) * sf.sign_at_rat(&b) == -1);
                out.push(RealRoot {
                    poly: sf.clone(),
                    lo: a,
                    hi: b,
                });
            }
            _ => {
                let m = (&a + &b) * &half;
                if sf.eval(&m).is_zero() {
                    // exact dyadic root: shrink a symmetric interval around
                    // it until it contains no other root, then recurse on
                    // the two sides outside it (keeping endpoints off roots)
                    let mut eta = (&b - &a) * Rat::new(Int::one(), Int::from(4));
                    loop {
                        let lo = &m - &eta;
                        let hi = &m + &eta;
                        if !sf.eval(&lo).is_zero()
                            && !sf.eval(&hi).is_zero()
                            && descartes_variations(&sf, &lo, &m) == 0
                            && descartes_variations(&sf, &m, &hi) == 0
                        {
                            stack.push((a, lo.clone()));
                            stack.push((hi.clone(), b));
                            out.push(RealRoot {
                                poly: sf.clone(),
                                lo,
                                hi,
                            });
                            break;
                        }
                        eta *= &half;
                    }
                } else {
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                }
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

impl RealRoot {
    /// The squarefree integer polynomial this root satisfies.
    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// One bisection step; the interval at least halves.
    pub fn refine(&mut self) {
        let half = Rat::new(Int::one(), Int::from(2));
        let m = (&self.lo + &self.hi) * &half;
        let sm = self.poly.sign_at_rat(&m);
        if sm == 0 {
            // the root is exactly m; pin a tiny interval straddling it
            let eta = self.width() * Rat::new(Int::one(), Int::from(8));
            self.lo = &m - &eta;
            self.hi = &m + &eta;
            debug_assert!(
                self.poly.sign_at_rat(&self.lo) * self.poly.sign_at_rat(&self.hi) == -1
            );
            return;
        }
        if sm == self.poly.sign_at_rat(&self.lo) {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    /// Refines until the interval is narrower than `width`.
    pub fn refine_below(&mut self, width: &Rat) {
        while self.width() >= *width {
            self.refine();
        }
    }

    /// Exact sign of `g` at the root: `0` when the root satisfies `g`
    /// (decided by a gcd with the defining polynomial), otherwise the
    /// locked sign after interval refinement.
    pub fn sign_of(&mut self, g: &UniPoly) -> i8 {
        if g.is_zero() {
            return 0;
        }
        let h = self.poly.gcd(g);
        if h.degree().unwrap_or(0) > 0
            && h.sign_at_rat(&self.lo) * h.sign_at_rat(&self.hi) == -1
        {
            // h divides the squarefree defining polynomial, so its only
            // possible root inside the isolating interval is this root
            return 0;
        }
        loop {
            if descartes_variations(g, &self.lo, &self.hi) == 0 {
                let half = Rat::new(Int::one(), Int::from(2));
                let m = (&self.lo + &self.hi) * half;
                let s = g.sign_at_rat(&m);
                debug_assert!(s != 0, "no root of g inside the interval");
                return s;
            }
            self.refine();
        }
    }

    /// Midpoint after refining the interval below `10^-(digits+2)`.
    pub fn approximate(&mut self, digits: usize) -> Rat {
        let target = Rat::new(
            Int::one(),
            num::pow::pow(Int::from(10), digits + 2),
        );
        self.refine_below(&target);
        (&self.lo + &self.hi) * Rat::new(Int::one(), Int::from(2))
    }

    /// Decimal expansion of the root, correctly rounded to `digits`
    /// fractional digits.
    pub fn decimal(&mut self, digits: u32) -> String {
        rat_to_decimal(&self.approximate(digits as usize), digits)
    }
}

/// Sturm-chain root count on the half-open interval `(a, b]`; exact for any
/// polynomial with `p(a) != 0` and `p(b) != 0`. Kept as an independent
/// cross-check for the Descartes-based isolation.
pub fn sturm_count(p: &UniPoly, a: &Rat, b: &Rat) -> usize {
    let sf = p.squarefree_part();
    assert!(!sf.eval(a).is_zero() && !sf.eval(b).is_zero());
    let mut chain = vec![sf.clone(), sf.derivative()];
    while !chain.last().expect("nonempty").is_zero() {
        let k = chain.len();
        let rem = chain[k - 2].divrem(&chain[k - 1]).1;
        let next = if rem.is_zero() {
            UniPoly::zero()
        } else {
            // a positive multiple of -rem: scaling by positive constants
            // does not disturb the sign variation counts
            let prim = rem.primitive_part();
            if rem.leading().is_positive() {
                prim.neg()
            } else {
                prim
            }
        };
        chain.push(next);
    }
    chain.pop();
    let variations = |x: &Rat| {
        let mut last = 0i8;
        let mut count = 0;
        for q in &chain {
            let s = q.sign_at_rat(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    };
    variations(a) - variations(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn p(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_ints(coeffs)
    }

    #[test]
    fn isolates_simple_cubic() {
        // (t-1)(t-2)(t+3) = t^3 - 7t + 6
        let f = p(&[6, -7, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 3);
        let expect = [rat_int(-3), rat_int(1), rat_int(2)];
        for (r, e) in roots.iter().zip(&expect) {
            assert!(r.lo < *e && *e < r.hi);
        }
    }

    #[test]
    fn exact_dyadic_root_is_isolated() {
        // (2t-1)(t^2-2): rational root 1/2 plus +-sqrt(2)
        let f = p(&[-1, 2]).mul(&p(&[-2, 0, 1]));
        let mut roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 3);
        let half = rat(1, 2);
        assert!(roots[1].lo < half && half < roots[1].hi);
        assert_eq!(roots[1].sign_of(&p(&[-1, 2])), 0);
        // middle root is exactly 1/2: decimal expansion
        assert_eq!(roots[1].decimal(4), "0.5000");
    }

    #[test]
    fn multiplicity_is_flattened() {
        // (t-1)^2 (t+1): squarefree part has roots -1, 1
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[1, 1]));
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1])).is_empty());
        assert!(isolate_real_roots(&p(&[5])).is_empty());
    }

    #[test]
    fn sign_evaluation_at_sqrt2() {
        let f = p(&[-2, 0, 1]);
        let mut roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        let r = &mut roots[1]; // +sqrt(2)
        assert_eq!(r.sign_of(&p(&[-2, 0, 1])), 0); // its own polynomial
        assert_eq!(r.sign_of(&p(&[-4, 0, 2])), 0); // scalar multiple
        assert_eq!(r.sign_of(&p(&[-1, 1])), 1); // t - 1 > 0
        assert_eq!(r.sign_of(&p(&[-2, 1])), -1); // t - 2 < 0
        // t^3 - 3 at sqrt2: 2*sqrt2 - 3 < 0
        assert_eq!(r.sign_of(&p(&[-3, 0, 0, 1])), -1);
        assert_eq!(r.decimal(10), "1.4142135624");
    }

    #[test]
    fn negative_root_decimal() {
        let f = p(&[-2, 0, 1]);
        let mut roots = isolate_real_roots(&f);
        assert_eq!(roots[0].decimal(6), "-1.414214");
    }

    #[test]
    fn sturm_agrees_with_isolation() {
        let polys = [
            p(&[6, -7, 0, 1]),
            p(&[-1, 2]).mul(&p(&[-2, 0, 1])),
            p(&[1, 0, 1]),
            p(&[-1, 8, 0, -8, 1]),
            p(&[0, 1]).mul(&p(&[-9, 1])).mul(&p(&[7, 3])),
        ];
        for f in &polys {
            let roots = isolate_real_roots(f);
            let bound = root_bound(&f.squarefree_part());
            assert_eq!(
                sturm_count(f, &-bound.clone(), &bound),
                roots.len(),
                "count mismatch for {}",
                f
            );
            // each isolating interval contains exactly one root
            for r in &roots {
                assert_eq!(sturm_count(f, r.lo(), r.hi()), 1);
            }
        }
    }

    #[test]
    fn refinement_narrows() {
        let f = p(&[-2, 0, 1]);
        let mut r = isolate_real_roots(&f).pop().unwrap();
        let w0 = r.width();
        r.refine_below(&rat(1, 1_000_000));
        assert!(r.width() < rat(1, 1_000_000));
        assert!(r.width() < w0);
        // invariant preserved
        assert_eq!(
            r.poly().sign_at_rat(r.lo()) * r.poly().sign_at_rat(r.hi()),
            -1
        );
    }
}
