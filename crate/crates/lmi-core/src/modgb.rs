//! Multi-modular Groebner basis candidates.
//!
//! Buchberger's algorithm over the rationals suffers severe intermediate
//! coefficient swell even when the final reduced basis is small. This module
//! runs the same algorithm over prime fields Z/p for a deterministic
//! sequence of word-size primes (where every coefficient fits in a machine
//! word), matches the resulting monic reduced bases across primes by their
//! leading-monomial shape, and lifts the majority shape to a rational
//! candidate via Chinese remaindering and rational reconstruction.
//!
//! The lifted basis is only a *candidate*: a prime can be unlucky (its
//! reduced basis differs from the rational one). The caller must verify it
//! exactly — every input generator reduces to zero against the candidate and
//! every S-polynomial of the candidate reduces to zero — before trusting it.
//! Verification succeeds for all but a vanishing fraction of primes, and the
//! caller escalates the prime count or falls back to the exact algorithm
//! when it fails, so the modular path never affects correctness of accepted
//! results, only the time to reach them.

use crate::groebner::{dimension_from_lts, staircase_basis, update_pairs, GbError, Limits, Pair};
use crate::multipoly::{Monomial, MonomialOrder, MultiPoly};
use crate::rat::{int_gcd, Int, Rat};
use crate::unipoly::UniPoly;
use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeMap;

// ----------------------------------------------------------------------
// Prime-field scalar arithmetic (primes below 2^62, products via u128).
// ----------------------------------------------------------------------

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    submod(a, p - b, p)
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p` (Fermat). `a` must be nonzero mod p.
fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for u64 (the listed bases decide primality
/// for every 64-bit integer).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n % small == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The deterministic computation primes: the largest 1024 primes below 2^62,
/// in descending order, computed once.
fn nth_prime_below_2_62(index: usize) -> u64 {
    static PRIMES: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    let primes = PRIMES.get_or_init(|| {
        let mut found = Vec::with_capacity(1024);
        let mut candidate = (1u64 << 62) - 1;
        while found.len() < 1024 {
            if is_prime_u64(candidate) {
                found.push(candidate);
            }
            candidate -= 2;
        }
        found
    });
    primes[index]
}

// ----------------------------------------------------------------------
// Sparse polynomials over Z/p (terms sorted descending, like MultiPoly).
// ----------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
struct PolyP {
    terms: Vec<(Monomial, u64)>,
}

impl PolyP {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading_monomial(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Reduces a primitive-integer polynomial mod p. Terms whose
    /// coefficient vanishes mod p are dropped; the whole polynomial can
    /// come out zero (the caller treats that prime as unusable).
    fn from_multipoly(f: &MultiPoly, p: u64) -> PolyP {
        let big_p = BigInt::from(p);
        let terms = f
            .terms()
            .iter()
            .filter_map(|(m, c)| {
                debug_assert!(c.denom().is_one(), "input must be integer");
                let r = c.numer().mod_floor(&big_p);
                let r = u64::try_from(r.magnitude().clone()).expect("residue fits u64");
                (r != 0).then(|| (m.clone(), r))
            })
            .collect();
        PolyP { terms }
    }

    fn make_monic(&mut self, p: u64) {
        if self.terms.is_empty() || self.terms[0].1 == 1 {
            return;
        }
        let inv = invmod(self.terms[0].1, p);
        for (_, c) in &mut self.terms {
            *c = mulmod(*c, inv, p);
        }
    }

    /// `self - c * shift * g`, merging the sorted term lists.
    fn sub_scaled(&self, g: &PolyP, shift: &Monomial, c: u64, ord: MonomialOrder, p: u64) -> PolyP {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().peekable();
        while let (Some((ma, _)), Some((mb, _))) = (a.peek(), b.peek()) {
            let mb_shifted = mb.mul(shift);
            match ord.cmp(ma, &mb_shifted) {
                std::cmp::Ordering::Greater => {
                    let (m, v) = a.next().unwrap();
                    out.push((m.clone(), *v));
                }
                std::cmp::Ordering::Less => {
                    let (_, v) = b.next().unwrap();
                    let w = submod(0, mulmod(c, *v, p), p);
                    if w != 0 {
                        out.push((mb_shifted, w));
                    }
                }
                std::cmp::Ordering::Equal => {
                    let (m, va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    let w = submod(*va, mulmod(c, *vb, p), p);
                    if w != 0 {
                        out.push((m.clone(), w));
                    }
                }
            }
        }
        for (m, v) in a {
            out.push((m.clone(), *v));
        }
        for (m, v) in b {
            let w = submod(0, mulmod(c, *v, p), p);
            if w != 0 {
                out.push((m.mul(shift), w));
            }
        }
        PolyP { terms: out }
    }

    /// `shift * self` (coefficients unchanged; order is preserved because
    /// monomial comparison is compatible with multiplication).
    fn shifted(&self, shift: &Monomial) -> PolyP {
        PolyP {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(shift), *c))
                .collect(),
        }
    }
}

/// Full normal form of `f` against monic reducers.
fn reduce_p(
    f: &PolyP,
    reducers: &[&PolyP],
    ord: MonomialOrder,
    p: u64,
    limits: &Limits,
) -> Result<PolyP, GbError> {
    let mut work = f.clone();
    let mut pos = 0;
    let mut steps = 0u32;
    while pos < work.terms.len() {
        steps += 1;
        if steps % 4096 == 0 {
            limits.check_deadline()?;
        }
        let (mono, coeff) = work.terms[pos].clone();
        let Some(g) = reducers
            .iter()
            .find(|g| !g.is_zero() && g.leading_monomial().divides(&mono))
        else {
            pos += 1;
            continue;
        };
        let shift = mono.div(g.leading_monomial());
        // g is monic: work -= coeff * shift * g cancels the term at pos.
        work = work.sub_scaled(g, &shift, coeff, ord, p);
    }
    Ok(work)
}

/// Monic reduced Groebner basis of `gens` over Z/p, sorted by ascending
/// leading monomial. Mirrors the rational Buchberger loop (same pair
/// criteria and selection), so lucky primes produce the reduction of the
/// rational reduced basis.
fn buchberger_p(
    gens: &[PolyP],
    ord: MonomialOrder,
    p: u64,
    limits: &Limits,
) -> Result<Vec<PolyP>, GbError> {
    // TEMPORARY instrumentation (remove before ship)
    let t0 = std::time::Instant::now();
    crate::groebner::stats::add(&crate::groebner::stats::MOD_GB_CALLS, 1);
    let out = buchberger_p_inner(gens, ord, p, limits);
    crate::groebner::stats::add(
        &crate::groebner::stats::MOD_GB_NANOS,
        t0.elapsed().as_nanos() as u64,
    );
    out
}

fn buchberger_p_inner(
    gens: &[PolyP],
    ord: MonomialOrder,
    p: u64,
    limits: &Limits,
) -> Result<Vec<PolyP>, GbError> {
    let mut basis: Vec<PolyP> = Vec::new();
    let mut lts: Vec<Monomial> = Vec::new();
    let mut redundant: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut seeds: Vec<PolyP> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    for s in &mut seeds {
        s.make_monic(p);
    }
    seeds.sort_by(|a, b| ord.cmp(a.leading_monomial(), b.leading_monomial()));
    seeds.dedup();

    let queue: Vec<PolyP> = seeds;
    let mut next_seed = 0usize;

    loop {
        limits.check_deadline()?;
        if basis.len() > limits.max_basis {
            return Err(GbError::LimitExceeded(format!(
                "basis size exceeded {}",
                limits.max_basis
            )));
        }
        // Work through seeds first, then pairs (same order as the rational
        // engine: seeds in ascending leading-monomial order, then pairs by
        // smallest lcm).
        let candidate = if next_seed < queue.len() {
            let s = queue[next_seed].clone();
            next_seed += 1;
            s
        } else if !pairs.is_empty() {
            let sel = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    ord.cmp(&a.lcm, &b.lcm)
                        .then(a.i.cmp(&b.i))
                        .then(a.j.cmp(&b.j))
                })
                .map(|(k, _)| k)
                .expect("nonempty pair queue");
            let pair = pairs.swap_remove(sel);
            let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
            let shift_i = pair.lcm.div(gi.leading_monomial());
            let shift_j = pair.lcm.div(gj.leading_monomial());
            // Both monic: s-poly = shift_i*gi - shift_j*gj.
            gi.shifted(&shift_i).sub_scaled(gj, &shift_j, 1, ord, p)
        } else {
            break;
        };
        let live: Vec<&PolyP> = basis
            .iter()
            .zip(&redundant)
            .filter_map(|(g, r)| (!r).then_some(g))
            .collect();
        let mut h = reduce_p(&candidate, &live, ord, p, limits)?;
        if h.is_zero() {
            continue;
        }
        h.make_monic(p);
        if h.is_nonzero_constant() {
            return Ok(vec![PolyP {
                terms: vec![(Monomial::one(h.leading_monomial().nvars()), 1)],
            }]);
        }
        let t = basis.len();
        lts.push(h.leading_monomial().clone());
        basis.push(h);
        redundant.push(false);
        update_pairs(&mut pairs, &lts, &redundant, t);
        for i in 0..t {
            if !redundant[i] && lts[t].divides(&lts[i]) {
                redundant[i] = true;
            }
        }
    }

    let mut minimal: Vec<PolyP> = basis
        .into_iter()
        .zip(redundant)
        .filter_map(|(g, r)| (!r).then_some(g))
        .collect();
    minimal.sort_by(|a, b| ord.cmp(a.leading_monomial(), b.leading_monomial()));
    for i in 0..minimal.len() {
        let others: Vec<&PolyP> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then_some(g))
            .collect();
        minimal[i] = reduce_p(&minimal[i], &others, ord, p, limits)?;
    }
    Ok(minimal)
}

// ----------------------------------------------------------------------
// Chinese remaindering and rational reconstruction.
// ----------------------------------------------------------------------

/// Solves x = r_i mod p_i for all i; returns x in [0, prod p_i).
fn crt(residues: &[(u64, u64)]) -> (BigInt, BigInt) {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for &(r, p) in residues {
        let p_big = BigInt::from(p);
        // x' = x + modulus * t where t = (r - x) / modulus mod p
        let x_mod_p = x.mod_floor(&p_big);
        let x_mod_p = u64::try_from(x_mod_p.magnitude().clone()).expect("fits");
        let m_mod_p = modulus.mod_floor(&p_big);
        let m_mod_p = u64::try_from(m_mod_p.magnitude().clone()).expect("fits");
        let t = mulmod(submod(r % p, x_mod_p, p), invmod(m_mod_p, p), p);
        x += &modulus * BigInt::from(t);
        modulus *= p_big;
    }
    (x, modulus)
}

/// Wang rational reconstruction: the unique a/b with |a|, b <= sqrt(m/2),
/// gcd(b, m) = 1 and b*c = a mod m, when it exists.
fn rational_reconstruct(c: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound: BigInt = ((m - BigInt::one()) / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), c.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.magnitude() > bound.magnitude() {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if den.gcd(m) != BigInt::one() {
        return None;
    }
    Some(Rat::new(num, den))
}

// ----------------------------------------------------------------------
// Candidate production with escalation.
// ----------------------------------------------------------------------

/// Accumulates per-prime bases for one generator set and lifts rational
/// candidates, escalating the prime count on each call.
pub(crate) struct ModularLift {
    gens: Vec<MultiPoly>,
    ord: MonomialOrder,
    nvars: usize,
    runs: Vec<(u64, Vec<PolyP>)>,
    next_prime_index: usize,
    target: usize,
}

impl ModularLift {
    /// `gens` must be nonzero primitive-integer polynomials on a shared
    /// ring and order.
    pub(crate) fn new(gens: Vec<MultiPoly>) -> ModularLift {
        let ord = gens[0].order();
        let nvars = gens[0].nvars();
        ModularLift {
            gens,
            ord,
            nvars,
            runs: Vec::new(),
            next_prime_index: 0,
            target: 4,
        }
    }

    /// Computes modular bases up to the current target prime count, lifts
    /// the majority shape, and doubles the target for the next attempt.
    /// `Ok(None)` means no candidate could be produced at this escalation
    /// level (the caller may call again or give up).
    pub(crate) fn candidate(&mut self, limits: &Limits) -> Result<Option<Vec<MultiPoly>>, GbError> {
        const MAX_PRIMES: usize = 64;
        if self.target > MAX_PRIMES {
            return Ok(None);
        }
        while self.runs.len() < self.target {
            limits.check_deadline()?;
            if self.next_prime_index >= 4 * MAX_PRIMES {
                return Ok(None);
            }
            let p = nth_prime_below_2_62(self.next_prime_index);
            self.next_prime_index += 1;
            let gens_p: Vec<PolyP> = self
                .gens
                .iter()
                .map(|g| PolyP::from_multipoly(g, p))
                .collect();
            if gens_p.iter().any(PolyP::is_zero) {
                continue; // p divides every coefficient of some generator
            }
            match buchberger_p(&gens_p, self.ord, p, limits) {
                Ok(basis) => self.runs.push((p, basis)),
                Err(GbError::LimitExceeded(msg)) if msg.contains("deadline") => {
                    return Err(GbError::LimitExceeded(msg))
                }
                Err(_) => continue, // basis-size blowup mod p: skip the prime
            }
        }
        self.target *= 2;

        // Group runs by the shape (sequence of leading monomials) of the
        // basis; lift the largest group (ties: the earliest run).
        let mut groups: BTreeMap<Vec<Monomial>, Vec<usize>> = BTreeMap::new();
        for (idx, (_, basis)) in self.runs.iter().enumerate() {
            let key: Vec<Monomial> = basis
                .iter()
                .map(|g| g.leading_monomial().clone())
                .collect();
            groups.entry(key).or_default().push(idx);
        }
        let Some(best) = groups
            .values()
            .max_by_key(|idxs| (idxs.len(), std::cmp::Reverse(idxs[0])))
        else {
            return Ok(None);
        };
        if best.len() < 3 {
            return Ok(None);
        }
        let members: Vec<&(u64, Vec<PolyP>)> = best.iter().map(|&i| &self.runs[i]).collect();
        Ok(self.lift(&members))
    }

    /// CRT + rational reconstruction of a group of same-shape bases into a
    /// primitive-integer candidate.
    fn lift(&self, members: &[&(u64, Vec<PolyP>)]) -> Option<Vec<MultiPoly>> {
        let basis_len = members[0].1.len();
        let mut out = Vec::with_capacity(basis_len);
        for poly_idx in 0..basis_len {
            // Union of supports across primes; missing coefficient = 0.
            let mut support: BTreeMap<Monomial, Vec<(u64, u64)>> = BTreeMap::new();
            for (p, basis) in members {
                for (m, c) in &basis[poly_idx].terms {
                    support.entry(m.clone()).or_default().push((*c, *p));
                }
            }
            let mut terms: Vec<(Monomial, Rat)> = Vec::with_capacity(support.len());
            for (m, mut residues) in support {
                // Fill in explicit zeros for primes where the monomial is absent.
                if residues.len() < members.len() {
                    let have: Vec<u64> = residues.iter().map(|&(_, p)| p).collect();
                    for (p, _) in members {
                        if !have.contains(p) {
                            residues.push((0, *p));
                        }
                    }
                }
                let (c, modulus) = crt(&residues);
                let value = rational_reconstruct(&c, &modulus)?;
                if !value.is_zero() {
                    terms.push((m, value));
                }
            }
            if terms.is_empty() {
                return None;
            }
            let poly = MultiPoly::new(self.nvars, self.ord, terms).primitive();
            if poly.is_zero() {
                return None;
            }
            out.push(poly);
        }
        Some(out)
    }
}

// ----------------------------------------------------------------------
// Dense univariate polynomials over Z/p (ascending coefficients, no
// trailing zeros; the empty vector is zero).
// ----------------------------------------------------------------------

fn up_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn up_scale(f: &[u64], c: u64, p: u64) -> Vec<u64> {
    f.iter().map(|&a| mulmod(a, c, p)).collect()
}

fn up_monic(f: &[u64], p: u64) -> Vec<u64> {
    match f.last() {
        None => Vec::new(),
        Some(&1) => f.to_vec(),
        Some(&lead) => up_scale(f, invmod(lead, p), p),
    }
}

fn up_deriv(f: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &a)| mulmod(a, i as u64 % p, p))
        .collect();
    up_trim(&mut out);
    out
}

fn up_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
        }
    }
    up_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn up_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(b.last(), Some(&1), "divisor must be monic");
    let mut r: Vec<u64> = a.to_vec();
    up_trim(&mut r);
    let db = b.len() - 1;
    if db == 0 {
        return Vec::new();
    }
    while r.len() > db {
        let c = r.pop().expect("nonempty");
        if c != 0 {
            let sh = r.len() - db;
            for (k, &bc) in b.iter().enumerate().take(db) {
                r[sh + k] = submod(r[sh + k], mulmod(c, bc, p), p);
            }
        }
        up_trim(&mut r);
    }
    r
}

/// Quotient of `f` by a monic exact divisor `g`.
fn up_divexact_monic(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(g.last(), Some(&1), "divisor must be monic");
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.to_vec();
    up_trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(dg)];
    while r.len() > dg {
        let c = r.pop().expect("nonempty");
        if c != 0 {
            let sh = r.len() - dg;
            q[sh] = c;
            for (k, &gc) in g.iter().enumerate().take(dg) {
                r[sh + k] = submod(r[sh + k], mulmod(c, gc, p), p);
            }
        }
        up_trim(&mut r);
    }
    debug_assert!(r.is_empty(), "division must be exact");
    q
}

fn up_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = up_monic(a, p);
    let mut r1 = up_monic(b, p);
    while !r1.is_empty() {
        let r2 = up_rem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, up_monic(&r2, p));
    }
    r0
}

/// Squarefree part of a monic polynomial (monic output). Valid because
/// every degree here is far below p, so the derivative of a nonconstant
/// polynomial never vanishes.
fn up_squarefree(f: &[u64], p: u64) -> Vec<u64> {
    let d = up_deriv(f, p);
    if d.is_empty() {
        return f.to_vec();
    }
    let g = up_gcd(f, &d, p);
    if g.len() <= 1 {
        return f.to_vec();
    }
    up_divexact_monic(f, &g, p)
}

/// A univariate polynomial in one ring variable, as a sparse multivariate
/// term list (descending powers).
fn polyp_from_upoly(up: &[u64], nvars: usize, var: usize) -> PolyP {
    let terms = (0..up.len())
        .rev()
        .filter(|&k| up[k] != 0)
        .map(|k| {
            let mut e = vec![0u16; nvars];
            e[var] = u16::try_from(k).expect("degree fits in u16");
            (Monomial(e), up[k])
        })
        .collect();
    PolyP { terms }
}

fn rat_mod(c: &Rat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = u64::try_from(c.denom().mod_floor(&pb).magnitude().clone()).expect("residue fits");
    if den == 0 {
        return None;
    }
    let num = u64::try_from(c.numer().mod_floor(&pb).magnitude().clone()).expect("residue fits");
    Some(mulmod(num, invmod(den, p), p))
}

fn int_mod(c: &Int, p: u64) -> u64 {
    u64::try_from(c.mod_floor(&Int::from(p)).magnitude().clone()).expect("residue fits")
}

fn int_poly_mod(coeffs: &[Int], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = coeffs.iter().map(|c| int_mod(c, p)).collect();
    up_trim(&mut out);
    out
}

/// General division with remainder over Z/p (divisor need not be monic).
fn up_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let lead = *b.last().expect("division by zero polynomial");
    let bm = up_monic(b, p);
    let db = bm.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - db] = c;
        for (j, &bc) in bm.iter().enumerate() {
            rem[k - db + j] = submod(rem[k - db + j], mulmod(c, bc, p), p);
        }
    }
    // quotient so far is against the monic divisor; rescale
    let linv = invmod(lead, p);
    let mut quot = up_scale(&quot, linv, p);
    up_trim(&mut quot);
    up_trim(&mut rem);
    (quot, rem)
}

/// Inverse of `a` modulo `m` over Z/p; `None` when they share a factor.
fn up_invmod_poly(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), up_rem(a, &up_monic(m, p), p));
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = up_divrem(&r0, &r1, p);
        // t2 = t0 - q*t1
        let qt = up_mul(&q, &t1, p);
        let mut t2 = t0.clone();
        if t2.len() < qt.len() {
            t2.resize(qt.len(), 0);
        }
        for (c, &d) in t2.iter_mut().zip(&qt) {
            *c = submod(*c, d, p);
        }
        up_trim(&mut t2);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.len() != 1 {
        return None;
    }
    let ginv = invmod(r0[0], p);
    let mut out = up_scale(&t0, ginv, p);
    up_trim(&mut out);
    let mm = up_monic(m, p);
    Some(up_rem(&out, &mm, p))
}

// ----------------------------------------------------------------------
// Exact univariate gcd and modular inverse, computed from modular images
// and certified by exact divisibility / product checks.
// ----------------------------------------------------------------------

const MAX_UNI_PRIMES: usize = 1024;

fn ints_to_unipoly(v: Vec<Int>) -> UniPoly {
    UniPoly::new(v.into_iter().map(Rat::from_integer).collect())
}

/// Zero test for the pseudo-remainder of `f` by `g` over the integers;
/// equivalent to `g | f` over the rationals. `g` must be nonzero.
fn int_pseudo_divides(g: &[Int], f: &[Int]) -> bool {
    let dg = g.len() - 1;
    let lg = &g[dg];
    let mut rem = f.to_vec();
    while let Some(last) = rem.last() {
        if last.is_zero() {
            rem.pop();
            continue;
        }
        if rem.len() <= dg {
            break;
        }
        let k = rem.len() - 1;
        let lr = rem.pop().expect("nonempty");
        for c in rem.iter_mut() {
            *c *= lg;
        }
        for (j, gc) in g.iter().enumerate().take(dg) {
            rem[k - dg + j] -= &lr * gc;
        }
    }
    rem.iter().all(Zero::is_zero)
}

/// The gcd of two nonconstant primitive integer polynomials, in primitive
/// form with positive leading coefficient. Modular images of the minimal
/// degree seen are combined and the candidate is certified by exact
/// divisibility into both inputs; the degree of a good modular image is an
/// upper bound for the true degree, so divisibility alone is conclusive.
/// `None` when the prime budget runs out (caller falls back).
pub(crate) fn modular_int_gcd(a: &UniPoly, b: &UniPoly) -> Option<UniPoly> {
    let ai = a.int_coeffs()?;
    let bi = b.int_coeffs()?;
    if ai.len() < 2 || bi.len() < 2 {
        return None;
    }
    let lead_gcd = int_gcd(ai.last().expect("nonempty"), bi.last().expect("nonempty"));
    let mut images: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut best_deg = usize::MAX;
    let mut next_lift = 1usize;
    for idx in 0..MAX_UNI_PRIMES {
        let p = nth_prime_below_2_62(idx);
        let ap = int_poly_mod(&ai, p);
        let bp = int_poly_mod(&bi, p);
        if ap.len() != ai.len() || bp.len() != bi.len() {
            continue; // leading coefficient vanished: bad prime
        }
        let gp = up_gcd(&ap, &bp, p);
        let d = gp.len() - 1;
        if d == 0 {
            // coprime modulo a good prime: coprime over the rationals
            return Some(UniPoly::one());
        }
        if d < best_deg {
            best_deg = d;
            images.clear();
            next_lift = 1;
        }
        if d == best_deg {
            let scale = int_mod(&lead_gcd, p);
            images.push((p, up_scale(&gp, scale, p)));
        }
        if images.len() >= next_lift {
            next_lift *= 2;
            if let Some(g) = lift_int_images(&images, best_deg + 1) {
                let gi = g.int_coeffs().expect("primitive integer");
                if int_pseudo_divides(&gi, &ai) && int_pseudo_divides(&gi, &bi) {
                    return Some(g);
                }
            }
        }
    }
    None
}

/// Per-coefficient CRT over the images, mapped to the symmetric range and
/// normalized to primitive form with positive lead.
fn lift_int_images(images: &[(u64, Vec<u64>)], len: usize) -> Option<UniPoly> {
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let residues: Vec<(u64, u64)> = images
            .iter()
            .map(|(p, g)| (g.get(k).copied().unwrap_or(0), *p))
            .collect();
        let (r, m) = crt(&residues);
        let half = &m / Int::from(2);
        out.push(if r > half { r - &m } else { r });
    }
    if out.last().is_some_and(Zero::is_zero) {
        return None; // lead collapsed: images inconsistent at this size
    }
    Some(ints_to_unipoly(out).primitive_part())
}

/// Inverse of `f` modulo the squarefree integer polynomial `m`, computed
/// from modular images and certified by one exact product. The outer
/// `None` means "could not decide" (caller falls back to the exact
/// routine); `Some(None)` is a certified "not invertible".
pub(crate) fn modular_inverse_mod(f: &UniPoly, m: &UniPoly) -> Option<Option<UniPoly>> {
    if f.is_zero() || m.degree().is_none_or(|d| d == 0) {
        return None;
    }
    let g = modular_int_gcd(&f.primitive_part(), &m.primitive_part())?;
    if !g.is_one() {
        return Some(None);
    }
    let mi = m.primitive_part().int_coeffs().expect("primitive integer");
    let fr: Vec<Rat> = f.coeffs().to_vec();
    let mut images: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut next_lift = 2usize;
    for idx in 0..MAX_UNI_PRIMES {
        let p = nth_prime_below_2_62(idx);
        let mp = int_poly_mod(&mi, p);
        if mp.len() != mi.len() {
            continue;
        }
        let Some(fp) = fr.iter().map(|c| rat_mod(c, p)).collect::<Option<Vec<u64>>>() else {
            continue;
        };
        let mut fp = fp;
        up_trim(&mut fp);
        if fp.is_empty() {
            continue; // f collapsed modulo p: bad prime
        }
        let Some(ip) = up_invmod_poly(&fp, &mp, p) else {
            continue; // shared factor modulo p only: bad prime
        };
        images.push((p, ip));
        if images.len() >= next_lift {
            next_lift *= 2;
            if let Some(cand) = lift_rat_images(&images, mi.len() - 1) {
                if f.mul_mod(&cand, m).is_one() {
                    return Some(Some(cand));
                }
            }
        }
    }
    None
}

/// Per-coefficient CRT followed by rational reconstruction.
fn lift_rat_images(images: &[(u64, Vec<u64>)], len: usize) -> Option<UniPoly> {
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let residues: Vec<(u64, u64)> = images
            .iter()
            .map(|(p, g)| (g.get(k).copied().unwrap_or(0), *p))
            .collect();
        let (r, m) = crt(&residues);
        out.push(rational_reconstruct(&r, &m)?);
    }
    Some(UniPoly::new(out))
}

// ----------------------------------------------------------------------
// Linear algebra over Z/p: dense matrices and an incremental span that
// mirrors the exact one (same insert/express semantics).
// ----------------------------------------------------------------------

struct MatP {
    n: usize,
    a: Vec<u64>,
}

impl MatP {
    fn zero(n: usize) -> MatP {
        MatP { n, a: vec![0; n * n] }
    }

    fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.n + j] = v;
    }

    fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    fn mul_vec(&self, v: &[u64], p: u64) -> Vec<u64> {
        (0..self.n)
            .map(|i| {
                let row = &self.a[i * self.n..(i + 1) * self.n];
                row.iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| addmod(acc, mulmod(a, b, p), p))
            })
            .collect()
    }
}

struct SpanP {
    ambient: usize,
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
    reprs: Vec<Vec<u64>>,
    inserted: usize,
}

impl SpanP {
    fn new(ambient: usize, p: u64) -> SpanP {
        SpanP {
            ambient,
            p,
            rows: Vec::new(),
            reprs: Vec::new(),
            inserted: 0,
        }
    }

    fn reduce(&self, mut v: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut combo = vec![0u64; self.inserted];
        for ((pivot, row), repr) in self.rows.iter().zip(&self.reprs) {
            let f = v[*pivot];
            if f == 0 {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a = submod(*a, mulmod(f, *b, p), p);
            }
            for (a, b) in combo.iter_mut().zip(repr) {
                *a = addmod(*a, mulmod(f, *b, p), p);
            }
        }
        (v, combo)
    }

    fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (rest, combo) = self.reduce(v.to_vec());
        rest.iter().all(|&x| x == 0).then_some(combo)
    }

    fn insert(&mut self, v: Vec<u64>) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.ambient);
        let p = self.p;
        let (mut rest, mut combo) = self.reduce(v);
        let Some(pivot) = rest.iter().position(|&x| x != 0) else {
            return Some(combo);
        };
        let pinv = invmod(rest[pivot], p);
        for x in rest.iter_mut() {
            *x = mulmod(*x, pinv, p);
        }
        combo.push(0);
        let mut repr: Vec<u64> = combo
            .iter()
            .map(|&c| mulmod(submod(0, c, p), pinv, p))
            .collect();
        repr[self.inserted] = pinv;
        self.rows.push((pivot, rest));
        self.reprs.push(repr);
        self.inserted += 1;
        for r in self.reprs.iter_mut() {
            r.resize(self.inserted, 0);
        }
        None
    }
}

// ----------------------------------------------------------------------
// The quotient algebra of a zero-dimensional ideal over Z/p, mirroring the
// exact construction step for step so lucky primes reproduce the exact
// pipeline's control flow and data.
// ----------------------------------------------------------------------

struct QuotientP {
    dim: usize,
    one_idx: usize,
    mul: Vec<MatP>,
    p: u64,
}

fn build_quotient_p(
    basis: &[PolyP],
    qbasis: &[Monomial],
    nvars: usize,
    ord: MonomialOrder,
    p: u64,
    limits: &Limits,
) -> Result<QuotientP, GbError> {
    // TEMPORARY instrumentation (remove before ship)
    let t0 = std::time::Instant::now();
    let out = build_quotient_p_inner(basis, qbasis, nvars, ord, p, limits);
    crate::groebner::stats::add(
        &crate::groebner::stats::MOD_QUOT_NANOS,
        t0.elapsed().as_nanos() as u64,
    );
    out
}

fn build_quotient_p_inner(
    basis: &[PolyP],
    qbasis: &[Monomial],
    nvars: usize,
    ord: MonomialOrder,
    p: u64,
    limits: &Limits,
) -> Result<QuotientP, GbError> {
    let index: BTreeMap<&Monomial, usize> = qbasis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let reducers: Vec<&PolyP> = basis.iter().collect();
    let mut mul = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let mut t = MatP::zero(qbasis.len());
        for (j, b) in qbasis.iter().enumerate() {
            let shifted = PolyP {
                terms: vec![(b.mul(&Monomial::var(nvars, v)), 1)],
            };
            let nf = reduce_p(&shifted, &reducers, ord, p, limits)?;
            for (m, c) in &nf.terms {
                let i = *index.get(m).expect("normal form stays inside the staircase");
                t.set(i, j, *c);
            }
        }
        mul.push(t);
    }
    let one_idx = qbasis
        .iter()
        .position(|m| m.is_one())
        .expect("staircase contains the constant monomial");
    Ok(QuotientP {
        dim: qbasis.len(),
        one_idx,
        mul,
        p,
    })
}

impl QuotientP {
    fn one_vector(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.dim];
        v[self.one_idx] = 1;
        v
    }

    fn weighted_matrix(&self, weights: &[u64]) -> MatP {
        let p = self.p;
        let mut t = MatP::zero(self.dim);
        for (&w, m) in weights.iter().zip(&self.mul) {
            if w == 0 {
                continue;
            }
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let v = addmod(t.get(i, j), mulmod(w, m.get(i, j), p), p);
                    t.set(i, j, v);
                }
            }
        }
        t
    }

    /// Monic minimal polynomial of `t` on the class of 1, with the Krylov
    /// span.
    fn minpoly_on_one(&self, t: &MatP) -> (Vec<u64>, SpanP) {
        let mut span = SpanP::new(self.dim, self.p);
        let mut v = self.one_vector();
        loop {
            match span.insert(v.clone()) {
                Some(combo) => {
                    let k = combo.len();
                    let mut coeffs: Vec<u64> =
                        combo.iter().map(|&c| submod(0, c, self.p)).collect();
                    coeffs.resize(k + 1, 0);
                    coeffs[k] = 1;
                    return (coeffs, span);
                }
                None => v = t.mul_vec(&v, self.p),
            }
        }
    }

    fn variable_minpoly(&self, v: usize) -> Vec<u64> {
        self.minpoly_on_one(&self.mul[v]).0
    }

    /// Univariate description of the variety over the weighted linear form;
    /// `None` when the form's minimal polynomial degree falls short of the
    /// quotient dimension.
    fn shape(&self, weights: &[u64]) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
        let t = self.weighted_matrix(weights);
        let (minpoly, span) = self.minpoly_on_one(&t);
        if minpoly.len() - 1 != self.dim {
            return None;
        }
        let one = self.one_vector();
        let coords = self
            .mul
            .iter()
            .map(|m| span.express(&m.mul_vec(&one, self.p)))
            .collect::<Option<Vec<_>>>()?;
        Some((minpoly, coords))
    }
}

enum RadicalOutcome {
    /// Every variable's minimal polynomial is already squarefree.
    Unchanged,
    /// Rebuilt quotient of the radical ideal.
    Replaced(QuotientP),
    /// The radical came out positive-dimensional (bad prime).
    NotZeroDim,
    /// The radical came out trivial (bad prime).
    Degenerate,
}

/// Mirror of the exact radical repair: adds the squarefree part of each
/// variable's minimal polynomial and recomputes the basis and quotient.
fn radicalize_p(
    basis: &[PolyP],
    quot: &QuotientP,
    nvars: usize,
    ord: MonomialOrder,
    p: u64,
    limits: &Limits,
) -> Result<RadicalOutcome, GbError> {
    let mut extra: Vec<PolyP> = Vec::new();
    for v in 0..nvars {
        let mp = quot.variable_minpoly(v);
        let sf = up_squarefree(&mp, p);
        if sf.len() < mp.len() {
            extra.push(polyp_from_upoly(&sf, nvars, v));
        }
    }
    if extra.is_empty() {
        return Ok(RadicalOutcome::Unchanged);
    }
    let mut gens = basis.to_vec();
    gens.extend(extra);
    let basis2 = buchberger_p(&gens, ord, p, limits)?;
    if basis2.len() == 1 && basis2[0].is_nonzero_constant() {
        return Ok(RadicalOutcome::Degenerate);
    }
    let lts: Vec<&Monomial> = basis2.iter().map(PolyP::leading_monomial).collect();
    let Some(qb) = staircase_basis(&lts, nvars, ord) else {
        return Ok(RadicalOutcome::NotZeroDim);
    };
    let q2 = build_quotient_p(&basis2, &qb, nvars, ord, p, limits)?;
    Ok(RadicalOutcome::Replaced(q2))
}

// ----------------------------------------------------------------------
// Per-prime chart extraction protocol and its multi-modular lift.
// ----------------------------------------------------------------------

/// Canonical shape data of one prime: the monic squarefree defining
/// polynomial, plus the denominator/numerator tuple normalized to a monic
/// denominator (a fixed representative of the projective tuple, so images
/// of different primes align for remaindering).
struct ShapeDataP {
    pass: usize,
    attempt: usize,
    minpoly_deg: usize,
    qn1: Vec<u64>,
    u0: Vec<u64>,
    ui: Vec<Vec<u64>>,
}

enum OutcomeP {
    Trivial,
    NotZeroDim(isize),
    NoSeparating,
    Shape(ShapeDataP),
}

fn outcome_key(out: &OutcomeP) -> (u8, u64, u64, u64, u64) {
    match out {
        OutcomeP::Trivial => (0, 0, 0, 0, 0),
        OutcomeP::NotZeroDim(d) => (1, (d + 1) as u64, 0, 0, 0),
        OutcomeP::NoSeparating => (2, 0, 0, 0, 0),
        OutcomeP::Shape(s) => (
            3,
            s.pass as u64,
            s.attempt as u64,
            s.minpoly_deg as u64,
            s.qn1.len() as u64,
        ),
    }
}

/// Runs the whole chart-extraction pipeline modulo one prime: Groebner
/// basis, triviality and finiteness checks, quotient algebra, the exact
/// pipeline's ladder of separating-form attempts with one radical repair
/// in between, and canonicalization of the resulting univariate data.
/// `Ok(None)` marks the prime as unusable.
fn extract_p(
    gens_p: &[PolyP],
    wpasses: &[Vec<Vec<u64>>; 2],
    nvars: usize,
    ord: MonomialOrder,
    p: u64,
    limits: &Limits,
) -> Result<Option<OutcomeP>, GbError> {
    let basis = buchberger_p(gens_p, ord, p, limits)?;
    if basis.len() == 1 && basis[0].is_nonzero_constant() {
        return Ok(Some(OutcomeP::Trivial));
    }
    let lts: Vec<&Monomial> = basis.iter().map(PolyP::leading_monomial).collect();
    let Some(qbasis) = staircase_basis(&lts, nvars, ord) else {
        return Ok(Some(OutcomeP::NotZeroDim(dimension_from_lts(&lts, nvars))));
    };
    let quot0 = build_quotient_p(&basis, &qbasis, nvars, ord, p, limits)?;
    let mut current: Option<QuotientP> = None;
    for (pass, attempts) in wpasses.iter().enumerate() {
        let quot = current.as_ref().unwrap_or(&quot0);
        for (attempt, w) in attempts.iter().enumerate() {
            limits.check_deadline()?;
            // TEMPORARY instrumentation (remove before ship)
            let t0 = std::time::Instant::now();
            let shaped = quot.shape(w);
            crate::groebner::stats::add(
                &crate::groebner::stats::MOD_SHAPE_NANOS,
                t0.elapsed().as_nanos() as u64,
            );
            if let Some((minpoly, coords)) = shaped {
                let sf = up_squarefree(&minpoly, p);
                let d0 = up_deriv(&sf, p);
                let Some(&lead) = d0.last() else {
                    return Ok(None);
                };
                let lcinv = invmod(lead, p);
                let u0 = up_scale(&d0, lcinv, p);
                let ui = coords
                    .iter()
                    .map(|c| {
                        let r = up_rem(c, &sf, p);
                        let prod = up_mul(&r, &d0, p);
                        up_scale(&up_rem(&prod, &sf, p), lcinv, p)
                    })
                    .collect();
                return Ok(Some(OutcomeP::Shape(ShapeDataP {
                    pass,
                    attempt,
                    minpoly_deg: minpoly.len() - 1,
                    qn1: sf,
                    u0,
                    ui,
                })));
            }
        }
        if pass == 0 {
            match radicalize_p(&basis, quot, nvars, ord, p, limits)? {
                RadicalOutcome::Unchanged => {}
                RadicalOutcome::Replaced(q2) => current = Some(q2),
                RadicalOutcome::NotZeroDim => return Ok(Some(OutcomeP::NoSeparating)),
                RadicalOutcome::Degenerate => return Ok(None),
            }
        }
    }
    Ok(Some(OutcomeP::NoSeparating))
}

/// Multi-modular result of the chart extraction. A `Shape` carries the
/// canonical defining polynomial together with the rational
/// denominator/numerator tuple normalized to a monic denominator; the
/// caller rescales the tuple and must certify it by exact substitution
/// into the source equations before use.
pub(crate) enum ModularExtract {
    Trivial,
    NotZeroDim(isize),
    NoSeparating,
    Shape {
        pass: usize,
        attempt: usize,
        qn1: UniPoly,
        u0: UniPoly,
        ui: Vec<UniPoly>,
    },
}

/// Chart extraction by majority vote over word-size primes: per-prime runs
/// of the full pipeline are grouped by outcome, and the dominant group
/// (at least three primes) is lifted by remaindering and rational
/// reconstruction. `Ok(None)` means no stable majority emerged; the caller
/// falls back to the exact pipeline. Verdicts other than `Shape` carry no
/// certificate and stay Monte Carlo; a `Shape` becomes sound once the
/// caller's substitution check passes.
pub(crate) fn modular_chart_extract(
    gens: &[MultiPoly],
    ladder: &[Vec<Vec<Rat>>; 2],
    limits: &Limits,
) -> Result<Option<ModularExtract>, GbError> {
    let prim: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(MultiPoly::primitive)
        .collect();
    if prim.is_empty() {
        return Ok(None);
    }
    let nvars = prim[0].nvars();
    let ord = prim[0].order();
    const MAX_PRIMES: usize = 64;
    let mut runs: Vec<(u64, OutcomeP)> = Vec::new();
    let mut next_prime_index = 0usize;
    let mut target = 4usize;
    while target <= MAX_PRIMES {
        while runs.len() < target {
            limits.check_deadline()?;
            if next_prime_index >= 4 * MAX_PRIMES {
                return Ok(None);
            }
            let p = nth_prime_below_2_62(next_prime_index);
            next_prime_index += 1;
            let gens_p: Vec<PolyP> = prim.iter().map(|g| PolyP::from_multipoly(g, p)).collect();
            if gens_p.iter().any(PolyP::is_zero) {
                continue;
            }
            let Some(wpasses) = convert_ladder(ladder, p) else {
                continue;
            };
            match extract_p(&gens_p, &wpasses, nvars, ord, p, limits) {
                Ok(Some(out)) => runs.push((p, out)),
                Ok(None) => continue,
                Err(GbError::LimitExceeded(msg)) if msg.contains("deadline") => {
                    return Err(GbError::LimitExceeded(msg))
                }
                Err(_) => continue,
            }
        }
        target *= 2;
        let mut groups: BTreeMap<(u8, u64, u64, u64, u64), Vec<usize>> = BTreeMap::new();
        for (idx, (_, out)) in runs.iter().enumerate() {
            groups.entry(outcome_key(out)).or_default().push(idx);
        }
        let Some(best) = groups
            .values()
            .max_by_key(|idxs| (idxs.len(), std::cmp::Reverse(idxs[0])))
        else {
            return Ok(None);
        };
        if best.len() < 3 {
            continue;
        }
        match &runs[best[0]].1 {
            OutcomeP::Trivial => return Ok(Some(ModularExtract::Trivial)),
            OutcomeP::NotZeroDim(d) => return Ok(Some(ModularExtract::NotZeroDim(*d))),
            OutcomeP::NoSeparating => return Ok(Some(ModularExtract::NoSeparating)),
            OutcomeP::Shape(_) => {
                let members: Vec<(u64, &ShapeDataP)> = best
                    .iter()
                    .map(|&i| match &runs[i] {
                        (p, OutcomeP::Shape(s)) => (*p, s),
                        _ => unreachable!("grouped by outcome key"),
                    })
                    .collect();
                // TEMPORARY instrumentation (remove before ship)
                let t0 = std::time::Instant::now();
                let lifted = lift_shape(&members);
                crate::groebner::stats::add(
                    &crate::groebner::stats::MOD_LIFT_NANOS,
                    t0.elapsed().as_nanos() as u64,
                );
                if let Some(shape) = lifted {
                    return Ok(Some(shape));
                }
                // reconstruction overflowed the modulus: take more primes
            }
        }
    }
    Ok(None)
}

fn convert_ladder(ladder: &[Vec<Vec<Rat>>; 2], p: u64) -> Option<[Vec<Vec<u64>>; 2]> {
    let conv = |pass: &Vec<Vec<Rat>>| -> Option<Vec<Vec<u64>>> {
        pass.iter()
            .map(|w| w.iter().map(|c| rat_mod(c, p)).collect())
            .collect()
    };
    Some([conv(&ladder[0])?, conv(&ladder[1])?])
}

fn lift_upoly(
    members: &[(u64, &ShapeDataP)],
    sel: impl Fn(&ShapeDataP) -> &[u64],
    len: usize,
) -> Option<UniPoly> {
    let mut coeffs = Vec::with_capacity(len);
    for k in 0..len {
        let residues: Vec<(u64, u64)> = members
            .iter()
            .map(|&(p, s)| (sel(s).get(k).copied().unwrap_or(0), p))
            .collect();
        let (c, modulus) = crt(&residues);
        coeffs.push(rational_reconstruct(&c, &modulus)?);
    }
    Some(UniPoly::new(coeffs))
}

fn lift_shape(members: &[(u64, &ShapeDataP)]) -> Option<ModularExtract> {
    let s0 = members[0].1;
    let len = s0.qn1.len();
    let qn1 = lift_upoly(members, |s| &s.qn1, len)?.primitive_part();
    let u0 = lift_upoly(members, |s| &s.u0, len - 1)?;
    let ui = (0..s0.ui.len())
        .map(|v| lift_upoly(members, |s| &s.ui[v], len - 1))
        .collect::<Option<Vec<_>>>()?;
    Some(ModularExtract::Shape {
        pass: s0.pass,
        attempt: s0.attempt,
        qn1,
        u0,
        ui,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_int, Int};

    #[test]
    fn prime_sequence_starts_below_2_62() {
        let p0 = nth_prime_below_2_62(0);
        let p1 = nth_prime_below_2_62(1);
        assert!(p0 < (1 << 62) && is_prime_u64(p0));
        assert!(p1 < p0 && is_prime_u64(p1));
    }

    #[test]
    fn modular_inverse_roundtrips() {
        let p = nth_prime_below_2_62(0);
        for a in [1u64, 2, 12345, p - 1] {
            assert_eq!(mulmod(a, invmod(a, p), p), 1);
        }
    }

    #[test]
    fn rational_reconstruction_recovers_fraction() {
        // Reconstruct -22/7 from its residues mod two primes.
        let p0 = nth_prime_below_2_62(0);
        let p1 = nth_prime_below_2_62(1);
        let value = Rat::new(Int::from(-22), Int::from(7));
        let res = |p: u64| {
            let p_big = BigInt::from(p);
            let num = value.numer().mod_floor(&p_big);
            let num = u64::try_from(num.magnitude().clone()).unwrap();
            let den = value.denom().mod_floor(&p_big);
            let den = u64::try_from(den.magnitude().clone()).unwrap();
            mulmod(num, invmod(den, p), p)
        };
        let (c, m) = crt(&[(res(p0), p0), (res(p1), p1)]);
        assert_eq!(rational_reconstruct(&c, &m), Some(value));
    }

    #[test]
    fn crt_matches_both_residues() {
        let p0 = nth_prime_below_2_62(0);
        let p1 = nth_prime_below_2_62(1);
        let (x, m) = crt(&[(5, p0), (11, p1)]);
        assert_eq!(x.mod_floor(&BigInt::from(p0)), BigInt::from(5));
        assert_eq!(x.mod_floor(&BigInt::from(p1)), BigInt::from(11));
        assert_eq!(m, BigInt::from(p0) * BigInt::from(p1));
    }

    #[test]
    fn poly_arithmetic_mod_p_cancels() {
        let p = 101u64;
        let ord = MonomialOrder::GrevLex;
        let x = MultiPoly::var(2, ord, 0);
        let f = x.mul(&x).sub(&MultiPoly::constant(2, ord, rat_int(1)));
        let fp = PolyP::from_multipoly(&f, p);
        assert_eq!(fp.terms.len(), 2);
        // f - 1*f = 0 via sub_scaled with the unit shift
        let z = fp.sub_scaled(&fp, &Monomial::one(2), 1, ord, p);
        assert!(z.is_zero());
    }
}
