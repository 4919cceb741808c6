//! Groebner bases over the rationals and zero-dimensional quotient algebra
//! tools.
//!
//! Key operations:
//! - Buchberger's algorithm with the Gebauer-Moeller pair criteria and
//!   normal selection (smallest pair lcm first). Basis elements are kept in
//!   primitive integer form; reduction during basis construction uses
//!   pseudo-division with content stripping so all arithmetic stays in the
//!   integers.
//! - Reduced-basis normal forms (exact, rational) for quotient-algebra work.
//! - Krull dimension of the ideal via maximal independent variable sets of
//!   the leading-term ideal.
//! - For zero-dimensional ideals: the monomial quotient basis, per-variable
//!   multiplication matrices, minimal polynomials of linear forms via Krylov
//!   sequences, univariate-coordinate extraction when a linear form
//!   separates the points, and radicalization through per-variable minimal
//!   polynomials.
//!
//! Design notes: all computations are deterministic (no hashing-dependent
//! iteration); resource ceilings (deadline, basis size, coefficient size)
//! abort long runs with [`GbError::LimitExceeded`].

use crate::multipoly::{Monomial, MonomialOrder, MultiPoly};
use crate::qmatrix::QMatrix;
use crate::rat::Rat;
use crate::unipoly::UniPoly;
use num::{Integer, One, Zero};
use std::collections::BTreeMap;
use std::time::Instant;

// TEMPORARY instrumentation (remove before ship)
pub mod stats {
    use std::sync::atomic::{AtomicU64, Ordering};
    pub static GB_CALLS: AtomicU64 = AtomicU64::new(0);
    pub static GB_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static REDUCE_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static REDUCE_CALLS: AtomicU64 = AtomicU64::new(0);
    pub static REDUCE_STEPS: AtomicU64 = AtomicU64::new(0);
    pub static SKIP_STEPS: AtomicU64 = AtomicU64::new(0);
    pub static PAIRS: AtomicU64 = AtomicU64::new(0);
    pub static MAX_WORK_BITS: AtomicU64 = AtomicU64::new(0);
    pub static MAX_WORK_TERMS: AtomicU64 = AtomicU64::new(0);
    pub static MAX_OUT_BITS: AtomicU64 = AtomicU64::new(0);
    pub static QUOT_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static MINPOLY_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static SHAPE_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static OTHER_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static FROMALG_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static REALROOT_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static FILTER_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static REENC_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static UNION_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static MOD_GB_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static MOD_GB_CALLS: AtomicU64 = AtomicU64::new(0);
    pub static MOD_QUOT_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static MOD_SHAPE_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static MOD_LIFT_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static TUPLE_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static UGCD_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static UGCD_CALLS: AtomicU64 = AtomicU64::new(0);
    pub static UDIV_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static UXGCD_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static UDET_NANOS: AtomicU64 = AtomicU64::new(0);
    pub fn bump_max(cell: &AtomicU64, v: u64) {
        cell.fetch_max(v, Ordering::Relaxed);
    }
    pub fn add(cell: &AtomicU64, v: u64) {
        cell.fetch_add(v, Ordering::Relaxed);
    }
    pub fn dump() {
        let g = |c: &AtomicU64| c.load(Ordering::Relaxed);
        eprintln!(
            "[gb stats] calls={} gb_time={:.2}s reduce_time={:.2}s reduce_calls={} steps={} skips={} pairs={} max_bits={} max_terms={} out_bits={}",
            g(&GB_CALLS),
            g(&GB_NANOS) as f64 / 1e9,
            g(&REDUCE_NANOS) as f64 / 1e9,
            g(&REDUCE_CALLS),
            g(&REDUCE_STEPS),
            g(&SKIP_STEPS),
            g(&PAIRS),
            g(&MAX_WORK_BITS),
            g(&MAX_WORK_TERMS),
            g(&MAX_OUT_BITS),
        );
        eprintln!(
            "[phase stats] quotient={:.2}s minpoly={:.2}s shape={:.2}s other={:.2}s",
            g(&QUOT_NANOS) as f64 / 1e9,
            g(&MINPOLY_NANOS) as f64 / 1e9,
            g(&SHAPE_NANOS) as f64 / 1e9,
            g(&OTHER_NANOS) as f64 / 1e9,
        );
        eprintln!(
            "[param stats] fromalg={:.2}s roots={:.2}s filter={:.2}s reencode={:.2}s union={:.2}s",
            g(&FROMALG_NANOS) as f64 / 1e9,
            g(&REALROOT_NANOS) as f64 / 1e9,
            g(&FILTER_NANOS) as f64 / 1e9,
            g(&REENC_NANOS) as f64 / 1e9,
            g(&UNION_NANOS) as f64 / 1e9,
        );
        eprintln!(
            "[mod stats] gb={:.2}s calls={} quot={:.2}s shape={:.2}s lift={:.2}s tuple={:.2}s",
            g(&MOD_GB_NANOS) as f64 / 1e9,
            g(&MOD_GB_CALLS),
            g(&MOD_QUOT_NANOS) as f64 / 1e9,
            g(&MOD_SHAPE_NANOS) as f64 / 1e9,
            g(&MOD_LIFT_NANOS) as f64 / 1e9,
            g(&TUPLE_NANOS) as f64 / 1e9,
        );
        eprintln!(
            "[uni stats] gcd={:.2}s gcd_calls={} divides={:.2}s xgcd={:.2}s det={:.2}s",
            g(&UGCD_NANOS) as f64 / 1e9,
            g(&UGCD_CALLS),
            g(&UDIV_NANOS) as f64 / 1e9,
            g(&UXGCD_NANOS) as f64 / 1e9,
            g(&UDET_NANOS) as f64 / 1e9,
        );
    }
}

/// Failure modes of basis computation.
#[derive(Debug, thiserror::Error)]
pub enum GbError {
    /// A resource ceiling (time, basis size, coefficient size) was hit.
    #[error("computation exceeded resource limit: {0}")]
    LimitExceeded(String),
}

/// Resource ceilings for basis computation.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximum number of basis elements ever stored.
    pub max_basis: usize,
    /// Maximum bit length of any coefficient in a basis element.
    pub max_coeff_bits: u64,
    /// Wall-clock deadline.
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 4000,
            max_coeff_bits: 1 << 20,
            deadline: None,
        }
    }
}

impl Limits {
    pub(crate) fn check_deadline(&self) -> Result<(), GbError> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(GbError::LimitExceeded("deadline passed".into()));
            }
        }
        Ok(())
    }
}

fn max_coeff_bits(p: &MultiPoly) -> u64 {
    p.terms()
        .iter()
        .map(|(_, c)| c.numer().bits().max(c.denom().bits()))
        .max()
        .unwrap_or(0)
}

/// A Groebner basis: reduced, primitive integer coefficients, generators
/// sorted by ascending leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    ord: MonomialOrder,
    gens: Vec<MultiPoly>,
}

/// Reduces `f` by `reducers` to a normal form in which no term is divisible
/// by any reducer's leading monomial.
///
/// With `primitive` set, the result is only a nonzero rational multiple of
/// the true normal form: each step pseudo-reduces (scaling the whole work
/// polynomial by the reducer's leading coefficient) and strips integer
/// content. Without it, the reduction is exact.
fn reduce_by(
    f: &MultiPoly,
    reducers: &[&MultiPoly],
    primitive: bool,
    limits: &Limits,
) -> Result<MultiPoly, GbError> {
    reduce_by_mode(f, reducers, primitive, true, limits)
}

/// Top-reduction only: stops as soon as the leading term is irreducible.
fn top_reduce_by(
    f: &MultiPoly,
    reducers: &[&MultiPoly],
    limits: &Limits,
) -> Result<MultiPoly, GbError> {
    reduce_by_mode(f, reducers, true, false, limits)
}

fn reduce_by_mode(
    f: &MultiPoly,
    reducers: &[&MultiPoly],
    primitive: bool,
    tail: bool,
    limits: &Limits,
) -> Result<MultiPoly, GbError> {
    let t0 = Instant::now();
    stats::add(&stats::REDUCE_CALLS, 1);
    let mut work = if primitive { f.primitive() } else { f.clone() };
    let mut pos = 0;
    let mut steps = 0u32;
    let mut scale_ups = 0u32;
    while pos < work.num_terms() {
        steps += 1;
        if steps % 256 == 0 {
            limits.check_deadline()?;
        }
        let (mono, coeff) = work.terms()[pos].clone();
        let Some(g) = reducers
            .iter()
            .find(|g| !g.is_zero() && g.leading_monomial().divides(&mono))
        else {
            stats::add(&stats::SKIP_STEPS, 1);
            if !tail {
                break;
            }
            pos += 1;
            continue;
        };
        stats::add(&stats::REDUCE_STEPS, 1);
        stats::bump_max(&stats::MAX_WORK_BITS, max_coeff_bits(&work));
        stats::bump_max(&stats::MAX_WORK_TERMS, work.num_terms() as u64);
        let shift = mono.div(g.leading_monomial());
        if primitive {
            // (lc(g)/d)*work - (coeff/d)*shift*g with d = gcd(coeff, lc(g))
            // keeps integer coefficients exact while multiplying through by
            // the smallest possible factor. Full content stripping touches
            // every coefficient, so do it only occasionally and at the end.
            let d = coeff.numer().gcd(g.leading_coeff().numer());
            let up = Rat::from_integer(g.leading_coeff().numer() / &d);
            let mult = Rat::from_integer(coeff.numer() / d);
            if !up.is_one() {
                work = work.scale(&up);
                scale_ups += 1;
            }
            work = work.sub(&g.mul_term(&shift, &mult));
            if scale_ups >= 24 {
                work = work.primitive();
                scale_ups = 0;
            }
        } else {
            let factor = coeff / g.leading_coeff();
            work = work.sub(&g.mul_term(&shift, &factor));
        }
    }
    if primitive {
        work = work.primitive();
    }
    stats::bump_max(&stats::MAX_OUT_BITS, max_coeff_bits(&work));
    stats::add(&stats::REDUCE_NANOS, t0.elapsed().as_nanos() as u64);
    Ok(work)
}

/// A critical pair in Buchberger's algorithm.
#[derive(Clone, Debug)]
pub(crate) struct Pair {
    pub(crate) i: usize,
    pub(crate) j: usize,
    pub(crate) lcm: Monomial,
}

/// Gebauer-Moeller pair update: merges the pairs of a new element `t` into
/// the queue, discarding pairs covered by the standard criteria. Only the
/// leading monomials of the generators matter.
pub(crate) fn update_pairs(
    pairs: &mut Vec<Pair>,
    lts: &[Monomial],
    redundant: &[bool],
    t: usize,
) {
    let lt_t = &lts[t];
    // Candidate new pairs (i, t) for live generators i.
    let cand: Vec<Pair> = (0..t)
        .filter(|&i| !redundant[i])
        .map(|i| Pair {
            i,
            j: t,
            lcm: lts[i].lcm(lt_t),
        })
        .collect();
    // Drop (i,t) when another candidate's lcm properly divides its lcm, or
    // equals it (keep the first of each lcm value).
    let mut keep = vec![true; cand.len()];
    for a in 0..cand.len() {
        if !keep[a] {
            continue;
        }
        for b in 0..cand.len() {
            if a == b || !keep[a] {
                continue;
            }
            if keep[b] && cand[b].lcm.divides(&cand[a].lcm) && cand[b].lcm != cand[a].lcm {
                keep[a] = false;
            }
        }
    }
    // Equal lcm values: keep the earliest index.
    for a in 0..cand.len() {
        if !keep[a] {
            continue;
        }
        for b in (a + 1)..cand.len() {
            if keep[b] && cand[a].lcm == cand[b].lcm {
                keep[b] = false;
            }
        }
    }
    // Buchberger's first criterion: coprime leading terms reduce to zero.
    for (k, p) in cand.iter().enumerate() {
        if keep[k] && lts[p.i].is_coprime_with(lt_t) {
            keep[k] = false;
        }
    }
    // Old pairs made redundant by t: lt_t divides lcm(i,j) strictly inside.
    pairs.retain(|p| {
        !(lt_t.divides(&p.lcm)
            && lts[p.i].lcm(lt_t) != p.lcm
            && lts[p.j].lcm(lt_t) != p.lcm)
    });
    pairs.extend(
        cand.into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p)),
    );
}

/// Computes a Groebner basis of the ideal generated by `gens`.
///
/// All generators must share the variable count and monomial order. The
/// zero ideal yields an empty basis; an ideal containing a nonzero constant
/// yields the basis `{1}`.
pub fn buchberger(gens: &[MultiPoly], limits: &Limits) -> Result<GroebnerBasis, GbError> {
    let gb_t0 = Instant::now();
    stats::add(&stats::GB_CALLS, 1);
    let out = buchberger_inner(gens, limits);
    stats::add(&stats::GB_NANOS, gb_t0.elapsed().as_nanos() as u64);
    out
}

/// Exact certificate that `cand` is a Groebner basis whose ideal contains
/// every generator: each generator must reduce to zero against `cand`, and
/// every S-polynomial surviving the pair criteria must reduce to zero
/// (Buchberger's criterion). Both checks run in exact arithmetic, so a
/// verified candidate is safe to use in place of a basis computed directly
/// over the rationals.
fn verify_candidate(
    cand: &[MultiPoly],
    gens: &[&MultiPoly],
    limits: &Limits,
) -> Result<bool, GbError> {
    let refs: Vec<&MultiPoly> = cand.iter().collect();
    for g in gens {
        if !reduce_by(g, &refs, true, limits)?.is_zero() {
            return Ok(false);
        }
    }
    let lts: Vec<Monomial> = cand
        .iter()
        .map(|g| g.leading_monomial().clone())
        .collect();
    let redundant = vec![false; cand.len()];
    let mut pairs: Vec<Pair> = Vec::new();
    for t in 0..cand.len() {
        update_pairs(&mut pairs, &lts, &redundant, t);
    }
    for pair in pairs {
        limits.check_deadline()?;
        let (gi, gj) = (&cand[pair.i], &cand[pair.j]);
        let shift_i = pair.lcm.div(gi.leading_monomial());
        let shift_j = pair.lcm.div(gj.leading_monomial());
        let d = gi.leading_coeff().numer().gcd(gj.leading_coeff().numer());
        let ci = Rat::from_integer(gj.leading_coeff().numer() / &d);
        let cj = Rat::from_integer(gi.leading_coeff().numer() / d);
        let spoly = gi.mul_term(&shift_i, &ci).sub(&gj.mul_term(&shift_j, &cj));
        if !reduce_by(&spoly, &refs, true, limits)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn buchberger_inner(gens: &[MultiPoly], limits: &Limits) -> Result<GroebnerBasis, GbError> {
    let nonzero: Vec<&MultiPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Ok(GroebnerBasis {
            nvars: gens.first().map_or(0, MultiPoly::nvars),
            ord: gens.first().map_or(MonomialOrder::GrevLex, MultiPoly::order),
            gens: Vec::new(),
        });
    };
    let nvars = first.nvars();
    let ord = first.order();
    assert!(
        nonzero.iter().all(|g| g.nvars() == nvars && g.order() == ord),
        "generators disagree on variables or order"
    );

    // Fast path: multi-modular lift. Compute the reduced basis mod several
    // word-size primes (immune to coefficient swell), reconstruct a rational
    // candidate, and certify it exactly. Escalate the prime count while the
    // candidate fails to verify; fall through to the exact algorithm if the
    // lift never stabilizes.
    let prim_gens: Vec<MultiPoly> = nonzero.iter().map(|g| g.primitive()).collect();
    let mut lift = crate::modgb::ModularLift::new(prim_gens.clone());
    let prim_refs: Vec<&MultiPoly> = prim_gens.iter().collect();
    for _ in 0..5 {
        if let Some(cand) = lift.candidate(limits)? {
            if verify_candidate(&cand, &prim_refs, limits)? {
                return Ok(GroebnerBasis {
                    nvars,
                    ord,
                    gens: cand,
                });
            }
        }
    }

    let mut basis: Vec<MultiPoly> = Vec::new();
    let mut lts: Vec<Monomial> = Vec::new();
    let mut redundant: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let add_element = |basis: &mut Vec<MultiPoly>,
                           lts: &mut Vec<Monomial>,
                           redundant: &mut Vec<bool>,
                           pairs: &mut Vec<Pair>,
                           h: MultiPoly| {
        let t = basis.len();
        lts.push(h.leading_monomial().clone());
        basis.push(h);
        redundant.push(false);
        update_pairs(pairs, lts, redundant, t);
        let lt = lts[t].clone();
        for i in 0..t {
            if !redundant[i] && lt.divides(&lts[i]) {
                redundant[i] = true;
            }
        }
    };

    // Seed with the primitive generators, deterministically sorted. Each
    // seed is normal-formed against the basis so far, keeping the live
    // leading terms pairwise indivisible (interreduction relies on this).
    let mut seeds: Vec<MultiPoly> = nonzero.iter().map(|g| g.primitive()).collect();
    seeds.sort_by(|a, b| ord.cmp(a.leading_monomial(), b.leading_monomial()));
    seeds.dedup();
    for s in seeds {
        let live: Vec<&MultiPoly> = basis
            .iter()
            .zip(&redundant)
            .filter_map(|(g, r)| (!r).then_some(g))
            .collect();
        let h = top_reduce_by(&s, &live, limits)?;
        if h.is_zero() {
            continue;
        }
        if h.is_nonzero_constant() {
            return Ok(GroebnerBasis {
                nvars,
                ord,
                gens: vec![MultiPoly::one(nvars, ord)],
            });
        }
        add_element(&mut basis, &mut lts, &mut redundant, &mut pairs, h);
    }

    while !pairs.is_empty() {
        limits.check_deadline()?;
        if basis.len() > limits.max_basis {
            return Err(GbError::LimitExceeded(format!(
                "basis size exceeded {}",
                limits.max_basis
            )));
        }
        // Normal selection: smallest lcm in the monomial order, ties by
        // generator indices.
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
        stats::add(&stats::PAIRS, 1);
        let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
        let shift_i = pair.lcm.div(gi.leading_monomial());
        let shift_j = pair.lcm.div(gj.leading_monomial());
        let d = gi.leading_coeff().numer().gcd(gj.leading_coeff().numer());
        let ci = Rat::from_integer(gj.leading_coeff().numer() / &d);
        let cj = Rat::from_integer(gi.leading_coeff().numer() / d);
        let spoly = gi.mul_term(&shift_i, &ci).sub(&gj.mul_term(&shift_j, &cj));
        let live: Vec<&MultiPoly> = basis
            .iter()
            .zip(&redundant)
            .filter_map(|(g, r)| (!r).then_some(g))
            .collect();
        let h = top_reduce_by(&spoly, &live, limits)?;
        if h.is_zero() {
            continue;
        }
        if max_coeff_bits(&h) > limits.max_coeff_bits {
            return Err(GbError::LimitExceeded(format!(
                "coefficient size exceeded {} bits",
                limits.max_coeff_bits
            )));
        }
        if h.is_nonzero_constant() {
            return Ok(GroebnerBasis {
                nvars,
                ord,
                gens: vec![MultiPoly::one(nvars, ord)],
            });
        }
        add_element(&mut basis, &mut lts, &mut redundant, &mut pairs, h);
    }

    // Minimal basis: drop redundant elements; then tail-reduce each element
    // against the others (leading terms are pairwise indivisible, so a
    // single pass yields the reduced basis).
    let mut minimal: Vec<MultiPoly> = basis
        .into_iter()
        .zip(redundant)
        .filter_map(|(g, r)| (!r).then_some(g))
        .collect();
    minimal.sort_by(|a, b| ord.cmp(a.leading_monomial(), b.leading_monomial()));
    for i in 0..minimal.len() {
        let others: Vec<&MultiPoly> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then_some(g))
            .collect();
        let reduced = reduce_by(&minimal[i], &others, true, limits)?;
        debug_assert!(
            !reduced.is_zero(),
            "pairwise indivisible leading terms survive tail reduction"
        );
        minimal[i] = reduced;
    }
    if std::env::var("GB_TRACE").is_ok() {
        let final_bits = minimal.iter().map(max_coeff_bits).max().unwrap_or(0);
        let total_terms: usize = minimal.iter().map(MultiPoly::num_terms).sum();
        eprintln!(
            "[gb] nvars={} gens_in={} basis_out={} final_bits={} total_terms={}",
            nvars,
            gens.len(),
            minimal.len(),
            final_bits,
            total_terms
        );
    }
    Ok(GroebnerBasis {
        nvars,
        ord,
        gens: minimal,
    })
}

impl GroebnerBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.ord
    }

    /// The reduced basis elements (primitive integer form, ascending
    /// leading monomials).
    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    /// `true` when the ideal is the whole ring (empty variety).
    pub fn is_trivial(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_nonzero_constant()
    }

    /// Exact normal form of `f` modulo the basis.
    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        let refs: Vec<&MultiPoly> = self.gens.iter().collect();
        reduce_by(f, &refs, false, &Limits::default()).expect("no deadline set")
    }

    /// Normal form up to a nonzero rational factor (primitive integer
    /// output); zero iff `f` lies in the ideal.
    pub fn reduce_primitive(&self, f: &MultiPoly) -> MultiPoly {
        let refs: Vec<&MultiPoly> = self.gens.iter().collect();
        reduce_by(f, &refs, true, &Limits::default()).expect("no deadline set")
    }

    /// Ideal membership test.
    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.reduce_primitive(f).is_zero()
    }

    /// Krull dimension of the ideal: the maximum size of a variable set `S`
    /// such that no leading monomial has support inside `S`; `-1` for the
    /// trivial ideal (empty variety).
    pub fn dimension(&self) -> isize {
        if self.is_trivial() {
            return -1;
        }
        let lts: Vec<&Monomial> = self.gens.iter().map(MultiPoly::leading_monomial).collect();
        dimension_from_lts(&lts, self.nvars)
    }

    /// Monomial basis of the quotient algebra for a zero-dimensional ideal,
    /// ascending in the basis order; `None` when the ideal is not
    /// zero-dimensional (some variable has no pure power among the leading
    /// terms). The trivial ideal yields the empty basis.
    pub fn quotient_basis(&self) -> Option<Vec<Monomial>> {
        if self.is_trivial() {
            return Some(Vec::new());
        }
        let lts: Vec<&Monomial> = self.gens.iter().map(MultiPoly::leading_monomial).collect();
        staircase_basis(&lts, self.nvars, self.ord)
    }
}

/// Krull dimension read off the leading monomials of a reduced basis of a
/// nontrivial ideal: the largest variable set meeting no leading-term
/// support.
pub(crate) fn dimension_from_lts(lts: &[&Monomial], nvars: usize) -> isize {
    assert!(nvars <= 64, "dimension computation limited to 64 variables");
    let supports: Vec<u64> = lts
        .iter()
        .map(|m| {
            m.0.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |acc, (v, _)| acc | (1 << v))
        })
        .collect();
    fn dfs(supports: &[u64], nvars: usize, var: usize, mask: u64, size: usize, best: &mut usize) {
        if size + (nvars - var) <= *best {
            return;
        }
        if var == nvars {
            *best = (*best).max(size);
            return;
        }
        let with = mask | (1 << var);
        if supports.iter().all(|s| s & !with != 0) {
            dfs(supports, nvars, var + 1, with, size + 1, best);
        }
        dfs(supports, nvars, var + 1, mask, size, best);
    }
    let mut best = 0;
    dfs(&supports, nvars, 0, 0, 0, &mut best);
    best as isize
}

/// Monomial staircase below the leading-term ideal of a nontrivial reduced
/// basis, sorted ascending; `None` when some variable has no pure-power
/// leading monomial (the ideal is not zero-dimensional).
pub(crate) fn staircase_basis(
    lts: &[&Monomial],
    nvars: usize,
    ord: MonomialOrder,
) -> Option<Vec<Monomial>> {
    for v in 0..nvars {
        let has_cap = lts
            .iter()
            .any(|m| m.exp(v) > 0 && (0..nvars).all(|w| w == v || m.exp(w) == 0));
        if !has_cap {
            return None;
        }
    }
    // Breadth-first walk of the staircase below the leading-term ideal.
    let mut seen: BTreeMap<Monomial, ()> = BTreeMap::new();
    let mut queue = vec![Monomial::one(nvars)];
    seen.insert(queue[0].clone(), ());
    while let Some(m) = queue.pop() {
        for v in 0..nvars {
            let mut next = m.clone();
            next.0[v] += 1;
            if seen.contains_key(&next) || lts.iter().any(|lt| lt.divides(&next)) {
                continue;
            }
            seen.insert(next.clone(), ());
            queue.push(next);
        }
    }
    let mut basis: Vec<Monomial> = seen.into_keys().collect();
    basis.sort_by(|a, b| ord.cmp(a, b));
    Some(basis)
}

/// Converts a univariate polynomial into a polynomial in variable `var`.
pub fn univariate_to_multi(
    p: &UniPoly,
    nvars: usize,
    ord: MonomialOrder,
    var: usize,
) -> MultiPoly {
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let mut e = vec![0u16; nvars];
            e[var] = u16::try_from(k).expect("degree fits in u16");
            (Monomial(e), c.clone())
        })
        .collect();
    MultiPoly::new(nvars, ord, terms)
}

/// An incrementally built linear span with exact elimination; tracks how
/// each reduced vector decomposes over the inserted ones so dependencies
/// come out with explicit coefficients.
pub struct LinearSpan {
    ambient: usize,
    /// Reduced vectors with their pivot column (pivot entry normalized to 1).
    rows: Vec<(usize, Vec<Rat>)>,
    /// Row `k` of the span equals `sum_j reprs[k][j] * inserted[j]`.
    reprs: Vec<Vec<Rat>>,
    inserted: usize,
}

impl LinearSpan {
    pub fn new(ambient: usize) -> Self {
        LinearSpan {
            ambient,
            rows: Vec::new(),
            reprs: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Rat>) -> (Vec<Rat>, Vec<Rat>) {
        let mut combo = vec![Rat::zero(); self.inserted];
        for ((pivot, row), repr) in self.rows.iter().zip(&self.reprs) {
            let f = v[*pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a -= &f * b;
            }
            for (a, b) in combo.iter_mut().zip(repr) {
                *a += &f * b;
            }
        }
        (v, combo)
    }

    /// Expresses `v` over the inserted vectors; `None` if outside the span.
    pub fn express(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let (rest, combo) = self.reduce(v.to_vec());
        rest.iter().all(Zero::is_zero).then_some(combo)
    }

    /// Inserts `v`. If dependent on the previous insertions, returns the
    /// coefficients expressing it over them (and does not grow the span).
    pub fn insert(&mut self, v: Vec<Rat>) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient);
        let (mut rest, mut combo) = self.reduce(v);
        let Some(pivot) = rest.iter().position(|x| !x.is_zero()) else {
            return Some(combo);
        };
        // new independent vector: rest = inserted_new - sum(combo * inserted)
        let p = rest[pivot].clone();
        for x in rest.iter_mut() {
            *x /= &p;
        }
        combo.push(Rat::zero()); // extend repr to include the new vector
        let mut repr: Vec<Rat> = combo.iter().map(|c| -c / &p).collect();
        repr[self.inserted] = p.clone().recip();
        self.rows.push((pivot, rest));
        self.reprs.push(repr);
        self.inserted += 1;
        // keep earlier reprs the same length
        for r in self.reprs.iter_mut() {
            r.resize(self.inserted, Rat::zero());
        }
        None
    }
}

/// The quotient algebra of a zero-dimensional ideal: monomial basis and
/// per-variable multiplication matrices.
pub struct ZeroDimQuotient {
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    mul: Vec<QMatrix>,
}

/// Result of trying to express all coordinates as univariate polynomials in
/// a linear form `t`.
pub enum ShapeOutcome {
    /// The linear form separates: `minpoly` is its monic minimal polynomial
    /// of degree equal to the quotient dimension, and variable `v` equals
    /// `coords[v](t)` on the variety.
    Shape {
        minpoly: UniPoly,
        coords: Vec<UniPoly>,
    },
    /// The minimal polynomial degree fell short of the quotient dimension.
    NotShape { minpoly_degree: usize },
}

impl ZeroDimQuotient {
    /// Builds the quotient structure; `None` when the ideal is not
    /// zero-dimensional.
    pub fn new(gb: GroebnerBasis) -> Option<Self> {
        let t0 = Instant::now();
        let out = Self::new_inner(gb);
        stats::add(&stats::QUOT_NANOS, t0.elapsed().as_nanos() as u64);
        out
    }

    fn new_inner(gb: GroebnerBasis) -> Option<Self> {
        let basis = gb.quotient_basis()?;
        let index: BTreeMap<Monomial, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let nvars = gb.nvars();
        let ord = gb.order();
        let mut mul = Vec::with_capacity(nvars);
        for v in 0..nvars {
            let mut t = QMatrix::zero(basis.len(), basis.len());
            for (j, b) in basis.iter().enumerate() {
                let shifted = MultiPoly::new(
                    nvars,
                    ord,
                    vec![(b.mul(&Monomial::var(nvars, v)), Rat::one())],
                );
                let nf = gb.normal_form(&shifted);
                for (m, c) in nf.terms() {
                    let i = *index
                        .get(m)
                        .expect("normal form stays inside the quotient basis");
                    t.set(i, j, c.clone());
                }
            }
            mul.push(t);
        }
        Some(ZeroDimQuotient {
            gb,
            basis,
            index,
            mul,
        })
    }

    /// Dimension of the quotient algebra (number of points with
    /// multiplicity).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn basis_monomials(&self) -> &[Monomial] {
        &self.basis
    }

    /// Multiplication matrix of variable `v`.
    pub fn var_matrix(&self, v: usize) -> &QMatrix {
        &self.mul[v]
    }

    /// Multiplication matrix of the linear form `sum weights[v] * x_v`.
    pub fn weighted_matrix(&self, weights: &[Rat]) -> QMatrix {
        assert_eq!(weights.len(), self.gb.nvars());
        let d = self.dim();
        let mut t = QMatrix::zero(d, d);
        for (w, m) in weights.iter().zip(&self.mul) {
            if w.is_zero() {
                continue;
            }
            for i in 0..d {
                for j in 0..d {
                    let v = t.get(i, j) + w * m.get(i, j);
                    t.set(i, j, v);
                }
            }
        }
        t
    }

    /// Coordinate vector of the residue class of the constant 1.
    fn one_vector(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        let idx = *self
            .index
            .get(&Monomial::one(self.gb.nvars()))
            .expect("constant monomial lies in the quotient basis");
        v[idx] = Rat::one();
        v
    }

    /// Monic minimal polynomial of `t` acting on the class of 1, together
    /// with the Krylov span (vectors `t^k * 1`).
    pub fn minpoly_on_one(&self, t: &QMatrix) -> (UniPoly, LinearSpan) {
        let t0 = Instant::now();
        let out = self.minpoly_on_one_inner(t);
        stats::add(&stats::MINPOLY_NANOS, t0.elapsed().as_nanos() as u64);
        out
    }

    fn minpoly_on_one_inner(&self, t: &QMatrix) -> (UniPoly, LinearSpan) {
        let mut span = LinearSpan::new(self.dim());
        let mut v = self.one_vector();
        loop {
            match span.insert(v.clone()) {
                Some(combo) => {
                    // t^k * 1 = sum combo[i] * t^i * 1
                    let k = combo.len();
                    let mut coeffs = combo.iter().map(|c| -c).collect::<Vec<_>>();
                    coeffs.resize(k + 1, Rat::zero());
                    coeffs[k] = Rat::one();
                    return (UniPoly::new(coeffs), span);
                }
                None => v = t.mul_vec(&v),
            }
        }
    }

    /// Monic minimal polynomial of variable `v` on the class of 1; its
    /// roots are exactly the `v`-coordinates of the variety's points.
    pub fn variable_minpoly(&self, v: usize) -> UniPoly {
        self.minpoly_on_one(&self.mul[v]).0
    }

    /// Attempts a univariate description of the variety in terms of the
    /// linear form with the given weights: succeeds iff the form's minimal
    /// polynomial has degree equal to the quotient dimension.
    pub fn shape_parametrize(&self, weights: &[Rat]) -> ShapeOutcome {
        let t0 = Instant::now();
        let out = self.shape_parametrize_inner(weights);
        stats::add(&stats::SHAPE_NANOS, t0.elapsed().as_nanos() as u64);
        out
    }

    fn shape_parametrize_inner(&self, weights: &[Rat]) -> ShapeOutcome {
        let t = self.weighted_matrix(weights);
        let (minpoly, span) = self.minpoly_on_one(&t);
        let deg = minpoly.degree().unwrap_or(0);
        if deg != self.dim() {
            return ShapeOutcome::NotShape {
                minpoly_degree: deg,
            };
        }
        let coords = (0..self.gb.nvars())
            .map(|v| {
                let target = self.mul[v].mul_vec(&self.one_vector());
                let combo = span
                    .express(&target)
                    .expect("full Krylov span covers the quotient");
                UniPoly::new(combo)
            })
            .collect();
        ShapeOutcome::Shape { minpoly, coords }
    }

    /// `true` when `f` is invertible in the quotient algebra, decided by
    /// invertibility of its multiplication matrix.
    pub fn is_invertible(&self, f: &MultiPoly) -> bool {
        let d = self.dim();
        let mut t = QMatrix::zero(d, d);
        let nvars = self.gb.nvars();
        let ord = self.gb.order();
        for (j, b) in self.basis.iter().enumerate() {
            let shifted = f.mul(&MultiPoly::new(
                nvars,
                ord,
                vec![(b.clone(), Rat::one())],
            ));
            let nf = self.gb.normal_form(&shifted);
            for (m, c) in nf.terms() {
                t.set(self.index[m], j, c.clone());
            }
        }
        t.rank() == d
    }
}

/// Replaces a zero-dimensional ideal by its radical: adds the squarefree
/// part of each variable's minimal polynomial and recomputes the basis.
/// Returns the original basis unchanged when all of them are already
/// squarefree.
pub fn radical_zero_dim(
    quot: &ZeroDimQuotient,
    limits: &Limits,
) -> Result<GroebnerBasis, GbError> {
    let gb = quot.groebner();
    let nvars = gb.nvars();
    let ord = gb.order();
    let mut extra: Vec<MultiPoly> = Vec::new();
    for v in 0..nvars {
        let mp = quot.variable_minpoly(v);
        if !mp.is_squarefree() {
            extra.push(univariate_to_multi(
                &mp.squarefree_part(),
                nvars,
                ord,
                v,
            ));
        }
    }
    if extra.is_empty() {
        return Ok(gb.clone());
    }
    let mut gens: Vec<MultiPoly> = gb.generators().to_vec();
    gens.extend(extra);
    buchberger(&gens, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn var(nvars: usize, v: usize) -> MultiPoly {
        MultiPoly::var(nvars, MonomialOrder::GrevLex, v)
    }

    fn cst(nvars: usize, c: i64) -> MultiPoly {
        MultiPoly::constant(nvars, MonomialOrder::GrevLex, rat_int(c))
    }

    #[test]
    fn circle_line_intersection() {
        // x^2 + y^2 - 1 and x - y: two points on the diagonal
        let x = var(2, 0);
        let y = var(2, 1);
        let f = x.mul(&x).add(&y.mul(&y)).sub(&cst(2, 1));
        let g = x.sub(&y);
        let gb = buchberger(&[f.clone(), g.clone()], &Limits::default()).unwrap();
        assert!(!gb.is_trivial());
        assert_eq!(gb.dimension(), 0);
        assert!(gb.contains(&f));
        assert!(gb.contains(&g));
        // 2y^2 - 1 lies in the ideal
        let h = y.mul(&y).scale(&rat_int(2)).sub(&cst(2, 1));
        assert!(gb.contains(&h));
        assert!(!gb.contains(&x));
        let qb = gb.quotient_basis().unwrap();
        assert_eq!(qb.len(), 2);
    }

    #[test]
    fn spoly_reductions_vanish() {
        // Buchberger's criterion holds on the computed basis.
        let x = var(3, 0);
        let y = var(3, 1);
        let z = var(3, 2);
        let gens = vec![
            x.mul(&y).sub(&z),
            y.mul(&z).sub(&x),
            z.mul(&x).sub(&y),
        ];
        let gb = buchberger(&gens, &Limits::default()).unwrap();
        let gs = gb.generators();
        for i in 0..gs.len() {
            for j in (i + 1)..gs.len() {
                let lcm = gs[i].leading_monomial().lcm(gs[j].leading_monomial());
                let si = lcm.div(gs[i].leading_monomial());
                let sj = lcm.div(gs[j].leading_monomial());
                let spoly = gs[i]
                    .mul_term(&si, gs[j].leading_coeff())
                    .sub(&gs[j].mul_term(&sj, gs[i].leading_coeff()));
                assert!(gb.contains(&spoly));
            }
        }
        for g in gs {
            assert!(g.is_integer(), "basis kept in integer form");
        }
    }

    #[test]
    fn trivial_ideal_detection() {
        let x = var(1, 0);
        let gb = buchberger(
            &[x.clone(), x.add(&cst(1, 1))],
            &Limits::default(),
        )
        .unwrap();
        assert!(gb.is_trivial());
        assert_eq!(gb.dimension(), -1);
        assert_eq!(gb.quotient_basis().unwrap().len(), 0);
    }

    #[test]
    fn dimensions() {
        let x = var(2, 0);
        let y = var(2, 1);
        assert_eq!(
            buchberger(&[x.clone()], &Limits::default())
                .unwrap()
                .dimension(),
            1
        );
        assert_eq!(
            buchberger(&[x.mul(&y)], &Limits::default())
                .unwrap()
                .dimension(),
            1
        );
        assert_eq!(
            buchberger(&[x.clone(), y.clone()], &Limits::default())
                .unwrap()
                .dimension(),
            0
        );
        assert_eq!(
            buchberger(&[], &Limits::default()).unwrap().dimension() as usize,
            0
        );
        // zero ideal in two variables has dimension 2
        let zero = MultiPoly::zero(2, MonomialOrder::GrevLex);
        assert_eq!(
            buchberger(&[zero], &Limits::default()).unwrap().dimension(),
            2
        );
    }

    #[test]
    fn quotient_and_shape() {
        // x^2 = 1, y^3 = y: six points (±1, {0,±1})
        let x = var(2, 0);
        let y = var(2, 1);
        let gens = vec![
            x.mul(&x).sub(&cst(2, 1)),
            y.mul(&y).mul(&y).sub(&y),
        ];
        let gb = buchberger(&gens, &Limits::default()).unwrap();
        let quot = ZeroDimQuotient::new(gb).unwrap();
        assert_eq!(quot.dim(), 6);
        // multiplication matrices commute
        let tx = quot.var_matrix(0);
        let ty = quot.var_matrix(1);
        assert_eq!(tx.mul(ty), ty.mul(tx));
        // x alone does not separate six points
        match quot.shape_parametrize(&[rat_int(1), rat_int(0)]) {
            ShapeOutcome::NotShape { minpoly_degree } => assert_eq!(minpoly_degree, 2),
            ShapeOutcome::Shape { .. } => panic!("x cannot separate"),
        }
        // x + 3y takes six distinct values
        match quot.shape_parametrize(&[rat_int(1), rat_int(3)]) {
            ShapeOutcome::Shape { minpoly, coords } => {
                assert_eq!(minpoly.degree(), Some(6));
                assert!(minpoly.is_squarefree());
                // check x - coords[0](lambda) lies in the ideal
                for v in 0..2 {
                    let lam = MultiPoly::var(2, MonomialOrder::GrevLex, 0).add(
                        &MultiPoly::var(2, MonomialOrder::GrevLex, 1).scale(&rat_int(3)),
                    );
                    let mut acc = MultiPoly::zero(2, MonomialOrder::GrevLex);
                    for c in coords[v].coeffs().iter().rev() {
                        acc = acc.mul(&lam);
                        acc = acc.add(&MultiPoly::constant(2, MonomialOrder::GrevLex, c.clone()));
                    }
                    let diff = MultiPoly::var(2, MonomialOrder::GrevLex, v).sub(&acc);
                    assert!(quot.groebner().contains(&diff));
                }
            }
            ShapeOutcome::NotShape { .. } => panic!("x + 3y separates"),
        }
        // per-variable minimal polynomials
        assert_eq!(quot.variable_minpoly(0).degree(), Some(2));
        assert_eq!(quot.variable_minpoly(1).degree(), Some(3));
    }

    #[test]
    fn radicalization() {
        // x^2 and y - 1: double point at (0, 1)
        let x = var(2, 0);
        let y = var(2, 1);
        let gens = vec![x.mul(&x), y.sub(&cst(2, 1))];
        let gb = buchberger(&gens, &Limits::default()).unwrap();
        let quot = ZeroDimQuotient::new(gb).unwrap();
        assert_eq!(quot.dim(), 2);
        let rad = radical_zero_dim(&quot, &Limits::default()).unwrap();
        let rquot = ZeroDimQuotient::new(rad).unwrap();
        assert_eq!(rquot.dim(), 1);
    }

    #[test]
    fn invertibility_in_quotient() {
        // mod x^2 - 2: x is invertible, x^2 - 2 is zero, x - 2 is invertible
        let x = var(1, 0);
        let gens = vec![x.mul(&x).sub(&cst(1, 2))];
        let quot =
            ZeroDimQuotient::new(buchberger(&gens, &Limits::default()).unwrap()).unwrap();
        assert!(quot.is_invertible(&x));
        assert!(quot.is_invertible(&x.sub(&cst(1, 2))));
        assert!(!quot.is_invertible(&x.mul(&x).sub(&cst(1, 2))));
    }

    #[test]
    fn deadline_aborts() {
        let x = var(2, 0);
        let y = var(2, 1);
        let limits = Limits {
            deadline: Some(Instant::now() - std::time::Duration::from_secs(1)),
            ..Limits::default()
        };
        let f = x.mul(&x).add(&y.mul(&y)).sub(&cst(2, 1));
        let g = x.mul(&y).sub(&cst(2, 1));
        assert!(buchberger(&[f, g], &limits).is_err());
    }

    #[test]
    fn linear_span_dependencies() {
        let mut span = LinearSpan::new(3);
        assert!(span.insert(vec![rat_int(1), rat_int(0), rat_int(1)]).is_none());
        assert!(span.insert(vec![rat_int(0), rat_int(1), rat_int(1)]).is_none());
        let dep = span
            .insert(vec![rat_int(2), rat_int(3), rat_int(5)])
            .unwrap();
        assert_eq!(dep, vec![rat_int(2), rat_int(3)]);
        assert!(span
            .express(&[rat_int(1), rat_int(1), rat_int(2)])
            .is_some());
        assert!(span.express(&[rat_int(0), rat_int(0), rat_int(1)]).is_none());
    }
}
