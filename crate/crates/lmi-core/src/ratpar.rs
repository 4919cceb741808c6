//! Rational parametrizations of finite algebraic point sets.
//!
//! A finite set `Z` of points in affine `n`-space is stored as integer
//! polynomials `(q_0, q_1, ..., q_n, w)` in one variable `t`:
//!
//! ```text
//! Z = { (q_1(t)/q_0(t), ..., q_n(t)/q_0(t))  :  w(t) = 0 }
//! ```
//!
//! where `w` (the defining polynomial, `qn1` below) is squarefree with
//! content one and positive leading coefficient, every numerator has
//! degree below `deg w`, and `q_0` is a positive rational multiple of the
//! derivative `w'` (hence automatically coprime to `w`). The empty set is
//! encoded by `w = 1`. When the parameter is the value of a linear form
//! `sum_i weights_i * x_i` on the point set, those weights are recorded;
//! unions require both operands to use the same form.
//!
//! Operations: construction from per-coordinate polynomials in an
//! algebraic parameter, exact evaluation and refinement at real roots,
//! removal of points where a pencil drops below a target rank, re-encoding
//! to a new separating linear form, union of point sets, prepending a
//! constant coordinate, and linear coordinate images.

use crate::pencil::Pencil;
use crate::rat::{content, denominator_lcm, Int, Rat};
use crate::realroots::{isolate_real_roots, RealRoot};
use crate::unipoly::{ip_add, ip_mul, ip_sub, UniPoly};
use crate::groebner::LinearSpan;
use itertools::Itertools;
use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("parametrization invariant violated: {0}")]
    Invariant(String),
    #[error("the linear form does not separate the encoded points")]
    NotSeparating,
    #[error("operands assign different coordinates to a shared parameter value")]
    Collision,
    #[error("union operands carry different parameter forms")]
    WeightMismatch,
    #[error("rank filter verification failed after repeated redraws")]
    FilterFailed,
}

/// A finite point set in affine `n`-space, encoded over one parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    n: usize,
    /// Weights of the linear form whose value the parameter represents,
    /// when known.
    weights: Option<Vec<Rat>>,
    /// Defining polynomial: squarefree, content one, positive lead.
    qn1: UniPoly,
    /// Common denominator: a positive rational multiple of `qn1'`.
    q0: UniPoly,
    /// Coordinate numerators, degree below `deg qn1`.
    qi: Vec<UniPoly>,
}

fn coeff_vector(p: &UniPoly, len: usize) -> Vec<Rat> {
    (0..len).map(|k| p.coeff(k)).collect()
}

/// Scales a denominator/numerators tuple to the canonical representative of
/// its ray: clears denominators jointly, then removes the joint integer
/// content, keeping all coordinate ratios (and the proportionality of the
/// denominator to the defining polynomial's derivative) intact.
pub(crate) fn canonical_tuple(d0: &UniPoly, reduced: &[UniPoly]) -> (UniPoly, Vec<UniPoly>) {
    let scale = denominator_lcm(
        d0.coeffs()
            .iter()
            .chain(reduced.iter().flat_map(|p| p.coeffs().iter())),
    );
    let scale = Rat::from(scale);
    let mut q0 = d0.scale(&scale);
    let mut qi: Vec<UniPoly> = reduced.iter().map(|p| p.scale(&scale)).collect();
    let ints: Vec<Int> = q0
        .int_coeffs()
        .into_iter()
        .flatten()
        .chain(qi.iter().flat_map(|p| p.int_coeffs().into_iter().flatten()))
        .collect();
    let c = content(ints.iter());
    if !c.is_one() && !c.is_zero() {
        let inv = Rat::new(Int::one(), c);
        q0 = q0.scale(&inv);
        qi = qi.iter().map(|p| p.scale(&inv)).collect();
    }
    (q0, qi)
}


// TEMPORARY instrumentation (remove before ship)
struct PhaseTimer(&'static std::sync::atomic::AtomicU64, std::time::Instant);
impl PhaseTimer {
    fn new(cell: &'static std::sync::atomic::AtomicU64) -> Self {
        PhaseTimer(cell, std::time::Instant::now())
    }
}
impl Drop for PhaseTimer {
    fn drop(&mut self) {
        self.0.fetch_add(
            self.1.elapsed().as_nanos() as u64,
            std::sync::atomic::Ordering::Relaxed,
        );
    }
}

impl Parametrization {
    /// The empty point set in `n` coordinates.
    pub fn empty(n: usize) -> Self {
        Parametrization {
            n,
            weights: None,
            qn1: UniPoly::one(),
            q0: UniPoly::one(),
            qi: vec![UniPoly::zero(); n],
        }
    }

    /// Builds the normal form from a defining polynomial (any nonzero
    /// rational polynomial; its squarefree part is taken) and coordinate
    /// polynomials `x_i = p_i(t)` in the algebraic parameter.
    pub fn from_algebraic_coords(
        n: usize,
        minpoly: &UniPoly,
        coords: &[UniPoly],
        weights: Option<Vec<Rat>>,
    ) -> Result<Self, ParamError> {
        let _t = PhaseTimer::new(&crate::groebner::stats::FROMALG_NANOS);
        assert_eq!(coords.len(), n, "one coordinate polynomial per variable");
        assert!(!minpoly.is_zero(), "defining polynomial must be nonzero");
        if minpoly.degree().unwrap_or(0) == 0 {
            return Ok(Self::empty(n));
        }
        let qn1 = minpoly.squarefree_part().primitive_part();
        let d0 = qn1.derivative();
        let reduced: Vec<UniPoly> = coords
            .iter()
            .map(|p| p.rem(&qn1).mul_mod(&d0, &qn1))
            .collect();
        let (q0, qi) = canonical_tuple(&d0, &reduced);

        let out = Parametrization {
            n,
            weights,
            qn1,
            q0,
            qi,
        };
        out.validate()?;
        Ok(out)
    }

    /// Assembles a parametrization from already-canonical parts, checking
    /// every structural invariant.
    pub(crate) fn from_parts(
        n: usize,
        weights: Option<Vec<Rat>>,
        qn1: UniPoly,
        q0: UniPoly,
        qi: Vec<UniPoly>,
    ) -> Result<Self, ParamError> {
        let out = Parametrization {
            n,
            weights,
            qn1,
            q0,
            qi,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.qn1.is_one()
    }

    /// Degree of the defining polynomial (0 for the empty set).
    pub fn degree(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.qn1.degree().unwrap_or(0)
        }
    }

    pub fn defining_poly(&self) -> &UniPoly {
        &self.qn1
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.q0
    }

    pub fn numerators(&self) -> &[UniPoly] {
        &self.qi
    }

    pub fn weights(&self) -> Option<&[Rat]> {
        self.weights.as_deref()
    }

    /// Checks every structural invariant; all operations return values
    /// that satisfy this.
    pub fn validate(&self) -> Result<(), ParamError> {
        let fail = |msg: &str| Err(ParamError::Invariant(msg.to_string()));
        if self.qi.len() != self.n {
            return fail("coordinate count mismatch");
        }
        if let Some(w) = &self.weights {
            if w.len() != self.n {
                return fail("weight count mismatch");
            }
        }
        if self.is_empty() {
            if !self.q0.is_one() || self.qi.iter().any(|p| !p.is_zero()) {
                return fail("empty set must use unit denominator and zero numerators");
            }
            return Ok(());
        }
        let d = match self.qn1.degree() {
            Some(d) if d >= 1 => d,
            _ => return fail("defining polynomial must be nonconstant"),
        };
        if !self.qn1.is_integer() || !self.qn1.int_content().is_one() {
            return fail("defining polynomial must be integer with content one");
        }
        if !self.qn1.leading().is_positive() {
            return fail("defining polynomial must have positive leading coefficient");
        }
        if !self.qn1.is_squarefree() {
            return fail("defining polynomial must be squarefree");
        }
        if self.q0.is_zero() || !self.q0.is_integer() {
            return fail("denominator must be a nonzero integer polynomial");
        }
        if !self.q0.leading().is_positive() {
            return fail("denominator must have positive leading coefficient");
        }
        let d0 = self.qn1.derivative();
        if self.q0.scale(d0.leading()) != d0.scale(self.q0.leading()) {
            return fail("denominator must be proportional to the derivative");
        }
        if !self.qn1.gcd(&self.q0).is_nonzero_constant() {
            return fail("defining polynomial and denominator must be coprime");
        }
        for p in &self.qi {
            if !p.is_integer() {
                return fail("numerators must be integer polynomials");
            }
            if p.degree().unwrap_or(0) >= d && !p.is_zero() {
                return fail("numerator degree must stay below the defining degree");
            }
        }
        Ok(())
    }

    /// Isolating intervals for all real parameter values, ascending.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        let _t = PhaseTimer::new(&crate::groebner::stats::REALROOT_NANOS);
        if self.is_empty() {
            return Vec::new();
        }
        isolate_real_roots(&self.qn1)
    }

    /// Exact coordinates at a rational parameter value (`None` when the
    /// denominator vanishes there).
    pub fn coords_at(&self, t: &Rat) -> Option<Vec<Rat>> {
        let den = self.q0.eval(t);
        if den.is_zero() {
            return None;
        }
        Some(self.qi.iter().map(|p| p.eval(t) / den.clone()).collect())
    }

    /// Rational approximations of the coordinates at a real root, accurate
    /// far below `10^-digits` for display and comparison purposes (exact
    /// decisions always go through sign evaluation instead).
    pub fn approx_coords(&self, root: &mut RealRoot, digits: usize) -> Vec<Rat> {
        let mut extra = 2 * digits + 12;
        loop {
            let mid = root.approximate(extra);
            if let Some(coords) = self.coords_at(&mid) {
                return coords;
            }
            extra += 16;
            assert!(extra < 4 * digits + 400, "denominator vanishes at a root");
        }
    }

    /// The matrix `q_0(t) * A(x(t))` of the pencil composed with the
    /// parametrized point, entries reduced modulo the defining polynomial.
    /// Multiplying through by the common denominator keeps every entry a
    /// polynomial while preserving rank at each root (the denominator is
    /// nonzero there).
    pub fn composed_matrix(&self, pencil: &Pencil) -> Vec<Vec<UniPoly>> {
        assert_eq!(pencil.nvars(), self.n, "pencil variables must match");
        let m = pencil.size();
        let mats = pencil.matrices();
        let mut b = vec![vec![UniPoly::zero(); m]; m];
        for (row, col) in (0..m).cartesian_product(0..m) {
            let mut acc = self.q0.scale(mats[0].get(row, col));
            for (i, qi) in self.qi.iter().enumerate() {
                acc = acc.add(&qi.scale(mats[i + 1].get(row, col)));
            }
            b[row][col] = acc.rem(&self.qn1);
        }
        b
    }

    /// Removes the points where the pencil has rank strictly below `r`,
    /// using a random linear combination of all `r x r` minors, verified
    /// exactly: the combination's common factor with the defining
    /// polynomial must divide every single minor.
    pub fn rank_filter(
        &self,
        pencil: &Pencil,
        r: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self, ParamError> {
        let _t = PhaseTimer::new(&crate::groebner::stats::FILTER_NANOS);
        assert_eq!(pencil.nvars(), self.n, "pencil variables must match");
        if self.is_empty() || r == 0 {
            return Ok(self.clone());
        }
        let m = pencil.size();
        assert!(r <= m);
        let b = self.composed_matrix(pencil);
        // Every use of a minor below (zero test, random combination, root
        // membership, divisibility by a factor of the defining polynomial)
        // is invariant under nonzero scaling, so denominators are cleared
        // once and each minor is a fraction-free integer determinant kept
        // in primitive form.
        let den = Rat::from_integer(denominator_lcm(
            b.iter().flatten().flat_map(|e| e.coeffs().iter()),
        ));
        let bz: Vec<Vec<Vec<Int>>> = b
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.scale(&den).int_coeffs().expect("denominators cleared"))
                    .collect()
            })
            .collect();
        let mut minors: Vec<UniPoly> = Vec::new();
        {
            // TEMPORARY instrumentation (remove before ship)
            let _t = PhaseTimer::new(&crate::groebner::stats::UDET_NANOS);
            for rows in (0..m).combinations(r) {
                for cols in (0..m).combinations(r) {
                    let sub: Vec<Vec<&[Int]>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| bz[i][j].as_slice()).collect())
                        .collect();
                    let det = UniPoly::new(det_int(&sub).into_iter().map(Rat::from_integer).collect());
                    if !det.is_zero() {
                        minors.push(det.primitive_part());
                    }
                }
            }
        }
        if minors.is_empty() {
            // every point drops below the target rank
            return Ok(Self::empty(self.n));
        }
        for _ in 0..16 {
            let mut h = UniPoly::zero();
            for minor in &minors {
                let c: i64 = rng.gen_range(-1000..=1000);
                if c != 0 {
                    h = h.add(&minor.scale(&Rat::from(Int::from(c))));
                }
            }
            let g = self.qn1.gcd(&h);
            if g.is_nonzero_constant() {
                // the combination is nonzero at every root: no point has
                // all minors vanishing
                return Ok(self.clone());
            }
            if minors.iter().any(|minor| !g.divides(minor)) {
                // accidental cancellation at a full-rank point: redraw
                continue;
            }
            if g.degree() == self.qn1.degree() {
                return Ok(Self::empty(self.n));
            }
            let survivor = self.qn1.exact_div(&g).primitive_part();
            let inv = self
                .q0
                .inverse_mod(&survivor)
                .expect("denominator stays coprime to any factor");
            let coords: Vec<UniPoly> = self
                .qi
                .iter()
                .map(|q| q.rem(&survivor).mul_mod(&inv, &survivor))
                .collect();
            return Self::from_algebraic_coords(self.n, &survivor, &coords, self.weights.clone());
        }
        Err(ParamError::FilterFailed)
    }

    /// Re-expresses the set over the value of the linear form with the
    /// given weights. Fails when that form takes the same value on two
    /// distinct points.
    pub fn reencode(&self, weights: &[Rat]) -> Result<Self, ParamError> {
        let _t = PhaseTimer::new(&crate::groebner::stats::REENC_NANOS);
        assert_eq!(weights.len(), self.n);
        if self.is_empty() {
            let mut out = Self::empty(self.n);
            out.weights = Some(weights.to_vec());
            return Ok(out);
        }
        if self.weights.as_deref() == Some(weights) {
            return Ok(self.clone());
        }
        let d = self.qn1.degree().expect("nonempty");
        let inv = self
            .q0
            .inverse_mod(&self.qn1)
            .expect("denominator coprime to defining polynomial");
        let coords: Vec<UniPoly> = self
            .qi
            .iter()
            .map(|q| q.mul_mod(&inv, &self.qn1))
            .collect();
        let mut u = UniPoly::zero();
        for (w, p) in weights.iter().zip(&coords) {
            if !w.is_zero() {
                u = u.add(&p.scale(w));
            }
        }
        u = u.rem(&self.qn1);

        // Krylov basis of powers of the form's value in Q[t]/(qn1)
        let mut span = LinearSpan::new(d);
        let mut power = UniPoly::one();
        let minpoly = loop {
            match span.insert(coeff_vector(&power, d)) {
                None => power = power.mul_mod(&u, &self.qn1),
                Some(combo) => {
                    let k = combo.len();
                    let mut cs: Vec<Rat> = combo.into_iter().map(|c| -c).collect();
                    cs.resize(k, Rat::zero());
                    cs.push(Rat::one());
                    break UniPoly::new(cs);
                }
            }
        };
        let new_coords: Vec<UniPoly> = coords
            .iter()
            .map(|p| {
                span.express(&coeff_vector(p, d))
                    .map(UniPoly::new)
                    .ok_or(ParamError::NotSeparating)
            })
            .collect::<Result<_, _>>()?;
        Self::from_algebraic_coords(self.n, &minpoly, &new_coords, Some(weights.to_vec()))
    }

    /// Set union. Both operands must encode the value of the same linear
    /// form; shared parameter values must agree on all coordinates.
    pub fn union(&self, other: &Self) -> Result<Self, ParamError> {
        let _t = PhaseTimer::new(&crate::groebner::stats::UNION_NANOS);
        assert_eq!(self.n, other.n, "ambient dimensions must match");
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        match (&self.weights, &other.weights) {
            (Some(a), Some(b)) if a == b => {}
            _ => return Err(ParamError::WeightMismatch),
        }
        let g = self.qn1.gcd(&other.qn1);
        if !g.is_nonzero_constant() {
            for (qa, qb) in self.qi.iter().zip(&other.qi) {
                let mismatch = qa.mul(&other.q0).sub(&qb.mul(&self.q0)).rem(&g);
                if !mismatch.is_zero() {
                    return Err(ParamError::Collision);
                }
            }
        }
        let fresh = other.qn1.exact_div(&g).primitive_part();
        if fresh.is_nonzero_constant() {
            return Ok(self.clone());
        }
        // chinese-remainder combination over the coprime factors
        let inv_a = self.q0.inverse_mod(&self.qn1).expect("coprime");
        let inv_b = other.q0.inverse_mod(&fresh).expect("coprime");
        let product = self.qn1.mul(&fresh);
        // selector: 1 mod qn1_a and 0 mod fresh; its complement selects fresh
        let inv_fresh = fresh.inverse_mod(&self.qn1).expect("coprime factors");
        let sel_a = inv_fresh.mul(&fresh).rem(&product);
        let sel_b = UniPoly::one().sub(&sel_a);
        let coords: Vec<UniPoly> = self
            .qi
            .iter()
            .zip(&other.qi)
            .map(|(qa, qb)| {
                let pa = qa.mul_mod(&inv_a, &self.qn1);
                let pb = qb.rem(&fresh).mul_mod(&inv_b, &fresh);
                pa.mul_mod(&sel_a, &product).add(&pb.mul_mod(&sel_b, &product)).rem(&product)
            })
            .collect();
        Self::from_algebraic_coords(self.n, &product, &coords, self.weights.clone())
    }

    /// Prepends a coordinate with the constant value `t0`.
    pub fn lift(&self, t0: &Rat) -> Self {
        if self.is_empty() {
            return Self::empty(self.n + 1);
        }
        let den = Rat::from(t0.denom().clone());
        let first = self.q0.scale(&Rat::from(t0.numer().clone()));
        let mut qi = Vec::with_capacity(self.n + 1);
        qi.push(first);
        for p in &self.qi {
            qi.push(p.scale(&den));
        }
        let q0 = self.q0.scale(&den);
        let out = Parametrization {
            n: self.n + 1,
            weights: self
                .weights
                .as_ref()
                .map(|w| std::iter::once(Rat::zero()).chain(w.iter().cloned()).collect()),
            qn1: self.qn1.clone(),
            q0,
            qi,
        };
        debug_assert!(out.validate().is_ok());
        out
    }

    /// Applies the linear map `x -> mat * x` to every point. The recorded
    /// linear form does not transform with the points, so it is dropped.
    pub fn image(&self, mat: &crate::qmatrix::QMatrix) -> Self {
        assert_eq!(mat.ncols(), self.n, "matrix width must match coordinates");
        if self.is_empty() {
            return Self::empty(mat.nrows());
        }
        let rows: Vec<UniPoly> = (0..mat.nrows())
            .map(|i| {
                let mut acc = UniPoly::zero();
                for (j, q) in self.qi.iter().enumerate() {
                    let c = mat.get(i, j);
                    if !c.is_zero() {
                        acc = acc.add(&q.scale(c));
                    }
                }
                acc
            })
            .collect();
        let scale = Rat::from(denominator_lcm(rows.iter().flat_map(|p| p.coeffs().iter())));
        let out = Parametrization {
            n: mat.nrows(),
            weights: None,
            qn1: self.qn1.clone(),
            q0: self.q0.scale(&scale),
            qi: rows.iter().map(|p| p.scale(&scale)).collect(),
        };
        debug_assert!(out.validate().is_ok());
        out
    }
}

/// Determinant of a small square matrix of residues, reduced modulo the
/// defining polynomial (Laplace expansion).
/// Determinant of a matrix of integer coefficient vectors by cofactor
/// expansion along the first row, entirely over the integers.
fn det_int(mat: &[Vec<&[Int]>]) -> Vec<Int> {
    let k = mat.len();
    if k == 0 {
        return vec![Int::one()];
    }
    if k == 1 {
        return mat[0][0].to_vec();
    }
    let mut acc: Vec<Int> = Vec::new();
    for (j, &pivot) in mat[0].iter().enumerate() {
        if pivot.iter().all(Zero::is_zero) {
            continue;
        }
        let sub: Vec<Vec<&[Int]>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(c, &e)| (c != j).then_some(e))
                    .collect()
            })
            .collect();
        let term = ip_mul(pivot, &det_int(&sub));
        if j % 2 == 0 {
            ip_add(&mut acc, &term);
        } else {
            ip_sub(&mut acc, &term);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::QMatrix;
    use crate::rat::{rat, rat_int};
    use crate::seed::SeedStream;

    fn two_point_param() -> Parametrization {
        // points (1, 1) and (2, 4): x1 = t, x2 = t^2 on roots of (t-1)(t-2)
        let mu = UniPoly::from_ints(&[2, -3, 1]);
        let coords = vec![UniPoly::from_ints(&[0, 1]), UniPoly::from_ints(&[0, 0, 1])];
        Parametrization::from_algebraic_coords(
            2,
            &mu,
            &coords,
            Some(vec![rat_int(1), rat_int(0)]),
        )
        .unwrap()
    }

    #[test]
    fn construction_normalizes_and_validates() {
        let p = two_point_param();
        assert_eq!(p.degree(), 2);
        p.validate().unwrap();
        assert_eq!(
            p.coords_at(&rat_int(1)).unwrap(),
            vec![rat_int(1), rat_int(1)]
        );
        assert_eq!(
            p.coords_at(&rat_int(2)).unwrap(),
            vec![rat_int(2), rat_int(4)]
        );
        // denominator is proportional to the derivative of the square-free
        // defining polynomial
        let d0 = p.defining_poly().derivative();
        assert!(p
            .denominator()
            .scale(d0.leading())
            .sub(&d0.scale(p.denominator().leading()))
            .is_zero());
    }

    #[test]
    fn squarefree_part_is_taken_and_multiplicity_dropped() {
        // (t-1)^2 (t-2) with x1 = t: same point set as {1, 2}
        let mu = UniPoly::from_ints(&[-2, 5, -4, 1]);
        let p = Parametrization::from_algebraic_coords(
            1,
            &mu,
            &[UniPoly::from_ints(&[0, 1])],
            None,
        )
        .unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.real_roots().len(), 2);
    }

    #[test]
    fn reencode_to_second_coordinate() {
        let p = two_point_param();
        let w = vec![rat_int(0), rat_int(1)];
        let q = p.reencode(&w).unwrap();
        assert_eq!(q.degree(), 2);
        // new parameter is x2: values 1 and 4
        assert_eq!(
            q.coords_at(&rat_int(1)).unwrap(),
            vec![rat_int(1), rat_int(1)]
        );
        assert_eq!(
            q.coords_at(&rat_int(4)).unwrap(),
            vec![rat_int(2), rat_int(4)]
        );
        assert_eq!(q.weights().unwrap(), &w[..]);
    }

    #[test]
    fn reencode_rejects_non_separating_form() {
        // points (1, 1) and (1, 4): first coordinate does not separate
        let mu = UniPoly::from_ints(&[2, -3, 1]);
        let coords = vec![
            UniPoly::one(),
            UniPoly::from_ints(&[0, 0, 1]),
        ];
        let p = Parametrization::from_algebraic_coords(2, &mu, &coords, None).unwrap();
        let err = p.reencode(&[rat_int(1), rat_int(0)]).unwrap_err();
        assert!(matches!(err, ParamError::NotSeparating));
        // the second coordinate separates them fine
        let q = p.reencode(&[rat_int(0), rat_int(1)]).unwrap();
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn union_with_overlap_and_collision() {
        let w = Some(vec![rat_int(1)]);
        let line = |roots: &[i64]| {
            let mut mu = UniPoly::one();
            for &r in roots {
                mu = mu.mul(&UniPoly::from_ints(&[-r, 1]));
            }
            Parametrization::from_algebraic_coords(
                1,
                &mu,
                &[UniPoly::from_ints(&[0, 1])],
                w.clone(),
            )
            .unwrap()
        };
        let a = line(&[1, 2]);
        let b = line(&[2, 3]);
        let u = a.union(&b).unwrap();
        assert_eq!(u.degree(), 3);
        for t in [1i64, 2, 3] {
            assert_eq!(u.coords_at(&rat_int(t)).unwrap(), vec![rat_int(t)]);
        }
        // same parameter value 2 but coordinate shifted: must collide
        let mu = UniPoly::from_ints(&[-6, 5, -1]); // -(t-2)(t-3)
        let shifted = Parametrization::from_algebraic_coords(
            1,
            &mu,
            &[UniPoly::from_ints(&[1, 1])],
            w.clone(),
        )
        .unwrap();
        assert!(matches!(
            a.union(&shifted).unwrap_err(),
            ParamError::Collision
        ));
        // empty operands pass through
        assert_eq!(a.union(&Parametrization::empty(1)).unwrap(), a);
        assert_eq!(Parametrization::empty(1).union(&a).unwrap(), a);
    }

    #[test]
    fn lift_prepends_constant_coordinate() {
        let p = two_point_param();
        let lifted = p.lift(&rat(5, 2));
        assert_eq!(lifted.n(), 3);
        assert_eq!(
            lifted.coords_at(&rat_int(2)).unwrap(),
            vec![rat(5, 2), rat_int(2), rat_int(4)]
        );
        assert_eq!(
            lifted.weights().unwrap(),
            &[rat_int(0), rat_int(1), rat_int(0)]
        );
        lifted.validate().unwrap();
    }

    #[test]
    fn image_applies_linear_map() {
        let p = two_point_param();
        // (x1, x2) -> (x1 + x2, 3 x1)
        let mat = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(3), rat_int(0)],
        ]);
        let q = p.image(&mat);
        assert_eq!(
            q.coords_at(&rat_int(1)).unwrap(),
            vec![rat_int(2), rat_int(3)]
        );
        assert_eq!(
            q.coords_at(&rat_int(2)).unwrap(),
            vec![rat_int(6), rat_int(6)]
        );
        assert!(q.weights().is_none());
        q.validate().unwrap();
    }

    #[test]
    fn rank_filter_removes_rank_deficient_points() {
        // A(x) = diag(x, x): rank 0 at x = 0, rank 2 at x = 1
        let zero = QMatrix::zero(2, 2);
        let a1 = QMatrix::identity(2);
        let pencil = Pencil::new(2, 1, vec![zero, a1]).unwrap();
        let mu = UniPoly::from_ints(&[0, -1, 1]); // t(t-1)
        let p = Parametrization::from_algebraic_coords(
            1,
            &mu,
            &[UniPoly::from_ints(&[0, 1])],
            None,
        )
        .unwrap();
        let stream = SeedStream::new(7);
        let mut rng = stream.rng("filter", &[0]);
        let kept = p.rank_filter(&pencil, 1, &mut rng).unwrap();
        assert_eq!(kept.degree(), 1);
        assert_eq!(kept.coords_at(&rat_int(1)).unwrap(), vec![rat_int(1)]);
        // filtering at rank 0 never removes anything
        let same = p.rank_filter(&pencil, 0, &mut rng).unwrap();
        assert_eq!(same, p);
        // filtering at rank 2 keeps only the full-rank point; at rank 1
        // both points with rank below 1... only the origin is removed
        let kept2 = p.rank_filter(&pencil, 2, &mut rng).unwrap();
        assert_eq!(kept2.degree(), 1);
    }

    #[test]
    fn approx_coords_refine_to_requested_accuracy() {
        // x = t on roots of t^2 - 2: the positive root gives sqrt(2)
        let mu = UniPoly::from_ints(&[-2, 0, 1]);
        let p = Parametrization::from_algebraic_coords(
            1,
            &mu,
            &[UniPoly::from_ints(&[0, 1])],
            None,
        )
        .unwrap();
        let mut roots = p.real_roots();
        assert_eq!(roots.len(), 2);
        let approx = p.approx_coords(&mut roots[1], 12)[0].clone();
        let err = (approx.clone() * approx - rat_int(2)).abs();
        assert!(err < rat(1, 1_000_000_000_000));
    }
}
