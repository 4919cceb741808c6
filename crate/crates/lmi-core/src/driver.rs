//! End-to-end solver: decides whether the spectrahedron `A(x) >= 0` is
//! nonempty and, when it is, produces a rational parametrization of a
//! finite candidate set containing a feasible point of minimal rank,
//! together with the verified witness root and its rank.
//!
//! Outline, for each target rank `r` from 1 upward (rank 0 is handled by
//! exact linear algebra):
//!
//! 1. When the variable count is below the generic codimension of the
//!    rank-`r` locus, that locus is generically empty; the minor ideal is
//!    checked directly, and a zero-dimensional non-generic locus is
//!    parametrized straight from its quotient algebra.
//! 2. Otherwise each row choice' incidence system is (optionally) checked
//!    for smoothness of expected dimension; then the recursion below runs.
//! 3. Recursion over levels: at each level the pencil variables are mixed
//!    by a random invertible matrix, the critical points of the projection
//!    to the first coordinate are computed per row choice from the
//!    simplified Lagrange system, points dropping below rank `r` are
//!    filtered out, and the level concludes by fixing the first (original)
//!    coordinate at a random value and recursing on the rest. All parts
//!    are re-encoded to one separating linear form and merged.
//!
//! Every candidate set is finally screened by exact sign conditions on the
//! characteristic coefficients; the first accepted root (in ascending
//! order of the parameter) becomes the witness.

use crate::bounds::binomial;
use crate::feasibility::{check_lmi, FeasError};
use crate::groebner::{
    buchberger, radical_zero_dim, GbError, Limits, ShapeOutcome, ZeroDimQuotient,
};
use crate::incidence::{Incidence, Regularity};
use crate::lagrange::simplified_lagrange;
use crate::modgb::{modular_chart_extract, ModularExtract};
use crate::multipoly::{poly_matrix_det, MonomialOrder, MultiPoly};
use crate::pencil::Pencil;
use crate::qmatrix::QMatrix;
use crate::rat::{rat_int, Int, Rat};
use crate::ratpar::{canonical_tuple, ParamError, Parametrization};
use crate::seed::SeedStream;
use crate::unipoly::{ip_add, ip_mul, UniPoly};
use itertools::Itertools;
use num::{One, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    /// The input violates a genericity assumption the algorithm relies on.
    #[error("genericity failure: {0}")]
    Genericity(String),
    /// A resource ceiling (time, basis size, coefficient growth) was hit.
    #[error("resource limit exceeded: {0}")]
    Timeout(String),
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<GbError> for SolverError {
    fn from(e: GbError) -> Self {
        match e {
            GbError::LimitExceeded(msg) => SolverError::Timeout(msg),
        }
    }
}

impl From<FeasError> for SolverError {
    fn from(e: FeasError) -> Self {
        SolverError::Internal(e.to_string())
    }
}

/// Tunable parameters of one solver run.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Root seed; every random draw below derives from it.
    pub seed: u64,
    /// Magnitude bound for random change-of-variable matrices and fiber
    /// values.
    pub coeff_bound: i64,
    /// Skip the per-row-choice smoothness verification.
    pub skip_regularity: bool,
    /// Resource ceilings shared by all basis computations.
    pub limits: Limits,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            coeff_bound: 100,
            skip_regularity: false,
            limits: Limits::default(),
        }
    }
}

/// Final verdict of a solve.
#[derive(Clone, Debug)]
pub enum Outcome {
    /// `A(x) = 0` has an exact rational solution (rank 0 witness).
    LinearPoint(Vec<Rat>),
    /// A feasible point of rank `rank` sits at the given real root of the
    /// parametrization.
    Witness {
        rank: usize,
        param: Parametrization,
        root_index: usize,
    },
    /// The spectrahedron is empty.
    Empty,
}

/// Degrees observed for one row choice at one recursion level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartRecord {
    pub rank: usize,
    /// Variable count at this level.
    pub level: usize,
    /// Pinned rows of the chart; empty for the direct low-dimension path.
    pub chart: Vec<usize>,
    /// Degree of the chart parametrization before rank filtering.
    pub raw_degree: usize,
    /// Degree after rank filtering.
    pub degree: usize,
}

/// Degree of the merged parametrization of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRecord {
    pub rank: usize,
    pub level: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, Default)]
pub struct DegreeLedger {
    pub charts: Vec<ChartRecord>,
    pub levels: Vec<LevelRecord>,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub ledger: DegreeLedger,
}

/// Exact rational solution of `A(x) = 0`, when one exists (free variables
/// are set to zero, so the all-zero pencil yields the origin).
pub fn solve_linear(pencil: &Pencil) -> Option<Vec<Rat>> {
    let m = pencil.size();
    let n = pencil.nvars();
    let mats = pencil.matrices();
    let mut rows = Vec::with_capacity(m * (m + 1) / 2);
    let mut rhs = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            rows.push((0..n).map(|v| mats[v + 1].get(i, j).clone()).collect());
            rhs.push(-mats[0].get(i, j).clone());
        }
    }
    QMatrix::from_rows(rows).solve(&rhs)
}

/// Decides feasibility and reports the witness with its degree ledger.
pub fn solve(pencil: &Pencil, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    let mut ledger = DegreeLedger::default();
    if let Some(x) = solve_linear(pencil) {
        return Ok(SolveReport {
            outcome: Outcome::LinearPoint(x),
            ledger,
        });
    }
    let stream = SeedStream::new(config.seed);
    for r in 1..pencil.size() {
        let param = low_rank_candidates(pencil, r, config, &stream, &mut ledger)?;
        if param.is_empty() {
            continue;
        }
        if let Some(report) = check_lmi(pencil, &param)? {
            if report.rank != r {
                return Err(SolverError::Genericity(format!(
                    "accepted point has rank {} but was produced for target rank {r}",
                    report.rank
                )));
            }
            return Ok(SolveReport {
                outcome: Outcome::Witness {
                    rank: r,
                    param,
                    root_index: report.index,
                },
                ledger,
            });
        }
    }
    Ok(SolveReport {
        outcome: Outcome::Empty,
        ledger,
    })
}

/// Candidate points for one target rank: a parametrization of a finite set
/// meeting every connected component of the rank-`r` locus that could
/// contain a minimal-rank feasible point.
pub fn low_rank_candidates(
    pencil: &Pencil,
    r: usize,
    config: &SolverConfig,
    stream: &SeedStream,
    ledger: &mut DegreeLedger,
) -> Result<Parametrization, SolverError> {
    let m = pencil.size();
    let n = pencil.nvars();
    let corank = m - r;
    let generic_codim = binomial(corank as i64 + 1, 2) as usize;
    if n < generic_codim {
        // generically empty; decide the degenerate cases exactly
        let minors = rank_minor_ideal(pencil, r + 1);
        return match chart_shape(&minors, n, n, config, stream, &[r as u64])? {
            ChartShape::Trivial => Ok(Parametrization::empty(n)),
            ChartShape::NotZeroDim(d) => Err(SolverError::Genericity(format!(
                "rank-{r} locus has dimension {d} in {n} variables; expected empty or finite"
            ))),
            ChartShape::NoSeparating => Err(SolverError::Genericity(format!(
                "no linear form separates the rank-{r} locus"
            ))),
            ChartShape::Done(param) => {
                let mut rng = stream.rng("filter-direct", &[r as u64]);
                let filtered = param
                    .rank_filter(pencil, r, &mut rng)
                    .map_err(|e| SolverError::Genericity(e.to_string()))?;
                ledger.charts.push(ChartRecord {
                    rank: r,
                    level: n,
                    chart: Vec::new(),
                    raw_degree: param.degree(),
                    degree: filtered.degree(),
                });
                ledger.levels.push(LevelRecord {
                    rank: r,
                    level: n,
                    degree: filtered.degree(),
                });
                Ok(filtered)
            }
        };
    }
    if !config.skip_regularity {
        for iota in (0..m).combinations(corank) {
            let inc = Incidence::new(pencil, r, &iota);
            match inc.regularity(&config.limits)? {
                Regularity::Regular | Regularity::EmptyVariety => {}
                Regularity::WrongDimension { found, expected } => {
                    return Err(SolverError::Genericity(format!(
                        "incidence system for rows {iota:?} has dimension {found}, expected {expected}"
                    )));
                }
                Regularity::SingularLocus => {
                    return Err(SolverError::Genericity(format!(
                        "incidence system for rows {iota:?} is singular"
                    )));
                }
            }
        }
    }
    low_rank_recursive(pencil, r, config, stream, ledger)
}

/// All `k x k` minors of the pencil, deduplicated by symmetry: the minor
/// on rows `R`, columns `C` equals the one on rows `C`, columns `R`.
pub fn rank_minor_ideal(pencil: &Pencil, k: usize) -> Vec<MultiPoly> {
    let m = pencil.size();
    let n = pencil.nvars();
    let ord = MonomialOrder::GrevLex;
    let entries: Vec<Vec<MultiPoly>> = (0..m)
        .map(|i| (0..m).map(|j| pencil.entry_poly(i, j, n, ord)).collect())
        .collect();
    let subsets: Vec<Vec<usize>> = (0..m).combinations(k).collect();
    let mut out = Vec::new();
    for (a, rows) in subsets.iter().enumerate() {
        for cols in subsets.iter().skip(a) {
            let sub: Vec<Vec<MultiPoly>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| entries[i][j].clone()).collect())
                .collect();
            let det = poly_matrix_det(n, ord, &sub);
            if !det.is_zero() {
                out.push(det);
            }
        }
    }
    out
}

/// Linear-form weights: the deterministic ramp `1..=len` first, then
/// seeded nonzero draws.
fn lambda_weights(len: usize, attempt: usize, stream: &SeedStream, tag: &str, ids: &[u64]) -> Vec<Rat> {
    if attempt == 0 {
        return (1..=len as i64).map(rat_int).collect();
    }
    let mut ids = ids.to_vec();
    ids.push(attempt as u64);
    let mut rng = stream.rng(tag, &ids);
    (0..len)
        .map(|_| {
            let mut v = 0i64;
            while v == 0 {
                v = rng.gen_range(-50..=50);
            }
            rat_int(v)
        })
        .collect()
}

/// One separating-form candidate: full-width weights plus, when the form
/// only involves the coordinate block, the width of that prefix.
struct LadderEntry {
    weights: Vec<Rat>,
    x_prefix: Option<usize>,
}

/// The deterministic ladder of separating-form attempts for one chart: per
/// pass, ramp and seeded forms over the coordinate block first, then seeded
/// forms over all variables. The second pass reuses the same recipe after a
/// radicality repair.
fn shape_ladder(nx: usize, nv: usize, stream: &SeedStream, ids: &[u64]) -> [Vec<LadderEntry>; 2] {
    std::array::from_fn(|pass| {
        let pass = pass as u64;
        let mut entries = Vec::with_capacity(5);
        for attempt in 0..3usize {
            let mut ids_pass = ids.to_vec();
            ids_pass.push(pass);
            let mut w = lambda_weights(nx, attempt, stream, "shape-x", &ids_pass);
            w.resize(nv, Rat::zero());
            entries.push(LadderEntry {
                weights: w,
                x_prefix: Some(nx),
            });
        }
        for attempt in 1..3usize {
            let mut ids_pass = ids.to_vec();
            ids_pass.push(pass + 8);
            let w = lambda_weights(nv, attempt, stream, "shape-full", &ids_pass);
            entries.push(LadderEntry {
                weights: w,
                x_prefix: None,
            });
        }
        entries
    })
}

/// Shape extraction with bounded retries over a fixed attempt ladder, with
/// one radicality repair pass in between when nothing separates.
fn shape_with_attempts(
    quot: &ZeroDimQuotient,
    ladder: &[Vec<LadderEntry>; 2],
    limits: &Limits,
) -> Result<Option<(UniPoly, Vec<UniPoly>, Option<Vec<Rat>>)>, SolverError> {
    let mut current: Option<ZeroDimQuotient> = None;
    for (pass, entries) in ladder.iter().enumerate() {
        let quot_ref = current.as_ref().unwrap_or(quot);
        for entry in entries {
            if let ShapeOutcome::Shape { minpoly, coords } = quot_ref.shape_parametrize(&entry.weights)
            {
                let weights = entry.x_prefix.map(|nx| entry.weights[..nx].to_vec());
                return Ok(Some((minpoly, coords, weights)));
            }
        }
        if pass == 0 {
            // separation can only fail this consistently on a non-radical
            // quotient; repair multiplicities once and retry
            let radical = radical_zero_dim(quot_ref, limits)?;
            match ZeroDimQuotient::new(radical) {
                Some(q) => current = Some(q),
                None => return Ok(None),
            }
        }
    }
    Ok(None)
}

/// Outcome of resolving one chart system into a parametrization.
enum ChartShape {
    /// The system has no solutions.
    Trivial,
    /// The solution set is not finite (its dimension is reported).
    NotZeroDim(isize),
    /// No attempted linear form separates the solutions.
    NoSeparating,
    /// Canonical parametrization of the coordinate block.
    Done(Parametrization),
}

/// Exact substitution certificate: every parametrized point satisfies every
/// source equation. Checks, per equation `f` of total degree `D`, that the
/// homogenized substitution `q0^D * f(u_1/q0, ..., u_nv/q0)` vanishes
/// modulo the defining polynomial. Scaling the tuple does not affect the
/// test, so it certifies any representative of the ray.
fn tuple_satisfies(system: &[MultiPoly], qn1: &UniPoly, u0: &UniPoly, ui: &[UniPoly]) -> bool {
    // TEMPORARY instrumentation (remove before ship)
    let t0 = std::time::Instant::now();
    let out = tuple_satisfies_inner(system, qn1, u0, ui);
    crate::groebner::stats::add(
        &crate::groebner::stats::TUPLE_NANOS,
        t0.elapsed().as_nanos() as u64,
    );
    out
}

fn tuple_satisfies_inner(system: &[MultiPoly], qn1: &UniPoly, u0: &UniPoly, ui: &[UniPoly]) -> bool {
    // Integer arithmetic throughout: scale the tuple (harmless, the test is
    // invariant under scaling) and each equation to primitive integer form,
    // accumulate the substituted polynomial by plain convolutions with
    // cached powers, and divide once at the end.
    let (z0, zi) = canonical_tuple(u0, ui);
    let z0 = z0.int_coeffs().expect("canonical tuple is integer");
    let zi: Vec<Vec<Int>> = zi
        .iter()
        .map(|p| p.int_coeffs().expect("canonical tuple is integer"))
        .collect();
    let mut pow0: Vec<Vec<Int>> = vec![vec![Int::one()]];
    let mut powi: Vec<Vec<Vec<Int>>> = zi.iter().map(|_| vec![vec![Int::one()]]).collect();
    for f in system {
        let f = f.primitive();
        if f.is_zero() {
            continue;
        }
        let deg_f = f.total_degree().unwrap_or(0) as usize;
        let mut acc: Vec<Int> = Vec::new();
        for (mono, c) in f.terms() {
            let mut term = vec![c.numer().clone()];
            let mut used = 0usize;
            for (v, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                term = ip_mul(&term, fetch_power(&mut powi[v], &zi[v], e as usize));
                used += e as usize;
            }
            if used < deg_f {
                term = ip_mul(&term, fetch_power(&mut pow0, &z0, deg_f - used));
            }
            ip_add(&mut acc, &term);
        }
        let substituted = UniPoly::new(acc.into_iter().map(Rat::from_integer).collect());
        if !substituted.rem(qn1).is_zero() {
            return false;
        }
    }
    true
}

fn fetch_power<'a>(cache: &'a mut Vec<Vec<Int>>, base: &[Int], e: usize) -> &'a [Int] {
    while cache.len() <= e {
        let next = ip_mul(cache.last().expect("cache starts at the unit"), base);
        cache.push(next);
    }
    &cache[e]
}

/// Resolves one chart system (equations in `nv` variables whose first `nx`
/// are the pencil coordinates) into a parametrization of the coordinate
/// block, or a structured failure. The multi-modular pipeline runs first;
/// its shape answers are accepted only after the exact substitution
/// certificate, and any instability falls back to the exact pipeline.
fn chart_shape(
    eqs: &[MultiPoly],
    nx: usize,
    nv: usize,
    config: &SolverConfig,
    stream: &SeedStream,
    ids: &[u64],
) -> Result<ChartShape, SolverError> {
    let limits = &config.limits;
    let ladder = shape_ladder(nx, nv, stream, ids);
    let weight_passes: [Vec<Vec<Rat>>; 2] =
        std::array::from_fn(|i| ladder[i].iter().map(|e| e.weights.clone()).collect());
    match modular_chart_extract(eqs, &weight_passes, limits)? {
        Some(ModularExtract::Trivial) => return Ok(ChartShape::Trivial),
        Some(ModularExtract::NotZeroDim(d)) => return Ok(ChartShape::NotZeroDim(d)),
        Some(ModularExtract::NoSeparating) => return Ok(ChartShape::NoSeparating),
        Some(ModularExtract::Shape {
            pass,
            attempt,
            qn1,
            u0,
            ui,
        }) => {
            if tuple_satisfies(eqs, &qn1, &u0, &ui) {
                let entry = &ladder[pass][attempt];
                let weights = entry.x_prefix.map(|nx| entry.weights[..nx].to_vec());
                let (q0, qi) = canonical_tuple(&u0, &ui[..nx]);
                if let Ok(param) = Parametrization::from_parts(nx, weights, qn1, q0, qi) {
                    return Ok(ChartShape::Done(param));
                }
            }
            // an uncertified reconstruction falls through to the exact path
        }
        None => {}
    }

    let gb = buchberger(eqs, limits)?;
    if gb.is_trivial() {
        return Ok(ChartShape::Trivial);
    }
    match gb.dimension() {
        0 => {}
        d => return Ok(ChartShape::NotZeroDim(d)),
    }
    let quot = ZeroDimQuotient::new(gb)
        .ok_or_else(|| SolverError::Internal("finite quotient missing at dimension zero".into()))?;
    match shape_with_attempts(&quot, &ladder, limits)? {
        Some((minpoly, coords, weights)) => {
            let param =
                Parametrization::from_algebraic_coords(nx, &minpoly, &coords[..nx], weights)
                    .map_err(|e| SolverError::Internal(e.to_string()))?;
            Ok(ChartShape::Done(param))
        }
        None => Ok(ChartShape::NoSeparating),
    }
}

fn random_invertible(k: usize, rng: &mut rand_chacha::ChaCha8Rng, bound: i64) -> QMatrix {
    loop {
        let rows: Vec<Vec<Rat>> = (0..k)
            .map(|_| (0..k).map(|_| rat_int(rng.gen_range(-bound..=bound))).collect())
            .collect();
        let mat = QMatrix::from_rows(rows);
        if mat.rank() == k {
            return mat;
        }
    }
}

fn check_deadline(limits: &Limits) -> Result<(), SolverError> {
    if let Some(deadline) = limits.deadline {
        if std::time::Instant::now() > deadline {
            return Err(SolverError::Timeout("wall-clock budget exhausted".into()));
        }
    }
    Ok(())
}

/// One level of the recursion: critical points of the first-coordinate
/// projection per row choice, then the fiber recursion, merged over one
/// separating form.
fn low_rank_recursive(
    pencil: &Pencil,
    r: usize,
    config: &SolverConfig,
    stream: &SeedStream,
    ledger: &mut DegreeLedger,
) -> Result<Parametrization, SolverError> {
    let m = pencil.size();
    let k = pencil.nvars();
    let corank = m - r;
    let generic_codim = binomial(corank as i64 + 1, 2) as usize;
    if k < generic_codim {
        // the rank locus of a generic pencil in this few variables is empty
        return Ok(Parametrization::empty(k));
    }
    check_deadline(&config.limits)?;

    let mut parts: Vec<Parametrization> = Vec::new();
    let mut chart_records: Vec<ChartRecord> = Vec::new();
    let mut last_failure = String::new();
    let mut solved = false;
    for matrix_attempt in 0..2u64 {
        let mut rng = stream.rng("matrix", &[r as u64, k as u64, matrix_attempt]);
        let mat = random_invertible(k, &mut rng, config.coeff_bound);
        let transformed = pencil.transform(&mat);
        match level_charts(
            pencil,
            &transformed,
            &mat,
            r,
            config,
            stream,
            matrix_attempt,
        )? {
            Ok(outcome) => {
                parts = outcome.0;
                chart_records = outcome.1;
                solved = true;
                break;
            }
            Err(reason) => last_failure = reason,
        }
    }
    if !solved {
        return Err(SolverError::Genericity(format!(
            "level with {k} variables failed for two coordinate changes: {last_failure}"
        )));
    }

    // fiber recursion: freeze the first coordinate at a random value
    let mut rng = stream.rng("fiber", &[r as u64, k as u64]);
    let t0 = rat_int(rng.gen_range(-config.coeff_bound..=config.coeff_bound));
    let sub = pencil.fix_first(&t0);
    let sub_param = low_rank_recursive(&sub, r, config, stream, ledger)?;
    parts.push(sub_param.lift(&t0));

    // merge everything over one separating linear form
    for attempt in 0..6usize {
        check_deadline(&config.limits)?;
        let w = lambda_weights(k, attempt, stream, "level-form", &[r as u64, k as u64]);
        match merge_parts(&parts, &w) {
            Ok(union) => {
                ledger.charts.extend(chart_records);
                ledger.levels.push(LevelRecord {
                    rank: r,
                    level: k,
                    degree: union.degree(),
                });
                return Ok(union);
            }
            Err(ParamError::NotSeparating) | Err(ParamError::Collision) => continue,
            Err(e) => return Err(SolverError::Internal(e.to_string())),
        }
    }
    Err(SolverError::Genericity(format!(
        "no linear form separates the union at the {k}-variable level"
    )))
}

fn merge_parts(parts: &[Parametrization], w: &[Rat]) -> Result<Parametrization, ParamError> {
    let mut acc = Parametrization::empty(w.len());
    for part in parts {
        let encoded = part.reencode(w)?;
        acc = acc.union(&encoded)?;
    }
    Ok(acc)
}

type ChartsOutcome = (Vec<Parametrization>, Vec<ChartRecord>);

/// Critical-point charts of one level under one coordinate change.
/// `Ok(Err(reason))` signals a retryable genericity failure of the chosen
/// matrix (positive-dimensional critical system or shape failure).
#[allow(clippy::too_many_arguments)]
fn level_charts(
    pencil: &Pencil,
    transformed: &Pencil,
    mat: &QMatrix,
    r: usize,
    config: &SolverConfig,
    stream: &SeedStream,
    matrix_attempt: u64,
) -> Result<Result<ChartsOutcome, String>, SolverError> {
    let m = pencil.size();
    let k = pencil.nvars();
    let corank = m - r;
    let mut parts = Vec::new();
    let mut records = Vec::new();
    for iota in (0..m).combinations(corank) {
        check_deadline(&config.limits)?;
        let iota_mask: u64 = iota.iter().map(|&row| 1u64 << row).sum();
        let inc = Incidence::new(transformed, r, &iota);
        let sys = simplified_lagrange(&inc, MonomialOrder::GrevLex);
        let eqs = sys.equations();
        let nv = eqs[0].nvars();
        let chart = match chart_shape(
            eqs,
            sys.nx(),
            nv,
            config,
            stream,
            &[r as u64, k as u64, iota_mask, matrix_attempt],
        )? {
            ChartShape::Trivial => {
                records.push(ChartRecord {
                    rank: r,
                    level: k,
                    chart: iota,
                    raw_degree: 0,
                    degree: 0,
                });
                continue;
            }
            ChartShape::NotZeroDim(_) => {
                return Ok(Err(format!(
                    "critical system for rows {iota:?} is not zero-dimensional"
                )));
            }
            ChartShape::NoSeparating => {
                return Ok(Err(format!(
                    "no separating form for the critical points on rows {iota:?}"
                )));
            }
            ChartShape::Done(param) => param,
        };
        // back to the level coordinates, then keep only exact-rank points
        let imaged = chart.image(mat);
        let mut rng = stream.rng("filter", &[r as u64, k as u64, iota_mask, matrix_attempt]);
        let filtered = imaged
            .rank_filter(pencil, r, &mut rng)
            .map_err(|e| SolverError::Genericity(e.to_string()))?;
        records.push(ChartRecord {
            rank: r,
            level: k,
            chart: iota,
            raw_degree: imaged.degree(),
            degree: filtered.degree(),
        });
        parts.push(filtered);
    }
    Ok(Ok((parts, records)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::{random_feasible_pencil, random_infeasible_pencil};
    use crate::rat::rat;
    use num::Signed;

    fn diag_pencil(entries: &[(i64, i64)]) -> Pencil {
        // A(x) = diag(c_i + d_i x) from (c_i, d_i) pairs, one variable
        let m = entries.len();
        let mut a0 = QMatrix::zero(m, m);
        let mut a1 = QMatrix::zero(m, m);
        for (i, &(c, d)) in entries.iter().enumerate() {
            a0.set(i, i, rat_int(c));
            a1.set(i, i, rat_int(d));
        }
        Pencil::new(m, 1, vec![a0, a1]).unwrap()
    }

    #[test]
    fn linear_solution_found_exactly() {
        // A(x) = [[x1 - 1, 0], [0, x1 + x2]]: zero at (1, -1)
        let a0 = QMatrix::from_rows(vec![
            vec![rat_int(-1), rat_int(0)],
            vec![rat_int(0), rat_int(0)],
        ]);
        let mut a1 = QMatrix::identity(2);
        a1.set(1, 1, rat_int(1));
        let mut a2 = QMatrix::zero(2, 2);
        a2.set(1, 1, rat_int(1));
        let p = Pencil::new(2, 2, vec![a0, a1, a2]).unwrap();
        let x = solve_linear(&p).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(-1)]);
        let report = solve(&p, &SolverConfig::default()).unwrap();
        assert!(matches!(report.outcome, Outcome::LinearPoint(_)));
    }

    #[test]
    fn interval_pencil_witness() {
        // A(x) = diag(1 + x, 1 - x) >= 0 on [-1, 1]: minimal rank 1 at the
        // endpoints
        let p = diag_pencil(&[(1, 1), (1, -1)]);
        let report = solve(&p, &SolverConfig::default()).unwrap();
        match report.outcome {
            Outcome::Witness { rank, param, root_index } => {
                assert_eq!(rank, 1);
                let mut roots = param.real_roots();
                let x = param.approx_coords(&mut roots[root_index], 12);
                // witness is an endpoint
                assert!((x[0].clone() - rat_int(-1)).abs() < rat(1, 1000) ||
                        (x[0].clone() - rat_int(1)).abs() < rat(1, 1000));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_diagonal_pencil() {
        // A(x) = diag(x, -1 - x^...): use diag(x - 1, -x): x >= 1 and
        // x <= 0 cannot hold together
        let p = diag_pencil(&[(-1, 1), (0, -1)]);
        let report = solve(&p, &SolverConfig::default()).unwrap();
        assert!(matches!(report.outcome, Outcome::Empty));
    }

    #[test]
    fn seeded_random_pencils_solve() {
        let stream = SeedStream::new(2024);
        for case in 0..3u64 {
            let mut rng = stream.rng("feasible-driver", &[case]);
            let (p, _point) = random_feasible_pencil(&mut rng, 2, 2, 3);
            let config = SolverConfig { seed: 11 + case, ..Default::default() };
            let report = solve(&p, &config).unwrap();
            assert!(
                !matches!(report.outcome, Outcome::Empty),
                "feasible pencil reported empty in case {case}"
            );
        }
        for case in 0..3u64 {
            let mut rng = stream.rng("infeasible-driver", &[case]);
            let p = random_infeasible_pencil(&mut rng, 2, 2, 3);
            let config = SolverConfig { seed: 17 + case, ..Default::default() };
            let report = solve(&p, &config).unwrap();
            assert!(
                matches!(report.outcome, Outcome::Empty),
                "infeasible pencil reported feasible in case {case}"
            );
        }
    }

    #[test]
    fn ledger_includes_all_levels() {
        let p = diag_pencil(&[(1, 1), (1, -1)]);
        let report = solve(&p, &SolverConfig::default()).unwrap();
        // rank-1 candidates at the single level with one variable
        assert!(report
            .ledger
            .levels
            .iter()
            .any(|l| l.rank == 1 && l.level == 1 && l.degree > 0));
    }
}
