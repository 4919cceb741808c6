//! Critical-point systems for the projection of a rank-drop variety onto
//! its first coordinate.
//!
//! Given the incidence system for one row choice, the critical points of
//! the projection `(x, y) -> x_1` are encoded by a square polynomial
//! system. Two formulations are provided:
//!
//! - [`simplified_lagrange`]: works on the substituted bilinear equations
//!   `g` in the small ring. Multipliers `z = (1, z_2, ..., z_p)` are
//!   normalized on the first equation, and the gradient condition is
//!   imposed on every variable except `x_1` (whose column is dropped in
//!   exchange for the normalization). This is the system the solver runs.
//! - [`full_lagrange`]: works on the full incidence equations with an
//!   unreduced multiplier block and the inhomogeneous normalization
//!   `z^T jac(f) = (1, 0, ..., 0)` (the `1` sits on the `x_1` column).
//!   Only used to cross-validate the simplified formulation on small
//!   inputs; for kernel width at least two it has positive-dimensional
//!   multiplier fibers and is not run by the solver.

use crate::incidence::Incidence;
use crate::multipoly::{MonomialOrder, MultiPoly};

/// A square critical-point system together with its variable layout:
/// `x` block first, then `y`, then the multipliers `z`.
#[derive(Clone, Debug)]
pub struct LagrangeSystem {
    nx: usize,
    ny: usize,
    nz: usize,
    equations: Vec<MultiPoly>,
}

impl LagrangeSystem {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn nvars(&self) -> usize {
        self.nx + self.ny + self.nz
    }

    pub fn equations(&self) -> &[MultiPoly] {
        &self.equations
    }

    /// `true` when the equation count matches the variable count.
    pub fn is_square(&self) -> bool {
        self.equations.len() == self.nvars()
    }
}

/// Builds the solver's critical-point system from the substituted
/// incidence equations. See the module documentation for the layout.
pub fn simplified_lagrange(inc: &Incidence, ord: MonomialOrder) -> LagrangeSystem {
    let nx = inc.pencil().nvars();
    let ny = inc.rank_target() * inc.corank();
    let p = inc.substituted_count();
    let nz = p.saturating_sub(1);
    let total = nx + ny + nz;

    let gs: Vec<MultiPoly> = inc
        .substituted_system(ord)
        .iter()
        .map(|g| g.extended(total))
        .collect();
    let z_poly = |k: usize| -> MultiPoly {
        if k == 0 {
            MultiPoly::one(total, ord)
        } else {
            MultiPoly::var(total, ord, nx + ny + k - 1)
        }
    };

    let mut equations = gs.clone();
    // gradient condition on every primal variable except x_1 (index 0)
    for v in 1..nx + ny {
        let mut acc = MultiPoly::zero(total, ord);
        for (k, g) in gs.iter().enumerate() {
            let d = g.derivative(v);
            if d.is_zero() {
                continue;
            }
            acc = acc.add(&d.mul(&z_poly(k)));
        }
        equations.push(acc);
    }

    let sys = LagrangeSystem {
        nx,
        ny,
        nz,
        equations,
    };
    debug_assert!(sys.is_square());
    sys
}

/// Builds the unreduced critical-point system on the full incidence
/// equations, with one multiplier per equation and the inhomogeneous
/// normalization on the `x_1` column. Cross-validation only.
pub fn full_lagrange(inc: &Incidence, ord: MonomialOrder) -> LagrangeSystem {
    let nx = inc.pencil().nvars();
    let ny = inc.pencil().size() * inc.corank();
    let f_small = inc.full_system(ord);
    let nz = f_small.len();
    let total = nx + ny + nz;

    let fs: Vec<MultiPoly> = f_small.iter().map(|f| f.extended(total)).collect();
    let mut equations = fs.clone();
    for v in 0..nx + ny {
        let mut acc = MultiPoly::zero(total, ord);
        for (k, f) in fs.iter().enumerate() {
            let d = f.derivative(v);
            if d.is_zero() {
                continue;
            }
            acc = acc.add(&d.mul(&MultiPoly::var(total, ord, nx + ny + k)));
        }
        if v == 0 {
            acc = acc.sub(&MultiPoly::one(total, ord));
        }
        equations.push(acc);
    }

    let sys = LagrangeSystem {
        nx,
        ny,
        nz,
        equations,
    };
    debug_assert!(sys.is_square());
    sys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{buchberger, Limits, ZeroDimQuotient};
    use crate::pencil::random_pencil;
    use crate::rat::{rat_int, Rat};
    use crate::seed::SeedStream;
    use crate::unipoly::UniPoly;
    use num::Zero;

    fn x_only_minpoly(
        sys: &LagrangeSystem,
        weights: &[i64],
    ) -> Option<UniPoly> {
        let gb = buchberger(sys.equations(), &Limits::default()).ok()?;
        let quot = ZeroDimQuotient::new(gb)?;
        let mut w = vec![Rat::zero(); sys.nvars()];
        for (i, &wi) in weights.iter().enumerate().take(sys.nx()) {
            w[i] = rat_int(wi);
        }
        let t = quot.weighted_matrix(&w);
        let (mp, _) = quot.minpoly_on_one(&t);
        Some(mp.squarefree_part().monic())
    }

    #[test]
    fn simplified_system_shape() {
        let stream = SeedStream::new(31);
        let mut rng = stream.rng("shape", &[0]);
        let p = random_pencil(&mut rng, 3, 2, 5);
        let inc = Incidence::new(&p, 2, &[1]);
        let sys = simplified_lagrange(&inc, MonomialOrder::GrevLex);
        // corank 1 at size 3: p = 3 kept entries, y block = 2, z block = 2
        assert_eq!(sys.nx(), 2);
        assert_eq!(sys.ny(), 2);
        assert_eq!(sys.nz(), 2);
        assert!(sys.is_square());
        assert_eq!(sys.equations().len(), 6);
        // equations are at most bilinear-times-linear: degree <= 2
        assert!(sys
            .equations()
            .iter()
            .all(|e| e.total_degree().unwrap_or(0) <= 2));
    }

    #[test]
    fn full_system_shape() {
        let stream = SeedStream::new(31);
        let mut rng = stream.rng("shape", &[1]);
        let p = random_pencil(&mut rng, 2, 2, 5);
        let inc = Incidence::new(&p, 1, &[0]);
        let sys = full_lagrange(&inc, MonomialOrder::GrevLex);
        // size 2, corank 1: f has 2 + 1 entries, primal vars 2 + 2
        assert_eq!(sys.nx(), 2);
        assert_eq!(sys.ny(), 2);
        assert_eq!(sys.nz(), 3);
        assert!(sys.is_square());
    }

    #[test]
    fn full_and_simplified_agree_on_projected_critical_values() {
        // Both formulations must see the same critical values of the
        // x-weighted form for a generic pencil with kernel width one.
        let stream = SeedStream::new(77);
        let mut rng = stream.rng("verify", &[0]);
        let p = random_pencil(&mut rng, 2, 2, 4);
        let inc = Incidence::new(&p, 1, &[1]);
        let weights = [1i64, 2];
        let simple = x_only_minpoly(&simplified_lagrange(&inc, MonomialOrder::GrevLex), &weights)
            .expect("simplified system should be zero-dimensional");
        let full = x_only_minpoly(&full_lagrange(&inc, MonomialOrder::GrevLex), &weights)
            .expect("full system should be zero-dimensional");
        assert!(simple.degree().is_some(), "no critical points found");
        assert_eq!(simple, full);
    }
}
