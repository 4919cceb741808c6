//! Exact-arithmetic feasibility for linear matrix inequalities with
//! rational data.
//!
//! Given symmetric rational matrices `A_0, ..., A_n` of size `m`, the crate
//! decides whether the pencil `A(x) = A_0 + x_1 A_1 + ... + x_n A_n` admits
//! a positive semidefinite evaluation, and when it does, produces an exact
//! univariate parametrization of finitely many candidate points together
//! with an interval-isolated real witness of minimal rank. All certified
//! computations run over the integers and rationals; no floating point
//! enters any decision.

pub mod bounds;
pub mod driver;
pub mod feasibility;
pub mod groebner;
pub mod incidence;
pub mod lagrange;
mod modgb;
pub mod multipoly;
pub mod pencil;
pub mod qmatrix;
pub mod rat;
pub mod ratpar;
pub mod realroots;
pub mod seed;
pub mod unipoly;
