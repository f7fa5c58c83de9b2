//! Numerical toolkit for positive solutions of Dirichlet (p,q)-Laplacian systems.
//!
//! The library turns cone-theoretic existence, localization, multiplicity and
//! nonexistence theorems for the system
//!
//! ```text
//!   -Δ_p u = f(x, u, v)   in Ω,
//!   -Δ_q v = g(x, u, v)   in Ω,
//!    u = v = 0            on ∂Ω,
//! ```
//!
//! into executable certificates, and constructively searches for the predicted
//! solutions by fixed-point iteration on discretized domains (intervals and
//! rectangles).
//!
//! Module map:
//! - [`grid`]: discretized domains, grid functions, sup norm and the
//!   inf-over-D seminorm, cone membership.
//! - [`expr`]: parser/evaluator for user-supplied nonlinearities.
//! - [`plap`]: the solution operator `S_r = (-Δ_r)⁻¹` and the first
//!   Dirichlet eigenvalue `λ_{1,r}`.
//! - [`cone_consts`]: the localization constants `A_p`, `B_{1,p}`, the
//!   retractions π and ρ, and an empirical Harnack-ratio probe.
//! - [`certify`]: per-theorem inequality certificates with numeric margins.
//! - [`fixpoint`]: the composed operator `N = (S_p∘F, S_q∘G)`, Picard and
//!   monotone iteration, multiplicity search, localization checks.
//! - [`abstract_lab`]: finite-dimensional sandbox validating the abstract
//!   cone theorems by brute-force fixed-point search.

pub mod abstract_lab;
pub mod certify;
pub mod cone_consts;
pub mod expr;
pub mod fixpoint;
pub mod grid;
pub mod plap;

pub use expr::Expr;
pub use grid::{ConeSpec, GridDomain, GridFunction};
pub use plap::{EigenResult, SolverConfig};
