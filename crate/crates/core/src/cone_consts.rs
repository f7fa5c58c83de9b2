//! Localization constants, radial retractions, and an empirical probe of the
//! Harnack-type inequality.
//!
//! The certificate theory compares box extrema of the nonlinearities against
//!
//! ```text
//!   A_p     = 1 / |S_p(1)|^{p-1}          (torsion constant)
//!   B_{1,p} = 1 / ‖S_p(χ_{D₁})‖^{p-1}     (indicator constant on D₁)
//! ```
//!
//! with `A_p ≤ λ_{1,p} ≤ B_{1,p}` as the built-in correctness oracle. Under
//! the inf-over-D seminorm, `‖1‖ = 1` exactly, so the improved radius
//! relation `r_i < R_i` is used throughout instead of the `‖φ‖‖χ‖`-weighted
//! one.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{ConeSpec, DomainKind, GridDomain, GridError, GridFunction};
use crate::plap::{first_eigenvalue, solve, SolveError, SolverConfig};

#[derive(Debug, Error)]
pub enum ConstError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("seminorm of S_p(χ) is zero; subset D is degenerate")]
    DegenerateSubset,
}

/// Grid metadata recorded alongside computed constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridMeta {
    pub kind: String,
    pub nodes: (usize, usize),
    pub spacing: (f64, f64),
    pub d1_nodes: usize,
    pub d2_nodes: usize,
}

impl GridMeta {
    pub fn of(domain: &GridDomain) -> Self {
        GridMeta {
            kind: match domain.kind() {
                DomainKind::Interval { .. } => "interval".to_string(),
                DomainKind::Rectangle { .. } => "rectangle".to_string(),
            },
            nodes: (domain.nx(), domain.ny()),
            spacing: (domain.hx(), domain.hy()),
            d1_nodes: domain.d1_mask().iter().filter(|&&b| b).count(),
            d2_nodes: domain.d2_mask().iter().filter(|&&b| b).count(),
        }
    }
}

/// The six localization constants for a `(p, q)` pair on one grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantSet {
    pub p: f64,
    pub q: f64,
    pub a_p: f64,
    pub a_q: f64,
    pub b1_p: f64,
    pub b2_q: f64,
    pub lambda1_p: f64,
    pub lambda1_q: f64,
    /// `‖1‖₁`, `‖1‖₂` under the inf seminorm: identically 1, recorded for
    /// traceability.
    pub seminorm_one: (f64, f64),
    pub grid: GridMeta,
}

impl ConstantSet {
    /// `A_p ≤ λ_{1,p} ≤ B_{1,p}` and the q-analogue, within `slack`.
    pub fn sandwich_ok(&self, slack: f64) -> bool {
        self.a_p <= self.lambda1_p + slack
            && self.lambda1_p <= self.b1_p + slack
            && self.a_q <= self.lambda1_q + slack
            && self.lambda1_q <= self.b2_q + slack
    }
}

/// Compute `A_p`, `A_q`, `B_{1,p}`, `B_{2,q}`, `λ_{1,p}`, `λ_{1,q}`.
pub fn compute_constants(
    domain: &Arc<GridDomain>,
    p: f64,
    q: f64,
    cfg: &SolverConfig,
) -> Result<ConstantSet, ConstError> {
    let one = GridFunction::constant(domain.clone(), 1.0);
    let cone1 = domain.cone_d1();
    let cone2 = domain.cone_d2();

    let cfg_p = cfg.with_exponent(p);
    let cfg_q = cfg.with_exponent(q);

    let sp_one = solve(&one, &cfg_p)?;
    let a_p = 1.0 / sp_one.sup_norm().powf(p - 1.0);
    let sp_chi = solve(&cone1.indicator(), &cfg_p)?;
    let s1 = sp_chi.seminorm(&cone1)?;
    if s1 <= 0.0 {
        return Err(ConstError::DegenerateSubset);
    }
    let b1_p = 1.0 / s1.powf(p - 1.0);

    let sq_one = solve(&one, &cfg_q)?;
    let a_q = 1.0 / sq_one.sup_norm().powf(q - 1.0);
    let sq_chi = solve(&cone2.indicator(), &cfg_q)?;
    let s2 = sq_chi.seminorm(&cone2)?;
    if s2 <= 0.0 {
        return Err(ConstError::DegenerateSubset);
    }
    let b2_q = 1.0 / s2.powf(q - 1.0);

    let lambda1_p = first_eigenvalue(p, domain, cfg)?.lambda;
    let lambda1_q = if (q - p).abs() < 1e-15 {
        lambda1_p
    } else {
        first_eigenvalue(q, domain, cfg)?.lambda
    };

    let ones = GridFunction::constant(domain.clone(), 1.0);
    let seminorm_one = (ones.seminorm(&cone1)?, ones.seminorm(&cone2)?);

    Ok(ConstantSet {
        p,
        q,
        a_p,
        a_q,
        b1_p,
        b2_q,
        lambda1_p,
        lambda1_q,
        seminorm_one,
        grid: GridMeta::of(domain),
    })
}

/// Anything with a sup norm and a radial scaling: grid functions and the
/// finite-dimensional cone vectors of the abstract lab.
pub trait RadialElement: Sized {
    fn sup(&self) -> f64;
    fn scaled(&self, factor: f64) -> Self;
}

impl RadialElement for GridFunction {
    fn sup(&self) -> f64 {
        self.sup_norm()
    }

    fn scaled(&self, factor: f64) -> Self {
        self.scale(factor)
    }
}

/// Componentwise radial retraction onto `{|u| ≤ R}`: identity inside the
/// ball, rescale to the sphere outside. Idempotent; `|π(u)| = min(|u|, R)`.
pub fn retraction_pi<T: RadialElement>(u: &T, r_cap: f64) -> T {
    let s = u.sup();
    if s <= r_cap || s == 0.0 {
        u.scaled(1.0)
    } else {
        u.scaled(r_cap / s)
    }
}

/// Joint radial retraction onto `{|u| ≤ R₁, |v| ≤ R₂}`: both components are
/// rescaled by the single factor `max(|u|/R₁, |v|/R₂, 1)⁻¹`.
pub fn retraction_rho<T: RadialElement, S: RadialElement>(
    pair: (&T, &S),
    r1: f64,
    r2: f64,
) -> (T, S) {
    let f = (pair.0.sup() / r1).max(pair.1.sup() / r2).max(1.0);
    (pair.0.scaled(1.0 / f), pair.1.scaled(1.0 / f))
}

/// Empirical lower estimate of the Harnack constant `M` in
/// `inf_D u ≥ M (∫_D u^s)^{1/s}` over solutions `u = S_p(w)` for a fixed
/// catalog of nonnegative right-hand sides: constants, the two subset
/// indicators, and seeded random fields.
///
/// The constant whose existence the inequality asserts is nonconstructive;
/// this probe only reports the minimum observed ratio, which is a valid
/// lower bound for the sampled family.
pub fn harnack_ratio(
    samples: usize,
    domain: &Arc<GridDomain>,
    p: f64,
    s: f64,
    d: &ConeSpec,
    cfg: &SolverConfig,
) -> Result<f64, ConstError> {
    assert!(s >= 1.0, "Harnack exponent s must be at least 1");
    assert!(samples >= 1);
    let cfg = cfg.with_exponent(p);
    let mut catalog: Vec<GridFunction> = vec![
        GridFunction::constant(domain.clone(), 1.0),
        d.indicator(),
        domain.cone_d2().indicator(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0_e5eed);
    while catalog.len() < samples {
        let f = GridFunction::from_fn(domain.clone(), |_, _| rng.gen_range(0.0..1.0));
        catalog.push(f);
    }
    catalog.truncate(samples);

    let mut min_ratio = f64::INFINITY;
    let cell = domain.hx() * if domain.dim() == 2 { domain.hy() } else { 1.0 };
    for w in &catalog {
        let u = solve(w, &cfg)?;
        let inf = u.seminorm(d)?;
        let integral: f64 = d.indices().map(|i| u.value(i).powf(s) * cell).sum();
        if integral > 0.0 {
            min_ratio = min_ratio.min(inf / integral.powf(1.0 / s));
        }
    }
    Ok(min_ratio)
}
