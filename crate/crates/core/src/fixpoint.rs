//! The composed operator `N(u,v) = (S_p(λF(u,v)), S_q(λG(u,v)))`, fixed-point
//! iteration on it, and verification of the localization the certificates
//! promise.
//!
//! A pair `(u, v)` solves the discretized system exactly when it is a fixed
//! point of `N`. Picard iteration with adaptive damping finds attracting
//! fixed points from a fixed seed schedule; for isotone nonlinearities the
//! monotone from-below/from-above iterations bracket every fixed point in
//! the order interval between their limits.

use serde::Serialize;
use thiserror::Error;

use crate::certify::{CertifyError, Monotonicity, ProblemSpec};
use crate::expr::{Env, Expr};
use crate::grid::{GridError, GridFunction};
use crate::plap::{solve, SolveError, SolverConfig};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Error)]
pub enum FixpointError {
    #[error("iteration did not converge after {iterations} steps (last residual {residual:.3e})")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("monotonicity violated at step {step} by {violation:.3e}: iterate moved the wrong way (check the isotonicity declarations)")]
    MonotonicityViolated { step: usize, violation: f64 },
    #[error("spec does not declare f and g increasing in both variables")]
    NotIsotone,
    #[error("nonlinearity produced a negative value {value}; the operator leaves the cone")]
    LeavesCone { value: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Iteration parameters for the fixed-point drivers.
#[derive(Debug, Clone)]
pub struct FixpointConfig {
    pub max_iters: usize,
    /// Convergence threshold on `sup |N(u,v) - (u,v)|`.
    pub fp_tol: f64,
    /// Distinct-solution threshold for deduplication (default `100·fp_tol`).
    pub dedup_tol: Option<f64>,
    /// Initial Picard damping `θ` in `z ← (1-θ)z + θN(z)`; halved whenever
    /// the residual increases.
    pub theta_init: f64,
    /// Seed for the randomized part of the multiplicity seed schedule.
    pub rng_seed: u64,
}

impl Default for FixpointConfig {
    fn default() -> Self {
        FixpointConfig {
            max_iters: 400,
            fp_tol: 1e-9,
            dedup_tol: None,
            theta_init: 1.0,
            rng_seed: 7,
        }
    }
}

impl FixpointConfig {
    pub fn dedup(&self) -> f64 {
        self.dedup_tol.unwrap_or(100.0 * self.fp_tol)
    }

    /// A component is reported as zero below this sup-norm.
    pub fn zero_threshold(&self) -> f64 {
        10.0 * self.fp_tol
    }
}

/// Localization region per the three-solution splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionRegion {
    /// `|u| < ρ₁`, `|v| < ρ₂` (the possibly-zero solution).
    Inner,
    /// Neither inner nor outer.
    Middle,
    /// `‖u‖ > r₁` and `‖v‖ > r₂` (both components nonzero).
    Outer,
}

/// A converged fixed point with its norms and provenance.
#[derive(Debug, Clone)]
pub struct SolutionRecord {
    pub u: GridFunction,
    pub v: GridFunction,
    pub sup_u: f64,
    pub sup_v: f64,
    /// `min_{D₁} u`.
    pub semi_u: f64,
    /// `min_{D₂} v`.
    pub semi_v: f64,
    /// `sup |N(u,v) - (u,v)|`, re-verified by one extra operator application.
    pub residual: f64,
    pub region: SolutionRegion,
    pub iterations: usize,
    pub seed: String,
}

/// Scalar view of a record for JSON output (the `u`, `v` fields serialize
/// to CSV separately).
#[derive(Debug, Clone, Serialize)]
pub struct SolutionSummary {
    pub seed: String,
    pub sup_u: f64,
    pub sup_v: f64,
    pub semi_u: f64,
    pub semi_v: f64,
    pub residual: f64,
    pub region: SolutionRegion,
    pub iterations: usize,
}

impl SolutionRecord {
    pub fn summary(&self) -> SolutionSummary {
        SolutionSummary {
            seed: self.seed.clone(),
            sup_u: self.sup_u,
            sup_v: self.sup_v,
            semi_u: self.semi_u,
            semi_v: self.semi_v,
            residual: self.residual,
            region: self.region,
            iterations: self.iterations,
        }
    }

    pub fn is_nontrivial(&self, cfg: &FixpointConfig) -> bool {
        self.sup_u >= cfg.zero_threshold() || self.sup_v >= cfg.zero_threshold()
    }

    /// Sup distance between two solution pairs.
    pub fn distance(&self, other: &SolutionRecord) -> f64 {
        self.u.sup_distance(&other.u).max(self.v.sup_distance(&other.v))
    }
}

/// Evaluate `λ·e(x, u(x), v(x))` nodewise.
fn superposition(
    e: &Expr,
    u: &GridFunction,
    v: &GridFunction,
    lambda: f64,
) -> Result<GridFunction, FixpointError> {
    let domain = u.domain();
    let two_d = domain.dim() == 2;
    let mut values = Vec::with_capacity(domain.num_nodes());
    for i in 0..domain.num_nodes() {
        let (x, y) = domain.coords(i);
        let env = if two_d {
            Env::xyuv(x, y, u.value(i), v.value(i))
        } else {
            Env::xuv(x, u.value(i), v.value(i))
        };
        let val = lambda
            * e.eval(&env).map_err(|source| CertifyError::Eval {
                x,
                y,
                u: u.value(i),
                v: v.value(i),
                source,
            })?;
        if val < 0.0 {
            return Err(FixpointError::LeavesCone { value: val });
        }
        values.push(val);
    }
    Ok(GridFunction::new(domain.clone(), values)?)
}

/// One application of the composed operator:
/// `(S_p(λ f(·,u,v)), S_q(λ g(·,u,v)))`.
pub fn apply_n(
    u: &GridFunction,
    v: &GridFunction,
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Result<(GridFunction, GridFunction), FixpointError> {
    let fu = superposition(&spec.f, u, v, spec.lambda)?;
    let gv = superposition(&spec.g, u, v, spec.lambda)?;
    let nu = solve(&fu, &cfg.with_exponent(spec.p))?;
    let nv = solve(&gv, &cfg.with_exponent(spec.q))?;
    Ok((nu, nv))
}

fn finish_record(
    u: GridFunction,
    v: GridFunction,
    spec: &ProblemSpec,
    scfg: &SolverConfig,
    iterations: usize,
    seed: String,
) -> Result<SolutionRecord, FixpointError> {
    // residual re-verified with a fresh operator application
    let (nu, nv) = apply_n(&u, &v, spec, scfg)?;
    let residual = nu.sup_distance(&u).max(nv.sup_distance(&v));
    let cone1 = spec.domain.cone_d1();
    let cone2 = spec.domain.cone_d2();
    let sup_u = u.sup_norm();
    let sup_v = v.sup_norm();
    let semi_u = u.seminorm(&cone1)?;
    let semi_v = v.seminorm(&cone2)?;
    let region = classify_region(&spec.radii.rho, spec.radii.r, sup_u, sup_v, semi_u, semi_v);
    Ok(SolutionRecord { u, v, sup_u, sup_v, semi_u, semi_v, residual, region, iterations, seed })
}

fn classify_region(
    rho: &Option<(f64, f64)>,
    r: (f64, f64),
    sup_u: f64,
    sup_v: f64,
    semi_u: f64,
    semi_v: f64,
) -> SolutionRegion {
    let inner = match rho {
        Some((rho1, rho2)) => sup_u < *rho1 && sup_v < *rho2,
        // without a declared inner radius only the zero pair is inner
        None => sup_u == 0.0 && sup_v == 0.0,
    };
    if inner {
        SolutionRegion::Inner
    } else if semi_u > r.0 && semi_v > r.1 {
        SolutionRegion::Outer
    } else {
        SolutionRegion::Middle
    }
}

/// Damped Picard iteration from an arbitrary cone seed.
pub fn picard(
    seed: (GridFunction, GridFunction),
    seed_name: &str,
    spec: &ProblemSpec,
    scfg: &SolverConfig,
    fcfg: &FixpointConfig,
) -> Result<SolutionRecord, FixpointError> {
    let (mut u, mut v) = seed;
    let mut theta = fcfg.theta_init;
    let mut last_residual = f64::INFINITY;
    for k in 0..fcfg.max_iters {
        let (nu, nv) = apply_n(&u, &v, spec, scfg)?;
        let residual = nu.sup_distance(&u).max(nv.sup_distance(&v));
        if residual < fcfg.fp_tol {
            return finish_record(nu, nv, spec, scfg, k + 1, seed_name.to_string());
        }
        if residual > last_residual && theta > 1.0 / 64.0 {
            // oscillation: average harder
            theta *= 0.5;
        }
        last_residual = residual;
        u = u.lerp(&nu, theta);
        v = v.lerp(&nv, theta);
    }
    Err(FixpointError::NoConvergence { residual: last_residual, iterations: fcfg.max_iters })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FromBelow,
    FromAbove,
}

/// Monotone iteration for isotone nonlinearities (declared increasing in
/// both variables): from below starting at `(r₁χ₁, r₂χ₂)`, from above at
/// `(R₁·1, R₂·1)`. The iterate sequence must move monotonically; a violation
/// beyond tolerance aborts with diagnostics since it signals a wrong
/// isotonicity declaration.
pub fn monotone_iterate(
    direction: Direction,
    spec: &ProblemSpec,
    scfg: &SolverConfig,
    fcfg: &FixpointConfig,
) -> Result<SolutionRecord, FixpointError> {
    let isotone = |m: (Monotonicity, Monotonicity)| {
        m.0 == Monotonicity::Increasing && m.1 == Monotonicity::Increasing
    };
    if !isotone(spec.mono_f) || !isotone(spec.mono_g) {
        return Err(FixpointError::NotIsotone);
    }
    let (r1, r2) = spec.radii.r;
    let (cr1, cr2) = spec.radii.big_r;
    let (mut u, mut v, name) = match direction {
        Direction::FromBelow => (
            spec.domain.cone_d1().indicator().scale(r1),
            spec.domain.cone_d2().indicator().scale(r2),
            "monotone-from-below",
        ),
        Direction::FromAbove => (
            GridFunction::constant(spec.domain.clone(), cr1),
            GridFunction::constant(spec.domain.clone(), cr2),
            "monotone-from-above",
        ),
    };
    let slack = 10.0 * scfg.tolerance;
    let mut last_residual = f64::INFINITY;
    for k in 0..fcfg.max_iters {
        let (nu, nv) = apply_n(&u, &v, spec, scfg)?;
        let ordered = match direction {
            Direction::FromBelow => u.le_nodewise(&nu, slack) && v.le_nodewise(&nv, slack),
            Direction::FromAbove => nu.le_nodewise(&u, slack) && nv.le_nodewise(&v, slack),
        };
        if !ordered {
            let violation = match direction {
                Direction::FromBelow => worst_drop(&nu, &u).max(worst_drop(&nv, &v)),
                Direction::FromAbove => worst_drop(&u, &nu).max(worst_drop(&v, &nv)),
            };
            return Err(FixpointError::MonotonicityViolated { step: k, violation });
        }
        let residual = nu.sup_distance(&u).max(nv.sup_distance(&v));
        last_residual = residual;
        u = nu;
        v = nv;
        if residual < fcfg.fp_tol {
            return finish_record(u, v, spec, scfg, k + 1, name.to_string());
        }
    }
    Err(FixpointError::NoConvergence { residual: last_residual, iterations: fcfg.max_iters })
}

/// `max(small - big)` where `small ≤ big` was expected.
fn worst_drop(big: &GridFunction, small: &GridFunction) -> f64 {
    small
        .values()
        .iter()
        .zip(big.values())
        .fold(0.0_f64, |m, (s, b)| m.max(s - b))
}

/// Outcome of a multiplicity search: converged records (deduplicated) plus
/// bookkeeping on which predicted regions were populated.
#[derive(Debug)]
pub struct MultiplicityReport {
    pub records: Vec<SolutionRecord>,
    pub attempted_seeds: usize,
    pub failed_seeds: usize,
    /// Last residuals of seeds that failed to converge.
    pub failure_residuals: Vec<f64>,
    /// (inner, middle, outer) population counts.
    pub region_counts: (usize, usize, usize),
}

impl MultiplicityReport {
    pub fn regions_populated(&self) -> usize {
        let (a, b, c) = self.region_counts;
        (a > 0) as usize + (b > 0) as usize + (c > 0) as usize
    }

    pub fn nontrivial(&self, cfg: &FixpointConfig) -> Vec<&SolutionRecord> {
        self.records.iter().filter(|r| r.is_nontrivial(cfg)).collect()
    }
}

/// Run the fixed seed schedule and collect distinct fixed points.
///
/// Schedule: the zero pair; `ϱ`-, `ρ`- and `r`-scaled cone seeds (the
/// `r`-scale in all three component combinations, which is what reaches the
/// semi-trivial fixed points with one vanishing component); `R`-scaled
/// constant seeds; and eight seeded random cone elements. When the spec is
/// isotone the two monotone iterations run as well. Failures to converge
/// are counted, not fatal: index theory guarantees existence, not
/// reachability by iteration.
pub fn multiplicity_search(
    spec: &ProblemSpec,
    scfg: &SolverConfig,
    fcfg: &FixpointConfig,
) -> MultiplicityReport {
    let domain = &spec.domain;
    let chi1 = domain.cone_d1().indicator();
    let chi2 = domain.cone_d2().indicator();
    let zero = GridFunction::zero(domain.clone());
    let (r1, r2) = spec.radii.r;
    let (cr1, cr2) = spec.radii.big_r;

    let mut seeds: Vec<(String, GridFunction, GridFunction)> = Vec::new();
    seeds.push(("zero".into(), zero.clone(), zero.clone()));
    if let Some((vr1, vr2)) = spec.radii.varrho {
        seeds.push(("varrho-scale".into(), chi1.scale(vr1), chi2.scale(vr2)));
    }
    if let Some((rho1, rho2)) = spec.radii.rho {
        seeds.push(("rho-scale".into(), chi1.scale(rho1), chi2.scale(rho2)));
    }
    seeds.push(("r-scale".into(), chi1.scale(r1), chi2.scale(r2)));
    seeds.push(("r-scale-u".into(), chi1.scale(r1), zero.clone()));
    seeds.push(("r-scale-v".into(), zero.clone(), chi2.scale(r2)));
    seeds.push((
        "R-scale".into(),
        GridFunction::constant(domain.clone(), cr1),
        GridFunction::constant(domain.clone(), cr2),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(fcfg.rng_seed);
    for k in 0..8 {
        let au = rng.gen_range(0.0..cr1);
        let av = rng.gen_range(0.0..cr2);
        let u = GridFunction::from_fn(domain.clone(), |_, _| rng.gen_range(0.0..1.0) * au);
        let v = GridFunction::from_fn(domain.clone(), |_, _| rng.gen_range(0.0..1.0) * av);
        // random fields projected to Dirichlet shape
        seeds.push((format!("random-{k}"), zero_boundary(u), zero_boundary(v)));
    }

    let isotone = spec.mono_f.0 == Monotonicity::Increasing
        && spec.mono_f.1 == Monotonicity::Increasing
        && spec.mono_g.0 == Monotonicity::Increasing
        && spec.mono_g.1 == Monotonicity::Increasing;

    let mut records: Vec<SolutionRecord> = Vec::new();
    let mut failed = 0usize;
    let mut failure_residuals = Vec::new();
    let mut note_failure = |e: FixpointError, residuals: &mut Vec<f64>| {
        if let FixpointError::NoConvergence { residual, .. } = e {
            residuals.push(residual);
        }
    };
    let attempted = seeds.len() + if isotone { 2 } else { 0 };

    if isotone {
        for dir in [Direction::FromBelow, Direction::FromAbove] {
            match monotone_iterate(dir, spec, scfg, fcfg) {
                Ok(rec) => push_dedup(&mut records, rec, fcfg.dedup()),
                Err(e) => {
                    failed += 1;
                    note_failure(e, &mut failure_residuals);
                }
            }
        }
    }
    for (name, u, v) in seeds {
        match picard((u, v), &name, spec, scfg, fcfg) {
            Ok(rec) => push_dedup(&mut records, rec, fcfg.dedup()),
            Err(e) => {
                failed += 1;
                note_failure(e, &mut failure_residuals);
            }
        }
    }

    let mut region_counts = (0usize, 0usize, 0usize);
    for rec in &records {
        match rec.region {
            SolutionRegion::Inner => region_counts.0 += 1,
            SolutionRegion::Middle => region_counts.1 += 1,
            SolutionRegion::Outer => region_counts.2 += 1,
        }
    }
    MultiplicityReport {
        records,
        attempted_seeds: attempted,
        failed_seeds: failed,
        failure_residuals,
        region_counts,
    }
}

fn zero_boundary(u: GridFunction) -> GridFunction {
    let domain = u.domain().clone();
    let values = (0..domain.num_nodes())
        .map(|i| if domain.is_boundary(i) { 0.0 } else { u.value(i) })
        .collect();
    GridFunction::new(domain, values).expect("finite")
}

fn push_dedup(records: &mut Vec<SolutionRecord>, rec: SolutionRecord, tol: f64) {
    if records.iter().all(|r| r.distance(&rec) >= tol) {
        records.push(rec);
    }
}

/// One localization verdict with its margin.
#[derive(Debug, Clone, Serialize)]
pub struct LocalizationItem {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalizationReport {
    pub items: Vec<LocalizationItem>,
    pub all_hold: bool,
}

/// Check the theorem-supplied localization for one record: `|u| ≤ R₁`,
/// `|v| ≤ R₂`, the seminorm lower bounds, and strict interior positivity of
/// every nonzero component.
pub fn check_localization(
    rec: &SolutionRecord,
    spec: &ProblemSpec,
    fcfg: &FixpointConfig,
) -> LocalizationReport {
    let (r1, r2) = spec.radii.r;
    let (cr1, cr2) = spec.radii.big_r;
    let tol = fcfg.dedup();
    let mut items = vec![
        LocalizationItem {
            check: "sup_u <= R1".into(),
            lhs: rec.sup_u,
            rhs: cr1,
            holds: rec.sup_u <= cr1 + tol,
        },
        LocalizationItem {
            check: "sup_v <= R2".into(),
            lhs: rec.sup_v,
            rhs: cr2,
            holds: rec.sup_v <= cr2 + tol,
        },
        LocalizationItem {
            check: "semi_u >= r1".into(),
            lhs: rec.semi_u,
            rhs: r1,
            holds: rec.semi_u >= r1 - tol,
        },
        LocalizationItem {
            check: "semi_v >= r2".into(),
            lhs: rec.semi_v,
            rhs: r2,
            holds: rec.semi_v >= r2 - tol,
        },
    ];
    for (name, f, sup) in [("u", &rec.u, rec.sup_u), ("v", &rec.v, rec.sup_v)] {
        if sup >= fcfg.zero_threshold() {
            let min = f.interior_min();
            items.push(LocalizationItem {
                check: format!("interior positivity of {name}"),
                lhs: min,
                rhs: 0.0,
                holds: min > 0.0,
            });
        }
    }
    let all_hold = items.iter().all(|i| i.holds);
    LocalizationReport { items, all_hold }
}
