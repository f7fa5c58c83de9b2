//! Inequality certificates for the existence, multiplicity and nonexistence
//! theorems, evaluated against a problem specification with numeric margins.
//!
//! Each certificate compares box extrema of the nonlinearities `λf`, `λg`
//! against powers of the localization constants. Extrema are exact corner
//! evaluations when monotonicity in both `u` and `v` is declared, and
//! sampled Cartesian scans otherwise; sampled results are labelled with the
//! resolution used, so a report never silently claims a rigorous global
//! extremum for a non-monotone nonlinearity.
//!
//! Strict inequalities pass only with a relative safety margin `δ`
//! (default 1e-9), separating "strictly above" from "equal within noise";
//! non-strict inequalities symmetrically tolerate `-δ`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cone_consts::ConstantSet;
use crate::expr::{Env, EvalError, Expr, Var};
use crate::grid::GridDomain;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("spec rejected: {relation}")]
    RejectedSpec { relation: String },
    #[error("evaluation failed at (x={x}, y={y}, u={u}, v={v}): {source}")]
    Eval { x: f64, y: f64, u: f64, v: f64, source: EvalError },
}

/// Declared monotonic behavior of a nonlinearity in one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Unknown,
}

/// Localization radii. `r` and `big_r` drive the basic existence
/// certificate; the optional triples refine multiplicity statements.
#[derive(Debug, Clone)]
pub struct Radii {
    pub r: (f64, f64),
    pub big_r: (f64, f64),
    pub rho: Option<(f64, f64)>,
    pub varrho: Option<(f64, f64)>,
    pub tilde_big_r: Option<(f64, f64)>,
    pub tilde_rho: Option<(f64, f64)>,
}

impl Radii {
    pub fn basic(r: (f64, f64), big_r: (f64, f64)) -> Self {
        Radii { r, big_r, rho: None, varrho: None, tilde_big_r: None, tilde_rho: None }
    }
}

/// Full problem description: discretized domain, exponents, nonlinearities
/// and the radii the certificates quantify over.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub domain: Arc<GridDomain>,
    pub p: f64,
    pub q: f64,
    pub f: Expr,
    pub g: Expr,
    /// Scaling applied uniformly to both `f` and `g`.
    pub lambda: f64,
    pub radii: Radii,
    /// Monotonicity of `f` in `(u, v)`.
    pub mono_f: (Monotonicity, Monotonicity),
    /// Monotonicity of `g` in `(u, v)`.
    pub mono_g: (Monotonicity, Monotonicity),
    /// Sample points per box axis for non-corner extrema.
    pub resolution: usize,
    /// Relative safety margin separating strict from non-strict passes.
    pub strict_delta: f64,
}

impl ProblemSpec {
    pub fn new(
        domain: Arc<GridDomain>,
        p: f64,
        q: f64,
        f: Expr,
        g: Expr,
        radii: Radii,
    ) -> Self {
        ProblemSpec {
            domain,
            p,
            q,
            f,
            g,
            lambda: 1.0,
            radii,
            mono_f: (Monotonicity::Unknown, Monotonicity::Unknown),
            mono_g: (Monotonicity::Unknown, Monotonicity::Unknown),
            resolution: 33,
            strict_delta: 1e-9,
        }
    }

    /// Structural validation: exponent bounds, radius orderings, variable
    /// usage, and nonnegativity of `f`, `g` on a sampled box.
    pub fn validate(&self) -> Result<(), CertifyError> {
        let dim = self.domain.dim() as f64;
        let lower = (2.0 * dim / (dim + 1.0)).max(1.0);
        for (name, val) in [("p", self.p), ("q", self.q)] {
            if !(val > lower) {
                return Err(CertifyError::RejectedSpec {
                    relation: format!("{name} = {val} must exceed 2n/(n+1) = {lower}"),
                });
            }
        }
        if !(self.lambda > 0.0) {
            return Err(CertifyError::RejectedSpec { relation: "lambda must be positive".into() });
        }
        if self.resolution < 2 {
            return Err(CertifyError::RejectedSpec { relation: "resolution must be >= 2".into() });
        }
        let (r1, r2) = self.radii.r;
        let (cr1, cr2) = self.radii.big_r;
        if !(r1 > 0.0 && r2 > 0.0) {
            return Err(CertifyError::RejectedSpec { relation: "need r1, r2 > 0".into() });
        }
        if !(cr1 > 0.0 && cr2 > 0.0) {
            return Err(CertifyError::RejectedSpec { relation: "need R1, R2 > 0".into() });
        }
        if let Some((rho1, rho2)) = self.radii.rho {
            if !(rho1 > 0.0 && rho2 > 0.0 && rho1 < r1 && rho2 < r2) {
                return Err(CertifyError::RejectedSpec {
                    relation: "need 0 < rho_i < r_i".into(),
                });
            }
            if let Some((vr1, vr2)) = self.radii.varrho {
                if !(vr1 > 0.0 && vr2 > 0.0 && vr1 < rho1 && vr2 < rho2) {
                    return Err(CertifyError::RejectedSpec {
                        relation: "need 0 < varrho_i < rho_i".into(),
                    });
                }
            }
            if let Some((tr1, tr2)) = self.radii.tilde_rho {
                if !(tr1 > 0.0 && tr2 > 0.0 && tr1 <= rho1 && tr2 <= rho2) {
                    return Err(CertifyError::RejectedSpec {
                        relation: "need 0 < tilde_rho_i <= rho_i".into(),
                    });
                }
            }
        } else if self.radii.varrho.is_some() || self.radii.tilde_rho.is_some() {
            return Err(CertifyError::RejectedSpec {
                relation: "varrho/tilde_rho require rho".into(),
            });
        }
        if let Some((tr1, tr2)) = self.radii.tilde_big_r {
            if !(tr1 > 0.0 && tr2 > 0.0 && tr1 <= cr1 && tr2 <= cr2) {
                return Err(CertifyError::RejectedSpec {
                    relation: "need 0 < tilde_R_i <= R_i".into(),
                });
            }
        }
        let allowed = |v: &Var| {
            matches!(v, Var::U | Var::V | Var::X) || (matches!(v, Var::Y) && self.domain.dim() == 2)
        };
        for (name, e) in [("f", &self.f), ("g", &self.g)] {
            for v in e.variables() {
                if !allowed(&v) {
                    return Err(CertifyError::RejectedSpec {
                        relation: format!("{name} references `{v}`, not available on this domain"),
                    });
                }
            }
        }
        // nonnegativity of f, g on the sampled reference box
        for (name, e) in [("f", &self.f), ("g", &self.g)] {
            let ext = box_extremum(
                e,
                Region::Omega,
                (0.0, cr1),
                (0.0, cr2),
                ExtremumMode::Min,
                self,
            )?;
            if ext.value < 0.0 {
                return Err(CertifyError::RejectedSpec {
                    relation: format!(
                        "{name} takes negative value {} on the sampled box",
                        ext.value
                    ),
                });
            }
        }
        Ok(())
    }

    fn mono_of(&self, e: &Expr) -> (Monotonicity, Monotonicity) {
        if *e == self.f {
            self.mono_f
        } else if *e == self.g {
            self.mono_g
        } else {
            (Monotonicity::Unknown, Monotonicity::Unknown)
        }
    }
}

/// Spatial slice a box extremum ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// All grid nodes (the closure of the domain).
    Omega,
    D1,
    D2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumMode {
    Min,
    Max,
}

/// How an extremum or scan was obtained.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplingInfo {
    /// Exact corner evaluation (monotonicity declared in both variables).
    Corner,
    Sampled { resolution: usize },
    /// Pointwise comparison scan; carries a witness when violated.
    PerPoint { resolution: usize, witness: Option<(f64, f64, f64)> },
    /// Pure arithmetic on radii/constants.
    Exact,
}

#[derive(Debug, Clone)]
pub struct Extremum {
    pub value: f64,
    pub sampling: SamplingInfo,
}

/// One checked inequality with its margin.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionRecord {
    pub id: String,
    pub statement: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Positive margins are favorable: `rhs - lhs` for `≤`/`<` conditions,
    /// `lhs - rhs` for `>` conditions.
    pub margin: f64,
    pub verdict: bool,
    pub sampling: SamplingInfo,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub theorem: String,
    pub overall: bool,
    pub conditions: Vec<ConditionRecord>,
    pub constants: ConstantSet,
    pub notes: Vec<String>,
    pub resolution: usize,
    pub strict_delta: f64,
}

impl CertificateReport {
    fn new(theorem: &str, spec: &ProblemSpec, consts: &ConstantSet) -> Self {
        CertificateReport {
            theorem: theorem.to_string(),
            overall: false,
            conditions: Vec::new(),
            constants: consts.clone(),
            notes: Vec::new(),
            resolution: spec.resolution,
            strict_delta: spec.strict_delta,
        }
    }
}

fn scale_of(lhs: f64, rhs: f64) -> f64 {
    lhs.abs().max(rhs.abs()).max(1.0)
}

fn le_record(
    id: &str,
    statement: String,
    lhs: f64,
    rhs: f64,
    sampling: SamplingInfo,
    delta: f64,
) -> ConditionRecord {
    let margin = rhs - lhs;
    let verdict = margin >= -delta * scale_of(lhs, rhs);
    ConditionRecord { id: id.into(), statement, lhs, rhs, margin, verdict, sampling }
}

fn gt_record(
    id: &str,
    statement: String,
    lhs: f64,
    rhs: f64,
    sampling: SamplingInfo,
    delta: f64,
) -> ConditionRecord {
    let margin = lhs - rhs;
    let verdict = margin > delta * scale_of(lhs, rhs);
    ConditionRecord { id: id.into(), statement, lhs, rhs, margin, verdict, sampling }
}

fn lt_record(
    id: &str,
    statement: String,
    lhs: f64,
    rhs: f64,
    sampling: SamplingInfo,
    delta: f64,
) -> ConditionRecord {
    let margin = rhs - lhs;
    let verdict = margin > delta * scale_of(lhs, rhs);
    ConditionRecord { id: id.into(), statement, lhs, rhs, margin, verdict, sampling }
}

fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    if k <= 1 || a == b {
        return vec![a];
    }
    (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()
}

fn spatial_nodes(e: &Expr, region: Region, domain: &GridDomain, interior_only: bool) -> Vec<usize> {
    let uses_space = e.uses(Var::X) || e.uses(Var::Y);
    let all: Vec<usize> = match region {
        Region::Omega => {
            if interior_only {
                domain.interior_indices().collect()
            } else {
                (0..domain.num_nodes()).collect()
            }
        }
        Region::D1 => {
            domain.d1_mask().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
        }
        Region::D2 => {
            domain.d2_mask().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
        }
    };
    if uses_space {
        all
    } else {
        // x-independent expressions: one representative node suffices
        all.into_iter().take(1).collect()
    }
}

fn eval_at(e: &Expr, domain: &GridDomain, node: usize, u: f64, v: f64) -> Result<f64, CertifyError> {
    let (x, y) = domain.coords(node);
    let env = if domain.dim() == 2 { Env::xyuv(x, y, u, v) } else { Env::xuv(x, u, v) };
    e.eval(&env).map_err(|source| CertifyError::Eval { x, y, u, v, source })
}

/// Extremum of `e` over `region × u_range × v_range`.
///
/// With monotonicity declared in both `u` and `v` (as recorded in the spec
/// for `f` and `g`), the extremum over the value box is an exact corner
/// evaluation and only the spatial nodes are scanned; otherwise a Cartesian
/// sample at the configured resolution is used and recorded as such.
pub fn box_extremum(
    e: &Expr,
    region: Region,
    u_range: (f64, f64),
    v_range: (f64, f64),
    mode: ExtremumMode,
    spec: &ProblemSpec,
) -> Result<Extremum, CertifyError> {
    let (mu, mv) = spec.mono_of(e);
    let corner = mu != Monotonicity::Unknown && mv != Monotonicity::Unknown;
    let pick = |m: Monotonicity, range: (f64, f64)| -> f64 {
        match (m, mode) {
            (Monotonicity::Increasing, ExtremumMode::Max) => range.1,
            (Monotonicity::Increasing, ExtremumMode::Min) => range.0,
            (Monotonicity::Decreasing, ExtremumMode::Max) => range.0,
            (Monotonicity::Decreasing, ExtremumMode::Min) => range.1,
            (Monotonicity::Unknown, _) => unreachable!(),
        }
    };
    let (u_samples, v_samples, sampling) = if corner {
        (vec![pick(mu, u_range)], vec![pick(mv, v_range)], SamplingInfo::Corner)
    } else {
        (
            linspace(u_range.0, u_range.1, spec.resolution),
            linspace(v_range.0, v_range.1, spec.resolution),
            SamplingInfo::Sampled { resolution: spec.resolution },
        )
    };
    let nodes = spatial_nodes(e, region, &spec.domain, false);
    let mut best = match mode {
        ExtremumMode::Min => f64::INFINITY,
        ExtremumMode::Max => f64::NEG_INFINITY,
    };
    for &node in &nodes {
        for &u in &u_samples {
            for &v in &v_samples {
                let val = eval_at(e, &spec.domain, node, u, v)?;
                best = match mode {
                    ExtremumMode::Min => best.min(val),
                    ExtremumMode::Max => best.max(val),
                };
            }
        }
    }
    Ok(Extremum { value: best, sampling })
}

fn require(cond: bool, relation: &str) -> Result<(), CertifyError> {
    if cond {
        Ok(())
    } else {
        Err(CertifyError::RejectedSpec { relation: relation.into() })
    }
}

// ---------------------------------------------------------------------------
// Existence certificate
// ---------------------------------------------------------------------------

/// Conditions for one positive solution with `|u| ≤ R₁`, `|v| ≤ R₂`,
/// `‖u‖ ≥ r₁`, `‖v‖ ≥ r₂`:
/// `max λf ≤ A_p R₁^{p-1}`, `max λg ≤ A_q R₂^{q-1}` over the full box, and
/// `min λf > B_{1,p} r₁^{p-1}`, `min λg > B_{2,q} r₂^{q-1}` over the
/// seminorm-localized boxes.
pub fn certify_existence(
    spec: &ProblemSpec,
    consts: &ConstantSet,
) -> Result<CertificateReport, CertifyError> {
    spec.validate()?;
    let (r1, r2) = spec.radii.r;
    let (cr1, cr2) = spec.radii.big_r;
    require(r1 < cr1, "need r1 < R1")?;
    require(r2 < cr2, "need r2 < R2")?;

    let mut report = CertificateReport::new("existence", spec, consts);
    let lam = spec.lambda;
    let d = spec.strict_delta;

    let fmax =
        box_extremum(&spec.f, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
    report.conditions.push(le_record(
        "ind1-f",
        format!("max λf over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_p·R1^(p-1)"),
        lam * fmax.value,
        consts.a_p * cr1.powf(spec.p - 1.0),
        fmax.sampling,
        d,
    ));
    let gmax =
        box_extremum(&spec.g, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
    report.conditions.push(le_record(
        "ind1-g",
        format!("max λg over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_q·R2^(q-1)"),
        lam * gmax.value,
        consts.a_q * cr2.powf(spec.q - 1.0),
        gmax.sampling,
        d,
    ));
    let fmin = box_extremum(&spec.f, Region::D1, (r1, cr1), (0.0, cr2), ExtremumMode::Min, spec)?;
    report.conditions.push(gt_record(
        "ind0-f",
        format!("min λf over D1×[{r1},{cr1}]×[0,{cr2}] > B_1p·r1^(p-1)"),
        lam * fmin.value,
        consts.b1_p * r1.powf(spec.p - 1.0),
        fmin.sampling,
        d,
    ));
    let gmin = box_extremum(&spec.g, Region::D2, (0.0, cr1), (r2, cr2), ExtremumMode::Min, spec)?;
    report.conditions.push(gt_record(
        "ind0-g",
        format!("min λg over D2×[0,{cr1}]×[{r2},{cr2}] > B_2q·r2^(q-1)"),
        lam * gmin.value,
        consts.b2_q * r2.powf(spec.q - 1.0),
        gmin.sampling,
        d,
    ));

    report.overall = report.conditions.iter().all(|c| c.verdict);
    if report.overall {
        report.notes.push(format!(
            "guarantees a positive solution with |u| ≤ {cr1}, |v| ≤ {cr2}, ‖u‖ ≥ {r1}, ‖v‖ ≥ {r2}"
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// One-sided (or-type) existence certificate
// ---------------------------------------------------------------------------

/// Variant in which only one of the two lower conditions is required; both
/// minima run over `[0, R̃₁]×[0, R̃₂]` and the conclusion localizes the
/// solution by a four-way disjunction.
pub fn certify_existence_or(
    spec: &ProblemSpec,
    consts: &ConstantSet,
) -> Result<CertificateReport, CertifyError> {
    spec.validate()?;
    let (r1, r2) = spec.radii.r;
    let (cr1, cr2) = spec.radii.big_r;
    require(r1 < cr1, "need r1 < R1")?;
    require(r2 < cr2, "need r2 < R2")?;
    let (tr1, tr2) = spec.radii.tilde_big_r.unwrap_or((cr1, cr2));

    let mut report = CertificateReport::new("existence-or", spec, consts);
    let lam = spec.lambda;
    let d = spec.strict_delta;

    let fmax =
        box_extremum(&spec.f, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
    report.conditions.push(le_record(
        "ind1-f",
        format!("max λf over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_p·R1^(p-1)"),
        lam * fmax.value,
        consts.a_p * cr1.powf(spec.p - 1.0),
        fmax.sampling,
        d,
    ));
    let gmax =
        box_extremum(&spec.g, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
    report.conditions.push(le_record(
        "ind1-g",
        format!("max λg over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_q·R2^(q-1)"),
        lam * gmax.value,
        consts.a_q * cr2.powf(spec.q - 1.0),
        gmax.sampling,
        d,
    ));
    let fmin = box_extremum(&spec.f, Region::D1, (0.0, tr1), (0.0, tr2), ExtremumMode::Min, spec)?;
    report.conditions.push(gt_record(
        "ind0-or-f",
        format!("min λf over D1×[0,{tr1}]×[0,{tr2}] > B_1p·r1^(p-1)"),
        lam * fmin.value,
        consts.b1_p * r1.powf(spec.p - 1.0),
        fmin.sampling,
        d,
    ));
    let gmin = box_extremum(&spec.g, Region::D2, (0.0, tr1), (0.0, tr2), ExtremumMode::Min, spec)?;
    report.conditions.push(gt_record(
        "ind0-or-g",
        format!("min λg over D2×[0,{tr1}]×[0,{tr2}] > B_2q·r2^(q-1)"),
        lam * gmin.value,
        consts.b2_q * r2.powf(spec.q - 1.0),
        gmin.sampling,
        d,
    ));

    let ind1 = report.conditions[0].verdict && report.conditions[1].verdict;
    let f_disjunct = report.conditions[2].verdict;
    let g_disjunct = report.conditions[3].verdict;
    report.overall = ind1 && (f_disjunct || g_disjunct);
    if f_disjunct {
        report.notes.push("lower disjunct fired for f".into());
    }
    if g_disjunct {
        report.notes.push("lower disjunct fired for g".into());
    }
    if report.overall {
        report.notes.push(format!(
            "guarantees a nontrivial nonnegative solution with |u| ≤ {cr1}, |v| ≤ {cr2} and \
             (‖u‖ ≥ {r1} or ‖v‖ ≥ {r2} or |u| > {tr1} or |v| > {tr2})"
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Three-solution certificate
// ---------------------------------------------------------------------------

/// Six base conditions (non-strict at `R`, strict at `ρ` and `r`); optional
/// refinements (i)/(ii) bound the small solution away from zero when the
/// `ϱ`/`ρ̃` radii are present.
pub fn certify_three_solutions(
    spec: &ProblemSpec,
    consts: &ConstantSet,
) -> Result<CertificateReport, CertifyError> {
    spec.validate()?;
    let (r1, r2) = spec.radii.r;
    let (cr1, cr2) = spec.radii.big_r;
    let (rho1, rho2) = spec.radii.rho.ok_or_else(|| CertifyError::RejectedSpec {
        relation: "three-solution certificate needs rho".into(),
    })?;
    require(r1 < cr1, "need r1 < R1")?;
    require(r2 < cr2, "need r2 < R2")?;
    require(rho1 < r1 && rho2 < r2, "need rho_i < r_i")?;

    let mut report = CertificateReport::new("three-solutions", spec, consts);
    let lam = spec.lambda;
    let d = spec.strict_delta;

    let fmax =
        box_extremum(&spec.f, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
    report.conditions.push(le_record(
        "R-ind1-f",
        format!("max λf over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_p·R1^(p-1)"),
        lam * fmax.value,
        consts.a_p * cr1.powf(spec.p - 1.0),
        fmax.sampling,
        d,
    ));
    let gmax =
        box_extremum(&spec.g, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
    report.conditions.push(le_record(
        "R-ind1-g",
        format!("max λg over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_q·R2^(q-1)"),
        lam * gmax.value,
        consts.a_q * cr2.powf(spec.q - 1.0),
        gmax.sampling,
        d,
    ));
    let frho =
        box_extremum(&spec.f, Region::Omega, (0.0, rho1), (0.0, rho2), ExtremumMode::Max, spec)?;
    report.conditions.push(lt_record(
        "rho-ind1-f",
        format!("max λf over Ω×[0,{rho1}]×[0,{rho2}] < A_p·rho1^(p-1)"),
        lam * frho.value,
        consts.a_p * rho1.powf(spec.p - 1.0),
        frho.sampling,
        d,
    ));
    let grho =
        box_extremum(&spec.g, Region::Omega, (0.0, rho1), (0.0, rho2), ExtremumMode::Max, spec)?;
    report.conditions.push(lt_record(
        "rho-ind1-g",
        format!("max λg over Ω×[0,{rho1}]×[0,{rho2}] < A_q·rho2^(q-1)"),
        lam * grho.value,
        consts.a_q * rho2.powf(spec.q - 1.0),
        grho.sampling,
        d,
    ));
    let fmin = box_extremum(&spec.f, Region::D1, (r1, cr1), (0.0, cr2), ExtremumMode::Min, spec)?;
    report.conditions.push(gt_record(
        "r-ind0-f",
        format!("min λf over D1×[{r1},{cr1}]×[0,{cr2}] > B_1p·r1^(p-1)"),
        lam * fmin.value,
        consts.b1_p * r1.powf(spec.p - 1.0),
        fmin.sampling,
        d,
    ));
    let gmin = box_extremum(&spec.g, Region::D2, (0.0, cr1), (r2, cr2), ExtremumMode::Min, spec)?;
    report.conditions.push(gt_record(
        "r-ind0-g",
        format!("min λg over D2×[0,{cr1}]×[{r2},{cr2}] > B_2q·r2^(q-1)"),
        lam * gmin.value,
        consts.b2_q * r2.powf(spec.q - 1.0),
        gmin.sampling,
        d,
    ));

    report.overall = report.conditions.iter().all(|c| c.verdict);
    if report.overall {
        report.notes.push(format!(
            "guarantees three nonnegative solutions: |u1| < {rho1}, |v1| < {rho2} (possibly zero); \
             ‖u2‖ < {r1}, ‖v2‖ < {r2} with |u2| > {rho1} or |v2| > {rho2}; \
             ‖u3‖ > {r1}, ‖v3‖ > {r2}"
        ));
    }

    // refinement (i): both lower bounds at the varrho level
    if let Some((vr1, vr2)) = spec.radii.varrho {
        let fi =
            box_extremum(&spec.f, Region::D1, (vr1, rho1), (0.0, rho2), ExtremumMode::Min, spec)?;
        let rec_f = gt_record(
            "ind0-u1-f",
            format!("min λf over D1×[{vr1},{rho1}]×[0,{rho2}] > B_1p·varrho1^(p-1)"),
            lam * fi.value,
            consts.b1_p * vr1.powf(spec.p - 1.0),
            fi.sampling,
            d,
        );
        let gi =
            box_extremum(&spec.g, Region::D2, (0.0, rho1), (vr2, rho2), ExtremumMode::Min, spec)?;
        let rec_g = gt_record(
            "ind0-u1-g",
            format!("min λg over D2×[0,{rho1}]×[{vr2},{rho2}] > B_2q·varrho2^(q-1)"),
            lam * gi.value,
            consts.b2_q * vr2.powf(spec.q - 1.0),
            gi.sampling,
            d,
        );
        let both = rec_f.verdict && rec_g.verdict;
        report.conditions.push(rec_f);
        report.conditions.push(rec_g);
        if both {
            report.notes.push(format!(
                "refinement (i): the small solution satisfies ‖u1‖ ≥ {vr1} and ‖v1‖ ≥ {vr2}"
            ));
        }
    }

    // refinement (ii): one-sided lower bound under the tilde_rho caps
    if let (Some((vr1, vr2)), Some((tr1, tr2))) = (spec.radii.varrho, spec.radii.tilde_rho) {
        let fii =
            box_extremum(&spec.f, Region::D1, (0.0, tr1), (0.0, tr2), ExtremumMode::Min, spec)?;
        let rec_f = gt_record(
            "ind0-or-u1-f",
            format!("min λf over D1×[0,{tr1}]×[0,{tr2}] > B_1p·varrho1^(p-1)"),
            lam * fii.value,
            consts.b1_p * vr1.powf(spec.p - 1.0),
            fii.sampling,
            d,
        );
        let gii =
            box_extremum(&spec.g, Region::D2, (0.0, tr1), (0.0, tr2), ExtremumMode::Min, spec)?;
        let rec_g = gt_record(
            "ind0-or-u1-g",
            format!("min λg over D2×[0,{tr1}]×[0,{tr2}] > B_2q·varrho2^(q-1)"),
            lam * gii.value,
            consts.b2_q * vr2.powf(spec.q - 1.0),
            gii.sampling,
            d,
        );
        let either = rec_f.verdict || rec_g.verdict;
        report.conditions.push(rec_f);
        report.conditions.push(rec_g);
        if either {
            report.notes.push(format!(
                "refinement (ii): the small solution satisfies ‖u1‖ ≥ {vr1} or ‖v1‖ ≥ {vr2} \
                 or |u1| > {tr1} or |v1| > {tr2}"
            ));
        }
    }

    Ok(report)
}

// ---------------------------------------------------------------------------
// n-solution ladder certificate
// ---------------------------------------------------------------------------

/// One rung of the radius ladder.
#[derive(Debug, Clone, Copy)]
pub struct Rung {
    pub r: (f64, f64),
    pub big_r: (f64, f64),
}

/// Existence conditions at every rung of an increasing radius ladder give
/// `n` distinct nontrivial solutions; strict upper conditions at every rung
/// add `n-1` intermediate ones.
pub fn certify_n_solutions(
    spec: &ProblemSpec,
    ladder: &[Rung],
    consts: &ConstantSet,
) -> Result<CertificateReport, CertifyError> {
    spec.validate()?;
    require(!ladder.is_empty(), "ladder must have at least one rung")?;
    for (j, rung) in ladder.iter().enumerate() {
        require(
            rung.r.0 > 0.0 && rung.r.1 > 0.0 && rung.r.0 < rung.big_r.0 && rung.r.1 < rung.big_r.1,
            &format!("rung {}: need 0 < r < R", j + 1),
        )?;
        if j + 1 < ladder.len() {
            let next = &ladder[j + 1];
            require(
                rung.big_r.0 < next.r.0 && rung.big_r.1 < next.r.1,
                &format!("rungs {}/{}: need R^j < r^(j+1)", j + 1, j + 2),
            )?;
        }
    }

    let mut report = CertificateReport::new("n-solutions", spec, consts);
    let lam = spec.lambda;
    let d = spec.strict_delta;
    let mut all_strict = true;

    for (j, rung) in ladder.iter().enumerate() {
        let tag = format!("rung{}", j + 1);
        let (r1, r2) = rung.r;
        let (cr1, cr2) = rung.big_r;
        let fmax =
            box_extremum(&spec.f, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
        let rec = le_record(
            &format!("{tag}:ind1-f"),
            format!("max λf over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_p·R1^(p-1)"),
            lam * fmax.value,
            consts.a_p * cr1.powf(spec.p - 1.0),
            fmax.sampling,
            d,
        );
        // strict variant of the same bound backs the intermediate solutions
        all_strict &= rec.margin > d * scale_of(rec.lhs, rec.rhs);
        report.conditions.push(rec);

        let gmax =
            box_extremum(&spec.g, Region::Omega, (0.0, cr1), (0.0, cr2), ExtremumMode::Max, spec)?;
        let rec = le_record(
            &format!("{tag}:ind1-g"),
            format!("max λg over Ω×[0,{cr1}]×[0,{cr2}] ≤ A_q·R2^(q-1)"),
            lam * gmax.value,
            consts.a_q * cr2.powf(spec.q - 1.0),
            gmax.sampling,
            d,
        );
        all_strict &= rec.margin > d * scale_of(rec.lhs, rec.rhs);
        report.conditions.push(rec);

        let fmin =
            box_extremum(&spec.f, Region::D1, (r1, cr1), (0.0, cr2), ExtremumMode::Min, spec)?;
        report.conditions.push(gt_record(
            &format!("{tag}:ind0-f"),
            format!("min λf over D1×[{r1},{cr1}]×[0,{cr2}] > B_1p·r1^(p-1)"),
            lam * fmin.value,
            consts.b1_p * r1.powf(spec.p - 1.0),
            fmin.sampling,
            d,
        ));
        let gmin =
            box_extremum(&spec.g, Region::D2, (0.0, cr1), (r2, cr2), ExtremumMode::Min, spec)?;
        report.conditions.push(gt_record(
            &format!("{tag}:ind0-g"),
            format!("min λg over D2×[0,{cr1}]×[{r2},{cr2}] > B_2q·r2^(q-1)"),
            lam * gmin.value,
            consts.b2_q * r2.powf(spec.q - 1.0),
            gmin.sampling,
            d,
        ));
    }

    report.overall = report.conditions.iter().all(|c| c.verdict);
    let n = ladder.len();
    if report.overall {
        report.notes.push(format!(
            "guarantees {n} nontrivial solutions, the j-th with |u| ≤ R1^j, |v| ≤ R2^j, \
             ‖u‖ ≥ r1^j, ‖v‖ ≥ r2^j"
        ));
        if all_strict && n > 1 {
            report.notes.push(format!(
                "strict upper bounds hold at every rung: {} additional solutions localized \
                 between consecutive rungs (the strict minima conditions carry over to the \
                 inter-rung sets)",
                n - 1
            ));
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Nonexistence certificate
// ---------------------------------------------------------------------------

/// Pointwise comparison of `λf` against `λ_{1,p} u^{p-1}` / `B_{1,p} u^{p-1}`
/// and the `g` analogues, sampled on a user-declared bounded box. A verdict
/// of "holds" is always relative to that box; the global claim is sampled,
/// never proved.
pub fn certify_nonexistence(
    spec: &ProblemSpec,
    consts: &ConstantSet,
    box_u: (f64, f64),
    box_v: (f64, f64),
) -> Result<CertificateReport, CertifyError> {
    spec.validate()?;
    require(box_u.1 > box_u.0 && box_u.0 >= 0.0, "check box for u must be nonempty")?;
    require(box_v.1 > box_v.0 && box_v.0 >= 0.0, "check box for v must be nonempty")?;

    let mut report = CertificateReport::new("nonexistence", spec, consts);
    let lam = spec.lambda;
    let d = spec.strict_delta;
    let k = spec.resolution;

    // Strictly positive samples for the variables quantified over (0, ∞):
    // a uniform grid plus log-spaced points toward zero, where the
    // power-law comparisons typically bind.
    let positive_samples = |range: (f64, f64)| -> Vec<f64> {
        let mut out: Vec<f64> = linspace(range.0, range.1, k + 1);
        out.retain(|&t| t > 0.0);
        let lo = if range.0 > 0.0 { range.0 } else { range.1 * 1e-9 };
        let mut t = lo;
        while t < range.1 {
            out.push(t);
            t *= 4.0;
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    };
    let u_pos = positive_samples(box_u);
    let u_all = linspace(box_u.0, box_u.1, k);
    let v_pos = positive_samples(box_v);
    let v_all = linspace(box_v.0, box_v.1, k);

    struct Scan {
        margin: f64,
        witness: Option<(f64, f64, f64)>,
    }

    let scan = |e: &Expr,
                region: Region,
                us: &[f64],
                vs: &[f64],
                rhs: &dyn Fn(f64, f64) -> f64,
                want_less: bool|
     -> Result<Scan, CertifyError> {
        let nodes = spatial_nodes(e, region, &spec.domain, true);
        let mut margin = f64::INFINITY;
        let mut witness = None;
        for &node in &nodes {
            for &u in us {
                for &v in vs {
                    let val = lam * eval_at(e, &spec.domain, node, u, v)?;
                    let bound = rhs(u, v);
                    let m = if want_less { bound - val } else { val - bound };
                    if m < margin {
                        margin = m;
                        let (x, _) = spec.domain.coords(node);
                        witness = Some((x, u, v));
                    }
                }
            }
        }
        Ok(Scan { margin, witness })
    };

    let mut push = |id: &str, statement: String, scan: Scan| {
        let verdict = scan.margin > d;
        report.conditions.push(ConditionRecord {
            id: id.into(),
            statement,
            lhs: scan.margin,
            rhs: 0.0,
            margin: scan.margin,
            verdict,
            sampling: SamplingInfo::PerPoint {
                resolution: k,
                witness: if verdict { None } else { scan.witness },
            },
        });
    };

    let lp = consts.lambda1_p;
    let lq = consts.lambda1_q;
    let p = spec.p;
    let q = spec.q;

    push(
        "ne1",
        format!(
            "λf(x,u,v) < λ_1p·u^(p-1) on Ω×({},{}]×[{},{}]",
            box_u.0, box_u.1, box_v.0, box_v.1
        ),
        scan(&spec.f, Region::Omega, &u_pos, &v_all, &|u, _| lp * u.powf(p - 1.0), true)?,
    );
    push(
        "ne2",
        format!(
            "λf(x,u,v) > λ_1p·u^(p-1) on Ω×({},{}]×[{},{}]",
            box_u.0, box_u.1, box_v.0, box_v.1
        ),
        scan(&spec.f, Region::Omega, &u_pos, &v_all, &|u, _| lp * u.powf(p - 1.0), false)?,
    );
    push(
        "ne3",
        format!(
            "λf(x,u,v) > B_1p·u^(p-1) on D1×({},{}]×[{},{}]",
            box_u.0, box_u.1, box_v.0, box_v.1
        ),
        scan(&spec.f, Region::D1, &u_pos, &v_all, &|u, _| consts.b1_p * u.powf(p - 1.0), false)?,
    );
    push(
        "ne1'",
        format!(
            "λg(x,u,v) < λ_1q·v^(q-1) on Ω×[{},{}]×({},{}]",
            box_u.0, box_u.1, box_v.0, box_v.1
        ),
        scan(&spec.g, Region::Omega, &u_all, &v_pos, &|_, v| lq * v.powf(q - 1.0), true)?,
    );
    push(
        "ne2'",
        format!(
            "λg(x,u,v) > λ_1q·v^(q-1) on Ω×[{},{}]×({},{}]",
            box_u.0, box_u.1, box_v.0, box_v.1
        ),
        scan(&spec.g, Region::Omega, &u_all, &v_pos, &|_, v| lq * v.powf(q - 1.0), false)?,
    );
    push(
        "ne3'",
        format!(
            "λg(x,u,v) > B_2q·v^(q-1) on D2×[{},{}]×({},{}]",
            box_u.0, box_u.1, box_v.0, box_v.1
        ),
        scan(&spec.g, Region::D2, &u_all, &v_pos, &|_, v| consts.b2_q * v.powf(q - 1.0), false)?,
    );

    let f_side = report.conditions[..3].iter().any(|c| c.verdict);
    let g_side = report.conditions[3..].iter().any(|c| c.verdict);
    let corollary_i = f_side || g_side;
    let corollary_ii = f_side && g_side;
    report.overall = corollary_i;
    if corollary_i {
        report
            .notes
            .push("corollary (i): no positive solutions (verified on the sampled box)".into());
    }
    if corollary_ii {
        report.notes.push(
            "corollary (ii): no nontrivial nonnegative solutions (verified on the sampled box)"
                .into(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone_consts::compute_constants;
    use crate::grid::AxisRange;
    use crate::plap::SolverConfig;

    fn demo_domain(n: usize) -> Arc<GridDomain> {
        GridDomain::interval(1.0, n, AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75))
            .unwrap()
    }

    fn demo_consts(n: usize) -> (Arc<GridDomain>, ConstantSet) {
        let d = demo_domain(n);
        let c = compute_constants(&d, 2.0, 2.0, &SolverConfig::new(2.0)).unwrap();
        (d, c)
    }

    fn const16_spec(domain: Arc<GridDomain>) -> ProblemSpec {
        ProblemSpec::new(
            domain,
            2.0,
            2.0,
            Expr::parse("16").unwrap(),
            Expr::parse("16").unwrap(),
            Radii::basic((0.5, 0.5), (2.0, 2.0)),
        )
    }

    #[test]
    fn box_extremum_examples() {
        let d = demo_domain(33);
        let mut spec = const16_spec(d);
        // rational bump: increasing on [0, 2], max 1/3 at the right corner
        spec.f = Expr::parse("u^2/(4+u^3)").unwrap();
        spec.mono_f = (Monotonicity::Increasing, Monotonicity::Increasing);
        let ext =
            box_extremum(&spec.f, Region::Omega, (0.0, 2.0), (0.0, 1.0), ExtremumMode::Max, &spec)
                .unwrap();
        assert_eq!(ext.sampling, SamplingInfo::Corner);
        assert!((ext.value - 1.0 / 3.0).abs() < 1e-15);

        // constant expression: either mode returns the constant
        let c = Expr::parse("7.5").unwrap();
        for mode in [ExtremumMode::Min, ExtremumMode::Max] {
            let e = box_extremum(&c, Region::D1, (0.0, 1.0), (0.0, 1.0), mode, &spec).unwrap();
            assert_eq!(e.value, 7.5);
        }

        // u + v with both increasing: max at the (1,1) corner
        spec.f = Expr::parse("u + v").unwrap();
        spec.mono_f = (Monotonicity::Increasing, Monotonicity::Increasing);
        let e =
            box_extremum(&spec.f, Region::Omega, (0.0, 1.0), (0.0, 1.0), ExtremumMode::Max, &spec)
                .unwrap();
        assert_eq!(e.value, 2.0);
    }

    #[test]
    fn sampled_extremum_resolution_monotone() {
        // nested refinement (k -> 2k-1) can only lower a sampled minimum
        let d = demo_domain(33);
        let mut spec = const16_spec(d);
        spec.f = Expr::parse("(u - 0.61)^2 + 0.1").unwrap();
        spec.resolution = 9;
        let coarse =
            box_extremum(&spec.f, Region::D1, (0.0, 1.0), (0.0, 1.0), ExtremumMode::Min, &spec)
                .unwrap();
        spec.resolution = 17;
        let fine =
            box_extremum(&spec.f, Region::D1, (0.0, 1.0), (0.0, 1.0), ExtremumMode::Min, &spec)
                .unwrap();
        assert!(fine.value <= coarse.value + 1e-15);
    }

    #[test]
    fn existence_demo_passes() {
        // f ≡ 16 against A₂ = 8, B ≈ 16: 16 ≤ 8·2 and 16 > 16·0.5
        let (d, c) = demo_consts(257);
        let spec = const16_spec(d);
        let report = certify_existence(&spec, &c).unwrap();
        assert!(report.overall, "{:#?}", report.conditions);
        assert_eq!(report.conditions.len(), 4);
    }

    #[test]
    fn existence_zero_f_fails_lower_condition() {
        let (d, c) = demo_consts(129);
        let mut spec = const16_spec(d);
        spec.f = Expr::parse("0").unwrap();
        let report = certify_existence(&spec, &c).unwrap();
        assert!(!report.overall);
        let ind0 = report.conditions.iter().find(|r| r.id == "ind0-f").unwrap();
        assert!(!ind0.verdict);
    }

    #[test]
    fn existence_rejects_bad_radii() {
        let (d, c) = demo_consts(129);
        let mut spec = const16_spec(d);
        spec.radii.r = (2.0, 0.5);
        assert!(matches!(certify_existence(&spec, &c), Err(CertifyError::RejectedSpec { .. })));
    }

    #[test]
    fn existence_or_one_sided() {
        let (d, c) = demo_consts(257);
        let mut spec = const16_spec(d.clone());
        spec.g = Expr::parse("0").unwrap();
        let report = certify_existence_or(&spec, &c).unwrap();
        assert!(report.overall, "f-disjunct should carry the certificate");
        assert!(report.notes.iter().any(|n| n.contains("for f")));

        // both zero: neither disjunct
        spec.f = Expr::parse("0").unwrap();
        let report = certify_existence_or(&spec, &c).unwrap();
        assert!(!report.overall);

        // both nonzero: both disjuncts listed
        let spec2 = const16_spec(d);
        let report = certify_existence_or(&spec2, &c).unwrap();
        assert!(report.overall);
        assert!(report.notes.iter().any(|n| n.contains("for f")));
        assert!(report.notes.iter().any(|n| n.contains("for g")));
    }

    #[test]
    fn three_solutions_requires_ordering() {
        let (d, c) = demo_consts(129);
        let mut spec = const16_spec(d);
        spec.radii.rho = Some((0.6, 0.6)); // not < r = 0.5
        assert!(matches!(
            certify_three_solutions(&spec, &c),
            Err(CertifyError::RejectedSpec { .. })
        ));
    }

    #[test]
    fn three_solutions_zero_fails() {
        let (d, c) = demo_consts(129);
        let mut spec = const16_spec(d);
        spec.f = Expr::parse("0").unwrap();
        spec.g = Expr::parse("0").unwrap();
        spec.radii.rho = Some((0.25, 0.25));
        let report = certify_three_solutions(&spec, &c).unwrap();
        assert!(!report.overall);
        assert!(report.conditions.iter().any(|r| r.id == "r-ind0-f" && !r.verdict));
    }

    #[test]
    fn ladder_single_rung_matches_existence() {
        let (d, c) = demo_consts(257);
        let spec = const16_spec(d);
        let rung = Rung { r: spec.radii.r, big_r: spec.radii.big_r };
        let ladder_report = certify_n_solutions(&spec, &[rung], &c).unwrap();
        let existence_report = certify_existence(&spec, &c).unwrap();
        assert_eq!(ladder_report.overall, existence_report.overall);
        assert_eq!(ladder_report.conditions.len(), 4);
        for (a, b) in ladder_report.conditions.iter().zip(&existence_report.conditions) {
            assert_eq!(a.verdict, b.verdict);
            assert!((a.margin - b.margin).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_two_rungs_staircase() {
        // staircase nonlinearity built to clear both rungs by corner
        // arithmetic: constant 12 low, ramp to 78 high
        let (d, c) = demo_consts(257);
        let mut spec = const16_spec(d);
        spec.f = Expr::parse("min(max(12, 51*u - 93), 78)").unwrap();
        spec.g = Expr::parse("min(max(12, 51*v - 93), 78)").unwrap();
        spec.mono_f = (Monotonicity::Increasing, Monotonicity::Increasing);
        spec.mono_g = (Monotonicity::Increasing, Monotonicity::Increasing);
        let ladder = [
            Rung { r: (0.5, 0.5), big_r: (2.0, 2.0) },
            Rung { r: (3.0, 3.0), big_r: (10.0, 10.0) },
        ];
        let report = certify_n_solutions(&spec, &ladder, &c).unwrap();
        assert!(report.overall, "{:#?}", report.conditions);
        assert!(report.notes.iter().any(|n| n.contains("2 nontrivial")));
        assert!(report.notes.iter().any(|n| n.contains("1 additional")));
    }

    #[test]
    fn ladder_overlapping_rungs_rejected() {
        let (d, c) = demo_consts(129);
        let spec = const16_spec(d);
        let ladder = [
            Rung { r: (0.5, 0.5), big_r: (3.0, 3.0) },
            Rung { r: (2.0, 2.0), big_r: (10.0, 10.0) }, // r² < R¹
        ];
        assert!(matches!(
            certify_n_solutions(&spec, &ladder, &c),
            Err(CertifyError::RejectedSpec { .. })
        ));
    }

    #[test]
    fn nonexistence_sublinear_f() {
        // f = 0.5·λ_1p·u stays below λ_1p·u^{p-1} for u > 0 (p = 2)
        let (d, c) = demo_consts(513);
        let mut spec = const16_spec(d);
        spec.f = Expr::parse("0.5*9.8696*u").unwrap();
        spec.g = Expr::parse("0").unwrap();
        let report = certify_nonexistence(&spec, &c, (0.0, 10.0), (0.0, 10.0)).unwrap();
        let ne1 = report.conditions.iter().find(|r| r.id == "ne1").unwrap();
        assert!(ne1.verdict, "ne1 margin {}", ne1.margin);
        assert!(report.overall);
        assert!(report.notes.iter().any(|n| n.contains("corollary (i)")));
    }

    #[test]
    fn nonexistence_constant_f_violated_near_zero() {
        let (d, c) = demo_consts(129);
        let mut spec = const16_spec(d);
        spec.f = Expr::parse("1").unwrap();
        let report = certify_nonexistence(&spec, &c, (0.0, 10.0), (0.0, 10.0)).unwrap();
        let ne1 = report.conditions.iter().find(|r| r.id == "ne1").unwrap();
        assert!(!ne1.verdict);
        match &ne1.sampling {
            SamplingInfo::PerPoint { witness: Some((_, u, _)), .. } => {
                assert!(*u <= 1.0, "violation witness should sit at small u, got {u}");
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn nonexistence_superlinear_g() {
        // g = 20·v with 20 > π²: the strict upper condition fires for g
        let (d, c) = demo_consts(513);
        let mut spec = const16_spec(d);
        spec.g = Expr::parse("20*v").unwrap();
        let report = certify_nonexistence(&spec, &c, (0.0, 10.0), (0.0, 10.0)).unwrap();
        let ne2p = report.conditions.iter().find(|r| r.id == "ne2'").unwrap();
        assert!(ne2p.verdict, "margin {}", ne2p.margin);
    }

    #[test]
    fn margin_sign_reproduces_verdict() {
        let (d, c) = demo_consts(129);
        let spec = const16_spec(d);
        let report = certify_existence(&spec, &c).unwrap();
        for rec in &report.conditions {
            let scale = rec.lhs.abs().max(rec.rhs.abs()).max(1.0);
            if rec.id.starts_with("ind0") {
                assert_eq!(rec.verdict, rec.margin > spec.strict_delta * scale);
            } else {
                assert_eq!(rec.verdict, rec.margin >= -spec.strict_delta * scale);
            }
        }
    }

    #[test]
    fn corner_evaluation_agrees_with_sampling_on_monotone_exprs() {
        // for declaredly monotone expressions the sampled extremum (with
        // endpoints on the grid) lands on the same corner
        let d = demo_domain(17);
        let mut rng_state = 0xfeed_5eedu64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10 {
            let a = next() * 5.0;
            let b = next() * 5.0;
            let c = next() * 3.0;
            let src = format!("{a}*u + {b}*atan(v) + {c}");
            let mut with_mono = const16_spec(d.clone());
            with_mono.f = Expr::parse(&src).unwrap();
            with_mono.mono_f = (Monotonicity::Increasing, Monotonicity::Increasing);
            let mut sampled = const16_spec(d.clone());
            sampled.f = Expr::parse(&src).unwrap();
            sampled.g = sampled.f.clone(); // shadow so mono_of(f) stays Unknown
            sampled.f = Expr::parse("16").unwrap();
            for mode in [ExtremumMode::Min, ExtremumMode::Max] {
                let corner = box_extremum(
                    &with_mono.f,
                    Region::Omega,
                    (0.2, 1.7),
                    (0.1, 2.4),
                    mode,
                    &with_mono,
                )
                .unwrap();
                let scan = box_extremum(
                    &sampled.g,
                    Region::Omega,
                    (0.2, 1.7),
                    (0.1, 2.4),
                    mode,
                    &sampled,
                )
                .unwrap();
                assert_eq!(corner.sampling, SamplingInfo::Corner);
                assert!(
                    matches!(scan.sampling, SamplingInfo::Sampled { .. }),
                    "expected sampled path"
                );
                assert!(
                    (corner.value - scan.value).abs() < 1e-12 * corner.value.abs().max(1.0),
                    "corner {} vs sampled {}",
                    corner.value,
                    scan.value
                );
            }
        }
    }

    #[test]
    fn validate_rejects_negative_nonlinearity() {
        let (d, _c) = demo_consts(129);
        let mut spec = const16_spec(d);
        spec.f = Expr::parse("u - 1").unwrap();
        assert!(matches!(spec.validate(), Err(CertifyError::RejectedSpec { .. })));
    }

    #[test]
    fn validate_rejects_small_exponent() {
        let (d, _c) = demo_consts(129);
        let mut spec = const16_spec(d);
        spec.p = 1.0;
        assert!(matches!(spec.validate(), Err(CertifyError::RejectedSpec { .. })));
    }
}
