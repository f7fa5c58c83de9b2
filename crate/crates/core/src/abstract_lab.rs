//! Finite-dimensional sandbox for the abstract cone fixed-point theorems.
//!
//! Component spaces are `ℝ^{n₁}`, `ℝ^{n₂}` ordered by the nonnegative
//! orthant, with the sup norm and the min-over-mask seminorm, exactly the
//! structure the PDE instantiation uses. Operators are arbitrary evaluable
//! pairs of component maps. `check_conditions` evaluates the labelled
//! hypothesis catalog by extremizing over Cartesian samples of the relevant
//! compact sets, and `validate_theorem` confronts each theorem's conclusion
//! with a brute-force fixed-point search, so the abstract machinery is
//! exercised end to end at desk scale.
//!
//! A search that fails to exhibit a predicted fixed point reports
//! NOT-FOUND-AT-RESOLUTION, never "refuted": grid search is incomplete.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cone_consts::RadialElement;
use crate::expr::{Env, Expr};

const REFINE_TOL: f64 = 1e-12;
const DEDUP_TOL: f64 = 1e-8;
/// Slack for conclusion-region comparisons on refined fixed points.
const REGION_SLACK: f64 = 1e-7;
/// Relative safety margin separating strict from non-strict passes.
const DELTA: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("hypothesis set not satisfied; failing conditions: {0:?}")]
    HypothesisFailed(Vec<String>),
    #[error("total dimension {0} exceeds the brute-force cap of 6")]
    TooManyDims(usize),
    #[error("theorem needs radii field `{0}`")]
    MissingRadii(&'static str),
}

/// Nonnegative vector in one component space, with the min-over-mask
/// seminorm. The mask plays the role of the abstract `χ` (as a 0/1 vector).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeVector {
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl ConeVector {
    pub fn new(values: Vec<f64>, mask: Vec<bool>) -> Self {
        assert_eq!(values.len(), mask.len(), "mask length mismatch");
        assert!(mask.iter().any(|&b| b), "mask must be nonempty");
        assert!(values.iter().all(|&v| v >= 0.0), "cone vectors are nonnegative");
        ConeVector { values, mask }
    }

    /// The indicator of the mask: `‖χ‖ = 1`, `|χ| = 1`.
    pub fn chi(mask: Vec<bool>) -> Self {
        let values = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        ConeVector::new(values, mask)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(*v))
    }

    /// `min` over the masked coordinates.
    pub fn seminorm(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.mask)
            .filter(|(_, &m)| m)
            .fold(f64::INFINITY, |acc, (v, _)| acc.min(*v))
    }

    /// `u ≥ ‖u‖·χ` coordinatewise; automatic under the min seminorm.
    pub fn cone_membership(&self) -> bool {
        let s = self.seminorm();
        self.values.iter().zip(&self.mask).all(|(&v, &m)| v >= if m { s } else { 0.0 })
    }
}

impl RadialElement for ConeVector {
    fn sup(&self) -> f64 {
        ConeVector::sup(self)
    }

    fn scaled(&self, factor: f64) -> Self {
        ConeVector {
            values: self.values.iter().map(|v| v * factor).collect(),
            mask: self.mask.clone(),
        }
    }
}

type MapFn = dyn Fn(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync;

/// An evaluable operator `N = (N₁, N₂)` on the product cone, together with
/// the structural declarations the condition checks can exploit.
#[derive(Clone)]
pub struct LabOperator {
    pub name: String,
    pub n1: usize,
    pub n2: usize,
    pub mask1: Vec<bool>,
    pub mask2: Vec<bool>,
    map: Arc<MapFn>,
    /// Declared isotone (order-preserving in both arguments).
    pub isotone: bool,
    /// Declared positively homogeneous of degree 1 (enables the exact ray
    /// test for the `N ≠ λz` conditions).
    pub homogeneous: bool,
}

impl fmt::Debug for LabOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabOperator")
            .field("name", &self.name)
            .field("n1", &self.n1)
            .field("n2", &self.n2)
            .finish()
    }
}

impl LabOperator {
    pub fn from_fn(
        name: &str,
        n1: usize,
        n2: usize,
        map: impl Fn(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync + 'static,
    ) -> Self {
        LabOperator {
            name: name.into(),
            n1,
            n2,
            mask1: vec![true; n1],
            mask2: vec![true; n2],
            map: Arc::new(map),
            isotone: false,
            homogeneous: false,
        }
    }

    /// Build from one expression per output coordinate; coordinates bind as
    /// `u1..u6`, `v1..v6` (`u`, `v` alias the first coordinate of each side).
    pub fn from_exprs(name: &str, exprs1: Vec<Expr>, exprs2: Vec<Expr>) -> Self {
        let n1 = exprs1.len();
        let n2 = exprs2.len();
        let map = move |u: &[f64], v: &[f64]| -> (Vec<f64>, Vec<f64>) {
            let env = Env::lab(u, v);
            let a = exprs1.iter().map(|e| e.eval(&env).unwrap_or(f64::NAN)).collect();
            let b = exprs2.iter().map(|e| e.eval(&env).unwrap_or(f64::NAN)).collect();
            (a, b)
        };
        LabOperator::from_fn(name, n1, n2, map)
    }

    pub fn constant(name: &str, c1: Vec<f64>, c2: Vec<f64>) -> Self {
        let n1 = c1.len();
        let n2 = c2.len();
        LabOperator::from_fn(name, n1, n2, move |_, _| (c1.clone(), c2.clone()))
    }

    pub fn with_isotone(mut self, isotone: bool) -> Self {
        self.isotone = isotone;
        self
    }

    pub fn with_homogeneous(mut self, homogeneous: bool) -> Self {
        self.homogeneous = homogeneous;
        self
    }

    pub fn with_masks(mut self, mask1: Vec<bool>, mask2: Vec<bool>) -> Self {
        assert_eq!(mask1.len(), self.n1);
        assert_eq!(mask2.len(), self.n2);
        assert!(mask1.iter().any(|&b| b) && mask2.iter().any(|&b| b));
        self.mask1 = mask1;
        self.mask2 = mask2;
        self
    }

    pub fn apply(&self, u: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (self.map)(u, v)
    }

    fn semi1(&self, w: &[f64]) -> f64 {
        min_over_mask(w, &self.mask1)
    }

    fn semi2(&self, w: &[f64]) -> f64 {
        min_over_mask(w, &self.mask2)
    }
}

fn min_over_mask(w: &[f64], mask: &[bool]) -> f64 {
    w.iter().zip(mask).filter(|(_, &m)| m).fold(f64::INFINITY, |acc, (v, _)| acc.min(*v))
}

fn sup_of(w: &[f64]) -> f64 {
    w.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Radii the conditions and theorems quantify over.
#[derive(Debug, Clone, Copy)]
pub struct LabRadii {
    pub r: (f64, f64),
    pub big_r: (f64, f64),
    pub rho: Option<(f64, f64)>,
    pub varrho: Option<(f64, f64)>,
    pub tilde_rho: Option<(f64, f64)>,
}

impl LabRadii {
    pub fn basic(r: (f64, f64), big_r: (f64, f64)) -> Self {
        LabRadii { r, big_r, rho: None, varrho: None, tilde_rho: None }
    }

    pub fn with_rho(mut self, rho: (f64, f64)) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn with_varrho(mut self, varrho: (f64, f64)) -> Self {
        self.varrho = Some(varrho);
        self
    }

    pub fn with_tilde_rho(mut self, tilde_rho: (f64, f64)) -> Self {
        self.tilde_rho = Some(tilde_rho);
        self
    }
}

/// The closed catalog of labelled hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    C5,
    C5Prime,
    C6,
    C6OrA,
    C6Strong,
    C6Stronger,
    C6Prime,
    C6StrongPrime,
    C6StrongerPrime,
    C6PrimeStrict,
    C6DoublePrime,
    Deg1Rho,
    C6Varrho,
    C6OrVarrho,
    C4,
    Br,
    Br1,
    Iso6Prime,
    Iso6PrimePrime,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::C5 => "(5)",
            ConditionId::C5Prime => "(5')",
            ConditionId::C6 => "(6)",
            ConditionId::C6OrA => "(6-or-A)",
            ConditionId::C6Strong => "(6-strong)",
            ConditionId::C6Stronger => "(6-stronger)",
            ConditionId::C6Prime => "(6')",
            ConditionId::C6StrongPrime => "(6-strong')",
            ConditionId::C6StrongerPrime => "(6-stronger')",
            ConditionId::C6PrimeStrict => "(6'>)",
            ConditionId::C6DoublePrime => "(6'')",
            ConditionId::Deg1Rho => "(deg1-rho)",
            ConditionId::C6Varrho => "(6varrho)",
            ConditionId::C6OrVarrho => "(6-or-varrho)",
            ConditionId::C4 => "(4)",
            ConditionId::Br => "(br)",
            ConditionId::Br1 => "(br1)",
            ConditionId::Iso6Prime => "(iso-6')",
            ConditionId::Iso6PrimePrime => "(iso-6'')",
        };
        write!(f, "{s}")
    }
}

impl ConditionId {
    pub fn parse(s: &str) -> Option<ConditionId> {
        use ConditionId::*;
        Some(match s {
            "(5)" => C5,
            "(5')" => C5Prime,
            "(6)" => C6,
            "(6-or-A)" => C6OrA,
            "(6-strong)" => C6Strong,
            "(6-stronger)" => C6Stronger,
            "(6')" => C6Prime,
            "(6-strong')" => C6StrongPrime,
            "(6-stronger')" => C6StrongerPrime,
            "(6'>)" => C6PrimeStrict,
            "(6'')" => C6DoublePrime,
            "(deg1-rho)" => Deg1Rho,
            "(6varrho)" => C6Varrho,
            "(6-or-varrho)" => C6OrVarrho,
            "(4)" => C4,
            "(br)" => Br,
            "(br1)" => Br1,
            "(iso-6')" => Iso6Prime,
            "(iso-6'')" => Iso6PrimePrime,
            _ => return None,
        })
    }

    pub fn all() -> &'static [ConditionId] {
        use ConditionId::*;
        &[
            C5, C5Prime, C6, C6OrA, C6Strong, C6Stronger, C6Prime, C6StrongPrime,
            C6StrongerPrime, C6PrimeStrict, C6DoublePrime, Deg1Rho, C6Varrho, C6OrVarrho, C4, Br,
            Br1, Iso6Prime, Iso6PrimePrime,
        ]
    }
}

/// Verdict for one catalog condition. A vacuous entry means the sampled set
/// was empty (e.g. `r > R`): it passes but carries a warning flag.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCatalogEntry {
    #[serde(serialize_with = "serialize_condition_id")]
    pub id: ConditionId,
    pub params: String,
    pub margin: f64,
    pub verdict: bool,
    pub vacuous: bool,
}

fn serialize_condition_id<S: serde::Serializer>(id: &ConditionId, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&id.to_string())
}

fn entry(id: ConditionId, params: String, margin: f64, verdict: bool) -> ConditionCatalogEntry {
    ConditionCatalogEntry { id, params, margin, verdict, vacuous: false }
}

fn vacuous_entry(id: ConditionId, params: String) -> ConditionCatalogEntry {
    ConditionCatalogEntry {
        id,
        params: format!("{params}; sampled set empty: vacuously true"),
        margin: f64::INFINITY,
        verdict: true,
        vacuous: true,
    }
}

// ---------------------------------------------------------------------------
// Set sampling
// ---------------------------------------------------------------------------

/// Constraint on one component vector within its `[0, cap]` sup-ball.
#[derive(Debug, Clone, Copy)]
enum CompSet {
    /// `[0, cap]^n`.
    Box { cap: f64 },
    /// `min_mask = r`, coords in `[0, cap]` (masked coords ≥ r).
    SemiEq { r: f64, cap: f64 },
    /// `min_mask ≥ r`, sup ≤ cap.
    SemiGe { r: f64, cap: f64 },
    /// `min_mask ≤ r` (strictly, when `strict`), sup ≤ cap.
    SemiLe { r: f64, cap: f64, strict: bool },
    /// `sup = s` exactly (one coordinate pinned to s).
    SupEq { s: f64 },
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for base in &out {
            for &val in axis {
                let mut item = base.clone();
                item.push(val);
                next.push(item);
            }
        }
        out = next;
    }
    out
}

fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if hi < lo {
        return Vec::new();
    }
    if k <= 1 || hi == lo {
        return vec![lo];
    }
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn sample_component(n: usize, mask: &[bool], set: CompSet, k: usize) -> Vec<Vec<f64>> {
    match set {
        CompSet::Box { cap } => cartesian(&vec![grid(0.0, cap, k); n]),
        CompSet::SemiGe { r, cap } => {
            if r > cap {
                return Vec::new();
            }
            let axes: Vec<Vec<f64>> = (0..n)
                .map(|i| if mask[i] { grid(r, cap, k) } else { grid(0.0, cap, k) })
                .collect();
            cartesian(&axes)
        }
        CompSet::SemiEq { r, cap } => {
            if r > cap {
                return Vec::new();
            }
            let mut out = Vec::new();
            for pin in 0..n {
                if !mask[pin] {
                    continue;
                }
                let axes: Vec<Vec<f64>> = (0..n)
                    .map(|i| {
                        if i == pin {
                            vec![r]
                        } else if mask[i] {
                            grid(r, cap, k)
                        } else {
                            grid(0.0, cap, k)
                        }
                    })
                    .collect();
                out.extend(cartesian(&axes));
            }
            out
        }
        CompSet::SemiLe { r, cap, strict } => {
            let mut out = cartesian(&vec![grid(0.0, cap, k); n]);
            out.retain(|w| {
                let m = min_over_mask(w, mask);
                if strict {
                    m < r
                } else {
                    m <= r + 1e-12 * r.abs().max(1.0)
                }
            });
            out
        }
        CompSet::SupEq { s } => {
            if s == 0.0 {
                return vec![vec![0.0; n]];
            }
            let mut out = Vec::new();
            for pin in 0..n {
                let axes: Vec<Vec<f64>> =
                    (0..n).map(|i| if i == pin { vec![s] } else { grid(0.0, s, k) }).collect();
                out.extend(cartesian(&axes));
            }
            out
        }
    }
}

/// Per-axis sample count bounded so the pair product stays tractable.
fn effective_k(k: usize, n_total: usize) -> usize {
    let budget = 60_000f64;
    let cap = budget.powf(1.0 / n_total.max(1) as f64).floor() as usize;
    k.clamp(2, cap.max(2))
}

fn sample_pairs(
    op: &LabOperator,
    set1: CompSet,
    set2: CompSet,
    k: usize,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let k = effective_k(k, op.n1 + op.n2);
    let us = sample_component(op.n1, &op.mask1, set1, k);
    let vs = sample_component(op.n2, &op.mask2, set2, k);
    let mut out = Vec::with_capacity(us.len() * vs.len());
    for u in &us {
        for v in &vs {
            out.push((u.clone(), v.clone()));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Condition evaluation
// ---------------------------------------------------------------------------

/// λ-condition flavor: the joint ray condition `N(z) ≠ λz`, or the
/// componentwise one used by the π-retraction theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LambdaMode {
    Joint { include_one: bool },
    Componentwise,
}

fn lambda_grid(include_one: bool) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=20).map(|k| 1.0 + 0.5f64.powi(k)).collect();
    g.extend([2.0, 4.0, 8.0]);
    if include_one {
        g.push(1.0);
    }
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g.dedup();
    g
}

/// Distance from `w` to the admissible ray `{λz : λ ≥ λ_min}` in sup norm.
fn ray_distance(w: &[f64], z: &[f64], lambda_min: f64) -> f64 {
    let zz: f64 = z.iter().map(|a| a * a).sum();
    if zz == 0.0 {
        return sup_of(w);
    }
    let wz: f64 = w.iter().zip(z).map(|(a, b)| a * b).sum();
    let lambda = (wz / zz).max(lambda_min);
    w.iter().zip(z).fold(0.0_f64, |m, (a, b)| m.max((a - lambda * b).abs()))
}

/// Smallest sup-distance `|N(z) - λz|` over the λ grid (or the exact ray
/// test for homogeneous operators) across the sampled boundary pieces.
fn lambda_free_margin(op: &LabOperator, samples: &[(Vec<f64>, Vec<f64>)], mode: LambdaMode) -> f64 {
    let mut margin = f64::INFINITY;
    match mode {
        LambdaMode::Joint { include_one } => {
            let lambda_min = if include_one { 1.0 } else { 1.0 + 1e-12 };
            let grid = lambda_grid(include_one);
            for (u, v) in samples {
                let (nu, nv) = op.apply(u, v);
                let w: Vec<f64> = nu.iter().chain(nv.iter()).copied().collect();
                let z: Vec<f64> = u.iter().chain(v.iter()).copied().collect();
                let dist = if op.homogeneous {
                    ray_distance(&w, &z, lambda_min)
                } else {
                    grid.iter()
                        .map(|&lam| {
                            w.iter().zip(&z).fold(0.0_f64, |m, (a, b)| m.max((a - lam * b).abs()))
                        })
                        .fold(f64::INFINITY, f64::min)
                };
                margin = margin.min(dist);
            }
        }
        LambdaMode::Componentwise => {
            for (u, v) in samples {
                let (nu, nv) = op.apply(u, v);
                // N = (λu, v) with λ > 1
                let d1 = ray_distance(&nu, u, 1.0).max(sup_distance(&nv, v));
                // N = (u, λv) with λ > 1
                let d2 = ray_distance(&nv, v, 1.0).max(sup_distance(&nu, u));
                // N = (λ₁u, λ₂v), λᵢ ≥ 1, λ₁λ₂ > 1
                let d3 = ray_distance(&nu, u, 1.0).max(ray_distance(&nv, v, 1.0));
                margin = margin.min(d1.min(d2).min(d3));
            }
        }
    }
    margin
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Evaluate the requested catalog subset against the operator and radii.
pub fn check_conditions(
    op: &LabOperator,
    radii: &LabRadii,
    ids: &[ConditionId],
    resolution: usize,
) -> Vec<ConditionCatalogEntry> {
    let (r1, r2) = radii.r;
    let (cr1, cr2) = radii.big_r;
    // φ_i = χ_i/|χ_i| (the canonical choice): with 0/1 masks both norms are 1
    let chi1 = ConeVector::chi(op.mask1.clone());
    let chi2 = ConeVector::chi(op.mask2.clone());
    let phi_semi = (chi1.seminorm(), chi2.seminorm());
    let chi_semi = (chi1.seminorm(), chi2.seminorm());

    // infimum of ‖N_i‖ (optionally retraction-weighted) over a sampled set
    let inf_semi = |set1: CompSet,
                    set2: CompSet,
                    comp: usize,
                    weight: &dyn Fn(&[f64], &[f64]) -> f64|
     -> Option<f64> {
        let samples = sample_pairs(op, set1, set2, resolution);
        if samples.is_empty() {
            return None;
        }
        let mut inf = f64::INFINITY;
        for (u, v) in &samples {
            let (nu, nv) = op.apply(u, v);
            let w = weight(&nu, &nv);
            let s = if comp == 1 { op.semi1(&nu) } else { op.semi2(&nv) };
            inf = inf.min(s / w);
        }
        Some(inf)
    };
    let unweighted = |_: &[f64], _: &[f64]| 1.0;

    let mut out = Vec::new();
    for &id in ids {
        let e = match id {
            ConditionId::C5 => {
                let m1 = phi_semi.0 * chi_semi.0 * cr1 - r1;
                let m2 = phi_semi.1 * chi_semi.1 * cr2 - r2;
                let margin = m1.min(m2);
                entry(
                    id,
                    format!("r_i < ‖φ_i‖‖χ_i‖R_i at r=({r1},{r2}), R=({cr1},{cr2})"),
                    margin,
                    margin > 0.0,
                )
            }
            ConditionId::C5Prime => {
                // ‖1‖ = 1 for the min-over-mask seminorm
                let ones1 = ConeVector::new(vec![1.0; op.n1], op.mask1.clone());
                let ones2 = ConeVector::new(vec![1.0; op.n2], op.mask2.clone());
                let margin = (ones1.seminorm() * cr1 - r1).min(ones2.seminorm() * cr2 - r2);
                entry(
                    id,
                    format!("r_i < ‖1‖R_i at r=({r1},{r2}), R=({cr1},{cr2})"),
                    margin,
                    margin > 0.0,
                )
            }
            ConditionId::C4 => {
                let samples =
                    sample_pairs(op, CompSet::Box { cap: cr1 }, CompSet::Box { cap: cr2 }, resolution);
                let mut margin = f64::INFINITY;
                for (u, v) in &samples {
                    let (nu, nv) = op.apply(u, v);
                    margin = margin.min(cr1 - sup_of(&nu)).min(cr2 - sup_of(&nv));
                }
                let scale = cr1.max(cr2).max(1.0);
                entry(
                    id,
                    format!("sup_C |N_i| ≤ R_i at R=({cr1},{cr2}), k={resolution}"),
                    margin,
                    margin >= -DELTA * scale,
                )
            }
            ConditionId::C6 | ConditionId::Br1 => {
                // A₁ = {‖u‖=r₁, ‖v‖≤r₂} and A₂ symmetric, within C
                let a1 = inf_semi(
                    CompSet::SemiEq { r: r1, cap: cr1 },
                    CompSet::SemiLe { r: r2, cap: cr2, strict: false },
                    1,
                    &unweighted,
                );
                let a2 = inf_semi(
                    CompSet::SemiLe { r: r1, cap: cr1, strict: false },
                    CompSet::SemiEq { r: r2, cap: cr2 },
                    2,
                    &unweighted,
                );
                match (a1, a2) {
                    (Some(i1), Some(i2)) => {
                        if id == ConditionId::C6 {
                            let margin = (i1 - r1 / chi_semi.0).min(i2 - r2 / chi_semi.1);
                            let scale = r1.max(r2).max(1.0);
                            entry(
                                id,
                                format!("inf ‖N_i‖ ≥ r_i/‖χ_i‖ on A_i, k={resolution}"),
                                margin,
                                margin >= -DELTA * scale,
                            )
                        } else {
                            // (br1): strict, against r_i directly
                            let margin = (i1 - r1).min(i2 - r2);
                            let scale = r1.max(r2).max(1.0);
                            entry(
                                id,
                                format!("inf ‖N_i‖ > r_i on A_i, k={resolution}"),
                                margin,
                                margin > DELTA * scale,
                            )
                        }
                    }
                    _ => vacuous_entry(id, format!("A-sets at r=({r1},{r2}), R=({cr1},{cr2})")),
                }
            }
            ConditionId::C6OrA => {
                // A = U = {‖u‖ < r₁, ‖v‖ < r₂} within C
                let samples = sample_pairs(
                    op,
                    CompSet::SemiLe { r: r1, cap: cr1, strict: true },
                    CompSet::SemiLe { r: r2, cap: cr2, strict: true },
                    resolution,
                );
                if samples.is_empty() {
                    vacuous_entry(id, format!("U at r=({r1},{r2})"))
                } else {
                    let mut inf1 = f64::INFINITY;
                    let mut inf2 = f64::INFINITY;
                    for (u, v) in &samples {
                        let (nu, nv) = op.apply(u, v);
                        inf1 = inf1.min(op.semi1(&nu));
                        inf2 = inf2.min(op.semi2(&nv));
                    }
                    let margin = (inf1 - r1).max(inf2 - r2);
                    let scale = r1.max(r2).max(1.0);
                    entry(
                        id,
                        format!("inf_U ‖N_1‖ ≥ r_1 or inf_U ‖N_2‖ ≥ r_2, k={resolution}"),
                        margin,
                        margin >= -DELTA * scale,
                    )
                }
            }
            ConditionId::C6Strong | ConditionId::C6Stronger => {
                let w1: Box<dyn Fn(&[f64], &[f64]) -> f64> = if id == ConditionId::C6Strong {
                    Box::new(move |nu: &[f64], _: &[f64]| (sup_of(nu) / cr1).max(1.0))
                } else {
                    Box::new(move |nu: &[f64], nv: &[f64]| {
                        (sup_of(nu) / cr1).max(sup_of(nv) / cr2).max(1.0)
                    })
                };
                let w2: Box<dyn Fn(&[f64], &[f64]) -> f64> = if id == ConditionId::C6Strong {
                    Box::new(move |_: &[f64], nv: &[f64]| (sup_of(nv) / cr2).max(1.0))
                } else {
                    Box::new(move |nu: &[f64], nv: &[f64]| {
                        (sup_of(nu) / cr1).max(sup_of(nv) / cr2).max(1.0)
                    })
                };
                let a1 = inf_semi(
                    CompSet::SemiEq { r: r1, cap: cr1 },
                    CompSet::SemiLe { r: r2, cap: cr2, strict: false },
                    1,
                    &*w1,
                );
                let a2 = inf_semi(
                    CompSet::SemiLe { r: r1, cap: cr1, strict: false },
                    CompSet::SemiEq { r: r2, cap: cr2 },
                    2,
                    &*w2,
                );
                match (a1, a2) {
                    (Some(i1), Some(i2)) => {
                        let margin = (i1 - r1 / chi_semi.0).min(i2 - r2 / chi_semi.1);
                        let scale = r1.max(r2).max(1.0);
                        entry(
                            id,
                            format!(
                                "retraction-weighted inf ‖N_i‖ ≥ r_i/‖χ_i‖ on A_i, k={resolution}"
                            ),
                            margin,
                            margin >= -DELTA * scale,
                        )
                    }
                    _ => vacuous_entry(id, format!("A-sets at r=({r1},{r2})")),
                }
            }
            ConditionId::C6Prime | ConditionId::C6PrimeStrict => {
                // B₁ = {‖u‖=r₁, ‖v‖≥r₂}, B₂ symmetric, within C
                let b1 = inf_semi(
                    CompSet::SemiEq { r: r1, cap: cr1 },
                    CompSet::SemiGe { r: r2, cap: cr2 },
                    1,
                    &unweighted,
                );
                let b2 = inf_semi(
                    CompSet::SemiGe { r: r1, cap: cr1 },
                    CompSet::SemiEq { r: r2, cap: cr2 },
                    2,
                    &unweighted,
                );
                match (b1, b2) {
                    (Some(i1), Some(i2)) => {
                        let margin = (i1 - r1 / chi_semi.0).min(i2 - r2 / chi_semi.1);
                        let scale = r1.max(r2).max(1.0);
                        let strict = id == ConditionId::C6PrimeStrict;
                        let verdict =
                            if strict { margin > DELTA * scale } else { margin >= -DELTA * scale };
                        entry(
                            id,
                            format!(
                                "inf ‖N_i‖ {} r_i/‖χ_i‖ on B_i, k={resolution}",
                                if strict { ">" } else { "≥" }
                            ),
                            margin,
                            verdict,
                        )
                    }
                    _ => vacuous_entry(id, format!("B-sets at r=({r1},{r2})")),
                }
            }
            ConditionId::C6StrongPrime | ConditionId::C6StrongerPrime => {
                let w1: Box<dyn Fn(&[f64], &[f64]) -> f64> = if id == ConditionId::C6StrongPrime {
                    Box::new(move |nu: &[f64], _: &[f64]| (sup_of(nu) / cr1).max(1.0))
                } else {
                    Box::new(move |nu: &[f64], nv: &[f64]| {
                        (sup_of(nu) / cr1).max(sup_of(nv) / cr2).max(1.0)
                    })
                };
                let w2: Box<dyn Fn(&[f64], &[f64]) -> f64> = if id == ConditionId::C6StrongPrime {
                    Box::new(move |_: &[f64], nv: &[f64]| (sup_of(nv) / cr2).max(1.0))
                } else {
                    Box::new(move |nu: &[f64], nv: &[f64]| {
                        (sup_of(nu) / cr1).max(sup_of(nv) / cr2).max(1.0)
                    })
                };
                let b1 = inf_semi(
                    CompSet::SemiEq { r: r1, cap: cr1 },
                    CompSet::SemiGe { r: r2, cap: cr2 },
                    1,
                    &*w1,
                );
                let b2 = inf_semi(
                    CompSet::SemiGe { r: r1, cap: cr1 },
                    CompSet::SemiEq { r: r2, cap: cr2 },
                    2,
                    &*w2,
                );
                match (b1, b2) {
                    (Some(i1), Some(i2)) => {
                        let margin = (i1 - r1 / chi_semi.0).min(i2 - r2 / chi_semi.1);
                        let scale = r1.max(r2).max(1.0);
                        entry(
                            id,
                            format!(
                                "retraction-weighted inf ‖N_i‖ ≥ r_i/‖χ_i‖ on B_i, k={resolution}"
                            ),
                            margin,
                            margin >= -DELTA * scale,
                        )
                    }
                    _ => vacuous_entry(id, format!("B-sets at r=({r1},{r2})")),
                }
            }
            ConditionId::C6DoublePrime => {
                // {(u,v) ∈ C: ‖u‖ = r₁} and {(u,v) ∈ C: ‖v‖ = r₂}, strict
                let s1 = inf_semi(
                    CompSet::SemiEq { r: r1, cap: cr1 },
                    CompSet::Box { cap: cr2 },
                    1,
                    &unweighted,
                );
                let s2 = inf_semi(
                    CompSet::Box { cap: cr1 },
                    CompSet::SemiEq { r: r2, cap: cr2 },
                    2,
                    &unweighted,
                );
                match (s1, s2) {
                    (Some(i1), Some(i2)) => {
                        let margin = (i1 - r1 / chi_semi.0).min(i2 - r2 / chi_semi.1);
                        let scale = r1.max(r2).max(1.0);
                        entry(
                            id,
                            format!(
                                "inf ‖N_i‖ > r_i/‖χ_i‖ on the full seminorm spheres, k={resolution}"
                            ),
                            margin,
                            margin > DELTA * scale,
                        )
                    }
                    _ => vacuous_entry(id, format!("seminorm spheres at r=({r1},{r2})")),
                }
            }
            ConditionId::Deg1Rho => {
                // N(u,v) ≠ λ(u,v) for λ ≥ 1 on the ρ-box boundary
                let (rho1, rho2) = radii.rho.unwrap_or(radii.big_r);
                let mut samples = sample_pairs(
                    op,
                    CompSet::SupEq { s: rho1 },
                    CompSet::Box { cap: rho2 },
                    resolution,
                );
                samples.extend(sample_pairs(
                    op,
                    CompSet::Box { cap: rho1 },
                    CompSet::SupEq { s: rho2 },
                    resolution,
                ));
                if samples.is_empty() {
                    vacuous_entry(id, format!("boundary pieces at rho=({rho1},{rho2})"))
                } else {
                    let margin =
                        lambda_free_margin(op, &samples, LambdaMode::Joint { include_one: true });
                    entry(
                        id,
                        format!(
                            "N(u,v) ≠ λ(u,v), λ ≥ 1, on |u|={rho1}/|v|={rho2} pieces, k={resolution}{}",
                            if op.homogeneous { ", exact ray test" } else { "" }
                        ),
                        margin,
                        margin > DELTA,
                    )
                }
            }
            ConditionId::C6Varrho => {
                let (rho1, rho2) = match radii.rho {
                    Some(x) => x,
                    None => {
                        out.push(vacuous_entry(id, "no rho radii".into()));
                        continue;
                    }
                };
                let (vr1, vr2) = match radii.varrho {
                    Some(x) => x,
                    None => {
                        out.push(vacuous_entry(id, "no varrho radii".into()));
                        continue;
                    }
                };
                let s1 = inf_semi(
                    CompSet::SemiEq { r: vr1, cap: rho1 },
                    CompSet::SemiGe { r: vr2, cap: rho2 },
                    1,
                    &unweighted,
                );
                let s2 = inf_semi(
                    CompSet::SemiGe { r: vr1, cap: rho1 },
                    CompSet::SemiEq { r: vr2, cap: rho2 },
                    2,
                    &unweighted,
                );
                match (s1, s2) {
                    (Some(i1), Some(i2)) => {
                        let margin = (i1 - vr1 / chi_semi.0).min(i2 - vr2 / chi_semi.1);
                        let scale = vr1.max(vr2).max(1.0);
                        entry(
                            id,
                            format!(
                                "inf ‖N_i‖ ≥ ϱ_i/‖χ_i‖ on the ϱ-level sets inside the ρ-box, k={resolution}"
                            ),
                            margin,
                            margin >= -DELTA * scale,
                        )
                    }
                    _ => vacuous_entry(id, format!("ϱ-sets at varrho=({vr1},{vr2})")),
                }
            }
            ConditionId::C6OrVarrho => {
                let (vr1, vr2) = match radii.varrho {
                    Some(x) => x,
                    None => {
                        out.push(vacuous_entry(id, "no varrho radii".into()));
                        continue;
                    }
                };
                let (tr1, tr2) = radii.tilde_rho.or(radii.rho).unwrap_or(radii.big_r);
                let samples = sample_pairs(
                    op,
                    CompSet::SemiLe { r: vr1, cap: tr1, strict: false },
                    CompSet::SemiLe { r: vr2, cap: tr2, strict: false },
                    resolution,
                );
                if samples.is_empty() {
                    vacuous_entry(id, format!("tilde-rho box at ({tr1},{tr2})"))
                } else {
                    let mut inf1 = f64::INFINITY;
                    let mut inf2 = f64::INFINITY;
                    for (u, v) in &samples {
                        let (nu, nv) = op.apply(u, v);
                        inf1 = inf1.min(op.semi1(&nu));
                        inf2 = inf2.min(op.semi2(&nv));
                    }
                    let margin = (inf1 - vr1).max(inf2 - vr2);
                    let scale = vr1.max(vr2).max(1.0);
                    entry(
                        id,
                        format!(
                            "inf ‖N_1‖ ≥ ϱ_1 or inf ‖N_2‖ ≥ ϱ_2 under the tilde-rho caps, k={resolution}"
                        ),
                        margin,
                        margin >= -DELTA * scale,
                    )
                }
            }
            ConditionId::Br => {
                // h⁰ = the all-ones vector: |h⁰| = 1, h⁰ ∈ K, and u ≤ h⁰ for
                // every cone element with |u| ≤ 1 — structural under the
                // orthant order with the sup norm
                let ones1 = ConeVector::new(vec![1.0; op.n1], op.mask1.clone());
                let ones2 = ConeVector::new(vec![1.0; op.n2], op.mask2.clone());
                let ok = (ones1.sup() - 1.0).abs() < 1e-15
                    && (ones2.sup() - 1.0).abs() < 1e-15
                    && ones1.cone_membership()
                    && ones2.cone_membership();
                entry(id, "h⁰_i ≡ 1 dominates the unit ball of the cone".into(), 1.0, ok)
            }
            ConditionId::Iso6Prime => {
                let (nu, _) = op.apply(&scaled_chi(&op.mask1, r1), &vec![0.0; op.n2]);
                let (_, nv) = op.apply(&vec![0.0; op.n1], &scaled_chi(&op.mask2, r2));
                let margin = (op.semi1(&nu) - r1 / chi_semi.0).min(op.semi2(&nv) - r2 / chi_semi.1);
                let scale = r1.max(r2).max(1.0);
                entry(
                    id,
                    "‖N_1(r_1χ_1, 0)‖ ≥ r_1/‖χ_1‖ and ‖N_2(0, r_2χ_2)‖ ≥ r_2/‖χ_2‖".into(),
                    margin,
                    margin >= -DELTA * scale,
                )
            }
            ConditionId::Iso6PrimePrime => {
                let (nu, nv) = op.apply(&scaled_chi(&op.mask1, r1), &scaled_chi(&op.mask2, r2));
                let margin = (op.semi1(&nu) - r1 / chi_semi.0).min(op.semi2(&nv) - r2 / chi_semi.1);
                let scale = r1.max(r2).max(1.0);
                entry(
                    id,
                    "‖N_i(r_1χ_1, r_2χ_2)‖ ≥ r_i/‖χ_i‖".into(),
                    margin,
                    margin >= -DELTA * scale,
                )
            }
        };
        out.push(e);
    }
    out
}

/// The componentwise λ-condition of the π-retraction theorems, evaluated on
/// the boundary pieces of `C`. Reported under the (deg1-rho) id with
/// parameters describing the set.
pub fn check_lambda_componentwise(
    op: &LabOperator,
    radii: &LabRadii,
    resolution: usize,
) -> ConditionCatalogEntry {
    let (cr1, cr2) = radii.big_r;
    let mut samples =
        sample_pairs(op, CompSet::SupEq { s: cr1 }, CompSet::Box { cap: cr2 }, resolution);
    samples.extend(sample_pairs(
        op,
        CompSet::Box { cap: cr1 },
        CompSet::SupEq { s: cr2 },
        resolution,
    ));
    if samples.is_empty() {
        return vacuous_entry(ConditionId::Deg1Rho, format!("∂C pieces at R=({cr1},{cr2})"));
    }
    let margin = lambda_free_margin(op, &samples, LambdaMode::Componentwise);
    entry(
        ConditionId::Deg1Rho,
        format!(
            "componentwise N ≠ (λu, v)/(u, λv)/(λ₁u, λ₂v) on ∂C at R=({cr1},{cr2}), k={resolution}"
        ),
        margin,
        margin > DELTA,
    )
}

/// The joint λ-condition on `∂C` used by the ρ-retraction theorems.
pub fn check_lambda_joint(
    op: &LabOperator,
    radii: &LabRadii,
    resolution: usize,
) -> ConditionCatalogEntry {
    let (cr1, cr2) = radii.big_r;
    let mut samples =
        sample_pairs(op, CompSet::SupEq { s: cr1 }, CompSet::Box { cap: cr2 }, resolution);
    samples.extend(sample_pairs(
        op,
        CompSet::Box { cap: cr1 },
        CompSet::SupEq { s: cr2 },
        resolution,
    ));
    if samples.is_empty() {
        return vacuous_entry(ConditionId::Deg1Rho, format!("∂C pieces at R=({cr1},{cr2})"));
    }
    let margin = lambda_free_margin(op, &samples, LambdaMode::Joint { include_one: false });
    entry(
        ConditionId::Deg1Rho,
        format!("N(u,v) ≠ λ(u,v), λ > 1, on ∂C at R=({cr1},{cr2}), k={resolution}"),
        margin,
        margin > DELTA,
    )
}

fn scaled_chi(mask: &[bool], scale: f64) -> Vec<f64> {
    mask.iter().map(|&b| if b { scale } else { 0.0 }).collect()
}

// ---------------------------------------------------------------------------
// Brute-force fixed-point search
// ---------------------------------------------------------------------------

/// A refined fixed point of the product map.
#[derive(Debug, Clone)]
pub struct LabFixedPoint {
    pub u: ConeVector,
    pub v: ConeVector,
    pub residual: f64,
}

impl LabFixedPoint {
    pub fn sup_u(&self) -> f64 {
        self.u.sup()
    }

    pub fn sup_v(&self) -> f64 {
        self.v.sup()
    }

    pub fn semi_u(&self) -> f64 {
        self.u.seminorm()
    }

    pub fn semi_v(&self) -> f64 {
        self.v.seminorm()
    }

    pub fn distance(&self, other: &LabFixedPoint) -> f64 {
        sup_distance(self.u.values(), other.u.values())
            .max(sup_distance(self.v.values(), other.v.values()))
    }
}

/// Scan `[0, b₁]^{n₁} × [0, b₂]^{n₂}` for sign-pattern / near-fixed cells of
/// `Φ(z) = N(z) - z`, refine candidates by damped Newton (finite-difference
/// Jacobian) with a damped-Picard fallback, and deduplicate.
pub fn brute_force_fixed_points(
    op: &LabOperator,
    bounds: (f64, f64),
    grid_resolution: usize,
    refine_tol: f64,
) -> Vec<LabFixedPoint> {
    let n = op.n1 + op.n2;
    assert!(n <= 6, "brute force is capped at 6 total dimensions");
    let res = grid_resolution.max(2);
    let caps: Vec<f64> =
        (0..n).map(|i| if i < op.n1 { bounds.0 } else { bounds.1 }).collect();

    let phi_at = |z: &[f64]| -> Vec<f64> {
        let (nu, nv) = op.apply(&z[..op.n1], &z[op.n1..]);
        let mut out = Vec::with_capacity(n);
        for i in 0..op.n1 {
            out.push(nu[i] - z[i]);
        }
        for i in 0..op.n2 {
            out.push(nv[i] - z[op.n1 + i]);
        }
        out
    };

    // vertex values of Φ, memoized on the (res+1)^n lattice
    let verts_per_axis = res + 1;
    let total_vertices = verts_per_axis.pow(n as u32);
    let vertex_coord = |digit: usize, axis: usize| caps[axis] * digit as f64 / res as f64;
    let mut vertex_phi: Vec<Vec<f64>> = Vec::with_capacity(total_vertices);
    let mut digits = vec![0usize; n];
    for _ in 0..total_vertices {
        let z: Vec<f64> = digits.iter().enumerate().map(|(a, &d)| vertex_coord(d, a)).collect();
        vertex_phi.push(phi_at(&z));
        for d in digits.iter_mut() {
            *d += 1;
            if *d < verts_per_axis {
                break;
            }
            *d = 0;
        }
    }
    let stride = |axis: usize| verts_per_axis.pow(axis as u32);

    // cell scan: sign pattern in every component, or a small corner residual
    let cell_tol = caps.iter().cloned().fold(0.0_f64, f64::max) / res as f64;
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    // near-fixed vertices seed refinement directly: roots sitting exactly on
    // the lattice (e.g. at zero) are otherwise shadowed by a second root in
    // the same cell
    let mut vdigits = vec![0usize; n];
    for vphi in vertex_phi.iter() {
        if sup_of(vphi) <= cell_tol {
            let z: Vec<f64> =
                vdigits.iter().enumerate().map(|(a, &d)| vertex_coord(d, a)).collect();
            candidates.push(z);
        }
        for d in vdigits.iter_mut() {
            *d += 1;
            if *d < verts_per_axis {
                break;
            }
            *d = 0;
        }
    }
    let total_cells = res.pow(n as u32);
    let mut cell_digits = vec![0usize; n];
    for _ in 0..total_cells {
        let base_index: usize = cell_digits.iter().enumerate().map(|(a, &d)| d * stride(a)).sum();
        let mut sign_ok = true;
        for comp in 0..n {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for corner in 0..(1usize << n) {
                let mut idx = base_index;
                for axis in 0..n {
                    if corner & (1 << axis) != 0 {
                        idx += stride(axis);
                    }
                }
                let val = vertex_phi[idx][comp];
                lo = lo.min(val);
                hi = hi.max(val);
            }
            if lo > 0.0 || hi < 0.0 {
                sign_ok = false;
                break;
            }
        }
        let mut best_corner = f64::INFINITY;
        for corner in 0..(1usize << n) {
            let mut idx = base_index;
            for axis in 0..n {
                if corner & (1 << axis) != 0 {
                    idx += stride(axis);
                }
            }
            best_corner = best_corner.min(sup_of(&vertex_phi[idx]));
        }
        if sign_ok || best_corner <= cell_tol {
            let center: Vec<f64> = cell_digits
                .iter()
                .enumerate()
                .map(|(a, &d)| caps[a] * (d as f64 + 0.5) / res as f64)
                .collect();
            candidates.push(center);
        }
        for d in cell_digits.iter_mut() {
            *d += 1;
            if *d < res {
                break;
            }
            *d = 0;
        }
    }

    let mut found: Vec<LabFixedPoint> = Vec::new();
    let dedup = DEDUP_TOL.max(100.0 * refine_tol);
    for start in candidates {
        if let Some((z, residual)) = refine(&phi_at, start, &caps, refine_tol) {
            let fp = LabFixedPoint {
                u: ConeVector::new(z[..op.n1].to_vec(), op.mask1.clone()),
                v: ConeVector::new(z[op.n1..].to_vec(), op.mask2.clone()),
                residual,
            };
            if found.iter().all(|g| g.distance(&fp) >= dedup) {
                found.push(fp);
            }
        }
    }
    found
}

/// Newton with finite-difference Jacobian and residual damping; falls back
/// to damped Picard when the linearization is singular (e.g. continua of
/// fixed points).
fn refine(
    phi_at: &dyn Fn(&[f64]) -> Vec<f64>,
    start: Vec<f64>,
    caps: &[f64],
    refine_tol: f64,
) -> Option<(Vec<f64>, f64)> {
    let n = start.len();
    let clamp = |z: &mut Vec<f64>| {
        for (i, t) in z.iter_mut().enumerate() {
            *t = t.max(0.0).min(caps[i] * 1.02 + 1e-12);
        }
    };
    let mut z = start;
    clamp(&mut z);
    let mut phi = phi_at(&z);
    let mut res = sup_of(&phi);

    for _ in 0..60 {
        if res <= refine_tol {
            return finish_refined(z, res, caps);
        }
        // finite-difference Jacobian of Φ
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let h = 1e-7 * (1.0 + z[j].abs());
            let mut zp = z.clone();
            zp[j] += h;
            let mut zm = z.clone();
            zm[j] = (zm[j] - h).max(0.0);
            let dp = phi_at(&zp);
            let dm = phi_at(&zm);
            let denom = zp[j] - zm[j];
            for i in 0..n {
                jac[i][j] = (dp[i] - dm[i]) / denom;
            }
        }
        match solve_dense(&mut jac, &phi) {
            Some(step) => {
                let mut t = 1.0;
                let mut advanced = false;
                for _ in 0..8 {
                    let mut trial: Vec<f64> =
                        z.iter().zip(&step).map(|(a, s)| a - t * s).collect();
                    clamp(&mut trial);
                    let tphi = phi_at(&trial);
                    let tres = sup_of(&tphi);
                    if tres < res {
                        z = trial;
                        phi = tphi;
                        res = tres;
                        advanced = true;
                        break;
                    }
                    t *= 0.5;
                }
                if !advanced {
                    break;
                }
            }
            None => break, // singular linearization: go to the Picard fallback
        }
    }
    if res <= refine_tol {
        return finish_refined(z, res, caps);
    }

    // damped Picard fallback
    for _ in 0..400 {
        let mut trial: Vec<f64> = z.iter().zip(&phi).map(|(a, p)| a + 0.5 * p).collect();
        for (i, t) in trial.iter_mut().enumerate() {
            *t = t.max(0.0).min(caps[i] * 1.02 + 1e-12);
        }
        let tphi = phi_at(&trial);
        let tres = sup_of(&tphi);
        if tres >= res * (1.0 - 1e-12) && tres > refine_tol {
            return None; // stagnated above tolerance
        }
        z = trial;
        phi = tphi;
        res = tres;
        if res <= refine_tol {
            return finish_refined(z, res, caps);
        }
    }
    None
}

fn finish_refined(z: Vec<f64>, res: f64, caps: &[f64]) -> Option<(Vec<f64>, f64)> {
    // reject refinements that escaped the scan box
    for (i, &t) in z.iter().enumerate() {
        if t < -1e-12 || t > caps[i] * (1.0 + 1e-6) + 1e-9 {
            return None;
        }
    }
    Some((z, res))
}

/// Gaussian elimination with partial pivoting; `None` on singularity.
fn solve_dense(a: &mut [Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut x = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for k in col + 1..n {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Theorem validation
// ---------------------------------------------------------------------------

/// The theorems the lab can confront with brute-force search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    Abstr1,
    Abstr1OrA,
    Retr1,
    Retr2,
    Abstr1Prime,
    Retr1Prime,
    Retr2Prime,
    Abstr3Sols,
    Abstr3SolsPrime,
    Abstr3SolsRefined,
    BrTheorem,
}

impl TheoremId {
    pub fn parse(s: &str) -> Option<TheoremId> {
        use TheoremId::*;
        Some(match s {
            "abstr1" => Abstr1,
            "abstr1-or" => Abstr1OrA,
            "retr1" => Retr1,
            "retr2" => Retr2,
            "abstr1'" | "abstr1-prime" => Abstr1Prime,
            "retr1'" | "retr1-prime" => Retr1Prime,
            "retr2'" | "retr2-prime" => Retr2Prime,
            "abstr3sols" | "three" => Abstr3Sols,
            "abstr3sols'" | "three-prime" => Abstr3SolsPrime,
            "abstr3sols''" | "three-refined" => Abstr3SolsRefined,
            "br" => BrTheorem,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::Abstr1 => "abstr1",
            TheoremId::Abstr1OrA => "abstr1-or",
            TheoremId::Retr1 => "retr1",
            TheoremId::Retr2 => "retr2",
            TheoremId::Abstr1Prime => "abstr1'",
            TheoremId::Retr1Prime => "retr1'",
            TheoremId::Retr2Prime => "retr2'",
            TheoremId::Abstr3Sols => "abstr3sols",
            TheoremId::Abstr3SolsPrime => "abstr3sols'",
            TheoremId::Abstr3SolsRefined => "abstr3sols''",
            TheoremId::BrTheorem => "br",
        }
    }
}

/// Validation outcome. Search incompleteness is acknowledged: a miss is
/// "not found at this resolution", never a refutation.
#[derive(Debug)]
pub enum LabVerdict {
    Confirmed { fixed_points: Vec<LabFixedPoint>, note: String },
    NotFoundAtResolution { fixed_points: Vec<LabFixedPoint>, note: String },
}

impl LabVerdict {
    pub fn confirmed(&self) -> bool {
        matches!(self, LabVerdict::Confirmed { .. })
    }

    pub fn fixed_points(&self) -> &[LabFixedPoint] {
        match self {
            LabVerdict::Confirmed { fixed_points, .. } => fixed_points,
            LabVerdict::NotFoundAtResolution { fixed_points, .. } => fixed_points,
        }
    }

    pub fn note(&self) -> &str {
        match self {
            LabVerdict::Confirmed { note, .. } => note,
            LabVerdict::NotFoundAtResolution { note, .. } => note,
        }
    }
}

/// Hypothesis set of each theorem, as catalog ids plus the λ-variants.
fn hypothesis_entries(
    thm: TheoremId,
    op: &LabOperator,
    radii: &LabRadii,
    resolution: usize,
) -> Result<Vec<ConditionCatalogEntry>, LabError> {
    use ConditionId::*;
    let mut entries = Vec::new();
    let base = |ids: &[ConditionId]| check_conditions(op, radii, ids, resolution);
    match thm {
        TheoremId::Abstr1 => entries.extend(base(&[C5, C6, C4])),
        TheoremId::Abstr1OrA => entries.extend(base(&[C5, C4, C6OrA])),
        TheoremId::Retr1 => {
            entries.extend(base(&[C5, C6Strong]));
            entries.push(check_lambda_componentwise(op, radii, resolution));
        }
        TheoremId::Retr2 => {
            entries.extend(base(&[C5, C6Stronger]));
            entries.push(check_lambda_joint(op, radii, resolution));
        }
        TheoremId::Abstr1Prime => entries.extend(base(&[C5, C6Prime, C4])),
        TheoremId::Retr1Prime => {
            entries.extend(base(&[C5, C6StrongPrime]));
            entries.push(check_lambda_componentwise(op, radii, resolution));
        }
        TheoremId::Retr2Prime => {
            entries.extend(base(&[C5, C6StrongerPrime]));
            entries.push(check_lambda_joint(op, radii, resolution));
        }
        TheoremId::Abstr3Sols => {
            let rho = radii.rho.ok_or(LabError::MissingRadii("rho"))?;
            require_chain(radii, rho)?;
            entries.extend(base(&[C5, C6PrimeStrict, C4, Deg1Rho]));
        }
        TheoremId::Abstr3SolsPrime => {
            let rho = radii.rho.ok_or(LabError::MissingRadii("rho"))?;
            require_chain(radii, rho)?;
            entries.extend(base(&[C5, C6DoublePrime, C4, Deg1Rho]));
        }
        TheoremId::Abstr3SolsRefined => {
            let rho = radii.rho.ok_or(LabError::MissingRadii("rho"))?;
            require_chain(radii, rho)?;
            let varrho = radii.varrho.ok_or(LabError::MissingRadii("varrho"))?;
            entries.extend(base(&[C5, C6DoublePrime, C4, Deg1Rho]));
            if radii.tilde_rho.is_some() {
                entries.extend(base(&[C6OrVarrho]));
            } else {
                entries.extend(base(&[C6Varrho]));
                // part (i) also needs |N_i| ≤ ρ_i on the ρ-box
                let rho_radii = LabRadii::basic(varrho, rho);
                let mut c4rho = check_conditions(op, &rho_radii, &[C4], resolution);
                for e in &mut c4rho {
                    e.params = format!("at the rho-box: {}", e.params);
                }
                entries.extend(c4rho);
            }
        }
        TheoremId::BrTheorem => entries.extend(base(&[Br, C5Prime, Br1, C4])),
    }
    Ok(entries)
}

fn require_chain(radii: &LabRadii, rho: (f64, f64)) -> Result<(), LabError> {
    let ok = rho.0 > 0.0
        && rho.1 > 0.0
        && rho.0 < radii.r.0
        && rho.1 < radii.r.1
        && radii.r.0 < radii.big_r.0
        && radii.r.1 < radii.big_r.1;
    if ok {
        Ok(())
    } else {
        Err(LabError::MissingRadii("need 0 < rho < r < R"))
    }
}

/// Check the theorem's hypotheses; refuse to run on failure (prevents
/// vacuous validation); then search for fixed points and test the
/// conclusion (count and region membership).
pub fn validate_theorem(
    thm: TheoremId,
    op: &LabOperator,
    radii: &LabRadii,
    resolution: usize,
) -> Result<(Vec<ConditionCatalogEntry>, LabVerdict), LabError> {
    if op.n1 + op.n2 > 6 {
        return Err(LabError::TooManyDims(op.n1 + op.n2));
    }
    let entries = hypothesis_entries(thm, op, radii, resolution)?;
    let failed: Vec<String> = entries
        .iter()
        .filter(|e| !e.verdict)
        .map(|e| format!("{} [{}] margin {:.3e}", e.id, e.params, e.margin))
        .collect();
    if !failed.is_empty() {
        return Err(LabError::HypothesisFailed(failed));
    }

    let fps = brute_force_fixed_points(op, radii.big_r, resolution.max(16), REFINE_TOL);
    let (r1, r2) = radii.r;
    let (cr1, cr2) = radii.big_r;
    let sl = REGION_SLACK;
    let in_c = |fp: &LabFixedPoint| fp.sup_u() <= cr1 + sl && fp.sup_v() <= cr2 + sl;

    let verdict = match thm {
        TheoremId::Abstr1
        | TheoremId::Abstr1OrA
        | TheoremId::Retr1
        | TheoremId::Retr2
        | TheoremId::BrTheorem => {
            let hit =
                fps.iter().find(|fp| in_c(fp) && (fp.semi_u() >= r1 - sl || fp.semi_v() >= r2 - sl));
            match hit {
                Some(fp) => LabVerdict::Confirmed {
                    note: format!(
                        "fixed point with ‖u‖={:.6}, ‖v‖={:.6} (needs ‖u‖ ≥ {r1} or ‖v‖ ≥ {r2})",
                        fp.semi_u(),
                        fp.semi_v()
                    ),
                    fixed_points: fps,
                },
                None => LabVerdict::NotFoundAtResolution {
                    note: "no fixed point with the promised seminorm lower bound found".into(),
                    fixed_points: fps,
                },
            }
        }
        TheoremId::Abstr1Prime | TheoremId::Retr1Prime | TheoremId::Retr2Prime => {
            let hit =
                fps.iter().find(|fp| in_c(fp) && fp.semi_u() >= r1 - sl && fp.semi_v() >= r2 - sl);
            match hit {
                Some(fp) => LabVerdict::Confirmed {
                    note: format!(
                        "fixed point with ‖u‖={:.6} ≥ {r1} and ‖v‖={:.6} ≥ {r2}",
                        fp.semi_u(),
                        fp.semi_v()
                    ),
                    fixed_points: fps,
                },
                None => LabVerdict::NotFoundAtResolution {
                    note: "no fixed point with both seminorm lower bounds found".into(),
                    fixed_points: fps,
                },
            }
        }
        TheoremId::Abstr3Sols | TheoremId::Abstr3SolsPrime | TheoremId::Abstr3SolsRefined => {
            let (rho1, rho2) = radii.rho.unwrap();
            let is_inner = |fp: &LabFixedPoint| {
                let mut ok = fp.sup_u() < rho1 + sl && fp.sup_v() < rho2 + sl;
                if thm == TheoremId::Abstr3SolsRefined {
                    let (vr1, vr2) = radii.varrho.unwrap();
                    ok &= match radii.tilde_rho {
                        // part (ii): four-way disjunction
                        Some((tr1, tr2)) => {
                            fp.semi_u() >= vr1 - sl
                                || fp.semi_v() >= vr2 - sl
                                || fp.sup_u() > tr1 - sl
                                || fp.sup_v() > tr2 - sl
                        }
                        // part (i): both lower bounds
                        None => fp.semi_u() >= vr1 - sl && fp.semi_v() >= vr2 - sl,
                    };
                }
                ok
            };
            let is_outer = |fp: &LabFixedPoint| fp.semi_u() > r1 - sl && fp.semi_v() > r2 - sl;
            let is_middle = |fp: &LabFixedPoint| {
                let escaped = fp.sup_u() > rho1 - sl || fp.sup_v() > rho2 - sl;
                if thm == TheoremId::Abstr3Sols {
                    (fp.semi_u() < r1 + sl || fp.semi_v() < r2 + sl) && escaped
                } else {
                    fp.semi_u() < r1 + sl && fp.semi_v() < r2 + sl && escaped
                }
            };
            let inner = fps.iter().find(|fp| in_c(fp) && is_inner(fp));
            let middle = fps.iter().find(|fp| in_c(fp) && is_middle(fp) && !is_outer(fp));
            let outer = fps.iter().find(|fp| in_c(fp) && is_outer(fp));
            match (inner, middle, outer) {
                (Some(_), Some(_), Some(_)) => LabVerdict::Confirmed {
                    note: format!(
                        "three fixed points localized by rho=({rho1},{rho2}), r=({r1},{r2})"
                    ),
                    fixed_points: fps,
                },
                _ => LabVerdict::NotFoundAtResolution {
                    note: format!(
                        "regions populated: inner={}, middle={}, outer={}",
                        inner.is_some(),
                        middle.is_some(),
                        outer.is_some()
                    ),
                    fixed_points: fps,
                },
            }
        }
    };
    Ok((entries, verdict))
}

/// Ladder variant: the one-solution conditions at every rung of an
/// increasing radius ladder yield one solution per rung.
pub fn validate_n_solutions(
    op: &LabOperator,
    rungs: &[LabRadii],
    resolution: usize,
) -> Result<(Vec<ConditionCatalogEntry>, LabVerdict), LabError> {
    use ConditionId::*;
    if rungs.is_empty() {
        return Err(LabError::MissingRadii("at least one rung"));
    }
    for pair in rungs.windows(2) {
        if !(pair[0].big_r.0 < pair[1].r.0 && pair[0].big_r.1 < pair[1].r.1) {
            return Err(LabError::MissingRadii("ladder must satisfy R^j < r^(j+1)"));
        }
    }
    let mut entries = Vec::new();
    for (j, rung) in rungs.iter().enumerate() {
        let mut es = check_conditions(op, rung, &[C5, C6Prime, C4], resolution);
        for e in &mut es {
            e.params = format!("rung {}: {}", j + 1, e.params);
        }
        entries.extend(es);
    }
    let failed: Vec<String> = entries
        .iter()
        .filter(|e| !e.verdict)
        .map(|e| format!("{} [{}] margin {:.3e}", e.id, e.params, e.margin))
        .collect();
    if !failed.is_empty() {
        return Err(LabError::HypothesisFailed(failed));
    }
    let top = rungs.last().unwrap().big_r;
    let fps = brute_force_fixed_points(op, top, resolution.max(16), REFINE_TOL);
    let sl = REGION_SLACK;
    let mut all_found = true;
    let mut notes = Vec::new();
    for (j, rung) in rungs.iter().enumerate() {
        let hit = fps.iter().any(|fp| {
            fp.sup_u() <= rung.big_r.0 + sl
                && fp.sup_v() <= rung.big_r.1 + sl
                && fp.semi_u() >= rung.r.0 - sl
                && fp.semi_v() >= rung.r.1 - sl
        });
        notes.push(format!("rung {}: {}", j + 1, if hit { "populated" } else { "missing" }));
        all_found &= hit;
    }
    let note = notes.join("; ");
    let verdict = if all_found {
        LabVerdict::Confirmed { fixed_points: fps, note }
    } else {
        LabVerdict::NotFoundAtResolution { fixed_points: fps, note }
    };
    Ok((entries, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone_consts::{retraction_pi, retraction_rho};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn sqrt_op() -> LabOperator {
        LabOperator::from_fn("sqrt-shift", 1, 1, |u, v| {
            (vec![u[0].max(0.0).sqrt() + 1.0], vec![v[0].max(0.0).sqrt() + 1.0])
        })
        .with_isotone(true)
    }

    /// Piecewise-linear ramp through (0,0), (0.1,0.05), (1,1.5), (4,4.5),
    /// (9,6): fixed points at 0, 2/11, 33/7.
    fn ramp(t: f64) -> f64 {
        let pts = [(0.0, 0.0), (0.1, 0.05), (1.0, 1.5), (4.0, 4.5), (9.0, 6.0)];
        if t >= 9.0 {
            return 6.0;
        }
        for w in pts.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            if t <= x1 {
                return y0 + (t - x0) * (y1 - y0) / (x1 - x0);
            }
        }
        6.0
    }

    fn ramp_op() -> LabOperator {
        LabOperator::from_fn("three-solution-ramp", 1, 1, |u, v| {
            (vec![ramp(u[0])], vec![ramp(v[0])])
        })
        .with_isotone(true)
    }

    #[test]
    fn cone_vector_norms() {
        let w = ConeVector::new(vec![2.0, 0.5, 3.0], vec![true, true, false]);
        assert_eq!(w.sup(), 3.0);
        assert_eq!(w.seminorm(), 0.5);
        assert!(w.cone_membership());
        let chi = ConeVector::chi(vec![true, false]);
        assert_eq!(chi.sup(), 1.0);
        assert_eq!(chi.seminorm(), 1.0);
    }

    #[test]
    fn constant_operator_conditions_and_theorem() {
        // N ≡ (R₁φ₁, R₂φ₂): (4) holds; (6) holds since R₁‖φ₁‖ ≥ r₁
        let radii = LabRadii::basic((1.0, 1.0), (3.0, 3.0));
        let op = LabOperator::constant("constant", vec![3.0], vec![3.0]);
        let entries = check_conditions(&op, &radii, &[ConditionId::C4, ConditionId::C6], 8);
        assert!(entries.iter().all(|e| e.verdict), "{entries:#?}");
        let (_, verdict) = validate_theorem(TheoremId::Abstr1, &op, &radii, 12).unwrap();
        assert!(verdict.confirmed());
        assert!(verdict
            .fixed_points()
            .iter()
            .any(|fp| (fp.sup_u() - 3.0).abs() < 1e-9 && (fp.sup_v() - 3.0).abs() < 1e-9));
    }

    #[test]
    fn zero_operator_fails_lower_condition() {
        let radii = LabRadii::basic((1.0, 1.0), (3.0, 3.0));
        let op = LabOperator::constant("zero", vec![0.0], vec![0.0]);
        let entries = check_conditions(&op, &radii, &[ConditionId::C6], 8);
        assert!(!entries[0].verdict);
        assert!(matches!(
            validate_theorem(TheoremId::Abstr1, &op, &radii, 8),
            Err(LabError::HypothesisFailed(_))
        ));
    }

    #[test]
    fn sqrt_operator_golden_ratio() {
        // (6') and (4) at r = (1,1), R = (9,9): √1+1 = 2 ≥ 1, √9+1 = 4 ≤ 9
        let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0));
        let op = sqrt_op();
        let entries = check_conditions(
            &op,
            &radii,
            &[ConditionId::C5, ConditionId::C6Prime, ConditionId::C4],
            10,
        );
        assert!(entries.iter().all(|e| e.verdict), "{entries:#?}");

        let (_, verdict) = validate_theorem(TheoremId::Abstr1Prime, &op, &radii, 24).unwrap();
        assert!(verdict.confirmed());
        let golden_sq = (0.5 * (1.0 + 5.0_f64.sqrt())).powi(2);
        let hit = verdict
            .fixed_points()
            .iter()
            .find(|fp| (fp.sup_u() - golden_sq).abs() < 1e-10)
            .expect("golden-ratio fixed point");
        assert!((hit.sup_v() - golden_sq).abs() < 1e-10);
        assert!(hit.residual < 1e-11);
    }

    #[test]
    fn brute_force_diagonal_continuum() {
        // N(u,v) = (v,u): the fixed set is the diagonal; the scan keeps
        // one refined point per cell along it
        let op = LabOperator::from_fn("swap", 1, 1, |u, v| (vec![v[0]], vec![u[0]]));
        let fps = brute_force_fixed_points(&op, (1.0, 1.0), 16, 1e-12);
        assert!(fps.len() >= 8, "expected many diagonal points, got {}", fps.len());
        for fp in &fps {
            assert!((fp.sup_u() - fp.sup_v()).abs() < 1e-9);
        }
    }

    #[test]
    fn brute_force_constant_single_point() {
        let op = LabOperator::constant("constant", vec![0.4], vec![0.7]);
        let fps = brute_force_fixed_points(&op, (1.0, 1.0), 12, 1e-12);
        assert_eq!(fps.len(), 1);
        assert!((fps[0].sup_u() - 0.4).abs() < 1e-10);
        assert!((fps[0].sup_v() - 0.7).abs() < 1e-10);
    }

    #[test]
    fn ramp_fixed_points_match_piecewise_algebra() {
        // closed-form crossings of the ramp: 2/11 on the [0.1,1] piece,
        // 33/7 on the [4,9] piece
        let c1 = 2.0 / 11.0;
        let c2 = 33.0 / 7.0;
        assert!((ramp(c1) - c1).abs() < 1e-15);
        assert!((ramp(c2) - c2).abs() < 1e-15);
        let op = ramp_op();
        let fps = brute_force_fixed_points(&op, (9.0, 9.0), 40, 1e-12);
        // product structure: {0, c1, c2}² = 9 fixed points
        assert_eq!(fps.len(), 9, "{fps:#?}");
        for target in [0.0, c1, c2] {
            assert!(
                fps.iter().any(|fp| (fp.sup_u() - target).abs() < 1e-9),
                "missing u-level {target}"
            );
        }
    }

    #[test]
    fn three_solution_theorem_on_ramp() {
        let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0)).with_rho((0.1, 0.1));
        let op = ramp_op();
        let (entries, verdict) =
            validate_theorem(TheoremId::Abstr3SolsPrime, &op, &radii, 20).unwrap();
        assert!(entries.iter().all(|e| e.verdict));
        assert!(verdict.confirmed(), "{}", verdict.note());
    }

    #[test]
    fn or_variant_with_one_sided_operator() {
        // N = (1.5, 0): only the first-component lower bound holds on U
        let radii = LabRadii::basic((1.0, 1.0), (3.0, 3.0));
        let op = LabOperator::constant("one-sided", vec![1.5], vec![0.0]);
        let entries = check_conditions(&op, &radii, &[ConditionId::C6OrA], 8);
        assert!(entries[0].verdict, "margin {}", entries[0].margin);
        let (_, verdict) = validate_theorem(TheoremId::Abstr1OrA, &op, &radii, 16).unwrap();
        assert!(verdict.confirmed());
    }

    #[test]
    fn homogeneous_ray_test() {
        // N = (u/2, v/2): homogeneous with spectral radius 1/2 < 1, so the
        // λ ≥ 1 ray condition holds on any boundary
        let op = LabOperator::from_fn("half", 1, 1, |u, v| (vec![0.5 * u[0]], vec![0.5 * v[0]]))
            .with_homogeneous(true);
        let radii = LabRadii::basic((0.5, 0.5), (2.0, 2.0)).with_rho((0.2, 0.2));
        let entries = check_conditions(&op, &radii, &[ConditionId::Deg1Rho], 8);
        assert!(entries[0].verdict);
        assert!(entries[0].params.contains("exact ray test"));
        // margin is 0.5·ρ on the |u| = ρ piece
        assert!((entries[0].margin - 0.1).abs() < 1e-12, "margin {}", entries[0].margin);
    }

    #[test]
    fn iso_shortcut_implies_sampled_condition() {
        // for declared-isotone operators the pointwise shortcut bounds the
        // sampled infimum from below
        for op in [sqrt_op(), ramp_op()] {
            let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0));
            let iso = check_conditions(&op, &radii, &[ConditionId::Iso6Prime], 10);
            let full = check_conditions(&op, &radii, &[ConditionId::C6], 10);
            if iso[0].verdict {
                assert!(full[0].verdict, "iso shortcut passed but (6) failed for {}", op.name);
                assert!(full[0].margin >= iso[0].margin - 1e-12);
            }
        }
    }

    #[test]
    fn strong_condition_equals_plain_under_c4() {
        // when (4) holds the retraction factor is 1 and the margins agree
        let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0));
        let op = sqrt_op();
        let c4 = check_conditions(&op, &radii, &[ConditionId::C4], 10);
        assert!(c4[0].verdict);
        let plain = check_conditions(&op, &radii, &[ConditionId::C6], 10);
        let strong = check_conditions(&op, &radii, &[ConditionId::C6Strong], 10);
        assert_eq!(plain[0].margin, strong[0].margin);
        let plain_p = check_conditions(&op, &radii, &[ConditionId::C6Prime], 10);
        let strong_p = check_conditions(&op, &radii, &[ConditionId::C6StrongPrime], 10);
        assert_eq!(plain_p[0].margin, strong_p[0].margin);
    }

    #[test]
    fn vacuous_sets_flagged() {
        // r > R empties the A-sets: vacuous pass with the warning flag
        let radii = LabRadii::basic((5.0, 5.0), (2.0, 2.0));
        let op = sqrt_op();
        let entries = check_conditions(&op, &radii, &[ConditionId::C6], 8);
        assert!(entries[0].verdict);
        assert!(entries[0].vacuous);
    }

    #[test]
    fn retr_theorems_on_sqrt() {
        let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0));
        let op = sqrt_op();
        for thm in
            [TheoremId::Retr1, TheoremId::Retr2, TheoremId::Retr1Prime, TheoremId::Retr2Prime]
        {
            let (entries, verdict) = validate_theorem(thm, &op, &radii, 16).unwrap();
            assert!(entries.iter().all(|e| e.verdict), "{thm:?}: {entries:#?}");
            assert!(verdict.confirmed(), "{thm:?}");
        }
    }

    #[test]
    fn br_theorem_on_sqrt() {
        let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0));
        let op = sqrt_op();
        let (entries, verdict) = validate_theorem(TheoremId::BrTheorem, &op, &radii, 12).unwrap();
        assert!(entries.iter().all(|e| e.verdict));
        assert!(verdict.confirmed());
    }

    #[test]
    fn ladder_on_clamp_staircase() {
        // s(u) = clamp(2u-3, 1, 5): fixed points at 1, 3, 5; two rungs
        let op = LabOperator::from_fn("staircase", 1, 1, |u, v| {
            let s = |t: f64| (2.0 * t - 3.0).clamp(1.0, 5.0);
            (vec![s(u[0])], vec![s(v[0])])
        })
        .with_isotone(true);
        let rungs =
            [LabRadii::basic((0.5, 0.5), (2.0, 2.0)), LabRadii::basic((3.0, 3.0), (9.0, 9.0))];
        let (entries, verdict) = validate_n_solutions(&op, &rungs, 10).unwrap();
        assert!(entries.iter().all(|e| e.verdict), "{entries:#?}");
        assert!(verdict.confirmed(), "{}", verdict.note());
    }

    #[test]
    fn refined_theorem_with_varrho() {
        // floor the ramp so the inner fixed point is positive: fp at 0.03
        // (ramp(0.03) = 0.015 < 0.03 ⇒ the floor binds there)
        let op = LabOperator::from_fn("ramp-floored", 1, 1, |u, v| {
            (vec![ramp(u[0]).max(0.03)], vec![ramp(v[0]).max(0.03)])
        })
        .with_isotone(true);
        let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0))
            .with_rho((0.1, 0.1))
            .with_varrho((0.02, 0.02));
        let (entries, verdict) =
            validate_theorem(TheoremId::Abstr3SolsRefined, &op, &radii, 20).unwrap();
        assert!(entries.iter().all(|e| e.verdict), "{entries:#?}");
        assert!(verdict.confirmed(), "{}", verdict.note());
        let inner = verdict
            .fixed_points()
            .iter()
            .find(|fp| fp.sup_u() < 0.1 && fp.sup_v() < 0.1)
            .expect("inner fixed point");
        assert!(inner.semi_u() >= 0.02 - 1e-9);
    }

    #[test]
    fn retraction_compatibility_on_cone_vectors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(1..4);
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
            let w = ConeVector::new(vals, vec![true; n]);
            let r_cap = rng.gen_range(0.5..3.0);
            let once = retraction_pi(&w, r_cap);
            let twice = retraction_pi(&once, r_cap);
            assert!(sup_distance(once.values(), twice.values()) < 1e-14);
            assert!((once.sup() - w.sup().min(r_cap)).abs() < 1e-12);

            let zvals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
            let z = ConeVector::new(zvals, vec![true; n]);
            let (a, b) = retraction_rho((&w, &z), r_cap, r_cap);
            let (a2, b2) = retraction_rho((&a, &b), r_cap, r_cap);
            assert!(sup_distance(a.values(), a2.values()) < 1e-14);
            assert!(sup_distance(b.values(), b2.values()) < 1e-14);
        }
    }

    #[test]
    fn multi_coordinate_component_spaces() {
        // n1 = 2, n2 = 1 with full masks: same golden fixed point per coord
        let op = LabOperator::from_fn("sqrt-2d", 2, 1, |u, v| {
            (
                vec![u[0].max(0.0).sqrt() + 1.0, u[1].max(0.0).sqrt() + 1.0],
                vec![v[0].max(0.0).sqrt() + 1.0],
            )
        })
        .with_isotone(true);
        let radii = LabRadii::basic((1.0, 1.0), (9.0, 9.0));
        let (entries, verdict) = validate_theorem(TheoremId::Abstr1Prime, &op, &radii, 12).unwrap();
        assert!(entries.iter().all(|e| e.verdict));
        assert!(verdict.confirmed());
    }

    #[test]
    fn expr_backed_operator() {
        let op = LabOperator::from_exprs(
            "expr-sqrt",
            vec![Expr::parse("sqrt(u1) + 1").unwrap()],
            vec![Expr::parse("sqrt(v1) + 1").unwrap()],
        );
        let (nu, nv) = op.apply(&[4.0], &[9.0]);
        assert_eq!(nu[0], 3.0);
        assert_eq!(nv[0], 4.0);
    }

    #[test]
    fn condition_id_round_trip() {
        for id in ConditionId::all() {
            assert_eq!(ConditionId::parse(&id.to_string()), Some(*id));
        }
    }
}
