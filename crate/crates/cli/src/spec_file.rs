//! TOML problem-spec files: the declarative input format for every
//! subcommand. Sections: `[domain]`, `[exponents]`, `[nonlinearities]`,
//! `[radii]`, `[solver]`, `[sampling]`, plus `[lab]` for the
//! finite-dimensional fixtures. Expressions are quoted strings; `D` subsets
//! are coordinate intervals (snapped inward to grid nodes) or inclusive
//! index ranges.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use conecert::abstract_lab::{LabOperator, LabRadii};
use conecert::certify::{Monotonicity, ProblemSpec, Radii, Rung};
use conecert::expr::Expr;
use conecert::fixpoint::FixpointConfig;
use conecert::grid::{AxisRange, GridDomain};
use conecert::plap::SolverConfig;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub domain: DomainSection,
    pub exponents: ExponentsSection,
    pub nonlinearities: NonlinearitiesSection,
    pub radii: RadiiSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub lab: Option<LabSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub kind: String,
    pub length: Option<f64>,
    pub lx: Option<f64>,
    pub ly: Option<f64>,
    pub nodes: Option<usize>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub d1: SubsetSpec,
    pub d2: SubsetSpec,
}

/// One interior subset: coordinate intervals (inward snap) or inclusive
/// node-index ranges, per axis.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetSpec {
    pub x: Option<[f64; 2]>,
    pub y: Option<[f64; 2]>,
    pub ix: Option<[usize; 2]>,
    pub iy: Option<[usize; 2]>,
}

impl SubsetSpec {
    fn axis_x(&self, name: &str) -> Result<AxisRange> {
        match (self.x, self.ix) {
            (Some([a, b]), None) => Ok(AxisRange::Coords(a, b)),
            (None, Some([i, j])) => Ok(AxisRange::Indices(i, j)),
            _ => bail!("subset {name}: give exactly one of `x` or `ix`"),
        }
    }

    fn axis_y(&self, name: &str) -> Result<AxisRange> {
        match (self.y, self.iy) {
            (Some([a, b]), None) => Ok(AxisRange::Coords(a, b)),
            (None, Some([i, j])) => Ok(AxisRange::Indices(i, j)),
            _ => bail!("subset {name}: give exactly one of `y` or `iy` on a rectangle"),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentsSection {
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitiesSection {
    pub f: String,
    pub g: String,
    #[serde(default = "one")]
    pub lambda: f64,
    pub f_monotone_u: Option<String>,
    pub f_monotone_v: Option<String>,
    pub g_monotone_u: Option<String>,
    pub g_monotone_v: Option<String>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiiSection {
    pub r1: f64,
    pub r2: f64,
    #[serde(rename = "R1")]
    pub big_r1: f64,
    #[serde(rename = "R2")]
    pub big_r2: f64,
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub varrho1: Option<f64>,
    pub varrho2: Option<f64>,
    #[serde(rename = "Rt1")]
    pub tilde_big_r1: Option<f64>,
    #[serde(rename = "Rt2")]
    pub tilde_big_r2: Option<f64>,
    pub rho_t1: Option<f64>,
    pub rho_t2: Option<f64>,
    /// Rungs `[r1, r2, R1, R2]` for the ladder certificate.
    pub ladder: Option<Vec<[f64; 4]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub tolerance: f64,
    pub max_iters: usize,
    pub eps_init: f64,
    pub eps_min: f64,
    pub fp_tol: f64,
    pub fp_max_iters: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            tolerance: 1e-9,
            max_iters: 600,
            eps_init: 1.0,
            eps_min: 1e-10,
            fp_tol: 1e-9,
            fp_max_iters: 400,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub resolution: usize,
    pub strict_delta: f64,
    pub box_u: [f64; 2],
    pub box_v: [f64; 2],
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection {
            resolution: 33,
            strict_delta: 1e-9,
            box_u: [0.0, 10.0],
            box_v: [0.0, 10.0],
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabSection {
    pub n1: usize,
    pub n2: usize,
    #[serde(rename = "N1")]
    pub maps1: Vec<String>,
    #[serde(rename = "N2")]
    pub maps2: Vec<String>,
    pub mask1: Option<Vec<bool>>,
    pub mask2: Option<Vec<bool>>,
    #[serde(default)]
    pub isotone: bool,
    #[serde(default)]
    pub homogeneous: bool,
    pub theorem: Option<String>,
    pub conditions: Option<Vec<String>>,
    pub radii: LabRadiiSection,
    pub rungs: Option<Vec<[f64; 4]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabRadiiSection {
    pub r1: f64,
    pub r2: f64,
    #[serde(rename = "R1")]
    pub big_r1: f64,
    #[serde(rename = "R2")]
    pub big_r2: f64,
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub varrho1: Option<f64>,
    pub varrho2: Option<f64>,
    pub rho_t1: Option<f64>,
    pub rho_t2: Option<f64>,
}

fn pair(a: Option<f64>, b: Option<f64>, name: &str) -> Result<Option<(f64, f64)>> {
    match (a, b) {
        (Some(x), Some(y)) => Ok(Some((x, y))),
        (None, None) => Ok(None),
        _ => bail!("radii: {name}1 and {name}2 must be given together"),
    }
}

fn parse_monotonicity(s: &Option<String>, field: &str) -> Result<Monotonicity> {
    match s.as_deref() {
        None | Some("unknown") => Ok(Monotonicity::Unknown),
        Some("increasing") => Ok(Monotonicity::Increasing),
        Some("decreasing") => Ok(Monotonicity::Decreasing),
        Some(other) => bail!("{field}: unknown monotonicity `{other}`"),
    }
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<SpecFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading spec file {}", path.display()))?;
        let spec: SpecFile = toml::from_str(&text)
            .with_context(|| format!("parsing spec file {}", path.display()))?;
        Ok(spec)
    }

    pub fn build_domain(&self) -> Result<Arc<GridDomain>> {
        let d = &self.domain;
        match d.kind.as_str() {
            "interval" => {
                let length = d.length.ok_or_else(|| anyhow!("domain: interval needs `length`"))?;
                let n = d.nodes.ok_or_else(|| anyhow!("domain: interval needs `nodes`"))?;
                let d1 = d.d1.axis_x("d1")?;
                let d2 = d.d2.axis_x("d2")?;
                Ok(GridDomain::interval(length, n, d1, d2)?)
            }
            "rectangle" => {
                let lx = d.lx.ok_or_else(|| anyhow!("domain: rectangle needs `lx`"))?;
                let ly = d.ly.ok_or_else(|| anyhow!("domain: rectangle needs `ly`"))?;
                let nx = d.nx.ok_or_else(|| anyhow!("domain: rectangle needs `nx`"))?;
                let ny = d.ny.ok_or_else(|| anyhow!("domain: rectangle needs `ny`"))?;
                let d1 = (d.d1.axis_x("d1")?, d.d1.axis_y("d1")?);
                let d2 = (d.d2.axis_x("d2")?, d.d2.axis_y("d2")?);
                Ok(GridDomain::rectangle(lx, ly, nx, ny, d1, d2)?)
            }
            other => bail!("domain: unknown kind `{other}` (expected interval|rectangle)"),
        }
    }

    pub fn build_problem(&self) -> Result<ProblemSpec> {
        let domain = self.build_domain()?;
        let f = Expr::parse(&self.nonlinearities.f)
            .map_err(|e| anyhow!("nonlinearities.f: {e}"))?;
        let g = Expr::parse(&self.nonlinearities.g)
            .map_err(|e| anyhow!("nonlinearities.g: {e}"))?;
        let radii = Radii {
            r: (self.radii.r1, self.radii.r2),
            big_r: (self.radii.big_r1, self.radii.big_r2),
            rho: pair(self.radii.rho1, self.radii.rho2, "rho")?,
            varrho: pair(self.radii.varrho1, self.radii.varrho2, "varrho")?,
            tilde_big_r: pair(self.radii.tilde_big_r1, self.radii.tilde_big_r2, "Rt")?,
            tilde_rho: pair(self.radii.rho_t1, self.radii.rho_t2, "rho_t")?,
        };
        let mut spec =
            ProblemSpec::new(domain, self.exponents.p, self.exponents.q, f, g, radii);
        spec.lambda = self.nonlinearities.lambda;
        spec.mono_f = (
            parse_monotonicity(&self.nonlinearities.f_monotone_u, "f_monotone_u")?,
            parse_monotonicity(&self.nonlinearities.f_monotone_v, "f_monotone_v")?,
        );
        spec.mono_g = (
            parse_monotonicity(&self.nonlinearities.g_monotone_u, "g_monotone_u")?,
            parse_monotonicity(&self.nonlinearities.g_monotone_v, "g_monotone_v")?,
        );
        spec.resolution = self.sampling.resolution;
        spec.strict_delta = self.sampling.strict_delta;
        Ok(spec)
    }

    pub fn build_solver_config(&self, exponent: f64) -> SolverConfig {
        let mut cfg = SolverConfig::new(exponent);
        cfg.tolerance = self.solver.tolerance;
        cfg.max_iters = self.solver.max_iters;
        cfg.eps_init = self.solver.eps_init;
        cfg.eps_min = self.solver.eps_min;
        cfg
    }

    pub fn build_fixpoint_config(&self, seed: u64) -> FixpointConfig {
        FixpointConfig {
            max_iters: self.solver.fp_max_iters,
            fp_tol: self.solver.fp_tol,
            dedup_tol: None,
            theta_init: 1.0,
            rng_seed: seed,
        }
    }

    pub fn ladder(&self) -> Result<Vec<Rung>> {
        let rungs = self
            .radii
            .ladder
            .as_ref()
            .ok_or_else(|| anyhow!("radii: ladder certificate needs `ladder = [[r1,r2,R1,R2],..]`"))?;
        Ok(rungs
            .iter()
            .map(|&[r1, r2, cr1, cr2]| Rung { r: (r1, r2), big_r: (cr1, cr2) })
            .collect())
    }

    pub fn nonexistence_box(&self) -> ((f64, f64), (f64, f64)) {
        (
            (self.sampling.box_u[0], self.sampling.box_u[1]),
            (self.sampling.box_v[0], self.sampling.box_v[1]),
        )
    }

    pub fn build_lab(&self) -> Result<(LabOperator, LabRadii, &LabSection)> {
        let lab = self.lab.as_ref().ok_or_else(|| anyhow!("spec has no [lab] section"))?;
        if lab.maps1.len() != lab.n1 || lab.maps2.len() != lab.n2 {
            bail!("lab: N1/N2 must list one expression per output coordinate");
        }
        let exprs1 = lab
            .maps1
            .iter()
            .map(|s| Expr::parse(s).map_err(|e| anyhow!("lab.N1: {e}")))
            .collect::<Result<Vec<_>>>()?;
        let exprs2 = lab
            .maps2
            .iter()
            .map(|s| Expr::parse(s).map_err(|e| anyhow!("lab.N2: {e}")))
            .collect::<Result<Vec<_>>>()?;
        let mut op = LabOperator::from_exprs("fixture", exprs1, exprs2)
            .with_isotone(lab.isotone)
            .with_homogeneous(lab.homogeneous);
        if let (Some(m1), Some(m2)) = (&lab.mask1, &lab.mask2) {
            op = op.with_masks(m1.clone(), m2.clone());
        }
        let rs = &lab.radii;
        let mut radii = LabRadii::basic((rs.r1, rs.r2), (rs.big_r1, rs.big_r2));
        if let Some(rho) = pair(rs.rho1, rs.rho2, "rho")? {
            radii = radii.with_rho(rho);
        }
        if let Some(varrho) = pair(rs.varrho1, rs.varrho2, "varrho")? {
            radii = radii.with_varrho(varrho);
        }
        if let Some(tr) = pair(rs.rho_t1, rs.rho_t2, "rho_t")? {
            radii = radii.with_tilde_rho(tr);
        }
        Ok((op, radii, lab))
    }
}
