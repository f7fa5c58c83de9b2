//! The Dirichlet solution operator `S_r = (-Δ_r)⁻¹` and the first eigenvalue
//! `λ_{1,r}` of the r-Laplacian, discretized by finite differences.
//!
//! Discretization: gradients live on staggered edges (1D) or on the two
//! right triangles of each grid cell (2D); `-Δ_r u` is assembled as the
//! gradient of the discrete energy
//!
//! ```text
//!   J(u) = Σ_elems (1/r) (|∇u|² + ε²)^{r/2} · measure  -  Σ_nodes v·u·m
//! ```
//!
//! which makes `solve` a strictly convex minimization for every `r > 1`.
//! The nonlinear solve is damped Newton with Armijo backtracking and a
//! regularization continuation `ε_k = ε₀·2⁻ᵏ` down to `ε_min`; for `r = 2`
//! the weights are identically 1 and a single linear solve suffices.
//!
//! The eigenvalue is computed by inverse-power-type iteration
//! `u_{k+1} = normalize(S_r(u_k^{r-1}))` with `λ` read from the Rayleigh
//! quotient of the iterate.

use std::sync::Arc;

use thiserror::Error;

use crate::grid::{GridDomain, GridFunction};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("no convergence after {iterations} iterations (best residual {residual:.3e})")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("linear algebra failure: {0}")]
    Linear(String),
}

/// Configuration for `solve` and `first_eigenvalue`.
///
/// `tolerance` is the absolute sup-norm tolerance on the discrete residual
/// `-Δ_r u - v` at interior nodes (the energy gradient divided by the lumped
/// node mass). The effective threshold is clamped below by the f64
/// evaluation floor of that residual, about `8ε·(|u|/h² + |v|)`: below it
/// the residual cannot even be measured in double precision.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Exponent `r > 1`; must satisfy `r > 2n/(n+1)` for the spatial
    /// dimension n of the domain it is used on.
    pub exponent: f64,
    pub tolerance: f64,
    pub max_iters: usize,
    /// Start of the gradient-regularization schedule `ε_k = ε₀·2⁻ᵏ`.
    pub eps_init: f64,
    /// Floor of the schedule. Positive by default to avoid division by zero
    /// on flat regions; the induced bias is bounded by the continuation.
    pub eps_min: f64,
}

impl SolverConfig {
    pub fn new(exponent: f64) -> Self {
        SolverConfig { exponent, tolerance: 1e-9, max_iters: 600, eps_init: 1.0, eps_min: 1e-10 }
    }

    pub fn with_exponent(&self, exponent: f64) -> Self {
        SolverConfig { exponent, ..self.clone() }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    /// Check against the spatial dimension of the target domain.
    pub fn validate(&self, dim: usize) -> Result<(), SolveError> {
        let n = dim as f64;
        let lower = 2.0 * n / (n + 1.0);
        if !(self.exponent > 1.0) || self.exponent <= lower {
            return Err(SolveError::InvalidConfig(format!(
                "exponent r = {} must exceed max(1, 2n/(n+1)) = {} for dimension {}",
                self.exponent,
                lower.max(1.0),
                dim
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(SolveError::InvalidConfig("tolerance must be positive".into()));
        }
        if self.eps_min < 0.0 || self.eps_init < self.eps_min {
            return Err(SolveError::InvalidConfig("need eps_init >= eps_min >= 0".into()));
        }
        if self.max_iters == 0 {
            return Err(SolveError::InvalidConfig("max_iters must be positive".into()));
        }
        Ok(())
    }
}

/// First-eigenpair estimate.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda: f64,
    /// Normalized so that its sup norm is 1; strictly positive on interior
    /// nodes.
    pub eigenfunction: GridFunction,
    /// `sup | -Δ_r u - λ u^{r-1} |` at interior nodes for the returned pair.
    pub rq_residual: f64,
    pub iterations: usize,
}

/// Per-solve diagnostics: `(continuation stage, energy after step)` for each
/// accepted Newton step. The energy is the ε-regularized objective of the
/// stage it was recorded in, so it is non-increasing within a stage.
#[derive(Debug, Clone, Default)]
pub struct SolveDiagnostics {
    pub newton_steps: usize,
    pub final_residual: f64,
    pub energy_history: Vec<(usize, f64)>,
}

/// Solve `-Δ_r u = v`, `u = 0` on the boundary.
pub fn solve(v: &GridFunction, cfg: &SolverConfig) -> Result<GridFunction, SolveError> {
    solve_with_diagnostics(v, cfg).map(|(u, _)| u)
}

pub fn solve_with_diagnostics(
    v: &GridFunction,
    cfg: &SolverConfig,
) -> Result<(GridFunction, SolveDiagnostics), SolveError> {
    let domain = v.domain();
    cfg.validate(domain.dim())?;
    let model = Model::new(domain.clone(), cfg.exponent);
    let init = if (cfg.exponent - 2.0).abs() > 1e-12 {
        // warm start: one linear solve with the same data
        let lin = Model::new(domain.clone(), 2.0);
        Some(newton_drive(&lin, v, &cfg.with_exponent(2.0), None, &[0.0])?.0)
    } else {
        None
    };
    let stages = continuation_stages(cfg);
    let (u, diag) = newton_drive(&model, v, cfg, init.as_ref(), &stages)?;
    let u = if v.is_nonnegative() { snap_nonnegative(u, cfg.tolerance) } else { u };
    Ok((u, diag))
}

/// First Dirichlet eigenvalue of `-Δ_r` on `domain`.
pub fn first_eigenvalue(
    r: f64,
    domain: &Arc<GridDomain>,
    cfg: &SolverConfig,
) -> Result<EigenResult, SolveError> {
    let cfg = cfg.with_exponent(r);
    cfg.validate(domain.dim())?;
    let model = Model::new(domain.clone(), r);

    // torsion shape as the positive starting iterate
    let one = GridFunction::constant_dirichlet(domain.clone(), 1.0);
    let lin = Model::new(domain.clone(), 2.0);
    let (mut u, _) = newton_drive(&lin, &one, &cfg.with_exponent(2.0), None, &[0.0])?;
    let s = u.sup_norm();
    if s == 0.0 {
        return Err(SolveError::Linear("torsion start degenerated to zero".into()));
    }
    u = u.scale(1.0 / s);

    // For r = 2 the Hessian is constant: factor once and iterate cheaply.
    let factored = if (r - 2.0).abs() < 1e-12 {
        let mut h = model.banded_skeleton();
        model.assemble_hessian(u.values(), 0.0, &mut h);
        h.factor().map_err(SolveError::Linear)?;
        Some(h)
    } else {
        None
    };

    let mut lambda = rayleigh_quotient(&model, &u);
    let max_outer = 500usize;
    // stop on iterate stagnation: the eigenvalue converges roughly twice as
    // fast as the eigenfunction, so the vector is the binding quantity
    let vec_tol = (cfg.tolerance * 1e-3).max(1e-13);
    let mut iterations = 0;
    let mut best_du = f64::INFINITY;
    let mut stalled = 0usize;
    for k in 0..max_outer {
        iterations = k + 1;
        let rhs = u.map(|t| t.abs().powf(r - 1.0));
        let w = match &factored {
            Some(chol) => {
                let mut b = model.load_vector(rhs.values());
                chol.solve(&mut b);
                model.full_from_interior(&b)
            }
            None => {
                // warm-started solve at the regularization floor; fall back to
                // the full continuation if the short path stalls
                let stages = [cfg.eps_min.max(0.0)];
                match newton_drive(&model, &rhs, &cfg, Some(&u), &stages) {
                    Ok((w, _)) => w,
                    Err(_) => newton_drive(&model, &rhs, &cfg, Some(&u), &continuation_stages(&cfg))?.0,
                }
            }
        };
        let s = w.sup_norm();
        if s == 0.0 {
            return Err(SolveError::Linear("eigen iterate collapsed to zero".into()));
        }
        let u_next = w.scale(1.0 / s);
        let du = u_next.sup_distance(&u);
        u = u_next;
        lambda = rayleigh_quotient(&model, &u);
        if du < vec_tol && k > 2 {
            break;
        }
        // inner-solver accuracy floor: quit once the iterate stops improving
        if du >= best_du * 0.5 {
            stalled += 1;
            if stalled >= 8 {
                break;
            }
        } else {
            stalled = 0;
        }
        best_du = best_du.min(du);
        if k + 1 == max_outer {
            return Err(SolveError::NoConvergence { residual: du, iterations });
        }
    }

    let rq_residual = eigen_residual(&model, &u, lambda);
    if u.interior_min() <= 0.0 {
        return Err(SolveError::Linear("eigenfunction not strictly positive in the interior".into()));
    }
    Ok(EigenResult { lambda, eigenfunction: u, rq_residual, iterations })
}

/// The discrete operator value `(-Δ_r u)(x)` at interior nodes (zero on the
/// boundary), at the regularization floor `eps`.
pub fn apply_operator(u: &GridFunction, r: f64, eps: f64) -> GridFunction {
    let model = Model::new(u.domain().clone(), r);
    let mut grad = vec![0.0; model.n_int];
    model.add_energy_grad(u.values(), eps, &mut grad);
    let mut vals = vec![0.0; u.domain().num_nodes()];
    for (id, &node) in model.int_nodes.iter().enumerate() {
        vals[node] = grad[id] / model.mass[id];
    }
    GridFunction::new(u.domain().clone(), vals).expect("operator values finite")
}

/// Discrete energy `Σ (1/r)(|∇u|²+ε²)^{r/2}·measure - Σ v·u·m`.
pub fn discrete_energy(u: &GridFunction, v: &GridFunction, r: f64, eps: f64) -> f64 {
    let model = Model::new(u.domain().clone(), r);
    model.energy(u.values(), eps) - model.load_dot(v.values(), u.values())
}

fn continuation_stages(cfg: &SolverConfig) -> Vec<f64> {
    if (cfg.exponent - 2.0).abs() < 1e-12 {
        return vec![0.0]; // weight exponent is zero: regularization is inert
    }
    let mut stages = Vec::new();
    let mut eps = cfg.eps_init;
    while eps > cfg.eps_min * (1.0 + 1e-12) {
        stages.push(eps);
        eps *= 0.5;
    }
    stages.push(cfg.eps_min);
    stages
}

fn snap_nonnegative(u: GridFunction, tol: f64) -> GridFunction {
    let floor = -(tol.max(1e-14)) * 10.0;
    u.map(|x| if x < 0.0 && x > floor { 0.0 } else { x })
}

fn rayleigh_quotient(model: &Model, u: &GridFunction) -> f64 {
    let num = model.r * model.energy(u.values(), 0.0);
    let den: f64 = model
        .int_nodes
        .iter()
        .enumerate()
        .map(|(id, &node)| u.values()[node].abs().powf(model.r) * model.mass[id])
        .sum();
    num / den
}

fn eigen_residual(model: &Model, u: &GridFunction, lambda: f64) -> f64 {
    let mut grad = vec![0.0; model.n_int];
    model.add_energy_grad(u.values(), 0.0, &mut grad);
    let mut res = 0.0_f64;
    for (id, &node) in model.int_nodes.iter().enumerate() {
        let au = grad[id] / model.mass[id];
        let t = u.values()[node];
        res = res.max((au - lambda * t.abs().powf(model.r - 1.0)).abs());
    }
    res
}

// ---------------------------------------------------------------------------
// Newton driver
// ---------------------------------------------------------------------------

fn newton_drive(
    model: &Model,
    v: &GridFunction,
    cfg: &SolverConfig,
    init: Option<&GridFunction>,
    stages: &[f64],
) -> Result<(GridFunction, SolveDiagnostics), SolveError> {
    let n_nodes = model.domain.num_nodes();
    let mut u_full = match init {
        Some(g) => g.values().to_vec(),
        None => vec![0.0; n_nodes],
    };
    // Dirichlet values are hard zeros
    for i in 0..n_nodes {
        if model.domain.is_boundary(i) {
            u_full[i] = 0.0;
        }
    }

    let load = model.load_vector(v.values());
    let mut diag = SolveDiagnostics::default();
    let mut hess = model.banded_skeleton();
    let mut best_res = f64::INFINITY;
    let v_sup = v.sup_norm();

    for (stage_idx, &eps) in stages.iter().enumerate() {
        let last_stage = stage_idx + 1 == stages.len();
        let floor = model.residual_floor(&u_full, v_sup);
        let stage_tol = if last_stage {
            cfg.tolerance.max(floor)
        } else {
            cfg.tolerance.max(1e-2 * eps).max(floor)
        };
        let stage_max = if last_stage { cfg.max_iters } else { 30 };
        let mut prev_res = f64::INFINITY;
        let mut stalled = 0usize;

        for _ in 0..stage_max {
            if diag.newton_steps >= cfg.max_iters {
                return Err(SolveError::NoConvergence {
                    residual: best_res,
                    iterations: diag.newton_steps,
                });
            }
            let mut grad = vec![0.0; model.n_int];
            model.add_energy_grad(&u_full, eps, &mut grad);
            for i in 0..model.n_int {
                grad[i] -= load[i];
            }
            let res = grad
                .iter()
                .zip(&model.mass)
                .fold(0.0_f64, |m, (g, w)| m.max((g / w).abs()));
            best_res = best_res.min(res);
            if res < stage_tol {
                break;
            }
            // rounding floor at this ε: stop grinding once progress stops
            if res >= 0.9 * prev_res {
                stalled += 1;
                if stalled >= 6 {
                    break;
                }
            } else {
                stalled = 0;
            }
            prev_res = res;

            model.assemble_hessian(&u_full, eps, &mut hess);
            let mut step = grad.clone();
            factor_with_retries(&mut hess, model, &u_full, eps)?;
            hess.solve(&mut step);
            // descent direction: d = -H⁻¹ grad
            for s in step.iter_mut() {
                *s = -*s;
            }
            let g_dot_d: f64 = grad.iter().zip(&step).map(|(g, d)| g * d).sum();

            // local phase: the full step is accepted whenever it reduces the
            // residual — energy comparisons bottom out at rounding precision
            // long before the residual tolerance is reached
            let full = model.shifted(&u_full, &step, 1.0);
            if model.residual_sup(&full, eps, &load) < res {
                let jt = model.energy(&full, eps) - dot(&load, &interior_of(model, &full));
                u_full = full;
                diag.newton_steps += 1;
                diag.energy_history.push((stage_idx, jt));
                continue;
            }

            let j0 = model.energy(&u_full, eps) - dot(&load, &interior_of(model, &u_full));
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..50 {
                let trial = model.shifted(&u_full, &step, t);
                let jt = model.energy(&trial, eps) - dot(&load, &interior_of(model, &trial));
                if jt <= j0 + 1e-4 * t * g_dot_d || jt <= j0 {
                    u_full = trial;
                    diag.newton_steps += 1;
                    diag.energy_history.push((stage_idx, jt));
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // objective is flat to rounding precision at this ε
                diag.newton_steps += 1;
                break;
            }
        }
    }

    // final residual check at the last stage's ε
    let eps_final = *stages.last().unwrap();
    let mut grad = vec![0.0; model.n_int];
    model.add_energy_grad(&u_full, eps_final, &mut grad);
    for i in 0..model.n_int {
        grad[i] -= load[i];
    }
    let res = grad.iter().zip(&model.mass).fold(0.0_f64, |m, (g, w)| m.max((g / w).abs()));
    diag.final_residual = res;
    if res >= cfg.tolerance.max(model.residual_floor(&u_full, v_sup)) {
        return Err(SolveError::NoConvergence { residual: res, iterations: diag.newton_steps });
    }
    let u = GridFunction::new(model.domain.clone(), u_full)
        .map_err(|e| SolveError::Linear(format!("solution not finite: {e}")))?;
    Ok((u, diag))
}

fn factor_with_retries(
    hess: &mut Banded,
    model: &Model,
    u_full: &[f64],
    eps: f64,
) -> Result<(), SolveError> {
    if hess.factor().is_ok() {
        return Ok(());
    }
    let mut shift = 1e-12 * hess.max_diag_estimate().max(1.0);
    for _ in 0..6 {
        model.assemble_hessian(u_full, eps, hess);
        hess.add_diagonal(shift);
        if hess.factor().is_ok() {
            return Ok(());
        }
        shift *= 100.0;
    }
    Err(SolveError::Linear("Hessian factorization failed".into()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn interior_of(model: &Model, u_full: &[f64]) -> Vec<f64> {
    model.int_nodes.iter().map(|&n| u_full[n]).collect()
}

// ---------------------------------------------------------------------------
// Discrete model: elements, energy, gradient, Hessian
// ---------------------------------------------------------------------------

struct Model {
    domain: Arc<GridDomain>,
    r: f64,
    int_id: Vec<Option<usize>>,
    int_nodes: Vec<usize>,
    n_int: usize,
    bw: usize,
    mass: Vec<f64>,
}

impl Model {
    fn new(domain: Arc<GridDomain>, r: f64) -> Self {
        let n = domain.num_nodes();
        let mut int_id = vec![None; n];
        let mut int_nodes = Vec::new();
        for i in 0..n {
            if !domain.is_boundary(i) {
                int_id[i] = Some(int_nodes.len());
                int_nodes.push(i);
            }
        }
        let n_int = int_nodes.len();
        let bw = match domain.dim() {
            1 => 1,
            _ => domain.nx() - 2,
        };
        let mass = match domain.dim() {
            1 => vec![domain.hx(); n_int],
            _ => vec![domain.hx() * domain.hy(); n_int],
        };
        Model { domain, r, int_id, int_nodes, n_int, bw, mass }
    }

    fn banded_skeleton(&self) -> Banded {
        Banded::new(self.n_int, self.bw)
    }

    /// Backward-error floor of the residual evaluation in f64: the node
    /// values of u are rounded to relative ε and amplified by the second
    /// difference quotient, so residuals below ~8ε(|u|/h² + |v|) are noise.
    fn residual_floor(&self, u_full: &[f64], v_sup: f64) -> f64 {
        let u_sup = u_full.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        let h_min = if self.domain.dim() == 2 {
            self.domain.hx().min(self.domain.hy())
        } else {
            self.domain.hx()
        };
        8.0 * f64::EPSILON * (u_sup / (h_min * h_min) + v_sup)
    }

    fn load_vector(&self, v: &[f64]) -> Vec<f64> {
        self.int_nodes.iter().enumerate().map(|(id, &node)| v[node] * self.mass[id]).collect()
    }

    fn load_dot(&self, v: &[f64], u: &[f64]) -> f64 {
        self.int_nodes
            .iter()
            .enumerate()
            .map(|(id, &node)| v[node] * u[node] * self.mass[id])
            .sum()
    }

    /// `sup |(-Δ_r u) - v|` at interior nodes, with `load = v·m` pre-scaled.
    fn residual_sup(&self, u_full: &[f64], eps: f64, load: &[f64]) -> f64 {
        let mut grad = vec![0.0; self.n_int];
        self.add_energy_grad(u_full, eps, &mut grad);
        grad.iter()
            .zip(load)
            .zip(&self.mass)
            .fold(0.0_f64, |m, ((g, l), w)| m.max(((g - l) / w).abs()))
    }

    fn full_from_interior(&self, b: &[f64]) -> GridFunction {
        let mut vals = vec![0.0; self.domain.num_nodes()];
        for (id, &node) in self.int_nodes.iter().enumerate() {
            vals[node] = b[id];
        }
        GridFunction::new(self.domain.clone(), vals).expect("finite")
    }

    fn shifted(&self, u_full: &[f64], step: &[f64], t: f64) -> Vec<f64> {
        let mut out = u_full.to_vec();
        for (id, &node) in self.int_nodes.iter().enumerate() {
            out[node] += t * step[id];
        }
        out
    }

    fn energy(&self, u: &[f64], eps: f64) -> f64 {
        let r = self.r;
        let e2 = eps * eps;
        let mut total = 0.0;
        match self.domain.dim() {
            1 => {
                let nx = self.domain.nx();
                let h = self.domain.hx();
                for e in 0..nx - 1 {
                    let g = (u[e + 1] - u[e]) / h;
                    total += (g * g + e2).powf(r / 2.0) / r * h;
                }
            }
            _ => {
                let (nx, ny) = (self.domain.nx(), self.domain.ny());
                let (hx, hy) = (self.domain.hx(), self.domain.hy());
                let area = 0.5 * hx * hy;
                for j in 0..ny - 1 {
                    for i in 0..nx - 1 {
                        let a = j * nx + i;
                        let b = a + 1;
                        let c = a + nx;
                        let d = c + 1;
                        // lower triangle (a, b, c)
                        let gx = (u[b] - u[a]) / hx;
                        let gy = (u[c] - u[a]) / hy;
                        total += (gx * gx + gy * gy + e2).powf(r / 2.0) / r * area;
                        // upper triangle (d, c, b)
                        let gx = (u[d] - u[c]) / hx;
                        let gy = (u[d] - u[b]) / hy;
                        total += (gx * gx + gy * gy + e2).powf(r / 2.0) / r * area;
                    }
                }
            }
        }
        total
    }

    /// Add the gradient of the ε-regularized Dirichlet energy into `out`
    /// (indexed by interior id).
    fn add_energy_grad(&self, u: &[f64], eps: f64, out: &mut [f64]) {
        let r = self.r;
        let e2 = eps * eps;
        match self.domain.dim() {
            1 => {
                let nx = self.domain.nx();
                let h = self.domain.hx();
                for e in 0..nx - 1 {
                    let g = (u[e + 1] - u[e]) / h;
                    // flow = (g²+ε²)^{(r-2)/2}·g; the limit at g = ε = 0 is 0
                    // for every r > 1, so guard the 0^negative case explicitly
                    let flow = if g == 0.0 && e2 == 0.0 {
                        0.0
                    } else {
                        (g * g + e2).powf((r - 2.0) / 2.0) * g
                    };
                    if let Some(id) = self.int_id[e] {
                        out[id] -= flow;
                    }
                    if let Some(id) = self.int_id[e + 1] {
                        out[id] += flow;
                    }
                }
            }
            _ => {
                let (nx, ny) = (self.domain.nx(), self.domain.ny());
                let (hx, hy) = (self.domain.hx(), self.domain.hy());
                let area = 0.5 * hx * hy;
                for j in 0..ny - 1 {
                    for i in 0..nx - 1 {
                        let a = j * nx + i;
                        let b = a + 1;
                        let c = a + nx;
                        let d = c + 1;
                        // lower triangle: nodes (a, b, c),
                        // shape gradients (-1/hx,-1/hy), (1/hx,0), (0,1/hy)
                        let gx = (u[b] - u[a]) / hx;
                        let gy = (u[c] - u[a]) / hy;
                        let q = gx * gx + gy * gy + e2;
                        if q > 0.0 {
                            let w = q.powf((r - 2.0) / 2.0) * area;
                            let fx = w * gx / hx;
                            let fy = w * gy / hy;
                            if let Some(id) = self.int_id[a] {
                                out[id] += -fx - fy;
                            }
                            if let Some(id) = self.int_id[b] {
                                out[id] += fx;
                            }
                            if let Some(id) = self.int_id[c] {
                                out[id] += fy;
                            }
                        }
                        // upper triangle: nodes (d, c, b),
                        // shape gradients (1/hx,1/hy), (-1/hx,0), (0,-1/hy)
                        let gx = (u[d] - u[c]) / hx;
                        let gy = (u[d] - u[b]) / hy;
                        let q = gx * gx + gy * gy + e2;
                        if q > 0.0 {
                            let w = q.powf((r - 2.0) / 2.0) * area;
                            let fx = w * gx / hx;
                            let fy = w * gy / hy;
                            if let Some(id) = self.int_id[d] {
                                out[id] += fx + fy;
                            }
                            if let Some(id) = self.int_id[c] {
                                out[id] -= fx;
                            }
                            if let Some(id) = self.int_id[b] {
                                out[id] -= fy;
                            }
                        }
                    }
                }
            }
        }
    }

    fn assemble_hessian(&self, u: &[f64], eps: f64, h: &mut Banded) {
        h.clear();
        let r = self.r;
        let e2 = eps * eps;
        match self.domain.dim() {
            1 => {
                let nx = self.domain.nx();
                let hx = self.domain.hx();
                for e in 0..nx - 1 {
                    let g = (u[e + 1] - u[e]) / hx;
                    let q = g * g + e2;
                    // c = (w + (r-2) q^{(r-4)/2} g²)/h, positive for r > 1;
                    // the rank-one term vanishes in the limit g → 0
                    let (w, w2) = hessian_weights(r, q);
                    let c = (w + w2 * g * g) / hx;
                    let ia = self.int_id[e];
                    let ib = self.int_id[e + 1];
                    if let Some(i) = ia {
                        h.add(i, i, c);
                    }
                    if let Some(i) = ib {
                        h.add(i, i, c);
                    }
                    if let (Some(i), Some(j)) = (ia, ib) {
                        h.add(i, j, -c);
                    }
                }
            }
            _ => {
                let (nx, ny) = (self.domain.nx(), self.domain.ny());
                let (hx, hy) = (self.domain.hx(), self.domain.hy());
                let area = 0.5 * hx * hy;
                let tri = |nodes: [usize; 3], grads: [(f64, f64); 3], u: &[f64], h: &mut Banded| {
                    let mut gx = 0.0;
                    let mut gy = 0.0;
                    for k in 0..3 {
                        gx += u[nodes[k]] * grads[k].0;
                        gy += u[nodes[k]] * grads[k].1;
                    }
                    let q = gx * gx + gy * gy + e2;
                    let (w, w2) = hessian_weights(r, q);
                    for k in 0..3 {
                        let ik = match self.int_id[nodes[k]] {
                            Some(i) => i,
                            None => continue,
                        };
                        let pk = gx * grads[k].0 + gy * grads[k].1;
                        for l in k..3 {
                            let il = match self.int_id[nodes[l]] {
                                Some(i) => i,
                                None => continue,
                            };
                            let pl = gx * grads[l].0 + gy * grads[l].1;
                            let dot = grads[k].0 * grads[l].0 + grads[k].1 * grads[l].1;
                            let val = area * (w * dot + w2 * pk * pl);
                            h.add(ik, il, val);
                        }
                    }
                };
                for j in 0..ny - 1 {
                    for i in 0..nx - 1 {
                        let a = j * nx + i;
                        let b = a + 1;
                        let c = a + nx;
                        let d = c + 1;
                        tri(
                            [a, b, c],
                            [(-1.0 / hx, -1.0 / hy), (1.0 / hx, 0.0), (0.0, 1.0 / hy)],
                            u,
                            h,
                        );
                        tri(
                            [d, c, b],
                            [(1.0 / hx, 1.0 / hy), (-1.0 / hx, 0.0), (0.0, -1.0 / hy)],
                            u,
                            h,
                        );
                    }
                }
            }
        }
    }
}

/// Weights of the local Hessian `w·I + w2·(∇u)(∇u)ᵀ` at `q = |∇u|² + ε²`.
/// Handles the degenerate `q = 0` case: for r = 2 the weight is 1 and the
/// rank-one term absent; for r > 2 both vanish; for r < 2 the operator is
/// genuinely singular there (the positive ε floor avoids this in practice)
/// and zero weights let the diagonal-shift retry take over.
fn hessian_weights(r: f64, q: f64) -> (f64, f64) {
    if (r - 2.0).abs() < 1e-12 {
        return (1.0, 0.0);
    }
    if q == 0.0 {
        return (0.0, 0.0);
    }
    let w = q.powf((r - 2.0) / 2.0);
    let w2 = (r - 2.0) * q.powf((r - 4.0) / 2.0);
    if w.is_finite() && w2.is_finite() {
        (w, w2)
    } else {
        (0.0, 0.0)
    }
}

// ---------------------------------------------------------------------------
// Banded SPD Cholesky
// ---------------------------------------------------------------------------

/// Symmetric banded matrix in lower-band storage: `band[i][k]` holds
/// `A[i][i-k]` for `k = 0..=bw`. After `factor`, holds the Cholesky factor.
struct Banded {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

impl Banded {
    fn new(n: usize, bw: usize) -> Self {
        Banded { n, bw, band: vec![0.0; n * (bw + 1)] }
    }

    fn clear(&mut self) {
        self.band.iter_mut().for_each(|x| *x = 0.0);
    }

    #[inline]
    fn idx(&self, i: usize, k: usize) -> usize {
        i * (self.bw + 1) + k
    }

    /// Symmetric add: only the lower triangle is stored.
    fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        debug_assert!(k <= self.bw, "entry outside band");
        let idx = self.idx(hi, k);
        self.band[idx] += v;
    }

    fn add_diagonal(&mut self, v: f64) {
        for i in 0..self.n {
            let idx = self.idx(i, 0);
            self.band[idx] += v;
        }
    }

    fn max_diag_estimate(&self) -> f64 {
        (0..self.n).fold(0.0_f64, |m, i| m.max(self.band[self.idx(i, 0)].abs()))
    }

    /// In-place Cholesky; fails on a nonpositive pivot.
    fn factor(&mut self) -> Result<(), String> {
        let bw = self.bw;
        for i in 0..self.n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut sum = self.band[self.idx(i, i - j)];
                let kstart = lo.max(j.saturating_sub(bw));
                for k in kstart..j {
                    sum -= self.band[self.idx(i, i - k)] * self.band[self.idx(j, j - k)];
                }
                if j == i {
                    if sum <= 0.0 {
                        return Err(format!("nonpositive pivot {sum:.3e} at row {i}"));
                    }
                    let idx = self.idx(i, 0);
                    self.band[idx] = sum.sqrt();
                } else {
                    let denom = self.band[self.idx(j, 0)];
                    let idx = self.idx(i, i - j);
                    self.band[idx] = sum / denom;
                }
            }
        }
        Ok(())
    }

    /// Solve `L Lᵀ x = b` in place (after `factor`).
    fn solve(&self, b: &mut [f64]) {
        let bw = self.bw;
        for i in 0..self.n {
            let lo = i.saturating_sub(bw);
            let mut sum = b[i];
            for k in lo..i {
                sum -= self.band[self.idx(i, i - k)] * b[k];
            }
            b[i] = sum / self.band[self.idx(i, 0)];
        }
        for i in (0..self.n).rev() {
            let hi = (i + bw).min(self.n - 1);
            let mut sum = b[i];
            for k in i + 1..=hi {
                sum -= self.band[self.idx(k, k - i)] * b[k];
            }
            b[i] = sum / self.band[self.idx(i, 0)];
        }
    }
}
