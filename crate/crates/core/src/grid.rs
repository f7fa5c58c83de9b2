//! Discretized domains, grid functions, norms and cone membership.
//!
//! Everything downstream computes on these types: a [`GridDomain`] is a
//! uniform grid over an interval `[0, L]` or a rectangle `[0, Lx] × [0, Ly]`
//! with a boundary mask and two designated compact interior subsets `D₁`,
//! `D₂`; a [`GridFunction`] is one real value per node.
//!
//! The seminorm `‖u‖` used throughout the crate is `min_D u`, the infimum of
//! `u` over a designated subset. It is monotone, positively homogeneous and
//! satisfies `u ≥ ‖u‖·χ_D` for every nonnegative `u`, so the cone
//! `K = {u ≥ 0 : u ≥ ‖u‖χ_D}` coincides with the nonnegative cone.

use std::io::Write;
use std::sync::Arc;

use thiserror::Error;

/// Errors from domain/function construction and norm evaluation.
#[derive(Debug, Error)]
pub enum GridError {
    #[error("node count {0} too small: need at least 3 nodes per axis")]
    TooFewNodes(usize),
    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("subset {name} is empty after snapping to the grid")]
    EmptySubset { name: &'static str },
    #[error("subset {name} reaches within 2h of the boundary (compact-interior rule)")]
    SubsetTouchesBoundary { name: &'static str },
    #[error("value at node {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("function has a negative value {value} at node {index}; seminorm is defined on the nonnegative cone")]
    NegativeValue { index: usize, value: f64 },
    #[error("grid function does not belong to this domain ({expected} nodes expected, {got} given)")]
    DomainMismatch { expected: usize, got: usize },
    #[error("subset index range {lo}..={hi} is invalid for this axis")]
    BadIndexRange { lo: usize, hi: usize },
}

/// Shape of the underlying continuous domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// `[0, length]`.
    Interval { length: f64 },
    /// `[0, lx] × [0, ly]`.
    Rectangle { lx: f64, ly: f64 },
}

/// A uniform grid with boundary mask and two compact interior subsets.
///
/// Nodes are indexed in row-major order: node `(i, j)` has flat index
/// `j * nx + i`. For intervals `ny == 1` and `j == 0`.
#[derive(Debug, Clone)]
pub struct GridDomain {
    kind: DomainKind,
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
    boundary: Vec<bool>,
    d1: Arc<Vec<bool>>,
    d2: Arc<Vec<bool>>,
}

/// Specification of an interior subset along one axis: a coordinate interval
/// (snapped inward to grid nodes) or an inclusive node-index range.
#[derive(Debug, Clone, Copy)]
pub enum AxisRange {
    Coords(f64, f64),
    Indices(usize, usize),
}

impl AxisRange {
    /// Snap to node indices on an axis with spacing `h` and `n` nodes.
    /// Coordinate intervals snap inward (ceil on the left, floor on the right).
    fn to_indices(self, h: f64, n: usize) -> Result<(usize, usize), GridError> {
        match self {
            AxisRange::Coords(a, b) => {
                let lo = (a / h).ceil() as isize;
                let hi = (b / h).floor() as isize;
                // nudge for exact hits that round the wrong way under fp noise
                let lo = if ((lo - 1) as f64 * h - a).abs() < 1e-12 * h { lo - 1 } else { lo };
                let hi = if ((hi + 1) as f64 * h - b).abs() < 1e-12 * h { hi + 1 } else { hi };
                if lo < 0 || hi < lo || hi as usize >= n {
                    return Err(GridError::EmptySubset { name: "axis range" });
                }
                Ok((lo as usize, hi as usize))
            }
            AxisRange::Indices(lo, hi) => {
                if hi < lo || hi >= n {
                    return Err(GridError::BadIndexRange { lo, hi });
                }
                Ok((lo, hi))
            }
        }
    }
}

impl GridDomain {
    /// 1D domain `[0, length]` with `n` nodes and subsets `D₁`, `D₂` given as
    /// axis ranges.
    pub fn interval(
        length: f64,
        n: usize,
        d1: AxisRange,
        d2: AxisRange,
    ) -> Result<Arc<Self>, GridError> {
        if n < 3 {
            return Err(GridError::TooFewNodes(n));
        }
        if !(length > 0.0) {
            return Err(GridError::NonPositiveLength(length));
        }
        let h = length / (n - 1) as f64;
        let boundary: Vec<bool> = (0..n).map(|i| i == 0 || i == n - 1).collect();
        let mask_for = |r: AxisRange, name: &'static str| -> Result<Vec<bool>, GridError> {
            let (lo, hi) = r.to_indices(h, n)?;
            let mut m = vec![false; n];
            for (i, mi) in m.iter_mut().enumerate() {
                *mi = i >= lo && i <= hi;
            }
            check_subset(&m, &boundary, n, 1, name)?;
            Ok(m)
        };
        let d1 = mask_for(d1, "D1")?;
        let d2 = mask_for(d2, "D2")?;
        Ok(Arc::new(GridDomain {
            kind: DomainKind::Interval { length },
            nx: n,
            ny: 1,
            hx: h,
            hy: 1.0,
            boundary,
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }))
    }

    /// 2D domain `[0, lx] × [0, ly]`, `nx × ny` nodes; subsets are axis-range
    /// products (rectangles snapped inward).
    pub fn rectangle(
        lx: f64,
        ly: f64,
        nx: usize,
        ny: usize,
        d1: (AxisRange, AxisRange),
        d2: (AxisRange, AxisRange),
    ) -> Result<Arc<Self>, GridError> {
        if nx < 3 {
            return Err(GridError::TooFewNodes(nx));
        }
        if ny < 3 {
            return Err(GridError::TooFewNodes(ny));
        }
        if !(lx > 0.0) {
            return Err(GridError::NonPositiveLength(lx));
        }
        if !(ly > 0.0) {
            return Err(GridError::NonPositiveLength(ly));
        }
        let hx = lx / (nx - 1) as f64;
        let hy = ly / (ny - 1) as f64;
        let n = nx * ny;
        let mut boundary = vec![false; n];
        for j in 0..ny {
            for i in 0..nx {
                if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                    boundary[j * nx + i] = true;
                }
            }
        }
        let mask_for = |r: (AxisRange, AxisRange), name: &'static str| -> Result<Vec<bool>, GridError> {
            let (ix0, ix1) = r.0.to_indices(hx, nx)?;
            let (iy0, iy1) = r.1.to_indices(hy, ny)?;
            let mut m = vec![false; n];
            for j in iy0..=iy1 {
                for i in ix0..=ix1 {
                    m[j * nx + i] = true;
                }
            }
            check_subset(&m, &boundary, nx, ny, name)?;
            Ok(m)
        };
        let d1 = mask_for(d1, "D1")?;
        let d2 = mask_for(d2, "D2")?;
        Ok(Arc::new(GridDomain {
            kind: DomainKind::Rectangle { lx, ly },
            nx,
            ny,
            hx,
            hy,
            boundary,
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }))
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// Spatial dimension (1 or 2).
    pub fn dim(&self) -> usize {
        match self.kind {
            DomainKind::Interval { .. } => 1,
            DomainKind::Rectangle { .. } => 2,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn hy(&self) -> f64 {
        self.hy
    }

    pub fn num_nodes(&self) -> usize {
        self.nx * self.ny
    }

    /// Coordinates of the node with flat index `idx`.
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let i = idx % self.nx;
        let j = idx / self.nx;
        (i as f64 * self.hx, if self.ny > 1 { j as f64 * self.hy } else { 0.0 })
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        self.boundary[idx]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    /// Flat indices of interior nodes, in increasing order.
    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_nodes()).filter(move |&i| !self.boundary[i])
    }

    pub fn d1_mask(&self) -> &[bool] {
        &self.d1
    }

    pub fn d2_mask(&self) -> &[bool] {
        &self.d2
    }

    /// Cone specification built on `D₁`.
    pub fn cone_d1(self: &Arc<Self>) -> ConeSpec {
        ConeSpec { domain: self.clone(), mask: self.d1.clone(), name: "D1" }
    }

    /// Cone specification built on `D₂`.
    pub fn cone_d2(self: &Arc<Self>) -> ConeSpec {
        ConeSpec { domain: self.clone(), mask: self.d2.clone(), name: "D2" }
    }
}

/// `D` nonempty, and every node of `D` at least 2h away from the boundary.
fn check_subset(
    mask: &[bool],
    boundary: &[bool],
    nx: usize,
    ny: usize,
    name: &'static str,
) -> Result<(), GridError> {
    if !mask.iter().any(|&b| b) {
        return Err(GridError::EmptySubset { name });
    }
    for (idx, &inside) in mask.iter().enumerate() {
        if !inside {
            continue;
        }
        if boundary[idx] {
            return Err(GridError::SubsetTouchesBoundary { name });
        }
        let i = (idx % nx) as isize;
        let j = (idx / nx) as isize;
        let near_x = i < 2 || i > nx as isize - 3;
        let near_y = ny > 1 && (j < 2 || j > ny as isize - 3);
        if near_x || near_y {
            return Err(GridError::SubsetTouchesBoundary { name });
        }
    }
    Ok(())
}

/// A compact interior subset together with its `0/1` indicator.
///
/// Under the inf-over-`D` seminorm the indicator satisfies `‖χ_D‖ = 1` and
/// `|χ_D| = 1`.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    domain: Arc<GridDomain>,
    mask: Arc<Vec<bool>>,
    name: &'static str,
}

impl ConeSpec {
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// The indicator `χ_D` as a grid function.
    pub fn indicator(&self) -> GridFunction {
        let values = self.mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        GridFunction { domain: self.domain.clone(), values }
    }

    /// Flat indices of the nodes of `D`.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Real values on the nodes of a [`GridDomain`]. Immutable after construction.
#[derive(Debug, Clone)]
pub struct GridFunction {
    domain: Arc<GridDomain>,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wrap a value vector; every value must be finite.
    pub fn new(domain: Arc<GridDomain>, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != domain.num_nodes() {
            return Err(GridError::DomainMismatch { expected: domain.num_nodes(), got: values.len() });
        }
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(GridError::NonFiniteValue { index });
            }
        }
        Ok(GridFunction { domain, values })
    }

    pub fn zero(domain: Arc<GridDomain>) -> Self {
        let n = domain.num_nodes();
        GridFunction { domain, values: vec![0.0; n] }
    }

    /// Constant `c` everywhere (including boundary nodes).
    pub fn constant(domain: Arc<GridDomain>, c: f64) -> Self {
        let n = domain.num_nodes();
        GridFunction { domain, values: vec![c; n] }
    }

    /// Constant `c` on interior nodes, zero on the boundary (Dirichlet shape).
    pub fn constant_dirichlet(domain: Arc<GridDomain>, c: f64) -> Self {
        let values = (0..domain.num_nodes())
            .map(|i| if domain.is_boundary(i) { 0.0 } else { c })
            .collect();
        GridFunction { domain, values }
    }

    /// Sample `f(x, y)` at every node.
    pub fn from_fn(domain: Arc<GridDomain>, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let values = (0..domain.num_nodes())
            .map(|i| {
                let (x, y) = domain.coords(i);
                f(x, y)
            })
            .collect();
        GridFunction { domain, values }
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// `max_x |u(x)|` over all nodes. Zero iff `u ≡ 0`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `min_{x ∈ D} u(x)` for nonnegative `u`: the seminorm the cone theory
    /// is instantiated with. Rejects functions with negative values.
    pub fn seminorm(&self, d: &ConeSpec) -> Result<f64, GridError> {
        if d.mask.len() != self.values.len() {
            return Err(GridError::DomainMismatch { expected: self.values.len(), got: d.mask.len() });
        }
        for (index, &value) in self.values.iter().enumerate() {
            if value < 0.0 {
                return Err(GridError::NegativeValue { index, value });
            }
        }
        let mut m = f64::INFINITY;
        for (i, &inside) in d.mask.iter().enumerate() {
            if inside {
                m = m.min(self.values[i]);
            }
        }
        Ok(m)
    }

    /// `u(x) ≥ ‖u‖·χ_D(x)` at every node. With the inf-over-D seminorm this
    /// holds for every nonnegative `u`; kept as an explicit check because the
    /// abstract theory is phrased in terms of it.
    pub fn cone_membership(&self, d: &ConeSpec) -> bool {
        match self.seminorm(d) {
            Ok(s) => self
                .values
                .iter()
                .zip(d.mask.iter())
                .all(|(&v, &inside)| v >= if inside { s } else { 0.0 }),
            Err(_) => false,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Minimum over interior nodes (strict positivity checks).
    pub fn interior_min(&self) -> f64 {
        self.domain
            .interior_indices()
            .map(|i| self.values[i])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_zero_on_boundary(&self) -> bool {
        (0..self.values.len()).all(|i| !self.domain.is_boundary(i) || self.values[i] == 0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        GridFunction {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> Self {
        GridFunction {
            domain: self.domain.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// `(1 - t)·self + t·other`.
    pub fn lerp(&self, other: &GridFunction, t: f64) -> Self {
        GridFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        }
    }

    /// `max_x |self - other|`.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Nodewise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            domain: self.domain.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `self ≤ other` nodewise, up to `tol` slack.
    pub fn le_nodewise(&self, other: &GridFunction, tol: f64) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| *a <= *b + tol)
    }

    /// One row per node: coordinates then value, with a header row.
    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        if self.domain.dim() == 1 {
            writeln!(w, "x,value")?;
            for i in 0..self.values.len() {
                let (x, _) = self.domain.coords(i);
                writeln!(w, "{:.16e},{:.16e}", x, self.values[i])?;
            }
        } else {
            writeln!(w, "x,y,value")?;
            for i in 0..self.values.len() {
                let (x, y) = self.domain.coords(i);
                writeln!(w, "{:.16e},{:.16e},{:.16e}", x, y, self.values[i])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_interval(n: usize) -> Arc<GridDomain> {
        GridDomain::interval(1.0, n, AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75))
            .unwrap()
    }

    #[test]
    fn interval_snapping_inward() {
        let d = unit_interval(9); // h = 1/8, D = nodes 2..=6
        let idx: Vec<usize> = d.cone_d1().indices().collect();
        assert_eq!(idx, vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn sup_norm_zero_and_constant() {
        let d = unit_interval(17);
        assert_eq!(GridFunction::zero(d.clone()).sup_norm(), 0.0);
        assert_eq!(GridFunction::constant(d, 3.5).sup_norm(), 3.5);
    }

    #[test]
    fn sup_norm_parabola() {
        // u(x) = x(1-x)/2 has max 0.125 at x = 1/2; with n = 1025 the
        // maximizer is a node, so the nodal max is exact.
        let d = unit_interval(1025);
        let u = GridFunction::from_fn(d, |x, _| x * (1.0 - x) / 2.0);
        let h = 1.0 / 1024.0;
        assert!((u.sup_norm() - 0.125).abs() <= h * h);
    }

    #[test]
    fn seminorm_constant_and_indicator() {
        let d = unit_interval(33);
        let one = GridFunction::constant(d.clone(), 1.0);
        let cone = d.cone_d1();
        assert_eq!(one.seminorm(&cone).unwrap(), 1.0);
        let chi = cone.indicator();
        assert_eq!(chi.seminorm(&cone).unwrap(), 1.0);
        assert_eq!(chi.sup_norm(), 1.0);
    }

    #[test]
    fn seminorm_parabola_min_on_d() {
        // min over [0.25, 0.75] of x(1-x)/2 is attained at x = 0.25:
        // 0.25 * 0.75 / 2 = 0.09375. With n = 1025 the endpoint is a node.
        let d = unit_interval(1025);
        let u = GridFunction::from_fn(d.clone(), |x, _| x * (1.0 - x) / 2.0);
        let s = u.seminorm(&d.cone_d1()).unwrap();
        assert!((s - 0.09375).abs() < 1e-12);
    }

    #[test]
    fn seminorm_rejects_negative() {
        let d = unit_interval(9);
        let u = GridFunction::from_fn(d.clone(), |x, _| x - 0.5);
        assert!(matches!(u.seminorm(&d.cone_d1()), Err(GridError::NegativeValue { .. })));
    }

    #[test]
    fn cone_membership_holds_on_nonnegative() {
        let d = unit_interval(33);
        let cone = d.cone_d1();
        assert!(GridFunction::zero(d.clone()).cone_membership(&cone));
        assert!(cone.indicator().cone_membership(&cone));
        let u = GridFunction::from_fn(d, |x, _| x * (1.0 - x));
        assert!(u.cone_membership(&cone));
    }

    #[test]
    fn empty_subset_is_construction_error() {
        let r = GridDomain::interval(
            1.0,
            9,
            AxisRange::Coords(0.49, 0.51), // no node strictly inside
            AxisRange::Coords(0.25, 0.75),
        );
        // h = 1/8: 0.49/h = 3.92 -> ceil 4; 0.51/h = 4.08 -> floor 4. Node 4
        // survives, so tighten further to force emptiness.
        let _ = r; // the above snaps to the single node 4, still nonempty
        let r2 = GridDomain::interval(
            1.0,
            9,
            AxisRange::Coords(0.51, 0.55),
            AxisRange::Coords(0.25, 0.75),
        );
        assert!(r2.is_err());
    }

    #[test]
    fn subset_near_boundary_rejected() {
        let r = GridDomain::interval(1.0, 9, AxisRange::Indices(1, 3), AxisRange::Indices(3, 5));
        assert!(matches!(r, Err(GridError::SubsetTouchesBoundary { .. })));
    }

    #[test]
    fn rectangle_basics() {
        let d = GridDomain::rectangle(
            1.0,
            1.0,
            9,
            9,
            (AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75)),
            (AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75)),
        )
        .unwrap();
        assert_eq!(d.num_nodes(), 81);
        assert_eq!(d.dim(), 2);
        assert!(d.is_boundary(0));
        assert!(!d.is_boundary(4 * 9 + 4));
        let (x, y) = d.coords(4 * 9 + 4);
        assert!((x - 0.5).abs() < 1e-15 && (y - 0.5).abs() < 1e-15);
    }

    #[test]
    fn csv_round_shape() {
        let d = unit_interval(9);
        let u = GridFunction::from_fn(d, |x, _| x);
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], "x,value");
    }
}
