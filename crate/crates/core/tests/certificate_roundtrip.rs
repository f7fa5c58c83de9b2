//! Integration: certificates that PASS must be backed by computable fixed
//! points satisfying the promised localization, and sampled certificate
//! verdicts must refine monotonically with resolution.

use std::sync::Arc;

use conecert::certify::{
    certify_existence, certify_three_solutions, Monotonicity, ProblemSpec, Radii,
};
use conecert::cone_consts::compute_constants;
use conecert::expr::Expr;
use conecert::fixpoint::{check_localization, multiplicity_search, FixpointConfig};
use conecert::grid::{AxisRange, GridDomain};
use conecert::plap::SolverConfig;

fn demo_domain(n: usize) -> Arc<GridDomain> {
    GridDomain::interval(1.0, n, AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75))
        .unwrap()
}

/// Specs that pass the existence certificate yield at least one iterated
/// solution inside the promised localization window.
#[test]
fn passing_certificates_are_backed_by_solutions() {
    let domain = demo_domain(513);
    let consts = compute_constants(&domain, 2.0, 2.0, &SolverConfig::new(2.0)).unwrap();
    let scfg = SolverConfig::new(2.0);
    let fcfg = FixpointConfig::default();

    let cases: Vec<(&str, &str, (f64, f64), (f64, f64))> = vec![
        ("16", "16", (0.5, 0.5), (2.0, 2.0)),
        // isotone pair with different scales per component
        ("min(u,8)+10", "min(v,4)+12", (0.5, 0.5), (4.0, 4.0)),
        // coupled: each component feeds on the other, bounded
        ("10 + atan(v)", "10 + atan(u)", (0.5, 0.5), (2.0, 2.0)),
    ];
    for (f_src, g_src, r, big_r) in cases {
        let mut spec = ProblemSpec::new(
            domain.clone(),
            2.0,
            2.0,
            Expr::parse(f_src).unwrap(),
            Expr::parse(g_src).unwrap(),
            Radii::basic(r, big_r),
        );
        spec.mono_f = (Monotonicity::Increasing, Monotonicity::Increasing);
        spec.mono_g = (Monotonicity::Increasing, Monotonicity::Increasing);
        let report = certify_existence(&spec, &consts).unwrap();
        assert!(report.overall, "certificate failed for f={f_src}: {:#?}", report.conditions);

        let search = multiplicity_search(&spec, &scfg, &fcfg);
        let hit = search
            .records
            .iter()
            .any(|rec| check_localization(rec, &spec, &fcfg).all_hold);
        assert!(hit, "no record satisfies the localization for f={f_src}");
    }
}

/// Refining the sampling resolution never flips a failed minimum condition
/// to PASS (nested grids only deepen minima); dually for maxima.
#[test]
fn resolution_refinement_is_monotone_on_verdicts() {
    let domain = demo_domain(257);
    let consts = compute_constants(&domain, 2.0, 2.0, &SolverConfig::new(2.0)).unwrap();
    // a bump nonlinearity whose minimum over the box straddles the
    // threshold: sampled coarsely it may look larger than it is
    let mut spec = ProblemSpec::new(
        domain.clone(),
        2.0,
        2.0,
        Expr::parse("8.2 - 8*exp(-200*(u-1.3)^2)").unwrap(),
        Expr::parse("16").unwrap(),
        Radii::basic((0.5, 0.5), (2.0, 2.0)),
    );
    let mut last_fmin_margin = f64::INFINITY;
    for k in [5usize, 9, 17, 33] {
        spec.resolution = k;
        let report = certify_existence(&spec, &consts).unwrap();
        let ind0 = report.conditions.iter().find(|c| c.id == "ind0-f").unwrap();
        // nested refinement: the sampled minimum can only decrease
        assert!(ind0.margin <= last_fmin_margin + 1e-12);
        last_fmin_margin = ind0.margin;
    }
}

/// The three-solution certificate of a scaled bump problem stays backed by
/// at least the inner and outer solutions through the fixed-point search.
#[test]
fn three_solution_certificate_roundtrip() {
    let domain = demo_domain(257);
    let consts = compute_constants(&domain, 2.0, 2.0, &SolverConfig::new(2.0)).unwrap();
    // lambda large enough that the scenario-type conditions hold
    let lam = 400.0;
    let mut radii = Radii::basic((1.0 / (lam / 24.0f64).sqrt(), 0.1), (lam / 24.0, lam * 0.3084));
    radii.rho = Some((0.02, 0.02));
    let mut spec = ProblemSpec::new(
        domain.clone(),
        2.0,
        2.0,
        Expr::parse("u^2/(4+u^3)").unwrap(),
        Expr::parse("atan(v)^2").unwrap(),
        radii,
    );
    spec.lambda = lam;
    spec.mono_g = (Monotonicity::Increasing, Monotonicity::Increasing);
    spec.resolution = 65;
    let report = certify_three_solutions(&spec, &consts).unwrap();
    assert!(report.overall, "{:#?}", report.conditions);

    let search = multiplicity_search(&spec, &SolverConfig::new(2.0), &FixpointConfig::default());
    assert!(search.region_counts.0 >= 1, "inner region empty");
    assert!(search.region_counts.2 >= 1, "outer region empty");
    let nontrivial = search.nontrivial(&FixpointConfig::default());
    assert!(nontrivial.len() >= 2, "expected at least two nontrivial records");
}
