//! Acceptance suite: the release gate for the toolkit. One test per
//! criterion, each printing a PASS line with the measured quantities, every
//! tolerance pinned in code.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use conecert::abstract_lab::{
    brute_force_fixed_points, validate_n_solutions, validate_theorem, LabError, LabOperator,
    LabRadii, TheoremId,
};
use conecert::certify::{certify_nonexistence, ProblemSpec, Radii};
use conecert::cone_consts::compute_constants;
use conecert::expr::{Env, Expr};
use conecert::fixpoint::{picard, FixpointConfig};
use conecert::grid::{AxisRange, GridDomain, GridFunction};
use conecert::plap::{first_eigenvalue, solve, SolverConfig};

use conecert_cli::{run, Cli, Command};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn interval(n: usize) -> Arc<GridDomain> {
    GridDomain::interval(1.0, n, AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75))
        .unwrap()
}

fn spec_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn out_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conecert-accept-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn acceptance_01_torsion_oracle() {
    // |S₂(1)| = 1/8 (parabola x(1-x)/2); |S₃(1)| = (2/3)(1/2)^{3/2}
    let d = interval(1025);
    let one = GridFunction::constant(d.clone(), 1.0);

    let t0 = Instant::now();
    let u2 = solve(&one, &SolverConfig::new(2.0)).unwrap();
    let t2 = t0.elapsed();
    let err2 = (u2.sup_norm() - 0.125).abs();
    assert!(err2 < 1e-5, "p=2 torsion max error {err2:.3e}");
    assert!(t2.as_secs_f64() < 1.0, "p=2 took {t2:?}");

    let t0 = Instant::now();
    let u3 = solve(&one, &SolverConfig::new(3.0)).unwrap();
    let t3 = t0.elapsed();
    let exact3 = (2.0 / 3.0) * 0.5_f64.powf(1.5);
    let err3 = (u3.sup_norm() - exact3).abs();
    assert!(err3 < 1e-3, "p=3 torsion max error {err3:.3e}");
    assert!(t3.as_secs_f64() < 1.0, "p=3 took {t3:?}");

    println!(
        "ACCEPTANCE 01 PASS — torsion: |S2(1)|=0.125±{err2:.1e} in {t2:?}, |S3(1)|={exact3:.5}±{err3:.1e} in {t3:?}"
    );
}

#[test]
fn acceptance_02_eigenvalue_oracle() {
    let t0 = Instant::now();
    let d1 = interval(1025);
    let e1 = first_eigenvalue(2.0, &d1, &SolverConfig::new(2.0)).unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    let err1 = (e1.lambda - pi2).abs();
    assert!(err1 < 1e-3, "1D eigenvalue error {err1:.3e}");

    let d2 = GridDomain::rectangle(
        1.0,
        1.0,
        129,
        129,
        (AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75)),
        (AxisRange::Coords(0.25, 0.75), AxisRange::Coords(0.25, 0.75)),
    )
    .unwrap();
    let e2 = first_eigenvalue(2.0, &d2, &SolverConfig::new(2.0)).unwrap();
    let err2 = (e2.lambda - 2.0 * pi2).abs();
    assert!(err2 < 1e-2, "2D eigenvalue error {err2:.3e}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "eigen oracles took {elapsed:?}");

    println!(
        "ACCEPTANCE 02 PASS — λ_1,2[0,1]={:.6} (err {err1:.1e}), λ_1,2[0,1]²={:.6} (err {err2:.1e}) in {elapsed:?}",
        e1.lambda, e2.lambda
    );
}

#[test]
fn acceptance_03_proposition_sandwich() {
    let t0 = Instant::now();
    let mut lines = Vec::new();
    // p = 2 pinned to the closed forms on a fine grid; the indicator
    // constant converges first-order, so n = 4097 brings it within 1e-2
    let d_fine = interval(4097);
    let c2 = compute_constants(&d_fine, 2.0, 2.0, &SolverConfig::new(2.0)).unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    let combined = (c2.a_p - 8.0).abs().max((c2.lambda1_p - pi2).abs()).max((c2.b1_p - 16.0).abs());
    assert!(combined < 1e-2, "p=2 triple deviates by {combined:.3e}");
    assert!(c2.a_p <= c2.lambda1_p && c2.lambda1_p <= c2.b1_p);
    lines.push(format!(
        "p=2: A={:.4} ≤ λ={:.4} ≤ B={:.4} (closed forms 8, π², 16 within {combined:.1e})",
        c2.a_p, c2.lambda1_p, c2.b1_p
    ));

    let d = interval(1025);
    for p in [1.5, 3.0, 4.0] {
        let cfg = SolverConfig::new(p).with_tolerance(1e-8);
        let c = compute_constants(&d, p, p, &cfg).unwrap();
        assert!(
            c.a_p <= c.lambda1_p && c.lambda1_p <= c.b1_p,
            "sandwich violated at p={p}: {} / {} / {}",
            c.a_p,
            c.lambda1_p,
            c.b1_p
        );
        lines.push(format!(
            "p={p}: A={:.4} ≤ λ={:.4} ≤ B={:.4} (margins {:.3}, {:.3})",
            c.a_p,
            c.lambda1_p,
            c.b1_p,
            c.lambda1_p - c.a_p,
            c.b1_p - c.lambda1_p
        ));
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "sandwich suite took {elapsed:?}");
    println!("ACCEPTANCE 03 PASS — {} in {elapsed:?}", lines.join("; "));
}

#[test]
fn acceptance_04_operator_property_suite() {
    let t0 = Instant::now();
    let d = interval(257);
    let v = GridFunction::from_fn(d.clone(), |x, _| 1.0 + x);

    // homogeneity of degree 1/(p-1): S(c^{p-1} v) = c S(v)
    for p in [1.5, 2.0, 3.0] {
        let cfg = SolverConfig::new(p).with_tolerance(1e-8);
        let c = 2.7f64;
        let lhs = solve(&v.scale(c.powf(p - 1.0)), &cfg).unwrap();
        let rhs = solve(&v, &cfg).unwrap().scale(c);
        let gap = lhs.sup_distance(&rhs);
        assert!(gap < 10.0 * cfg.tolerance, "homogeneity gap {gap:.3e} at p={p}");
    }

    // isotonicity on 50 random ordered pairs (v ≤ w nodewise)
    let d_small = interval(129);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pairs_checked = 0;
    for p in [1.5, 2.0, 3.0] {
        let cfg = SolverConfig::new(p).with_tolerance(1e-9);
        for _ in 0..17 {
            let a = GridFunction::from_fn(d_small.clone(), |_, _| rng.gen_range(0.0..1.0));
            let extra = GridFunction::from_fn(d_small.clone(), |_, _| rng.gen_range(0.0..1.0));
            let b = a.add(&extra);
            let ua = solve(&a, &cfg).unwrap();
            let ub = solve(&b, &cfg).unwrap();
            assert!(
                ua.le_nodewise(&ub, 10.0 * cfg.tolerance),
                "isotonicity violated at p={p}"
            );
            pairs_checked += 1;
        }
    }
    assert!(pairs_checked >= 50);

    // p = 2 linearity
    let cfg = SolverConfig::new(2.0);
    let v1 = GridFunction::from_fn(d.clone(), |x, _| x);
    let v2 = GridFunction::from_fn(d.clone(), |x, _| (3.0 * x).sin().abs());
    let lhs = solve(&v1.add(&v2), &cfg).unwrap();
    let rhs = solve(&v1, &cfg).unwrap().add(&solve(&v2, &cfg).unwrap());
    let lin_gap = lhs.sup_distance(&rhs);
    assert!(lin_gap < 10.0 * cfg.tolerance, "linearity gap {lin_gap:.3e}");

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "property suite took {elapsed:?}");
    println!(
        "ACCEPTANCE 04 PASS — homogeneity (p ∈ {{1.5,2,3}}), isotonicity on {pairs_checked} ordered pairs, p=2 linearity gap {lin_gap:.1e} in {elapsed:?}"
    );
}

#[test]
fn acceptance_05_certificate_solution_roundtrip() {
    let t0 = Instant::now();
    // certificate first
    let out_c = out_dir("05-cert");
    let code = run(Cli {
        command: Command::Certify {
            spec: spec_path("demo_constant16.toml"),
            theorem: "existence".into(),
            resolution: None,
            out: out_c.clone(),
            canonical: true,
        },
    });
    assert_eq!(code, 0, "existence certificate must pass");

    // then the solve pipeline
    let out_s = out_dir("05-solve");
    let code = run(Cli {
        command: Command::Solve {
            spec: spec_path("demo_constant16.toml"),
            out: out_s.clone(),
            seed: 7,
            canonical: true,
        },
    });
    assert_eq!(code, 0);
    let sol: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_s.join("solution_0.json")).unwrap()).unwrap();
    let sup_u = sol["summary"]["sup_u"].as_f64().unwrap();
    let semi_u = sol["summary"]["semi_u"].as_f64().unwrap();
    assert!((sup_u - 2.0).abs() < 1e-3, "|u| = {sup_u}");
    assert!((semi_u - 1.5).abs() < 1e-3, "‖u‖ = {semi_u}");
    assert_eq!(sol["localization"]["all_hold"], serde_json::Value::Bool(true));
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "roundtrip took {elapsed:?}");
    println!(
        "ACCEPTANCE 05 PASS — demo certifies and solves: |u|={sup_u:.6} (±1e-3 of 2), ‖u‖={semi_u:.6} (±1e-3 of 1.5), localization holds, in {elapsed:?}"
    );
}

#[test]
fn acceptance_06_scenario_two_solutions() {
    let t0 = Instant::now();
    let out = out_dir("06-example");
    let code = run(Cli {
        command: Command::Example {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            d: 1.0,
            nodes: 257,
            r2: 0.1,
            out: out.clone(),
            seed: 7,
            canonical: true,
        },
    });
    assert_eq!(code, 0, "scenario pipeline must succeed end to end");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("example_report.json")).unwrap())
            .unwrap();
    let lambda0 = report["lambda0"].as_f64().unwrap();
    assert!(lambda0.is_finite() && lambda0 > 0.0);
    assert_eq!(report["below_threshold_fails"], serde_json::Value::Bool(true));
    let final_run = &report["runs"][1];
    assert!((final_run["lambda"].as_f64().unwrap() - 2.0 * lambda0).abs() < 1e-6 * lambda0);
    assert_eq!(final_run["certificate_overall"], serde_json::Value::Bool(true));
    let nontrivial = final_run["nontrivial"].as_u64().unwrap();
    assert!(nontrivial >= 2, "nontrivial = {nontrivial}");
    assert_eq!(final_run["outer_found"], serde_json::Value::Bool(true));
    let r1 = final_run["r"][0].as_f64().unwrap();
    let r2 = final_run["r"][1].as_f64().unwrap();

    // inspect the persisted records: residuals and interior positivity
    let mut outer_seen = false;
    let mut records = 0;
    for k in 0.. {
        let path = out.join(format!("solution_{k}.json"));
        if !path.exists() {
            break;
        }
        records += 1;
        let sol: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let sup_u = sol["summary"]["sup_u"].as_f64().unwrap();
        let sup_v = sol["summary"]["sup_v"].as_f64().unwrap();
        let semi_u = sol["summary"]["semi_u"].as_f64().unwrap();
        let semi_v = sol["summary"]["semi_v"].as_f64().unwrap();
        let residual = sol["summary"]["residual"].as_f64().unwrap();
        let nontrivial_rec = sup_u >= 1e-8 || sup_v >= 1e-8;
        if nontrivial_rec {
            assert!(residual < 1e-8, "solution {k} residual {residual:.3e}");
            // strictly positive interior values of every nonzero component
            for item in sol["localization"]["items"].as_array().unwrap() {
                let check = item["check"].as_str().unwrap();
                if check.starts_with("interior positivity") {
                    assert_eq!(item["holds"], serde_json::Value::Bool(true), "{check} fails");
                }
            }
        }
        if semi_u > r1 && semi_v > r2 {
            outer_seen = true;
        }
    }
    assert!(records >= 2);
    assert!(outer_seen, "need a solution with ‖u‖ > r1(λ) and ‖v‖ > r2");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "scenario took {elapsed:?}");
    println!(
        "ACCEPTANCE 06 PASS — λ0={lambda0:.4e}; at 2λ0 certificate passes, {nontrivial} nontrivial solutions, outer localization hit, residuals < 1e-8, in {elapsed:?}"
    );
}

#[test]
fn acceptance_07_abstract_lab_soundness() {
    let t0 = Instant::now();

    fn ramp(t: f64) -> f64 {
        let pts = [(0.0, 0.0), (0.1, 0.05), (1.0, 1.5), (4.0, 4.5), (9.0, 6.0)];
        if t >= 9.0 {
            return 6.0;
        }
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if t <= x1 {
                return y0 + (t - x0) * (y1 - y0) / (x1 - x0);
            }
        }
        6.0
    }

    // fixture set: constant, zero, sqrt-type, three-solution isotone ramp,
    // one-sided constant, homogeneous contraction, 3-dimensional sqrt
    let fixtures: Vec<(LabOperator, LabRadii, TheoremId)> = vec![
        (
            LabOperator::constant("constant", vec![3.0], vec![3.0]),
            LabRadii::basic((1.0, 1.0), (3.0, 3.0)),
            TheoremId::Abstr1,
        ),
        (
            LabOperator::constant("zero", vec![0.0], vec![0.0]),
            LabRadii::basic((1.0, 1.0), (3.0, 3.0)),
            TheoremId::Abstr1,
        ),
        (
            LabOperator::from_fn("sqrt", 1, 1, |u, v| {
                (vec![u[0].max(0.0).sqrt() + 1.0], vec![v[0].max(0.0).sqrt() + 1.0])
            })
            .with_isotone(true),
            LabRadii::basic((1.0, 1.0), (9.0, 9.0)),
            TheoremId::Abstr1Prime,
        ),
        (
            LabOperator::from_fn("ramp", 1, 1, |u, v| (vec![ramp(u[0])], vec![ramp(v[0])]))
                .with_isotone(true),
            LabRadii::basic((1.0, 1.0), (9.0, 9.0)).with_rho((0.1, 0.1)),
            TheoremId::Abstr3SolsPrime,
        ),
        (
            LabOperator::constant("one-sided", vec![1.5], vec![0.0]),
            LabRadii::basic((1.0, 1.0), (3.0, 3.0)),
            TheoremId::Abstr1OrA,
        ),
        (
            LabOperator::from_fn("half", 1, 1, |u, v| (vec![0.5 * u[0]], vec![0.5 * v[0]]))
                .with_homogeneous(true),
            LabRadii::basic((0.5, 0.5), (2.0, 2.0)).with_rho((0.2, 0.2)),
            TheoremId::Abstr3Sols,
        ),
        (
            LabOperator::from_fn("sqrt-3d", 2, 1, |u, v| {
                (
                    vec![u[0].max(0.0).sqrt() + 1.0, u[1].max(0.0).sqrt() + 1.0],
                    vec![v[0].max(0.0).sqrt() + 1.0],
                )
            })
            .with_isotone(true),
            LabRadii::basic((1.0, 1.0), (9.0, 9.0)),
            TheoremId::Retr2Prime,
        ),
    ];

    let mut passes = 0;
    let mut refusals = 0;
    for (op, radii, thm) in &fixtures {
        match validate_theorem(*thm, op, radii, 20) {
            Ok((entries, verdict)) => {
                assert!(entries.iter().all(|e| e.verdict));
                assert!(
                    verdict.confirmed(),
                    "{} hypothesis PASS but conclusion not exhibited: {}",
                    op.name,
                    verdict.note()
                );
                passes += 1;
            }
            Err(LabError::HypothesisFailed(_)) => {
                // a failing hypothesis set must refuse to validate
                refusals += 1;
            }
            Err(e) => panic!("unexpected lab error for {}: {e}", op.name),
        }
    }
    assert!(passes >= 5, "expected most fixtures to validate, got {passes}");
    assert!(refusals >= 1, "the zero operator must be refused");

    // ladder fixture: staircase with two rungs
    let stair = LabOperator::from_fn("staircase", 1, 1, |u, v| {
        let s = |t: f64| (2.0 * t - 3.0).clamp(1.0, 5.0);
        (vec![s(u[0])], vec![s(v[0])])
    })
    .with_isotone(true);
    let rungs = [LabRadii::basic((0.5, 0.5), (2.0, 2.0)), LabRadii::basic((3.0, 3.0), (9.0, 9.0))];
    let (entries, verdict) = validate_n_solutions(&stair, &rungs, 12).unwrap();
    assert!(entries.iter().all(|e| e.verdict));
    assert!(verdict.confirmed());

    // golden-ratio oracle at 1e-10
    let sqrt_op = LabOperator::from_fn("sqrt", 1, 1, |u, v| {
        (vec![u[0].max(0.0).sqrt() + 1.0], vec![v[0].max(0.0).sqrt() + 1.0])
    });
    let fps = brute_force_fixed_points(&sqrt_op, (9.0, 9.0), 24, 1e-12);
    let golden_sq = (0.5 * (1.0 + 5.0_f64.sqrt())).powi(2);
    let best = fps
        .iter()
        .map(|fp| (fp.sup_u() - golden_sq).abs())
        .fold(f64::INFINITY, f64::min);
    assert!(best < 1e-10, "golden-ratio deviation {best:.3e}");

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "lab suite took {elapsed:?}");
    println!(
        "ACCEPTANCE 07 PASS — {passes} hypothesis-passing fixtures all CONFIRMED (+{refusals} refusals), 2-rung ladder confirmed, golden ratio within {best:.1e}, in {elapsed:?}"
    );
}

#[test]
fn acceptance_08_nonexistence_suite() {
    let t0 = Instant::now();
    let domain = interval(513);
    let consts = compute_constants(&domain, 2.0, 2.0, &SolverConfig::new(2.0)).unwrap();

    // superlinear g: 20v > λ_1 v on the sampled box (20 > π²)
    let mut spec = ProblemSpec::new(
        domain.clone(),
        2.0,
        2.0,
        Expr::parse("0.5*9.8696*u").unwrap(),
        Expr::parse("20*v").unwrap(),
        Radii::basic((0.5, 0.5), (2.0, 2.0)),
    );
    let report = certify_nonexistence(&spec, &consts, (0.0, 10.0), (0.0, 10.0)).unwrap();
    let ne2p = report.conditions.iter().find(|c| c.id == "ne2'").unwrap();
    assert!(ne2p.verdict, "ne2' margin {}", ne2p.margin);
    let ne1 = report.conditions.iter().find(|c| c.id == "ne1").unwrap();
    assert!(ne1.verdict, "ne1 margin {}", ne1.margin);

    // constructive support: Picard from 20 random seeds drives the
    // u-component to zero for the sublinear f
    spec.g = Expr::parse("0").unwrap();
    let scfg = SolverConfig::new(2.0);
    let fcfg = FixpointConfig { fp_tol: 1e-10, max_iters: 2000, ..FixpointConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut max_final_u: f64 = 0.0;
    for k in 0..20 {
        let amp: f64 = rng.gen_range(0.1..5.0);
        let seed_u = GridFunction::from_fn(domain.clone(), |_, _| rng.gen_range(0.0..amp));
        let seed_u = GridFunction::new(
            domain.clone(),
            (0..domain.num_nodes())
                .map(|i| if domain.is_boundary(i) { 0.0 } else { seed_u.value(i) })
                .collect(),
        )
        .unwrap();
        let seed_v = GridFunction::zero(domain.clone());
        let rec = picard((seed_u, seed_v), &format!("ne-{k}"), &spec, &scfg, &fcfg).unwrap();
        max_final_u = max_final_u.max(rec.sup_u);
    }
    assert!(max_final_u < 1e-6, "u-component did not vanish: {max_final_u:.3e}");

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "nonexistence suite took {elapsed:?}");
    println!(
        "ACCEPTANCE 08 PASS — ne1 and ne2' certified on [0,10]² (margins {:.2e}, {:.2e}); 20 Picard runs end with |u| ≤ {max_final_u:.2e}, in {elapsed:?}",
        ne1.margin, ne2p.margin
    );
}

#[test]
fn acceptance_09_grid_convergence() {
    // On node counts where x = 1/2 is a grid node the 3-point scheme
    // reproduces the quadratic torsion function exactly, so the rate is
    // measured on offset grids (cell counts 65..513) where the maximizer
    // falls mid-cell and the nodal max error is h²/8.
    let t0 = Instant::now();
    for n in [65usize, 129, 257, 513] {
        let d = interval(n);
        let u = solve(&GridFunction::constant(d, 1.0), &SolverConfig::new(2.0)).unwrap();
        let err = (u.sup_norm() - 0.125).abs();
        assert!(err < 1e-12, "nodal-exact case at n={n} has error {err:.3e}");
    }
    let mut errors = Vec::new();
    for n in [66usize, 130, 258, 514] {
        let d = interval(n);
        let u = solve(&GridFunction::constant(d, 1.0), &SolverConfig::new(2.0)).unwrap();
        errors.push((u.sup_norm() - 0.125).abs());
    }
    let mut orders = Vec::new();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2() / ((514.0f64 - 1.0) / (258.0 - 1.0)).log2().signum();
        orders.push(order);
        assert!(order >= 1.9, "observed order {order:.3}");
    }
    let elapsed = t0.elapsed();
    println!(
        "ACCEPTANCE 09 PASS — torsion max error exact (<1e-12) on aligned grids; observed orders {:?} ≥ 1.9 on offset grids, in {elapsed:?}",
        orders.iter().map(|o| (o * 100.0).round() / 100.0).collect::<Vec<_>>()
    );
}

#[test]
fn acceptance_10_parser_suite() {
    let t0 = Instant::now();
    // 100 randomized precedence / round-trip cases
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let a: f64 = rng.gen_range(-20.0..20.0);
        let b: f64 = rng.gen_range(-20.0..20.0);
        let c: f64 = rng.gen_range(-20.0..20.0);
        let env = Env::xuv(c, a, b);
        // precedence: product binds tighter than sum, power tighter than product
        let flat = Expr::parse("u + v * x ^ 2").unwrap().eval(&env).unwrap();
        let grouped = Expr::parse("u + (v * (x ^ 2))").unwrap().eval(&env).unwrap();
        assert_eq!(flat.to_bits(), grouped.to_bits());
        // round trip through the fully parenthesized rendering
        let e = Expr::parse("atan(u)^2 + min(v, 3) * abs(x - 1) - u^2/(4+u^3)").unwrap();
        let reparsed = Expr::parse(&e.to_string()).unwrap();
        assert_eq!(
            e.eval(&env).unwrap().to_bits(),
            reparsed.eval(&env).unwrap().to_bits()
        );
    }

    // catalog bounds on log-spaced samples
    let phi = Expr::parse("u^2/(4+u^3)").unwrap();
    let psi = Expr::parse("atan(v)^2").unwrap();
    let l1 = 1.0 / 3.0;
    let l2 = std::f64::consts::PI.powi(2) / 4.0;
    let mut t = 1e-9f64;
    let mut samples = 0;
    while t < 1e9 {
        assert!(phi.eval(&Env::xuv(0.0, t, 0.0)).unwrap() <= l1 + 1e-15);
        assert!(psi.eval(&Env::xuv(0.0, 0.0, t)).unwrap() <= l2 + 1e-15);
        t *= 1.45;
        samples += 1;
    }
    let elapsed = t0.elapsed();
    println!(
        "ACCEPTANCE 10 PASS — 100 precedence/round-trip cases; Φ ≤ 1/3 and Ψ ≤ π²/4 on {samples} log-spaced samples, in {elapsed:?}"
    );
}
