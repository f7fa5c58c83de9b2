//! End-to-end checks of the command surface: exit codes, output files,
//! manifest completeness and byte-identical reruns.

use std::fs;
use std::path::{Path, PathBuf};

use conecert_cli::{run, Cli, Command};

fn spec_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conecert-test-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    fs::create_dir_all(dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn constants_demo_exit_zero_and_values() {
    let out = tmp_dir("constants");
    let code = run(Cli {
        command: Command::Constants {
            spec: spec_path("demo_constant16.toml"),
            out: out.clone(),
            canonical: true,
        },
    });
    assert_eq!(code, 0);
    let text = fs::read_to_string(out.join("constants.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let a_p = json["a_p"].as_f64().unwrap();
    let b1_p = json["b1_p"].as_f64().unwrap();
    assert!((a_p - 8.0).abs() < 1e-3, "A_2 = {a_p}");
    assert!((b1_p - 16.0).abs() < 0.05, "B_1,2 = {b1_p}");
}

#[test]
fn spec_error_missing_d1_exits_two() {
    let dir = tmp_dir("missing-d1");
    let spec = write_spec(
        &dir,
        "broken.toml",
        r#"
[domain]
kind = "interval"
length = 1.0
nodes = 65
d2 = { x = [0.25, 0.75] }

[exponents]
p = 2.0
q = 2.0

[nonlinearities]
f = "16"
g = "16"

[radii]
r1 = 0.5
r2 = 0.5
R1 = 2.0
R2 = 2.0
"#,
    );
    let code = run(Cli {
        command: Command::Constants { spec, out: dir.join("out"), canonical: true },
    });
    assert_eq!(code, 2);
}

#[test]
fn exponent_below_bound_exits_two() {
    let dir = tmp_dir("bad-p");
    let spec = write_spec(
        &dir,
        "badp.toml",
        r#"
[domain]
kind = "interval"
length = 1.0
nodes = 65
d1 = { x = [0.25, 0.75] }
d2 = { x = [0.25, 0.75] }

[exponents]
p = 1.0
q = 2.0

[nonlinearities]
f = "16"
g = "16"

[radii]
r1 = 0.5
r2 = 0.5
R1 = 2.0
R2 = 2.0
"#,
    );
    let code = run(Cli {
        command: Command::Constants { spec, out: dir.join("out"), canonical: true },
    });
    assert_eq!(code, 2);
}

#[test]
fn certify_zero_f_exits_one_and_names_condition() {
    let dir = tmp_dir("zero-f");
    let spec = write_spec(
        &dir,
        "zero.toml",
        r#"
[domain]
kind = "interval"
length = 1.0
nodes = 257
d1 = { x = [0.25, 0.75] }
d2 = { x = [0.25, 0.75] }

[exponents]
p = 2.0
q = 2.0

[nonlinearities]
f = "0"
g = "0"

[radii]
r1 = 0.5
r2 = 0.5
R1 = 2.0
R2 = 2.0
"#,
    );
    let out = dir.join("out");
    let code = run(Cli {
        command: Command::Certify {
            spec,
            theorem: "existence".into(),
            resolution: None,
            out: out.clone(),
            canonical: true,
        },
    });
    assert_eq!(code, 1);
    let text = fs::read_to_string(out.join("certificate_existence.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let failing: Vec<&str> = json["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| !c["verdict"].as_bool().unwrap())
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"ind0-f"), "failing: {failing:?}");
}

#[test]
fn manifest_lists_every_output_file() {
    let out = tmp_dir("manifest");
    let code = run(Cli {
        command: Command::Solve {
            spec: spec_path("demo_constant16.toml"),
            out: out.clone(),
            seed: 7,
            canonical: true,
        },
    });
    assert_eq!(code, 0);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let listed: Vec<String> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let mut on_disk: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    on_disk.sort();
    let mut listed_sorted = listed.clone();
    listed_sorted.sort();
    assert_eq!(on_disk, listed_sorted, "manifest must list every file in the output dir");
}

#[test]
fn canonical_reruns_are_byte_identical() {
    let out = tmp_dir("repro");
    let run_once = || {
        let _ = fs::remove_dir_all(&out);
        let code = run(Cli {
            command: Command::Solve {
                spec: spec_path("demo_constant16.toml"),
                out: out.clone(),
                seed: 42,
                canonical: true,
            },
        });
        assert_eq!(code, 0);
        let mut snapshot = Vec::new();
        let mut names: Vec<_> = fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        names.sort();
        for p in names {
            snapshot.push((p.file_name().unwrap().to_owned(), fs::read(&p).unwrap()));
        }
        snapshot
    };
    let first = run_once();
    let second = run_once();
    assert_eq!(first.len(), second.len());
    for ((n1, b1), (n2, b2)) in first.iter().zip(&second) {
        assert_eq!(n1, n2);
        assert_eq!(b1, b2, "file {n1:?} differs between reruns");
    }
}

#[test]
fn lab_fixture_confirms() {
    let out = tmp_dir("lab");
    let code = run(Cli {
        command: Command::Lab {
            spec: spec_path("lab_sqrt.toml"),
            resolution: 16,
            out: out.clone(),
            canonical: true,
        },
    });
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("lab_report.json")).unwrap()).unwrap();
    assert_eq!(report["confirmed"], serde_json::Value::Bool(true));
    // the golden-ratio fixed point shows up in the listing
    let golden_sq = (0.5 * (1.0 + 5.0_f64.sqrt())).powi(2);
    let found = report["fixed_points"].as_array().unwrap().iter().any(|fp| {
        (fp["sup_u"].as_f64().unwrap() - golden_sq).abs() < 1e-9
    });
    assert!(found);
}

#[test]
fn example_rejects_bad_envelope() {
    let out = tmp_dir("example-bad");
    let code = run(Cli {
        command: Command::Example {
            a: 2.0,
            b: 1.0, // a > b
            c: 1.0,
            d: 1.0,
            nodes: 65,
            r2: 0.1,
            out,
            seed: 7,
            canonical: true,
        },
    });
    assert_eq!(code, 2);
}

#[test]
fn solve_writes_csv_fields() {
    let out = tmp_dir("solve-csv");
    let code = run(Cli {
        command: Command::Solve {
            spec: spec_path("demo_constant16.toml"),
            out: out.clone(),
            seed: 7,
            canonical: true,
        },
    });
    assert_eq!(code, 0);
    let u_csv = fs::read_to_string(out.join("u_0.csv")).unwrap();
    let mut lines = u_csv.lines();
    assert_eq!(lines.next().unwrap(), "x,value");
    // node count from the demo spec
    assert_eq!(u_csv.lines().count(), 1 + 1025);
}
