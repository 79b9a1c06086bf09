//! End-to-end runs of the binary: build/verify round trips, the sparse
//! census, recovery, the refutation report, and the demos.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ellify"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ellify-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn write_palindromic_grade6(dir: &PathBuf) -> PathBuf {
    // transpose-palindromic scalar grade-6 polynomial with distinct tags
    let coeffs: Vec<Vec<Vec<String>>> = (0..=6)
        .map(|j| {
            let v = if j <= 3 { j + 2 } else { 8 - j };
            vec![vec![v.to_string()]]
        })
        .collect();
    let dto = serde_json::json!({
        "rows": 1,
        "cols": 1,
        "grade": 6,
        "field": "rational",
        "coeffs": coeffs,
    });
    let path = dir.join("p.json");
    fs::write(&path, serde_json::to_string_pretty(&dto).unwrap()).unwrap();
    path
}

#[test]
fn build_then_verify_round_trip() {
    let dir = workdir("roundtrip");
    let p = write_palindromic_grade6(&dir);
    let l = dir.join("l.json");
    let out = run(bin()
        .args(["build", "--input"])
        .arg(&p)
        .args(["--structure", "palin", "--star", "t", "--ell", "2", "--plan", "stacked", "--out"])
        .arg(&l));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report = dir.join("report.json");
    let out = run(bin()
        .args(["verify", "--lification"])
        .arg(&l)
        .args(["--poly"])
        .arg(&p)
        .args(["--ell", "2", "--report"])
        .arg(&report));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["is_strong"], serde_json::Value::Bool(true));
    assert_eq!(report["s"], serde_json::json!(2));
    assert_eq!(report["structure_checks"]["p:t-palin"], serde_json::json!(true));
    assert_eq!(report["structure_checks"]["l:t-palin"], serde_json::json!(true));
}

#[test]
fn verify_fails_with_nonzero_exit_on_a_wrong_pair() {
    let dir = workdir("mismatch");
    let p = write_palindromic_grade6(&dir);
    let l = dir.join("l.json");
    run(bin()
        .args(["build", "--input"])
        .arg(&p)
        .args(["--structure", "palin", "--ell", "2", "--out"])
        .arg(&l));
    // verify against a different polynomial
    let q = dir.join("q.json");
    let dto = serde_json::json!({
        "rows": 1, "cols": 1, "grade": 2, "field": "rational",
        "coeffs": [[["1"]], [["1"]], [["1"]]],
    });
    fs::write(&q, serde_json::to_string(&dto).unwrap()).unwrap();
    let out = run(bin()
        .args(["verify", "--lification"])
        .arg(&l)
        .args(["--poly"])
        .arg(&q));
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn sparse_build_hits_the_family_minimum() {
    let dir = workdir("sparse");
    let p = write_palindromic_grade6(&dir);
    let out = run(bin()
        .args(["sparse", "--input"])
        .arg(&p)
        .args(["--structure", "palin", "--ell", "2"]));
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // d = 1: the family minimum 6d+1 = 7 is attained
    assert!(text.contains("nonzero blocks: 7"), "{text}");
}

#[test]
fn recover_reads_back_the_target() {
    use ellify::conditions::build_middle_block;
    use ellify::lification::symmetrize_for;
    use ellify::matpoly::StarFlavor;
    use ellify::plans::PlanRegistry;
    use ellify::structure::{StructureKind, StructureTag};

    let dir = workdir("recover");
    let p_path = write_palindromic_grade6(&dir);
    let p = ellify::json::matpoly_from_str(&fs::read_to_string(&p_path).unwrap()).unwrap();
    let tag = StructureTag::new(StructureKind::Palindromic, StarFlavor::Transpose);
    let plan = PlanRegistry::default().build("stacked", tag, 1, 2).unwrap();
    let middle = build_middle_block(&p, &plan, 1, 2).unwrap();
    let middle = symmetrize_for(&middle, tag, 6).unwrap();
    let m_path = dir.join("m.json");
    fs::write(&m_path, ellify::json::block_to_string(&middle)).unwrap();

    let out_path = dir.join("recovered.json");
    let out = run(bin()
        .args(["recover", "--input"])
        .arg(&m_path)
        .args(["--structure", "palin", "--out"])
        .arg(&out_path));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recovered =
        ellify::json::matpoly_from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(recovered, p);
}

#[test]
fn refute_quartic_writes_a_report() {
    let dir = workdir("refute");
    let report = dir.join("refute.json");
    let out = run(bin()
        .args([
            "refute-quartic",
            "--structure",
            "palin",
            "--star",
            "h",
            "--grid",
            "1,-1",
            "--report",
        ])
        .arg(&report));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["satisfying_count"], serde_json::json!(0));

    let out = run(bin().args([
        "refute-quartic",
        "--structure",
        "palin",
        "--star",
        "h",
        "--grid",
        "1,-1",
        "--allow-products",
    ]));
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.contains("satisfying templates: 0"), "{text}");
}

#[test]
fn mobius_subcommand_applies_named_and_explicit_matrices() {
    let dir = workdir("mobius");
    let p = dir.join("cubic.json");
    let dto = serde_json::json!({
        "rows": 1, "cols": 1, "grade": 3, "field": "rational",
        "coeffs": [[["1"]], [["2"]], [["2"]], [["1"]]],
    });
    fs::write(&p, serde_json::to_string(&dto).unwrap()).unwrap();
    let out_path = dir.join("image.json");
    let out = run(bin()
        .args(["mobius", "--input"])
        .arg(&p)
        .args(["--matrix", "cayley+1", "--out"])
        .arg(&out_path));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let image = ellify::json::matpoly_from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    // the constant coefficient of the transform is the coefficient sum
    assert_eq!(
        image.coeff(0).get(0, 0),
        &ellify::Scalar::from_int(6, ellify::Backend::Rational)
    );
    // the reversal matrix in explicit entry form
    let out = run(bin()
        .args(["mobius", "--input"])
        .arg(&p)
        .args(["--matrix", "0,1,1,0", "--out"])
        .arg(&out_path));
    assert!(out.status.success());
    let image = ellify::json::matpoly_from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(
        image.coeff(0).get(0, 0),
        &ellify::Scalar::from_int(1, ellify::Backend::Rational)
    );
    // singular explicit entries are a usage error
    let out = run(bin()
        .args(["mobius", "--input"])
        .arg(&p)
        .args(["--matrix", "1,1,1,1"]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn demo_exits_zero() {
    for which in ["examduplic", "quartic", "cayley"] {
        let out = run(bin().args(["demo", which]));
        assert!(
            out.status.success(),
            "{which}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(bin().args(["demo", "unknown-demo"]));
    assert_eq!(out.status.code(), Some(2));
    let out = run(bin().args([
        "refute-quartic",
        "--structure",
        "nosuch",
        "--grid",
        "1",
    ]));
    assert_eq!(out.status.code(), Some(2));
    // degenerate transpose class is refused as a usage error
    let out = run(bin().args([
        "refute-quartic",
        "--structure",
        "skew",
        "--star",
        "t",
        "--grid",
        "1,-1",
    ]));
    assert_eq!(out.status.code(), Some(2));
}
