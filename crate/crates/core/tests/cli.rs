use std::path::Path;
use std::process::{Command, Output};

const FUCHSIAN: &str =
    r#"{"ortho_end": [[-5,0],[-3,0],[-1,0],[1,0],[3,0],[5,0]], "angles": [0,0,0]}"#;

fn nsdc(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsdc"))
        .args(args)
        .arg("--input")
        .arg(input)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", FUCHSIAN);
    let out = nsdc(&["certify"], &good);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("C_B: center 4 + 0i radius 1"));

    let overlap = write(
        dir.path(),
        "overlap.json",
        r#"{"ortho_end": [[-1.5,0],[0.5,0],[-1,0],[1,0],[3,0],[5,0]], "angles": [0,0,0]}"#,
    );
    let out = nsdc(&["certify"], &overlap);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("C_A/C_D overlapping, margin -0.5"));

    let truncated = write(dir.path(), "truncated.json", &FUCHSIAN[..30]);
    let out = nsdc(&["certify"], &truncated);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let out = nsdc(&["certify"], &dir.path().join("missing.json"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn angle_and_tolerance_flags() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", FUCHSIAN);
    let out = nsdc(
        &["certify", "--angles", "0.1,-0.2,0.3", "--tol", "tan=1e-8"],
        &good,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("angles (0.1, -0.2, 0.3)"));
    let out = nsdc(&["certify", "--tol", "bogus=1"], &good);
    assert_eq!(out.status.code(), Some(1));
    let out = nsdc(&["certify", "--angles", "0,0"], &good);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn family_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", FUCHSIAN);
    let out = nsdc(&["family", "--moves", "0.5,1,0.2,-0.3,0.7,4"], &good);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("membership: true"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalized"));

    let out = nsdc(&["traces", "--moves", "0.4,0.9,0.7,-1.3,0.5,2.1"], &good);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("numerical rank: 6"));

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"ortho_end": [[-2,0],[2,0],[-1,0],[1,0],[3,0],[5,0]], "angles": [0,0,0]}"#,
    );
    let out = nsdc(&["family", "--moves", "0,0,0,0,0,0"], &bad);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", FUCHSIAN);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = nsdc(
            &["sweep", "--grid", "2", "--out", out.to_str().unwrap()],
            &good,
        );
        assert_eq!(o.status.code(), Some(0));
    }
    let first = std::fs::read_to_string(&a).unwrap();
    assert_eq!(first, std::fs::read_to_string(&b).unwrap());
    let mut lines = first.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d_a,tau_a,d,tau,d_b,tau_b,tr_a_re,tr_a_im,tr_b_re,tr_b_im,tr_abinv_re,tr_abinv_im,hex_vs_matrix_dev"
    );
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 64);
    for row in rows {
        let dev: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(dev < 1e-8);
    }

    let o = nsdc(
        &["sweep", "--grid", "2", "--out", "/nonexistent/dir/x.csv"],
        &good,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_ranges_from_input() {
    let dir = tempfile::tempdir().unwrap();
    let axis = r#"{"lo": 0.1, "hi": 0.5, "count": 3}"#;
    let fixed = r#"{"lo": 0.0, "hi": 0.0, "count": 1}"#;
    let body = format!(
        r#"{{"ortho_end": [[-5,0],[-3,0],[-1,0],[1,0],[3,0],[5,0]], "angles": [0,0,0],
            "sweep": {{"d_a": {axis}, "tau_a": {fixed}, "d": {fixed}, "tau": {fixed}, "d_b": {axis}, "tau_b": {fixed}}}}}"#
    );
    let input = write(dir.path(), "sweep.json", &body);
    let out = nsdc(&["sweep"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 10);
}

#[test]
fn render_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", FUCHSIAN);
    let svg = dir.path().join("f.svg");
    let out = nsdc(
        &[
            "render",
            "--moves",
            "0.5,0.5,0,0,0,0",
            "--out",
            svg.to_str().unwrap(),
        ],
        &good,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains(">C_D<") && text.contains("a'*"));

    let overlap = write(
        dir.path(),
        "overlap.json",
        r#"{"ortho_end": [[-1.5,0],[0.5,0],[-1,0],[1,0],[3,0],[5,0]], "angles": [0,0,0]}"#,
    );
    let out = nsdc(&["render"], &overlap);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("crimson"));

    let empty = write(dir.path(), "empty.json", "");
    assert_eq!(nsdc(&["render"], &empty).status.code(), Some(1));
}
