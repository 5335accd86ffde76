use std::fs;
use std::process::{Command, Output};

const ONE_PLUS_COS: &str = r#"{"density":{"kind":"trigpoly","a":[1,1]}}"#;

fn canon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canon")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn h11_column(csv: &str) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect()
}

#[test]
fn inverse_one_plus_cos() {
    let o = canon(&["inverse", "--measure", ONE_PLUS_COS, "--N", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let h = h11_column(&stdout(&o));
    let expect = [1.0, 1.0 / 3.0, 2.0 / 3.0, 0.4, 0.6];
    assert_eq!(h.len(), expect.len());
    for (a, b) in h.iter().zip(expect) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn json_output_parses() {
    let o = canon(&["inverse", "--measure", ONE_PLUS_COS, "--N", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(canon(&["inverse", "--measure", "missing.json", "--N", "3"]).status.code(), Some(2));
    assert_eq!(canon(&["inverse", "--measure", "{\"density\":", "--N", "3"]).status.code(), Some(2));
    assert_eq!(canon(&["inverse", "--measure", ONE_PLUS_COS, "--T", "-1", "--N", "3"]).status.code(), Some(2));
    assert_eq!(canon(&[]).status.code(), Some(2));
}

#[test]
fn breakdown_exits_3_with_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.csv");
    let o = canon(&["inverse", "--measure", r#"{"atoms":[[0,1]]}"#, "--N", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("positivity"));
}

#[test]
fn unwritable_output_exits_4() {
    let o = canon(&["inverse", "--measure", ONE_PLUS_COS, "--N", "2", "--out", "/nonexistent/dir/h.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn direct_first_moments() {
    let o = canon(&["direct", "--steps", "2,1,0.5,0.25", "--step-length", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let gamma: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(gamma.len(), 4);
    assert!((gamma[0] - 0.5).abs() < 1e-14);
    assert!((gamma[1] - 0.5 / 3.0).abs() < 1e-14);
}

#[test]
fn job_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    let body = format!(r#"{{"command":"inverse","measure":{ONE_PLUS_COS},"T":"pi","N":6}}"#);
    fs::write(&job, body).unwrap();
    let from_job = canon(&["--job", job.to_str().unwrap()]);
    let from_flags = canon(&["inverse", "--measure", ONE_PLUS_COS, "--N", "6"]);
    assert_eq!(from_job.status.code(), Some(0));
    assert_eq!(from_job.stdout, from_flags.stdout);
    fs::write(&job, r#"{"measure":{}}"#).unwrap();
    assert_eq!(canon(&["--job", job.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn svg_is_written_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let render = |name: &str| {
        let path = dir.path().join(name);
        let o = canon(&[
            "dirac-approx",
            "--profile",
            "exp",
            "--T",
            "0.5",
            "--N",
            "8",
            "--svg",
            path.to_str().unwrap(),
            "--log-scale",
        ]);
        assert_eq!(o.status.code(), Some(0));
        fs::read_to_string(path).unwrap()
    };
    let a = render("a.svg");
    assert!(a.starts_with("<svg") && a.contains("<polyline"));
    assert_eq!(a, render("b.svg"));
}

#[test]
fn closed_form_grid() {
    let o = canon(&["closed-form", "pointmass", "--alpha", "1", "--beta", "1", "--grid", "0:2:0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("t,h11,g,h22"));
    let h: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(h.len(), 5);
    for (i, v) in h.iter().enumerate() {
        let t = i as f64 * 0.5;
        assert!((v - 1.0 / (1.0 + t).powi(2)).abs() < 1e-12);
    }
}

#[test]
fn validate_agrees_on_one_plus_sin() {
    let o = canon(&["validate", "--measure", r#"{"density":{"kind":"trigpoly","a":[1],"b":[1]}}"#, "--N", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_ignores_thread_count() {
    let args = [
        "sweep",
        "--measure",
        r#"{"lebesgue_scale":1,"atoms":[[0,1]]}"#,
        "--T-list",
        "pi,2pi,4pi",
        "--interval",
        "0:1",
        "--interval",
        "0.3:2.9",
        "--reference",
        r#"{"name":"pointmass","alpha":1,"beta":0.3183098861837907}"#,
        "--t-max",
        "3",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_canon"))
            .args(args)
            .env("CANON_NUM_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(stdout(&one).lines().count(), 1 + 3 * 2);
}

#[test]
fn closed_form_skips_points_outside_domain() {
    let o = canon(&["closed-form", "bessel", "--m", "2", "--grid", "0:1:0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
    assert_eq!(canon(&["closed-form", "homogeneous", "--grid", "0:0:1"]).status.code(), Some(2));
}
