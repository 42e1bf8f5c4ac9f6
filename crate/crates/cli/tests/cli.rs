use std::process::{Command, Output};

fn rigidfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidfold"))
        .args(args)
        .output()
        .expect("run rigidfold")
}

fn stdout(args: &[&str]) -> String {
    let out = rigidfold(args);
    assert!(
        out.status.success(),
        "rigidfold {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rho_lines(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter_map(|l| l.strip_prefix("rho "))
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn trifold_fold_matches_closed_form() {
    let out = stdout(&[
        "fold", "trifold", "--beta", "60", "--mode", "1", "--drive", "-0.4",
    ]);
    let rho = &rho_lines(&out)[0];
    let t = 0.4f64;
    let expected = -4.0 * ((2.0 + 3f64.sqrt()) * (-t / 4.0).tan()).atan();
    assert!((rho[0] - expected).abs() < 1e-11, "{rho:?}");
    assert!((rho[0] - 1.43316792744).abs() < 1e-10);
    assert_eq!(rho[1], -0.4);
    assert!(out.contains("valid true"));
}

#[test]
fn bowtie_modes_agree_on_regular_vertex() {
    let a = rho_lines(&stdout(&[
        "fold", "bow-tie", "--mode", "1", "--drive", "0.7",
    ]));
    let b = rho_lines(&stdout(&[
        "fold", "bow-tie", "--mode", "2", "--drive", "0.7",
    ]));
    for (x, y) in a[0].iter().zip(&b[0]) {
        assert!((x - y).abs() < 1e-11);
    }
}

#[test]
fn general_flat_point() {
    let out = stdout(&[
        "fold", "general", "--rho4", "0", "--rho5", "0", "--rho6", "0",
    ]);
    let rho = rho_lines(&out);
    assert_eq!(rho.len(), 1);
    assert!(rho[0].iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn named_drive_must_belong_to_the_model() {
    let out = rigidfold(&["fold", "trifold", "--rho1", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho2"));
}

#[test]
fn sweep_writes_one_valid_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trifold.csv");
    stdout(&[
        "sweep",
        "trifold",
        "--beta",
        "60",
        "-n",
        "100",
        "-o",
        path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rho1,rho2,rho3,rho4,rho5,rho6,residual,valid,branch"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 100);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[7], "true", "{row}");
        assert!(cols[6].parse::<f64>().unwrap() < 1e-8);
    }
}

#[test]
fn region_json_has_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.json");
    stdout(&["region", "--rho6", "0.3", "-o", path.to_str().unwrap()]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mask = v["mask"].as_array().unwrap();
    assert_eq!(mask.len(), 201);
    assert!(mask.iter().all(|row| row.as_array().unwrap().len() == 201));
}

#[test]
fn resch_mesh_obj() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("resch.obj");
    let out = stdout(&["resch", "--drive", "0.5", "-o", path.to_str().unwrap()]);
    assert_eq!(out.lines().filter(|l| l.starts_with('r')).count(), 7);
    let obj = std::fs::read_to_string(&path).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 19);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 24);
}

#[test]
fn table_json_counts() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["table", "--format", "json"])).unwrap();
    let counts: Vec<u64> = v["pattern_counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(counts.len(), 6);
    assert_eq!(counts.iter().sum::<u64>(), 37);
}

#[test]
fn trace_then_export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("trace.json");
    let obj = dir.path().join("trace.obj");
    stdout(&["trace", "-o", json.to_str().unwrap()]);
    stdout(&[
        "export",
        "-i",
        json.to_str().unwrap(),
        "-o",
        obj.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&obj).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("o ")).count() > 100);
}

#[test]
fn exit_codes() {
    assert_eq!(
        rigidfold(&["fold", "trifold", "--drive", "3.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rigidfold(&["fold", "trifold", "--alpha", "200", "--drive", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rigidfold(&["fold", "no-such-model", "--drive", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rigidfold(&["export", "-i", "/nonexistent/in.json", "-o", "/tmp/x.csv"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        rigidfold(&["sweep", "trifold", "-o", "/nonexistent/dir/out.csv"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(rigidfold(&["--tol", "-1", "table"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_rigidfold"))
            .args(["sweep", "igloo-2dof", "-n", "15", "--format", "csv"])
            .env("RIGIDFOLD_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn degrees_flag_converts_fold_angles() {
    let a = rho_lines(&stdout(&["fold", "trifold", "--drive", "30", "--degrees"]));
    let b = rho_lines(&stdout(&[
        "fold",
        "trifold",
        "--drive",
        &30f64.to_radians().to_string(),
    ]));
    for (x, y) in a[0].iter().zip(&b[0]) {
        assert!((x - y).abs() < 1e-12);
    }
}
