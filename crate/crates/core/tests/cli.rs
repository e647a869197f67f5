use std::process::{Command, Output};

fn biharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biharm")).args(args).env("BIHARM_THREADS", "1").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_writes_history() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let plot = dir.path().join("plot.txt");
    let est = dir.path().join("eta.csv");
    let o = biharm(&[
        "solve",
        "--domain",
        "square",
        "--max-ndof",
        "800",
        "--output",
        csv.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
        "--estimator",
        est.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("level,ndof,ntri,lambda,eta,marked,seconds"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.len() >= 2);
    let lambda: f64 = rows.last().unwrap()[3].parse().unwrap();
    assert!((lambda - 1294.9339795917128).abs() / 1294.93 < 1e-3);
    assert!(rows.iter().all(|r| r[1].parse::<usize>().unwrap() <= 800));
    assert!(std::fs::read_to_string(&plot).unwrap().contains("# ndof eta2"));
    assert!(std::fs::read_to_string(&est).unwrap().starts_with("tri_index,eta2"));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# uniform square\ndomain = square\nmode = uniform\nmax_ndof = 500\n").unwrap();
    let o = biharm(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("level,ndof"));
    // uniform refinement marks every triangle
    for l in out.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        assert!(f[5] == "0" || f[5] == f[2], "{l}");
    }
}

#[test]
fn tables_print_reference_digits() {
    let o = biharm(&["tables", "--benchmark", "drums-clamped-left", "--j", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("28.0586863865"));
}

#[test]
fn study_over_theta() {
    let o = biharm(&["study", "--domain", "square", "--max-ndof", "500", "--vary", "theta=0.3,0.7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("run,levels,ndof,lambda,eta,seconds\ntheta=0.3,"));
    assert!(out.contains("\ntheta=0.7,"));
}

#[test]
fn errors_exit_with_one() {
    for args in [
        &["solve", "--domain", "nosuch"][..],
        &["solve", "--domain", "square", "--theta", "1.5"],
        &["tables", "--benchmark", "nosuch"],
        &["frobnicate"],
    ] {
        let o = biharm(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn failed_refcheck_exits_with_two() {
    let o = biharm(&["refcheck", "--benchmark", "triangle-equilateral-C-s0", "--max-ndof", "30"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn passing_refcheck_exits_with_zero() {
    let o = biharm(&["refcheck", "--benchmark", "triangle-right-isosceles-V-s1", "--max-ndof", "3000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("1 of 1 checks passed"));
}
