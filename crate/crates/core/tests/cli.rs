use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wormbench"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wormbench-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const DESIGN: &str = r#"{"mode":"widget","design_kind":"aligned","ticks":100,"master_seed":3,
 "base_config":{"n_nodes":200},
 "factors":[{"name":"infectiousness_pct","levels":[20,60,100]},
            {"name":"chance_recover_pct","levels":[100,60,20]}]}"#;

#[test]
fn help_lists_every_flag() {
    let mut text = String::new();
    for sub in ["ode", "abm", "sweep", "prep", "bench", "report"] {
        let out = run(&[sub, "--help"]);
        assert!(out.status.success(), "{sub} --help");
        text.push_str(&String::from_utf8_lossy(&out.stdout));
    }
    for flag in [
        "--design",
        "--config",
        "--mode",
        "--ticks",
        "--seed",
        "--parallel",
        "--in",
        "--out",
        "--target",
        "--models",
        "--grid",
        "--split",
        "--format",
    ] {
        assert!(text.contains(flag), "missing {flag}");
    }
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let missing = dir.join("nope.csv");
    let out = run(&["report", "--in", s(&missing), "--out", s(&dir.join("r.md"))]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error kind="), "{err}");

    assert_eq!(run(&["sweep", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn ode_zero_rates_constant_trace() {
    let dir = scratch("ode");
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        r#"{"params":{"lambda_recruit":0,"beta_contact":0,"tau_fail":0,"omega_kill":0,
            "theta_incubate":0,"nu_recover":0,"phi_wane":0,"rho_vaccinate":0,
            "xi_vax_wane":0,"sigma_density":0,"r0_range":0},
            "init":{"s":90,"e":1,"i":4,"r":3,"v":2},"dt":0.5,"steps":10}"#,
    )
    .unwrap();
    let out = run(&["ode", "--config", s(&cfg), "--ticks", "20"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 21);
    let tail = |r: &str| r.split_once(',').unwrap().1.to_string();
    assert!(rows.iter().all(|r| tail(r) == tail(rows[0])));
}

#[test]
fn abm_runs_both_modes() {
    let dir = scratch("abm");
    let out_csv = dir.join("w.csv");
    let out = run(&[
        "abm",
        "--mode",
        "widget",
        "--ticks",
        "30",
        "--seed",
        "5",
        "--out",
        s(&out_csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&out_csv).unwrap();
    assert_eq!(text.lines().count(), 31);

    // Rate mode has no defaults to fall back on.
    let out = run(&["abm", "--mode", "rate", "--ticks", "5"]);
    assert!(!out.status.success());
}

#[test]
fn sweep_prep_bench_report_pipeline() {
    let dir = scratch("pipeline");
    let design = dir.join("design.json");
    std::fs::write(&design, DESIGN).unwrap();
    let data = dir.join("data.csv");
    let clean = dir.join("clean.csv");

    let out = run(&[
        "sweep",
        "--design",
        s(&design),
        "--out",
        s(&data),
        "--parallel",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("data.manifest.json").exists());

    let out = run(&["prep", "--in", s(&data), "--out", s(&clean)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("clean.profile.json").exists());

    let bench = |out: &Path, parallel: &str| {
        let o = run(&[
            "bench",
            "--in",
            s(&clean),
            "--out",
            s(out),
            "--target",
            "recovered",
            "--models",
            "ols,knn,tree,gbt",
            "--split",
            "0.25",
            "--seed",
            "7",
            "--parallel",
            parallel,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let one = bench(&dir.join("r1.json"), "1");
    let four = bench(&dir.join("r4.json"), "4");
    assert_eq!(one, four, "bench output depends on thread count");

    let md = dir.join("table.md");
    let out = run(&[
        "report",
        "--in",
        s(&dir.join("r1.json")),
        "--out",
        s(&md),
        "--format",
        "md",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = std::fs::read_to_string(&md).unwrap();
    for label in ["LiR", "KNN", "DT", "GBT"] {
        assert!(table.contains(&format!("| {label} |")), "{label} row");
    }

    let out = run(&[
        "report",
        "--in",
        s(&dir.join("r1.json")),
        "--out",
        s(&dir.join("chart")),
        "--format",
        "svg",
    ]);
    assert!(out.status.success());
    assert!(dir.join("chart_r2.svg").exists() && dir.join("chart_time.svg").exists());
}

#[test]
fn unknown_target_is_schema_mismatch() {
    let dir = scratch("target");
    let data = dir.join("d.csv");
    std::fs::write(&data, "a,b,y\n1,2,3\n2,3,5\n3,5,8\n4,1,5\n5,0,5\n").unwrap();
    let out = run(&[
        "bench",
        "--in",
        s(&data),
        "--out",
        s(&dir.join("r.json")),
        "--target",
        "zz",
    ]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
