use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_homoclinic"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("homoclinic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SMALL: [&str; 4] = ["--domain-length", "20", "--grid-points", "801"];

#[test]
fn constants_json() {
    let out = run(&["constants", "--k0", "1.62", "--no-meta"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["k1_literal"].as_f64().unwrap() - 2.3322).abs() < 1e-4);
    assert!((v["k2"].as_f64().unwrap() - 1.151388).abs() < 1e-6);
    assert!((v["beta0"].as_f64().unwrap() - 0.93433).abs() < 1e-5);
    assert!(v.get("meta").is_none());
    let with_meta = run(&["constants"]);
    let v: serde_json::Value = serde_json::from_slice(&with_meta.stdout).unwrap();
    assert_eq!(v["meta"]["tool"], "homoclinic");
}

#[test]
fn floats_carry_17_digits() {
    let out = run(&["decay", "--beta", "0.5", "--no-meta"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"beta\": 5.0000000000000000e-1"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["solve", "--beta", "-1"]).status.code(), Some(3));
    assert_eq!(run(&["solve"]).status.code(), Some(3));
    assert_eq!(run(&["--bogus"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(
        run(&["solve", "--beta", "0.5", "--grid-points", "800"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["ustar", "--beta", "1.2"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let mut args = vec!["solve", "--beta", "0.6", "--max-iter", "2"];
    args.extend(SMALL);
    assert_eq!(run(&args).status.code(), Some(2));
}

#[test]
fn solve_is_byte_identical_and_certifiable() {
    let (a, b, prof) = (scratch("a.json"), scratch("b.json"), scratch("profile.csv"));
    for (out, extra) in [(&a, Some(&prof)), (&b, None)] {
        let mut cmd = bin();
        cmd.args(["solve", "--beta", "0.6", "--no-meta", "--output"])
            .arg(out)
            .args(SMALL);
        if let Some(p) = extra {
            cmd.arg("--profile").arg(p);
        }
        assert!(cmd.status().unwrap().success());
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert!(v["c_beta"].as_f64().unwrap() > 0.0);
    assert_eq!(v["morse_index"], 1);

    let csv = std::fs::read_to_string(&prof).unwrap();
    assert!(csv.starts_with("x,u,du,d2u,residual,pohozaev\n"));
    let out = bin()
        .args(["certify", "--beta", "0.6", "--no-meta", "--input"])
        .arg(&prof)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let c: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "u_star",
        "intervals",
        "supercritical_energy",
        "negative_count",
    ] {
        assert!(c.get(key).is_some(), "{key}");
    }
    for key in [
        "four_pi",
        "a_star",
        "pohozaev_sup",
        "nontrivial",
        "morse_index",
    ] {
        assert!(c["checks"].get(key).is_some(), "{key}");
    }
    assert_eq!(c["checks"]["nontrivial"], true);
    assert_eq!(c["checks"]["morse_index"], 1);
}

#[test]
fn sweep_csv_is_ordered_by_beta() {
    let mut args = vec!["sweep", "--betas", "0.7,0.6"];
    args.extend(SMALL);
    let out = run(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta,c_beta,morse_index,tau_fit,tau_theory,min_u");
    assert_eq!(lines.len(), 3);
    let beta = |l: &str| l.split(',').next().unwrap().parse::<f64>().unwrap();
    assert!(beta(lines[1]) < beta(lines[2]));
    let c = |l: &str| l.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert!(c(lines[1]) > c(lines[2]));
}

#[test]
fn inequality_tables() {
    let out = run(&["inequality", "l1", "--ks", "2.5", "--as", "1,2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,a,M_a,sign\n"));
    assert_eq!(text.lines().count(), 3);
    let out = run(&["inequality", "l2", "--ks", "1.5,2.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,value\n"));
    let out = run(&["inequality", "quadform", "--trials", "5", "--no-meta"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
    assert_eq!(run(&["inequality", "clamped"]).status.code(), Some(3));
    assert!(run(&["inequality", "clamped", "--beta", "0.5"])
        .status
        .success());
    assert!(run(&["inequality", "beam", "--a", "1"]).status.success());
}
