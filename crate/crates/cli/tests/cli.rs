use std::process::{Command, Output};

use bcmsr::bounds::{region_wynerziv, wynerziv_example, PmfSpec};
use bcmsr::channels::{dueck_distribution, DueckParams, NoiseCase};
use bcmsr::polyregion::{sample_disagreements, HalfSpaceSystem};

fn bcmsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcmsr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn region_low_noise_square_side() {
    let o = bcmsr(&["region", "--example", "dueck1", "--p", "0.05", "--q", "0.05", "--r", "0.05", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let regions = v["regions"].as_array().unwrap();
    let names: Vec<&str> = regions.iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["nofeedback", "inner1", "inner2", "outer"]);
    let inner1 = regions[1]["vertices"].as_array().unwrap();
    let r1max = inner1.iter().map(|p| p[0].as_f64().unwrap()).fold(0.0, f64::max);
    let r2max = inner1.iter().map(|p| p[1].as_f64().unwrap()).fold(0.0, f64::max);
    assert!((r1max - 0.833454408928673).abs() < 1e-9 && (r2max - 0.833454408928673).abs() < 1e-9);
}

#[test]
fn region_mixed_noise_inner2_meets_outer() {
    let o = bcmsr(&["region", "--example", "dueck1", "--p", "0.25", "--q", "0.2", "--r", "0.3", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["regions"][2]["vertices"], v["regions"][3]["vertices"]);
    assert_ne!(v["regions"][1]["vertices"], v["regions"][2]["vertices"]);
}

#[test]
fn region_useless_blackwell_channel() {
    let o = bcmsr(&["region", "--example", "blackwell", "--p", "0.5", "--format", "json"]);
    for r in json(&o)["regions"].as_array().unwrap() {
        assert_eq!(r["vertices"], serde_json::json!([[0.0, 0.0]]));
    }
}

#[test]
fn region_svg_has_legend_and_fixed_viewport() {
    let o = bcmsr(&["region", "--format", "svg"]);
    let s = stdout(&o);
    assert!(s.starts_with("<svg") && s.contains(r#"viewBox="0 0 800 800""#));
    assert_eq!(s.matches("<polygon").count(), 4);
    for n in ["nofeedback", "inner1", "inner2", "outer"] {
        assert!(s.contains(&format!(">{n}</text>")));
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"example":"dueck","case":2,"p":0.1,"q":0.2,"r":0.3}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    for args in [
        vec!["region", "--config", cfg, "--format", "csv"],
        vec!["region", "--config", cfg, "--format", "svg"],
        vec!["sweep", "--pgrid", "0:0.5:6", "--grid", "21"],
        vec!["simulate", "--channel", "bsc:0.1", "--mode", "monte-carlo", "--trials", "2000", "--seed", "5"],
        vec!["fme", "--builtin", "wynerziv"],
    ] {
        let (a, b) = (bcmsr(&args), bcmsr(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"example":"dueck","case":2,"p":0.25,"q":0.2,"r":0.3}"#).unwrap();
    let v = json(&bcmsr(&["region", "--config", cfg.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["source"], "dueck2");
    assert_eq!(v["params"]["p"], 0.25);
    let v = json(&bcmsr(&["region", "--config", cfg.to_str().unwrap(), "--p", "0.1", "--format", "json"]));
    assert_eq!(v["params"]["p"], 0.1);
    std::fs::write(&cfg, r#"{"example":"dueck","bogus":1}"#).unwrap();
    assert_eq!(bcmsr(&["region", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn region_from_distribution_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dist.json");
    let d = dueck_distribution(&DueckParams::new(NoiseCase::Chain, 0.05, 0.05, 0.05)).unwrap();
    std::fs::write(&path, serde_json::to_string(&PmfSpec::from_pmf(&d.pmf)).unwrap()).unwrap();
    let o = bcmsr(&["region", "--dist", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let key1 = v["regions"][1]["rows"].as_array().unwrap().iter().find(|r| r["label"] == "key1").unwrap()["rhs"].as_f64().unwrap();
    assert!((key1 - 0.833454408928673).abs() < 1e-9);
    std::fs::write(&path, r#"{"variables":[{"name":"Q","size":2}],"probabilities":[0.5,0.6]}"#).unwrap();
    assert_eq!(bcmsr(&["region", "--dist", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sweep_rows_and_metadata() {
    let o = bcmsr(&["sweep", "--grid", "21"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert!(lines[0].starts_with('#') && lines[0].contains("grid_resolution=21"));
    assert_eq!(lines[1], "p,sum_in1,sum_in2,sum_out,sum_nofb");
    assert_eq!(lines.len(), 2 + 26);
    assert_eq!(*lines.last().unwrap(), "0.5,0,0,0,0");
    assert_eq!(bcmsr(&["sweep", "--pgrid", "0:0.5:0"]).status.code(), Some(2));
    assert_eq!(bcmsr(&["sweep", "--pgrid", ""]).status.code(), Some(2));
    let d = stdout(&bcmsr(&["sweep", "--example", "dueck2", "--pgrid", "0,0.1", "--q", "0.2"]));
    assert_eq!(d.lines().count(), 4);
}

#[test]
fn fme_builtin_matches_closed_region() {
    let o = bcmsr(&["fme", "--builtin", "wynerziv"]);
    assert_eq!(o.status.code(), Some(0));
    let sys = HalfSpaceSystem::parse_text(&stdout(&o)).unwrap();
    let target = region_wynerziv(&wynerziv_example()).unwrap();
    assert_eq!(sample_disagreements(&sys, &target, &[0.0; 3], &[1.5; 3], 10_000).unwrap(), 0);
}

#[test]
fn fme_file_cases() {
    let dir = tempfile::tempdir().unwrap();
    let f = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let ok = f("ok.txt", "# two users\nR1 + T <= 3\nR2 - T <= 1\nT >= 0\nR1 >= 0\nR2 >= 0\n");
    let o = bcmsr(&["fme", &ok, "--eliminate", "T"]);
    assert_eq!(o.status.code(), Some(0));
    let s = HalfSpaceSystem::parse_text(&stdout(&o)).unwrap();
    assert_eq!(s.variables, ["R1", "R2"]);
    assert!(s.contains(&[3.0, 1.0]).unwrap() && !s.contains(&[3.0, 1.5]).unwrap() && s.contains(&[1.0, 3.0]).unwrap());

    let o = bcmsr(&["fme", &ok]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(HalfSpaceSystem::parse_text(&stdout(&o)).unwrap().variables, ["R1", "T", "R2"]);

    let contra = f("c.txt", "R1 + R2 <= 1\nR1 >= 2\nR2 >= 0\n");
    let o = bcmsr(&["fme", &contra, "--eliminate", "R2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "0 <= -1"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));

    let bad = f("bad.txt", "R1 <= 1\nR1 + * R2 <= 2\n");
    let o = bcmsr(&["fme", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(bcmsr(&["fme", &ok, "--eliminate", "Z"]).status.code(), Some(2));
    assert_eq!(bcmsr(&["fme", "/nonexistent/sys.txt"]).status.code(), Some(3));
}

#[test]
fn simulate_report_and_summary() {
    let o = bcmsr(&["simulate", "--blocklength", "8", "--rate", "0.75", "--seed", "42", "--otp-bits", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["report"]["conditional_key_entropy"].as_f64().unwrap() >= 0.95 * 6.0);
    assert_eq!(v["otp"]["decode_ok"], true);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    let same = json(&bcmsr(&["simulate", "--channel", "identical"]));
    assert_eq!(same["report"]["conditional_key_entropy"], 0.0);
    assert_eq!(bcmsr(&["simulate", "--blocklength", "20"]).status.code(), Some(2));
    assert_eq!(bcmsr(&["simulate", "--channel", "bsc:2"]).status.code(), Some(2));
    assert_eq!(bcmsr(&["simulate", "--otp-bits", "9"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = bcmsr(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 10);
    let o = bcmsr(&["verify", "--perturb-inner1", "-1e-3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["pass"], false);
    let o = bcmsr(&["verify", "--only", "equality-star"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["checks"].as_array().unwrap().len(), 1);
    assert_eq!(bcmsr(&["verify", "--only", "nope"]).status.code(), Some(2));
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(bcmsr(&[]).status.code(), Some(2));
    assert_eq!(bcmsr(&["region", "--format", "png"]).status.code(), Some(2));
    assert_eq!(bcmsr(&["region", "--p", "0.7"]).status.code(), Some(2));
    assert_eq!(bcmsr(&["region", "--example", "dueck1", "--case", "2"]).status.code(), Some(2));
    assert_eq!(bcmsr(&["region", "--out", "/nonexistent/dir/r.csv"]).status.code(), Some(3));
    assert_eq!(bcmsr(&["region", "--config", "/nonexistent/run.json"]).status.code(), Some(3));
    assert_eq!(bcmsr(&["--help"]).status.code(), Some(0));
}
