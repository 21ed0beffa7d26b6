use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftqec-grid-sim")).args(args).output().unwrap()
}

fn shipped_circuit() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../circuits/gotorl.txt")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ftqec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ftverify_exit_status() {
    let good = bin(&["ftverify", shipped_circuit().to_str().unwrap()]);
    assert_eq!(good.status.code(), Some(0), "{}", String::from_utf8_lossy(&good.stderr));
    assert!(String::from_utf8_lossy(&good.stderr).contains("fault-tolerant"));

    // the same preparation without its verification readout
    let text = std::fs::read_to_string(shipped_circuit()).unwrap();
    let unverified: String = text.lines().filter(|l| !l.starts_with("MEASZ")).map(|l| format!("{l}\n")).collect();
    let path = scratch("unverified.txt");
    std::fs::write(&path, unverified).unwrap();
    let bad = bin(&["ftverify", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).lines().count() > 1);

    let missing = bin(&["ftverify", "/nonexistent/circuit.txt"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn run_is_deterministic_and_writes_the_header() {
    let args = ["run", "--protocol", "enc-fb", "--plist", "0.01,0.02", "--shots", "5000", "--seed", "3"];
    let a = bin(&args);
    let b = bin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "p,shots,accepted,fail_estimated,fail_true,rate_estimated,rate_true,acceptance,sigma,ci95_lo,ci95_hi");
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("sweep.cfg");
    std::fs::write(&cfg, "protocol = hybrid-fb\npmin = 0.001\npmax = 0.003\npoints = 3\nshots = 2000\nseed = 9\n").unwrap();
    let out = scratch("out.json");
    let run = bin(&["run", "--config", cfg.to_str().unwrap(), "--shots", "1000", "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let points = json["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    assert!(points.iter().all(|p| p["shots"] == 1000));
    assert_eq!(json["metadata"]["seed"], 9);
}

#[test]
fn bad_configurations_exit_with_status_two() {
    for args in [
        &["run", "--protocol", "enc-fb", "--plist", "0.01", "--shots", "0"][..],
        &["run", "--protocol", "hybrid-fb", "--plist", "0.01", "--shots", "10", "--policy", "set1"],
        &["run", "--protocol", "warp-drive", "--plist", "0.01", "--shots", "10"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let cfg = scratch("unknown.cfg");
    std::fs::write(&cfg, "protocol = enc-fb\nshotz = 10\n").unwrap();
    assert_eq!(bin(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
