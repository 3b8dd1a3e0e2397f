use std::path::Path;
use std::process::Command;

fn scgl(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_scgl")).args(args).arg("--out").arg(out).output().unwrap()
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.toml");
    std::fs::write(&path, "[solver]\nn_cut = 4\ndt = 0.005\nt_final = 0.05\nsnapshot_every = 5\n").unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn simulate_writes_manifest_csv_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("run");
    let res = scgl(&["simulate", "--config", &cfg, "--seed", "5"], &out);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));

    let manifest = std::fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(manifest.contains("subcommand = \"simulate\""));
    assert!(manifest.contains("seed = 5"));
    assert!(manifest.contains("n_cut = 4"));

    let schema = std::fs::read_to_string(out.join("schema.txt")).unwrap();
    assert!(schema.contains("trajectory.csv") && schema.contains("energy.csv"));

    let traj = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let mut lines = traj.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with('t'));
    let cols = header.split(',').count();
    assert!(lines.clone().count() > 0);
    assert!(lines.all(|l| l.split(',').count() == cols));

    let mut snaps: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "wcgl"))
        .collect();
    snaps.sort();
    assert!(!snaps.is_empty());
    for p in snaps {
        let f = scgl::spectral::read_snapshot(std::fs::File::open(&p).unwrap()).unwrap();
        assert_eq!(f.n_max(), 4);
        assert!(f.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }
}

#[test]
fn regime_prints_window() {
    let dir = tempfile::tempdir().unwrap();
    let res = scgl(&["regime", "--a1", "1", "--a2", "1", "--m", "3"], dir.path());
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8_lossy(&res.stdout);
    assert!(text.contains("admissible=true"), "{text}");
    assert!(std::fs::read_to_string(dir.path().join("regime.csv")).unwrap().lines().count() == 2);
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[physics]\na1 = -1.0\n").unwrap();
    let res = scgl(&["simulate", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(res.status.code(), Some(2));
    let res = scgl(&["no-such-command"], dir.path());
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn help_lists_every_subcommand() {
    let res = Command::new(env!("CARGO_BIN_EXE_scgl")).arg("--help").output().unwrap();
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8_lossy(&res.stdout);
    for cmd in ["simulate", "verify-algebra", "mc-ortho", "wick-cauchy", "regime", "gibbs-invariance", "zn-scan", "converge-n"] {
        assert!(text.contains(cmd), "missing {cmd}");
    }
}
