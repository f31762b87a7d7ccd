use std::process::{Command, Output};

fn robinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robinlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_disk_neumann() {
    let o = robinlab(&["spectrum", "--domain", "disk", "--h", "0", "--count", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.0);
    let mu: f64 = rows[1][1].parse().unwrap();
    assert!((mu - 3.3900).abs() < 1e-3, "{mu}");
    assert_eq!(rows[1][3], "2");
}

#[test]
fn pleijel_square_dirichlet() {
    let o = robinlab(&["pleijel", "--domain", "square", "--mode", "dirichlet", "--kmax", "2000"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let gamma: f64 = out.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    let tail = out
        .lines()
        .skip(1)
        .filter_map(|l| {
            let mut f = l.split(',');
            let k: usize = f.next()?.parse().ok()?;
            Some((k, f.next()?.parse::<f64>().ok()?))
        })
        .filter(|(k, _)| *k >= 1000)
        .map(|(_, r)| r)
        .fold(0.0, f64::max);
    assert!(tail < 0.6917 && tail < gamma);
}

#[test]
fn bounds_scale_checks() {
    let o = robinlab(&["bounds", "--domain", "disk", "--h", "-1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut names = Vec::new();
    for l in out.lines().skip(1) {
        let f: Vec<&str> = l.splitn(4, ',').collect();
        names.push(f[0].to_string());
        let sc: f64 = f[2].parse().unwrap();
        assert!(sc < 1e-10, "{l}");
    }
    for n in ["robin_eig_lower", "robin_count_upper", "neumann_count_convex_c2", "cs_eig_bound", "cs_count_bound"] {
        assert!(names.iter().any(|x| x == n), "{n} missing");
    }
}

#[test]
fn config_errors_and_determinism() {
    let dir = std::env::temp_dir().join(format!("robinlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"command\": \"spectrum\",\n  \"cuont\": 3\n}").unwrap();
    let o = robinlab(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("cuont") && err.contains("line 3"), "{err}");

    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"command": "courant-sharp", "domain": "square", "mode": "dirichlet", "k_max": 30}"#)
        .unwrap();
    let (a, b) = (dir.join("a"), dir.join("b"));
    for d in [&a, &b] {
        let o = robinlab(&["run", good.to_str().unwrap(), "--out", d.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(String::from_utf8_lossy(&o.stderr).contains("[1, 2, 4]"));
    }
    for f in ["courant_sharp.csv", "clusters.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn print_config_roundtrips() {
    let o = robinlab(&["nodal", "--domain", "rectangle", "--h", "1", "--target-h", "0.012", "--print-config"]);
    assert!(o.status.success());
    let cfg = robinlab_cli::RunConfig::from_json(&stdout(&o)).unwrap();
    assert_eq!(cfg.target_h, 0.012);
    assert_eq!(cfg.command, robinlab_cli::config::Command::Nodal);
}
