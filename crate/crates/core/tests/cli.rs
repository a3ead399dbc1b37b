use std::process::{Command, Output};

fn qkr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn row<'a>(text: &'a str, prefix: &str) -> Vec<&'a str> {
    text.lines()
        .find(|l| l.starts_with(prefix))
        .unwrap_or_else(|| panic!("no {prefix} row in\n{text}"))
        .split_whitespace()
        .skip(1)
        .collect()
}

#[test]
fn table_at_zero_noise() {
    let o = qkr(&["table", "--beta", "0", "--measure", "shannon"]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert_eq!(row(&t, "M1"), ["0.399124*", "0.255992*", "0*"]);
    // Every 8-state leakage vanishes, so all four attacks tie.
    assert_eq!(row(&t, "K2")[2], "0*");
    for r in ["M2", "K1", "K2"] {
        let cells = row(&t, r);
        assert_eq!(cells[0], "0");
        assert_eq!(cells[1], "0");
    }
}

#[test]
fn table_at_a_tenth() {
    let o = qkr(&["table", "--beta", "0.1"]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert_eq!(row(&t, "K2"), ["0.0968507", "0.0972139", "0.156941"]);
    assert!(t.contains("Min-entropy loss"));
}

#[test]
fn table_writes_csv() {
    let dir = std::env::temp_dir().join(format!("qkr-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let o = qkr(&["table", "--beta", "0.1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2 * 4);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sweep_format_and_determinism() {
    let args = ["sweep", "--beta-range", "0:1/3:1/300"];
    let a = qkr(&args);
    let b = qkr(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "beta,scheme,measure,attack,leakage,capacity,argmax_attack"
    );
    assert_eq!(lines.len() - 1, 101 * 3 * 2 * 4);
    assert!(text.ends_with('\n'));
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split(',').collect();
        assert_eq!(cells.len(), 7);
        for &num in &[cells[0], cells[4], cells[5]] {
            num.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn sweep_locates_shannon_crossover() {
    let o = qkr(&[
        "sweep",
        "--beta-range",
        "0.09:0.12:0.0001",
        "--scheme",
        "all",
        "--measure",
        "shannon",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut cap6 = Vec::new();
    let mut cap8 = Vec::new();
    for l in text.lines().skip(1) {
        let c: Vec<&str> = l.split(',').collect();
        if c[3] != "M1" {
            continue;
        }
        let beta: f64 = c[0].parse().unwrap();
        let cap: f64 = c[5].parse().unwrap();
        match c[1] {
            "6-state" => cap6.push((beta, cap)),
            "8-state" => cap8.push((beta, cap)),
            _ => {}
        }
    }
    let crossing = cap6
        .iter()
        .zip(&cap8)
        .find(|((_, c6), (_, c8))| c8 - c6 <= 1e-9)
        .map(|((b, _), _)| *b)
        .unwrap();
    assert!((crossing - 0.1061).abs() <= 1e-3, "{crossing}");
}

#[test]
fn verify_passes_and_detects_perturbation() {
    let o = qkr(&["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("CHECK ")).collect();
    assert!(checks.len() >= 40);
    assert!(checks.iter().all(|l| l.split(' ').nth(2) == Some("PASS")));

    let o = qkr(&["verify", "--perturb", "1e-3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("CHECK ") && l.contains(" FAIL ")));
}

#[test]
fn search_is_reproducible_and_meets_conjecture() {
    let args = [
        "search",
        "--scheme",
        "6",
        "--beta",
        "0.1",
        "--directions",
        "3",
        "--budget",
        "20000",
        "--seed",
        "7",
    ];
    let a = qkr(&args);
    let b = qkr(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    assert_eq!(v["scheme"], "6-state");
    assert_eq!(v["rng"], "ChaCha8");
    assert_eq!(v["starts"], 27);
    let gap = v["gap_to_conjecture"].as_f64().unwrap();
    assert!((-1e-6..=1e-5).contains(&gap), "{gap}");
    assert!((v["best_entropy"].as_f64().unwrap() - 1.4877486).abs() < 1e-5);
}

#[test]
fn search_eight_state() {
    let o = qkr(&[
        "search",
        "--scheme",
        "8",
        "--beta",
        "0.15",
        "--directions",
        "3",
        "--budget",
        "0",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let b: f64 = 0.15;
    let p8 = 0.25 - 6f64.sqrt() / 4.0 * (b * (1.0 - 1.5 * b)).sqrt();
    let h = -p8 * p8.log2() - (1.0 - p8) * (1.0 - p8).log2();
    let want = h + (1.0 - p8) * 3f64.log2();
    assert!((v["best_entropy"].as_f64().unwrap() - want).abs() < 1e-5);
}

#[test]
fn noise_csv() {
    let o = qkr(&["noise"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("beta,epsilon_opt,capacity_plain,capacity_opt")
    );
    let rows: Vec<[f64; 4]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect();
    assert!(rows.iter().all(|r| r[3] >= r[2] - 1e-12));
    let last_plain = rows.iter().rfind(|r| r[2] > 0.0).unwrap()[0];
    let last_opt = rows.iter().rfind(|r| r[3] > 0.0).unwrap()[0];
    assert!((last_plain - 0.156).abs() <= 1e-3, "{last_plain}");
    assert!((last_opt - 0.162).abs() <= 1e-3, "{last_opt}");
    let onset = rows.iter().position(|r| r[1] > 0.0).unwrap();
    assert!(rows[..onset].iter().all(|r| r[1] == 0.0));
    assert!(o.stderr.is_empty());
}

#[test]
fn usage_errors() {
    for args in [
        vec!["table", "--beta", "0.6"],
        vec!["table", "--beta", "abc"],
        vec!["sweep", "--scheme", "5"],
        vec!["sweep", "--beta-range", "0:0.1"],
        vec!["sweep", "--measure", "renyi"],
        vec!["noise", "--beta-range", "0:0.3:0.01"],
        vec!["bogus"],
        vec![],
    ] {
        assert_eq!(qkr(&args).status.code(), Some(2), "{args:?}");
    }
    let o = qkr(&["sweep", "--beta", "0.1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}
