use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entroscope"))
        .args(args)
        .env_remove("ENTROSCOPE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn entropy_of_dyck_two() {
    let o = run(&["entropy", "--lang", "dyck:2", "--n-max", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slope = doc["entropy"]["slope"].as_f64().unwrap();
    assert!((0.8..=1.8).contains(&slope), "slope {slope}");
    assert_eq!(doc["budget"], 1_000_000);
    assert_eq!(doc["partial"], false);
}

#[test]
fn gamma_csv_of_anbncn() {
    let o = run(&["gamma", "--lang", "anbncn", "--n-max", "6", "--prefix-bound", "16", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|&h| h == "gamma").unwrap();
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 7);
    let g: Vec<u64> = rows.iter().map(|r| r[col].parse().unwrap()).collect();
    assert!(g.windows(2).all(|w| w[0] <= w[1]), "{g:?}");
}

#[test]
fn growth_of_free_two() {
    let o = run(&["growth", "--group", "free:2", "--n-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("n,ball,log2_ratio"));
    let rows = data_lines(&text);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "6");
    assert_eq!(last[1], (2 * 3u64.pow(6) - 1).to_string());
    let ratio: f64 = last[2].parse().unwrap();
    let oracle = ((2 * 3u64.pow(6) - 1) as f64).log2() / 6.0;
    assert!((ratio - oracle).abs() < 1e-12);
    assert!((ratio - 3f64.log2()).abs() < 0.2);
    assert!(text.contains("# closed-form limit: 1.58"));
}

#[test]
fn growth_from_a_language() {
    let o = run(&["growth", "--lang", "cdyck:2", "--n-max", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["sizes"][2], 13);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    for args in [
        &["report", "--lang", "dyck:1", "--n-max", "6", "--seed", "7"][..],
        &["dim", "--lang", "palin:ab", "--n-max", "5", "--seed", "7"][..],
        &["gamma", "--lang", "countdiff:a,b,1", "--n-max", "5", "--format", "csv"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let args = ["gamma", "--lang", "palin:ab", "--n-max", "4", "--brute-force"];
    let one = Command::new(env!("CARGO_BIN_EXE_entroscope"))
        .args(args)
        .env("ENTROSCOPE_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_entroscope"))
        .args(args)
        .env("ENTROSCOPE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["gamma", "--lang", "dyck:zero"][..],
        &["gamma", "--lang", "and(dyck:1)"][..],
        &["gamma", "--lang", "anbncn", "--n-max", "0"][..],
        &["gamma", "--lang", "anbncn", "--mode", "sideways"][..],
        &["entropy", "--lang", "anbncn", "--n-max", "2"][..],
        &["dim", "--lang", "dyck:1", "--mode", "exact"][..],
        &["growth", "--group", "torus:2"][..],
        &["growth", "--lang", "palin:ab"][..],
        &["report", "--lang", "dyck:1", "--format", "csv"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_entroscope"))
        .args(["gamma", "--lang", "anbncn"])
        .env("ENTROSCOPE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three_with_partial_document() {
    let o = run(&["gamma", "--lang", "palin:ab", "--n-max", "5", "--budget", "50"]);
    assert_eq!(o.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["partial"], true);
    assert_eq!(doc["budget"], 50);
    assert!(doc["queries"].as_u64().unwrap() <= 50);

    let o = run(&["entropy", "--lang", "palin:ab", "--n-max", "6", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["partial"], true);

    let o = run(&["growth", "--group", "free:2", "--n-max", "10", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("# partial"));
}

#[test]
fn cover_entropy_matches_gamma() {
    let o = run(&["cover-entropy", "--lang", "dyck:1", "--n-max", "5", "--prefix-bound", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["matches_gamma"], true);
    let counts: Vec<u64> = doc["cover"]["per_n"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["count"].as_u64().unwrap())
        .collect();
    // Dyck(1) rows over Σ^(n) are the depths 0..=n plus the dead row.
    assert_eq!(counts, (0..=5).map(|n| n + 2).collect::<Vec<u64>>());
}

#[test]
fn infinite_entropy_bounds_are_valid_json() {
    let o = run(&["report", "--lang", "infent", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["table"]["records"].as_array().unwrap().len() == 4);
}
