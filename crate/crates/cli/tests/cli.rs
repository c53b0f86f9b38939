use qverify::{run, CliError, SweepConfig, CONFIG_ENV, EXIT_FAIL, EXIT_OK, EXIT_USAGE, SCHEMA};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("qverify").chain(args.iter().copied());
    let code = run(argv, &mut out).expect("command should run");
    (code, String::from_utf8(out).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn list_shows_every_entry() {
    let (code, text) = call(&["list"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(text.lines().count(), 25, "header plus 24 rows");
    assert!(text.lines().nth(1).unwrap().starts_with("GENFUN_SA"));

    let (_, text) = call(&["list", "--json"]);
    let v = json(&text);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 24);
    assert_eq!(arr[15]["id"], "CHU");

    let (code, text) = call(&["list", "--id", "CHU"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("q-Chu-Vandermonde summation formula is recalled"), "{text}");
    assert!(text.contains("params:"));
}

#[test]
fn unknown_identity_is_an_error() {
    let mut out = Vec::new();
    let err = run(["qverify", "list", "--id", "NOPE"], &mut out).unwrap_err();
    assert!(matches!(err, CliError::Library(_)));
}

#[test]
fn exact_check_reports_rational_sides() {
    let (code, text) = call(&["check", "CHU", "-p", "n=1", "x=1/3", "y=1/5", "q=1/2", "--exact", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&text);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["lhs"], "1/6");
    assert_eq!(v["rhs"], "1/6");
    assert_eq!(v["tower"], "exact");
}

#[test]
fn float_check_and_domain_skip() {
    let (code, text) = call(&[
        "check", "AA", "-p", "a=1", "b=0.4", "c=0.5", "d=0.3", "q=0.5", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&text)["verdict"], "pass");

    let (code, text) = call(&["check", "QBINOM_THM", "-p", "a=1/4", "z=1.5", "q=1/2", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&text);
    assert_eq!(v["verdict"], "skipped-domain");
    assert!(v["diagnostics"]["violations"][0].as_str().unwrap().starts_with("|z|<1"));
}

#[test]
fn failing_check_exits_one() {
    // A tolerance of zero in float mode cannot be met by the infinite sides.
    let (code, _) = call(&["check", "EULER", "-p", "z=0.7", "q=0.6", "--tol", "0"]);
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn usage_errors() {
    let (code, _) = call(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    let mut out = Vec::new();
    let err = run(["qverify", "check", "CHU", "-p", "n"], &mut out).unwrap_err();
    assert!(matches!(err, CliError::Usage(_)));
    let err = run(["qverify", "check", "AA", "-p", "a=1", "b=0", "c=1/2", "d=1/3", "q=1/2", "--exact"], &mut out)
        .unwrap_err();
    assert!(err.to_string().contains("float"), "{err}");
}

#[test]
fn config_errors_name_the_line() {
    let err = SweepConfig::parse("seed = 1\nbogus = 3\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    assert!(SweepConfig::parse("identities = NOPE\n").and_then(|c| c.selected().map(|_| c)).is_err());
    assert!(SweepConfig::parse("[identity CHU]\nrange.n = 3\n").is_err());
}

#[test]
fn sweep_json_schema() {
    let (code, text) = call(&["sweep", "--ids", "CHU,REMARK3", "--count", "3", "--seed", "5", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&text);
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["aggregates"].as_array().unwrap().len(), 2);
    assert_eq!(v["totals"]["cases"], 6);
    assert_eq!(v["totals"]["pass"], 6);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 6);
    for (i, c) in cases.iter().enumerate() {
        assert_eq!(c["index"], i);
    }
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn sweep_csv_has_one_row_per_case() {
    let (code, text) = call(&["sweep", "--ids", "CHU", "--count", "4", "--csv"]);
    assert_eq!(code, EXIT_OK);
    let mut rows = text.lines();
    assert!(rows.next().unwrap().starts_with("index,id,mode"));
    assert_eq!(rows.count(), 4);
}

#[test]
fn seed_changes_cases_not_shape() {
    let (_, a) = call(&["sweep", "--ids", "THM3_2", "--count", "4", "--seed", "1"]);
    let (_, b) = call(&["sweep", "--ids", "THM3_2", "--count", "4", "--seed", "2"]);
    let (a, b) = (json(&a), json(&b));
    assert_ne!(a["cases"], b["cases"]);
    let keys = |v: &Value| v.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    assert_eq!(keys(&a), keys(&b));
}

#[test]
fn parallelism_does_not_change_bytes() {
    let args = |n: &'static str| ["sweep", "--ids", "all", "--count", "2", "--seed", "9", "--parallel", n];
    let (_, one) = call(&args("1"));
    let (_, many) = call(&args("6"));
    assert_eq!(one, many);
}

#[test]
fn config_file_from_env_and_out_path() {
    let dir = std::env::temp_dir().join(format!("qverify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sweep.cfg");
    std::fs::write(
        &cfg,
        "# small exact run\nidentities = CHU\ncount = 3\nseed = 4\n\n[identity CHU]\nrange.n = 0,5\n",
    )
    .unwrap();
    let report = dir.join("out.json");
    // A child process keeps the variable away from the other tests.
    let done = std::process::Command::new(env!("CARGO_BIN_EXE_qverify"))
        .args(["sweep", "-o", report.to_str().unwrap()])
        .env(CONFIG_ENV, &cfg)
        .output()
        .unwrap();
    assert_eq!(done.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(done.stdout).unwrap();
    assert!(text.starts_with("3 cases: 3 pass"), "{text}");
    let v = json(&std::fs::read_to_string(&report).unwrap());
    for c in v["cases"].as_array().unwrap() {
        let n: i64 = c["params"]["n"].as_str().unwrap().parse().unwrap();
        assert!((0..=5).contains(&n));
    }

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "count = many\n").unwrap();
    let done = std::process::Command::new(env!("CARGO_BIN_EXE_qverify"))
        .args(["sweep", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(done.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&done.stderr).contains("line 1"));
    std::fs::remove_dir_all(&dir).ok();
}
