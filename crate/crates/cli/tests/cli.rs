use std::path::PathBuf;
use std::process::{Command, Output};

fn facetpivot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facetpivot"))
        .args(args)
        .env_remove("FACETPIVOT_NETLIB_DIR")
        .output()
        .expect("binary runs")
}

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solves_klee_minty_from_json() {
    let out = facetpivot(&["solve", &fixture("json/km2_d10.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("Optimal, obj=-1023, iters=10"));
}

#[test]
fn infeasible_reports_certificate_row() {
    let out = facetpivot(&["solve", &fixture("json/infeasible.json")]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.starts_with("Infeasible"), "{text}");
    assert!(text.contains("certificate row 0"), "{text}");
}

#[test]
fn iteration_limit_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("km1.json");
    let gen = facetpivot(&["generate", "km1", "-d", "5", "-o", path.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    for solver in ["facet", "dantzig"] {
        let out = facetpivot(&["solve", path.to_str().unwrap(), "--max-iter", "1", "--solver", solver]);
        assert_eq!(out.status.code(), Some(5), "{solver}");
        assert!(stdout(&out).starts_with("IterationLimit"));
    }
}

#[test]
fn unbounded_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ub.json");
    facetpivot(&["generate", "random", "--kind", "unbounded", "--seed", "3", "-o", path.to_str().unwrap()]);
    let out = facetpivot(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", stdout(&out));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mps");
    std::fs::write(&path, "NAME BAD\nROWS\n N COST\n L LIM\nCOLUMNS\n X COST 1 NOPE 2\nENDATA\n").unwrap();
    let out = facetpivot(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 6"));

    let out = facetpivot(&["solve", &fixture("mps/tiny.mps"), "--rule", "steepest"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_solver_agrees_on_an_mps_fixture() {
    for solver in ["facet", "dantzig", "oracle"] {
        let out = facetpivot(&["solve", &fixture("mps/tiny.mps"), "--solver", solver, "--print-x"]);
        assert_eq!(out.status.code(), Some(0), "{solver}");
        let text = stdout(&out);
        assert!(text.starts_with("Optimal, obj=8,"), "{solver}: {text}");
        assert!(text.contains("X = 3\nY = 1\n"), "{solver}: {text}");
    }
}

#[test]
fn trace_has_one_record_per_pivot() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let out = facetpivot(&["solve", &fixture("json/km2_d10.json"), "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    let records: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 10);
    for (k, r) in records.iter().enumerate() {
        assert_eq!(r["k"], k);
        assert_eq!(r["rule"], "max-dev");
    }
}

#[test]
fn bench_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = facetpivot(&["bench", "km2", "--sizes", "3..8", "--csv", path.to_str().unwrap(), "--no-timing"]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(&path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);

    let text = String::from_utf8(a).unwrap();
    let mut data = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(data.next(), Some("name,n,m,d,solver,rule,iterations,wall_ms,status,objective"));
    let rows: Vec<Vec<&str>> = data.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12);
    for d in 3..=8usize {
        let facet = &rows[2 * (d - 3)];
        let dantzig = &rows[2 * (d - 3) + 1];
        assert_eq!((facet[0], facet[4]), (format!("km2_d{d}").as_str(), "facet"));
        assert_eq!(facet[6], d.to_string());
        assert_eq!(dantzig[6], ((1usize << d) - 1).to_string());
        assert_eq!(facet[9], (-(((1i64 << d) - 1) as f64)).to_string());
    }
}

#[test]
fn km1_dantzig_column() {
    let out = facetpivot(&["bench", "km1", "--sizes", "3..10", "--solvers", "dantzig", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let iterations: Vec<String> =
        text.lines().filter(|l| l.starts_with("km1_")).map(|l| l.split(',').nth(6).unwrap().to_string()).collect();
    let want: Vec<String> = (3..=10).map(|d| ((1usize << d) - 1).to_string()).collect();
    assert_eq!(iterations, want);
}

#[test]
fn cycling_suite_is_optimal_under_least_index() {
    let out = facetpivot(&["bench", "cycling", "--rule", "least-index", "--solvers", "facet", "--no-timing"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("cycling_")).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.split(',').nth(8) == Some("Optimal")), "{text}");
}

#[test]
fn netlib_dir_suite() {
    let out = Command::new(env!("CARGO_BIN_EXE_facetpivot"))
        .args(["bench", "netlib-dir", "--solvers", "facet", "--no-timing"])
        .env("FACETPIVOT_NETLIB_DIR", fixture("netlib"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let kb2 = text.lines().find(|l| l.starts_with("kb2,")).unwrap();
    assert!(kb2.starts_with("kb2,27,16,41,facet,max-dev,"), "{kb2}");
    assert!(text.contains("recipe,24,67,180,facet"));

    assert_eq!(facetpivot(&["bench", "netlib-dir"]).status.code(), Some(2));
}

#[test]
fn verify_finds_no_mismatches() {
    let out = facetpivot(&["verify", "--seeds", "500", "-d", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(", 0 mismatches"));

    for (kind, word) in [("infeasible", "100 infeasible"), ("unbounded", "100 unbounded")] {
        let out = facetpivot(&["verify", "--seeds", "100", "--kind", kind]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        assert!(stdout(&out).contains(word), "{kind}: {}", stdout(&out));
    }
}

#[test]
fn generated_json_matches_the_fixture() {
    let out = facetpivot(&["generate", "km2", "-d", "10"]);
    let generated: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let fixture: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("json/km2_d10.json")).unwrap()).unwrap();
    assert_eq!(generated, fixture);
}
