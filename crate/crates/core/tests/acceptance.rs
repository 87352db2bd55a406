//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use facetpivot::facet::{
    self, base_history, no_repeated_base, AuditReport, Certificate, FacetOptions, PivotRule, Status,
};
use facetpivot::generators::{
    cycling_fixture, klee_minty_v1, klee_minty_v2, random_instance, RandomKind, RandomSpec, CYCLING_FIXTURES,
};
use facetpivot::json::{from_json, to_json};
use facetpivot::model::{default_big_m, to_standard_general, GeneralLp, StandardGeneralLp};
use facetpivot::mps::read_mps;
use facetpivot::reference::{
    brute_force_optimal, dantzig_solve, to_standard_form, DantzigOptions, DEFAULT_ENUMERATION_CAP,
};

const KM1_REL_TOL: f64 = 1e-12;
const ORACLE_REL_TOL: f64 = 1e-7;
const NETLIB_REL_TOL: f64 = 1e-4;
const ORACLE_SEEDS: u64 = 500;
const ORACLE_SHAPES: [(usize, usize, usize); 3] = [(3, 1, 4), (4, 1, 6), (5, 2, 8)];
const CERT_SEEDS: u64 = 100;
const CERT_SHAPE: (usize, usize, usize) = (4, 1, 5);
const KB2_OBJ: f64 = -1.7499e3;
const RECIPE_OBJ: f64 = -266.6160;
const NETLIB_ENV: &str = "FACETPIVOT_NETLIB_DIR";

struct Verdict {
    ok: bool,
    skipped: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: String) -> Self {
        Verdict { ok, skipped: false, detail }
    }
}

fn standard(p: &GeneralLp<f64>) -> StandardGeneralLp<f64> {
    to_standard_general(p, default_big_m(p)).expect("generated instances are well formed")
}

fn audited(rule: PivotRule) -> FacetOptions<f64> {
    FacetOptions { audit: true, ..FacetOptions::with_rule(rule) }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn criterion_1(audit: &mut AuditReport) -> Verdict {
    let mut bad = vec![];
    for d in 3..=19 {
        let p = klee_minty_v2(d).unwrap();
        let out = facet::solve(&standard(&p), &audited(PivotRule::MaxDeviation)).unwrap();
        audit.merge(out.audit.as_ref().unwrap());
        let want = -(((1u64 << d) - 1) as f64);
        if out.status != Status::Optimal || out.iterations != d || out.objective != Some(want) {
            bad.push(format!("d={d}: {} in {} iterations, obj {:?}", out.status, out.iterations, out.objective));
        }
    }
    let detail =
        if bad.is_empty() { "d=3..19 optimal in exactly d iterations, objective exact".into() } else { bad.join("; ") };
    Verdict::new(bad.is_empty(), detail)
}

fn criterion_2(audit: &mut AuditReport) -> Verdict {
    let mut bad = vec![];
    let mut worst = 0.0f64;
    for d in 3..=16 {
        let p = klee_minty_v1(d).unwrap();
        let out = facet::solve(&standard(&p), &audited(PivotRule::MaxDeviation)).unwrap();
        audit.merge(out.audit.as_ref().unwrap());
        let err = out.objective.map_or(f64::INFINITY, |v| rel_err(v, -5f64.powi(d as i32)));
        worst = worst.max(err);
        if out.status != Status::Optimal || out.iterations != d || err > KM1_REL_TOL {
            bad.push(format!("facet d={d}: {} in {} iterations, rel err {err:e}", out.status, out.iterations));
        }
    }
    for d in 3..=12 {
        let sf = to_standard_form(&klee_minty_v1::<f64>(d).unwrap(), None).unwrap();
        let out = dantzig_solve(&sf, &DantzigOptions::default());
        if out.status != Status::Optimal || out.phase_two_pivots != (1 << d) - 1 {
            bad.push(format!("dantzig d={d}: {} after {} phase-2 pivots", out.status, out.phase_two_pivots));
        }
    }
    let detail = if bad.is_empty() {
        format!("facet d=3..16 in d iterations (worst rel err {worst:.1e}); dantzig d=3..12 in 2^d-1 pivots")
    } else {
        bad.join("; ")
    };
    Verdict::new(bad.is_empty(), detail)
}

fn criterion_3(audit: &mut AuditReport) -> Verdict {
    let mut mismatches = vec![];
    let mut optimal = 0;
    for (d, m, n) in ORACLE_SHAPES {
        for seed in 0..ORACLE_SEEDS {
            let p: GeneralLp<f64> = random_instance(seed, d, m, n);
            let sp = standard(&p);
            let oracle = brute_force_optimal(&sp, DEFAULT_ENUMERATION_CAP).unwrap();
            let out = match facet::solve(&sp, &audited(PivotRule::MaxDeviation)) {
                Ok(out) => out,
                Err(e) => {
                    mismatches.push(format!("({d},{m},{n}) seed {seed}: {e}"));
                    continue;
                }
            };
            audit.merge(out.audit.as_ref().unwrap());
            let agree = match (out.status, oracle.status) {
                (Status::Optimal, Status::Optimal) => {
                    optimal += 1;
                    rel_err(out.objective.unwrap(), oracle.objective.unwrap()) <= ORACLE_REL_TOL
                }
                (a, b) => a == b,
            };
            if !agree {
                mismatches.push(format!(
                    "({d},{m},{n}) seed {seed}: facet {} {:?}, oracle {} {:?}",
                    out.status, out.objective, oracle.status, oracle.objective
                ));
            }
        }
    }
    let total = ORACLE_SEEDS as usize * ORACLE_SHAPES.len();
    let detail = if mismatches.is_empty() {
        format!("{total} instances, {optimal} optimal, 0 mismatches")
    } else {
        format!(
            "{} mismatches: {}",
            mismatches.len(),
            mismatches.iter().take(5).cloned().collect::<Vec<_>>().join("; ")
        )
    };
    Verdict::new(mismatches.is_empty(), detail)
}

fn criterion_4(audit: &AuditReport) -> Verdict {
    let detail = format!(
        "{} pivots audited: sign {}, expansion {}, basic {}, monotone {} (worst residual/threshold {:.1e}, {:.1e})",
        audit.pivots,
        audit.sign,
        audit.expansion,
        audit.basic,
        audit.monotone,
        audit.worst_expansion,
        audit.worst_basic
    );
    let clean = audit.sign + audit.expansion + audit.basic + audit.monotone == 0;
    Verdict::new(clean && audit.pivots > 0, detail)
}

fn criterion_5() -> Verdict {
    let mut bad = vec![];
    for id in CYCLING_FIXTURES {
        let sp = standard(&cycling_fixture(id).unwrap());
        let (out, history) = base_history(&sp, &FacetOptions::with_rule(PivotRule::LeastIndex)).unwrap();
        if out.status != Status::Optimal || !no_repeated_base(&history) {
            bad.push(format!("{id} least-index: {}, repeated base {}", out.status, !no_repeated_base(&history)));
        }
        let out = facet::solve(&sp, &FacetOptions::with_rule(PivotRule::MaxDeviation)).unwrap();
        if out.status != Status::Optimal {
            bad.push(format!("{id} max-dev: {}", out.status));
        }
    }
    let detail = if bad.is_empty() {
        format!(
            "{} fixtures optimal under least-index with no repeated base, and under max-dev",
            CYCLING_FIXTURES.len()
        )
    } else {
        bad.join("; ")
    };
    Verdict::new(bad.is_empty(), detail)
}

fn criterion_6() -> Verdict {
    let (d, m, n) = CERT_SHAPE;
    let mut bad = vec![];
    for seed in 0..CERT_SEEDS {
        let sp = standard(&RandomSpec::new(seed, d, m, n).kind(RandomKind::Infeasible).build());
        let opts = FacetOptions::default();
        match facet::solve(&sp, &opts) {
            Ok(out) => match (&out.status, &out.certificate) {
                (Status::Infeasible, Some(Certificate::Infeasible(c)))
                    if c.verify(&sp, opts.tol.sign, opts.tol.lin) => {}
                _ => bad.push(format!("infeasible seed {seed}: {}", out.status)),
            },
            Err(e) => bad.push(format!("infeasible seed {seed}: {e}")),
        }

        let sp = standard(&RandomSpec::new(seed, d, m, n).kind(RandomKind::Unbounded).build());
        match facet::solve(&sp, &opts) {
            Ok(out) => match (&out.status, &out.certificate) {
                (Status::Unbounded, Some(Certificate::Unbounded { rows }))
                    if !rows.is_empty() && rows.iter().all(|&r| sp.is_artificial(r) && out.base.contains(&r)) => {}
                _ => bad.push(format!("unbounded seed {seed}: {}", out.status)),
            },
            Err(e) => bad.push(format!("unbounded seed {seed}: {e}")),
        }
    }
    let detail = if bad.is_empty() {
        format!(
            "{CERT_SEEDS} infeasible with verified certificates, {CERT_SEEDS} unbounded with binding artificial rows"
        )
    } else {
        format!("{} misclassified: {}", bad.len(), bad.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    };
    Verdict::new(bad.is_empty(), detail)
}

fn find_netlib(name: &str) -> Option<PathBuf> {
    let mut dirs = vec![];
    if let Ok(dir) = std::env::var(NETLIB_ENV) {
        dirs.push(PathBuf::from(dir));
    }
    dirs.push(fixtures_dir().join("netlib"));
    let upper = name.to_uppercase();
    let candidates = [format!("{name}.mps"), format!("{upper}.mps"), format!("{upper}.SIF"), name.to_string(), upper];
    dirs.iter().flat_map(|d| candidates.iter().map(move |c| d.join(c))).find(|p| p.is_file())
}

fn criterion_7() -> Verdict {
    let mut parts = vec![];
    let mut ok = true;
    for (name, want) in [("kb2", KB2_OBJ), ("recipe", RECIPE_OBJ)] {
        let Some(path) = find_netlib(name) else {
            return Verdict { ok: true, skipped: true, detail: format!("{name} not found; set {NETLIB_ENV}") };
        };
        let text = std::fs::read_to_string(&path).unwrap();
        let result = read_mps::<f64>(&text)
            .map_err(|e| e.to_string())
            .and_then(|(p, _)| facet::solve(&standard(&p), &FacetOptions::default()).map_err(|e| e.to_string()));
        match result {
            Ok(out) => {
                let err = out.objective.map_or(f64::INFINITY, |v| rel_err(v, want));
                ok &= out.status == Status::Optimal && err <= NETLIB_REL_TOL;
                parts.push(format!(
                    "{name} obj {:.4} ({} iterations, rel err {err:.1e}, {})",
                    out.objective.unwrap_or(f64::NAN),
                    out.iterations,
                    path.display()
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    Verdict::new(ok, parts.join("; "))
}

fn mps_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "mps")).collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}

fn criterion_8() -> Verdict {
    let files: Vec<PathBuf> = ["mps", "netlib"].iter().flat_map(|d| mps_files(&fixtures_dir().join(d))).collect();
    let mut bad = vec![];
    for path in &files {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let (p, _) = match read_mps::<f64>(&std::fs::read_to_string(path).unwrap()) {
            Ok(v) => v,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        let back: GeneralLp<f64> = match from_json(&to_json(&p, Some(&name))) {
            Ok(v) => v,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        let opts = FacetOptions::default();
        let a = facet::solve(&standard(&p), &opts).map(|o| (o.status, o.objective.map(f64::to_bits)));
        let b = facet::solve(&standard(&back), &opts).map(|o| (o.status, o.objective.map(f64::to_bits)));
        if p != back || a != b || a.is_err() {
            bad.push(format!("{name}: reloaded problem or objective differs"));
        }
    }
    let detail = if bad.is_empty() {
        format!("{} MPS fixtures re-solve bit-identically after the JSON round trip", files.len())
    } else {
        bad.join("; ")
    };
    Verdict::new(bad.is_empty() && !files.is_empty(), detail)
}

fn main() -> ExitCode {
    let mut audit = AuditReport::default();
    let mut failed = 0;
    let mut report = |n: usize, budget: Duration, run: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let tag = match (v.skipped, v.ok && in_time) {
            (true, _) => "SKIPPED",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        if tag == "FAIL" {
            failed += 1;
        }
        let late = if in_time { String::new() } else { format!(", over the {budget:?} budget") };
        println!("{tag} criterion {n}: {} [{:.2} s{late}]", v.detail, elapsed.as_secs_f64());
    };

    report(1, Duration::from_secs(1), &mut || criterion_1(&mut audit));
    report(2, Duration::from_secs(60), &mut || criterion_2(&mut audit));
    report(3, Duration::from_secs(120), &mut || criterion_3(&mut audit));
    report(4, Duration::MAX, &mut || criterion_4(&audit));
    report(5, Duration::from_secs(5), &mut criterion_5);
    report(6, Duration::from_secs(30), &mut criterion_6);
    report(7, Duration::MAX, &mut criterion_7);
    report(8, Duration::from_secs(2), &mut criterion_8);

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
