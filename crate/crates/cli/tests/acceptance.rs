//! The ten acceptance criteria on the bundled scenario. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use toroidal_cli::{build, run_check, run_scenario, ScenarioConfig, Workbench};
use toroidal_core::report::CheckReport;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[CheckReport], extra: impl FnOnce(&[CheckReport]) -> Result<(), String>) -> Outcome {
    let mut detail: Vec<String> = reports.iter().map(|r| format!("{}: checked {} failures {}", r.identity, r.checked, r.failure_count)).collect();
    let mut passed = reports.iter().all(|r| r.passed);
    if let Err(e) = extra(reports) {
        passed = false;
        detail.push(e);
    }
    Outcome { passed, detail: detail.join("; ") }
}

fn checks(wb: &Workbench, names: &[&str]) -> Result<Vec<CheckReport>, String> {
    names.iter().map(|n| run_check(wb, n).map_err(|e| e.to_string())).collect()
}

fn note_values(r: &CheckReport, prefix: &str) -> Vec<String> {
    r.notes.iter().filter_map(|n| n.split_once(prefix).map(|(_, v)| v.to_string())).collect()
}

fn read_dir(p: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(p).unwrap().map(|e| {
        let e = e.unwrap();
        (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
    }).collect()
}

fn criterion(wb: &Workbench, cfg: &ScenarioConfig, n: usize) -> Result<Outcome, String> {
    Ok(match n {
        1 => from_reports(&checks(wb, &["delta_identity"])?, |_| Ok(())),
        2 => from_reports(&checks(wb, &["mode_commutator"])?, |_| Ok(())),
        3 => from_reports(&checks(wb, &["product_forms"])?, |r| {
            if cfg.caps.random_pairs != 20 || r[0].seed.is_none() {
                return Err(format!("{} pairs, seed {:?}", cfg.caps.random_pairs, r[0].seed));
            }
            Ok(())
        }),
        4 => from_reports(&checks(wb, &["mode_table"])?, |_| Ok(())),
        5 => from_reports(&checks(wb, &["twisted_jacobi", "untwisted_jacobi"])?, |_| Ok(())),
        6 => from_reports(&checks(wb, &["weak_commutativity", "weak_associativity"])?, |r| {
            let ks = note_values(&r[0], ": k = ");
            let worst = ks.iter().map(|k| k.parse::<i64>().unwrap()).max().unwrap_or(i64::MAX);
            if ks.len() != 9 || worst > 2 {
                return Err(format!("locality orders {ks:?}"));
            }
            Ok(())
        }),
        7 => from_reports(&checks(wb, &["va_automorphism"])?, |_| {
            if cfg.caps.automorphism_samples < 50 {
                return Err("fewer than 50 samples".into());
            }
            Ok(())
        }),
        8 => from_reports(&checks(wb, &["equivariance"])?, |_| Ok(())),
        9 => from_reports(&checks(wb, &["negative_controls"])?, |r| {
            // 27 perturbations times the three guarded checks.
            if r[0].checked != 81 {
                return Err(format!("{} control runs", r[0].checked));
            }
            Ok(())
        }),
        10 => {
            let a = tempfile::tempdir().unwrap();
            let b = tempfile::tempdir().unwrap();
            let sa = run_scenario(cfg, a.path()).map_err(|e| e.to_string())?;
            let sb = run_scenario(cfg, b.path()).map_err(|e| e.to_string())?;
            let (fa, fb) = (read_dir(a.path()), read_dir(b.path()));
            let same = fa == fb && fa.len() == cfg.checks.len() + 1;
            Outcome {
                passed: same && sa.passed && sb.passed,
                detail: format!("{} files, identical: {same}, summaries pass: {} {}", fa.len(), sa.passed, sb.passed),
            }
        }
        _ => unreachable!(),
    })
}

fn main() {
    let limits: [(usize, &str, Option<u64>); 10] = [
        (1, "delta identity", Some(5)),
        (2, "toroidal bracket oracle", Some(30)),
        (3, "residue and closed product forms agree", Some(60)),
        (4, "mode table", None),
        (5, "twisted Jacobi and untwisted specialization", Some(300)),
        (6, "weak commutativity and weak associativity", None),
        (7, "automorphism lift", None),
        (8, "equivariance", None),
        (9, "negative controls", None),
        (10, "determinism", None),
    ];
    let cfg = ScenarioConfig::bundled("sl2-twisted-default").expect("bundled scenario");
    let wb = build(&cfg).expect("bundled scenario builds");
    let mut failed = 0;
    for (n, name, limit) in limits {
        let t = Instant::now();
        let outcome = criterion(&wb, &cfg, n).unwrap_or_else(|e| Outcome { passed: false, detail: format!("error: {e}") });
        let dt = t.elapsed();
        let in_time = limit.is_none_or(|s| dt < Duration::from_secs(s));
        let ok = outcome.passed && in_time;
        failed += usize::from(!ok);
        let bound = limit.map(|s| format!(" (limit {s}s)")).unwrap_or_default();
        println!("{} criterion {n:>2}: {name} [{:.2}s{bound}] {}", if ok { "PASS" } else { "FAIL" }, dt.as_secs_f64(), outcome.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
