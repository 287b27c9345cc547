//! Building a scenario and running checks against it.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use toroidal_core::liealg::{parse_scalar, validate_family, AlgebraInput, AutomorphismFamily, LieAlgebra};
use toroidal_core::report::CheckReport;
use toroidal_core::repn::unit;
use toroidal_core::scalars::{int, parse_rational, rat, Cyclotomic, Matrix, Rational};
use toroidal_core::toroidal::{mode_allows, tau_component, CommutatorRanges, ToroidalElement, Twist};
use toroidal_core::verify::{self, CheckWindow, Scenario, VerifyError};
use toroidal_core::vertexops::{ClosureCaps, SampleWindow};

use crate::config::ScenarioConfig;
use crate::CliError;

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Lie(_) | VerifyError::Repn(_) | VerifyError::Input(_) => CliError::validation(e.to_string()),
            _ => CliError::check(e.to_string()),
        }
    }
}

/// A built scenario plus the inputs needed to rebuild variants of it.
pub struct Workbench {
    pub cfg: ScenarioConfig,
    pub fingerprint: String,
    pub lie: LieAlgebra,
    pub family: AutomorphismFamily,
    pub level: Cyclotomic,
    pub degree_cap: Rational,
    pub scenario: Scenario,
}

fn parse_matrix(rows: &[Vec<serde_json::Value>], index: usize) -> Result<Matrix, CliError> {
    let mut out = Vec::new();
    for row in rows {
        let r: Result<Vec<Cyclotomic>, _> = row.iter().map(parse_scalar).collect();
        out.push(r.map_err(|e| CliError::validation(format!("automorphism {index}: {e}")))?);
    }
    if out.is_empty() || out.iter().any(|r| r.len() != out.len()) {
        return Err(CliError::validation(format!("automorphism {index}: matrix is not square")));
    }
    Ok(Matrix::from_rows(out))
}

/// SHA-256 of the scenario with the output path blanked, plus any algebra file contents.
fn fingerprint(cfg: &ScenarioConfig, algebra_text: Option<&str>) -> String {
    let mut c = cfg.clone();
    c.output = PathBuf::new();
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&c).expect("config serializes"));
    if let Some(t) = algebra_text {
        h.update(t.as_bytes());
    }
    hex::encode(h.finalize())
}

fn ratio_floor(r: &Rational) -> Result<i64, CliError> {
    use num_traits::ToPrimitive;
    r.floor().to_integer().to_i64().ok_or_else(|| CliError::validation(format!("{r} is out of range")))
}

fn window_for(cfg: &ScenarioConfig, n0: i64) -> Result<CheckWindow, CliError> {
    let sd = cfg.caps.sample_degree()? * Rational::from_integer(n0.into());
    Ok(CheckWindow {
        exponent_bound: cfg.caps.exponent_bound,
        spatial: cfg.caps.spatial,
        sample_degree_scaled: ratio_floor(&sd)?,
        locality_cap: cfg.caps.locality_cap,
    })
}

fn scenario_from(id: &str, lie: LieAlgebra, fam: AutomorphismFamily, level: &Cyclotomic, cfg: &ScenarioConfig) -> Result<Scenario, CliError> {
    let mut sc = Scenario::new(id, lie, fam, level.clone(), &cfg.caps.degree_cap()?, cfg.caps.weight)?;
    sc.window = window_for(cfg, sc.n0())?;
    Ok(sc)
}

/// Builds algebra, automorphism family, modules and field arenas. Every validation failure is
/// reported before any check runs.
pub fn build(cfg: &ScenarioConfig) -> Result<Workbench, CliError> {
    cfg.validate()?;
    let (lie, text) = match (&cfg.algebra.preset, cfg.algebra_file()) {
        (Some(p), _) => (LieAlgebra::preset(p).map_err(|e| CliError::validation(e.to_string()))?, None),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            let input = AlgebraInput::from_json(&text).map_err(|e| CliError::validation(e.to_string()))?;
            (input.algebra().map_err(|e| CliError::validation(e.to_string()))?, Some(text))
        }
        (None, None) => return Err(CliError::validation("algebra needs exactly one of preset or file")),
    };
    let autos: Vec<Matrix> = cfg.automorphisms.iter().enumerate().map(|(i, a)| parse_matrix(&a.matrix, i)).collect::<Result<_, _>>()?;
    let orders: Vec<u32> = cfg.automorphisms.iter().map(|a| a.order).collect();
    let family = validate_family(&lie, autos, Some(&orders)).map_err(|e| CliError::validation(e.to_string()))?;
    let level = parse_scalar(&cfg.level).map_err(|e| CliError::validation(format!("level: {e}")))?;
    let fp = fingerprint(cfg, text.as_deref());
    let id = format!("{}#{}", cfg.name, &fp[..16]);
    let scenario = scenario_from(&id, lie.clone(), family.clone(), &level, cfg)?;
    Ok(Workbench { cfg: cfg.clone(), fingerprint: fp, lie, family, level, degree_cap: cfg.caps.degree_cap()?, scenario })
}

fn closure_caps(cfg: &ScenarioConfig) -> ClosureCaps {
    ClosureCaps {
        depth: cfg.caps.closure_depth,
        max_members: cfg.caps.closure_members,
        locality_cap: cfg.caps.locality_cap,
        ..ClosureCaps::default()
    }
}

fn commutator_ranges(cfg: &ScenarioConfig) -> CommutatorRanges {
    let b = cfg.caps.commutator_bound;
    CommutatorRanges { mode_bound: b, spatial_bound: b, delta_window: 2 * b }
}

fn seed_pairs(sc: &Scenario) -> Vec<(usize, usize)> {
    let d = sc.alg.dim();
    (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect()
}

/// Runs one registered check.
pub fn run_check(wb: &Workbench, name: &str) -> Result<CheckReport, CliError> {
    let sc = &wb.scenario;
    let cfg = &wb.cfg;
    let seed = cfg.seed;
    let rep = match name {
        "delta_identity" => verify::check_delta_identity(&[int(0), rat(1, 2), rat(1, 3), rat(2, 3)], cfg.caps.delta_bound, &sc.id)?,
        "mode_commutator" => verify::check_toroidal_brackets(sc, &commutator_ranges(cfg))?,
        "product_forms" => {
            let (_, cl) = verify::current_closure(sc, &closure_caps(cfg))?;
            let mut r = verify::check_product_forms(sc, &cl, cfg.caps.random_pairs, cfg.caps.pair_degree, seed)?;
            r.notes.insert(0, format!("closure: {} members, exhausted: {}", cl.members.len(), cl.exhausted));
            r
        }
        "mode_table" => verify::check_mode_table(sc)?,
        "twisted_jacobi" => verify::check_generator_jacobi(sc, cfg.caps.jacobi_min_per_pair, false)?,
        "untwisted_jacobi" => untwisted_jacobi(wb)?,
        "weak_commutativity" => {
            let mut rep = CheckReport::new("weak commutativity", "weak commutativity with certified order at most 2", &sc.id);
            let win = SampleWindow { mode_bound: sc.window.exponent_bound, spatial: sc.window.spatial, vectors: vec![sc.w.vacuum()] };
            for (i, j) in seed_pairs(sc) {
                let (a, b) = (sc.y_w(&sc.seed(i)), sc.y_w(&sc.seed(j)));
                let (r, k) = verify::check_weak_commutativity(&sc.wa, a, b, &win, cfg.caps.locality_cap, &sc.id)?;
                rep.absorb(r);
                let tag = format!("({}, {})", sc.alg.label(i), sc.alg.label(j));
                rep.note(format!("{tag}: k = {k}"));
                rep.record(k <= 2, || (vec![tag], format!("k = {k}"), "k <= 2".into()));
            }
            rep.finish()
        }
        "weak_associativity" => {
            let mut rep = CheckReport::new("twisted weak associativity", "twisted weak associativity", &sc.id);
            for (i, j) in seed_pairs(sc) {
                rep.absorb(verify::check_weak_associativity(sc, &sc.seed(i), &sc.seed(j), sc.w.vacuum())?);
            }
            rep.finish()
        }
        "iterate_formula" => {
            let mut rep = CheckReport::new("twisted iterate formula", "twisted iterate formula and its variant", &sc.id);
            let one = unit(sc.vl.vacuum());
            let ws = sc.w_samples();
            rep.absorb(verify::check_iterate_formula(sc, &one, &sc.seed(0), &ws)?);
            for (i, j) in seed_pairs(sc) {
                rep.absorb(verify::check_iterate_formula(sc, &sc.seed(i), &sc.seed(j), &ws)?);
            }
            rep.finish()
        }
        "va_automorphism" => {
            let mut rep = CheckReport::new("vertex algebra automorphism", "lifted automorphism is a homomorphism", &sc.id);
            rep.seed = Some(seed);
            for i in 0..sc.alg.orders().len() {
                rep.absorb(verify::check_va_automorphism(sc, i, cfg.caps.automorphism_samples, seed.wrapping_add(i as u64)));
            }
            rep.finish()
        }
        "equivariance" => {
            let mut rep = CheckReport::new("equivariance", "equivariance under spatial automorphisms", &sc.id);
            let vs: Vec<u32> = sc.vl.basis().iter().copied().filter(|&v| sc.vl.depth(v) <= cfg.caps.equivariance_depth).collect();
            rep.note(format!("{} vectors of depth <= {}", vs.len(), cfg.caps.equivariance_depth));
            for i in 1..=sc.alg.rank() {
                rep.absorb(verify::check_equivariance(sc, &vs, i, &sc.w_samples())?);
            }
            rep.finish()
        }
        "negative_controls" => negative_controls(wb)?,
        other => return Err(CliError::validation(format!("unknown check {other:?}"))),
    };
    Ok(rep)
}

/// With every automorphism replaced by the identity, the twisted identity and the mode form of
/// the untwisted one must both hold.
fn untwisted_jacobi(wb: &Workbench) -> Result<CheckReport, CliError> {
    let d = wb.lie.dim();
    let fam = validate_family(&wb.lie, vec![Matrix::identity(d); wb.family.autos().len()], None).map_err(|e| CliError::validation(e.to_string()))?;
    let sc = scenario_from(&format!("{}-untwisted", wb.scenario.id), wb.lie.clone(), fam, &wb.level, &wb.cfg)?;
    let mut rep = CheckReport::new("untwisted specialization", "twisted Jacobi identity with trivial automorphisms", &wb.scenario.id);
    let ws = sc.w_samples();
    for (i, j) in seed_pairs(&sc) {
        let a = verify::check_twisted_jacobi(&sc, &sc.seed(i), &sc.seed(j), &ws)?;
        let b = verify::check_jacobi(&sc, &sc.seed(i), &sc.seed(j), &ws)?;
        let tag = format!("({}, {})", sc.alg.label(i), sc.alg.label(j));
        rep.note(format!("{tag}: twisted {} checked, untwisted {} checked", a.checked, b.checked));
        rep.record(a.passed == b.passed, || (vec![tag.clone()], format!("twisted passed: {}", a.passed), format!("untwisted passed: {}", b.passed)));
        rep.absorb(a);
        rep.absorb(b);
    }
    Ok(rep.finish())
}

/// Raises each structure constant by 1 in turn; the mode commutator, mode table and twisted
/// Jacobi checks must each fail with a nonempty failure list.
fn negative_controls(wb: &Workbench) -> Result<CheckReport, CliError> {
    let mut rep = CheckReport::new("negative controls", "single structure constant perturbations are detected", &wb.scenario.id);
    let d = wb.lie.dim();
    let mut missed = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let tag = format!("[{},{}]_{}", wb.lie.labels()[i], wb.lie.labels()[j], wb.lie.labels()[k]);
                let mut sc = Scenario::perturbed(&wb.scenario.id, wb.lie.clone(), &wb.family, (i, j, k), wb.level.clone(), &wb.degree_cap, wb.cfg.caps.weight)?;
                sc.window = wb.scenario.window.clone();
                let runs: [(&str, Result<CheckReport, VerifyError>); 3] = [
                    ("mode_commutator", verify::check_toroidal_brackets(&sc, &commutator_ranges(&wb.cfg))),
                    ("mode_table", verify::check_mode_table(&sc)),
                    ("twisted_jacobi", verify::check_generator_jacobi(&sc, 0, true)),
                ];
                for (check, r) in runs {
                    let (caught, detail) = match r {
                        Ok(r) => (!r.passed && !r.failures.is_empty(), format!("{} failures", r.failure_count)),
                        Err(e) => (false, format!("error: {e}")),
                    };
                    if !caught {
                        missed.push(format!("{tag} {check}"));
                    }
                    rep.record(caught, || (vec![tag.clone(), check.to_string()], detail, "nonempty failure list".into()));
                }
            }
        }
    }
    if !missed.is_empty() {
        rep.note(format!("undetected: {}", missed.join("; ")));
    }
    Ok(rep.finish())
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub identity: String,
    pub passed: bool,
    pub checked: u64,
    pub failure_count: u64,
    pub skipped: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub schema: &'static str,
    pub scenario: String,
    pub fingerprint: String,
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

fn write_json(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

/// Runs the configured checks in order, writing `<name>.json` per check and `summary.json`.
pub fn run_scenario(cfg: &ScenarioConfig, out: &Path) -> Result<RunSummary, CliError> {
    let wb = build(cfg)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(format!("{}: {e}", out.display())))?;
    let mut checks = Vec::new();
    for name in &cfg.checks {
        let rep = run_check(&wb, name)?;
        write_json(&out.join(format!("{name}.json")), &rep.to_json_pretty())?;
        checks.push(CheckSummary {
            name: name.clone(),
            identity: rep.identity.clone(),
            passed: rep.passed,
            checked: rep.checked,
            failure_count: rep.failure_count,
            skipped: rep.skipped,
        });
    }
    let summary = RunSummary {
        schema: "toroidal-report/1",
        scenario: cfg.name.clone(),
        fingerprint: wb.fingerprint.clone(),
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    write_json(&out.join("summary.json"), &serde_json::to_string_pretty(&summary).expect("summary serializes"))?;
    Ok(summary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DumpKind {
    Basis,
    Operator,
    Closure,
}

impl DumpKind {
    pub fn name(self) -> &'static str {
        match self {
            DumpKind::Basis => "basis",
            DumpKind::Operator => "operator",
            DumpKind::Closure => "closure",
        }
    }
}

/// `c`, or `LABEL@T0@M1,...,Mr` with an eigenbasis label and a rational `t0` exponent.
fn parse_element(wb: &Workbench, spec: &str) -> Result<ToroidalElement, CliError> {
    let sc = &wb.scenario;
    let n0 = sc.alg.n0();
    if spec == "c" {
        return Ok(ToroidalElement::central_element(n0, Cyclotomic::one()));
    }
    let parts: Vec<&str> = spec.split('@').collect();
    let bad = || CliError::validation(format!("element {spec:?}: expected c or LABEL@T0@M1,...,Mr"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let idx = sc.alg.labels().iter().position(|l| l == parts[0]).ok_or_else(|| {
        CliError::validation(format!("element {spec:?}: unknown label; eigenbasis labels are {}", sc.alg.labels().join(", ")))
    })?;
    let t0 = parse_rational(parts[1]).ok_or_else(bad)? * Rational::from_integer((n0 as i64).into());
    if !t0.is_integer() {
        return Err(CliError::validation(format!("element {spec:?}: t0 exponent not in (1/{n0})Z")));
    }
    let t0s = ratio_floor(&t0)?;
    let m: Vec<i64> = if parts[2].is_empty() { vec![] } else { parts[2].split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<_, _>>()? };
    if m.len() != sc.alg.rank() {
        return Err(CliError::validation(format!("element {spec:?}: need {} spatial exponents", sc.alg.rank())));
    }
    if !mode_allows(&sc.alg, Twist::Tau, idx, t0s, &m) {
        return Err(CliError::validation(format!("element {spec:?}: this mode is not in the twisted algebra")));
    }
    Ok(tau_component(&sc.alg, &sc.alg.basis_vector(idx), t0s, &m))
}

/// Writes `dump-<what>.json` into `out` and returns its path.
pub fn dump(cfg: &ScenarioConfig, what: DumpKind, element: Option<&str>, out: &Path) -> Result<PathBuf, CliError> {
    let wb = build(cfg)?;
    let sc = &wb.scenario;
    let value = match what {
        DumpKind::Basis => serde_json::json!({
            "scenario": sc.id,
            "twisted_vacuum": sc.w.basis_json(),
            "vacuum": sc.vl.basis_json(),
        }),
        DumpKind::Operator => {
            let spec = element.ok_or_else(|| CliError::validation("dump operator needs --element"))?;
            let x = parse_element(&wb, spec)?;
            let (entries, outside) = sc.w.operator_matrix(&x);
            let entries: Vec<serde_json::Value> = entries.into_iter().map(|(r, c, v)| serde_json::json!([r, c, v.to_string()])).collect();
            serde_json::json!({
                "scenario": sc.id,
                "element": x.display(&sc.alg, sc.alg.labels()),
                "module": "twisted_vacuum",
                "dimension": sc.w.basis().len(),
                "entries": entries,
                "entries_outside_box": outside,
            })
        }
        DumpKind::Closure => {
            let (_, cl) = verify::current_closure(sc, &closure_caps(cfg))?;
            serde_json::json!({ "scenario": sc.id, "closure": cl })
        }
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::io(format!("{}: {e}", out.display())))?;
    let path = out.join(format!("dump-{}.json", what.name()));
    write_json(&path, &serde_json::to_string_pretty(&value).expect("dump serializes"))?;
    Ok(path)
}
