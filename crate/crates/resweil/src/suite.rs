//! Runs the checks of a case and aggregates cases into a suite.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use resweil_core::weilres::{adjunction_check_with, open_cover_check, product_formula_check};
use resweil_core::{verify_lemma_local, verify_theorem, weil_restrict, Error as CoreError, TheoremOutcome};

use crate::case::{parse_case, Case, CheckKind, Expectation, Instance};
use crate::report::{
    labels, list, CheckLine, CycleTypes, Dims, GammaSummary, Inputs, PsiSample, PsiWitness, Report, RestrictionSummary,
    CONVENTION,
};

/// Largest stage used by the product and cover checks.
const MAX_STAGE: usize = 3;
const PSI_SAMPLES: usize = 4;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub timings: bool,
    /// Worker threads; 0 picks the available parallelism.
    pub threads: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: resweil_core::DEFAULT_SEED,
            timings: false,
            threads: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Passed,
    Failed,
    GuardExceeded,
}

/// Result of one case: its report and whether a resource guard tripped.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRun {
    pub status: CaseStatus,
    pub report: Report,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub cases: Vec<CaseRun>,
    pub input_errors: Vec<InputError>,
    pub exit_code: i32,
}

impl SuiteOutcome {
    fn finish(mut cases: Vec<CaseRun>, input_errors: Vec<InputError>) -> SuiteOutcome {
        cases.sort_by(|a, b| a.report.case.cmp(&b.report.case));
        let exit_code = if !input_errors.is_empty() {
            2
        } else if cases.iter().any(|c| c.status == CaseStatus::GuardExceeded) {
            3
        } else if cases.iter().any(|c| c.status == CaseStatus::Failed) {
            1
        } else {
            0
        };
        SuiteOutcome {
            cases,
            input_errors,
            exit_code,
        }
    }
}

fn is_guard(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::StepGuardExceeded(_) | CoreError::SearchGuardExceeded(_) | CoreError::DegreeGuardExceeded(_)
    )
}

struct Timer {
    on: bool,
    laps: BTreeMap<String, u64>,
}

impl Timer {
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.on {
            *self.laps.entry(name.to_string()).or_default() += start.elapsed().as_millis() as u64;
        }
        out
    }
}

struct Builder {
    report: Report,
    guard: bool,
    negative: bool,
}

impl Builder {
    fn push(&mut self, c: CheckLine) {
        self.report.checks.push(c);
    }

    fn error(&mut self, name: &str, e: &CoreError) {
        self.guard |= is_guard(e);
        self.push(CheckLine::new(name, false, e.to_string()));
    }

    /// Failing lines of a negative control are the intended outcome.
    fn push_control(&mut self, c: CheckLine) {
        let mut c = c;
        c.expected_failure = self.negative && !c.passed;
        self.push(c);
    }
}

/// Runs every check enabled in `case`.
pub fn run_case(case: &Case, opts: &SuiteOptions) -> CaseRun {
    let seed = opts.seed;
    let mut timer = Timer {
        on: opts.timings,
        laps: BTreeMap::new(),
    };
    let mut b = Builder {
        report: Report {
            case: case.name.clone(),
            inputs: Inputs::of(case),
            dims: Dims::default(),
            s: None,
            fibers: Vec::new(),
            restriction: None,
            pi0_left: None,
            pi0_right: None,
            cycle_types: None,
            psi_witness: None,
            checks: Vec::new(),
            timings_ms: None,
            seed,
        },
        guard: false,
        negative: !case.expect_smooth(),
    };
    match case.instantiate() {
        Ok(inst) => run_instance(case, &inst, seed, &mut b, &mut timer),
        Err(e) => b.error("instantiate", &e),
    }
    if opts.timings {
        b.report.timings_ms = Some(timer.laps);
    }
    let status = if b.guard {
        CaseStatus::GuardExceeded
    } else if b.report.passed() {
        CaseStatus::Passed
    } else {
        CaseStatus::Failed
    };
    CaseRun {
        status,
        report: b.report,
    }
}

fn run_instance(case: &Case, inst: &Instance, seed: u64, b: &mut Builder, timer: &mut Timer) {
    let x = &inst.scheme;
    b.report.dims.a = inst.base.dim().ok();
    let theorem = timer.run("theorem", || verify_theorem(x, seed));
    let outcome = match theorem {
        Ok(o) => {
            fill_from_theorem(&mut b.report, &o, x.field());
            Some(o)
        }
        Err(e) => {
            b.error("theorem", &e);
            None
        }
    };
    let res = timer.run("restrict", || weil_restrict(x));
    for check in &case.checks {
        match check {
            CheckKind::Theorem => {
                if let Some(o) = &outcome {
                    for c in &o.checks {
                        b.push_control(CheckLine::new(
                            format!("theorem/{}", c.name),
                            c.passed,
                            c.detail.clone(),
                        ));
                    }
                    if b.negative {
                        let ok = !o.smooth
                            && o.check("pi0-cardinality").is_some_and(|c| !c.passed)
                            && o.restriction.as_ref().is_some_and(|r| r.empty);
                        b.push(CheckLine::new(
                            "theorem/negative-control",
                            ok,
                            format!(
                                "smoothness fails and |π₀(Res)| = {} against a product of {}",
                                o.left.as_ref().map_or(0, |l| l.len()),
                                o.right.as_ref().map_or(0, |r| r.set.len())
                            ),
                        ));
                    }
                }
            }
            CheckKind::LemmaLocal => match timer.run("lemma-local", || verify_lemma_local(x, seed)) {
                Ok(l) => {
                    for c in &l.checks {
                        b.push_control(CheckLine::new(
                            format!("lemma-local/{}", c.name),
                            c.passed,
                            c.detail.clone(),
                        ));
                    }
                    if b.negative {
                        b.push(CheckLine::new(
                            "lemma-local/negative-control",
                            !l.passed(),
                            format!("reduction {} → {} points", l.map.source.len(), l.map.target.len()),
                        ));
                    }
                }
                Err(e) => b.error("lemma-local", &e),
            },
            CheckKind::Adjunction(ms) => {
                let res = match &res {
                    Ok(r) => r,
                    Err(e) => {
                        b.error("adjunction", e);
                        continue;
                    }
                };
                for &m in ms {
                    let name = format!("adjunction/m={}", m);
                    match timer.run("adjunction", || adjunction_check_with(res, m, seed)) {
                        Ok(r) => {
                            let detail = if r.ok() {
                                format!(
                                    "{} restricted points ↔ {} solutions over A ⊗ F_{}^{}, {} pairs verified",
                                    r.left.len(),
                                    r.right.len(),
                                    case.p,
                                    m,
                                    r.pairs.len()
                                )
                            } else {
                                r.failures.join("; ")
                            };
                            b.push(CheckLine::new(name, r.ok(), detail));
                        }
                        Err(e) => b.error(&name, &e),
                    }
                }
            }
            CheckKind::Cover(_) => match timer.run("cover", || open_cover_check(x, &inst.cover, MAX_STAGE, seed)) {
                Ok(r) => {
                    let detail = if r.ok() {
                        let counts: Vec<String> = r
                            .membership
                            .iter()
                            .map(|(m, sets)| format!("m={}: {}", m, sets.iter().map(Vec::len).sum::<usize>()))
                            .collect();
                        format!("pieces glue back to every point ({})", counts.join(", "))
                    } else {
                        r.failures.join("; ")
                    };
                    b.push(CheckLine::new("cover", r.ok(), detail));
                }
                Err(e) => b.error("cover", &e),
            },
            CheckKind::Product => match &inst.product {
                None => b.push(CheckLine::new(
                    "product",
                    false,
                    "the base is not declared as a product",
                )),
                Some(prod) => match timer.run("product", || product_formula_check(prod, x, MAX_STAGE, seed)) {
                    Ok(r) => {
                        let counts: Vec<String> = r
                            .counts
                            .iter()
                            .map(|(m, n, n1, n2)| format!("m={}: {} = {}·{}", m, n, n1, n2))
                            .collect();
                        b.push(CheckLine::new(
                            "product",
                            r.ok(),
                            format!("presentations isomorphic: {}; {}", r.isomorphic, counts.join(", ")),
                        ));
                    }
                    Err(e) => b.error("product", &e),
                },
            },
        }
    }
    if let Some(o) = &outcome {
        expectations(case, o, b);
    }
}

fn expectations(case: &Case, o: &TheoremOutcome, b: &mut Builder) {
    for e in &case.expectations {
        let (name, want, got) = match e {
            Expectation::S(n) => ("expect/S", n.to_string(), o.s.as_ref().map(|s| s.len().to_string())),
            Expectation::Pi0Res(n) => (
                "expect/pi0_res",
                n.to_string(),
                o.left.as_ref().map(|l| l.len().to_string()),
            ),
            Expectation::Fibers(v) => (
                "expect/fibers",
                list(v),
                Some(list(&o.fibers.iter().map(|f| f.len()).collect::<Vec<_>>())),
            ),
            Expectation::CycleTypes(v) => (
                "expect/cycle_types",
                list(v),
                o.left.as_ref().map(|l| list(&l.cycle_type())),
            ),
            Expectation::Smooth(s) => ("expect/smooth", s.to_string(), Some(o.smooth.to_string())),
        };
        let got = got.unwrap_or_else(|| "not computed".into());
        let passed = got == want;
        let detail = if passed {
            got.to_string()
        } else {
            format!("mismatch: expected {}, computed {}", want, got)
        };
        b.push(CheckLine::new(name, passed, detail));
    }
}

fn fill_from_theorem(r: &mut Report, o: &TheoremOutcome, base: &resweil_core::Field) {
    r.dims.a = Some(o.dim_a);
    r.dims.b = o.dim_b;
    r.dims.ambient_degree = Some(o.ambient_degree);
    r.s = o.s.as_ref().map(|s| GammaSummary::of(s, true));
    r.fibers = o.fibers.iter().map(|f| GammaSummary::of(f, false)).collect();
    r.restriction = o.restriction.as_ref().map(|s| RestrictionSummary {
        variables: s.variables,
        relations: s.relations,
        nonzero_relations: s.nonzero_relations,
        basis_size: s.basis_size,
        dim: s.dim,
        empty: s.empty,
        round_trip: s.round_trip,
    });
    r.dims.restriction = o.restriction.as_ref().and_then(|s| s.dim);
    r.pi0_left = o.left.as_ref().map(|l| GammaSummary::of(l, false));
    r.pi0_right = o.right.as_ref().map(|p| GammaSummary::of(&p.set, false));
    if let (Some(l), Some(p)) = (&o.left, &o.right) {
        r.cycle_types = Some(CycleTypes {
            left: l.cycle_type(),
            right: p.set.cycle_type(),
        });
        let samples = match &o.psi {
            Some(psi) => (0..l.len().min(PSI_SAMPLES))
                .map(|i| PsiSample {
                    left: i,
                    point: labels(l.ambient(), &l.elements()[i]),
                    tuple: p.tuples[psi[i]].clone(),
                    frobenius_commutes: psi[l.frobenius()[i]] == p.set.frobenius()[psi[i]],
                })
                .collect(),
            None => Vec::new(),
        };
        r.psi_witness = Some(PsiWitness {
            convention: format!("{} (k = F_{})", CONVENTION, base.characteristic()),
            map: o.psi.clone(),
            samples,
        });
    }
}

/// `*.case` files of a directory, sorted; other paths as given.
pub fn expand_paths(paths: &[PathBuf]) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|q| q.extension().is_some_and(|x| x == "case"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn load(path: &Path) -> Result<Case, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_case(&text).map_err(|e| InputError {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Parses and runs every case; cases run concurrently, results come back
/// ordered by case name.
pub fn run_suite(paths: &[PathBuf], opts: &SuiteOptions) -> SuiteOutcome {
    let files = match expand_paths(paths) {
        Ok(f) => f,
        Err(e) => {
            return SuiteOutcome::finish(
                Vec::new(),
                vec![InputError {
                    path: paths
                        .iter()
                        .map(|p| p.display().to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                    message: e.to_string(),
                }],
            )
        }
    };
    let mut cases = Vec::new();
    let mut errors = Vec::new();
    for f in &files {
        match load(f) {
            Ok(c) => cases.push(c),
            Err(e) => errors.push(e),
        }
    }
    let threads = match opts.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .clamp(1, cases.len().max(1));
    let next = AtomicUsize::new(0);
    let runs = Mutex::new(Vec::with_capacity(cases.len()));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(case) = cases.get(i) else { break };
                let run = run_case(case, opts);
                runs.lock().expect("no worker panics while holding the lock").push(run);
            });
        }
    });
    SuiteOutcome::finish(runs.into_inner().expect("workers joined"), errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(text: &str) -> Case {
        parse_case(text).unwrap()
    }

    const DUAL: &str = "case \"dual\"\nfield p = 7\nalgebra A : vars eps ; rels eps^2\nscheme X : vars y ; rels y^2 - y - eps\nexpect S = 1\nexpect pi0_res = 2\nchecks theorem, lemma-local, adjunction(1,2), cover(y, y-1)\n";

    #[test]
    fn dual_numbers_case_passes() {
        let run = run_case(&case(DUAL), &SuiteOptions::default());
        assert_eq!(run.status, CaseStatus::Passed, "{:#?}", run.report.checks);
        assert_eq!(run.report.pi0_left.as_ref().unwrap().size, 2);
        assert!(run.report.timings_ms.is_none());
    }

    #[test]
    fn wrong_expectation_is_a_mismatch() {
        let run = run_case(
            &case(&DUAL.replace("pi0_res = 2", "pi0_res = 3")),
            &SuiteOptions::default(),
        );
        assert_eq!(run.status, CaseStatus::Failed);
        let bad: Vec<_> = run.report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(bad, ["expect/pi0_res"]);
    }

    #[test]
    fn negative_control_counts_as_expected() {
        let text = "case \"control\"\nfield p = 5\nalgebra A : vars eps ; rels eps^2\nscheme X : vars ; rels eps\nexpect smooth = false\nchecks theorem, lemma-local, adjunction(1)\n";
        let run = run_case(&case(text), &SuiteOptions::default());
        assert_eq!(run.status, CaseStatus::Passed, "{:#?}", run.report.checks);
        let r = &run.report;
        assert!(r
            .checks
            .iter()
            .any(|c| c.name == "theorem/smooth" && !c.passed && c.expected_failure));
        assert!(r
            .checks
            .iter()
            .any(|c| c.name == "theorem/negative-control" && c.passed));
        assert!(r.restriction.as_ref().unwrap().empty);
        // the same case claimed smooth fails
        let run = run_case(
            &case(&text.replace("expect smooth = false\n", "")),
            &SuiteOptions::default(),
        );
        assert_eq!(run.status, CaseStatus::Failed);
    }
}
