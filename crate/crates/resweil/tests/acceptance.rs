//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use resweil::case::{Case, CheckKind, Instance};
use resweil::suite::{run_case, CaseStatus, SuiteOptions};
use resweil::{parse_case, Report};
use resweil_core::exactfield::{factor_univariate, is_irreducible};
use resweil_core::finalg::decompose_local;
use resweil_core::gammaset::{fiber, geometric_points_in, reduction_map};
use resweil_core::multipoly::buchberger;
use resweil_core::weilres::{
    adjunction_check, enumerate_points, enumerate_points_exhaustive, product_formula_check, stage,
};
use resweil_core::{
    verify_lemma_local, verify_theorem, weil_restrict, AlgebraPresentation, Error as CoreError, Fe, Field, GammaSet,
    MPoly, Monomial, PolyRing, SchemePresentation, UniPoly,
};

const SEED: u64 = 42;
const ORACLE_LIMIT: u128 = 1_000_000;
const TRIALS: u32 = 1000;

type Outcome = Result<String, String>;

fn cases_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("cases")
}

struct Loaded {
    case: Case,
    inst: Instance,
    report: Report,
    status: CaseStatus,
    elapsed: Duration,
}

fn load_corpus() -> Vec<Loaded> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(cases_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "case"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|f| {
            let case =
                parse_case(&std::fs::read_to_string(f).unwrap()).unwrap_or_else(|e| panic!("{}: {}", f.display(), e));
            let inst = case.instantiate().unwrap();
            let start = Instant::now();
            let run = run_case(&case, &SuiteOptions::default());
            Loaded {
                case,
                inst,
                report: run.report,
                status: run.status,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: Result<T, CoreError>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn positive(corpus: &[Loaded]) -> impl Iterator<Item = &Loaded> {
    corpus.iter().filter(|l| l.case.expect_smooth())
}

fn theorem_suite(corpus: &[Loaded]) -> Outcome {
    let pos: Vec<&Loaded> = positive(corpus).collect();
    ensure(pos.len() >= 12, || format!("only {} positive cases", pos.len()))?;
    let primes: BTreeSet<u64> = pos.iter().map(|l| l.case.p).collect();
    ensure(primes == BTreeSet::from([3, 5, 7]), || format!("primes {:?}", primes))?;
    // base shapes: F_{p^2}, dual numbers, F_p x F_p, F_p[t]/(t^3 - t),
    // F_p[t]/(t^2 (t - 1)), F_{p^2} (x) dual numbers
    for name in [
        "quad-field-p5",
        "dual-numbers-p7",
        "split-p5",
        "cubic-split-p3",
        "mixed-local-p5",
        "f9-dual-p3",
    ] {
        ensure(pos.iter().any(|l| l.case.name == name), || {
            format!("missing base shape {}", name)
        })?;
    }
    let mut degrees = BTreeSet::new();
    let mut disconnected = false;
    for l in &pos {
        let r = &l.report;
        ensure(l.status == CaseStatus::Passed, || {
            format!("{}: {:?}", r.case, r.failures().map(|c| &c.name).collect::<Vec<_>>())
        })?;
        for name in [
            "pi0-cardinality",
            "cycle-types",
            "gamma-iso",
            "psi-witness",
            "evaluation-equivariant",
        ] {
            let c = r.checks.iter().find(|c| c.name == format!("theorem/{}", name));
            ensure(c.is_some_and(|c| c.passed), || {
                format!("{}: theorem/{} not passed", r.case, name)
            })?;
        }
        let psi = r
            .psi_witness
            .as_ref()
            .and_then(|w| w.map.clone())
            .ok_or(format!("{}: no ψ", r.case))?;
        let (left, right) = (r.pi0_left.as_ref().unwrap(), r.pi0_right.as_ref().unwrap());
        // elementwise: ψ ∘ φ = φ ∘ ψ and ψ injective
        ensure(
            (0..psi.len()).all(|i| psi[left.frobenius[i]] == right.frobenius[psi[i]]),
            || format!("{}: ψ not equivariant", r.case),
        )?;
        ensure(
            psi.iter().collect::<BTreeSet<_>>().len() == right.size && psi.len() == right.size,
            || format!("{}: ψ not bijective", r.case),
        )?;
        ensure(l.elapsed < Duration::from_secs(10), || {
            format!("{}: {:?}", r.case, l.elapsed)
        })?;
        let x = &l.inst.scheme;
        degrees.insert(x.coordinate_algebra().unwrap().dim().unwrap() / l.inst.base.dim().unwrap());
        disconnected |= r.fibers.iter().any(|f| f.cycle_type.len() > 1);
    }
    ensure(degrees.is_superset(&BTreeSet::from([2, 3, 4])), || {
        format!("cover degrees {:?}", degrees)
    })?;
    ensure(disconnected, || "no disconnected fiber".into())?;
    let slowest = pos.iter().map(|l| l.elapsed).max().unwrap();
    Ok(format!(
        "{} cases, p ∈ {{3,5,7}}, cover degrees {:?}, slowest {:?}",
        pos.len(),
        degrees,
        slowest
    ))
}

fn control_case() -> Result<SchemePresentation, String> {
    let k = core(Field::prime(5))?;
    let a = core(AlgebraPresentation::parse(&k, &["eps"], &["eps^2"]))?;
    core(SchemePresentation::parse(&a, &[], &["eps"]))
}

fn empty_restriction() -> Outcome {
    let x = control_case()?;
    let res = core(weil_restrict(&x))?;
    let gb: Vec<String> = res.gb().polys().iter().map(|p| p.to_string()).collect();
    ensure(gb == ["1"], || format!("Gröbner basis {:?}", gb))?;
    Ok("restricted Gröbner basis is {1}".into())
}

fn negative_control(corpus: &[Loaded]) -> Outcome {
    let x = control_case()?;
    let o = core(verify_theorem(&x, SEED))?;
    ensure(!o.smooth, || "smoothness precheck passed".into())?;
    let (l, r) = (
        o.left.as_ref().map_or(usize::MAX, |g| g.len()),
        o.right.as_ref().map_or(usize::MAX, |g| g.set.len()),
    );
    ensure((l, r) == (0, 1), || format!("π₀ sizes {} vs {}", l, r))?;
    ensure(o.check("pi0-cardinality").is_some_and(|c| !c.passed), || {
        "π₀ comparison passed".into()
    })?;
    let lemma = core(verify_lemma_local(&x, SEED))?;
    ensure(!lemma.passed(), || "reduction bijective on the negative control".into())?;
    // the suite reports it as the expected failure mode
    let l = corpus
        .iter()
        .find(|l| !l.case.expect_smooth())
        .ok_or("no negative control in the corpus")?;
    let rep = &l.report;
    let smooth = rep
        .checks
        .iter()
        .find(|c| c.name == "theorem/smooth")
        .ok_or("no smoothness line")?;
    ensure(!smooth.passed && smooth.expected_failure, || {
        "smoothness failure not marked expected".into()
    })?;
    let ctl = rep
        .checks
        .iter()
        .find(|c| c.name == "theorem/negative-control")
        .ok_or("no negative-control line")?;
    ensure(ctl.passed, || ctl.detail.clone())?;
    ensure(l.status == CaseStatus::Passed, || {
        "negative control counted as a failure".into()
    })?;
    Ok(format!("smooth = false, π₀ ∅ vs 1 element; reported by {}", rep.case))
}

fn adjunction(corpus: &[Loaded]) -> Outcome {
    let mut total = 0;
    for l in corpus {
        let res = core(weil_restrict(&l.inst.scheme))?;
        for m in 1..=3 {
            let r = core(adjunction_check(&l.inst.scheme, m, SEED))?;
            ensure(r.ok(), || format!("{} m={}: {:?}", l.case.name, m, r.failures))?;
            ensure(r.pairs.len() == r.left.len() && r.left.len() == r.right.len(), || {
                format!("{} m={}: incomplete bijection", l.case.name, m)
            })?;
            // ungrouping the algebra solution gives back the restricted point
            ensure(
                r.pairs.iter().all(|&(i, j)| res.ungroup(&r.right[j]) == r.left[i]),
                || format!("{} m={}: pair does not regroup", l.case.name, m),
            )?;
            total += r.pairs.len();
        }
    }
    Ok(format!(
        "{} cases × m ∈ {{1,2,3}}, {} matched pairs",
        corpus.len(),
        total
    ))
}

fn product_formula(corpus: &[Loaded]) -> Outcome {
    let mut n = 0;
    for l in corpus.iter().filter(|l| l.case.checks.contains(&CheckKind::Product)) {
        let prod = l
            .inst
            .product
            .as_ref()
            .ok_or(format!("{}: base is not a product", l.case.name))?;
        let r = core(product_formula_check(prod, &l.inst.scheme, 3, SEED))?;
        ensure(r.isomorphic, || format!("{}: presentations differ", l.case.name))?;
        ensure(
            r.counts.len() == 3 && r.counts.iter().all(|&(_, a, b, c)| a == b * c),
            || format!("{}: counts {:?}", l.case.name, r.counts),
        )?;
        n += 1;
    }
    ensure(n >= 2, || format!("only {} product cases", n))?;
    Ok(format!("{} product cases, m ≤ 3", n))
}

fn lemma_local(corpus: &[Loaded]) -> Outcome {
    let (mut direct, mut extended) = (0, 0);
    for l in positive(corpus) {
        let factors = core(decompose_local(&l.inst.base, SEED))?;
        if factors.len() != 1 {
            continue;
        }
        let x = &l.inst.scheme;
        if factors[0].residue_degree == 1 {
            let out = core(verify_lemma_local(x, SEED))?;
            ensure(out.passed(), || format!("{}: {:?}", l.case.name, out.checks))?;
            direct += 1;
        } else {
            // residue field larger than k: base change to the common stage
            let m = l.report.dims.ambient_degree.ok_or("no ambient degree")?;
            let k = core(stage(&core(Field::prime(l.case.p))?, m))?;
            let xk = core(x.tensor_extend(&k, SEED))?;
            for f in core(decompose_local(xk.base(), SEED))? {
                let xi = core(xk.base_change(&f.projection))?;
                let red = core(reduction_map(&xi, 1, SEED))?;
                ensure(red.is_iso(), || {
                    format!("{}: reduction not an equivariant bijection", l.case.name)
                })?;
            }
            extended += 1;
        }
    }
    ensure(direct >= 3 && extended >= 3, || {
        format!("{} direct, {} extended", direct, extended)
    })?;
    Ok(format!(
        "{} local bases with residue field k, {} after base change",
        direct, extended
    ))
}

fn oracle_compare(ring: &PolyRing, rels: &[MPoly], k: &Field, step: usize) -> Result<Option<usize>, String> {
    let space = k
        .order()
        .unwrap_or(u128::MAX)
        .checked_pow(ring.nvars() as u32)
        .unwrap_or(u128::MAX);
    if space > ORACLE_LIMIT {
        return Ok(None);
    }
    let sym = core(GammaSet::from_points(
        k,
        step,
        core(enumerate_points(ring, rels, k, SEED))?,
    ))?;
    let brute = core(GammaSet::from_points(
        k,
        step,
        core(enumerate_points_exhaustive(ring, rels, k, SEED))?,
    ))?;
    ensure(sym == brute, || {
        format!("{} symbolic vs {} exhaustive points", sym.len(), brute.len())
    })?;
    Ok(Some(sym.len()))
}

fn oracle(corpus: &[Loaded]) -> Outcome {
    let (mut compared, mut skipped) = (0, 0);
    for l in corpus {
        let x = &l.inst.scheme;
        let m = l.report.dims.ambient_degree.ok_or("no ambient degree")?;
        let k = core(stage(x.field(), m))?;
        let res = core(weil_restrict(x))?;
        let mut systems: Vec<(PolyRing, Vec<MPoly>)> = vec![
            (res.ring().clone(), res.relations().to_vec()),
            (l.inst.base.ring().clone(), l.inst.base.relations().to_vec()),
        ];
        let s = core(geometric_points_in(&l.inst.base, &k, SEED))?;
        for i in 0..s.len() {
            let c = core(fiber(x, &s.point(i), &k, SEED))?;
            systems.push((c.ring().clone(), c.relations().to_vec()));
        }
        for (idx, (ring, rels)) in systems.iter().enumerate() {
            // fibers are defined over K itself
            let step = if idx < 2 { 1 } else { k.degree() };
            match oracle_compare(ring, rels, &k, step).map_err(|e| format!("{}: {}", l.case.name, e))? {
                Some(_) => compared += 1,
                None => skipped += 1,
            }
        }
        // the left Γ-set of the report is the exhaustive one
        if let Some(n) = oracle_compare(res.ring(), res.relations(), &k, 1)? {
            let left = l.report.pi0_left.as_ref().ok_or("no left side")?;
            ensure(left.size == n, || {
                format!("{}: report {} vs oracle {}", l.case.name, left.size, n)
            })?;
        }
    }
    ensure(compared >= 3 * corpus.len(), || {
        format!("only {} systems compared", compared)
    })?;
    Ok(format!(
        "{} systems identical with Frobenius, {} beyond 10^6 candidates",
        compared, skipped
    ))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_resweil"))
            .args(["verify", "--json", "--seed", "42"])
            .arg(cases_dir())
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || {
        format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr))
    })?;
    ensure(a.stdout == b.stdout, || "reports differ between runs".into())?;
    // a different thread count must not change the bytes either
    let c = Command::new(env!("CARGO_BIN_EXE_resweil"))
        .args(["verify", "--json", "--seed", "42", "--threads", "1"])
        .arg(cases_dir())
        .output()
        .map_err(|e| e.to_string())?;
    ensure(a.stdout == c.stdout, || "report depends on the thread count".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn random_fe(k: &Field, x: u64) -> Fe {
    k.from_label(x as u128 % k.order().unwrap())
}

fn random_poly(ring: &PolyRing, terms: &[(u8, u8, u8, u64)]) -> MPoly {
    let k = ring.field();
    MPoly::from_terms(
        ring,
        terms
            .iter()
            .map(|&(a, b, c, x)| {
                (
                    Monomial::from_exponents(&[a as u32, b as u32, c as u32]),
                    random_fe(k, x),
                )
            })
            .collect(),
    )
}

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(11)]
}

fn terms(max: usize) -> impl Strategy<Value = Vec<(u8, u8, u8, u64)>> {
    prop::collection::vec((0u8..3, 0u8..3, 0u8..2, any::<u64>()), 1..max)
}

fn kernels() -> Outcome {
    let config = Config {
        cases: TRIALS,
        failure_persistence: None,
        ..Config::default()
    };
    let fail = |e: String| TestCaseError::fail(e);
    // normal forms
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );
    runner
        .run(
            &(prime(), terms(4), terms(4), terms(6), terms(6), any::<u64>()),
            |(p, g1, g2, f, g, c)| {
                let k = Field::prime(p).unwrap();
                let ring = PolyRing::drl(&k, ["x", "y", "z"]);
                let gens = [random_poly(&ring, &g1), random_poly(&ring, &g2)];
                let gb = buchberger(&ring, &gens).map_err(|e| fail(e.to_string()))?;
                let (f, g, c) = (random_poly(&ring, &f), random_poly(&ring, &g), random_fe(&k, c));
                let nf = gb.reduce(&f);
                prop_assert_eq!(gb.reduce(&nf), nf.clone());
                prop_assert_eq!(gb.reduce(&f.add(&g.scale(&c))), nf.add(&gb.reduce(&g).scale(&c)));
                prop_assert!(gb.contains(&f.sub(&nf)));
                for h in &gens {
                    prop_assert!(gb.contains(h));
                }
                Ok(())
            },
        )
        .map_err(|e| format!("normal form: {}", e))?;
    // factorization
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );
    runner
        .run(
            &(
                prime(),
                1usize..4,
                prop::collection::vec(any::<u64>(), 2..10),
                any::<u64>(),
            ),
            |(p, e, cs, lead)| {
                let k = Field::ext(p, e).unwrap();
                let mut coeffs: Vec<Fe> = cs.iter().map(|&c| random_fe(&k, c)).collect();
                let l = random_fe(&k, lead);
                *coeffs.last_mut().unwrap() = if k.is_zero(&l) { k.one() } else { l };
                let f = UniPoly::new(&k, coeffs);
                let fac = factor_univariate(&f, 7).map_err(|e| fail(e.to_string()))?;
                prop_assert_eq!(fac.expand(&k), f);
                for (g, mult) in &fac.factors {
                    prop_assert!(*mult >= 1);
                    prop_assert!(g.lead().is_some_and(|c| k.is_one(c)));
                    prop_assert!(is_irreducible(g));
                }
                Ok(())
            },
        )
        .map_err(|e| format!("factorization: {}", e))?;
    // Frobenius
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );
    runner
        .run(&(prime(), 1usize..7, any::<u64>(), any::<u64>()), |(p, m, a, b)| {
            let k = Field::ext(p, m).unwrap();
            let (a, b) = (random_fe(&k, a), random_fe(&k, b));
            let phi = |x: &Fe| k.frobenius(x);
            prop_assert_eq!(phi(&k.add(&a, &b)), k.add(&phi(&a), &phi(&b)));
            prop_assert_eq!(phi(&k.mul(&a, &b)), k.mul(&phi(&a), &phi(&b)));
            prop_assert_eq!(phi(&a), k.pow(&a, p));
            prop_assert_eq!(k.frobenius_pow(&a, m), a.clone());
            // fixed points are exactly the prime field
            prop_assert_eq!(phi(&a) == a, a.coeffs().iter().skip(1).all(|&c| c == 0));
            Ok(())
        })
        .map_err(|e| format!("Frobenius: {}", e))?;
    Ok(format!(
        "{} trials each: normal forms, factorization, Frobenius",
        TRIALS
    ))
}

fn main() {
    let start = Instant::now();
    let corpus = load_corpus();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("theorem suite", Box::new(|| theorem_suite(&corpus))),
        ("empty restriction", Box::new(empty_restriction)),
        ("negative control", Box::new(|| negative_control(&corpus))),
        ("adjunction", Box::new(|| adjunction(&corpus))),
        ("product formula", Box::new(|| product_formula(&corpus))),
        ("local reduction", Box::new(|| lemma_local(&corpus))),
        ("oracle equivalence", Box::new(|| oracle(&corpus))),
        ("determinism", Box::new(determinism)),
        ("kernel properties", Box::new(kernels)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!(
                "criterion {} {:<20} PASS  {} ({:.1?})",
                i + 1,
                name,
                detail,
                t.elapsed()
            ),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {:<20} FAIL  {}", i + 1, name, detail);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
