//! End-to-end comparisons with explicit witnesses: `π₀(Res_{A/k} X)` against
//! the twisted product of fiber components, and the reduction bijection for
//! local bases.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::exactfield::{Embedding, Fe, Field};
use crate::finalg::{decompose_local, etale_check, residue_degrees, EtaleCertificate};
use crate::gammaset::{
    fiber, gamma_iso, geometric_points_in, lcm, pi0_points_in, product_gamma_set, reduction_map, residue_point,
    splitting_degree, EquivariantMap, GammaSet, ProductGammaSet,
};
use crate::weilres::{stage, weil_restrict, RestrictedScheme, SchemePresentation};
use crate::{Error, Result};

/// One named pass/fail line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Size data of a restricted presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionStats {
    pub variables: usize,
    pub relations: usize,
    pub nonzero_relations: usize,
    pub basis_size: usize,
    /// Dimension of the coordinate ring, when finite.
    pub dim: Option<usize>,
    pub empty: bool,
    pub round_trip: bool,
}

/// Everything computed by [`verify_theorem`].
#[derive(Clone, Debug)]
pub struct TheoremOutcome {
    pub smooth: bool,
    pub etale: Option<EtaleCertificate>,
    pub dim_a: usize,
    pub dim_b: Option<usize>,
    /// Stage degree `M'` over the prime field where both sides live.
    pub ambient_degree: usize,
    pub s: Option<GammaSet>,
    pub fibers: Vec<GammaSet>,
    pub restriction: Option<RestrictionStats>,
    pub left: Option<GammaSet>,
    pub right: Option<ProductGammaSet>,
    /// Cycle-matching isomorphism, when the cycle types agree.
    pub iso: Option<EquivariantMap>,
    /// The canonical map: left label to right label through regrouping and
    /// the per-fiber reductions.
    pub psi: Option<Vec<usize>>,
    pub checks: Vec<Check>,
}

impl TheoremOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `π₀(Res_{A/k} X)` versus `∏_s π₀(X_s)`.
///
/// Steps: étaleness; restriction and its round trip; geometric points and
/// fibers in a common stage; both Γ-sets; cycle-type isomorphism; the
/// canonical map `ψ` built from `ψ̂` (regroup, then reduce along each `s`)
/// checked to be an equivariant bijection; and a recount of the left side
/// through the local factors of `A ⊗ K`.
///
/// For non-étale `X` the same data are computed as a diagnostic and the
/// `smooth` check fails.
pub fn verify_theorem(x: &SchemePresentation, seed: u64) -> Result<TheoremOutcome> {
    let a = x.base();
    let p = x.field().characteristic();
    let prime = Field::prime(p)?;
    let mut checks = Vec::new();
    let dim_a = a.dim()?;
    let (etale, smooth) = match etale_check(x) {
        Ok(cert) => {
            let ok = cert.etale;
            let detail = match &cert.obstruction {
                Some(o) => o.clone(),
                None => format!("Jacobian {} is a unit", cert.jacobian),
            };
            checks.push(Check::new("smooth", ok, detail));
            (Some(cert), ok)
        }
        Err(e @ (Error::NotSquareSystem { .. } | Error::NotFinite)) => {
            checks.push(Check::new("smooth", false, e.to_string()));
            (None, false)
        }
        Err(e) => return Err(e),
    };
    let dim_b = x.coordinate_algebra()?.dim().ok();
    let res = weil_restrict(x)?;
    let res_alg = res.algebra()?;
    let stats = RestrictionStats {
        variables: res.ring().nvars(),
        relations: res.relations().len(),
        nonzero_relations: res.nonzero_relations(),
        basis_size: dim_a,
        dim: res_alg.dim().ok(),
        empty: res.gb().is_unit(),
        round_trip: res.round_trip_holds()?,
    };
    checks.push(Check::new(
        "round-trip",
        stats.round_trip,
        "expansion reproduces every relation",
    ));
    let mut outcome = TheoremOutcome {
        smooth,
        etale,
        dim_a,
        dim_b,
        ambient_degree: 1,
        s: None,
        fibers: Vec::new(),
        restriction: Some(stats.clone()),
        left: None,
        right: None,
        iso: None,
        psi: None,
        checks,
    };

    // common stage: base residue fields, fiber residue fields, and (if
    // needed) the residue fields of the restriction
    let mut m = splitting_degree(a, seed)?;
    let mut extra_done = false;
    let (k, s, fibers, left) = loop {
        let k = stage(&prime, m)?;
        let s = geometric_points_in(a, &k, seed)?;
        let mut fiber_algebras = Vec::with_capacity(s.len());
        for i in 0..s.len() {
            match fiber(x, &s.point(i), &k, seed) {
                Ok(c) => fiber_algebras.push(c),
                Err(Error::PositiveDimensionalFiber) => {
                    outcome
                        .checks
                        .push(Check::new("fibers", false, "a fiber is positive-dimensional"));
                    outcome.ambient_degree = m;
                    outcome.s = Some(s);
                    return Ok(outcome);
                }
                Err(e) => return Err(e),
            }
        }
        let mut m2 = m;
        for c in &fiber_algebras {
            if !c.is_zero_ring() {
                m2 = lcm(m2, m * residue_degrees(c, seed)?.into_iter().fold(1, lcm));
            }
        }
        if m2 != m {
            m = m2;
            continue;
        }
        let fibers = fiber_algebras
            .iter()
            .map(|c| pi0_points_in(c, &k, seed))
            .collect::<Result<Vec<_>>>()?;
        let left = GammaSet::from_points(&k, 1, res.points(&k, seed)?)?;
        // all geometric points of the restriction must be visible here
        if let Some(d) = stats.dim {
            if smooth && left.len() != d && !extra_done {
                extra_done = true;
                let m3 = lcm(m, splitting_degree(&res_alg, seed)?);
                if m3 != m {
                    m = m3;
                    continue;
                }
            }
        }
        break (k, s, fibers, left);
    };
    outcome.ambient_degree = m;
    if smooth {
        let d = stats.dim.unwrap_or(0);
        outcome.checks.push(Check::new(
            "left-complete",
            left.len() == d,
            format!(
                "{} points in F_{}^{} for a restriction of dimension {}",
                left.len(),
                p,
                m,
                d
            ),
        ));
    }
    outcome.checks.push(Check::new(
        "frobenius-order",
        left.is_consistent() && s.is_consistent(),
        "Frobenius permutations are bijections of order dividing the stage degree",
    ));
    let right = product_gamma_set(&s, &fibers)?;
    outcome.checks.push(Check::new(
        "evaluation-equivariant",
        right.evaluation_is_equivariant(&s, &fibers),
        "(u, s) ↦ u_s commutes with Frobenius",
    ));
    outcome.checks.push(Check::new(
        "pi0-cardinality",
        left.len() == right.set.len(),
        format!("|π₀(Res)| = {}, |∏ π₀(X_s)| = {}", left.len(), right.set.len()),
    ));
    outcome.checks.push(Check::new(
        "cycle-types",
        left.cycle_type() == right.set.cycle_type(),
        format!("{:?} vs {:?}", left.cycle_type(), right.set.cycle_type()),
    ));
    let iso = gamma_iso(&left, &right.set);
    outcome.checks.push(Check::new(
        "gamma-iso",
        iso.as_ref().is_some_and(|i| i.is_iso()),
        if iso.is_some() {
            "cycle matching is an equivariant bijection"
        } else {
            "cycle types differ"
        },
    ));
    let psi = canonical_psi(&res, &k, &s, &fibers, &right, &left, seed)?;
    let psi_ok = psi.as_ref().map(|map| {
        EquivariantMap {
            source: left.clone(),
            target: right.set.clone(),
            map: map.clone(),
        }
        .is_iso()
    });
    outcome.checks.push(Check::new(
        "psi-witness",
        psi_ok == Some(true),
        match psi_ok {
            Some(true) => "ψ is an equivariant bijection, checked elementwise",
            Some(false) => "ψ is not an equivariant bijection",
            None => "some point reduces outside the product",
        },
    ));
    if smooth {
        let (ok, detail) = local_recount(x, &k, left.len(), seed)?;
        outcome.checks.push(Check::new("local-factors", ok, detail));
    }
    outcome.s = Some(s);
    outcome.fibers = fibers;
    outcome.left = Some(left);
    outcome.right = Some(right);
    outcome.iso = iso;
    outcome.psi = psi;
    Ok(outcome)
}

/// `ψ(P)_s = (Σ_b a_{j,b} s(e_b))_j` as labels into the product, or `None`
/// if some image is missing.
fn canonical_psi(
    res: &RestrictedScheme,
    k: &Field,
    s: &GammaSet,
    fibers: &[GammaSet],
    right: &ProductGammaSet,
    left: &GammaSet,
    seed: u64,
) -> Result<Option<Vec<usize>>> {
    let emb = Embedding::new(res.field(), k, seed)?;
    // s(e_b) for every s
    let se: Vec<Vec<Fe>> = (0..s.len())
        .map(|i| {
            let images = &s.elements()[i];
            res.basis()
                .iter()
                .map(|b| b.eval_with(k, |c| emb.apply(c), images))
                .collect()
        })
        .collect();
    let position: BTreeMap<&Vec<usize>, usize> = right.tuples.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut out = Vec::with_capacity(left.len());
    for p in left.elements() {
        let grouped = res.regroup(p);
        let mut tuple = Vec::with_capacity(s.len());
        for (i, sei) in se.iter().enumerate() {
            let u: Vec<Fe> = grouped
                .iter()
                .map(|a| {
                    a.iter()
                        .zip(sei)
                        .fold(k.zero(), |acc, (c, e)| k.add(&acc, &k.mul(c, e)))
                })
                .collect();
            match fibers[i].index_of(&u) {
                Some(j) => tuple.push(j),
                None => return Ok(None),
            }
        }
        match position.get(&tuple) {
            Some(&j) => out.push(j),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Recounts the left side through `A ⊗ K = ∏ B_i`: the restriction along
/// each local factor is counted separately (and its reduction map checked
/// to be a bijection), and the counts must multiply to `expected`.
fn local_recount(x: &SchemePresentation, k: &Field, expected: usize, seed: u64) -> Result<(bool, String)> {
    let xk = x.tensor_extend(k, seed)?;
    let factors = decompose_local(xk.base(), seed)?;
    let mut product = 1usize;
    let mut counts = Vec::with_capacity(factors.len());
    let mut bijective = true;
    for f in &factors {
        let xi = xk.base_change(&f.projection)?;
        let red = reduction_map(&xi, 1, seed)?;
        bijective &= red.is_iso();
        counts.push(red.source.len());
        product *= red.source.len();
    }
    Ok((
        product == expected && bijective,
        format!(
            "{} local factors, counts {:?}, product {} (direct {})",
            factors.len(),
            counts,
            product,
            expected
        ),
    ))
}

/// Outcome of [`verify_lemma_local`].
#[derive(Clone, Debug)]
pub struct LemmaOutcome {
    /// Stage degree over `k` at which the reduction was taken.
    pub m: usize,
    pub map: EquivariantMap,
    pub checks: Vec<Check>,
}

impl LemmaOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// For a local base with residue field `k`: the reduction map
/// `Res(X)(F_{p^m}) → X_s(F_{p^m})`, with `m` large enough to see every
/// geometric point of `X_s`, is an equivariant bijection.
pub fn verify_lemma_local(x: &SchemePresentation, seed: u64) -> Result<LemmaOutcome> {
    let s = residue_point(x.base(), seed)?;
    let k = x.field();
    let c = fiber(x, &s, k, seed)?;
    let m = if c.is_zero_ring() {
        1
    } else {
        splitting_degree(&c, seed)? / k.degree()
    };
    let map = reduction_map(x, m, seed)?;
    let checks = alloc::vec![
        Check::new(
            "reduction-bijective",
            map.is_bijective(),
            format!(
                "{} restricted points, {} fiber points",
                map.source.len(),
                map.target.len()
            ),
        ),
        Check::new("reduction-equivariant", map.is_equivariant(), "commutes with Frobenius"),
    ];
    Ok(LemmaOutcome { m, map, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::AlgebraPresentation;
    use alloc::vec;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn dual_numbers_pass() {
        let a = AlgebraPresentation::parse(&f(7), &["eps"], &["eps^2"]).unwrap();
        let x = SchemePresentation::parse(&a, &["y"], &["y^2 - y - eps"]).unwrap();
        let out = verify_theorem(&x, 0).unwrap();
        assert!(out.passed(), "{:?}", out.checks);
        assert_eq!(out.left.as_ref().unwrap().len(), 2);
        assert_eq!(out.left.as_ref().unwrap().cycle_type(), vec![1, 1]);
        let lemma = verify_lemma_local(&x, 0).unwrap();
        assert!(lemma.passed());
    }

    #[test]
    fn quadratic_base_pass() {
        let a = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - 2"]).unwrap();
        let x = SchemePresentation::parse(&a, &["y"], &["y^2 - t"]).unwrap();
        let out = verify_theorem(&x, 0).unwrap();
        assert!(out.passed(), "{:?}", out.checks);
        assert_eq!(out.ambient_degree, 4);
        assert_eq!(out.right.as_ref().unwrap().set.len(), 4);
        assert_eq!(out.psi.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn empty_restriction_is_the_expected_failure() {
        let a = AlgebraPresentation::parse(&f(5), &["eps"], &["eps^2"]).unwrap();
        let x = SchemePresentation::parse(&a, &[], &["eps"]).unwrap();
        let out = verify_theorem(&x, 0).unwrap();
        assert!(!out.smooth);
        assert!(!out.check("smooth").unwrap().passed);
        assert!(!out.check("pi0-cardinality").unwrap().passed);
        assert_eq!(out.left.as_ref().unwrap().len(), 0);
        assert_eq!(out.right.as_ref().unwrap().set.len(), 1);
        assert!(out.restriction.as_ref().unwrap().empty);
        let lemma = verify_lemma_local(&x, 0).unwrap();
        assert!(!lemma.passed());
    }
}
