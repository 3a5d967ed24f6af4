//! JSON report of one case. Field order is part of the format.

use std::collections::BTreeMap;

use serde::Serialize;

use resweil_core::{Fe, Field, GammaSet};

use crate::case::{AlgebraBody, Case, CheckKind, Expectation};

/// Orientation of every Frobenius action in a report.
pub const CONVENTION: &str = "Frobenius x -> x^p on the ambient stage; on tuples (phi.u)_{phi(s)} = phi(u_s)";

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub case: String,
    pub inputs: Inputs,
    pub dims: Dims,
    #[serde(rename = "S")]
    pub s: Option<GammaSummary>,
    pub fibers: Vec<GammaSummary>,
    pub restriction: Option<RestrictionSummary>,
    pub pi0_left: Option<GammaSummary>,
    pub pi0_right: Option<GammaSummary>,
    pub cycle_types: Option<CycleTypes>,
    pub psi_witness: Option<PsiWitness>,
    pub checks: Vec<CheckLine>,
    pub timings_ms: Option<BTreeMap<String, u64>>,
    pub seed: u64,
}

impl Report {
    /// All checks passed, counting expected failures as passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckLine::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.ok())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Inputs {
    pub p: u64,
    pub algebras: Vec<AlgebraEcho>,
    pub scheme: SchemeEcho,
    pub expectations: Vec<String>,
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AlgebraEcho {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SchemeEcho {
    pub name: String,
    pub over: String,
    pub vars: Vec<String>,
    pub rels: Vec<String>,
}

impl Inputs {
    pub fn of(case: &Case) -> Inputs {
        Inputs {
            p: case.p,
            algebras: case
                .algebras
                .iter()
                .map(|a| match &a.body {
                    AlgebraBody::Presented { vars, rels } => AlgebraEcho {
                        name: a.name.clone(),
                        vars: Some(vars.clone()),
                        rels: Some(rels.clone()),
                        product: None,
                    },
                    AlgebraBody::Product(x, y) => AlgebraEcho {
                        name: a.name.clone(),
                        vars: None,
                        rels: None,
                        product: Some([x.clone(), y.clone()]),
                    },
                })
                .collect(),
            scheme: SchemeEcho {
                name: case.scheme.name.clone(),
                over: case.scheme.over.clone(),
                vars: case.scheme.vars.clone(),
                rels: case.scheme.rels.clone(),
            },
            expectations: case.expectations.iter().map(expectation_text).collect(),
            checks: case.checks.iter().map(check_text).collect(),
        }
    }
}

pub(crate) fn list(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn expectation_text(e: &Expectation) -> String {
    match e {
        Expectation::S(n) => format!("S = {}", n),
        Expectation::Pi0Res(n) => format!("pi0_res = {}", n),
        Expectation::Fibers(v) => format!("fibers = {}", list(v)),
        Expectation::CycleTypes(v) => format!("cycle_types = {}", list(v)),
        Expectation::Smooth(b) => format!("smooth = {}", b),
    }
}

pub fn check_text(c: &CheckKind) -> String {
    match c {
        CheckKind::Theorem => "theorem".into(),
        CheckKind::LemmaLocal => "lemma-local".into(),
        CheckKind::Product => "product".into(),
        CheckKind::Adjunction(ms) => format!("adjunction({})", list(ms)),
        CheckKind::Cover(hs) => format!("cover({})", hs.join(", ")),
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Dims {
    #[serde(rename = "A")]
    pub a: Option<usize>,
    /// Coordinate ring of `X` over `k`, when finite.
    #[serde(rename = "B")]
    pub b: Option<usize>,
    /// Coordinate ring of the restriction, when finite.
    pub restriction: Option<usize>,
    /// Degree over `F_p` of the field realizing both sides.
    pub ambient_degree: Option<usize>,
}

/// A Γ-set: points as label tuples and the Frobenius permutation.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GammaSummary {
    pub size: usize,
    pub cycle_type: Vec<usize>,
    pub frobenius: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<u64>>>,
}

pub fn labels(field: &Field, point: &[Fe]) -> Vec<u64> {
    let p = field.characteristic();
    point
        .iter()
        .map(|x| x.label(p).map_or(u64::MAX, |l| l as u64))
        .collect()
}

impl GammaSummary {
    pub fn of(g: &GammaSet, with_points: bool) -> GammaSummary {
        GammaSummary {
            size: g.len(),
            cycle_type: g.cycle_type(),
            frobenius: g.frobenius().to_vec(),
            points: with_points.then(|| g.elements().iter().map(|pt| labels(g.ambient(), pt)).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RestrictionSummary {
    pub variables: usize,
    pub relations: usize,
    pub nonzero_relations: usize,
    pub basis_size: usize,
    pub dim: Option<usize>,
    pub empty: bool,
    pub round_trip: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CycleTypes {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// `ψ` as a label bijection plus sample evaluations of `ψ̂`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PsiWitness {
    pub convention: String,
    /// `map[i]` is the right-hand label of left point `i`.
    pub map: Option<Vec<usize>>,
    pub samples: Vec<PsiSample>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PsiSample {
    pub left: usize,
    /// Coordinates of the restricted point, as field labels.
    pub point: Vec<u64>,
    /// Component index in each fiber, in the order of `S`.
    pub tuple: Vec<usize>,
    pub frobenius_commutes: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    /// Part of a negative control: a failure here is the intended outcome.
    pub expected_failure: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckLine {
        CheckLine {
            name: name.into(),
            passed,
            expected_failure: false,
            detail: detail.into(),
        }
    }

    pub fn ok(&self) -> bool {
        self.passed || self.expected_failure
    }
}
