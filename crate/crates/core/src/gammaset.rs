//! Finite Γ-sets realized at a finite stage `F_{p^M}`: Γ acts through a
//! power of Frobenius, so a Γ-set is a sorted point list plus one
//! permutation.
//!
//! Convention: the stored permutation is the *left* action of the Frobenius
//! generator `φ`. On the twisted product `∏_s π₀(X_s)` it reads
//! `(φ·u)_{φ(s)} = φ(u_s)`; the right action `(u_s)^σ = σ_s ∘ u_{σ(s)} ∘ σ_s^{-1}`
//! is its inverse, `u^σ = σ^{-1}·u`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::exactfield::{Embedding, Fe, Field};
use crate::finalg::{decompose_local, residue_degrees, AlgebraPresentation};
use crate::multipoly::{buchberger, MPoly, PolyRing};
use crate::weilres::{enumerate_points, stage, weil_restrict, SchemePresentation, SEARCH_GUARD};
use crate::{Error, Result};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

/// Points with coordinates in `ambient`, sorted by coordinates, with the
/// permutation induced by `x ↦ x^{p^step}` applied coordinatewise.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSet {
    ambient: Field,
    step: usize,
    elements: Vec<Vec<Fe>>,
    frobenius: Vec<usize>,
}

impl GammaSet {
    /// Sorts and deduplicates `points`; fails unless the set is stable under
    /// the Frobenius power.
    pub fn from_points(ambient: &Field, step: usize, mut points: Vec<Vec<Fe>>) -> Result<GammaSet> {
        points.sort();
        points.dedup();
        let frobenius = points
            .iter()
            .map(|pt| {
                let image: Vec<Fe> = pt.iter().map(|x| ambient.frobenius_pow(x, step)).collect();
                points
                    .binary_search(&image)
                    .map_err(|_| Error::Invalid("point set is not stable under Frobenius".to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GammaSet {
            ambient: ambient.clone(),
            step,
            elements: points,
            frobenius,
        })
    }

    /// An abstract Γ-set from a permutation alone (no coordinates).
    pub fn from_permutation(ambient: &Field, step: usize, perm: Vec<usize>) -> GammaSet {
        GammaSet {
            ambient: ambient.clone(),
            step,
            elements: (0..perm.len()).map(|_| Vec::new()).collect(),
            frobenius: perm,
        }
    }

    pub fn ambient(&self) -> &Field {
        &self.ambient
    }

    /// The acting Frobenius is `x ↦ x^{p^step}`.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<Fe>] {
        &self.elements
    }

    pub fn frobenius(&self) -> &[usize] {
        &self.frobenius
    }

    pub fn index_of(&self, point: &[Fe]) -> Option<usize> {
        self.elements.binary_search_by(|e| e[..].cmp(point)).ok()
    }

    pub fn point(&self, i: usize) -> GeometricPoint {
        GeometricPoint {
            label: i,
            images: self.elements[i].clone(),
        }
    }

    /// Orbits, each starting at its smallest label and following the
    /// permutation; listed by smallest label.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.frobenius[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Orbit lengths, ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort();
        t
    }

    /// The permutation is a bijection whose order divides `degree / step`.
    pub fn is_consistent(&self) -> bool {
        let mut hit = vec![false; self.len()];
        for &j in &self.frobenius {
            if j >= self.len() || hit[j] {
                return false;
            }
            hit[j] = true;
        }
        let period = self.ambient.degree() / self.step.max(1);
        self.cycle_type().iter().all(|&c| period.is_multiple_of(c))
    }

    /// The same set realized in a larger stage.
    pub fn embed(&self, target: &Field, seed: u64) -> Result<GammaSet> {
        let emb = Embedding::new(&self.ambient, target, seed)?;
        let pts = self
            .elements
            .iter()
            .map(|p| p.iter().map(|x| emb.apply(x)).collect())
            .collect();
        GammaSet::from_points(target, self.step, pts)
    }
}

/// A homomorphism `A → F_{p^M}` given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricPoint {
    /// Position in the sorted point list.
    pub label: usize,
    pub images: Vec<Fe>,
}

impl GeometricPoint {
    /// The images satisfy every relation of `a`.
    pub fn is_valid(&self, a: &AlgebraPresentation, ambient: &Field, seed: u64) -> Result<bool> {
        let emb = Embedding::new(a.field(), ambient, seed)?;
        Ok(a.relations()
            .iter()
            .all(|r| ambient.is_zero(&r.eval_with(ambient, |c| emb.apply(c), &self.images))))
    }
}

/// Least stage degree (over the prime field) containing every residue field.
pub fn splitting_degree(a: &AlgebraPresentation, seed: u64) -> Result<usize> {
    let degs = residue_degrees(a, seed)?;
    Ok(a.field().degree() * degs.into_iter().fold(1, lcm))
}

/// All homomorphisms `A → F_{p^M}` with `M` the splitting degree, acted on
/// by the Frobenius of the base field.
pub fn geometric_points(a: &AlgebraPresentation, seed: u64) -> Result<GammaSet> {
    let m = match splitting_degree(a, seed) {
        Err(Error::ZeroRing) => return Err(Error::EmptyBase),
        other => other?,
    };
    geometric_points_in(a, &stage(&Field::prime(a.field().characteristic())?, m)?, seed)
}

/// The `ambient`-points of `A` (all geometric points once `ambient` is large
/// enough).
pub fn geometric_points_in(a: &AlgebraPresentation, ambient: &Field, seed: u64) -> Result<GammaSet> {
    if a.is_zero_ring() {
        return Err(Error::EmptyBase);
    }
    let pts = enumerate_points(a.ring(), a.relations(), ambient, seed)?;
    GammaSet::from_points(ambient, a.field().degree(), pts)
}

/// `X_s`: the relations with `s` substituted for the base generators, over
/// the field of `s`.
pub fn fiber(x: &SchemePresentation, s: &GeometricPoint, ambient: &Field, seed: u64) -> Result<AlgebraPresentation> {
    let emb = Embedding::new(x.field(), ambient, seed)?;
    let n = x.base_nvars();
    if s.images.len() != n {
        return Err(Error::Invalid(format!(
            "point has {} images, base has {} generators",
            s.images.len(),
            n
        )));
    }
    let wide = x.ring().with_field(ambient);
    let ids: Vec<usize> = (0..wide.nvars()).collect();
    let ring = PolyRing::drl(ambient, x.scheme_vars().iter().cloned());
    let mut assignment: Vec<MPoly> = s.images.iter().map(|c| MPoly::constant(&ring, c.clone())).collect();
    assignment.extend((0..ring.nvars()).map(|j| MPoly::var(&ring, j)));
    let rels = x
        .relations()
        .iter()
        .map(|g| {
            let g = g.map_into(&wide, &ids, |c| emb.apply(c));
            if assignment.is_empty() {
                Ok(g.map_into(&ring, &[], |c| c.clone()))
            } else {
                g.substitute_expand(&assignment)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let c = AlgebraPresentation::new(&ring, rels)?;
    if !c.is_finite() {
        return Err(Error::PositiveDimensionalFiber);
    }
    Ok(c)
}

/// Geometric points of a zero-dimensional algebra over `F_{p^a}`, acted on
/// by `x ↦ x^{p^a}`, realized in the least stage containing all of them.
pub fn pi0_points(c: &AlgebraPresentation, seed: u64) -> Result<GammaSet> {
    if !c.is_finite() {
        return Err(Error::NotZeroDimensional);
    }
    let a = c.field().degree();
    if c.is_zero_ring() {
        return GammaSet::from_points(c.field(), a, Vec::new());
    }
    let m = splitting_degree(c, seed)?;
    pi0_points_in(c, &stage(&Field::prime(c.field().characteristic())?, m)?, seed)
}

/// [`pi0_points`] realized in a given (large enough) stage.
pub fn pi0_points_in(c: &AlgebraPresentation, ambient: &Field, seed: u64) -> Result<GammaSet> {
    if !c.is_finite() {
        return Err(Error::NotZeroDimensional);
    }
    let pts = enumerate_points(c.ring(), c.relations(), ambient, seed)?;
    GammaSet::from_points(ambient, c.field().degree(), pts)
}

/// `∏_{s∈S} π₀(X_s)` with its twisted Frobenius action.
#[derive(Clone, Debug)]
pub struct ProductGammaSet {
    /// Elements are the concatenated coordinates `(u_s)_s`.
    pub set: GammaSet,
    /// `tuples[i][s]` is the label of `u_s` in the fiber over `s`.
    pub tuples: Vec<Vec<usize>>,
}

impl ProductGammaSet {
    /// Checks the evaluation map `(u, s) ↦ u_s` into `⊔_s X_s` pointwise:
    /// `φ(u_s) = (φ·u)_{φ(s)}`.
    pub fn evaluation_is_equivariant(&self, s: &GammaSet, fibers: &[GammaSet]) -> bool {
        let k = &self.set.ambient;
        let step = self.set.step;
        self.tuples.iter().enumerate().all(|(i, u)| {
            let image = &self.tuples[self.set.frobenius[i]];
            (0..s.len()).all(|t| {
                let moved: Vec<Fe> = fibers[t].elements[u[t]]
                    .iter()
                    .map(|x| k.frobenius_pow(x, step))
                    .collect();
                let ft = s.frobenius[t];
                fibers[ft].elements[image[ft]] == moved
            })
        })
    }
}

/// The twisted product. All sets must share one ambient field; the action
/// is the Frobenius power of `s` (fibers over a point `s` are only stable
/// under their own, relative Frobenius).
pub fn product_gamma_set(s: &GammaSet, fibers: &[GammaSet]) -> Result<ProductGammaSet> {
    if fibers.len() < s.len() {
        return Err(Error::MissingFiber(fibers.len()));
    }
    if fibers.len() > s.len() {
        return Err(Error::Invalid(format!(
            "{} fibers for {} points",
            fibers.len(),
            s.len()
        )));
    }
    if fibers.iter().any(|f| f.ambient != s.ambient) {
        return Err(Error::AmbientMismatch);
    }
    let mut size: u128 = 1;
    for f in fibers {
        size = size.saturating_mul(f.len() as u128);
    }
    if size > SEARCH_GUARD {
        return Err(Error::SearchGuardExceeded(size));
    }
    let k = &s.ambient;
    let step = s.step;
    // φ on one component: the label of φ(u_s) in the fiber over φ(s)
    let moved: Vec<Vec<usize>> = fibers
        .iter()
        .enumerate()
        .map(|(t, f)| {
            let target = &fibers[s.frobenius[t]];
            f.elements
                .iter()
                .map(|pt| {
                    let image: Vec<Fe> = pt.iter().map(|x| k.frobenius_pow(x, step)).collect();
                    target
                        .index_of(&image)
                        .ok_or_else(|| Error::Invalid("fibers are not Frobenius-compatible".to_string()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for f in fibers {
        let mut next = Vec::with_capacity(tuples.len() * f.len());
        for t in &tuples {
            for i in 0..f.len() {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        tuples = next;
    }
    let coords = |u: &[usize]| -> Vec<Fe> {
        u.iter()
            .enumerate()
            .flat_map(|(t, &i)| fibers[t].elements[i].iter().cloned())
            .collect()
    };
    let mut rows: Vec<(Vec<Fe>, Vec<usize>)> = tuples.into_iter().map(|u| (coords(&u), u)).collect();
    rows.sort();
    let position: BTreeMap<Vec<usize>, usize> = rows.iter().enumerate().map(|(i, (_, u))| (u.clone(), i)).collect();
    let frobenius = rows
        .iter()
        .map(|(_, u)| {
            let mut v = vec![0usize; u.len()];
            for (t, &i) in u.iter().enumerate() {
                v[s.frobenius[t]] = moved[t][i];
            }
            position[&v]
        })
        .collect();
    let (elements, tuples): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(ProductGammaSet {
        set: GammaSet {
            ambient: k.clone(),
            step,
            elements,
            frobenius,
        },
        tuples,
    })
}

/// A map of finite Γ-sets by labels.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    pub source: GammaSet,
    pub target: GammaSet,
    pub map: Vec<usize>,
}

impl EquivariantMap {
    /// `map ∘ φ_source = φ_target ∘ map` on every element.
    pub fn is_equivariant(&self) -> bool {
        self.map.len() == self.source.len()
            && (0..self.source.len()).all(|i| self.map[self.source.frobenius[i]] == self.target.frobenius[self.map[i]])
    }

    pub fn is_bijective(&self) -> bool {
        if self.map.len() != self.target.len() {
            return false;
        }
        let mut hit = vec![false; self.target.len()];
        self.map
            .iter()
            .all(|&j| j < hit.len() && !core::mem::replace(&mut hit[j], true))
    }

    pub fn is_iso(&self) -> bool {
        self.is_equivariant() && self.is_bijective()
    }
}

/// An equivariant bijection when the cycle types agree (Γ acts through one
/// permutation, so that is the whole invariant), matching cycles of equal
/// length in canonical order; `None` otherwise.
pub fn gamma_iso(g1: &GammaSet, g2: &GammaSet) -> Option<EquivariantMap> {
    if g1.cycle_type() != g2.cycle_type() {
        return None;
    }
    let mut by_len: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for c in g2.cycles() {
        by_len.entry(c.len()).or_default().push(c);
    }
    for v in by_len.values_mut() {
        v.reverse();
    }
    let mut map = vec![0usize; g1.len()];
    for c in g1.cycles() {
        let d = by_len.get_mut(&c.len())?.pop()?;
        for (a, b) in c.iter().zip(&d) {
            map[*a] = *b;
        }
    }
    Some(EquivariantMap {
        source: g1.clone(),
        target: g2.clone(),
        map,
    })
}

/// The unique `k`-point of a local base with residue field `k`.
pub fn residue_point(a: &AlgebraPresentation, seed: u64) -> Result<GeometricPoint> {
    let factors = decompose_local(a, seed).map_err(|e| if e == Error::ZeroRing { Error::NotLocalBase } else { e })?;
    if factors.len() != 1 || factors[0].residue_degree != 1 {
        return Err(Error::NotLocalBase);
    }
    let pts = enumerate_points(a.ring(), a.relations(), a.field(), seed)?;
    match pts.as_slice() {
        [p] => Ok(GeometricPoint {
            label: 0,
            images: p.clone(),
        }),
        _ => Err(Error::NotLocalBase),
    }
}

/// `Res(X)(F_{p^m}) → X_s(F_{p^m})` for local `A` with residue field `k`:
/// regroup a point into `A ⊗ F_{p^m}` and apply the residue map `s`.
pub fn reduction_map(x: &SchemePresentation, m: usize, seed: u64) -> Result<EquivariantMap> {
    let a = x.base();
    let s = residue_point(a, seed)?;
    let k = stage(x.field(), m)?;
    let res = weil_restrict(x)?;
    let step = x.field().degree();
    let source = GammaSet::from_points(&k, step, res.points(&k, seed)?)?;
    let emb = Embedding::new(x.field(), &k, seed)?;
    let s_k = GeometricPoint {
        label: 0,
        images: s.images.iter().map(|c| emb.apply(c)).collect(),
    };
    let fib = fiber(x, &s_k, &k, seed)?;
    // the fiber lives over k ⊗ F_{p^m}; act through Frobenius of k on both sides
    if !fib.is_finite() {
        return Err(Error::PositiveDimensionalFiber);
    }
    let target = GammaSet::from_points(&k, step, enumerate_points(fib.ring(), fib.relations(), &k, seed)?)?;
    // s(e_b)
    let se: Vec<Fe> = res.basis().iter().map(|b| emb.apply(&b.eval(&s.images))).collect();
    let map = source
        .elements
        .iter()
        .map(|p| {
            let u: Vec<Fe> = res
                .regroup(p)
                .iter()
                .map(|a| {
                    a.iter()
                        .zip(&se)
                        .fold(k.zero(), |acc, (c, e)| k.add(&acc, &k.mul(c, e)))
                })
                .collect();
            target
                .index_of(&u)
                .ok_or_else(|| Error::Invalid("reduction leaves the fiber".to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivariantMap { source, target, map })
}

/// Unit ideal test for the fiber system (used by diagnostics).
pub fn fiber_is_empty(c: &AlgebraPresentation) -> Result<bool> {
    Ok(buchberger(c.ring(), c.relations())?.is_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn geometric_point_examples() {
        let a = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - 2"]).unwrap();
        let s = geometric_points(&a, 0).unwrap();
        assert_eq!(s.ambient().degree(), 2);
        assert_eq!(s.cycle_type(), vec![2]);
        assert!(s.is_consistent());
        for i in 0..s.len() {
            assert!(s.point(i).is_valid(&a, s.ambient(), 0).unwrap());
        }
        let dual = AlgebraPresentation::parse(&f(5), &["eps"], &["eps^2"]).unwrap();
        let s = geometric_points(&dual, 0).unwrap();
        assert_eq!(s.elements(), &[vec![f(5).zero()]]);
        assert_eq!(s.cycle_type(), vec![1]);
        let k = AlgebraPresentation::ground(&f(5));
        let kk = crate::finalg::product_algebra(&k, &k).unwrap().algebra;
        assert_eq!(geometric_points(&kk, 0).unwrap().cycle_type(), vec![1, 1]);
        let zero = AlgebraPresentation::parse(&f(5), &["t"], &["1"]).unwrap();
        assert_eq!(geometric_points(&zero, 0).unwrap_err(), Error::EmptyBase);
    }

    #[test]
    fn fibers_and_pi0() {
        let a = AlgebraPresentation::parse(&f(7), &["eps"], &["eps^2"]).unwrap();
        let x = SchemePresentation::parse(&a, &["y"], &["y^2 - y - eps"]).unwrap();
        let s = geometric_points(&a, 0).unwrap();
        let c = fiber(&x, &s.point(0), s.ambient(), 0).unwrap();
        assert_eq!(c.relations()[0].to_string(), "y^2 - y");
        let pi0 = pi0_points(&c, 0).unwrap();
        assert_eq!(pi0.len(), 2);
        assert_eq!(pi0.cycle_type(), vec![1, 1]);
        let c = AlgebraPresentation::parse(&f(5), &["y"], &["y^2 - 2"]).unwrap();
        assert_eq!(pi0_points(&c, 0).unwrap().cycle_type(), vec![2]);
        let line = SchemePresentation::parse(&a, &["y", "z"], &["y*z"]).unwrap();
        assert_eq!(
            fiber(&line, &s.point(0), s.ambient(), 0).unwrap_err(),
            Error::PositiveDimensionalFiber
        );
        let inf = AlgebraPresentation::parse(&f(5), &["y", "z"], &["y"]).unwrap();
        assert_eq!(pi0_points(&inf, 0).unwrap_err(), Error::NotZeroDimensional);
    }

    #[test]
    fn pi0_is_stable_under_enlarging() {
        let c = AlgebraPresentation::parse(&f(3), &["y"], &["(y^2 + 1)*(y - 1)"]).unwrap();
        let small = pi0_points(&c, 0).unwrap();
        let big = pi0_points_in(&c, &Field::ext(3, 4).unwrap(), 0).unwrap();
        assert_eq!(small.len(), big.len());
        assert_eq!(small.cycle_type(), big.cycle_type());
        assert_eq!(small.embed(big.ambient(), 0).unwrap(), big);
    }

    #[test]
    fn twisted_product_over_split_base() {
        let k = AlgebraPresentation::ground(&f(5));
        let kk = crate::finalg::product_algebra(&k, &k).unwrap().algebra;
        let x = SchemePresentation::parse(&kk, &["y"], &["y^2 - 2"]).unwrap();
        let k2 = Field::ext(5, 2).unwrap();
        let s = geometric_points_in(&kk, &k2, 0).unwrap();
        let fibers: Vec<GammaSet> = (0..s.len())
            .map(|i| pi0_points_in(&fiber(&x, &s.point(i), &k2, 0).unwrap(), &k2, 0).unwrap())
            .collect();
        let prod = product_gamma_set(&s, &fibers).unwrap();
        assert_eq!(prod.set.len(), 4);
        assert_eq!(prod.set.cycle_type(), vec![2, 2]);
        assert!(prod.evaluation_is_equivariant(&s, &fibers));
        assert_eq!(product_gamma_set(&s, &fibers[..1]).unwrap_err(), Error::MissingFiber(1));
        let other = pi0_points(&AlgebraPresentation::parse(&f(5), &["y"], &["y"]).unwrap(), 0).unwrap();
        assert_eq!(
            product_gamma_set(&s, &[fibers[0].clone(), other]).unwrap_err(),
            Error::AmbientMismatch
        );
    }

    #[test]
    fn theorem_pair_for_quadratic_base() {
        let a = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - 2"]).unwrap();
        let x = SchemePresentation::parse(&a, &["y"], &["y^2 - t"]).unwrap();
        let k4 = Field::ext(5, 4).unwrap();
        let res = weil_restrict(&x).unwrap();
        let left = GammaSet::from_points(&k4, 1, res.points(&k4, 0).unwrap()).unwrap();
        let s = geometric_points_in(&a, &k4, 0).unwrap();
        let fibers: Vec<GammaSet> = (0..s.len())
            .map(|i| pi0_points_in(&fiber(&x, &s.point(i), &k4, 0).unwrap(), &k4, 0).unwrap())
            .collect();
        let right = product_gamma_set(&s, &fibers).unwrap();
        assert_eq!(left.len(), 4);
        let iso = gamma_iso(&left, &right.set).unwrap();
        assert!(iso.is_iso());
        assert_eq!(left.cycle_type(), vec![4]);
    }

    #[test]
    fn iso_decisions() {
        let k = f(5);
        let a = GammaSet::from_permutation(&k, 1, vec![1, 0, 3, 2]);
        let b = GammaSet::from_permutation(&k, 1, vec![1, 2, 3, 0]);
        assert!(gamma_iso(&a, &b).is_none());
        let id = gamma_iso(&a, &a).unwrap();
        assert_eq!(id.map, vec![0, 1, 2, 3]);
        let c = GammaSet::from_permutation(&k, 1, vec![2, 3, 0, 1]);
        let m = gamma_iso(&a, &c).unwrap();
        assert!(m.is_iso());
    }

    #[test]
    fn reduction_examples() {
        let a = AlgebraPresentation::parse(&f(7), &["eps"], &["eps^2"]).unwrap();
        let x = SchemePresentation::parse(&a, &["y"], &["y^2 - y - eps"]).unwrap();
        let r = reduction_map(&x, 1, 0).unwrap();
        assert_eq!(r.map, vec![0, 1]);
        assert!(r.is_iso());
        let e5 = AlgebraPresentation::parse(&f(5), &["eps"], &["eps^2"]).unwrap();
        let bad = SchemePresentation::parse(&e5, &[], &["eps"]).unwrap();
        let r = reduction_map(&bad, 1, 0).unwrap();
        assert_eq!((r.source.len(), r.target.len()), (0, 1));
        assert!(!r.is_bijective());
        let split = AlgebraPresentation::parse(&f(7), &["t"], &["t^2 - t"]).unwrap();
        let xs = SchemePresentation::parse(&split, &["y"], &["y - t"]).unwrap();
        assert_eq!(reduction_map(&xs, 1, 0).unwrap_err(), Error::NotLocalBase);
    }

    #[test]
    fn reduction_in_an_extension_keeps_frobenius_of_k() {
        // 2 is not a cube mod 7: three conjugate roots over F_343
        let e = AlgebraPresentation::parse(&f(7), &["eps"], &["eps^2"]).unwrap();
        let x = SchemePresentation::parse(&e, &["y"], &["y^3 - 2 - eps"]).unwrap();
        let r = reduction_map(&x, 3, 0).unwrap();
        assert_eq!(r.target.cycle_type(), vec![3]);
        assert_eq!(r.source.cycle_type(), vec![3]);
        assert!(r.is_iso());
    }
}
