use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{MPoly, Monomial, PolyRing};
use crate::exactfield::Fe;
use crate::{Error, Result};

/// Default budget of S-polynomial reductions for [`buchberger`].
pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// A reduced Gröbner basis: monic, auto-reduced, sorted by ascending
/// leading monomial. Reduced bases are unique, so equality of two values is
/// equality of the ideals they generate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: PolyRing,
    polys: Vec<MPoly>,
}

/// Result of [`GroebnerBasis::standard_monomials`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardMonomials {
    /// Ascending in the term order; `1` first unless the ideal is the unit ideal.
    Finite(Vec<Monomial>),
    Infinite,
}

impl StandardMonomials {
    pub fn finite(self) -> Option<Vec<Monomial>> {
        match self {
            StandardMonomials::Finite(v) => Some(v),
            StandardMonomials::Infinite => None,
        }
    }
}

struct Reducer<'a> {
    lm: &'a Monomial,
    mask: u64,
    poly: &'a MPoly,
}

fn reducers<'a>(polys: impl Iterator<Item = &'a MPoly>) -> Vec<Reducer<'a>> {
    polys
        .filter(|p| !p.is_zero())
        .map(|p| {
            let lm = p.lm().unwrap();
            Reducer {
                lm,
                mask: lm.support_mask(),
                poly: p,
            }
        })
        .collect()
}

/// `rest + coef · shift · tail` where `rest` and `tail` are descending.
fn merge_scaled(
    ring: &PolyRing,
    rest: &[(Monomial, Fe)],
    tail: &[(Monomial, Fe)],
    shift: &Monomial,
    coef: &Fe,
) -> Vec<(Monomial, Fe)> {
    let f = ring.field();
    let mut out = Vec::with_capacity(rest.len() + tail.len());
    let (mut i, mut j) = (0, 0);
    let mut pending: Option<(Monomial, Fe)> = None;
    loop {
        if pending.is_none() && j < tail.len() {
            let (m, c) = &tail[j];
            pending = Some((m.mul(shift), f.mul(c, coef)));
            j += 1;
        }
        match (rest.get(i), pending.as_ref()) {
            (None, None) => break,
            (Some(a), None) => {
                out.push(a.clone());
                i += 1;
            }
            (None, Some(_)) => out.push(pending.take().unwrap()),
            (Some(a), Some(b)) => match ring.cmp_mon(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => out.push(pending.take().unwrap()),
                Ordering::Equal => {
                    let c = f.add(&a.1, &b.1);
                    if !f.is_zero(&c) {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    pending = None;
                }
            },
        }
    }
    out
}

/// Full reduction (every term) of `f` by `reducers`.
fn reduce_with(ring: &PolyRing, f: &MPoly, reducers: &[Reducer<'_>]) -> MPoly {
    let field = ring.field();
    let mut work: Vec<(Monomial, Fe)> = f.terms().to_vec();
    let mut rem: Vec<(Monomial, Fe)> = Vec::new();
    let mut pos = 0;
    while pos < work.len() {
        let (m, c) = &work[pos];
        let mask = m.support_mask();
        let hit = reducers.iter().find(|r| r.mask & !mask == 0 && r.lm.divides(m));
        match hit {
            Some(r) => {
                let lc = r.poly.lc().unwrap();
                let coef = field.neg(&field.div(c, lc).unwrap());
                let shift = m.div(r.lm);
                work = merge_scaled(ring, &work[pos + 1..], &r.poly.terms()[1..], &shift, &coef);
                pos = 0;
            }
            None => {
                rem.push(work[pos].clone());
                pos += 1;
            }
        }
    }
    MPoly::from_sorted(ring, rem)
}

fn s_poly(ring: &PolyRing, f: &MPoly, g: &MPoly) -> MPoly {
    let field = ring.field();
    let (lf, cf) = f.lead().unwrap();
    let (lg, cg) = g.lead().unwrap();
    let l = lf.lcm(lg);
    let a = f.mul_term(&l.div(lf), &field.inv(cf).unwrap());
    let b = g.mul_term(&l.div(lg), &field.inv(cg).unwrap());
    a.sub(&b)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Builder {
    ring: PolyRing,
    basis: Vec<MPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Builder {
    fn active_reducers(&self) -> Vec<Reducer<'_>> {
        reducers(self.basis.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p))
    }

    /// Gebauer–Möller update with a new (reduced, monic) polynomial.
    fn update(&mut self, h: MPoly) {
        let hi = self.basis.len();
        let lm_h = h.lm().unwrap().clone();
        let cands: Vec<(usize, Monomial, bool)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| {
                let lm_g = self.basis[g].lm().unwrap();
                (g, lm_h.lcm(lm_g), lm_h.coprime(lm_g))
            })
            .collect();
        let mut accepted: Vec<usize> = Vec::new();
        for k in 0..cands.len() {
            let (_, ref l1, coprime) = cands[k];
            let dominated = cands[k + 1..].iter().any(|(_, l2, _)| l2.divides(l1))
                || accepted.iter().any(|&a| cands[a].1.divides(l1));
            if coprime || !dominated {
                accepted.push(k);
            }
        }
        let basis = &self.basis;
        self.pairs.retain(|p| {
            let li = basis[p.i].lm().unwrap();
            let lj = basis[p.j].lm().unwrap();
            !(lm_h.divides(&p.lcm) && li.lcm(&lm_h) != p.lcm && lm_h.lcm(lj) != p.lcm)
        });
        for k in accepted {
            let (g, ref l, coprime) = cands[k];
            if !coprime {
                self.pairs.push(Pair {
                    i: g,
                    j: hi,
                    lcm: l.clone(),
                });
            }
        }
        for g in 0..hi {
            if self.active[g] && lm_h.divides(self.basis[g].lm().unwrap()) {
                self.active[g] = false;
            }
        }
        self.basis.push(h);
        self.active.push(true);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let ring = &self.ring;
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            ring.cmp_mon(&pa.lcm, &pb.lcm).then((pa.j, pa.i).cmp(&(pb.j, pb.i)))
        })?;
        Some(self.pairs.swap_remove(best))
    }
}

fn unit_basis(ring: &PolyRing) -> GroebnerBasis {
    GroebnerBasis {
        ring: ring.clone(),
        polys: vec![MPoly::one(ring)],
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` in `ring`.
pub fn buchberger(ring: &PolyRing, gens: &[MPoly]) -> Result<GroebnerBasis> {
    buchberger_with_budget(ring, gens, DEFAULT_STEP_BUDGET)
}

pub fn buchberger_with_budget(ring: &PolyRing, gens: &[MPoly], budget: usize) -> Result<GroebnerBasis> {
    if gens.iter().any(|g| g.ring() != ring) {
        return Err(Error::MixedContexts);
    }
    let mut b = Builder {
        ring: ring.clone(),
        basis: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    // low degree first gives smaller intermediate bases
    let mut sorted: Vec<&MPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    sorted.sort_by(|a, b| ring.cmp_mon(a.lm().unwrap(), b.lm().unwrap()));
    for g in sorted {
        let h = reduce_with(ring, g, &b.active_reducers());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(ring));
        }
        b.update(h.monic());
    }
    let mut steps = 0usize;
    while let Some(pair) = b.next_pair() {
        steps += 1;
        if steps > budget {
            return Err(Error::StepGuardExceeded(budget));
        }
        let s = s_poly(ring, &b.basis[pair.i], &b.basis[pair.j]);
        let h = reduce_with(ring, &s, &b.active_reducers());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(ring));
        }
        b.update(h.monic());
    }
    let mut polys: Vec<MPoly> = b
        .basis
        .into_iter()
        .zip(b.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    polys.sort_by(|a, b| ring.cmp_mon(a.lm().unwrap(), b.lm().unwrap()));
    // drop non-minimal leading monomials, then tail-reduce
    let mut minimal: Vec<MPoly> = Vec::new();
    for p in polys {
        if !minimal.iter().any(|q| q.lm().unwrap().divides(p.lm().unwrap())) {
            minimal.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, p) in minimal.iter().enumerate() {
        let others = reducers(minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q));
        reduced.push(reduce_with(ring, p, &others).monic());
    }
    Ok(GroebnerBasis {
        ring: ring.clone(),
        polys: reduced,
    })
}

impl GroebnerBasis {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    /// `true` for the unit ideal (basis `{1}`).
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_one()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm().unwrap().clone()).collect()
    }

    /// Wraps polynomials already forming a reduced basis (used by FGLM).
    pub(crate) fn from_reduced(ring: &PolyRing, mut polys: Vec<MPoly>) -> GroebnerBasis {
        polys.sort_by(|a, b| ring.cmp_mon(a.lm().unwrap(), b.lm().unwrap()));
        GroebnerBasis {
            ring: ring.clone(),
            polys,
        }
    }

    /// The unique remainder of `f` with no term divisible by a leading
    /// monomial of the basis.
    pub fn normal_form(&self, f: &MPoly) -> Result<MPoly> {
        if f.ring() != &self.ring {
            return Err(Error::MixedContexts);
        }
        Ok(self.reduce(f))
    }

    /// [`GroebnerBasis::normal_form`] for a polynomial known to be in the ring.
    pub fn reduce(&self, f: &MPoly) -> MPoly {
        reduce_with(&self.ring, f, &reducers(self.polys.iter()))
    }

    pub fn contains(&self, f: &MPoly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.polys.iter().any(|p| p.lm().unwrap().divides(m))
    }

    /// Monomials outside the leading-term ideal, ascending in the term order.
    pub fn standard_monomials(&self) -> StandardMonomials {
        let n = self.ring.nvars();
        if self.is_unit() {
            return StandardMonomials::Finite(Vec::new());
        }
        let lms = self.leading_monomials();
        let bounded = (0..n).all(|i| {
            lms.iter()
                .any(|m| m.0[i] > 0 && m.0.iter().enumerate().all(|(j, &e)| j == i || e == 0))
        });
        if !bounded {
            return StandardMonomials::Infinite;
        }
        let one = Monomial::one(n);
        let mut seen: BTreeSet<Monomial> = BTreeSet::new();
        let mut out = Vec::new();
        if self.is_standard(&one) {
            let mut stack = vec![one];
            while let Some(m) = stack.pop() {
                if !seen.insert(m.clone()) {
                    continue;
                }
                for i in 0..n {
                    let mut next = m.clone();
                    next.0[i] += 1;
                    if !seen.contains(&next) && self.is_standard(&next) {
                        stack.push(next);
                    }
                }
                out.push(m);
            }
        }
        out.sort_by(|a, b| self.ring.cmp_mon(a, b));
        StandardMonomials::Finite(out)
    }

    pub fn is_zero_dimensional(&self) -> bool {
        matches!(self.standard_monomials(), StandardMonomials::Finite(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::multipoly::parse_poly;

    fn ring(p: u64, vars: &[&str]) -> PolyRing {
        PolyRing::drl(&Field::prime(p).unwrap(), vars.iter().copied())
    }

    fn polys(r: &PolyRing, src: &[&str]) -> Vec<MPoly> {
        src.iter().map(|s| parse_poly(r, s).unwrap()).collect()
    }

    #[test]
    fn unit_ideal() {
        let r = ring(5, &["x"]);
        let gb = buchberger(&r, &polys(&r, &["x", "x - 1"])).unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.standard_monomials(), StandardMonomials::Finite(vec![]));
    }

    #[test]
    fn single_monic_generator_is_reduced() {
        let r = ring(5, &["y"]);
        let g = polys(&r, &["y^2 - 2"]);
        let gb = buchberger(&r, &g).unwrap();
        assert_eq!(gb.polys(), &g[..]);
        assert_eq!(
            gb.reduce(&parse_poly(&r, "y^3").unwrap()),
            parse_poly(&r, "2y").unwrap()
        );
    }

    #[test]
    fn restricted_dual_number_system_has_two_standard_monomials() {
        let r = ring(7, &["y0", "y1"]);
        let gb = buchberger(&r, &polys(&r, &["y0^2 - y0", "2*y0*y1 - y1 - 1"])).unwrap();
        let sm = gb.standard_monomials().finite().unwrap();
        assert_eq!(sm.len(), 2);
        // the two solutions (0, 6) and (1, 1) satisfy the basis
        let f = r.field().clone();
        for (a, b) in [(0, 6), (1, 1)] {
            let pt = [f.from_u64(a), f.from_u64(b)];
            assert!(gb.polys().iter().all(|g| f.is_zero(&g.eval(&pt))));
        }
    }

    #[test]
    fn positive_dimension_detected() {
        let r = ring(5, &["x", "y"]);
        let gb = buchberger(&r, &polys(&r, &["x*y"])).unwrap();
        assert_eq!(gb.standard_monomials(), StandardMonomials::Infinite);
        let r0 = ring(5, &[]);
        let gb0 = buchberger(&r0, &[]).unwrap();
        assert_eq!(gb0.standard_monomials().finite().unwrap().len(), 1);
    }

    #[test]
    fn step_budget_is_a_clean_error() {
        let r = ring(7, &["x", "y", "z"]);
        let g = polys(&r, &["x^2*y - z", "x*y^2 - 1", "z^2 - x"]);
        assert_eq!(
            buchberger_with_budget(&r, &g, 1).unwrap_err(),
            Error::StepGuardExceeded(1)
        );
        assert!(buchberger(&r, &g).is_ok());
    }

    #[test]
    fn mixed_contexts() {
        let r = ring(7, &["x"]);
        let s = ring(7, &["z"]);
        let gb = buchberger(&r, &polys(&r, &["x^2"])).unwrap();
        assert_eq!(gb.normal_form(&MPoly::var(&s, 0)).unwrap_err(), Error::MixedContexts);
        assert_eq!(buchberger(&r, &polys(&s, &["z"])).unwrap_err(), Error::MixedContexts);
    }
}
