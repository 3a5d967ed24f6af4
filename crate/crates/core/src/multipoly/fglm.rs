use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{GroebnerBasis, MPoly, Monomial, PolyRing, StandardMonomials};
use crate::exactfield::Fe;
use crate::linalg::{zero_vector, Echelon, Vector};
use crate::{Error, Result};

/// Converts a zero-dimensional reduced basis to the reduced basis of the
/// same ideal in `target` (same field and variables, any order; lex in
/// practice) by linear algebra on normal forms.
pub fn fglm(gb: &GroebnerBasis, target: &PolyRing) -> Result<GroebnerBasis> {
    let ring = gb.ring();
    if target.vars() != ring.vars() || target.field() != ring.field() {
        return Err(Error::MixedContexts);
    }
    let field = ring.field().clone();
    let n = ring.nvars();
    let basis = match gb.standard_monomials() {
        StandardMonomials::Finite(b) => b,
        StandardMonomials::Infinite => return Err(Error::NotZeroDimensional),
    };
    if basis.is_empty() {
        return Ok(GroebnerBasis::from_reduced(target, alloc::vec![MPoly::one(target)]));
    }
    let d = basis.len();
    let index: BTreeMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    // sparse multiplication matrices: mult[v][b] = NF(x_v · e_b)
    let mut mult: Vec<Vec<Vec<(usize, Fe)>>> = Vec::with_capacity(n);
    for v in 0..n {
        let x = Monomial::var(n, v);
        let cols = basis
            .iter()
            .map(|b| {
                let prod = b.mul(&x);
                if let Some(&i) = index.get(&prod) {
                    return alloc::vec![(i, field.one())];
                }
                let nf = gb.reduce(&MPoly::monomial(ring, prod, field.one()));
                nf.terms().iter().map(|(m, c)| (index[m], c.clone())).collect()
            })
            .collect();
        mult.push(cols);
    }
    let apply = |v: usize, vec: &[Fe]| -> Vector {
        let mut out = zero_vector(&field, d);
        for (b, c) in vec.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            for (i, x) in &mult[v][b] {
                out[*i] = field.add(&out[*i], &field.mul(x, c));
            }
        }
        out
    };

    let mut echelon = Echelon::new(&field, d);
    let mut staircase: Vec<(Monomial, Vector)> = Vec::new();
    let mut lex_polys: Vec<MPoly> = Vec::new();
    // candidates: (monomial, parent staircase index and variable)
    let mut candidates: Vec<(Monomial, Option<(usize, usize)>)> = alloc::vec![(Monomial::one(n), None)];
    while !candidates.is_empty() {
        let k = (0..candidates.len())
            .min_by(|&a, &b| target.cmp_mon(&candidates[a].0, &candidates[b].0))
            .unwrap();
        let (m, parent) = candidates.swap_remove(k);
        if lex_polys.iter().any(|g| g.lm().unwrap().divides(&m)) {
            continue;
        }
        if staircase.iter().any(|(s, _)| *s == m) {
            continue;
        }
        let vec = match parent {
            None => {
                let mut e = zero_vector(&field, d);
                e[index[&Monomial::one(n)]] = field.one();
                e
            }
            Some((pi, v)) => apply(v, &staircase[pi].1),
        };
        match echelon.insert(&vec) {
            Ok(_) => {
                let si = staircase.len();
                for v in 0..n {
                    let next = m.mul(&Monomial::var(n, v));
                    if !candidates.iter().any(|(c, _)| *c == next) {
                        candidates.push((next, Some((si, v))));
                    }
                }
                staircase.push((m, vec));
            }
            Err(combo) => {
                let mut terms = alloc::vec![(m, field.one())];
                for (j, c) in combo.iter().enumerate() {
                    if !field.is_zero(c) {
                        terms.push((staircase[j].0.clone(), field.neg(c)));
                    }
                }
                lex_polys.push(MPoly::from_terms(target, terms));
            }
        }
    }
    debug_assert_eq!(staircase.len(), d);
    Ok(GroebnerBasis::from_reduced(target, lex_polys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::multipoly::{buchberger, parse_poly, TermOrder};

    #[test]
    fn fglm_matches_direct_lex_computation() {
        let f = Field::prime(7).unwrap();
        let drl = PolyRing::drl(&f, ["x", "y", "z"]);
        let lex = drl.with_order(TermOrder::Lex);
        let src = ["x^2 + y*z - 1", "y^2 - x + 2", "z^2 - x*y"];
        let g_drl: Vec<MPoly> = src.iter().map(|s| parse_poly(&drl, s).unwrap()).collect();
        let g_lex: Vec<MPoly> = src.iter().map(|s| parse_poly(&lex, s).unwrap()).collect();
        let gb = buchberger(&drl, &g_drl).unwrap();
        let converted = fglm(&gb, &lex).unwrap();
        let direct = buchberger(&lex, &g_lex).unwrap();
        assert_eq!(converted, direct);
    }

    #[test]
    fn unit_and_positive_dimension() {
        let f = Field::prime(5).unwrap();
        let drl = PolyRing::drl(&f, ["x", "y"]);
        let lex = drl.with_order(TermOrder::Lex);
        let unit = buchberger(&drl, &[MPoly::one(&drl)]).unwrap();
        assert!(fglm(&unit, &lex).unwrap().is_unit());
        let line = buchberger(&drl, &[parse_poly(&drl, "x - y").unwrap()]).unwrap();
        assert_eq!(fglm(&line, &lex).unwrap_err(), Error::NotZeroDimensional);
    }
}
