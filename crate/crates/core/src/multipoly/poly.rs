use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{Monomial, PolyRing};
use crate::exactfield::{Fe, Field};
use crate::{Error, Result};

/// Sparse polynomial: terms sorted strictly descending under the ring's
/// term order, no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: PolyRing,
    terms: Vec<(Monomial, Fe)>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_repr())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_repr())
    }
}

impl MPoly {
    pub fn zero(ring: &PolyRing) -> MPoly {
        MPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &PolyRing, c: Fe) -> MPoly {
        MPoly::from_terms(ring, alloc::vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &PolyRing) -> MPoly {
        MPoly::constant(ring, ring.field().one())
    }

    pub fn from_int(ring: &PolyRing, c: i64) -> MPoly {
        MPoly::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &PolyRing, i: usize) -> MPoly {
        MPoly::from_terms(ring, alloc::vec![(Monomial::var(ring.nvars(), i), ring.field().one())])
    }

    pub fn var_named(ring: &PolyRing, name: &str) -> Result<MPoly> {
        Ok(MPoly::var(ring, ring.var_index_or_err(name)?))
    }

    pub fn monomial(ring: &PolyRing, m: Monomial, c: Fe) -> MPoly {
        MPoly::from_terms(ring, alloc::vec![(m, c)])
    }

    /// Sorts, merges equal monomials and drops zeros.
    pub fn from_terms(ring: &PolyRing, mut terms: Vec<(Monomial, Fe)>) -> MPoly {
        let field = ring.field();
        terms.sort_by(|a, b| ring.cmp_mon(&b.0, &a.0));
        let mut out: Vec<(Monomial, Fe)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        MPoly {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Terms already strictly descending and nonzero.
    pub(crate) fn from_sorted(ring: &PolyRing, terms: Vec<(Monomial, Fe)>) -> MPoly {
        MPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Fe)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.field().is_one(&self.terms[0].1)
    }

    pub fn lead(&self) -> Option<&(Monomial, Fe)> {
        self.terms.first()
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&Fe> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Coefficient of `m` (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> Fe {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn constant_term(&self) -> Fe {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    pub(crate) fn check_same(&self, other: &MPoly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedContexts)
        }
    }

    fn merge(&self, other: &MPoly, negate: bool) -> MPoly {
        let f = self.field();
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => ring.cmp_mon(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { f.neg(c) } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let c = if negate { f.sub(a, b) } else { f.add(a, b) };
                    if !f.is_zero(&c) {
                        out.push((m.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly::from_sorted(ring, out)
    }

    /// Panics on mixed rings; use [`MPoly::try_add`] for a checked version.
    pub fn add(&self, other: &MPoly) -> MPoly {
        self.try_add(other).expect("polynomials from different rings")
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.try_sub(other).expect("polynomials from different rings")
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.try_mul(other).expect("polynomials from different rings")
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let mut acc = MPoly::zero(&self.ring);
        // multiply by the shorter operand term by term
        let (short, long) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, c) in &short.terms {
            acc = acc.merge(&long.mul_term(m, c), false);
        }
        Ok(acc)
    }

    pub fn neg(&self) -> MPoly {
        let f = self.field();
        MPoly::from_sorted(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        )
    }

    pub fn scale(&self, c: &Fe) -> MPoly {
        let f = self.field();
        if f.is_zero(c) {
            return MPoly::zero(&self.ring);
        }
        MPoly::from_sorted(
            &self.ring,
            self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect(),
        )
    }

    /// `c · m · self`; monomial multiplication preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Fe) -> MPoly {
        let f = self.field();
        if f.is_zero(c) {
            return MPoly::zero(&self.ring);
        }
        MPoly::from_sorted(
            &self.ring,
            self.terms.iter().map(|(t, a)| (t.mul(m), f.mul(a, c))).collect(),
        )
    }

    pub fn monic(&self) -> MPoly {
        match self.lc() {
            None => self.clone(),
            Some(c) => {
                let inv = self.field().inv(c).unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MPoly {
        let f = self.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| {
                let mut d = m.clone();
                d.0[i] -= 1;
                (d, f.scale(c, m.0[i] as u64))
            })
            .collect();
        MPoly::from_terms(&self.ring, terms)
    }

    /// Indices of variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0))
            .collect()
    }

    /// Evaluates at a point of `target^n`; coefficients are carried into
    /// `target` by `coeff_map`.
    pub fn eval_with(&self, target: &Field, coeff_map: impl Fn(&Fe) -> Fe, point: &[Fe]) -> Fe {
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = coeff_map(c);
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t = target.mul(&t, &target.pow(x, e as u64));
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Evaluates at a point with coordinates in the coefficient field.
    pub fn eval(&self, point: &[Fe]) -> Fe {
        self.eval_with(self.field(), |c| c.clone(), point)
    }

    /// Substitutes `assignment[i]` for variable `i` and expands. All images
    /// must live in one ring.
    pub fn substitute_expand(&self, assignment: &[MPoly]) -> Result<MPoly> {
        if assignment.len() < self.ring.nvars() {
            return Err(Error::MissingAssignment(self.ring.vars()[assignment.len()].clone()));
        }
        let target = match assignment.first() {
            Some(a) => a.ring.clone(),
            None => return Ok(self.clone()),
        };
        if assignment.iter().any(|a| a.ring != target) || target.field() != self.field() {
            return Err(Error::MixedContexts);
        }
        // cache powers per variable
        let mut powers: Vec<Vec<MPoly>> = assignment
            .iter()
            .map(|a| alloc::vec![MPoly::one(&target), a.clone()])
            .collect();
        let mut acc = MPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&assignment[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Moves the polynomial into `target`: variable `i` becomes
    /// `var_map[i]`, coefficients go through `coeff_map`.
    pub fn map_into(&self, target: &PolyRing, var_map: &[usize], coeff_map: impl Fn(&Fe) -> Fe) -> MPoly {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = Monomial::one(n);
                for (i, &x) in m.0.iter().enumerate() {
                    e.0[var_map[i]] += x;
                }
                (e, coeff_map(c))
            })
            .collect();
        MPoly::from_terms(target, terms)
    }

    /// Same coefficients and variables in a ring with the same variable list
    /// and field (typically another term order).
    pub fn reorder(&self, target: &PolyRing) -> MPoly {
        assert_eq!(target.vars(), self.ring.vars());
        MPoly::from_terms(target, self.terms.clone())
    }

    fn to_string_repr(&self) -> String {
        format_poly(self)
    }
}

fn format_coeff(field: &Field, c: &Fe) -> (bool, String) {
    use alloc::format;
    if field.is_prime_field() {
        let p = field.characteristic();
        let v = c.coeffs()[0] as u64;
        if v > p / 2 {
            (true, format!("{}", p - v))
        } else {
            (false, format!("{}", v))
        }
    } else {
        (false, format!("({})", field.format(c)))
    }
}

fn format_poly(poly: &MPoly) -> String {
    let field = poly.field();
    if poly.terms.is_empty() {
        return String::from("0");
    }
    let mut s = String::new();
    for (i, (m, c)) in poly.terms.iter().enumerate() {
        let (negative, mag) = format_coeff(field, c);
        if i == 0 {
            if negative {
                s.push('-');
            }
        } else {
            s.push_str(if negative { " - " } else { " + " });
        }
        let unit = mag == "1";
        if m.is_one() {
            s.push_str(&mag);
        } else {
            if !unit {
                s.push_str(&mag);
                s.push('*');
            }
            s.push_str(&poly.ring.format_monomial(m));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;
    use alloc::string::ToString;

    #[test]
    fn binomial_substitution() {
        let f5 = Field::prime(5).unwrap();
        let r = PolyRing::drl(&f5, ["y"]);
        let target = PolyRing::drl(&f5, ["y0", "y1", "t"]);
        let f = parse_poly(&r, "y^2").unwrap();
        let img = parse_poly(&target, "y0 + y1*t").unwrap();
        let got = f.substitute_expand(&[img]).unwrap();
        assert_eq!(got, parse_poly(&target, "y0^2 + 2*y0*y1*t + y1^2*t^2").unwrap());
    }

    #[test]
    fn identity_substitution() {
        let f7 = Field::prime(7).unwrap();
        let r = PolyRing::drl(&f7, ["x", "y"]);
        let f = parse_poly(&r, "x^3*y - 2*x + 5").unwrap();
        let ids = [MPoly::var(&r, 0), MPoly::var(&r, 1)];
        assert_eq!(f.substitute_expand(&ids).unwrap(), f);
    }

    #[test]
    fn missing_assignment() {
        let f7 = Field::prime(7).unwrap();
        let r = PolyRing::drl(&f7, ["x", "y"]);
        let f = parse_poly(&r, "x*y").unwrap();
        assert_eq!(
            f.substitute_expand(&[MPoly::var(&r, 0)]).unwrap_err(),
            Error::MissingAssignment("y".into())
        );
    }

    #[test]
    fn mixed_rings_rejected() {
        let f7 = Field::prime(7).unwrap();
        let r1 = PolyRing::drl(&f7, ["x"]);
        let r2 = PolyRing::drl(&f7, ["z"]);
        assert_eq!(
            MPoly::var(&r1, 0).try_add(&MPoly::var(&r2, 0)).unwrap_err(),
            Error::MixedContexts
        );
    }

    #[test]
    fn display_uses_signed_residues() {
        let f7 = Field::prime(7).unwrap();
        let r = PolyRing::drl(&f7, ["y0", "y1"]);
        let f = parse_poly(&r, "2*y0*y1 - y1 - 1").unwrap();
        assert_eq!(f.to_string(), "2*y0*y1 - y1 - 1");
    }
}
