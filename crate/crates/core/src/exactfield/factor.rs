//! Square-free, distinct-degree and equal-degree (Cantor–Zassenhaus)
//! factorization over `F_q`, plus root finding at a chosen stage.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{Embedding, Fe, Field, UniPoly};
use crate::{Error, Result};

const SPLIT_ATTEMPTS: usize = 2000;

/// `f = unit · ∏ factor^multiplicity` with monic irreducible factors sorted
/// by degree and then by coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    pub factors: Vec<(UniPoly, u32)>,
}

impl Factorization {
    /// Multiplies everything back together.
    pub fn expand(&self, field: &Field) -> UniPoly {
        let mut acc = UniPoly::constant(field, self.unit.clone());
        for (g, k) in &self.factors {
            for _ in 0..*k {
                acc = acc.mul(g);
            }
        }
        acc
    }

    pub fn degree_one_count(&self) -> usize {
        self.factors.iter().filter(|(g, _)| g.degree() == Some(1)).count()
    }
}

/// Complete factorization of a nonzero polynomial over its coefficient field.
pub fn factor_univariate(f: &UniPoly, seed: u64) -> Result<Factorization> {
    let lead = f.lead().ok_or(Error::ZeroPolynomial)?.clone();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<(UniPoly, u32)> = Vec::new();
    for (part, mult) in square_free(&monic) {
        for (block, d) in distinct_degree(&part) {
            for g in equal_degree(&block, d, &mut rng)? {
                factors.push((g, mult));
            }
        }
    }
    factors.sort();
    let mut merged: Vec<(UniPoly, u32)> = Vec::new();
    for (g, k) in factors {
        match merged.last_mut() {
            Some((h, j)) if *h == g => *j += k,
            _ => merged.push((g, k)),
        }
    }
    Ok(Factorization {
        unit: lead,
        factors: merged,
    })
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let f = f.monic();
    let x = UniPoly::x(f.field());
    let mut powers = Vec::with_capacity(n);
    let mut h = x.clone();
    for _ in 0..n {
        h = h.pow_field_order_mod(&f);
        powers.push(h.clone());
    }
    if powers[n - 1] != x.rem(&f) {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let hp = &powers[n / r - 1];
        f.gcd(&hp.sub(&x)).is_one()
    })
}

/// Distinct roots of `f` lying in `target`, in label order.
///
/// The coefficient field of `f` must be a subfield of `target`.
pub fn roots_in(f: &UniPoly, target: &Field, seed: u64) -> Result<Vec<Fe>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fk = if f.field() == target {
        f.clone()
    } else {
        let emb = Embedding::new(f.field(), target, seed)?;
        f.map_coeffs(target, |c| emb.apply(c))
    };
    if fk.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let fk = fk.monic();
    let x = UniPoly::x(target);
    let split = fk.gcd(&x.pow_field_order_mod(&fk).sub(&x));
    if split.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<Fe> = equal_degree(&split, 1, &mut rng)?
        .into_iter()
        .map(|lin| target.neg(&lin.coeff(0)))
        .collect();
    roots.sort();
    Ok(roots)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Inverse Frobenius on coefficients of a polynomial in `x^p`.
fn pth_root(f: &UniPoly) -> UniPoly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let m = field.degree();
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|c| field.frobenius_pow(c, m - 1))
        .collect();
    UniPoly::new(field, coeffs)
}

/// Square-free decomposition of a monic polynomial: pairs `(part, i)` where
/// `part` is square-free and collects the factors of multiplicity `i`.
fn square_free(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.field().characteristic() as u32;
    let df = f.derivative();
    if df.is_zero() {
        for (g, k) in square_free(&pth_root(f)) {
            out.push((g, k * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let part = w.div_exact(&y);
        if !part.is_one() {
            out.push((part, i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if !c.is_one() {
        for (g, k) in square_free(&pth_root(&c)) {
            out.push((g, k * p));
        }
    }
    out
}

/// Splits a square-free monic polynomial into blocks `(g, d)` where `g` is
/// the product of all irreducible factors of degree `d`.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let x = UniPoly::x(f.field());
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_field_order_mod(&rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if let Some(n) = rest.degree() {
        if n > 0 {
            out.push((rest, n));
        }
    }
    out
}

fn random_poly<R: RngCore>(field: &Field, below: usize, rng: &mut R) -> UniPoly {
    UniPoly::new(field, (0..below).map(|_| field.random(rng)).collect())
}

/// Cantor–Zassenhaus splitting of a product of distinct monic irreducibles
/// all of degree `d`.
fn equal_degree<R: RngCore>(g: &UniPoly, d: usize, rng: &mut R) -> Result<Vec<UniPoly>> {
    let n = g.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == d {
        return Ok(vec![g.monic()]);
    }
    let field = g.field();
    let p = field.characteristic();
    let steps = field.degree() * d;
    for _ in 0..SPLIT_ATTEMPTS {
        let a = random_poly(field, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace to F_2 of a
            let mut t = a.rem(g);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mulmod(&t, g);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^{(q^d - 1)/2} = (a^{1 + p + ... + p^{md-1}})^{(p-1)/2}
            let mut t = a.rem(g);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.powmod(p, g);
                acc = acc.mulmod(&t, g);
            }
            acc.powmod((p - 1) / 2, g).sub(&UniPoly::one(field))
        };
        let h = g.gcd(&b);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            let mut out = equal_degree(&h, d, rng)?;
            out.extend(equal_degree(&g.div_exact(&h), d, rng)?);
            return Ok(out);
        }
    }
    Err(Error::SplittingFailed(SPLIT_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &Field, c: &[i64]) -> UniPoly {
        UniPoly::from_ints(f, c)
    }

    #[test]
    fn nonresidue_quadratic_is_irreducible() {
        let f5 = Field::prime(5).unwrap();
        // squares mod 5 are {0, 1, 4}, so 2 is not a square
        let squares: Vec<u64> = (0..5u64).map(|x| x * x % 5).collect();
        assert!(!squares.contains(&2));
        let fac = factor_univariate(&ints(&f5, &[-2, 0, 1]), 1).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].0.degree(), Some(2));
    }

    #[test]
    fn split_and_repeated_factors() {
        let f5 = Field::prime(5).unwrap();
        let fac = factor_univariate(&ints(&f5, &[0, -1, 1]), 1).unwrap();
        assert_eq!(fac.factors, vec![(ints(&f5, &[0, 1]), 1), (ints(&f5, &[-1, 1]), 1)]);
        let f7 = Field::prime(7).unwrap();
        let cube = ints(&f7, &[-1, 3, -3, 1]);
        let fac = factor_univariate(&cube, 1).unwrap();
        assert_eq!(fac.factors, vec![(ints(&f7, &[-1, 1]), 3)]);
    }

    #[test]
    fn pth_power_parts() {
        let f3 = Field::prime(3).unwrap();
        // (x + 1)^3 (x + 2)^4 over F_3
        let a = ints(&f3, &[1, 1]);
        let b = ints(&f3, &[2, 1]);
        let mut g = UniPoly::one(&f3);
        for _ in 0..3 {
            g = g.mul(&a);
        }
        for _ in 0..4 {
            g = g.mul(&b);
        }
        let fac = factor_univariate(&g, 3).unwrap();
        assert_eq!(fac.factors, vec![(a, 3), (b, 4)]);
        assert_eq!(fac.expand(&f3), g);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f = Field::prime(5).unwrap();
        assert_eq!(
            factor_univariate(&UniPoly::zero(&f), 0).unwrap_err(),
            Error::ZeroPolynomial
        );
        assert!(roots_in(&UniPoly::zero(&f), &f, 0).is_err());
    }

    #[test]
    fn roots_of_idempotent_polynomial() {
        let f7 = Field::prime(7).unwrap();
        let k = Field::ext(7, 3).unwrap();
        let roots = roots_in(&ints(&f7, &[0, -1, 1]), &k, 0).unwrap();
        assert_eq!(roots, vec![k.zero(), k.one()]);
    }

    #[test]
    fn characteristic_two_splitting() {
        let f2 = Field::prime(2).unwrap();
        // x^4 - x = x (x + 1) (x^2 + x + 1) over F_2
        let g = ints(&f2, &[0, 1, 0, 0, 1]);
        let fac = factor_univariate(&g, 9).unwrap();
        let degs: Vec<usize> = fac.factors.iter().map(|(h, _)| h.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
        let k = Field::ext(2, 2).unwrap();
        assert_eq!(roots_in(&g, &k, 5).unwrap().len(), 4);
    }
}
