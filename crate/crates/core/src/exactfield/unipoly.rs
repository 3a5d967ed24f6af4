use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{Fe, Field};

/// Dense univariate polynomial over a [`Field`], lowest coefficient first.
///
/// The coefficient vector is always trimmed: the zero polynomial has no
/// coefficients, otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> UniPoly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    /// From prime-field integer coefficients, lowest first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Fe) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::constant(field, field.one())
    }

    /// The polynomial `x`.
    pub fn x(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![field.zero(), field.one()])
    }

    /// `x - r`.
    pub fn linear(field: &Field, root: &Fe) -> UniPoly {
        UniPoly::new(field, vec![field.neg(root), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Fe> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero lead");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Fe) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let f = &self.field;
        let db = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.lead().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return (UniPoly::zero(f), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + db], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                r[k + i] = f.sub(&r[k + i], &f.mul(&c, b));
            }
            q[k] = c;
        }
        r.truncate(db);
        (UniPoly::new(f, q), UniPoly::new(f, r))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.divrem(divisor).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s·self + t·other` and `g` monic.
    pub fn xgcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(f), UniPoly::zero(f));
        let (mut t0, mut t1) = (UniPoly::zero(f), UniPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
            t0 = core::mem::replace(&mut t1, t2);
        }
        match r0.lead() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = f.inv(l).unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    pub fn mulmod(&self, other: &UniPoly, modulus: &UniPoly) -> UniPoly {
        self.mul(other).rem(modulus)
    }

    pub fn powmod(&self, mut e: u64, modulus: &UniPoly) -> UniPoly {
        let mut base = self.rem(modulus);
        let mut acc = UniPoly::one(&self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, modulus);
            }
        }
        acc
    }

    /// `self^{|F|} mod modulus`, i.e. the relative Frobenius of the
    /// coefficient field applied in `F[x]/(modulus)`.
    pub fn pow_field_order_mod(&self, modulus: &UniPoly) -> UniPoly {
        let p = self.field.characteristic();
        let mut h = self.rem(modulus);
        for _ in 0..self.field.degree() {
            h = h.powmod(p, modulus);
        }
        h
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        UniPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.scale(c, i as u64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// Coefficientwise image under `map`, landing in `target`.
    pub fn map_coeffs(&self, target: &Field, map: impl Fn(&Fe) -> Fe) -> UniPoly {
        UniPoly::new(target, self.coeffs.iter().map(map).collect())
    }
}

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down in label order.
impl Ord for UniPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let f = Field::prime(7).unwrap();
        let a = UniPoly::from_ints(&f, &[3, 0, 5, 1, 2]);
        let b = UniPoly::from_ints(&f, &[1, 4, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn xgcd_bezout() {
        let f = Field::prime(5).unwrap();
        let a = UniPoly::from_ints(&f, &[-1, 0, 1]);
        let b = UniPoly::from_ints(&f, &[-1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, b.monic());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn derivative_in_char_p() {
        let f = Field::prime(3).unwrap();
        let a = UniPoly::from_ints(&f, &[1, 0, 0, 1]);
        assert!(a.derivative().is_zero());
    }
}
