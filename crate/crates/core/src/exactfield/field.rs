use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand_core::RngCore;
use smallvec::SmallVec;

use crate::{Error, Result};

/// Largest extension degree accepted by [`Field::ext`].
pub const MAX_EXT_DEGREE: usize = 24;

const MAX_PRIME: u64 = 1 << 31;

pub(crate) type Coeffs = SmallVec<[u32; 4]>;

/// An element of some `F_{p^m}`: its coefficient vector `c_0 + c_1 a + ...`
/// in the power basis of the defining modulus.
///
/// Elements do not carry their field; arithmetic goes through [`Field`].
/// The order is the canonical label order: coefficient vectors compared from
/// the highest coefficient down, i.e. the base-`p` integer `Σ c_i p^i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fe(pub(crate) Coeffs);

pub type FieldElement = Fe;

impl Fe {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    /// Canonical integer label `Σ c_i p^i`, when it fits in 128 bits.
    pub fn label(&self, p: u64) -> Option<u128> {
        let mut acc: u128 = 0;
        for &c in self.0.iter().rev() {
            acc = acc.checked_mul(p as u128)?.checked_add(c as u128)?;
        }
        Some(acc)
    }
}

impl Ord for Fe {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

struct FieldInner {
    p: u64,
    m: usize,
    /// Monic modulus, lowest coefficient first, length `m + 1`.
    modulus: Vec<u64>,
    /// `frob[i]` = `a^{i p}` reduced, so Frobenius is a linear map.
    frob: Vec<Vec<u64>>,
}

/// A finite field `F_p` or `F_{p^m} = F_p[a]/(modulus)`.
///
/// Cloning is cheap. Two fields compare equal when they have the same
/// characteristic and the same defining modulus.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.inner.p, self.inner.m, self.inner.modulus)
        }
    }
}

/// Deterministic primality test by trial division (inputs are below 2^31).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p >= MAX_PRIME {
        return Err(Error::PrimeOutOfRange(p));
    }
    Ok(())
}

impl Field {
    /// The prime field `F_p`, presented with modulus `t`.
    pub fn prime(p: u64) -> Result<Field> {
        check_prime(p)?;
        Ok(Field::from_modulus_unchecked(p, vec![0, 1]))
    }

    /// The extension of degree `m` with the smallest monic irreducible
    /// modulus in label order. See [`crate::exactfield::make_ext_field`].
    pub fn ext(p: u64, m: usize) -> Result<Field> {
        super::tower::make_ext_field(p, m)
    }

    /// Builds a field from a monic modulus already known to be irreducible.
    pub(crate) fn from_modulus_unchecked(p: u64, modulus: Vec<u64>) -> Field {
        let m = modulus.len() - 1;
        let mut inner = FieldInner {
            p,
            m,
            modulus,
            frob: Vec::new(),
        };
        if m > 1 {
            let tmp = Field {
                inner: Arc::new(FieldInner {
                    p,
                    m,
                    modulus: inner.modulus.clone(),
                    frob: Vec::new(),
                }),
            };
            let gen_p = tmp.pow(&tmp.generator(), p);
            let mut cur = tmp.one();
            for _ in 0..m {
                inner.frob.push(cur.0.iter().map(|&c| c as u64).collect());
                cur = tmp.mul(&cur, &gen_p);
            }
        }
        Field { inner: Arc::new(inner) }
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.inner.m
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// Number of elements, if it fits in 128 bits.
    pub fn order(&self) -> Option<u128> {
        (self.inner.p as u128).checked_pow(self.inner.m as u32)
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.m == 1
    }

    pub fn zero(&self) -> Fe {
        Fe(smallvec::smallvec![0; self.inner.m])
    }

    pub fn one(&self) -> Fe {
        self.from_u64(1)
    }

    /// The class of the defining variable `a`.
    pub fn generator(&self) -> Fe {
        if self.inner.m == 1 {
            // modulus t: the generator is 0
            return self.zero();
        }
        let mut c = self.zero();
        c.0[1] = 1;
        c
    }

    pub fn from_u64(&self, v: u64) -> Fe {
        let mut c = self.zero();
        c.0[0] = (v % self.inner.p) as u32;
        c
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        let p = self.inner.p as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    /// Element from a coefficient vector; missing coefficients are zero.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Fe {
        assert!(coeffs.len() <= self.inner.m, "too many coefficients");
        let mut c = self.zero();
        for (slot, &v) in c.0.iter_mut().zip(coeffs) {
            *slot = (v % self.inner.p) as u32;
        }
        c
    }

    /// Element with the given label `Σ c_i p^i`.
    pub fn from_label(&self, mut label: u128) -> Fe {
        let p = self.inner.p as u128;
        let mut c = self.zero();
        for slot in c.0.iter_mut() {
            *slot = (label % p) as u32;
            label /= p;
        }
        c
    }

    /// The prime-field value of an element lying in `F_p`.
    pub fn as_prime(&self, a: &Fe) -> Option<u64> {
        if a.0[1..].iter().all(|&c| c == 0) {
            Some(a.0[0] as u64)
        } else {
            None
        }
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &Fe) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn contains(&self, a: &Fe) -> bool {
        a.0.len() == self.inner.m && a.0.iter().all(|&c| (c as u64) < self.inner.p)
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.inner.p;
        Fe(a.0
            .iter()
            .zip(b.0.iter())
            .map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32)
            .collect())
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.inner.p;
        Fe(a.0
            .iter()
            .zip(b.0.iter())
            .map(|(&x, &y)| ((x as u64 + p - y as u64) % p) as u32)
            .collect())
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        let p = self.inner.p;
        Fe(a.0.iter().map(|&x| ((p - x as u64) % p) as u32).collect())
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.inner.p;
        let m = self.inner.m;
        if m == 1 {
            return Fe(smallvec::smallvec![((a.0[0] as u64 * b.0[0] as u64) % p) as u32]);
        }
        let mut prod: SmallVec<[u64; 16]> = smallvec::smallvec![0; 2 * m - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let modulus = &self.inner.modulus;
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for i in 0..m {
                prod[k - m + i] = (prod[k - m + i] + neg * modulus[i]) % p;
            }
        }
        Fe(prod[..m].iter().map(|&x| x as u32).collect())
    }

    /// `c · a` for a prime-field scalar `c`.
    pub fn scale(&self, a: &Fe, c: u64) -> Fe {
        let p = self.inner.p;
        let c = c % p;
        Fe(a.0.iter().map(|&x| ((x as u64 * c) % p) as u32).collect())
    }

    pub fn pow(&self, a: &Fe, mut e: u64) -> Fe {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Fe) -> Option<Fe> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.inner.p;
        if self.inner.m == 1 {
            return Some(self.from_u64(inv_mod(a.0[0] as u64, p)));
        }
        // extended Euclid in F_p[a] against the modulus
        let mut r0: Vec<u64> = self.inner.modulus.clone();
        let mut r1: Vec<u64> = a.0.iter().map(|&c| c as u64).collect();
        trim(&mut r1);
        let mut s0: Vec<u64> = vec![0];
        let mut s1: Vec<u64> = vec![1];
        while !(r1.len() == 1 && r1[0] != 0) {
            let (q, r) = divrem_fp(&r0, &r1, p);
            let s2 = sub_fp(&s0, &mul_fp(&q, &s1, p), p);
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        let scale = inv_mod(r1[0], p);
        let mut out = self.zero();
        for (i, &c) in s1.iter().enumerate() {
            out.0[i] = ((c * scale) % p) as u32;
        }
        Some(out)
    }

    pub fn div(&self, a: &Fe, b: &Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// The absolute Frobenius `x ↦ x^p`.
    pub fn frobenius(&self, a: &Fe) -> Fe {
        let m = self.inner.m;
        if m == 1 {
            return a.clone();
        }
        let p = self.inner.p;
        let mut out: SmallVec<[u64; 8]> = smallvec::smallvec![0; m];
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &f) in out.iter_mut().zip(&self.inner.frob[i]) {
                *slot = (*slot + c as u64 * f) % p;
            }
        }
        Fe(out.iter().map(|&x| x as u32).collect())
    }

    /// `x ↦ x^{p^k}`.
    pub fn frobenius_pow(&self, a: &Fe, k: usize) -> Fe {
        let mut x = a.clone();
        for _ in 0..(k % self.inner.m) {
            x = self.frobenius(&x);
        }
        x
    }

    /// Uniformly random element drawn from `rng`.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> Fe {
        let p = self.inner.p;
        Fe((0..self.inner.m).map(|_| (rng.next_u64() % p) as u32).collect())
    }

    /// All elements in label order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let total = self.order().unwrap_or(u128::MAX);
        (0..total).map(move |l| self.from_label(l))
    }

    /// Human-readable form, e.g. `3` or `2a+1` (`a` the generator).
    pub fn format(&self, a: &Fe) -> alloc::string::String {
        use alloc::string::String;
        use core::fmt::Write;
        if self.inner.m == 1 {
            let mut s = String::new();
            let _ = write!(s, "{}", a.0[0]);
            return s;
        }
        let mut s = String::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('+');
            }
            match (i, c) {
                (0, _) => {
                    let _ = write!(s, "{}", c);
                }
                (1, 1) => s.push('a'),
                (1, _) => {
                    let _ = write!(s, "{}a", c);
                }
                (_, 1) => {
                    let _ = write!(s, "a^{}", i);
                }
                _ => {
                    let _ = write!(s, "{}a^{}", c, i);
                }
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i64) as u64
}

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn mul_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn sub_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn divrem_fp(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    if r.len() < b.len() {
        return (vec![0], r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = (r[k + db] * lead_inv) % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + (p - c) * bi) % p;
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(2147483647));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(4));
        assert_eq!(Field::prime(9).unwrap_err(), Error::NonPrime(9));
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for v in 1..7 {
            let x = f.from_u64(v);
            assert!(f.is_one(&f.mul(&x, &f.inv(&x).unwrap())));
        }
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn label_order_puts_constants_first() {
        let f = Field::ext(5, 2).unwrap();
        let labels: Vec<u128> = f.elements().take(7).map(|x| x.label(5).unwrap()).collect();
        assert_eq!(labels, vec![0, 1, 2, 3, 4, 5, 6]);
        assert!(f.from_u64(4) < f.generator());
    }

    #[test]
    fn format_elements() {
        let f = Field::ext(5, 2).unwrap();
        let x = f.from_coeffs(&[1, 2]);
        assert_eq!(f.format(&x), "2a+1");
        assert_eq!(f.format(&f.zero()), "0");
    }
}
