use alloc::vec::Vec;

use super::{factor::is_irreducible, roots_in, Fe, Field, UniPoly, MAX_EXT_DEGREE};
use crate::{Error, Result};

/// `F_{p^m}` presented by the smallest monic irreducible of degree `m`,
/// where candidates `t^m + c_{m-1} t^{m-1} + ... + c_0` are ordered by the
/// integer `Σ c_i p^i`. The same modulus comes back on every call.
pub fn make_ext_field(p: u64, m: usize) -> Result<Field> {
    let prime = Field::prime(p)?;
    if m == 0 || m > MAX_EXT_DEGREE {
        return Err(Error::DegreeGuardExceeded(m));
    }
    if m == 1 {
        return Ok(prime);
    }
    let mut digits = alloc::vec![0u64; m];
    loop {
        // increment, lowest coefficient fastest
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
        if digits[0] == 0 {
            continue;
        }
        let mut coeffs: Vec<Fe> = digits.iter().map(|&c| prime.from_u64(c)).collect();
        coeffs.push(prime.one());
        if is_irreducible(&UniPoly::new(&prime, coeffs)) {
            let mut modulus = digits.clone();
            modulus.push(1);
            return Ok(Field::from_modulus_unchecked(p, modulus));
        }
    }
}

/// The embedding `F_{p^a} → F_{p^b}` (`a | b`) sending the generator of the
/// source to the smallest root of its modulus in the target.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    /// Images of `1, a, a^2, ...`.
    powers: Vec<Fe>,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field, seed: u64) -> Result<Embedding> {
        let (a, b) = (source.degree(), target.degree());
        if source.characteristic() != target.characteristic() || b % a != 0 {
            return Err(Error::IncompatibleDegrees { from: a, to: b });
        }
        let powers = if a == 1 {
            alloc::vec![target.one()]
        } else if source == target {
            let g = target.generator();
            let mut out = Vec::with_capacity(a);
            let mut cur = target.one();
            for _ in 0..a {
                out.push(cur.clone());
                cur = target.mul(&cur, &g);
            }
            out
        } else {
            let prime = Field::prime(source.characteristic())?;
            let modulus = UniPoly::new(&prime, source.modulus().iter().map(|&c| prime.from_u64(c)).collect());
            let root = roots_in(&modulus, target, seed)?
                .into_iter()
                .next()
                .expect("a finite field contains every root of a subfield modulus");
            let mut out = Vec::with_capacity(a);
            let mut cur = target.one();
            for _ in 0..a {
                out.push(cur.clone());
                cur = target.mul(&cur, &root);
            }
            out
        };
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            powers,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, x: &Fe) -> Fe {
        let t = &self.target;
        let mut acc = t.zero();
        for (c, pw) in x.coeffs().iter().zip(&self.powers) {
            if *c != 0 {
                acc = t.add(&acc, &t.scale(pw, *c as u64));
            }
        }
        acc
    }

    /// Preimage of an element of the image, if it lies there.
    pub fn preimage(&self, y: &Fe) -> Option<Fe> {
        // the image is small only for tiny sources; solve linearly otherwise
        let t = &self.target;
        let p = t.characteristic();
        let a = self.source.degree();
        let b = t.degree();
        // columns: coordinates of powers[i] in the target power basis
        let mut rows: Vec<Vec<u64>> = (0..b)
            .map(|r| {
                let mut row: Vec<u64> = self.powers.iter().map(|pw| pw.coeffs()[r] as u64).collect();
                row.push(y.coeffs()[r] as u64);
                row
            })
            .collect();
        let sol = crate::linalg::solve_prime_augmented(&mut rows, a, p)?;
        Some(self.source.from_coeffs(&sol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_stage_has_modulus_t() {
        let f = make_ext_field(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn quadratic_stage_over_f5() {
        // oracle: enumerate monic quadratics in label order, test by root search
        let mut expected = None;
        'outer: for c1 in 0..5u64 {
            for c0 in 0..5u64 {
                let has_root = (0..5u64).any(|x| (x * x + c1 * x + c0) % 5 == 0);
                if !has_root {
                    expected = Some([c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = make_ext_field(5, 2).unwrap();
        assert_eq!(f.modulus(), &expected.unwrap());
        assert_eq!(f.modulus(), &[2, 0, 1]);
    }

    #[test]
    fn guards() {
        assert_eq!(make_ext_field(4, 2).unwrap_err(), Error::NonPrime(4));
        assert_eq!(make_ext_field(5, 25).unwrap_err(), Error::DegreeGuardExceeded(25));
        assert_eq!(make_ext_field(5, 0).unwrap_err(), Error::DegreeGuardExceeded(0));
    }

    #[test]
    fn deterministic_moduli() {
        for m in 1..=6 {
            assert_eq!(make_ext_field(7, m).unwrap(), make_ext_field(7, m).unwrap());
        }
    }

    #[test]
    fn embedding_degrees_must_divide() {
        let f25 = make_ext_field(5, 2).unwrap();
        let f125 = make_ext_field(5, 3).unwrap();
        assert_eq!(
            Embedding::new(&f25, &f125, 0).unwrap_err(),
            Error::IncompatibleDegrees { from: 2, to: 3 }
        );
    }

    #[test]
    fn embedding_preimage_round_trip() {
        let f25 = make_ext_field(5, 2).unwrap();
        let f625 = make_ext_field(5, 4).unwrap();
        let e = Embedding::new(&f25, &f625, 0).unwrap();
        for x in f25.elements() {
            assert_eq!(e.preimage(&e.apply(&x)), Some(x));
        }
        assert!(e.preimage(&f625.generator()).is_none());
    }
}
