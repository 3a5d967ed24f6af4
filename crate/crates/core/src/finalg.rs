//! Finite-dimensional algebras `k[t_1..t_n]/I` over a finite field:
//! standard-monomial bases, arithmetic on coordinate vectors, base change,
//! products, decomposition into local factors and the étaleness test for
//! relative dimension zero.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::exactfield::{factor_univariate, Embedding, Fe, Field, UniPoly};
use crate::linalg::{add_scaled, is_zero_vector, zero_vector, Echelon, Matrix, Vector};
use crate::multipoly::{buchberger, GroebnerBasis, MPoly, Monomial, PolyRing};
use crate::weilres::SchemePresentation;
use crate::{Error, Result};

/// Full multiplication tables are cached up to this dimension.
const TABLE_LIMIT: usize = 48;
const IDEMPOTENT_ATTEMPTS: usize = 400;

/// `k[t]/I` with its reduced Gröbner basis and, when finite, the
/// standard-monomial basis `e_1 = 1, e_2, ...`.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    ring: PolyRing,
    relations: Vec<MPoly>,
    gb: GroebnerBasis,
    basis: Option<Vec<Monomial>>,
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gb == other.gb
    }
}

impl AlgebraPresentation {
    pub fn new(ring: &PolyRing, relations: Vec<MPoly>) -> Result<AlgebraPresentation> {
        let gb = buchberger(ring, &relations)?;
        let basis = gb.standard_monomials().finite();
        Ok(AlgebraPresentation {
            ring: ring.clone(),
            relations,
            gb,
            basis,
        })
    }

    /// Convenience constructor from variable names and relation strings.
    pub fn parse(field: &Field, vars: &[&str], relations: &[&str]) -> Result<AlgebraPresentation> {
        let ring = PolyRing::drl(field, vars.iter().copied());
        let rels = relations
            .iter()
            .map(|r| crate::multipoly::parse_poly(&ring, r))
            .collect::<Result<Vec<_>>>()?;
        AlgebraPresentation::new(&ring, rels)
    }

    /// The field itself: no generators, no relations.
    pub fn ground(field: &Field) -> AlgebraPresentation {
        AlgebraPresentation::new(&PolyRing::drl(field, Vec::<String>::new()), Vec::new())
            .expect("the ground field is always presentable")
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn relations(&self) -> &[MPoly] {
        &self.relations
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn is_finite(&self) -> bool {
        self.basis.is_some()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.gb.is_unit()
    }

    /// `(d, e_1..e_d)`; fails with `NotFinite` for positive-dimensional
    /// presentations.
    pub fn dimension_and_basis(&self) -> Result<(usize, &[Monomial])> {
        let b = self.basis.as_deref().ok_or(Error::NotFinite)?;
        Ok((b.len(), b))
    }

    pub fn dim(&self) -> Result<usize> {
        Ok(self.dimension_and_basis()?.0)
    }

    pub fn basis(&self) -> Result<&[Monomial]> {
        Ok(self.dimension_and_basis()?.1)
    }

    pub fn basis_polys(&self) -> Result<Vec<MPoly>> {
        let one = self.field().one();
        Ok(self
            .basis()?
            .iter()
            .map(|m| MPoly::monomial(&self.ring, m.clone(), one.clone()))
            .collect())
    }

    pub fn reduce(&self, f: &MPoly) -> MPoly {
        self.gb.reduce(f)
    }

    /// Coordinates of the class of `f` in the standard-monomial basis.
    pub fn coordinates(&self, f: &MPoly) -> Result<Vector> {
        let basis = self.basis()?;
        let nf = self.gb.normal_form(f)?;
        let field = self.field();
        let mut v = zero_vector(field, basis.len());
        for (m, c) in nf.terms() {
            let i = basis.iter().position(|b| b == m).expect("normal forms are standard");
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// The normal-form polynomial with the given coordinates.
    pub fn element(&self, coords: &[Fe]) -> Result<MPoly> {
        let basis = self.basis()?;
        Ok(MPoly::from_terms(
            &self.ring,
            basis.iter().cloned().zip(coords.iter().cloned()).collect(),
        ))
    }

    /// `A ⊗_k K`: the same presentation read over the extension `K`.
    pub fn tensor_extend(&self, target: &Field, seed: u64) -> Result<AlgebraPresentation> {
        if target == self.field() {
            return Ok(self.clone());
        }
        let emb = Embedding::new(self.field(), target, seed)?;
        let ring = self.ring.with_field(target);
        let ids: Vec<usize> = (0..ring.nvars()).collect();
        let rels = self
            .relations
            .iter()
            .map(|r| r.map_into(&ring, &ids, |c| emb.apply(c)))
            .collect();
        AlgebraPresentation::new(&ring, rels)
    }

    pub fn finite(&self) -> Result<FiniteAlgebra> {
        FiniteAlgebra::new(self)
    }

    /// The presentation with extra relations added (a quotient).
    pub fn quotient(&self, extra: &[MPoly]) -> Result<AlgebraPresentation> {
        let mut rels = self.relations.clone();
        rels.extend(extra.iter().cloned());
        AlgebraPresentation::new(&self.ring, rels)
    }
}

/// A finite algebra with arithmetic on coordinate vectors.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    pres: AlgebraPresentation,
    dim: usize,
    /// `gen_mult[i]` multiplies by the generator `t_i`.
    gen_mult: Vec<Matrix>,
    table: Option<Vec<Vec<Vector>>>,
}

impl FiniteAlgebra {
    pub fn new(pres: &AlgebraPresentation) -> Result<FiniteAlgebra> {
        let (dim, basis) = pres.dimension_and_basis()?;
        let field = pres.field().clone();
        let n = pres.ring.nvars();
        let mut gen_mult = Vec::with_capacity(n);
        for i in 0..n {
            let x = Monomial::var(n, i);
            let cols: Vec<Vector> = basis
                .iter()
                .map(|b| pres.coordinates(&MPoly::monomial(&pres.ring, b.mul(&x), field.one())))
                .collect::<Result<_>>()?;
            gen_mult.push(Matrix::from_columns(&field, dim, &cols));
        }
        let mut alg = FiniteAlgebra {
            pres: pres.clone(),
            dim,
            gen_mult,
            table: None,
        };
        if dim <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(dim);
            for bi in basis {
                let row = basis
                    .iter()
                    .map(|bj| pres.coordinates(&MPoly::monomial(&pres.ring, bi.mul(bj), field.one())))
                    .collect::<Result<Vec<_>>>()?;
                table.push(row);
            }
            alg.table = Some(table);
        }
        Ok(alg)
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }

    pub fn field(&self) -> &Field {
        self.pres.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero(&self) -> Vector {
        zero_vector(self.field(), self.dim)
    }

    pub fn one(&self) -> Vector {
        self.pres
            .coordinates(&MPoly::one(&self.pres.ring))
            .expect("finite presentation")
    }

    pub fn constant(&self, c: &Fe) -> Vector {
        let f = self.field();
        self.one().iter().map(|x| f.mul(x, c)).collect()
    }

    /// Coordinates of the generator `t_i`.
    pub fn generator(&self, i: usize) -> Vector {
        self.from_poly(&MPoly::var(&self.pres.ring, i))
    }

    pub fn from_poly(&self, f: &MPoly) -> Vector {
        self.pres.coordinates(f).expect("finite presentation")
    }

    pub fn to_poly(&self, v: &[Fe]) -> MPoly {
        self.pres.element(v).expect("finite presentation")
    }

    pub fn add(&self, a: &[Fe], b: &[Fe]) -> Vector {
        let f = self.field();
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Fe], b: &[Fe]) -> Vector {
        let f = self.field();
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }

    pub fn scale(&self, a: &[Fe], c: &Fe) -> Vector {
        let f = self.field();
        a.iter().map(|x| f.mul(x, c)).collect()
    }

    pub fn is_zero(&self, a: &[Fe]) -> bool {
        is_zero_vector(self.field(), a)
    }

    pub fn mul(&self, a: &[Fe], b: &[Fe]) -> Vector {
        let f = self.field();
        match &self.table {
            Some(table) => {
                let mut out = self.zero();
                for (i, x) in a.iter().enumerate() {
                    if f.is_zero(x) {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if f.is_zero(y) {
                            continue;
                        }
                        add_scaled(f, &mut out, &table[i][j], &f.mul(x, y));
                    }
                }
                out
            }
            None => self.mul_matrix(a).mul_vec(f, b),
        }
    }

    pub fn pow(&self, a: &[Fe], mut e: u64) -> Vector {
        let mut acc = self.one();
        let mut base = a.to_vec();
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

    /// Matrix of multiplication by `a`.
    pub fn mul_matrix(&self, a: &[Fe]) -> Matrix {
        let f = self.field();
        if let Some(table) = &self.table {
            let cols: Vec<Vector> = (0..self.dim)
                .map(|j| {
                    let mut col = self.zero();
                    for (i, x) in a.iter().enumerate() {
                        add_scaled(f, &mut col, &table[i][j], x);
                    }
                    col
                })
                .collect();
            return Matrix::from_columns(f, self.dim, &cols);
        }
        // a as a polynomial in the generators, applied through their matrices
        let poly = self.to_poly(a);
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| {
                let mut e = self.zero();
                e[j] = f.one();
                let mut col = self.zero();
                for (m, c) in poly.terms() {
                    let mut v = e.clone();
                    for (i, &k) in m.exponents().iter().enumerate() {
                        for _ in 0..k {
                            v = self.gen_mult[i].mul_vec(f, &v);
                        }
                    }
                    add_scaled(f, &mut col, &v, c);
                }
                col
            })
            .collect();
        Matrix::from_columns(f, self.dim, &cols)
    }

    pub fn inverse(&self, a: &[Fe]) -> Option<Vector> {
        self.mul_matrix(a).solve(self.field(), &self.one())
    }

    pub fn is_unit(&self, a: &[Fe]) -> bool {
        self.dim == 0 || self.mul_matrix(a).rank(self.field()) == self.dim
    }

    /// Evaluates `f` (over this algebra's field) at generator images inside
    /// the algebra, with `unit` standing for the constant `1` (an idempotent
    /// when working inside a factor `εA`).
    pub fn eval_poly(&self, f: &MPoly, images: &[Vector], unit: &[Fe]) -> Vector {
        let field = self.field();
        let mut powers: Vec<Vec<Vector>> = images.iter().map(|x| vec![unit.to_vec(), x.clone()]).collect();
        let mut acc = self.zero();
        for (m, c) in f.terms() {
            let mut t = unit.to_vec();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = self.mul(powers[i].last().unwrap(), &images[i]);
                    powers[i].push(next);
                }
                t = self.mul(&t, &powers[i][e as usize]);
            }
            add_scaled(field, &mut acc, &t, c);
        }
        acc
    }

    /// Minimal polynomial of `a` over the field, relative to the identity
    /// `unit`, modulo the subspace `modulo` (pass an empty echelon for none).
    pub fn minimal_polynomial(&self, a: &[Fe], unit: &[Fe], modulo: &Echelon) -> UniPoly {
        let f = self.field();
        let mut ech = Echelon::new(f, self.dim);
        let mut power = unit.to_vec();
        loop {
            let reduced = modulo.reduce(&power).0;
            match ech.insert(&reduced) {
                Ok(_) => power = self.mul(&power, a),
                Err(combo) => {
                    let mut coeffs: Vec<Fe> = combo.iter().map(|c| f.neg(c)).collect();
                    coeffs.push(f.one());
                    return UniPoly::new(f, coeffs);
                }
            }
        }
    }

    /// Evaluates a univariate polynomial at `a`, with `unit` as `a^0`.
    pub fn eval_unipoly(&self, g: &UniPoly, a: &[Fe], unit: &[Fe]) -> Vector {
        let mut acc = self.zero();
        for c in g.coeffs().iter().rev() {
            acc = self.mul(&acc, a);
            acc = self.add(&acc, &self.scale(unit, c));
        }
        acc
    }

    /// The nilradical as an echelon basis: `x` is nilpotent iff
    /// `x^{p^j} = 0` with `p^j ≥ dim`; that map is Frobenius-semilinear,
    /// so its kernel is the coordinatewise inverse Frobenius of a kernel.
    pub fn nilradical(&self) -> Echelon {
        let f = self.field();
        let p = f.characteristic();
        let mut j = 0usize;
        let mut q: u128 = 1;
        while q < self.dim.max(1) as u128 {
            q *= p as u128;
            j += 1;
        }
        let cols: Vec<Vector> = (0..self.dim)
            .map(|i| {
                let mut e = self.zero();
                e[i] = f.one();
                let mut x = e;
                for _ in 0..j {
                    x = self.pow(&x, p);
                }
                x
            })
            .collect();
        let m = Matrix::from_columns(f, self.dim, &cols);
        let back = (f.degree() - j % f.degree()) % f.degree();
        let mut ech = Echelon::new(f, self.dim);
        for v in m.kernel(f) {
            let w: Vector = v.iter().map(|x| f.frobenius_pow(x, back)).collect();
            let _ = ech.insert(&w);
        }
        ech
    }

    /// Basis of the subspace `εA`.
    pub fn ideal_basis(&self, e: &[Fe]) -> Vec<Vector> {
        let f = self.field();
        let mut ech = Echelon::new(f, self.dim);
        let mut out = Vec::new();
        for i in 0..self.dim {
            let mut b = self.zero();
            b[i] = f.one();
            let v = self.mul(e, &b);
            if ech.insert(&v).is_ok() {
                out.push(v);
            }
        }
        out
    }
}

/// A local factor `εA ≅ A/(1 - ε)` of a finite algebra.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    /// Normal form of the primitive idempotent.
    pub idempotent: MPoly,
    /// Coordinates of the idempotent in the parent basis.
    pub idempotent_coords: Vector,
    /// `A/(1 - ε)` over the same generators.
    pub presentation: AlgebraPresentation,
    pub dim: usize,
    /// Degree of the residue field over the base field.
    pub residue_degree: usize,
    /// The projection `A → A/(1 - ε)`, generators to generators.
    pub projection: AlgebraHom,
}

fn newton_idempotent(alg: &FiniteAlgebra, u: Vector) -> Vector {
    let f = alg.field();
    let three = f.from_u64(3);
    let two = f.from_u64(2);
    let mut e = u;
    loop {
        let sq = alg.mul(&e, &e);
        if sq == e {
            return e;
        }
        let cube = alg.mul(&sq, &e);
        e = alg.sub(&alg.scale(&sq, &three), &alg.scale(&cube, &two));
    }
}

enum Split {
    Local(usize),
    Parts(Vec<Vector>),
}

fn split_idempotent<R: rand_core::RngCore>(
    alg: &FiniteAlgebra,
    e: &[Fe],
    nil: &Echelon,
    rng: &mut R,
    seed: u64,
) -> Result<Split> {
    let f = alg.field();
    // dimension of εA modulo the nilradical
    let mut red = nil.clone();
    let base_len = red.len();
    for v in alg.ideal_basis(e) {
        let _ = red.insert(&v);
    }
    let reduced_dim = red.len() - base_len;
    let n = alg.presentation().ring().nvars();
    for attempt in 0..IDEMPOTENT_ATTEMPTS {
        // generators first, then random elements of εA
        let a = if attempt < n {
            alg.mul(e, &alg.generator(attempt))
        } else {
            let r: Vector = (0..alg.dim()).map(|_| f.random(rng)).collect();
            alg.mul(e, &r)
        };
        let mu = alg.minimal_polynomial(&a, e, nil);
        let fac = factor_univariate(&mu, seed)?;
        if fac.factors.len() == 1 {
            if mu.degree() == Some(reduced_dim) {
                return Ok(Split::Local(reduced_dim));
            }
            continue;
        }
        let mut parts = Vec::with_capacity(fac.factors.len());
        for (pi, _) in &fac.factors {
            let others = mu.div_exact(pi);
            let (_, s, _) = others.xgcd(pi);
            let h = s.mul(&others).rem(&mu);
            let u = alg.eval_unipoly(&h, &a, e);
            parts.push(newton_idempotent(alg, alg.mul(&u, e)));
        }
        return Ok(Split::Parts(parts));
    }
    Err(Error::SplittingFailed(IDEMPOTENT_ATTEMPTS))
}

/// Decomposes a nonzero finite algebra into local factors via a complete
/// set of orthogonal idempotents.
pub fn decompose_local(a: &AlgebraPresentation, seed: u64) -> Result<Vec<LocalFactor>> {
    let alg = a.finite()?;
    if alg.dim() == 0 {
        return Err(Error::ZeroRing);
    }
    let nil = alg.nilradical();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending = vec![alg.one()];
    let mut done: Vec<(Vector, usize)> = Vec::new();
    while let Some(e) = pending.pop() {
        match split_idempotent(&alg, &e, &nil, &mut rng, seed)? {
            Split::Local(deg) => done.push((e, deg)),
            Split::Parts(parts) => pending.extend(parts),
        }
    }
    let mut factors = Vec::with_capacity(done.len());
    for (e, residue_degree) in done {
        let idem = alg.to_poly(&e);
        let one = MPoly::one(a.ring());
        let presentation = a.quotient(&[idem.sub(&one)])?;
        let projection = AlgebraHom::new(
            a,
            &presentation,
            (0..a.ring().nvars())
                .map(|i| MPoly::var(presentation.ring(), i))
                .collect(),
        )?;
        factors.push(LocalFactor {
            dim: presentation.dim()?,
            idempotent: idem,
            idempotent_coords: e,
            presentation,
            residue_degree,
            projection,
        });
    }
    factors.sort_by(|x, y| {
        (x.residue_degree, x.dim)
            .cmp(&(y.residue_degree, y.dim))
            .then_with(|| x.idempotent_coords.iter().rev().cmp(y.idempotent_coords.iter().rev()))
    });
    Ok(factors)
}

/// Residue degrees (one per local factor, ascending) of a nonzero finite
/// algebra. Tries a cyclic element first: if some `a` has a minimal
/// polynomial of full degree, `A ≅ K[x]/(μ_a)` and the degrees are those of
/// the distinct irreducible factors of `μ_a`.
pub fn residue_degrees(a: &AlgebraPresentation, seed: u64) -> Result<Vec<usize>> {
    let alg = a.finite()?;
    if alg.dim() == 0 {
        return Err(Error::ZeroRing);
    }
    let f = alg.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = a.ring().nvars();
    let empty = Echelon::new(&f, alg.dim());
    let one = alg.one();
    for _ in 0..8 {
        // random linear form in the generators
        let mut x = alg.constant(&f.random(&mut rng));
        for i in 0..n {
            x = alg.add(&x, &alg.scale(&alg.generator(i), &f.random(&mut rng)));
        }
        let mu = alg.minimal_polynomial(&x, &one, &empty);
        if mu.degree() == Some(alg.dim()) {
            let fac = factor_univariate(&mu, seed)?;
            let mut degs: Vec<usize> = fac.factors.iter().map(|(g, _)| g.degree().unwrap()).collect();
            degs.sort();
            return Ok(degs);
        }
    }
    let mut degs: Vec<usize> = decompose_local(a, seed)?.iter().map(|l| l.residue_degree).collect();
    degs.sort();
    Ok(degs)
}

/// An algebra homomorphism given by the images of the source generators
/// (normal forms in the target).
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    pub source: AlgebraPresentation,
    pub target: AlgebraPresentation,
    pub images: Vec<MPoly>,
}

impl AlgebraHom {
    /// Checks that every source relation maps to zero.
    pub fn new(source: &AlgebraPresentation, target: &AlgebraPresentation, images: Vec<MPoly>) -> Result<AlgebraHom> {
        if images.len() != source.ring().nvars() || images.iter().any(|i| i.ring() != target.ring()) {
            return Err(Error::MixedContexts);
        }
        if source.field() != target.field() {
            return Err(Error::MixedFields);
        }
        let images: Vec<MPoly> = images.iter().map(|i| target.reduce(i)).collect();
        let hom = AlgebraHom {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for r in source.relations() {
            if !hom.apply(r)?.is_zero() {
                return Err(Error::Invalid("generator images violate a source relation".to_string()));
            }
        }
        Ok(hom)
    }

    /// Image of a polynomial in the source ring, as a target normal form.
    pub fn apply(&self, f: &MPoly) -> Result<MPoly> {
        if self.images.is_empty() {
            // no generators: f is a constant
            if f.ring() != self.source.ring() {
                return Err(Error::MixedContexts);
            }
            return Ok(self
                .target
                .reduce(&MPoly::constant(self.target.ring(), f.constant_term())));
        }
        Ok(self.target.reduce(&f.substitute_expand(&self.images)?))
    }

    /// Matrix of the map in the standard-monomial bases.
    pub fn matrix(&self) -> Result<Matrix> {
        let cols = self
            .source
            .basis_polys()?
            .iter()
            .map(|b| self.target.coordinates(&self.apply(b)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.source.field(), self.target.dim()?, &cols))
    }
}

/// `A1 × A2` with its two projections.
#[derive(Clone, Debug)]
pub struct ProductAlgebra {
    pub algebra: AlgebraPresentation,
    pub first: AlgebraHom,
    pub second: AlgebraHom,
    /// Name of the idempotent generator `(1, 0)`.
    pub idempotent: String,
}

fn fresh_name(taken: &[String], wanted: &str) -> String {
    let mut name = wanted.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Presentation of `A1 × A2`: generators of both (those of `A2` renamed on
/// clashes) plus an idempotent `u`, with relations `u² - u`,
/// `t1·(1 - u)`, `t2·u`, `u·f1`, `(1 - u)·f2`.
pub fn product_algebra(a1: &AlgebraPresentation, a2: &AlgebraPresentation) -> Result<ProductAlgebra> {
    product_algebra_named(a1, a2, "u")
}

pub fn product_algebra_named(
    a1: &AlgebraPresentation,
    a2: &AlgebraPresentation,
    idempotent: &str,
) -> Result<ProductAlgebra> {
    if a1.field() != a2.field() {
        return Err(Error::MixedFields);
    }
    let field = a1.field();
    let mut vars: Vec<String> = a1.vars().to_vec();
    let mut second_names = Vec::new();
    for v in a2.vars() {
        let name = fresh_name(&vars, v);
        vars.push(name.clone());
        second_names.push(name);
    }
    let u_name = fresh_name(&vars, idempotent);
    vars.push(u_name.clone());
    let ring = PolyRing::drl(field, vars.iter().cloned());
    let n1 = a1.vars().len();
    let n2 = a2.vars().len();
    let u = MPoly::var(&ring, n1 + n2);
    let one = MPoly::one(&ring);
    let not_u = one.sub(&u);
    let map1: Vec<usize> = (0..n1).collect();
    let map2: Vec<usize> = (n1..n1 + n2).collect();
    let mut rels = vec![u.mul(&u).sub(&u)];
    for i in 0..n1 {
        rels.push(MPoly::var(&ring, i).mul(&not_u));
    }
    for i in 0..n2 {
        rels.push(MPoly::var(&ring, n1 + i).mul(&u));
    }
    for r in a1.relations() {
        rels.push(u.mul(&r.map_into(&ring, &map1, |c| c.clone())));
    }
    for r in a2.relations() {
        rels.push(not_u.mul(&r.map_into(&ring, &map2, |c| c.clone())));
    }
    let algebra = AlgebraPresentation::new(&ring, rels)?;
    let mut img1: Vec<MPoly> = (0..n1).map(|i| MPoly::var(a1.ring(), i)).collect();
    img1.extend((0..n2).map(|_| MPoly::zero(a1.ring())));
    img1.push(MPoly::one(a1.ring()));
    let mut img2: Vec<MPoly> = (0..n1).map(|_| MPoly::zero(a2.ring())).collect();
    img2.extend((0..n2).map(|i| MPoly::var(a2.ring(), i)));
    img2.push(MPoly::zero(a2.ring()));
    let first = AlgebraHom::new(&algebra, a1, img1)?;
    let second = AlgebraHom::new(&algebra, a2, img2)?;
    Ok(ProductAlgebra {
        algebra,
        first,
        second,
        idempotent: u_name,
    })
}

/// Outcome of [`etale_check`].
#[derive(Clone, Debug)]
pub struct EtaleCertificate {
    pub etale: bool,
    /// Jacobian determinant `det(∂g_i/∂y_j)` as a normal form in `B`.
    pub jacobian: MPoly,
    /// Its inverse in `B` when it is a unit.
    pub inverse: Option<MPoly>,
    pub obstruction: Option<String>,
}

fn determinant(m: &[Vec<MPoly>], ring: &PolyRing) -> MPoly {
    let n = m.len();
    match n {
        0 => MPoly::one(ring),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MPoly::zero(ring);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].mul(&determinant(&minor, ring));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Étaleness in relative dimension zero: the system must be square, the
/// coordinate ring `B = A[y]/(g)` finite over `k`, and the Jacobian
/// determinant a unit of `B`.
pub fn etale_check(x: &SchemePresentation) -> Result<EtaleCertificate> {
    let r = x.scheme_vars().len();
    let q = x.relations().len();
    if q != r {
        return Err(Error::NotSquareSystem {
            relations: q,
            variables: r,
        });
    }
    let b = x.coordinate_algebra()?;
    let alg = b.finite()?;
    let ring = x.ring();
    let offset = x.base().ring().nvars();
    let jac: Vec<Vec<MPoly>> = x
        .relations()
        .iter()
        .map(|g| (0..r).map(|j| g.derivative(offset + j)).collect())
        .collect();
    let det = b.reduce(&determinant(&jac, ring));
    let dv = alg.from_poly(&det);
    match alg.inverse(&dv) {
        Some(inv) => Ok(EtaleCertificate {
            etale: true,
            jacobian: det,
            inverse: Some(alg.to_poly(&inv)),
            obstruction: None,
        }),
        None => Ok(EtaleCertificate {
            etale: false,
            obstruction: Some(format!("Jacobian determinant {} is not a unit", det)),
            jacobian: det,
            inverse: None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn dimension_examples() {
        let a = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - 2"]).unwrap();
        let (d, basis) = a.dimension_and_basis().unwrap();
        assert_eq!(d, 2);
        assert_eq!(basis, &[Monomial::from_exponents(&[0]), Monomial::from_exponents(&[1])]);
        let zero = AlgebraPresentation::parse(&f(5), &["t"], &["1"]).unwrap();
        assert_eq!(zero.dim().unwrap(), 0);
        let inf = AlgebraPresentation::parse(&f(5), &["x", "y"], &["x*y"]).unwrap();
        assert_eq!(inf.dim().unwrap_err(), Error::NotFinite);
    }

    #[test]
    fn tensor_extension_keeps_dimension_and_splits() {
        let a = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - 2"]).unwrap();
        assert_eq!(a.tensor_extend(&f(5), 0).unwrap(), a);
        let k = Field::ext(5, 2).unwrap();
        let ak = a.tensor_extend(&k, 0).unwrap();
        assert_eq!(ak.dim().unwrap(), 2);
        let factors = decompose_local(&ak, 0).unwrap();
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|l| l.residue_degree == 1 && l.dim == 1));
    }

    #[test]
    fn local_decomposition_examples() {
        let split = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - t"]).unwrap();
        let fs = decompose_local(&split, 1).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|l| l.dim == 1 && l.residue_degree == 1));
        let dual = AlgebraPresentation::parse(&f(5), &["e"], &["e^2"]).unwrap();
        let fs = decompose_local(&dual, 1).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!((fs[0].dim, fs[0].residue_degree), (2, 1));
        let field = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - 2"]).unwrap();
        let fs = decompose_local(&field, 1).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].residue_degree, 2);
        let zero = AlgebraPresentation::parse(&f(5), &["t"], &["1"]).unwrap();
        assert_eq!(decompose_local(&zero, 1).unwrap_err(), Error::ZeroRing);
    }

    #[test]
    fn idempotents_are_complete_and_orthogonal() {
        // F_5[t]/(t^2 (t - 1)) has a non-reduced factor and a reduced one
        let a = AlgebraPresentation::parse(&f(5), &["t"], &["t^3 - t^2"]).unwrap();
        let alg = a.finite().unwrap();
        let fs = decompose_local(&a, 7).unwrap();
        assert_eq!(fs.len(), 2);
        let mut sum = alg.zero();
        for (i, x) in fs.iter().enumerate() {
            sum = alg.add(&sum, &x.idempotent_coords);
            for y in &fs[i + 1..] {
                assert!(alg.is_zero(&alg.mul(&x.idempotent_coords, &y.idempotent_coords)));
            }
        }
        assert_eq!(sum, alg.one());
        assert_eq!(fs.iter().map(|l| l.dim).sum::<usize>(), 3);
    }

    #[test]
    fn products() {
        let k = AlgebraPresentation::ground(&f(5));
        let kk = product_algebra(&k, &k).unwrap();
        let split = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - t"]).unwrap();
        assert_eq!(kk.algebra.dim().unwrap(), 2);
        let d1: Vec<_> = decompose_local(&kk.algebra, 0)
            .unwrap()
            .iter()
            .map(|l| (l.dim, l.residue_degree))
            .collect();
        let d2: Vec<_> = decompose_local(&split, 0)
            .unwrap()
            .iter()
            .map(|l| (l.dim, l.residue_degree))
            .collect();
        assert_eq!(d1, d2);
        let a = AlgebraPresentation::parse(&f(5), &["t"], &["t^2 - 2"]).unwrap();
        let zero = AlgebraPresentation::parse(&f(5), &[], &["1"]).unwrap();
        assert_eq!(product_algebra(&a, &zero).unwrap().algebra.dim().unwrap(), 2);
        let b = AlgebraPresentation::parse(&f(5), &["e"], &["e^2"]).unwrap();
        assert_eq!(product_algebra(&a, &b).unwrap().algebra.dim().unwrap(), 4);
        let other = AlgebraPresentation::ground(&f(7));
        assert_eq!(product_algebra(&a, &other).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn residue_degrees_match_decomposition() {
        let a = AlgebraPresentation::parse(&f(3), &["t"], &["(t^2 + 1)*(t - 1)^2*t"]).unwrap();
        assert_eq!(residue_degrees(&a, 0).unwrap(), vec![1, 1, 2]);
        let fs = decompose_local(&a, 0).unwrap();
        let mut degs: Vec<usize> = fs.iter().map(|l| l.residue_degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    #[test]
    fn nilradical_of_dual_numbers() {
        let a = AlgebraPresentation::parse(&f(7), &["e"], &["e^2"]).unwrap();
        let alg = a.finite().unwrap();
        let nil = alg.nilradical();
        assert_eq!(nil.len(), 1);
        assert!(nil.contains(&alg.generator(0)));
        let k = Field::ext(7, 2).unwrap();
        let b = AlgebraPresentation::parse(&f(7), &["t", "e"], &["t^2 - 3", "e^2"]).unwrap();
        let bk = b.tensor_extend(&k, 0).unwrap().finite().unwrap();
        assert_eq!(bk.nilradical().len(), 2);
    }
}
