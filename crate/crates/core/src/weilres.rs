//! Weil restriction `Res_{A/k}(X)` of an affine `A`-scheme by expanding
//! coordinates over a `k`-basis of `A`, plus point enumeration at finite
//! stages and the structural checks: the adjunction bijection, emptiness,
//! the product formula and open covers over local bases.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::exactfield::{roots_in, Embedding, Fe, Field, UniPoly};
use crate::finalg::{decompose_local, AlgebraHom, AlgebraPresentation, FiniteAlgebra, ProductAlgebra};
use crate::linalg::{add_scaled, zero_vector, Echelon, Matrix, Vector};
use crate::multipoly::{buchberger, fglm, GroebnerBasis, MPoly, Monomial, PolyRing, TermOrder};
use crate::{Error, Result};

/// Search spaces above this size are refused.
pub const SEARCH_GUARD: u128 = 1_000_000;

/// An affine `A`-scheme `Spec A[y]/(g)`. Relations live in `k[t, y]` (the
/// base generators first) with their `t`-parts in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemePresentation {
    base: AlgebraPresentation,
    ring: PolyRing,
    relations: Vec<MPoly>,
}

impl SchemePresentation {
    pub fn new(base: &AlgebraPresentation, ring: &PolyRing, relations: Vec<MPoly>) -> Result<SchemePresentation> {
        let n = base.ring().nvars();
        if ring.field() != base.field() {
            return Err(Error::MixedFields);
        }
        if ring.nvars() < n || ring.vars()[..n] != *base.vars() || relations.iter().any(|g| g.ring() != ring) {
            return Err(Error::MixedContexts);
        }
        let ring = ring.with_order(TermOrder::DegRevLex);
        let lifted = lift_base_gb(base, &ring)?;
        let relations = relations.iter().map(|g| lifted.reduce(&g.reorder(&ring))).collect();
        Ok(SchemePresentation {
            base: base.clone(),
            ring,
            relations,
        })
    }

    /// Builds `k[t, y]` from the base generators and `scheme_vars` and parses
    /// the relations there.
    pub fn parse(base: &AlgebraPresentation, scheme_vars: &[&str], relations: &[&str]) -> Result<SchemePresentation> {
        let ring = scheme_ring(base, scheme_vars.iter().map(|s| s.to_string()).collect())?;
        let rels = relations
            .iter()
            .map(|r| crate::multipoly::parse_poly(&ring, r))
            .collect::<Result<Vec<_>>>()?;
        SchemePresentation::new(base, &ring, rels)
    }

    pub fn base(&self) -> &AlgebraPresentation {
        &self.base
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn relations(&self) -> &[MPoly] {
        &self.relations
    }

    /// The `y` variables.
    pub fn scheme_vars(&self) -> &[String] {
        &self.ring.vars()[self.base.ring().nvars()..]
    }

    pub fn base_nvars(&self) -> usize {
        self.base.ring().nvars()
    }

    /// `B = A[y]/(g)` as a `k`-algebra presentation.
    pub fn coordinate_algebra(&self) -> Result<AlgebraPresentation> {
        let ids: Vec<usize> = (0..self.base_nvars()).collect();
        let mut rels: Vec<MPoly> = self
            .base
            .relations()
            .iter()
            .map(|r| r.map_into(&self.ring, &ids, |c| c.clone()))
            .collect();
        rels.extend(self.relations.iter().cloned());
        AlgebraPresentation::new(&self.ring, rels)
    }

    /// `X ⊗_k K` over `A ⊗_k K`.
    pub fn tensor_extend(&self, target: &Field, seed: u64) -> Result<SchemePresentation> {
        if target == self.field() {
            return Ok(self.clone());
        }
        let emb = Embedding::new(self.field(), target, seed)?;
        let base = self.base.tensor_extend(target, seed)?;
        let ring = self.ring.with_field(target);
        let ids: Vec<usize> = (0..ring.nvars()).collect();
        let rels = self
            .relations
            .iter()
            .map(|g| g.map_into(&ring, &ids, |c| emb.apply(c)))
            .collect();
        SchemePresentation::new(&base, &ring, rels)
    }

    /// `X ×_A A'` along `hom: A → A'`.
    pub fn base_change(&self, hom: &AlgebraHom) -> Result<SchemePresentation> {
        if hom.source != self.base {
            return Err(Error::AmbientMismatch);
        }
        let target = &hom.target;
        let ring = scheme_ring(target, self.scheme_vars().to_vec())?;
        let n_new = target.ring().nvars();
        let ids: Vec<usize> = (0..n_new).collect();
        let mut assignment: Vec<MPoly> = hom
            .images
            .iter()
            .map(|i| i.map_into(&ring, &ids, |c| c.clone()))
            .collect();
        for j in 0..self.scheme_vars().len() {
            assignment.push(MPoly::var(&ring, n_new + j));
        }
        let rels = self
            .relations
            .iter()
            .map(|g| {
                if assignment.is_empty() {
                    Ok(g.map_into(&ring, &[], |c| c.clone()))
                } else {
                    g.substitute_expand(&assignment)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SchemePresentation::new(target, &ring, rels)
    }

    /// The same scheme with one more variable and extra relations over the
    /// enlarged ring.
    pub fn with_extra(&self, var: &str, extra: &[MPoly]) -> Result<SchemePresentation> {
        let mut vars = self.scheme_vars().to_vec();
        vars.push(var.to_string());
        let ring = scheme_ring(&self.base, vars)?;
        let ids: Vec<usize> = (0..self.ring.nvars()).collect();
        let mut rels: Vec<MPoly> = self
            .relations
            .iter()
            .map(|g| g.map_into(&ring, &ids, |c| c.clone()))
            .collect();
        for e in extra {
            if e.ring() != &ring {
                return Err(Error::MixedContexts);
            }
            rels.push(e.clone());
        }
        SchemePresentation::new(&self.base, &ring, rels)
    }

    /// The distinguished open `D(h)`: adds `z` and `z·h - 1`.
    pub fn localize(&self, h: &MPoly) -> Result<SchemePresentation> {
        if h.ring() != &self.ring {
            return Err(Error::MixedContexts);
        }
        let name = fresh_var(self.ring.vars(), "z");
        let mut vars = self.scheme_vars().to_vec();
        vars.push(name.clone());
        let ring = scheme_ring(&self.base, vars)?;
        let ids: Vec<usize> = (0..self.ring.nvars()).collect();
        let h = h.map_into(&ring, &ids, |c| c.clone());
        let z = MPoly::var(&ring, ring.nvars() - 1);
        let rel = z.mul(&h).sub(&MPoly::one(&ring));
        self.with_extra(&name, &[rel])
    }
}

fn fresh_var(taken: &[String], wanted: &str) -> String {
    let mut name = wanted.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

fn scheme_ring(base: &AlgebraPresentation, scheme_vars: Vec<String>) -> Result<PolyRing> {
    let mut vars = base.vars().to_vec();
    for v in &scheme_vars {
        if vars.contains(v) {
            return Err(Error::Invalid(format!("variable {} declared twice", v)));
        }
        vars.push(v.clone());
    }
    Ok(PolyRing::drl(base.field(), vars))
}

/// Gröbner basis of `I_A` inside a ring whose first generators are `A`'s.
fn lift_base_gb(base: &AlgebraPresentation, ring: &PolyRing) -> Result<GroebnerBasis> {
    let ids: Vec<usize> = (0..base.ring().nvars()).collect();
    let rels: Vec<MPoly> = base
        .gb()
        .polys()
        .iter()
        .map(|r| r.map_into(ring, &ids, |c| c.clone()))
        .collect();
    buchberger(ring, &rels)
}

/// `Res_{A/k}(X)` presented in the variables `y_{j,b}`.
#[derive(Clone, Debug)]
pub struct RestrictedScheme {
    source: SchemePresentation,
    ring: PolyRing,
    /// `G_{i,b}`, relation-major, zeros kept.
    relations: Vec<MPoly>,
    /// `expansion[j][b]` is the index of `y_{j,b}`.
    expansion: Vec<Vec<usize>>,
    /// The expansion basis as normal forms in `A`.
    basis: Vec<MPoly>,
    gb: GroebnerBasis,
}

fn restricted_names(vars: &[String], d: usize) -> Vec<Vec<String>> {
    let plain: Vec<Vec<String>> = vars
        .iter()
        .map(|y| (0..d).map(|b| format!("{}{}", y, b)).collect())
        .collect();
    let flat: Vec<&String> = plain.iter().flatten().collect();
    let unique: BTreeSet<&String> = flat.iter().copied().collect();
    let clash = unique.len() != flat.len() || flat.iter().any(|n| vars.contains(n));
    vars.iter()
        .zip(plain)
        .map(|(y, names)| {
            if clash || y.ends_with(|c: char| c.is_ascii_digit()) {
                (0..d).map(|b| format!("{}_{}", y, b)).collect()
            } else {
                names
            }
        })
        .collect()
}

/// Restriction along the standard-monomial basis of `A`.
pub fn weil_restrict(x: &SchemePresentation) -> Result<RestrictedScheme> {
    let basis = x.base().basis_polys().map_err(|_| Error::NotFinite)?;
    weil_restrict_in_basis(x, &basis)
}

/// Restriction along an arbitrary `k`-basis of `A` (polynomials in `A`'s
/// generators).
pub fn weil_restrict_in_basis(x: &SchemePresentation, basis: &[MPoly]) -> Result<RestrictedScheme> {
    let a = x.base();
    let (d, _) = a.dimension_and_basis()?;
    if d == 0 {
        return Err(Error::EmptyBase);
    }
    let field = a.field().clone();
    // change of basis: column b holds the standard coordinates of basis[b]
    let cols = basis.iter().map(|b| a.coordinates(b)).collect::<Result<Vec<_>>>()?;
    if cols.len() != d {
        return Err(Error::Invalid(format!(
            "expected {} basis elements, got {}",
            d,
            cols.len()
        )));
    }
    let change = Matrix::from_columns(&field, d, &cols);
    if change.rank(&field) != d {
        return Err(Error::Invalid("basis elements are linearly dependent".to_string()));
    }
    let n = a.ring().nvars();
    let r = x.scheme_vars().len();
    let names = restricted_names(x.scheme_vars(), d);
    let ring = PolyRing::drl(&field, names.iter().flatten().cloned());
    let expansion: Vec<Vec<usize>> = (0..r).map(|j| (0..d).map(|b| j * d + b).collect()).collect();

    // expansion ring k[t, Y]
    let mut evars = a.vars().to_vec();
    evars.extend(ring.vars().iter().map(|v| format!("#{}", v)));
    let ering = PolyRing::drl(&field, evars);
    let lifted = lift_base_gb(a, &ering)?;
    let t_ids: Vec<usize> = (0..n).collect();
    let mut assignment: Vec<MPoly> = (0..n).map(|i| MPoly::var(&ering, i)).collect();
    let basis_e: Vec<MPoly> = basis
        .iter()
        .map(|b| b.map_into(&ering, &t_ids, |c| c.clone()))
        .collect();
    for row in &expansion {
        let mut s = MPoly::zero(&ering);
        for (b, &v) in row.iter().enumerate() {
            s = s.add(&MPoly::var(&ering, n + v).mul(&basis_e[b]));
        }
        assignment.push(s);
    }
    let std = a.basis()?;
    let std_index: BTreeMap<&Monomial, usize> = std.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let inverse = invert(&change, &field)?;
    let mut relations = Vec::with_capacity(x.relations().len() * d);
    for g in x.relations() {
        let expanded = lifted.reduce(&g.substitute_expand(&assignment)?);
        // standard components G_m
        let mut comps: Vec<Vec<(Monomial, Fe)>> = vec![Vec::new(); d];
        for (m, c) in expanded.terms() {
            let e = m.exponents();
            let tm = Monomial::from_exponents(&e[..n]);
            let ym = Monomial::from_exponents(&e[n..]);
            let i = std_index[&tm];
            comps[i].push((ym, c.clone()));
        }
        let comps: Vec<MPoly> = comps.into_iter().map(|t| MPoly::from_terms(&ring, t)).collect();
        // components over the requested basis: H = change^{-1} · G
        for row in &inverse {
            let mut h = MPoly::zero(&ring);
            for (c, gm) in row.iter().zip(&comps) {
                if !field.is_zero(c) {
                    h = h.add(&gm.scale(c));
                }
            }
            relations.push(h);
        }
    }
    let gb = buchberger(&ring, &relations)?;
    Ok(RestrictedScheme {
        source: x.clone(),
        ring,
        relations,
        expansion,
        basis: basis.iter().map(|b| a.reduce(b)).collect(),
        gb,
    })
}

/// Rows of the inverse of a square matrix.
fn invert(m: &Matrix, field: &Field) -> Result<Vec<Vector>> {
    let d = m.rows;
    let mut cols = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = zero_vector(field, d);
        e[i] = field.one();
        cols.push(
            m.solve(field, &e)
                .ok_or_else(|| Error::Invalid("singular change of basis".to_string()))?,
        );
    }
    Ok((0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
}

impl RestrictedScheme {
    pub fn source(&self) -> &SchemePresentation {
        &self.source
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn relations(&self) -> &[MPoly] {
        &self.relations
    }

    pub fn expansion(&self) -> &[Vec<usize>] {
        &self.expansion
    }

    pub fn basis(&self) -> &[MPoly] {
        &self.basis
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    /// Number of relations that are not identically zero.
    pub fn nonzero_relations(&self) -> usize {
        self.relations.iter().filter(|g| !g.is_zero()).count()
    }

    /// The coordinate ring `k[y_{j,b}]/(G)`.
    pub fn algebra(&self) -> Result<AlgebraPresentation> {
        AlgebraPresentation::new(&self.ring, self.relations.clone())
    }

    /// Substituting the expansion into each `g_i` and reducing gives back
    /// `Σ_b G_{i,b} · e_b`.
    pub fn round_trip_holds(&self) -> Result<bool> {
        let a = self.source.base();
        let n = a.ring().nvars();
        let field = self.field();
        let mut evars = a.vars().to_vec();
        evars.extend(self.ring.vars().iter().cloned());
        let ering = PolyRing::drl(field, evars);
        let lifted = lift_base_gb(a, &ering)?;
        let t_ids: Vec<usize> = (0..n).collect();
        let y_ids: Vec<usize> = (n..n + self.ring.nvars()).collect();
        let basis_e: Vec<MPoly> = self
            .basis
            .iter()
            .map(|b| b.map_into(&ering, &t_ids, |c| c.clone()))
            .collect();
        let mut assignment: Vec<MPoly> = (0..n).map(|i| MPoly::var(&ering, i)).collect();
        for row in &self.expansion {
            let mut s = MPoly::zero(&ering);
            for (b, &v) in row.iter().enumerate() {
                s = s.add(&MPoly::var(&ering, n + v).mul(&basis_e[b]));
            }
            assignment.push(s);
        }
        let d = self.basis.len();
        for (i, g) in self.source.relations().iter().enumerate() {
            let lhs = lifted.reduce(&g.substitute_expand(&assignment)?);
            let mut rhs = MPoly::zero(&ering);
            for (b, e) in basis_e.iter().enumerate() {
                let gib = self.relations[i * d + b].map_into(&ering, &y_ids, |c| c.clone());
                rhs = rhs.add(&gib.mul(e));
            }
            if lifted.reduce(&rhs) != lhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Splits a point `(a_{j,b})` into the elements `a_j = Σ_b a_{j,b} e_b`
    /// given by their coordinates over the expansion basis.
    pub fn regroup(&self, point: &[Fe]) -> Vec<Vector> {
        self.expansion
            .iter()
            .map(|row| row.iter().map(|&v| point[v].clone()).collect())
            .collect()
    }

    /// Inverse of [`RestrictedScheme::regroup`].
    pub fn ungroup(&self, elements: &[Vector]) -> Vec<Fe> {
        let mut out = zero_vector(self.field(), self.ring.nvars());
        for (row, a) in self.expansion.iter().zip(elements) {
            for (&v, c) in row.iter().zip(a) {
                out[v] = c.clone();
            }
        }
        out
    }

    pub fn points(&self, target: &Field, seed: u64) -> Result<Vec<Vec<Fe>>> {
        points_with_gb(&self.gb, &self.relations, target, seed)
    }
}

/// `true` iff the restricted ideal is the unit ideal.
pub fn is_empty(r: &RestrictedScheme) -> bool {
    r.gb().is_unit()
}

/// All `K`-points of `V(relations) ⊆ A^n`, sorted by coordinates. Uses
/// lex back-substitution when the ideal is zero-dimensional and an
/// exhaustive search (guarded) otherwise.
pub fn enumerate_points(ring: &PolyRing, relations: &[MPoly], target: &Field, seed: u64) -> Result<Vec<Vec<Fe>>> {
    let gb = buchberger(ring, relations)?;
    points_with_gb(&gb, relations, target, seed)
}

fn points_with_gb(gb: &GroebnerBasis, relations: &[MPoly], target: &Field, seed: u64) -> Result<Vec<Vec<Fe>>> {
    let ring = gb.ring();
    if gb.is_unit() {
        return Ok(Vec::new());
    }
    if !gb.is_zero_dimensional() {
        return enumerate_points_exhaustive(ring, relations, target, seed);
    }
    let lex = fglm(gb, &ring.with_order(TermOrder::Lex))?;
    let emb = Embedding::new(ring.field(), target, seed)?;
    let n = ring.nvars();
    // polys grouped by their smallest variable index (lex: x_0 biggest)
    let mut levels: Vec<Vec<&MPoly>> = vec![Vec::new(); n];
    for g in lex.polys() {
        if let Some(&first) = g.support().first() {
            levels[first].push(g);
        }
    }
    let mut partial: Vec<Vec<Fe>> = vec![Vec::new()];
    for j in (0..n).rev() {
        let mut next = Vec::new();
        for tail in &partial {
            // tail holds values for x_{j+1}.. in order
            let mut h = UniPoly::zero(target);
            for g in &levels[j] {
                h = h.gcd(&specialize(g, j, tail, &emb, target));
            }
            if h.is_zero() {
                return enumerate_points_exhaustive(ring, relations, target, seed);
            }
            for root in roots_in(&h, target, seed)? {
                let mut v = vec![root];
                v.extend(tail.iter().cloned());
                next.push(v);
            }
        }
        partial = next;
    }
    partial.sort();
    Ok(partial)
}

/// `g(x_j, tail)` as a univariate polynomial in `x_j`.
fn specialize(g: &MPoly, j: usize, tail: &[Fe], emb: &Embedding, target: &Field) -> UniPoly {
    let mut coeffs: Vec<Fe> = Vec::new();
    for (m, c) in g.terms() {
        let e = m.exponents();
        let mut t = emb.apply(c);
        for (k, x) in tail.iter().enumerate() {
            let ek = e[j + 1 + k];
            if ek > 0 {
                t = target.mul(&t, &target.pow(x, ek as u64));
            }
        }
        let deg = e[j] as usize;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, target.zero());
        }
        coeffs[deg] = target.add(&coeffs[deg], &t);
    }
    UniPoly::new(target, coeffs)
}

/// Exhaustive search over `K^n` in label order; the reference oracle.
pub fn enumerate_points_exhaustive(
    ring: &PolyRing,
    relations: &[MPoly],
    target: &Field,
    seed: u64,
) -> Result<Vec<Vec<Fe>>> {
    let q = target.order().ok_or(Error::SearchGuardExceeded(u128::MAX))?;
    let n = ring.nvars();
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(q);
        if size > SEARCH_GUARD {
            return Err(Error::SearchGuardExceeded(size));
        }
    }
    let emb = Embedding::new(ring.field(), target, seed)?;
    let elements: Vec<Fe> = target.elements().collect();
    let mut idx = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let point: Vec<Fe> = idx.iter().map(|&i| elements[i].clone()).collect();
        if relations
            .iter()
            .all(|g| target.is_zero(&g.eval_with(target, |c| emb.apply(c), &point)))
        {
            out.push(point);
        }
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < elements.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Solutions of `g = 0` in `(A ⊗ K)^r`, as coordinate vectors over the
/// standard basis of `A`. Works factor by factor on the local decomposition
/// of `A ⊗ K`: brute force on a complement of the maximal ideal, then
/// linear lifting through the layers `m^k / m^{k+1}`.
pub fn solve_over_algebra(x: &SchemePresentation, target: &Field, seed: u64) -> Result<Vec<Vec<Vector>>> {
    let xk = x.tensor_extend(target, seed)?;
    let base = xk.base();
    if base.dim()? == 0 {
        return Err(Error::EmptyBase);
    }
    let alg = base.finite()?;
    let field = target.clone();
    let n = xk.base_nvars();
    let r = xk.scheme_vars().len();
    let derivs: Vec<Vec<MPoly>> = xk
        .relations()
        .iter()
        .map(|g| (0..r).map(|j| g.derivative(n + j)).collect())
        .collect();
    let nil = alg.nilradical();
    let nil_basis = echelon_vectors(&nil);
    let q = field.order().unwrap_or(u128::MAX);
    let mut per_factor: Vec<Vec<Vec<Vector>>> = Vec::new();
    for factor in decompose_local(base, seed)? {
        let e = factor.idempotent_coords.clone();
        let gens: Vec<Vector> = (0..n).map(|i| alg.mul(&e, &alg.generator(i))).collect();
        // filtration εA ⊃ εN ⊃ εN^2 ⊃ ... ⊃ 0
        let mut layers: Vec<Vec<Vector>> = vec![alg.ideal_basis(&e)];
        let mut cur: Vec<Vector> = span(&alg, nil_basis.iter().map(|v| alg.mul(&e, v)));
        while !cur.is_empty() {
            layers.push(cur.clone());
            cur = span(
                &alg,
                cur.iter()
                    .flat_map(|a| nil_basis.iter().map(move |b| (a, b)))
                    .map(|(a, b)| alg.mul(a, b)),
            );
        }
        layers.push(Vec::new());
        let mut echelons: Vec<Echelon> = Vec::with_capacity(layers.len());
        for l in &layers {
            let mut ech = Echelon::new(&field, alg.dim());
            for v in l {
                let _ = ech.insert(v);
            }
            echelons.push(ech);
        }
        let complements: Vec<Vec<Vector>> = (0..layers.len() - 1)
            .map(|k| {
                let mut ech = echelons[k + 1].clone();
                layers[k].iter().filter(|v| ech.insert(v).is_ok()).cloned().collect()
            })
            .collect();
        let eval = |ys: &[Vector], g: &MPoly| -> Vector {
            let mut images = gens.clone();
            images.extend(ys.iter().cloned());
            alg.eval_poly(g, &images, &e)
        };
        // residue level
        let w0 = &complements[0];
        let unknowns = r * w0.len();
        let mut size: u128 = 1;
        for _ in 0..unknowns {
            size = size.saturating_mul(q);
        }
        if size > SEARCH_GUARD {
            return Err(Error::SearchGuardExceeded(size));
        }
        let elements: Vec<Fe> = field.elements().collect();
        let mut sols: Vec<Vec<Vector>> = Vec::new();
        let mut idx = vec![0usize; unknowns];
        'outer: loop {
            let ys: Vec<Vector> = (0..r)
                .map(|j| {
                    let mut y = alg.zero();
                    for (l, w) in w0.iter().enumerate() {
                        add_scaled(&field, &mut y, w, &elements[idx[j * w0.len() + l]]);
                    }
                    y
                })
                .collect();
            if xk.relations().iter().all(|g| echelons[1].contains(&eval(&ys, g))) {
                sols.push(ys);
            }
            let mut k = unknowns;
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < elements.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        // lift through each layer
        for k in 1..complements.len() {
            let wk = &complements[k];
            if wk.is_empty() {
                continue;
            }
            let below = &echelons[k + 1];
            let mut lifted = Vec::new();
            for ys in &sols {
                let constant: Vec<Vector> = xk.relations().iter().map(|g| below.reduce(&eval(ys, g)).0).collect();
                let jac: Vec<Vec<Vector>> = derivs
                    .iter()
                    .map(|row| row.iter().map(|dg| eval(ys, dg)).collect())
                    .collect();
                // unknown (j, l) contributes ∂_j g_i(y) · w_l to relation i
                let mut columns: Vec<Vector> = Vec::with_capacity(r * wk.len());
                for j in 0..r {
                    for w in wk {
                        let mut col = Vec::with_capacity(constant.len() * alg.dim());
                        for jr in &jac {
                            col.extend(below.reduce(&alg.mul(&jr[j], w)).0);
                        }
                        columns.push(col);
                    }
                }
                let rhs: Vector = constant.iter().flatten().map(|c| field.neg(c)).collect();
                let rows = rhs.len();
                let m = Matrix::from_columns(&field, rows, &columns);
                let Some(particular) = (if columns.is_empty() {
                    if rhs.iter().all(|c| field.is_zero(c)) {
                        Some(Vec::new())
                    } else {
                        None
                    }
                } else {
                    m.solve(&field, &rhs)
                }) else {
                    continue;
                };
                let kernel = if columns.is_empty() {
                    Vec::new()
                } else {
                    m.kernel(&field)
                };
                let mut count: u128 = 1;
                for _ in 0..kernel.len() {
                    count = count.saturating_mul(q);
                }
                if count.saturating_mul(lifted.len() as u128 + 1) > SEARCH_GUARD {
                    return Err(Error::SearchGuardExceeded(count));
                }
                let mut kidx = vec![0usize; kernel.len()];
                loop {
                    let mut c = particular.clone();
                    for (kv, &i) in kernel.iter().zip(&kidx) {
                        add_scaled(&field, &mut c, kv, &elements[i]);
                    }
                    let mut next = ys.clone();
                    for (j, y) in next.iter_mut().enumerate() {
                        for (l, w) in wk.iter().enumerate() {
                            add_scaled(&field, y, w, &c[j * wk.len() + l]);
                        }
                    }
                    lifted.push(next);
                    let mut t = kidx.len();
                    let mut done = true;
                    while t > 0 {
                        t -= 1;
                        kidx[t] += 1;
                        if kidx[t] < elements.len() {
                            done = false;
                            break;
                        }
                        kidx[t] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
            sols = lifted;
        }
        per_factor.push(sols);
    }
    // recombine across factors
    let mut total: u128 = 1;
    for s in &per_factor {
        total = total.saturating_mul(s.len() as u128);
    }
    if total > SEARCH_GUARD {
        return Err(Error::SearchGuardExceeded(total));
    }
    let mut out: Vec<Vec<Vector>> = vec![vec![alg.zero(); r]];
    for sols in &per_factor {
        let mut next = Vec::with_capacity(out.len() * sols.len());
        for acc in &out {
            for s in sols {
                next.push(acc.iter().zip(s).map(|(a, b)| alg.add(a, b)).collect());
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

fn echelon_vectors(ech: &Echelon) -> Vec<Vector> {
    ech.rows().cloned().collect()
}

fn span(alg: &FiniteAlgebra, vs: impl Iterator<Item = Vector>) -> Vec<Vector> {
    let mut ech = Echelon::new(alg.field(), alg.dim());
    vs.filter(|v| ech.insert(v).is_ok()).collect()
}

/// `F_{p^{a·m}}` for a base field `F_{p^a}`: the `m`-th stage over `k`.
pub fn stage(k: &Field, m: usize) -> Result<Field> {
    Field::ext(k.characteristic(), k.degree() * m)
}

/// Both sides of `Res(X)(K) ≅ X(A ⊗ K)` and the regrouping bijection.
#[derive(Clone, Debug)]
pub struct AdjunctionReport {
    pub m: usize,
    pub left: Vec<Vec<Fe>>,
    pub right: Vec<Vec<Vector>>,
    /// `(i, j)`: the `i`-th left point regroups to the `j`-th right point.
    pub pairs: Vec<(usize, usize)>,
    pub failures: Vec<String>,
}

impl AdjunctionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Enumerates `Res(X)(F_{p^m})` and `X(A ⊗ F_{p^m})` independently and
/// checks that regrouping `a_j = Σ_b a_{j,b} e_b` is a bijection.
pub fn adjunction_check(x: &SchemePresentation, m: usize, seed: u64) -> Result<AdjunctionReport> {
    let res = weil_restrict(x)?;
    adjunction_check_with(&res, m, seed)
}

pub fn adjunction_check_with(res: &RestrictedScheme, m: usize, seed: u64) -> Result<AdjunctionReport> {
    let x = res.source();
    let k = stage(x.field(), m)?;
    let left = res.points(&k, seed)?;
    let right = solve_over_algebra(x, &k, seed)?;
    let index: BTreeMap<&Vec<Vector>, usize> = right.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut failures = Vec::new();
    let mut pairs = Vec::with_capacity(left.len());
    let mut hit = vec![false; right.len()];
    for (i, p) in left.iter().enumerate() {
        let grouped = res.regroup(p);
        match index.get(&grouped) {
            Some(&j) => {
                if hit[j] {
                    failures.push(format!("two points regroup to solution {}", j));
                }
                hit[j] = true;
                pairs.push((i, j));
            }
            None => failures.push(format!("point {} does not regroup to a solution over A ⊗ K", i)),
        }
    }
    let left_set: BTreeSet<&Vec<Fe>> = left.iter().collect();
    for (j, sol) in right.iter().enumerate() {
        if !left_set.contains(&res.ungroup(sol)) {
            failures.push(format!("solution {} has no restricted point", j));
        }
    }
    if left.len() != right.len() {
        failures.push(format!(
            "{} restricted points against {} solutions",
            left.len(),
            right.len()
        ));
    }
    Ok(AdjunctionReport {
        m,
        left,
        right,
        pairs,
        failures,
    })
}

/// Outcome of [`product_formula_check`].
#[derive(Clone, Debug)]
pub struct ProductReport {
    /// Reduced bases agree after the linear change of variables.
    pub isomorphic: bool,
    /// `(m, |Res(X)|, |Res(X_1)|, |Res(X_2)|)` over `F_{p^m}`.
    pub counts: Vec<(usize, usize, usize, usize)>,
}

impl ProductReport {
    pub fn ok(&self) -> bool {
        self.isomorphic && self.counts.iter().all(|&(_, n, a, b)| n == a * b)
    }
}

/// `Res_{A1×A2}(X) ≅ Res_{A1}(X_1) × Res_{A2}(X_2)`: an explicit linear
/// change of variables (through the two projections) identifies the
/// presentations, and point counts multiply for `m ≤ max_m`.
pub fn product_formula_check(
    prod: &ProductAlgebra,
    x: &SchemePresentation,
    max_m: usize,
    seed: u64,
) -> Result<ProductReport> {
    if x.base() != &prod.algebra {
        return Err(Error::AmbientMismatch);
    }
    let field = x.field().clone();
    let x1 = x.base_change(&prod.first)?;
    let x2 = x.base_change(&prod.second)?;
    let res = weil_restrict(x)?;
    let (d1, d2) = (x1.base().dim()?, x2.base().dim()?);
    let r = x.scheme_vars().len();
    let mut isomorphic = true;
    if d1 > 0 && d2 > 0 {
        let res1 = weil_restrict(&x1)?;
        let res2 = weil_restrict(&x2)?;
        // ring holding both factors' variables
        let mut vars: Vec<String> = res1.ring().vars().iter().map(|v| format!("{}'", v)).collect();
        vars.extend(res2.ring().vars().iter().map(|v| format!("{}''", v)));
        let ring = PolyRing::drl(&field, vars);
        let n1 = res1.ring().nvars();
        let ids1: Vec<usize> = (0..n1).collect();
        let ids2: Vec<usize> = (n1..ring.nvars()).collect();
        let mut rels: Vec<MPoly> = res1
            .relations()
            .iter()
            .map(|g| g.map_into(&ring, &ids1, |c| c.clone()))
            .collect();
        rels.extend(res2.relations().iter().map(|g| g.map_into(&ring, &ids2, |c| c.clone())));
        let target_gb = buchberger(&ring, &rels)?;
        // a ↦ (π1 a, π2 a) is invertible; substitute its inverse
        let p1 = prod.first.matrix()?;
        let p2 = prod.second.matrix()?;
        let d = d1 + d2;
        let mut stacked = Matrix::zeros(&field, d, d);
        for i in 0..d1 {
            stacked.data[i] = p1.data[i].clone();
        }
        for i in 0..d2 {
            stacked.data[d1 + i] = p2.data[i].clone();
        }
        let inv = invert(&stacked, &field)?;
        let mut assignment = vec![MPoly::zero(&ring); res.ring().nvars()];
        for j in 0..r {
            for (b, row) in inv.iter().enumerate() {
                let mut s = MPoly::zero(&ring);
                for (c, coeff) in row.iter().enumerate() {
                    if field.is_zero(coeff) {
                        continue;
                    }
                    let v = if c < d1 {
                        res1.expansion()[j][c]
                    } else {
                        n1 + res2.expansion()[j][c - d1]
                    };
                    s = s.add(&MPoly::var(&ring, v).scale(coeff));
                }
                assignment[res.expansion()[j][b]] = s;
            }
        }
        let moved = res
            .relations()
            .iter()
            .map(|g| g.substitute_expand(&assignment))
            .collect::<Result<Vec<_>>>()?;
        isomorphic = buchberger(&ring, &moved)? == target_gb;
        let mut counts = Vec::new();
        for m in 1..=max_m {
            let k = stage(&field, m)?;
            counts.push((
                m,
                res.points(&k, seed)?.len(),
                res1.points(&k, seed)?.len(),
                res2.points(&k, seed)?.len(),
            ));
        }
        return Ok(ProductReport { isomorphic, counts });
    }
    // a zero factor: the product is the other factor
    let other_x = if d1 == 0 { &x2 } else { &x1 };
    let res_o = weil_restrict(other_x)?;
    let mut counts = Vec::new();
    for m in 1..=max_m {
        let k = stage(&field, m)?;
        counts.push((m, res.points(&k, seed)?.len(), res_o.points(&k, seed)?.len(), 1));
    }
    isomorphic &= res.ring().nvars() == res_o.ring().nvars();
    Ok(ProductReport { isomorphic, counts })
}

/// Outcome of [`open_cover_check`].
#[derive(Clone, Debug)]
pub struct CoverReport {
    /// Per stage `m`, per point: the opens whose restriction it lies in.
    pub membership: Vec<(usize, Vec<Vec<usize>>)>,
    pub failures: Vec<String>,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For a local base with residue field `k` and `h_α` generating the unit
/// ideal of `B`: each point of `Res(X)` lifts to `Res(D(h_α))` exactly when
/// `h_α` is a unit of `A ⊗ K` at that point (lifts are unique), and the
/// opens cover every point.
pub fn open_cover_check(x: &SchemePresentation, cover: &[MPoly], max_m: usize, seed: u64) -> Result<CoverReport> {
    let factors = decompose_local(x.base(), seed)?;
    if factors.len() != 1 || factors[0].residue_degree != 1 {
        return Err(Error::NotLocalBase);
    }
    let b = x.coordinate_algebra()?;
    if !b.quotient(cover)?.is_zero_ring() {
        return Err(Error::NotCovering);
    }
    let res = weil_restrict(x)?;
    let opens = cover
        .iter()
        .map(|h| weil_restrict(&x.localize(h)?))
        .collect::<Result<Vec<_>>>()?;
    let width = res.ring().nvars();
    let mut membership = Vec::new();
    let mut failures = Vec::new();
    for m in 1..=max_m {
        let k = stage(x.field(), m)?;
        let xk = x.tensor_extend(&k, seed)?;
        let alg = xk.base().finite()?;
        let n = xk.base_nvars();
        let hk: Vec<MPoly> = {
            let emb = Embedding::new(x.field(), &k, seed)?;
            let ids: Vec<usize> = (0..x.ring().nvars()).collect();
            cover
                .iter()
                .map(|h| h.map_into(xk.ring(), &ids, |c| emb.apply(c)))
                .collect()
        };
        let points = res.points(&k, seed)?;
        let open_points: Vec<Vec<Vec<Fe>>> = opens.iter().map(|o| o.points(&k, seed)).collect::<Result<_>>()?;
        let mut rows = Vec::with_capacity(points.len());
        for (pi, p) in points.iter().enumerate() {
            let mut images: Vec<Vector> = (0..n).map(|i| alg.generator(i)).collect();
            images.extend(res.regroup(p));
            let mut inside = Vec::new();
            for (a, h) in hk.iter().enumerate() {
                let unit = alg.is_unit(&alg.eval_poly(h, &images, &alg.one()));
                let lifts = open_points[a].iter().filter(|q| q[..width] == p[..]).count();
                if lifts != usize::from(unit) {
                    failures.push(format!(
                        "m={} point {} open {}: {} lifts, unit={}",
                        m, pi, a, lifts, unit
                    ));
                }
                if lifts > 0 {
                    inside.push(a);
                }
            }
            if inside.is_empty() {
                failures.push(format!("m={} point {} is not covered", m, pi));
            }
            rows.push(inside);
        }
        let lifted: usize = open_points.iter().map(|v| v.len()).sum();
        let expected: usize = rows.iter().map(|v| v.len()).sum();
        if lifted != expected {
            failures.push(format!("m={} open restrictions have points over no point of Res(X)", m));
        }
        membership.push((m, rows));
    }
    Ok(CoverReport { membership, failures })
}
