//! Dense linear algebra over a [`Field`]: reduced row echelon forms,
//! kernels, and an incremental echelon basis that records how each reduced
//! vector decomposes over the vectors inserted so far.

use alloc::vec;
use alloc::vec::Vec;

use crate::exactfield::{Fe, Field};

pub type Vector = Vec<Fe>;

pub fn zero_vector(field: &Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn is_zero_vector(field: &Field, v: &[Fe]) -> bool {
    v.iter().all(|x| field.is_zero(x))
}

pub fn add_scaled(field: &Field, acc: &mut [Fe], v: &[Fe], c: &Fe) {
    if field.is_zero(c) {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !field.is_zero(x) {
            *a = field.add(a, &field.mul(x, c));
        }
    }
}

pub fn scale_vector(field: &Field, v: &[Fe], c: &Fe) -> Vector {
    v.iter().map(|x| field.mul(x, c)).collect()
}

/// `rows × cols` matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vector>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![zero_vector(field, cols); rows],
        }
    }

    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, field: &Field, v: &[Fe]) -> Vector {
        self.data
            .iter()
            .map(|row| {
                let mut acc = field.zero();
                for (a, b) in row.iter().zip(v) {
                    if !field.is_zero(a) && !field.is_zero(b) {
                        acc = field.add(&acc, &field.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !field.is_zero(&self.data[i][c])) else {
                continue;
            };
            self.data.swap(r, pr);
            let inv = field.inv(&self.data[r][c]).unwrap();
            self.data[r] = scale_vector(field, &self.data[r], &inv);
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r {
                    let f = self.data[i][c].clone();
                    if !field.is_zero(&f) {
                        let neg = field.neg(&f);
                        add_scaled(field, &mut self.data[i], &pivot_row, &neg);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().rref(field).len()
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn kernel(&self, field: &Field) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vector(field, self.cols);
                v[f] = field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(&m.data[r][f]);
                }
                v
            })
            .collect()
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, field: &Field, b: &[Fe]) -> Option<Vector> {
        let mut aug = self.clone();
        for (row, x) in aug.data.iter_mut().zip(b) {
            row.push(x.clone());
        }
        aug.cols += 1;
        let pivots = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(field, self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.data[r][self.cols].clone();
        }
        Some(x)
    }
}

/// Solves a prime-field augmented system given as rows of `u64`
/// (`ncols` unknowns plus the right-hand side). Unique-solution use only.
pub(crate) fn solve_prime_augmented(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> Option<Vec<u64>> {
    let inv = |a: u64| crate::exactfield::field_inv_mod(a, p);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, pr);
        let s = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = (*x * s) % p;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[ncols] != 0) {
        return None;
    }
    let mut sol = vec![0u64; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][ncols];
    }
    Some(sol)
}

/// Incremental echelon basis of a subspace of `F^dim`.
///
/// Every inserted independent vector gets an index; reductions report the
/// coefficients of a vector over those inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    // (pivot column, row with 1 at pivot, row = Σ combo_j · inserted_j)
    rows: Vec<(usize, Vector, Vector)>,
}

impl Echelon {
    pub fn new(field: &Field, dim: usize) -> Echelon {
        Echelon {
            field: field.clone(),
            dim,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(residual, combo)` with `v = Σ combo_j · inserted_j + residual` and
    /// the residual zero on every pivot column.
    pub fn reduce(&self, v: &[Fe]) -> (Vector, Vector) {
        let f = &self.field;
        let mut res = v.to_vec();
        let mut combo = zero_vector(f, self.rows.len());
        for (pc, row, t) in &self.rows {
            let c = res[*pc].clone();
            if f.is_zero(&c) {
                continue;
            }
            let neg = f.neg(&c);
            add_scaled(f, &mut res, row, &neg);
            add_scaled(f, &mut combo, t, &c);
        }
        (res, combo)
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        is_zero_vector(&self.field, &self.reduce(v).0)
    }

    /// Inserts `v`. `Ok(index)` if it was independent, otherwise `Err(combo)`
    /// expressing it over the inserted vectors.
    pub fn insert(&mut self, v: &[Fe]) -> Result<usize, Vector> {
        let f = self.field.clone();
        let (res, combo) = self.reduce(v);
        let Some(pc) = res.iter().position(|x| !f.is_zero(x)) else {
            return Err(combo);
        };
        let n = self.rows.len();
        let inv = f.inv(&res[pc]).unwrap();
        let row = scale_vector(&f, &res, &inv);
        let mut t: Vector = combo.iter().map(|c| f.neg(c)).collect();
        t.push(f.one());
        let t = scale_vector(&f, &t, &inv);
        for (_, _, other) in self.rows.iter_mut() {
            other.push(f.zero());
        }
        self.rows.push((pc, row, t));
        Ok(n)
    }

    /// Unit vectors on the non-pivot columns: they span a complement.
    pub fn complement_units(&self) -> Vec<usize> {
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _, _)| *p).collect();
        (0..self.dim).filter(|c| !pivots.contains(c)).collect()
    }

    /// The echelon rows, a basis of the subspace.
    pub fn rows(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, r, _)| r)
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _, _)| *p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(f: &Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn kernel_and_solve() {
        let f = Field::prime(7).unwrap();
        let m = Matrix {
            rows: 2,
            cols: 3,
            data: vec![v(&f, &[1, 2, 3]), v(&f, &[2, 4, 6])],
        };
        assert_eq!(m.rank(&f), 1);
        let ker = m.kernel(&f);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(is_zero_vector(&f, &m.mul_vec(&f, k)));
        }
        let x = m.solve(&f, &v(&f, &[1, 2])).unwrap();
        assert_eq!(m.mul_vec(&f, &x), v(&f, &[1, 2]));
        assert!(m.solve(&f, &v(&f, &[1, 3])).is_none());
    }

    #[test]
    fn echelon_records_combinations() {
        let f = Field::prime(5).unwrap();
        let mut e = Echelon::new(&f, 3);
        let a = v(&f, &[1, 1, 0]);
        let b = v(&f, &[0, 1, 1]);
        assert_eq!(e.insert(&a), Ok(0));
        assert_eq!(e.insert(&b), Ok(1));
        let c = v(&f, &[2, 5, 3]); // 2a + 3b
        assert_eq!(e.insert(&c), Err(v(&f, &[2, 3])));
        assert_eq!(e.complement_units().len(), 1);
    }
}
