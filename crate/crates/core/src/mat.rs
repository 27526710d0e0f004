//! Dense matrices over a [`Field`].
//!
//! Matrices act on column vectors: the image of `v` under `M` is `M v`.

use alloc::{sync::Arc, vec, vec::Vec};
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{prime_factors, Fe, Field};
use crate::poly::Poly;
use crate::subspace::{nullspace_from_rref, Echelon};

#[derive(Clone)]
pub struct Mat {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.field.same(&other.field)
            && self.data == other.data
    }
}

impl Eq for Mat {}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat {}x{} over {} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
            if i + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: Mat,
    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub nullspace: Vec<Vec<Fe>>,
}

impl Mat {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(field: &Arc<Field>, n: usize, c: Fe) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_vec(field: &Arc<Field>, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::Dimension("data length does not match shape".into()));
        }
        if let Some(&bad) = data.iter().find(|&&x| x as u32 >= field.order()) {
            return Err(Error::ElementOutOfRange { value: bad as i64, q: field.order() });
        }
        Ok(Mat { field: field.clone(), rows, cols, data })
    }

    /// Matrix whose rows are `rows`, each of length `cols`.
    pub fn from_rows(field: &Arc<Field>, cols: usize, rows: &[Vec<Fe>]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { field: field.clone(), rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(field: &Arc<Field>, rows: usize, cols: &[Vec<Fe>]) -> Mat {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.data[i * cols.len() + j] = c[i];
            }
        }
        m
    }

    pub fn from_fn(field: &Arc<Field>, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Fe) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Fe> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Fe] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as Fe))
    }

    fn check_field(&self, other: &Mat) -> Result<()> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension("inner dimensions differ in product".into()));
        }
        let mut out = Mat::zeros(&self.field, self.rows, other.cols);
        self.field
            .matmul_into(&self.data, &other.data, self.rows, self.cols, other.cols, &mut out.data);
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    /// `v M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Fe]) -> Vec<Fe> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            self.field.axpy(&mut out, c, self.row(i));
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shapes differ in sum".into()));
        }
        let mut out = self.clone();
        self.field.axpy(&mut out.data, 1, &other.data);
        Ok(out)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shapes differ in difference".into()));
        }
        let mut out = self.clone();
        self.field.axmy(&mut out.data, 1, &other.data);
        Ok(out)
    }

    pub fn scale(&self, c: Fe) -> Mat {
        let mut out = self.clone();
        self.field.scale(&mut out.data, c);
        out
    }

    /// `self += c * other` in place; shapes must agree.
    pub fn axpy(&mut self, c: Fe, other: &Mat) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.field.axpy(&mut self.data, c, &other.data);
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Kronecker product; basis `e_i (x) f_j` ordered lexicographically in `(i, j)`.
    pub fn kron(&self, other: &Mat) -> Result<Mat> {
        self.check_field(other)?;
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Mat::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    let dst = (i * other.rows + k) * c + j * other.cols;
                    f.axpy(&mut out.data[dst..dst + other.cols], a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal matrix with the given square-or-not blocks.
    pub fn block_diag(field: &Arc<Field>, blocks: &[&Mat]) -> Mat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(&self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Apply `f` to every entry, landing in `field`.
    pub fn map_entries(&self, field: &Arc<Field>, f: impl Fn(Fe) -> Fe) -> Mat {
        Mat { field: field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    /// Entrywise `x -> x^(p^i)`.
    pub fn frobenius(&self, i: u32) -> Mat {
        let f = self.field.clone();
        self.map_entries(&f, |x| f.frobenius_pow(x, i))
    }

    pub fn trace(&self) -> Fe {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    /// Reduced row-echelon form with the pivot in each row at its first
    /// nonzero entry, scanning columns left to right.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, col)).expect("nonzero pivot");
            f.scale(m.row_mut(r), inv);
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let c = m.get(i, col);
                    if c != 0 {
                        f.axmy(m.row_mut(i), c, &pivot_row);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        let rows: Vec<Vec<Fe>> = (0..r).map(|i| m.row(i).to_vec()).collect();
        let nullspace = nullspace_from_rref(f, &rows, &pivots, m.cols);
        Rref { rank: r, pivots, reduced: m, nullspace }
    }

    pub fn rank(&self) -> usize {
        let e = Echelon::from_vectors(&self.field, self.cols, (0..self.rows).map(|i| self.row(i).to_vec()));
        e.dim()
    }

    pub fn nullspace(&self) -> Vec<Vec<Fe>> {
        self.rref().nullspace
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Mat::zeros(f, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Mat::identity(f, n));
        let red = aug.rref();
        if red.rank < n || red.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(red.reduced.block(0, n, n, n))
    }

    pub fn pow(&self, mut e: u64) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut acc = Mat::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("polynomial in a non-square matrix".into()));
        }
        let n = self.rows;
        let mut acc = Mat::zeros(&self.field, n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                let x = acc.get(i, i);
                acc.set(i, i, self.field.add(x, c));
            }
        }
        Ok(acc)
    }

    /// Minimal polynomial of `v` relative to the `self`-invariant subspace
    /// `base`, together with the new Krylov vectors it contributes.
    fn krylov(&self, v: Vec<Fe>, base: &Echelon) -> (Poly, Vec<Vec<Fe>>) {
        let f = &self.field;
        let n = self.rows;
        let mut local: Vec<(Vec<Fe>, Vec<Fe>, usize)> = Vec::new();
        let mut cur = v;
        let mut cur_poly: Vec<Fe> = vec![1];
        loop {
            base.reduce(&mut cur);
            cur_poly.resize(n + 1, 0);
            for (row, poly, piv) in &local {
                let c = cur[*piv];
                if c != 0 {
                    f.axmy(&mut cur, c, row);
                    f.axmy(&mut cur_poly, c, poly);
                }
            }
            match cur.iter().position(|&x| x != 0) {
                None => {
                    let p = Poly::new(f, cur_poly).monic();
                    return (p, local.into_iter().map(|(r, _, _)| r).collect());
                }
                Some(piv) => {
                    let inv = f.inv(cur[piv]).expect("nonzero pivot");
                    f.scale(&mut cur, inv);
                    f.scale(&mut cur_poly, inv);
                    let next = self.mul_vec(&cur);
                    let mut next_poly = vec![0; n + 1];
                    next_poly[1..].copy_from_slice(&cur_poly[..n]);
                    local.push((cur, cur_poly, piv));
                    cur = next;
                    cur_poly = next_poly;
                }
            }
        }
    }

    /// Characteristic polynomial, as the product of relative minimal
    /// polynomials along a Krylov decomposition.
    pub fn charpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut base = Echelon::new(f, n);
        let mut acc = Poly::one(f);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            if base.contains(&e) {
                continue;
            }
            let (p, vs) = self.krylov(e, &base);
            acc = acc.mul(&p);
            for v in vs {
                base.insert(v);
            }
            if base.is_full() {
                break;
            }
        }
        Ok(acc)
    }

    /// Minimal polynomial: lcm of the annihilators of the standard basis
    /// vectors not already in the span of earlier Krylov spaces.
    pub fn minpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::Dimension("minimal polynomial of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let empty = Echelon::new(f, n);
        let mut span = Echelon::new(f, n);
        let mut acc = Poly::one(f);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            if span.contains(&e) {
                continue;
            }
            let (p, vs) = self.krylov(e, &empty);
            acc = acc.lcm(&p);
            for v in vs {
                span.insert(v);
            }
            if span.is_full() {
                break;
            }
        }
        Ok(acc)
    }

    /// Finite order of `M` and its minimal polynomial is squarefree.
    pub fn is_semisimple(&self) -> Result<bool> {
        Ok(self.minpoly()?.is_squarefree())
    }

    /// Multiplicative order, from the minimal polynomial: the lcm of the
    /// orders of `t` modulo each irreducible factor, times the least power of
    /// p bounding the largest multiplicity.
    pub fn order(&self) -> Result<u64> {
        let mp = self.minpoly()?;
        order_from_minpoly(&mp)
    }

    /// Minimal polynomial and, when requested, the multiplicative order.
    pub fn minpoly_order(&self, want_order: bool) -> Result<(Poly, Option<u64>)> {
        let mp = self.minpoly()?;
        let ord = if want_order { Some(order_from_minpoly(&mp)?) } else { None };
        Ok((mp, ord))
    }
}

fn order_from_minpoly(mp: &Poly) -> Result<u64> {
    let f = mp.field();
    if mp.coeffs().first().copied().unwrap_or(0) == 0 {
        return Err(Error::Singular);
    }
    let q = f.order() as u128;
    let p = f.characteristic() as u64;
    let t = Poly::monomial(f, 1);
    let mut ord: u64 = 1;
    let mut emax = 1usize;
    for (g, e) in mp.factor()? {
        emax = emax.max(e);
        let d = g.degree().unwrap_or(0) as u32;
        let n = q
            .checked_pow(d)
            .map(|v| v - 1)
            .filter(|&v| v <= u64::MAX as u128)
            .ok_or_else(|| Error::Unsupported("element order beyond 64 bits".into()))?
            as u64;
        let mut o = n;
        for r in prime_factors(n) {
            while o.is_multiple_of(r) && t.pow_mod((o / r) as u128, &g)?.is_one() {
                o /= r;
            }
        }
        ord = lcm_u64(ord, o);
    }
    let mut pc = 1u64;
    while (pc as usize) < emax {
        pc *= p;
    }
    Ok(ord * pc)
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    a / x * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: &Arc<Field>, rows: &[&[Fe]]) -> Mat {
        let c = rows[0].len();
        Mat::from_rows(f, c, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn rref_examples() {
        let f = Field::new(5, 1).unwrap();
        let r = Mat::identity(&f, 3).rref();
        assert_eq!(r.rank, 3);
        assert!(r.nullspace.is_empty());
        let r = Mat::zeros(&f, 2, 4).rref();
        assert_eq!((r.rank, r.nullspace.len()), (0, 4));
        let r = m(&f, &[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.nullspace, vec![vec![3, 1]]);
    }

    #[test]
    fn kron_shapes_and_identity() {
        let f = Field::new(5, 1).unwrap();
        let a = Mat::identity(&f, 2);
        let b = Mat::identity(&f, 3);
        let k = a.kron(&b).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert!(k.is_identity());
        let g = Field::new(7, 1).unwrap();
        assert_eq!(a.kron(&Mat::identity(&g, 2)), Err(Error::FieldMismatch));
    }

    #[test]
    fn minpoly_and_order_examples() {
        let f = Field::new(5, 1).unwrap();
        let u = m(&f, &[&[1, 1], &[0, 1]]);
        let (mp, ord) = u.minpoly_order(true).unwrap();
        let t1 = Poly::linear(&f, 1);
        assert_eq!(mp, t1.mul(&t1));
        assert_eq!(ord, Some(5));
        assert_eq!(m(&f, &[&[2, 0], &[0, 3]]).order().unwrap(), 4);
        let (mp, ord) = Mat::identity(&f, 3).minpoly_order(true).unwrap();
        assert_eq!(mp, t1);
        assert_eq!(ord, Some(1));
        let singular = m(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(singular.minpoly_order(true).unwrap_err(), Error::Singular);
        assert!(singular.minpoly_order(false).is_ok());
    }

    #[test]
    fn charpoly_of_companion_block() {
        let f = Field::new(7, 1).unwrap();
        // diag(J_2(3), 5): charpoly (t-3)^2 (t-5), minpoly the same
        let a = m(&f, &[&[3, 1, 0], &[0, 3, 0], &[0, 0, 5]]);
        let expect = Poly::linear(&f, 3).mul(&Poly::linear(&f, 3)).mul(&Poly::linear(&f, 5));
        assert_eq!(a.charpoly().unwrap(), expect);
        assert_eq!(a.minpoly().unwrap(), expect);
        let b = Mat::scalar(&f, 3, 2);
        assert_eq!(b.charpoly().unwrap().degree(), Some(3));
        assert_eq!(b.minpoly().unwrap(), Poly::linear(&f, 2));
        assert!(a.eval_poly(&expect).unwrap().is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::new(3, 2).unwrap();
        let a = m(&f, &[&[1, 4, 2], &[0, 5, 7], &[3, 0, 1]]);
        if a.is_invertible() {
            let inv = a.inverse().unwrap();
            assert!(a.mul(&inv).unwrap().is_identity());
        }
        assert_eq!(Mat::zeros(&f, 2, 2).inverse().unwrap_err(), Error::Singular);
    }
}
