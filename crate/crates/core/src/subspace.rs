//! Incrementally grown subspaces in semi-echelon form, and spinning.

use alloc::{sync::Arc, vec, vec::Vec};

use crate::field::{Fe, Field};
use crate::mat::Mat;

/// A subspace of `F^width` held as semi-echelon rows: each row has a 1 at
/// its pivot and zeros at the pivots of all earlier rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Arc<Field>,
    width: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Arc<Field>, width: usize) -> Echelon {
        Echelon { field: field.clone(), width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<Fe>>>(field: &Arc<Field>, width: usize, vs: I) -> Echelon {
        let mut e = Echelon::new(field, width);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtract the span's contribution at every pivot.
    pub fn reduce(&self, v: &mut [Fe]) {
        debug_assert_eq!(v.len(), self.width);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                self.field.axmy(v, c, row);
            }
        }
    }

    /// Reduce `v` and, if something is left, normalize and keep it. Returns
    /// whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Fe>) -> bool {
        self.reduce(&mut v);
        self.push_reduced(v)
    }

    /// Keep an already reduced vector if nonzero.
    pub(crate) fn push_reduced(&mut self, mut v: Vec<Fe>) -> bool {
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[piv]).expect("nonzero pivot");
        if inv != 1 {
            self.field.scale(&mut v, inv);
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coordinates of a vector in the span with respect to `rows()`, or
    /// `None` when it lies outside.
    pub fn coordinates(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        let mut w = v.to_vec();
        let mut c = vec![0; self.rows.len()];
        for (i, (row, &piv)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let x = w[piv];
            if x != 0 {
                c[i] = x;
                self.field.axmy(&mut w, x, row);
            }
        }
        w.iter().all(|&x| x == 0).then_some(c)
    }

    /// Fully reduced basis sorted by pivot column.
    pub fn rref_rows(&self) -> (Vec<Vec<Fe>>, Vec<usize>) {
        let f = &self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<Fe>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        for i in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for r in head.iter_mut() {
                let c = r[pivots[i]];
                if c != 0 {
                    f.axmy(r, c, pivot_row);
                }
            }
        }
        (rows, pivots)
    }

    /// Basis of `{x : r . x = 0 for every row r}`.
    pub fn annihilator(&self) -> Vec<Vec<Fe>> {
        let (rows, pivots) = self.rref_rows();
        nullspace_from_rref(&self.field, &rows, &pivots, self.width)
    }

    pub fn basis_matrix(&self) -> Mat {
        Mat::from_rows(&self.field, self.width, &self.rows)
    }
}

pub(crate) fn nullspace_from_rref(field: &Field, rows: &[Vec<Fe>], pivots: &[usize], width: usize) -> Vec<Vec<Fe>> {
    let mut is_pivot = vec![false; width];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..width)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![0; width];
            v[free] = 1;
            for (r, &p) in rows.iter().zip(pivots) {
                v[p] = field.neg(r[free]);
            }
            v
        })
        .collect()
}

/// Smallest subspace containing `seeds` and closed under `v -> M v` for every
/// `M` in `mats`. Stops early once the whole space is reached.
pub fn spin<I: IntoIterator<Item = Vec<Fe>>>(field: &Arc<Field>, width: usize, seeds: I, mats: &[Mat]) -> Echelon {
    let mut e = Echelon::new(field, width);
    for s in seeds {
        e.insert(s);
    }
    let mut i = 0;
    while i < e.dim() && !e.is_full() {
        for m in mats {
            let w = m.mul_vec(&e.rows[i]);
            e.insert(w);
            if e.is_full() {
                break;
            }
        }
        i += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_coordinates_and_annihilator() {
        let f = Field::new(5, 1).unwrap();
        let mut e = Echelon::new(&f, 3);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(e.insert(vec![0, 1, 2]));
        assert!(!e.insert(vec![1, 3, 0])); // sum of the two
        let c = e.coordinates(&[1, 3, 0]).unwrap();
        let mut back = vec![0; 3];
        for (ci, r) in c.iter().zip(e.rows()) {
            f.axpy(&mut back, *ci, r);
        }
        assert_eq!(back, vec![1, 3, 0]);
        let ann = e.annihilator();
        assert_eq!(ann.len(), 1);
        for r in e.rows() {
            assert_eq!(f.dot(r, &ann[0]), 0);
        }
    }
}
