//! Fixed points, first cohomology and Ext^1, without a presentation.
//!
//! A 1-cocycle is determined by its values on the generators. Writing those
//! values as unknowns `u`, the value at every element is a linear function
//! `d(e) = A_e u`, propagated along the BFS tree by
//! `A_{hs} = A_h + rho(h) P_s`. Each non-tree edge `h * s = e` then imposes
//! `A_e = A_h + rho(h) P_s`, and the cocycles are the common solutions.

use alloc::{vec, vec::Vec};

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::{walk, TreeVisitor, DEFAULT_MEMORY_CAP};
use crate::mat::Mat;
use crate::rep::Rep;
use crate::subspace::Echelon;

/// Cocycles are stored as `m * g` vectors: block `s` is the value on
/// generator `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleSpace {
    pub module_dim: usize,
    pub num_gens: usize,
    pub z1_dim: usize,
    pub b1_dim: usize,
    pub h0_dim: usize,
    pub h1_dim: usize,
    /// Cocycles spanning a complement of the coboundaries.
    pub basis: Vec<Vec<Fe>>,
}

impl CocycleSpace {
    /// Value of cocycle `i` on generator `s`.
    pub fn value(&self, i: usize, s: usize) -> &[Fe] {
        let m = self.module_dim;
        &self.basis[i][s * m..(s + 1) * m]
    }
}

/// Fixed vectors: the joint kernel of `rho(s) - I`.
pub fn h0(v: &Rep) -> Vec<Vec<Fe>> {
    let m = v.dim();
    let f = v.field();
    let mut stacked = Mat::zeros(f, m * v.images().len(), m);
    for (s, img) in v.images().iter().enumerate() {
        let d = img.sub(&Mat::identity(f, m)).expect("square");
        stacked.set_block(s * m, 0, &d);
    }
    stacked.nullspace()
}

struct Propagate<'a> {
    images: &'a [Mat],
    m: usize,
    constraints: Echelon,
}

/// `(rho(h), A_h)`.
type Prop = (Mat, Mat);

impl TreeVisitor for Propagate<'_> {
    type Value = Prop;
    const NEEDS_EDGES: bool = true;

    fn root(&mut self) -> Result<Prop> {
        let f = self.images[0].field();
        Ok((Mat::identity(f, self.m), Mat::zeros(f, self.m, self.m * self.images.len())))
    }

    fn child(&mut self, (rho, a): &Prop, _h: usize, s: usize) -> Result<Prop> {
        let mut a2 = a.clone();
        add_block(&mut a2, rho, s * self.m);
        Ok((rho.mul(&self.images[s])?, a2))
    }

    fn edge(&mut self, _h: usize, (rho, a): &Prop, s: usize, _e: usize, (_, ae): &Prop) -> Result<()> {
        if self.constraints.is_full() {
            return Ok(());
        }
        let mut c = a.sub(ae)?;
        add_block(&mut c, rho, s * self.m);
        for i in 0..c.rows() {
            self.constraints.insert(c.row(i).to_vec());
            if self.constraints.is_full() {
                break;
            }
        }
        Ok(())
    }

    fn bytes((rho, a): &Prop) -> usize {
        (rho.data().len() + a.data().len()) * core::mem::size_of::<Fe>() + 2 * core::mem::size_of::<Mat>()
    }
}

fn add_block(a: &mut Mat, b: &Mat, c0: usize) {
    let f = b.field().clone();
    for i in 0..b.rows() {
        let row = &mut a.row_mut(i)[c0..c0 + b.cols()];
        f.axpy(row, 1, b.row(i));
    }
}

pub fn h1(v: &Rep) -> Result<CocycleSpace> {
    h1_capped(v, DEFAULT_MEMORY_CAP)
}

pub fn h1_capped(v: &Rep, mem_cap: usize) -> Result<CocycleSpace> {
    let m = v.dim();
    let g = v.images().len();
    let f = v.field().clone();
    let width = m * g;
    let h0_dim = h0(v).len();
    if m == 0 {
        return Ok(CocycleSpace { module_dim: 0, num_gens: g, z1_dim: 0, b1_dim: 0, h0_dim, h1_dim: 0, basis: vec![] });
    }
    let mut prop = Propagate { images: v.images(), m, constraints: Echelon::new(&f, width) };
    walk(v.group(), &mut prop, mem_cap)?;
    let z1 = prop.constraints.annihilator();

    let mut b1 = Echelon::new(&f, width);
    for i in 0..m {
        let mut cob = vec![0; width];
        for (s, img) in v.images().iter().enumerate() {
            for r in 0..m {
                let x = img.get(r, i);
                cob[s * m + r] = if r == i { f.sub(x, 1) } else { x };
            }
        }
        b1.insert(cob);
    }
    let b1_dim = b1.dim();
    debug_assert_eq!(b1_dim, m - h0_dim);
    let mut span = b1;
    let mut basis = Vec::new();
    for z in &z1 {
        if span.insert(z.clone()) {
            basis.push(z.clone());
        }
    }
    if span.dim() != z1.len() {
        return Err(Error::Uncertified("coboundaries are not contained in the cocycles".into()));
    }
    Ok(CocycleSpace { module_dim: m, num_gens: g, z1_dim: z1.len(), b1_dim, h0_dim, h1_dim: basis.len(), basis })
}

/// `Ext^1(v, w)`, computed as `H^1` of `Hom(w, v)`. A cocycle value on a
/// generator is a `dim v x dim w` matrix flattened row-major.
pub fn ext1(v: &Rep, w: &Rep) -> Result<CocycleSpace> {
    ext1_capped(v, w, DEFAULT_MEMORY_CAP)
}

pub fn ext1_capped(v: &Rep, w: &Rep, mem_cap: usize) -> Result<CocycleSpace> {
    h1_capped(&Rep::hom_module(v, w)?, mem_cap)
}

struct CocycleCheck<'a> {
    images: &'a [Mat],
    values: Vec<Vec<Fe>>,
    checked: usize,
}

impl TreeVisitor for CocycleCheck<'_> {
    type Value = (Mat, Vec<Fe>);
    const NEEDS_EDGES: bool = true;

    fn root(&mut self) -> Result<Self::Value> {
        let m = self.images[0].rows();
        Ok((Mat::identity(self.images[0].field(), m), vec![0; m]))
    }

    fn child(&mut self, (rho, d): &Self::Value, _h: usize, s: usize) -> Result<Self::Value> {
        let mut d2 = d.clone();
        rho.field().axpy(&mut d2, 1, &rho.mul_vec(&self.values[s]));
        Ok((rho.mul(&self.images[s])?, d2))
    }

    fn edge(&mut self, h: usize, (rho, d): &Self::Value, s: usize, _e: usize, (_, de): &Self::Value) -> Result<()> {
        let mut expect = d.clone();
        rho.field().axpy(&mut expect, 1, &rho.mul_vec(&self.values[s]));
        if &expect != de {
            return Err(Error::NotHomomorphism { element: h, generator: s });
        }
        self.checked += 1;
        Ok(())
    }

    fn bytes((rho, d): &Self::Value) -> usize {
        (rho.data().len() + d.len()) * core::mem::size_of::<Fe>() + core::mem::size_of::<Mat>()
    }
}

/// Check the cocycle identity `d(hs) = d(h) + rho(h) d(s)` on every
/// non-tree edge; returns the number of edges checked.
pub fn verify_cocycle(v: &Rep, cocycle: &[Fe], mem_cap: usize) -> Result<usize> {
    let m = v.dim();
    if cocycle.len() != m * v.images().len() {
        return Err(Error::Dimension("cocycle length differs from dim * generators".into()));
    }
    let values = cocycle.chunks(m.max(1)).map(|c| c.to_vec()).collect();
    let mut check = CocycleCheck { images: v.images(), values, checked: 0 };
    walk(v.group(), &mut check, mem_cap)?;
    Ok(check.checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::group::{GroupData, DEFAULT_CAP};
    use alloc::sync::Arc;

    fn sl2(p: u32) -> Arc<GroupData> {
        let f = Field::new(p, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        let w = Mat::from_vec(&f, 2, 2, vec![0, 1, f.from_int(-1), 0]).unwrap();
        Arc::new(GroupData::enumerate(&[u, w], DEFAULT_CAP).unwrap())
    }

    #[test]
    fn fixed_points() {
        let g = sl2(5);
        let v = Rep::natural(&g);
        assert_eq!(h0(&Rep::trivial(&g, 3)).len(), 3);
        assert_eq!(h0(&v).len(), 0);
        assert_eq!(h0(&v.ad().unwrap()).len(), 1);
    }

    #[test]
    fn h1_trivial_module() {
        let g = sl2(5);
        let c = h1(&Rep::trivial(&g, 1)).unwrap();
        assert_eq!(c.h1_dim, 0);
        let f = Field::new(5, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        let c5 = Arc::new(GroupData::enumerate(&[u], 10).unwrap());
        let c = h1(&Rep::trivial(&c5, 1)).unwrap();
        assert_eq!((c.z1_dim, c.b1_dim, c.h1_dim), (1, 0, 1));
    }

    #[test]
    fn ext_dims_sl2_5() {
        let g = sl2(5);
        let l1 = Rep::natural(&g);
        let st = l1.sym(4).unwrap();
        let e = ext1(&l1, &l1).unwrap();
        assert_eq!(e.h1_dim, 1);
        assert_eq!(e.b1_dim, 4 - 1);
        assert_eq!(ext1(&st, &st).unwrap().h1_dim, 0);
        let hm = Rep::hom_module(&l1, &l1).unwrap();
        let n = verify_cocycle(&hm, &e.basis[0], DEFAULT_MEMORY_CAP).unwrap();
        assert_eq!(n, g.nontree().len());
        let mut bad = e.basis[0].clone();
        bad[0] = Field::new(5, 1).unwrap().add(bad[0], 1);
        assert!(verify_cocycle(&hm, &bad, DEFAULT_MEMORY_CAP).is_err());
    }
}
