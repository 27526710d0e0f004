//! Explicit enumeration of finite matrix groups.
//!
//! Elements are discovered breadth-first from the identity, multiplying on
//! the right by generators in the given order. The discovery edges form a
//! spanning tree of the Cayley graph; every other edge is recorded as a
//! non-tree edge. [`walk`] streams values along the tree so that cocycle
//! and homomorphism checks can run in bounded memory.

use alloc::{sync::Arc, vec, vec::Vec};
use core::hash::BuildHasher;
use core::ops::ControlFlow;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::mat::{lcm_u64, Mat};

pub const DEFAULT_CAP: usize = 200_000;
pub const DEFAULT_MEMORY_CAP: usize = 512 << 20;

const NO_PARENT: u32 = u32::MAX;

pub struct GroupData {
    field: Arc<Field>,
    degree: usize,
    gens: Vec<Mat>,
    elems: Vec<Fe>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
    cayley: Vec<u32>,
    parent: Vec<(u32, u32)>,
    nontree: Vec<(u32, u32)>,
    orders: Vec<u32>,
}

impl core::fmt::Debug for GroupData {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "GroupData(order {}, degree {}, {} gens over {})", self.order(), self.degree, self.gens.len(), self.field)
    }
}

impl GroupData {
    /// Enumerate the group generated by `gens`, failing once more than `cap`
    /// elements have been found.
    pub fn enumerate(gens: &[Mat], cap: usize) -> Result<GroupData> {
        let first = gens.first().ok_or_else(|| Error::Dimension("a group needs at least one generator".into()))?;
        let field = first.field().clone();
        let d = first.rows();
        for g in gens {
            if !g.field().same(&field) {
                return Err(Error::FieldMismatch);
            }
            if g.rows() != d || g.cols() != d {
                return Err(Error::Dimension("generators must be square of equal size".into()));
            }
            if !g.is_invertible() {
                return Err(Error::Singular);
            }
        }
        let ng = gens.len();
        let dd = d * d;
        let mut g = GroupData {
            field: field.clone(),
            degree: d,
            gens: gens.to_vec(),
            elems: Vec::new(),
            table: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
            cayley: Vec::new(),
            parent: Vec::new(),
            nontree: Vec::new(),
            orders: Vec::new(),
        };
        g.insert(Mat::identity(&field, d).data(), (NO_PARENT, NO_PARENT));
        let mut prod = vec![0; dd];
        let mut h = 0;
        while h < g.len() {
            for s in 0..ng {
                prod.iter_mut().for_each(|x| *x = 0);
                field.matmul_into(&g.elems[h * dd..(h + 1) * dd], gens[s].data(), d, d, d, &mut prod);
                let e = match g.find_slice(&prod) {
                    Some(e) => {
                        g.nontree.push((h as u32, s as u32));
                        e
                    }
                    None => {
                        if g.len() >= cap {
                            return Err(Error::GroupCap(cap));
                        }
                        g.insert(&prod, (h as u32, s as u32))
                    }
                };
                g.cayley.push(e as u32);
            }
            h += 1;
        }
        g.orders = g.compute_orders();
        Ok(g)
    }

    fn hash(&self, key: &[Fe]) -> u64 {
        self.hasher.hash_one(key)
    }

    fn insert(&mut self, key: &[Fe], parent: (u32, u32)) -> usize {
        let idx = self.parent.len();
        let hash = self.hash(key);
        self.elems.extend_from_slice(key);
        self.parent.push(parent);
        let dd = self.degree * self.degree;
        let elems = &self.elems;
        let hasher = &self.hasher;
        self.table
            .insert_unique(hash, idx as u32, |&i| hasher.hash_one(&elems[i as usize * dd..(i as usize + 1) * dd]));
        idx
    }

    fn find_slice(&self, key: &[Fe]) -> Option<usize> {
        let dd = self.degree * self.degree;
        self.table
            .find(self.hash(key), |&i| &self.elems[i as usize * dd..(i as usize + 1) * dd] == key)
            .map(|&i| i as usize)
    }

    fn compute_orders(&self) -> Vec<u32> {
        let n = self.len();
        let mut orders = vec![0u32; n];
        orders[0] = 1;
        for i in 1..n {
            if orders[i] != 0 {
                continue;
            }
            // powers x, x^2, ..., x^k = 1, then ord(x^j) = k / gcd(j, k)
            let mut pows = vec![i];
            let mut cur = i;
            loop {
                cur = self.mul(cur, i);
                if cur == 0 {
                    break;
                }
                pows.push(cur);
            }
            let k = pows.len() as u64 + 1;
            for (j, &e) in pows.iter().enumerate() {
                let j = j as u64 + 1;
                orders[e] = (k / gcd_u64(j, k)) as u32;
            }
        }
        orders
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    /// Size of the matrices.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gens(&self) -> &[Mat] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn elem_slice(&self, i: usize) -> &[Fe] {
        let dd = self.degree * self.degree;
        &self.elems[i * dd..(i + 1) * dd]
    }

    pub fn elem(&self, i: usize) -> Mat {
        Mat::from_vec(&self.field, self.degree, self.degree, self.elem_slice(i).to_vec()).expect("stored element")
    }

    /// Index of a matrix, if it is a group element.
    pub fn find(&self, m: &Mat) -> Option<usize> {
        if !m.field().same(&self.field) || m.rows() != self.degree || m.cols() != self.degree {
            return None;
        }
        self.find_slice(m.data())
    }

    /// Index of `elem(a) * elem(b)`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let d = self.degree;
        let mut prod = vec![0; d * d];
        self.field.matmul_into(self.elem_slice(a), self.elem_slice(b), d, d, d, &mut prod);
        self.find_slice(&prod).expect("group is closed")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let inv = self.elem(a).inverse().expect("group elements are invertible");
        self.find(&inv).expect("group is closed")
    }

    /// Index of `elem(e) * gens[s]`.
    pub fn cayley(&self, e: usize, s: usize) -> usize {
        self.cayley[e * self.gens.len() + s] as usize
    }

    /// BFS parent edge `(parent, generator)`; `None` for the identity.
    pub fn parent(&self, e: usize) -> Option<(usize, usize)> {
        let (h, s) = self.parent[e];
        (h != NO_PARENT).then_some((h as usize, s as usize))
    }

    /// Cayley edges `(h, s)` not used by the BFS tree.
    pub fn nontree(&self) -> &[(u32, u32)] {
        &self.nontree
    }

    /// Generator indices spelling a word for `e`, read left to right.
    pub fn word(&self, mut e: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((h, s)) = self.parent(e) {
            w.push(s);
            e = h;
        }
        w.reverse();
        w
    }

    pub fn element_order(&self, i: usize) -> u32 {
        self.orders[i]
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &o| lcm_u64(a, o as u64))
    }

    pub fn is_p_element(&self, i: usize) -> bool {
        let p = self.characteristic();
        let mut o = self.orders[i];
        while o.is_multiple_of(p) {
            o /= p;
        }
        o == 1
    }

    pub fn whole(self: &Arc<Self>) -> SubgroupRef {
        SubgroupRef {
            parent: self.clone(),
            member: vec![true; self.len()],
            gens: (0..self.gens.len()).map(|s| self.cayley(0, s)).collect(),
        }
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup(self: &Arc<Self>, gens: &[usize]) -> SubgroupRef {
        let mut member = vec![false; self.len()];
        member[0] = true;
        let mut list = vec![0usize];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        SubgroupRef { parent: self.clone(), member, gens: gens.to_vec() }
    }

    /// `O^{p'}(G)`: the subgroup generated by all elements of p-power order.
    pub fn gplus(self: &Arc<Self>) -> SubgroupRef {
        let mut cur = self.subgroup(&[]);
        for i in 1..self.len() {
            if self.is_p_element(i) && !cur.member[i] {
                let mut gens = cur.gens.clone();
                gens.push(i);
                cur = self.subgroup(&gens);
                if cur.order() == self.len() {
                    break;
                }
            }
        }
        cur
    }

    /// Least-index representative of each left coset `gH`, identity first.
    pub fn transversal(&self, h: &SubgroupRef) -> Result<Vec<usize>> {
        Ok(self.cosets(h)?.0)
    }

    /// Transversal together with the coset number of every element.
    pub fn cosets(&self, h: &SubgroupRef) -> Result<(Vec<usize>, Vec<usize>)> {
        if !core::ptr::eq(self, &*h.parent) {
            return Err(Error::GroupMismatch);
        }
        let members = h.elements();
        let mut coset_of = vec![usize::MAX; self.len()];
        let mut reps = Vec::new();
        for g in 0..self.len() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &x in &members {
                coset_of[self.mul(g, x)] = reps.len();
            }
            reps.push(g);
        }
        Ok((reps, coset_of))
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A subgroup of an enumerated group, as a membership mask.
#[derive(Clone, Debug)]
pub struct SubgroupRef {
    pub parent: Arc<GroupData>,
    pub member: Vec<bool>,
    /// Element indices (in the parent) generating the subgroup.
    pub gens: Vec<usize>,
}

impl SubgroupRef {
    pub fn order(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.member[i]
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&i| self.member[i]).collect()
    }

    pub fn index(&self) -> usize {
        self.parent.len() / self.order()
    }

    /// Enumerate the subgroup as a group in its own right, generated by the
    /// parent matrices of `gens` (the identity when there are none).
    pub fn enumerate(&self, cap: usize) -> Result<GroupData> {
        let mats: Vec<Mat> = if self.gens.is_empty() {
            vec![Mat::identity(self.parent.field(), self.parent.degree())]
        } else {
            self.gens.iter().map(|&i| self.parent.elem(i)).collect()
        };
        GroupData::enumerate(&mats, cap)
    }
}

/// Callbacks for [`walk`]. A value is computed for every element by
/// extending its BFS parent's value along one generator.
pub trait TreeVisitor {
    type Value;
    /// Whether [`TreeVisitor::edge`] should be called for non-tree edges.
    const NEEDS_EDGES: bool;

    fn root(&mut self) -> Result<Self::Value>;
    fn child(&mut self, parent: &Self::Value, h: usize, s: usize) -> Result<Self::Value>;
    fn visit(&mut self, _idx: usize, _value: &Self::Value) -> Result<ControlFlow<()>> {
        Ok(ControlFlow::Continue(()))
    }
    /// Non-tree edge `h * gens[s] = e`.
    fn edge(&mut self, _h: usize, _vh: &Self::Value, _s: usize, _e: usize, _ve: &Self::Value) -> Result<()> {
        Ok(())
    }
    fn bytes(value: &Self::Value) -> usize;
}

/// Stream values over the Cayley tree in index order. A value is dropped as
/// soon as its element has been visited and, when edges are needed, all of
/// its incoming Cayley edges have been consumed. Returns the peak number of
/// bytes held.
pub fn walk<V: TreeVisitor>(g: &GroupData, visitor: &mut V, mem_cap: usize) -> Result<usize> {
    let n = g.len();
    let ng = g.num_gens();
    let mut slots: Vec<Option<V::Value>> = Vec::with_capacity(n);
    slots.resize_with(n, || None);
    let mut pending: Vec<u16> = if V::NEEDS_EDGES { vec![ng as u16; n] } else { Vec::new() };
    let mut held = 0usize;
    let mut peak = 0usize;
    let root = visitor.root()?;
    held += V::bytes(&root);
    slots[0] = Some(root);
    for h in 0..n {
        let vh = slots[h].take().expect("value computed by parent");
        if visitor.visit(h, &vh)?.is_break() {
            return Ok(peak.max(held));
        }
        for s in 0..ng {
            let e = g.cayley(h, s);
            if g.parent(e) == Some((h, s)) {
                let ve = visitor.child(&vh, h, s)?;
                held += V::bytes(&ve);
                if held > mem_cap {
                    return Err(Error::MemoryCap(mem_cap));
                }
                peak = peak.max(held);
                slots[e] = Some(ve);
            } else if V::NEEDS_EDGES {
                if e == h {
                    visitor.edge(h, &vh, s, e, &vh)?;
                } else {
                    let ve = slots[e].as_ref().expect("edge target already reached");
                    visitor.edge(h, &vh, s, e, ve)?;
                }
            }
            if V::NEEDS_EDGES {
                pending[e] -= 1;
                if pending[e] == 0 && e < h {
                    if let Some(v) = slots[e].take() {
                        held -= V::bytes(&v);
                    }
                }
            }
        }
        if V::NEEDS_EDGES && pending[h] > 0 {
            slots[h] = Some(vh);
        } else {
            held -= V::bytes(&vh);
        }
    }
    Ok(peak)
}

/// Propagates generator images along the tree and checks every non-tree
/// edge, so that the images define a homomorphism.
pub(crate) struct HomCheck<'a> {
    pub images: &'a [Mat],
    pub dim: usize,
}

impl TreeVisitor for HomCheck<'_> {
    type Value = Mat;
    const NEEDS_EDGES: bool = true;

    fn root(&mut self) -> Result<Mat> {
        Ok(Mat::identity(self.images[0].field(), self.dim))
    }

    fn child(&mut self, parent: &Mat, _h: usize, s: usize) -> Result<Mat> {
        parent.mul(&self.images[s])
    }

    fn edge(&mut self, h: usize, vh: &Mat, s: usize, _e: usize, ve: &Mat) -> Result<()> {
        if &vh.mul(&self.images[s])? != ve {
            return Err(Error::NotHomomorphism { element: h, generator: s });
        }
        Ok(())
    }

    fn bytes(value: &Mat) -> usize {
        core::mem::size_of_val(value.data()) + core::mem::size_of::<Mat>()
    }
}

/// Visits every element with its image under the given generator images.
pub(crate) struct Images<'a, F> {
    pub images: &'a [Mat],
    pub dim: usize,
    pub f: F,
}

impl<F: FnMut(usize, &Mat) -> Result<ControlFlow<()>>> TreeVisitor for Images<'_, F> {
    type Value = Mat;
    const NEEDS_EDGES: bool = false;

    fn root(&mut self) -> Result<Mat> {
        Ok(Mat::identity(self.images[0].field(), self.dim))
    }

    fn child(&mut self, parent: &Mat, _h: usize, s: usize) -> Result<Mat> {
        parent.mul(&self.images[s])
    }

    fn visit(&mut self, idx: usize, value: &Mat) -> Result<ControlFlow<()>> {
        (self.f)(idx, value)
    }

    fn bytes(value: &Mat) -> usize {
        core::mem::size_of_val(value.data()) + core::mem::size_of::<Mat>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2(p: u32) -> Arc<GroupData> {
        let f = Field::new(p, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        let w = Mat::from_vec(&f, 2, 2, vec![0, 1, f.from_int(-1), 0]).unwrap();
        Arc::new(GroupData::enumerate(&[u, w], DEFAULT_CAP).unwrap())
    }

    #[test]
    fn sl2_5_structure() {
        let g = sl2(5);
        assert_eq!(g.order(), 120);
        assert_eq!(g.nontree().len(), 120 * 2 - 119);
        assert_eq!(g.element_order(0), 1);
        let u = g.find(&g.gens()[0]).unwrap();
        assert_eq!(g.element_order(u), 5);
        let f = g.field().clone();
        let minus = g.find(&Mat::scalar(&f, 2, 4)).unwrap();
        assert_eq!(g.element_order(minus), 2);
        let pprime = (0..g.len()).filter(|&i| !g.element_order(i).is_multiple_of(5)).count();
        // 24 elements of order 5 and 24 of order 10
        assert_eq!(pprime, 72);
        assert_eq!(g.gplus().order(), 120);
        for e in 0..g.len() {
            let mut x = 0;
            for s in g.word(e) {
                x = g.cayley(x, s);
            }
            assert_eq!(x, e);
        }
    }

    #[test]
    fn orders_match_matrix_orders() {
        let g = sl2(5);
        for i in 0..g.len() {
            assert_eq!(g.element_order(i) as u64, g.elem(i).order().unwrap());
        }
    }

    #[test]
    fn trivial_group() {
        let f = Field::new(3, 1).unwrap();
        let g = GroupData::enumerate(&[Mat::identity(&f, 2)], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.nontree().len(), 1);
    }

    #[test]
    fn cap_and_singular() {
        let f = Field::new(5, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        assert_eq!(GroupData::enumerate(&[u], 3).unwrap_err(), Error::GroupCap(3));
        let z = Mat::from_vec(&f, 2, 2, vec![1, 2, 2, 4]).unwrap();
        assert_eq!(GroupData::enumerate(&[z], 3).unwrap_err(), Error::Singular);
    }

    #[test]
    fn gplus_of_s3() {
        let f = Field::new(3, 1).unwrap();
        let swap = Mat::from_vec(&f, 2, 2, vec![0, 1, 1, 0]).unwrap();
        let c = Mat::from_vec(&f, 2, 2, vec![0, 2, 1, 2]).unwrap(); // order 3
        let g = Arc::new(GroupData::enumerate(&[swap, c], 100).unwrap());
        assert_eq!(g.order(), 6);
        let gp = g.gplus();
        assert_eq!(gp.order(), 3);
        let t = g.transversal(&gp).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0], 0);
        assert_eq!(g.transversal(&g.whole()).unwrap(), vec![0]);
    }

    #[test]
    fn pprime_group_has_trivial_gplus() {
        let f = Field::new(5, 1).unwrap();
        let d = Mat::from_vec(&f, 2, 2, vec![2, 0, 0, 3]).unwrap();
        let g = Arc::new(GroupData::enumerate(&[d], 100).unwrap());
        assert_eq!(g.gplus().order(), 1);
    }

    #[test]
    fn walker_checks_homomorphism() {
        let g = sl2(5);
        let images = g.gens().to_vec();
        let peak = walk(&g, &mut HomCheck { images: &images, dim: 2 }, DEFAULT_MEMORY_CAP).unwrap();
        assert!(peak > 0);
        let f = g.field().clone();
        let bad = [images[0].clone(), Mat::identity(&f, 2)];
        assert!(matches!(
            walk(&g, &mut HomCheck { images: &bad, dim: 2 }, DEFAULT_MEMORY_CAP),
            Err(Error::NotHomomorphism { .. })
        ));
        assert_eq!(walk(&g, &mut HomCheck { images: &images, dim: 2 }, 10), Err(Error::MemoryCap(10)));
    }
}
