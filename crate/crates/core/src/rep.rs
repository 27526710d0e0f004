//! Representations of an enumerated group, given by generator images, and
//! the standard constructions on them.

use alloc::{
    collections::BTreeMap,
    format,
    string::String,
    sync::Arc,
    vec,
    vec::Vec,
};
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::group::{walk, GroupData, HomCheck, Images, SubgroupRef, DEFAULT_MEMORY_CAP};
use crate::mat::Mat;
use crate::subspace::Echelon;

#[derive(Clone)]
pub struct Rep {
    group: Arc<GroupData>,
    dim: usize,
    images: Vec<Mat>,
    label: String,
}

impl core::fmt::Debug for Rep {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Rep({}, dim {})", self.label, self.dim)
    }
}

impl Rep {
    /// Representation with the given generator images, verified to be a
    /// homomorphism on every non-tree Cayley edge.
    pub fn from_gens(group: &Arc<GroupData>, images: Vec<Mat>, label: impl Into<String>) -> Result<Rep> {
        Rep::from_gens_capped(group, images, label, DEFAULT_MEMORY_CAP)
    }

    pub fn from_gens_capped(group: &Arc<GroupData>, images: Vec<Mat>, label: impl Into<String>, mem_cap: usize) -> Result<Rep> {
        let rep = Rep::unchecked(group, images, label)?;
        for m in &rep.images {
            if !m.is_invertible() {
                return Err(Error::Singular);
            }
        }
        walk(group, &mut HomCheck { images: &rep.images, dim: rep.dim }, mem_cap)?;
        Ok(rep)
    }

    /// Shape checks only; for constructions that are homomorphisms by design.
    pub(crate) fn unchecked(group: &Arc<GroupData>, images: Vec<Mat>, label: impl Into<String>) -> Result<Rep> {
        if images.len() != group.num_gens() {
            return Err(Error::Dimension(format!(
                "{} images for {} generators",
                images.len(),
                group.num_gens()
            )));
        }
        let dim = images[0].rows();
        for m in &images {
            if !m.field().same(group.field()) {
                return Err(Error::FieldMismatch);
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dimension("generator images must be square of one size".into()));
            }
        }
        Ok(Rep { group: group.clone(), dim, images, label: label.into() })
    }

    pub fn natural(group: &Arc<GroupData>) -> Rep {
        Rep { group: group.clone(), dim: group.degree(), images: group.gens().to_vec(), label: "natural".into() }
    }

    pub fn trivial(group: &Arc<GroupData>, n: usize) -> Rep {
        let f = group.field();
        Rep {
            group: group.clone(),
            dim: n,
            images: vec![Mat::identity(f, n); group.num_gens()],
            label: format!("trivial({n})"),
        }
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn field(&self) -> &Arc<Field> {
        self.group.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Rep {
        self.label = label.into();
        self
    }

    pub(crate) fn same_group(&self, other: &Rep) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Image of the element with the given index, multiplied out along its word.
    pub fn image_of(&self, e: usize) -> Mat {
        let mut m = Mat::identity(self.field(), self.dim);
        for s in self.group.word(e) {
            m = m.mul(&self.images[s]).expect("shapes agree");
        }
        m
    }

    /// Call `f` on every element index with its image, in index order, until
    /// it breaks.
    pub fn for_each_image(&self, mem_cap: usize, f: impl FnMut(usize, &Mat) -> Result<ControlFlow<()>>) -> Result<()> {
        walk(&self.group, &mut Images { images: &self.images, dim: self.dim, f }, mem_cap)?;
        Ok(())
    }

    fn map_images(&self, label: String, f: impl Fn(&Mat) -> Result<Mat>) -> Result<Rep> {
        let images = self.images.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Rep { group: self.group.clone(), dim: images[0].rows(), images, label })
    }

    /// Contragredient: `g -> rho(g)^{-T}`.
    pub fn dual(&self) -> Result<Rep> {
        self.map_images(format!("dual({})", self.label), |m| Ok(m.inverse()?.transpose()))
    }

    pub fn tensor(&self, other: &Rep) -> Result<Rep> {
        self.same_group(other)?;
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a.kron(b)).collect::<Result<Vec<_>>>()?;
        Rep::unchecked(&self.group, images, format!("tensor({},{})", self.label, other.label))
    }

    pub fn dsum(&self, other: &Rep) -> Result<Rep> {
        self.same_group(other)?;
        let f = self.field().clone();
        let images = self.images.iter().zip(&other.images).map(|(a, b)| Mat::block_diag(&f, &[a, b])).collect();
        Rep::unchecked(&self.group, images, format!("dsum({},{})", self.label, other.label))
    }

    /// Entrywise Frobenius `x -> x^(p^i)` on the generator images.
    pub fn twist(&self, i: u32) -> Result<Rep> {
        self.map_images(format!("twist({},{i})", self.label), |m| Ok(m.frobenius(i)))
    }

    /// `Sym^b`, on graded-lex monomials in the basis vectors (for a 2-dim
    /// input: `X^(b-j) Y^j`, j = 0..b).
    pub fn sym(&self, b: usize) -> Result<Rep> {
        let n = self.dim;
        let monos = monomials(n, b);
        let index: BTreeMap<Vec<u8>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let f = self.field().clone();
        self.map_images(format!("sym({b},{})", self.label), |g| {
            let mut out = Mat::zeros(&f, monos.len(), monos.len());
            for (col, alpha) in monos.iter().enumerate() {
                // prod_j (g e_j)^alpha_j with g e_j = sum_i g_ij x_i
                let mut poly: BTreeMap<Vec<u8>, Fe> = BTreeMap::new();
                poly.insert(vec![0; n], 1);
                for (j, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        let mut next: BTreeMap<Vec<u8>, Fe> = BTreeMap::new();
                        for (mono, &c) in &poly {
                            for i in 0..n {
                                let gij = g.get(i, j);
                                if gij == 0 {
                                    continue;
                                }
                                let mut m2 = mono.clone();
                                m2[i] += 1;
                                let e = next.entry(m2).or_insert(0);
                                *e = f.add(*e, f.mul(c, gij));
                            }
                        }
                        poly = next;
                    }
                }
                for (mono, c) in poly {
                    out.set(index[&mono], col, c);
                }
            }
            Ok(out)
        })
    }

    /// Exterior square on `e_i ^ e_j`, i < j, lexicographic.
    pub fn wedge2(&self) -> Result<Rep> {
        let n = self.dim;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let f = self.field().clone();
        self.map_images(format!("wedge2({})", self.label), |g| {
            Ok(Mat::from_fn(&f, pairs.len(), pairs.len(), |r, c| {
                let (k, l) = pairs[r];
                let (i, j) = pairs[c];
                f.sub(f.mul(g.get(k, i), g.get(l, j)), f.mul(g.get(l, i), g.get(k, j)))
            }))
        })
    }

    /// `End(V)` under conjugation: vec of `X` row-major, `X -> rho X rho^{-1}`.
    pub fn ad(&self) -> Result<Rep> {
        self.map_images(format!("ad({})", self.label), |m| m.kron(&m.inverse()?.transpose()))
    }

    /// `ad` modulo the line of the identity endomorphism.
    pub fn adq(&self) -> Result<Rep> {
        let ad = self.ad()?;
        let n = self.dim;
        let mut id = vec![0; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        Ok(ad.quot(&[id])?.with_label(format!("adq({})", self.label)))
    }

    /// `Hom(w, v)` with `X -> rho_v X rho_w^{-1}`, X of shape dim v x dim w
    /// flattened row-major.
    pub fn hom_module(v: &Rep, w: &Rep) -> Result<Rep> {
        v.same_group(w)?;
        let images = v
            .images
            .iter()
            .zip(&w.images)
            .map(|(a, b)| a.kron(&b.inverse()?.transpose()))
            .collect::<Result<Vec<_>>>()?;
        Rep::unchecked(&v.group, images, format!("hom({},{})", w.label, v.label))
    }

    /// Submodule spanned by `basis`, in the given basis.
    pub fn sub(&self, basis: &[Vec<Fe>]) -> Result<Rep> {
        let k = basis.len();
        let solver = CoordSolver::new(self.field(), self.dim, basis)?;
        let f = self.field().clone();
        self.map_images(format!("sub({},{k})", self.label), |g| {
            let mut out = Mat::zeros(&f, k, k);
            for (c, b) in basis.iter().enumerate() {
                let coords = solver.solve(&g.mul_vec(b)).ok_or(Error::NotInvariant)?;
                for (r, x) in coords.into_iter().enumerate() {
                    out.set(r, c, x);
                }
            }
            Ok(out)
        })
    }

    /// Quotient by the span of `basis`; the quotient basis is the images of
    /// the standard vectors at the non-pivot columns of its reduced form.
    pub fn quot(&self, basis: &[Vec<Fe>]) -> Result<Rep> {
        let n = self.dim;
        let f = self.field().clone();
        for b in basis {
            if b.len() != n {
                return Err(Error::Dimension("basis vector length differs from module dimension".into()));
            }
        }
        let sub = Echelon::from_vectors(&f, n, basis.iter().cloned());
        let (rows, pivots) = sub.rref_rows();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let reduce = |v: &mut Vec<Fe>| {
            for (r, &p) in rows.iter().zip(&pivots) {
                let c = v[p];
                if c != 0 {
                    f.axmy(v, c, r);
                }
            }
        };
        let f2 = f.clone();
        self.map_images(format!("quot({},{})", self.label, basis.len()), |g| {
            for r in &rows {
                let mut w = g.mul_vec(r);
                reduce(&mut w);
                if w.iter().any(|&x| x != 0) {
                    return Err(Error::NotInvariant);
                }
            }
            let mut out = Mat::zeros(&f2, free.len(), free.len());
            for (c, &j) in free.iter().enumerate() {
                let mut w = g.column(j);
                reduce(&mut w);
                for (r, &i) in free.iter().enumerate() {
                    out.set(r, c, w[i]);
                }
            }
            Ok(out)
        })
    }

    /// Induction from a subgroup. `w` must be a representation of the
    /// subgroup's own enumeration `hgroup`, whose generators are the parent
    /// elements listed in `h.gens`. Basis: (coset representative, inner index).
    pub fn induce(group: &Arc<GroupData>, h: &SubgroupRef, hgroup: &Arc<GroupData>, w: &Rep) -> Result<Rep> {
        if !Arc::ptr_eq(&h.parent, group) || !Arc::ptr_eq(w.group(), hgroup) {
            return Err(Error::GroupMismatch);
        }
        let (reps, coset_of) = group.cosets(h)?;
        let m = reps.len();
        let d = w.dim;
        let f = group.field().clone();
        let mut images = Vec::with_capacity(group.num_gens());
        for s in 0..group.num_gens() {
            let sg = group.cayley(0, s);
            let mut out = Mat::zeros(&f, m * d, m * d);
            for (i, &ti) in reps.iter().enumerate() {
                let x = group.mul(sg, ti);
                let j = coset_of[x];
                let hx = group.mul(group.inverse(reps[j]), x);
                let hidx = hgroup
                    .find(&group.elem(hx))
                    .ok_or_else(|| Error::Dimension("subgroup enumeration does not contain a coset element".into()))?;
                out.set_block(j * d, i * d, &w.image_of(hidx));
            }
            images.push(out);
        }
        Rep::unchecked(group, images, format!("induce({})", w.label))
    }

    /// Same module after extending scalars; `group` must be the base change
    /// of this representation's group.
    pub fn base_change(&self, group: &Arc<GroupData>) -> Result<Rep> {
        let big = group.field().clone();
        let emb = self.field().embedding_into(&big)?;
        let images = self.images.iter().map(|m| m.map_entries(&big, |x| emb[x as usize])).collect();
        Rep::unchecked(group, images, self.label.clone())
    }

    /// `P rho P^{-1}`.
    pub fn conjugate(&self, p: &Mat) -> Result<Rep> {
        let pinv = p.inverse()?;
        self.map_images(self.label.clone(), |m| p.mul(m)?.mul(&pinv))
    }

    /// Re-run the homomorphism check on this representation.
    pub fn verify(&self, mem_cap: usize) -> Result<()> {
        walk(&self.group, &mut HomCheck { images: &self.images, dim: self.dim }, mem_cap)?;
        Ok(())
    }
}

/// Exponent vectors of total degree `b` in `n` variables, graded-lex order
/// (x0^b first).
fn monomials(n: usize, b: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() + 1 == n {
            cur.push(left as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a as u8);
            rec(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, b, &mut Vec::new(), &mut out);
    out
}

/// Coordinates with respect to a fixed, linearly independent list of vectors.
pub(crate) struct CoordSolver {
    rows: Vec<Vec<Fe>>,
    combos: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
    field: Arc<Field>,
}

impl CoordSolver {
    pub fn new(field: &Arc<Field>, width: usize, basis: &[Vec<Fe>]) -> Result<CoordSolver> {
        let k = basis.len();
        let mut aug = Mat::zeros(field, k, width + k);
        for (i, b) in basis.iter().enumerate() {
            if b.len() != width {
                return Err(Error::Dimension("basis vector length differs from module dimension".into()));
            }
            aug.row_mut(i)[..width].copy_from_slice(b);
            aug.set(i, width + i, 1);
        }
        let r = aug.rref();
        if r.pivots.iter().filter(|&&p| p < width).count() < k {
            return Err(Error::Dimension("basis vectors are linearly dependent".into()));
        }
        let rows = (0..k).map(|i| r.reduced.row(i)[..width].to_vec()).collect();
        let combos = (0..k).map(|i| r.reduced.row(i)[width..].to_vec()).collect();
        Ok(CoordSolver { rows, combos, pivots: r.pivots, field: field.clone() })
    }

    pub fn solve(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        let f = &self.field;
        let mut rest = v.to_vec();
        let mut out = vec![0; self.rows.len()];
        for ((row, combo), &p) in self.rows.iter().zip(&self.combos).zip(&self.pivots) {
            let c = rest[p];
            if c != 0 {
                f.axmy(&mut rest, c, row);
                f.axpy(&mut out, c, combo);
            }
        }
        rest.iter().all(|&x| x == 0).then_some(out)
    }
}

impl GroupData {
    /// Base change of the whole group along the embedding into `big`. The
    /// enumeration is deterministic, so indices agree with the original.
    pub fn base_change(&self, big: &Arc<Field>, cap: usize) -> Result<GroupData> {
        let emb = self.field().embedding_into(big)?;
        let gens: Vec<Mat> = self.gens().iter().map(|m| m.map_entries(big, |x| emb[x as usize])).collect();
        GroupData::enumerate(&gens, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    pub(crate) fn sl2(p: u32) -> Arc<GroupData> {
        let f = Field::new(p, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        let w = Mat::from_vec(&f, 2, 2, vec![0, 1, f.from_int(-1), 0]).unwrap();
        Arc::new(GroupData::enumerate(&[u, w], DEFAULT_CAP).unwrap())
    }

    #[test]
    fn constructions_are_homomorphisms() {
        let g = sl2(5);
        let v = Rep::natural(&g);
        for r in [
            v.dual().unwrap(),
            v.tensor(&v).unwrap(),
            v.sym(4).unwrap(),
            v.sym(2).unwrap().wedge2().unwrap(),
            v.ad().unwrap(),
            v.adq().unwrap(),
            v.dsum(&Rep::trivial(&g, 1)).unwrap(),
            v.twist(1).unwrap(),
        ] {
            r.verify(DEFAULT_MEMORY_CAP).unwrap();
        }
        assert_eq!(v.sym(4).unwrap().dim(), 5);
        assert_eq!(v.adq().unwrap().dim(), 3);
        assert_eq!(v.sym(2).unwrap().wedge2().unwrap().dim(), 3);
        assert_eq!(v.sym(2).unwrap().sym(2).unwrap().dim(), 6);
    }

    #[test]
    fn from_gens_rejects_bad_images() {
        let g = sl2(5);
        let f = g.field().clone();
        let bad = vec![g.gens()[0].clone(), Mat::identity(&f, 2)];
        assert!(matches!(Rep::from_gens(&g, bad, "bad"), Err(Error::NotHomomorphism { .. })));
        assert!(Rep::from_gens(&g, vec![Mat::identity(&f, 3)], "short").is_err());
        Rep::from_gens(&g, vec![Mat::identity(&f, 3); 2], "triv").unwrap();
    }

    #[test]
    fn sub_and_quot() {
        let g = sl2(5);
        let v = Rep::natural(&g);
        let d = v.dsum(&v).unwrap();
        let s = d.sub(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(s.images()[0], v.images()[0]);
        let q = d.quot(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(q.images()[1], v.images()[1]);
        assert_eq!(d.sub(&[vec![1, 0, 0, 0]]).unwrap_err(), Error::NotInvariant);
        assert_eq!(d.quot(&[vec![1, 0, 0, 0]]).unwrap_err(), Error::NotInvariant);
    }

    #[test]
    fn induce_dimension() {
        let g = sl2(5);
        let h = g.subgroup(&[g.cayley(0, 0)]);
        let hg = Arc::new(h.enumerate(DEFAULT_CAP).unwrap());
        let w = Rep::trivial(&hg, 1);
        let ind = Rep::induce(&g, &h, &hg, &w).unwrap();
        assert_eq!(ind.dim(), 24);
        ind.verify(DEFAULT_MEMORY_CAP).unwrap();
        let w2 = Rep::natural(&hg);
        let ind2 = Rep::induce(&g, &h, &hg, &w2).unwrap();
        assert_eq!(ind2.dim(), 48);
        ind2.verify(DEFAULT_MEMORY_CAP).unwrap();
    }

    #[test]
    fn monomial_order_for_two_variables() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 2).len(), 6);
    }
}
