//! Irreducibility, composition factors, homomorphism spaces, socle series
//! and indecomposability of representations.

use alloc::{format, string::String, vec, vec::Vec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::mat::Mat;
use crate::poly::Poly;
use crate::rep::{CoordSolver, Rep};
use crate::subspace::{spin, Echelon};

/// Random attempts before falling back to deterministic enumeration.
pub const RANDOM_ATTEMPTS: usize = 64;
const DETERMINISTIC_ATTEMPTS: usize = 4096;
const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper nonzero invariant subspace.
    Reducible(Vec<Vec<Fe>>),
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

/// Source of algebra elements: seeded random sums of short words, then a
/// deterministic enumeration.
struct AlgebraElements<'a> {
    images: &'a [Mat],
    rng: ChaCha8Rng,
    tried: usize,
    words: Vec<Mat>,
}

impl<'a> AlgebraElements<'a> {
    fn new(v: &'a Rep, seed: u64) -> Self {
        AlgebraElements { images: v.images(), rng: ChaCha8Rng::seed_from_u64(seed), tried: 0, words: Vec::new() }
    }

    fn random_word(&mut self) -> Mat {
        let len = self.rng.random_range(1..=4);
        let mut m = self.images[self.rng.random_range(0..self.images.len())].clone();
        for _ in 1..len {
            m = m.mul(&self.images[self.rng.random_range(0..self.images.len())]).expect("square");
        }
        m
    }

    /// Words in shortlex order, generated lazily.
    fn word(&mut self, i: usize) -> Mat {
        let g = self.images.len();
        let f = self.images[0].field().clone();
        let n = self.images[0].rows();
        if self.words.is_empty() {
            self.words.push(Mat::identity(&f, n));
        }
        while self.words.len() <= i {
            let k = self.words.len();
            let parent = (k - 1) / g;
            let s = (k - 1) % g;
            let w = self.words[parent].mul(&self.images[s]).expect("square");
            self.words.push(w);
        }
        self.words[i].clone()
    }

    fn next(&mut self) -> Option<Mat> {
        let f = self.images[0].field().clone();
        let q = f.order() as usize;
        let t = self.tried;
        self.tried += 1;
        if t < RANDOM_ATTEMPTS {
            let mut m = self.random_word();
            for _ in 0..2 {
                let c = self.rng.random_range(1..q) as Fe;
                let w = self.random_word();
                m.axpy(c, &w);
            }
            return Some(m);
        }
        let k = t - RANDOM_ATTEMPTS;
        if k >= DETERMINISTIC_ATTEMPTS {
            return None;
        }
        // base-q digits of k+1 as coefficients on the first words
        let mut m = self.word(1);
        let mut x = k + 1;
        let mut i = 2;
        while x > 0 {
            let c = (x % q) as Fe;
            if c != 0 {
                let w = self.word(i);
                m.axpy(c, &w);
            }
            x /= q;
            i += 1;
        }
        Some(m)
    }
}

fn transposes(images: &[Mat]) -> Vec<Mat> {
    images.iter().map(|m| m.transpose()).collect()
}

/// Norton's irreducibility test.
pub fn is_irreducible(v: &Rep, seed: u64) -> Result<Irreducibility> {
    let n = v.dim();
    if n == 0 {
        return Err(Error::Dimension("irreducibility of the zero module".into()));
    }
    if n == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let f = v.field().clone();
    let tr = transposes(v.images());
    let mut elems = AlgebraElements::new(v, seed);
    while let Some(theta) = elems.next() {
        let cp = theta.charpoly()?;
        let mut factors: Vec<Poly> = cp.factor()?.into_iter().map(|(p, _)| p).collect();
        factors.sort_by_key(|p| p.degree());
        for fac in factors.iter().take(3) {
            let deg = fac.degree().unwrap_or(0);
            let ft = theta.eval_poly(fac)?;
            let null = ft.nullspace();
            let tries = if null.len() == deg { 1 } else { null.len().min(3) };
            for x in null.iter().take(tries) {
                let s = spin(&f, n, [x.clone()], v.images());
                if s.dim() < n {
                    return Ok(Irreducibility::Reducible(s.rows().to_vec()));
                }
            }
            if null.len() == deg {
                let tnull = ft.transpose().nullspace();
                let s = spin(&f, n, [tnull[0].clone()], &tr);
                if s.dim() < n {
                    return Ok(Irreducibility::Reducible(s.annihilator()));
                }
                return Ok(Irreducibility::Irreducible);
            }
        }
    }
    Err(Error::Uncertified(format!("no Norton certificate found for {}", v.label())))
}

/// Basis of `Hom_G(v, w)`: matrices `X` (dim w x dim v) with
/// `rho_w(s) X = X rho_v(s)` for every generator.
pub fn hom_space(v: &Rep, w: &Rep) -> Result<Vec<Mat>> {
    v.same_group(w)?;
    let (dv, dw) = (v.dim(), w.dim());
    let f = v.field().clone();
    let width = dv * dw;
    let mut eqs = Echelon::new(&f, width);
    for (a, b) in w.images().iter().zip(v.images()) {
        // row (i, j) of rho_w X - X rho_v
        for i in 0..dw {
            for j in 0..dv {
                let mut row = vec![0; width];
                for k in 0..dw {
                    let c = a.get(i, k);
                    if c != 0 {
                        row[k * dv + j] = f.add(row[k * dv + j], c);
                    }
                }
                for k in 0..dv {
                    let c = b.get(k, j);
                    if c != 0 {
                        row[i * dv + k] = f.sub(row[i * dv + k], c);
                    }
                }
                eqs.insert(row);
                if eqs.is_full() {
                    return Ok(Vec::new());
                }
            }
        }
    }
    Ok(eqs
        .annihilator()
        .into_iter()
        .map(|x| Mat::from_vec(&f, dw, dv, x).expect("shape"))
        .collect())
}

/// Enumerate the nonzero combinations of `basis` up to scalars, calling `f`
/// until it returns true. `None` when the space is too large.
fn projective_search(basis: &[Mat], mut f: impl FnMut(&Mat) -> Result<bool>) -> Result<Option<Mat>> {
    let r = basis.len();
    let field = basis[0].field().clone();
    let q = field.order() as u64;
    if q.checked_pow(r as u32).is_none_or(|t| t > EXHAUSTIVE_LIMIT) {
        return Err(Error::Uncertified(format!("space of dimension {r} over GF({q}) is too large to enumerate")));
    }
    // normalized: leading nonzero coordinate equal to 1
    for lead in 0..r {
        let rest = r - lead - 1;
        let count = q.pow(rest as u32);
        for k in 0..count {
            let mut m = basis[lead].clone();
            let mut x = k;
            for j in lead + 1..r {
                let c = (x % q) as Fe;
                x /= q;
                if c != 0 {
                    m.axpy(c, &basis[j]);
                }
            }
            if f(&m)? {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

/// An invertible element of the span of `basis`, if one exists.
fn find_invertible(basis: &[Mat], seed: u64) -> Result<Option<Mat>> {
    if basis.is_empty() || !basis[0].is_square() {
        return Ok(None);
    }
    if let Some(b) = basis.iter().find(|b| b.is_invertible()) {
        return Ok(Some(b.clone()));
    }
    let f = basis[0].field().clone();
    let q = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let mut m = Mat::zeros(&f, basis[0].rows(), basis[0].cols());
        for b in basis {
            m.axpy(rng.random_range(0..q) as Fe, b);
        }
        if m.is_invertible() {
            return Ok(Some(m));
        }
    }
    projective_search(basis, |m| Ok(m.is_invertible()))
}

/// Isomorphism test: `Hom(v, w)` contains an invertible map.
pub fn is_isomorphic(v: &Rep, w: &Rep, seed: u64) -> Result<bool> {
    if v.dim() != w.dim() {
        return Ok(false);
    }
    Ok(find_invertible(&hom_space(v, w)?, seed)?.is_some())
}

/// Isomorphism between two modules, as an invertible map `v -> w`.
pub fn isomorphism(v: &Rep, w: &Rep, seed: u64) -> Result<Option<Mat>> {
    if v.dim() != w.dim() {
        return Ok(None);
    }
    find_invertible(&hom_space(v, w)?, seed)
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub rep: Rep,
    pub multiplicity: usize,
    /// Name of the matching simple from a supplied list, if any.
    pub label: Option<String>,
}

impl Factor {
    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("dim{}", self.rep.dim()))
    }
}

pub type FactorList = Vec<Factor>;

pub fn total_dim(factors: &[Factor]) -> usize {
    factors.iter().map(|f| f.multiplicity * f.rep.dim()).sum()
}

/// Composition factors with multiplicities, grouped up to isomorphism and
/// listed in order of first appearance from the bottom of a composition
/// series.
pub fn chop(v: &Rep, seed: u64) -> Result<FactorList> {
    chop_labeled(v, seed, &[])
}

pub fn chop_labeled(v: &Rep, seed: u64, names: &[(String, Rep)]) -> Result<FactorList> {
    let mut pieces = Vec::new();
    split_into(v, seed, &mut pieces)?;
    let mut out: FactorList = Vec::new();
    'next: for p in pieces {
        for f in out.iter_mut() {
            if is_isomorphic(&f.rep, &p, seed)? {
                f.multiplicity += 1;
                continue 'next;
            }
        }
        out.push(Factor { label: match_name(&p, names, seed)?, rep: p, multiplicity: 1 });
    }
    Ok(out)
}

fn match_name(p: &Rep, names: &[(String, Rep)], seed: u64) -> Result<Option<String>> {
    for (name, s) in names {
        if s.dim() == p.dim() && is_isomorphic(s, p, seed)? {
            return Ok(Some(name.clone()));
        }
    }
    Ok(None)
}

fn split_into(v: &Rep, seed: u64, out: &mut Vec<Rep>) -> Result<()> {
    if v.dim() == 0 {
        return Ok(());
    }
    match is_irreducible(v, seed)? {
        Irreducibility::Irreducible => out.push(v.clone()),
        Irreducibility::Reducible(basis) => {
            split_into(&v.sub(&basis)?, seed, out)?;
            split_into(&v.quot(&basis)?, seed, out)?;
        }
    }
    Ok(())
}

/// Socle of `v`, given representatives of the isomorphism types of its
/// composition factors.
pub fn socle(v: &Rep, simples: &[Rep]) -> Result<Echelon> {
    let mut e = Echelon::new(v.field(), v.dim());
    for s in simples {
        for x in hom_space(s, v)? {
            for j in 0..x.cols() {
                e.insert(x.column(j));
            }
        }
    }
    Ok(e)
}

/// Socle layers, bottom first, each as a list of simple factors.
pub fn socle_series(v: &Rep, seed: u64, names: &[(String, Rep)]) -> Result<Vec<FactorList>> {
    let simples: Vec<Rep> = chop(v, seed)?.into_iter().map(|f| f.rep).collect();
    let mut layers = Vec::new();
    let mut cur = v.clone();
    while cur.dim() > 0 {
        let soc = socle(&cur, &simples)?;
        if soc.dim() == 0 {
            return Err(Error::Uncertified("empty socle of a nonzero module".into()));
        }
        let layer = cur.sub(soc.rows())?;
        layers.push(chop_labeled(&layer, seed, names)?);
        cur = cur.quot(soc.rows())?;
    }
    Ok(layers)
}

/// Radical layers, head first: the duals of the socle layers of the dual.
pub fn radical_series(v: &Rep, seed: u64, names: &[(String, Rep)]) -> Result<Vec<FactorList>> {
    let dual_names: Vec<(String, Rep)> =
        names.iter().map(|(n, r)| Ok((n.clone(), r.dual()?))).collect::<Result<_>>()?;
    let layers = socle_series(&v.dual()?, seed, &dual_names)?;
    layers
        .into_iter()
        .map(|layer| {
            layer
                .into_iter()
                .map(|f| Ok(Factor { rep: f.rep.dual()?, multiplicity: f.multiplicity, label: f.label }))
                .collect()
        })
        .collect()
}

/// `End_G(v)` with a basis of commuting matrices.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub basis: Vec<Mat>,
}

impl EndAlgebra {
    pub fn of(v: &Rep) -> Result<EndAlgebra> {
        Ok(EndAlgebra { basis: hom_space(v, v)? })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Indecomposability {
    Indecomposable,
    /// Bases of indecomposable summands whose direct sum is the module.
    Decomposable(Vec<Vec<Vec<Fe>>>),
}

impl Indecomposability {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self, Indecomposability::Indecomposable)
    }
}

pub const MAX_CERTIFIED_END_DIM: usize = 6;

/// Split `v` by an endomorphism whose minimal polynomial has coprime factors.
fn split_by(v: &Rep, x: &Mat) -> Result<Option<(Vec<Vec<Fe>>, Vec<Vec<Fe>>)>> {
    let mp = x.minpoly()?;
    let factors = mp.factor()?;
    if factors.len() < 2 {
        return Ok(None);
    }
    let (g, e) = &factors[0];
    let mut ge = Poly::one(v.field());
    for _ in 0..*e {
        ge = ge.mul(g);
    }
    let rest = mp.div_exact(&ge);
    let k1 = x.eval_poly(&ge)?.nullspace();
    let k2 = x.eval_poly(&rest)?.nullspace();
    Ok(Some((k1, k2)))
}

fn is_primary(x: &Mat) -> Result<bool> {
    Ok(x.minpoly()?.factor()?.len() == 1)
}

/// Indecomposability through the endomorphism ring: a non-primary
/// endomorphism splits the module; otherwise locality is certified either by
/// exhibiting the radical as a nilpotent ideal of codimension one, or by
/// checking every element of the ring.
pub fn is_indecomposable(v: &Rep, seed: u64) -> Result<Indecomposability> {
    let end = EndAlgebra::of(v)?;
    let r = end.dim();
    if r > MAX_CERTIFIED_END_DIM {
        return Err(Error::Uncertified(format!("endomorphism ring of dimension {r} exceeds {MAX_CERTIFIED_END_DIM}")));
    }
    if r <= 1 {
        return Ok(Indecomposability::Indecomposable);
    }
    let f = v.field().clone();
    let q = f.order();
    let mut candidates = end.basis.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let mut m = Mat::zeros(&f, v.dim(), v.dim());
        for b in &end.basis {
            m.axpy(rng.random_range(0..q) as Fe, b);
        }
        candidates.push(m);
    }
    for x in &candidates {
        if let Some((k1, k2)) = split_by(v, x)? {
            return decompose(v, k1, k2, seed);
        }
    }
    if local_certificate(&end)? {
        return Ok(Indecomposability::Indecomposable);
    }
    let mut found = None;
    projective_search(&end.basis, |m| {
        if is_primary(m)? {
            Ok(false)
        } else {
            found = Some(m.clone());
            Ok(true)
        }
    })?;
    match found {
        Some(x) => {
            let (k1, k2) = split_by(v, &x)?.expect("non-primary element splits");
            decompose(v, k1, k2, seed)
        }
        None => Ok(Indecomposability::Indecomposable),
    }
}

fn decompose(v: &Rep, k1: Vec<Vec<Fe>>, k2: Vec<Vec<Fe>>, seed: u64) -> Result<Indecomposability> {
    let mut parts = Vec::new();
    for k in [k1, k2] {
        let sub = v.sub(&k)?;
        match is_indecomposable(&sub, seed)? {
            Indecomposability::Indecomposable => parts.push(k),
            Indecomposability::Decomposable(inner) => {
                for b in inner {
                    let lifted = b
                        .iter()
                        .map(|c| {
                            let mut x = vec![0; v.dim()];
                            for (ci, ki) in c.iter().zip(&k) {
                                v.field().axpy(&mut x, *ci, ki);
                            }
                            x
                        })
                        .collect();
                    parts.push(lifted);
                }
            }
        }
    }
    Ok(Indecomposability::Decomposable(parts))
}

/// Each basis element is `lambda I + n` with `n` nilpotent, and the span of
/// the nilpotent parts is closed under multiplication.
fn local_certificate(end: &EndAlgebra) -> Result<bool> {
    let b0 = &end.basis[0];
    let f = b0.field().clone();
    let n = b0.rows();
    let mut nil = Vec::new();
    for b in &end.basis {
        let mp = b.minpoly()?;
        let fac = mp.factor()?;
        if fac.len() != 1 || fac[0].0.degree() != Some(1) {
            return Ok(false);
        }
        let lambda = f.neg(fac[0].0.coeffs()[0]);
        nil.push(b.sub(&Mat::scalar(&f, n, lambda))?);
    }
    let width = n * n;
    let j = Echelon::from_vectors(&f, width, nil.iter().map(|m| m.data().to_vec()));
    let jmats: Vec<Mat> = j.rows().iter().map(|r| Mat::from_vec(&f, n, n, r.clone()).expect("shape")).collect();
    // closure under products, and J^k = 0
    let mut power = jmats.clone();
    for _ in 0..=n {
        if power.is_empty() {
            return Ok(true);
        }
        let mut next = Echelon::new(&f, width);
        for a in &power {
            for b in &jmats {
                let p = a.mul(b)?;
                if !j.contains(p.data()) {
                    return Ok(false);
                }
                next.insert(p.into_data());
            }
        }
        power = next.rows().iter().map(|r| Mat::from_vec(&f, n, n, r.clone()).expect("shape")).collect();
    }
    Ok(power.is_empty())
}

/// Coordinates of the vectors of `sub` with respect to `basis`.
pub fn coordinates_in(v: &Rep, basis: &[Vec<Fe>], sub: &[Vec<Fe>]) -> Result<Vec<Vec<Fe>>> {
    let solver = CoordSolver::new(v.field(), v.dim(), basis)?;
    sub.iter().map(|x| solver.solve(x).ok_or(Error::NotInvariant)).collect()
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
    fn irreducibility_sl2_5() {
        let g = sl2(5);
        let v = Rep::natural(&g);
        for a in 1..5 {
            assert!(is_irreducible(&v.sym(a).unwrap(), 0).unwrap().is_irreducible(), "L({a})");
        }
        let d = v.dsum(&v).unwrap();
        match is_irreducible(&d, 0).unwrap() {
            Irreducibility::Reducible(w) => {
                assert!(!w.is_empty() && w.len() < 4);
                d.sub(&w).unwrap();
            }
            Irreducibility::Irreducible => panic!("direct sum reported irreducible"),
        }
    }

    #[test]
    fn chop_and_hom() {
        let g = sl2(5);
        let v = Rep::natural(&g);
        let t = v.tensor(&v).unwrap();
        let fl = chop(&t, 0).unwrap();
        let mut dims: Vec<usize> = fl.iter().map(|f| f.rep.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 3]);
        assert_eq!(chop(&Rep::trivial(&g, 3), 0).unwrap()[0].multiplicity, 3);
        assert_eq!(hom_space(&v, &v).unwrap().len(), 1);
        assert_eq!(hom_space(&v, &v.sym(2).unwrap()).unwrap().len(), 0);
        assert!(is_isomorphic(&v, &v.dual().unwrap(), 0).unwrap());
    }

    #[test]
    fn socle_layers_of_semisimple() {
        let g = sl2(5);
        let v = Rep::natural(&g);
        let m = Rep::trivial(&g, 1).dsum(&v.sym(2).unwrap()).unwrap();
        let layers = socle_series(&m, 0, &[]).unwrap();
        assert_eq!(layers.len(), 1);
        assert_eq!(total_dim(&layers[0]), 4);
    }

    #[test]
    fn indecomposability_of_sums() {
        let g = sl2(5);
        let v = Rep::natural(&g);
        assert!(is_indecomposable(&v, 0).unwrap().is_indecomposable());
        let d = Rep::trivial(&g, 1).dsum(&v).unwrap();
        match is_indecomposable(&d, 0).unwrap() {
            Indecomposability::Decomposable(parts) => {
                let mut dims: Vec<usize> = parts.iter().map(|p| p.len()).collect();
                dims.sort();
                assert_eq!(dims, vec![1, 2]);
            }
            _ => panic!("split module reported indecomposable"),
        }
        match is_indecomposable(&v.dsum(&v).unwrap(), 0).unwrap() {
            Indecomposability::Decomposable(parts) => assert_eq!(parts.len(), 2),
            _ => panic!("V + V reported indecomposable"),
        }
    }
}
