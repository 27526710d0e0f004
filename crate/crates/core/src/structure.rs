//! Extensions from cocycles, invariant bilinear forms, projectivity and
//! Loewy structure.

use alloc::{format, string::String, vec::Vec};

use crate::cohomology::{ext1_capped, CocycleSpace};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::DEFAULT_MEMORY_CAP;
use crate::mat::Mat;
use crate::meataxe::{hom_space, is_irreducible, is_isomorphic, radical_series, socle_series, FactorList};
use crate::rep::Rep;
use crate::subspace::Echelon;

/// The extension with submodule `v` and quotient `w` defined by a cocycle
/// of `ext1(v, w)`. Generator images are `[[rho_v(s), X_s rho_w(s)], [0, rho_w(s)]]`
/// where `X_s` is the cocycle value on generator `s`.
pub fn build_extension(v: &Rep, w: &Rep, cocycle: &[Fe]) -> Result<Rep> {
    v.same_group(w)?;
    let (dv, dw) = (v.dim(), w.dim());
    let g = v.images().len();
    if cocycle.len() != dv * dw * g {
        return Err(Error::Dimension(format!(
            "cocycle has {} entries, expected {}",
            cocycle.len(),
            dv * dw * g
        )));
    }
    let f = v.field().clone();
    let mut images = Vec::with_capacity(g);
    for s in 0..g {
        let x = Mat::from_vec(&f, dv, dw, cocycle[s * dv * dw..(s + 1) * dv * dw].to_vec())?;
        let d = x.mul(&w.images()[s])?;
        let mut m = Mat::zeros(&f, dv + dw, dv + dw);
        m.set_block(0, 0, &v.images()[s]);
        m.set_block(0, dv, &d);
        m.set_block(dv, dv, &w.images()[s]);
        images.push(m);
    }
    Rep::from_gens(v.group(), images, format!("ext({},{})", v.label(), w.label()))
}

/// Extension by the `i`-th basis cocycle of `ext1(v, w)`.
pub fn extension_by_basis(v: &Rep, w: &Rep, i: usize, mem_cap: usize) -> Result<(Rep, CocycleSpace)> {
    let space = ext1_capped(v, w, mem_cap)?;
    let c = space.basis.get(i).ok_or_else(|| {
        Error::Parameter(format!("extension class {i} requested but Ext^1 has dimension {}", space.h1_dim))
    })?;
    let e = build_extension(v, w, c)?.with_label(format!("ext({},{},{i})", v.label(), w.label()));
    Ok((e, space))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormType {
    Symmetric,
    Alternating,
    Both,
    None,
}

impl FormType {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormType::Symmetric => "symmetric",
            FormType::Alternating => "alternating",
            FormType::Both => "both",
            FormType::None => "none",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormSpace {
    /// Matrices `B` with `rho(s)^T B rho(s) = B`.
    pub basis: Vec<Mat>,
    pub sym_dim: usize,
    pub alt_dim: usize,
    /// Dimension of the span of the degenerate forms.
    pub degenerate_dim: usize,
    /// Whether every non-degenerate form is symmetric or alternating, all of
    /// one type.
    pub single_type: bool,
    pub type_verdict: FormType,
}

pub const MAX_FORM_SPACE_DIM: usize = 4;

/// Enumerate projective points of the span of `basis`.
fn for_each_point(basis: &[Mat], mut f: impl FnMut(Mat)) {
    let r = basis.len();
    if r == 0 {
        return;
    }
    let q = basis[0].field().order() as u64;
    for lead in 0..r {
        for k in 0..q.pow((r - lead - 1) as u32) {
            let mut m = basis[lead].clone();
            let mut x = k;
            for b in &basis[lead + 1..] {
                let c = (x % q) as Fe;
                x /= q;
                if c != 0 {
                    m.axpy(c, b);
                }
            }
            f(m);
        }
    }
}

pub fn invariant_forms(v: &Rep) -> Result<FormSpace> {
    let f = v.field().clone();
    if f.characteristic() == 2 {
        return Err(Error::Unsupported("form types in characteristic 2".into()));
    }
    let basis = hom_space(v, &v.dual()?)?;
    if basis.len() > MAX_FORM_SPACE_DIM {
        return Err(Error::Unsupported(format!(
            "invariant form space of dimension {} exceeds {MAX_FORM_SPACE_DIM}",
            basis.len()
        )));
    }
    for b in &basis {
        for m in v.images() {
            if &m.transpose().mul(b)?.mul(m)? != b {
                return Err(Error::Uncertified("form fails invariance re-check".into()));
            }
        }
    }
    let n = v.dim();
    let half = f.inv(2)?;
    let sym: Vec<Mat> = basis.iter().map(|b| b.add(&b.transpose()).map(|s| s.scale(half))).collect::<Result<_>>()?;
    let alt: Vec<Mat> = basis.iter().map(|b| b.sub(&b.transpose()).map(|s| s.scale(half))).collect::<Result<_>>()?;
    let span = |ms: &[Mat]| -> Vec<Mat> {
        let e = Echelon::from_vectors(&f, n * n, ms.iter().map(|m| m.data().to_vec()));
        e.rows().iter().map(|r| Mat::from_vec(&f, n, n, r.clone()).expect("shape")).collect()
    };
    let sym = span(&sym);
    let alt = span(&alt);
    let mut degenerate = Echelon::new(&f, n * n);
    let (mut nd_sym, mut nd_alt, mut nd_other) = (false, false, false);
    for_each_point(&basis, |m| {
        if m.rank() < n {
            degenerate.insert(m.into_data());
        } else if m == m.transpose() {
            nd_sym = true;
        } else if m.add(&m.transpose()).expect("shape").is_zero() {
            nd_alt = true;
        } else {
            nd_other = true;
        }
    });
    let type_verdict = match (nd_sym, nd_alt) {
        (true, true) => FormType::Both,
        (true, false) => FormType::Symmetric,
        (false, true) => FormType::Alternating,
        (false, false) => FormType::None,
    };
    Ok(FormSpace {
        sym_dim: sym.len(),
        alt_dim: alt.len(),
        degenerate_dim: degenerate.dim(),
        single_type: !nd_other && !(nd_sym && nd_alt),
        type_verdict,
        basis,
    })
}

/// Checks that `simples` are irreducible and pairwise non-isomorphic.
pub fn check_simples(simples: &[Rep], seed: u64) -> Result<()> {
    for (i, s) in simples.iter().enumerate() {
        if !is_irreducible(s, seed)?.is_irreducible() {
            return Err(Error::InvalidSimples(format!("{} is reducible", s.label())));
        }
        for t in &simples[..i] {
            if is_isomorphic(s, t, seed)? {
                return Err(Error::InvalidSimples(format!("{} and {} are isomorphic", t.label(), s.label())));
            }
        }
    }
    Ok(())
}

/// Projective iff no non-split extension `0 -> S -> E -> v -> 0` exists for
/// any simple `S`; `simples` must be a complete list.
pub fn is_projective(v: &Rep, simples: &[Rep], seed: u64) -> Result<bool> {
    check_simples(simples, seed)?;
    is_projective_unchecked(v, simples, DEFAULT_MEMORY_CAP)
}

pub(crate) fn is_projective_unchecked(v: &Rep, simples: &[Rep], mem_cap: usize) -> Result<bool> {
    for s in simples {
        if ext1_capped(s, v, mem_cap)?.h1_dim != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_self_dual(v: &Rep, seed: u64) -> Result<bool> {
    is_isomorphic(v, &v.dual()?, seed)
}

#[derive(Clone, Debug)]
pub struct LoewyReport {
    /// Socle layers, bottom first.
    pub socle: Vec<FactorList>,
    /// Radical layers, head first.
    pub radical: Vec<FactorList>,
    pub uniserial: bool,
    pub self_dual: bool,
    pub projective: Option<bool>,
}

impl LoewyReport {
    /// Layer names from head to socle, as `head | ... | socle`.
    pub fn shape(&self) -> String {
        let mut parts: Vec<String> = self
            .socle
            .iter()
            .rev()
            .map(|layer| {
                let names: Vec<String> = layer
                    .iter()
                    .flat_map(|f| core::iter::repeat_n(f.name(), f.multiplicity))
                    .collect();
                names.join("+")
            })
            .collect();
        if parts.is_empty() {
            parts.push(String::from("0"));
        }
        parts.join(" | ")
    }
}

pub fn loewy_selfdual(v: &Rep, names: &[(String, Rep)], simples: Option<&[Rep]>, seed: u64) -> Result<LoewyReport> {
    let socle = socle_series(v, seed, names)?;
    let radical = radical_series(v, seed, names)?;
    let uniserial = socle.iter().all(|l| l.len() == 1 && l[0].multiplicity == 1);
    let self_dual = is_self_dual(v, seed)?;
    let projective = match simples {
        Some(s) => Some(is_projective(v, s, seed)?),
        None => None,
    };
    Ok(LoewyReport { socle, radical, uniserial, self_dual, projective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::ext1;
    use crate::field::Field;
    use crate::group::{GroupData, DEFAULT_CAP};
    use crate::meataxe::is_indecomposable;
    use alloc::{sync::Arc, vec, vec::Vec};

    fn sl2(p: u32) -> Arc<GroupData> {
        let f = Field::new(p, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        let w = Mat::from_vec(&f, 2, 2, vec![0, 1, f.from_int(-1), 0]).unwrap();
        Arc::new(GroupData::enumerate(&[u, w], DEFAULT_CAP).unwrap())
    }

    #[test]
    fn self_extension_of_natural_sl2_5() {
        let g = sl2(5);
        let u = Rep::natural(&g);
        let (e, _) = extension_by_basis(&u, &u, 0, DEFAULT_MEMORY_CAP).unwrap();
        assert_eq!(e.dim(), 4);
        assert!(is_indecomposable(&e, 0).unwrap().is_indecomposable());
        assert_eq!(hom_space(&e, &e).unwrap().len(), 2);
        let forms = invariant_forms(&e).unwrap();
        assert_eq!(forms.type_verdict, FormType::Alternating);
        let rep = loewy_selfdual(&e, &[], None, 0).unwrap();
        assert!(rep.uniserial && rep.self_dual);
        let zero = vec![0; ext1(&u, &u).unwrap().basis[0].len()];
        let split = build_extension(&u, &u, &zero).unwrap();
        assert!(!is_indecomposable(&split, 0).unwrap().is_indecomposable());
    }

    #[test]
    fn natural_form_is_symplectic() {
        let g = sl2(7);
        let fs = invariant_forms(&Rep::natural(&g)).unwrap();
        assert_eq!((fs.basis.len(), fs.sym_dim, fs.alt_dim, fs.degenerate_dim), (1, 0, 1, 0));
        assert_eq!(fs.type_verdict, FormType::Alternating);
    }

    #[test]
    fn steinberg_is_projective() {
        let g = sl2(5);
        let l1 = Rep::natural(&g);
        let simples: Vec<Rep> =
            core::iter::once(Rep::trivial(&g, 1)).chain((1..5).map(|a| l1.sym(a).unwrap())).collect();
        assert!(is_projective(&simples[4], &simples, 0).unwrap());
        assert!(!is_projective(&l1, &simples, 0).unwrap());
        let dup = vec![l1.clone(), l1.dual().unwrap()];
        assert!(matches!(check_simples(&dup, 0), Err(Error::InvalidSimples(_))));
    }
}
