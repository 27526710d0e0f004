//! Weak adequacy (the span of semisimple images) and adequacy.

use alloc::string::String;
use core::ops::ControlFlow;

use crate::cohomology::{ext1_capped, h1_capped};
use crate::error::Result;
use crate::group::DEFAULT_MEMORY_CAP;
use crate::rep::Rep;
use crate::subspace::Echelon;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdequacyReport {
    pub group: String,
    pub module: String,
    pub dim: usize,
    pub span_dim: usize,
    pub weak_ok: bool,
    pub h1_trivial_dim: usize,
    pub h1_adq_dim: usize,
    pub ext1_self_dim: usize,
    pub h1_trivial_ok: bool,
    pub h1_adq_ok: bool,
    pub adequate: bool,
}

/// Rank of the span in `End(V)` of the images `rho(g)` that are semisimple
/// (squarefree minimal polynomial). Elements are taken in index order and
/// the scan stops once the span is everything.
pub fn weak_span(v: &Rep) -> Result<usize> {
    weak_span_capped(v, DEFAULT_MEMORY_CAP)
}

pub fn weak_span_capped(v: &Rep, mem_cap: usize) -> Result<usize> {
    let d = v.dim();
    let mut span = Echelon::new(v.field(), d * d);
    v.for_each_image(mem_cap, |_, m| {
        let mut x = m.data().to_vec();
        span.reduce(&mut x);
        if x.iter().any(|&c| c != 0) && m.minpoly()?.is_squarefree() {
            span.push_reduced(x);
        }
        Ok(if span.is_full() { ControlFlow::Break(()) } else { ControlFlow::Continue(()) })
    })?;
    Ok(span.dim())
}

pub fn adequacy_report(v: &Rep, group_label: &str) -> Result<AdequacyReport> {
    adequacy_report_capped(v, group_label, DEFAULT_MEMORY_CAP)
}

pub fn adequacy_report_capped(v: &Rep, group_label: &str, mem_cap: usize) -> Result<AdequacyReport> {
    let d = v.dim();
    let span_dim = weak_span_capped(v, mem_cap)?;
    let h1_trivial_dim = h1_capped(&Rep::trivial(v.group(), 1), mem_cap)?.h1_dim;
    let h1_adq_dim = h1_capped(&v.adq()?, mem_cap)?.h1_dim;
    let ext1_self_dim = ext1_capped(v, v, mem_cap)?.h1_dim;
    let weak_ok = span_dim == d * d;
    let h1_trivial_ok = h1_trivial_dim == 0;
    let h1_adq_ok = h1_adq_dim == 0;
    Ok(AdequacyReport {
        group: group_label.into(),
        module: v.label().into(),
        dim: d,
        span_dim,
        weak_ok,
        h1_trivial_dim,
        h1_adq_dim,
        ext1_self_dim,
        h1_trivial_ok,
        h1_adq_ok,
        adequate: weak_ok && h1_trivial_ok && h1_adq_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::group::{GroupData, DEFAULT_CAP};
    use crate::mat::Mat;
    use alloc::{sync::Arc, vec};

    #[test]
    fn sl2_5_reports() {
        let f = Field::new(5, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        let w = Mat::from_vec(&f, 2, 2, vec![0, 1, 4, 0]).unwrap();
        let g = Arc::new(GroupData::enumerate(&[u, w], DEFAULT_CAP).unwrap());
        let l1 = Rep::natural(&g);
        assert_eq!(weak_span(&l1).unwrap(), 4);
        assert_eq!(weak_span(&Rep::trivial(&g, 1)).unwrap(), 1);
        let r = adequacy_report(&l1.sym(3).unwrap(), "sl2(5)").unwrap();
        assert_eq!((r.span_dim, r.h1_trivial_dim, r.h1_adq_dim, r.ext1_self_dim), (16, 0, 0, 0));
        assert!(r.adequate);
        let r = adequacy_report(&l1, "sl2(5)").unwrap();
        assert_eq!(r.ext1_self_dim, 1);
    }
}
