use std::sync::Arc;

use adequacy_core::adequacy::{adequacy_report, weak_span};
use adequacy_core::catalog::make_group;
use adequacy_core::cohomology::h1;
use adequacy_core::group::DEFAULT_CAP;
use adequacy_core::meataxe::is_isomorphic;
use adequacy_core::{Field, Mat, Poly};
use proptest::prelude::*;

fn field(p: u32, k: u32) -> Arc<Field> {
    Field::new(p, k).unwrap()
}

fn mat_strategy(q: u32, r: usize, c: usize) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0..q as u16, r * c)
}

fn params(kv: &[(&str, &str)]) -> Vec<(String, String)> {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_of_transpose(data in mat_strategy(9, 4, 5)) {
        let f = field(3, 2);
        let a = Mat::from_vec(&f, 4, 5, data).unwrap();
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn rref_is_idempotent(data in mat_strategy(5, 4, 6)) {
        let f = field(5, 1);
        let a = Mat::from_vec(&f, 4, 6, data).unwrap();
        let r = a.rref();
        prop_assert_eq!(&r.reduced.rref().reduced, &r.reduced);
        for v in &r.nullspace {
            prop_assert!(a.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn kron_is_multiplicative(a in mat_strategy(4, 2, 2), b in mat_strategy(4, 2, 2),
                              c in mat_strategy(4, 2, 2), d in mat_strategy(4, 2, 2)) {
        let f = field(2, 2);
        let m = |v: Vec<u16>| Mat::from_vec(&f, 2, 2, v).unwrap();
        let (a, b, c, d) = (m(a), m(b), m(c), m(d));
        let lhs = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap()).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(x in 0u16..81, y in 0u16..81) {
        let f = field(3, 4);
        prop_assert_eq!(f.frobenius(f.add(x, y)), f.add(f.frobenius(x), f.frobenius(y)));
        prop_assert_eq!(f.frobenius(f.mul(x, y)), f.mul(f.frobenius(x), f.frobenius(y)));
        prop_assert_eq!(f.frobenius_pow(x, 4), x);
    }

    #[test]
    fn factors_multiply_back(coeffs in prop::collection::vec(0u16..7, 1..8)) {
        let f = field(7, 1);
        let mut c = coeffs;
        c.push(1);
        let p = Poly::new(&f, c);
        let mut prod = Poly::new(&f, vec![1]);
        for (g, e) in p.factor().unwrap() {
            for _ in 0..e {
                prod = prod.mul(&g);
            }
        }
        prop_assert_eq!(prod, p);
    }
}

#[test]
fn span_invariant_under_conjugation_and_extension() {
    let g = make_group("sl2", &params(&[("q", "5")]), DEFAULT_CAP, 0).unwrap();
    let v = g.env.get("L2").unwrap();
    let f = v.field().clone();
    let p = Mat::from_vec(&f, 3, 3, vec![1, 2, 0, 0, 1, 3, 1, 0, 1]).unwrap();
    assert!(p.is_invertible());
    let span = weak_span(v).unwrap();
    assert_eq!(weak_span(&v.conjugate(&p).unwrap()).unwrap(), span);
    let big = g.base_change(2, DEFAULT_CAP).unwrap();
    assert_eq!(weak_span(big.env.get("L2").unwrap()).unwrap(), span);
}

#[test]
fn frobenius_twists_get_identical_reports() {
    let g = make_group("sl2", &params(&[("q", "9")]), DEFAULT_CAP, 0).unwrap();
    for name in ["L1", "L2", "L4"] {
        let v = g.env.get(name).unwrap();
        let a = adequacy_report(v, "sl2(9)").unwrap();
        let b = adequacy_report(&v.twist(1).unwrap().with_label(name), "sl2(9)").unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn ad_splits_when_p_does_not_divide_dim() {
    let g = make_group("sl2", &params(&[("q", "5")]), DEFAULT_CAP, 0).unwrap();
    for name in ["L1", "L2", "L3"] {
        let v = g.env.get(name).unwrap();
        let r = adequacy_report(v, "sl2(5)").unwrap();
        let had = h1(&v.ad().unwrap()).unwrap().h1_dim;
        assert_eq!(had, r.h1_trivial_dim + r.h1_adq_dim, "{name}");
        // H^1(V* (x) V) = Ext^1(V, V)
        assert_eq!(had, r.ext1_self_dim, "{name}");
    }
}

#[test]
fn sl2_3_weak_adequacy() {
    let g = make_group("sl2", &params(&[("q", "3")]), DEFAULT_CAP, 0).unwrap();
    let l1 = g.env.get("L1").unwrap();
    assert_eq!(weak_span(l1).unwrap(), 4);
    let st = g.env.get("St").unwrap();
    assert!(weak_span(st).unwrap() < 9);
}

#[test]
fn catalog_simples_closed_under_duality_and_twist() {
    for (name, kv) in [("sl2", ("q", "9")), ("sl2", ("q", "4")), ("psl2", ("p", "7"))] {
        let g = make_group(name, &params(&[kv]), DEFAULT_CAP, 0).unwrap();
        let simples = g.simple_reps().unwrap();
        for s in &simples {
            let d = s.dual().unwrap();
            assert!(simples.iter().any(|t| is_isomorphic(t, &d, 0).unwrap()), "{name}: dual of {}", s.label());
            if name == "sl2" {
                let t1 = s.twist(1).unwrap();
                assert!(simples.iter().any(|t| is_isomorphic(t, &t1, 0).unwrap()), "{name}: twist of {}", s.label());
            }
        }
    }
}

#[test]
fn psl2_is_half_of_sl2() {
    for p in ["3", "5", "7", "11"] {
        let s = make_group("sl2", &params(&[("q", p)]), DEFAULT_CAP, 0).unwrap();
        let ps = make_group("psl2", &params(&[("p", p)]), DEFAULT_CAP, 0).unwrap();
        assert_eq!(2 * ps.group().order(), s.group().order());
    }
}
