//! Built-in groups, their named modules and, where known, complete lists of
//! simple modules.

use alloc::{
    format,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};

use crate::dsl::Env;
use crate::error::{Error, Result};
use crate::field::{is_prime, Fe, Field};
use crate::group::GroupData;
use crate::mat::Mat;
use crate::meataxe::{is_indecomposable, Indecomposability};
use crate::rep::Rep;
use crate::structure::{
    build_extension, check_simples, invariant_forms, loewy_selfdual, FormSpace, FormType, LoewyReport,
};
use crate::cohomology::ext1_capped;

/// Catalog names with their parameters, for help text.
pub const ENTRIES: &[(&str, &str)] = &[
    ("sl2", "q=<prime power>; modules L0..L{q-1}, St; simples complete"),
    ("psl2", "p=<odd prime>; image of SL2(p) on Sym^2; modules L0,L2,..,St; simples complete"),
    ("omega4plus5", "Omega4+(5) as SL2(5) x SL2(5) on the tensor square; module V4"),
    ("sl2_9_semidirect", "SL2(9) extended by the Frobenius swapping W1 and its twist; module V"),
    ("q8_c3_wr_c2", "SL2(3) wreath C2 over GF(3); subgroup gplus with W1; module V = induce(gplus,W1)"),
    ("monomial", "p=<prime>, m=<divisor of p-1>, top=cyclic|affine; diagonal mu_m^p by C_p or AGL1(p); module V"),
    ("sln", "n=<degree>, q=<prime power>; natural module"),
];

pub struct CatalogGroup {
    pub name: String,
    pub env: Env,
    /// Complete list of simple modules, by name.
    pub simples: Option<Vec<(String, Rep)>>,
}

impl core::fmt::Debug for CatalogGroup {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "CatalogGroup({}, order {})", self.name, self.env.group.order())
    }
}

impl CatalogGroup {
    pub fn group(&self) -> &Arc<GroupData> {
        &self.env.group
    }

    pub fn simple_reps(&self) -> Option<Vec<Rep>> {
        self.simples.as_ref().map(|s| s.iter().map(|(_, r)| r.clone()).collect())
    }

    /// Extend scalars from GF(p^k) to GF(p^(k m)), carrying every named
    /// module and subgroup along.
    pub fn base_change(&self, m: u32, cap: usize) -> Result<CatalogGroup> {
        if m <= 1 {
            return Ok(CatalogGroup { name: self.name.clone(), env: self.env.clone(), simples: self.simples.clone() });
        }
        let f = self.group().field();
        let big = Field::new(f.characteristic(), f.degree() * m)?;
        let env = base_change_env(&self.env, &big, cap)?;
        let simples = match &self.simples {
            Some(list) => Some(
                list.iter()
                    .map(|(n, r)| Ok((n.clone(), r.base_change(&env.group)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(CatalogGroup { name: format!("{}@GF({})", self.name, big.order()), env, simples })
    }
}

fn base_change_env(env: &Env, big: &Arc<Field>, cap: usize) -> Result<Env> {
    let group = Arc::new(env.group.base_change(big, cap)?);
    let mut out = Env::new(&group);
    for (n, r) in &env.reps {
        out.reps.push((n.clone(), r.base_change(&group)?));
    }
    for (n, se) in &env.subgroups {
        let inner = base_change_env(&se.env, big, cap)?;
        let sub = crate::group::SubgroupRef { parent: group.clone(), member: se.sub.member.clone(), gens: se.sub.gens.clone() };
        out.bind_subgroup(n.clone(), sub, inner);
    }
    Ok(out)
}

fn param<'a>(params: &'a [(String, String)], key: &str) -> Option<&'a str> {
    params.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn int_param(params: &[(String, String)], key: &str, default: Option<u32>) -> Result<u32> {
    match param(params, key) {
        Some(v) => v.parse().map_err(|_| Error::Parameter(format!("{key}={v} is not a non-negative integer"))),
        None => default.ok_or_else(|| Error::Parameter(format!("missing parameter {key}"))),
    }
}

/// `q = p^k` with p prime.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::Parameter(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a divisor");
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 {
        return Err(Error::Parameter(format!("{q} is not a prime power")));
    }
    Ok((p, k))
}

fn mat(f: &Arc<Field>, n: usize, v: &[i64]) -> Mat {
    Mat::from_vec(f, n, n, v.iter().map(|&x| f.from_int(x)).collect()).expect("shape")
}

/// Generators of SL2(q): for prime q the transvection and the Weyl element,
/// otherwise a torus element `diag(w, w^-1)` and `[[-1,1],[-1,0]]`.
pub fn sl2_generators(f: &Arc<Field>) -> Vec<Mat> {
    if f.degree() == 1 {
        vec![mat(f, 2, &[1, 1, 0, 1]), mat(f, 2, &[0, 1, -1, 0])]
    } else {
        let w = f.primitive();
        let wi = f.inv(w).expect("nonzero");
        vec![
            Mat::from_vec(f, 2, 2, vec![w, 0, 0, wi]).expect("shape"),
            mat(f, 2, &[-1, 1, -1, 0]),
        ]
    }
}

/// `L(a) = tensor_i twist(Sym^{a_i}(natural), i)` over the base-p digits of `a`.
pub fn steinberg_module(natural: &Rep, a: u32) -> Result<Rep> {
    let f = natural.field().clone();
    let (p, k) = (f.characteristic(), f.degree());
    let mut acc: Option<Rep> = None;
    let mut x = a;
    for i in 0..k {
        let d = x % p;
        x /= p;
        if d == 0 {
            continue;
        }
        let piece = natural.sym(d as usize)?.twist(i)?;
        acc = Some(match acc {
            None => piece,
            Some(r) => r.tensor(&piece)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Rep::trivial(natural.group(), 1)).with_label(format!("L{a}")))
}

fn sl2(q: u32, cap: usize) -> Result<CatalogGroup> {
    let (p, k) = prime_power(q)?;
    let f = Field::new(p, k)?;
    let g = Arc::new(GroupData::enumerate(&sl2_generators(&f), cap)?);
    let nat = Rep::natural(&g);
    let mut env = Env::new(&g);
    let mut simples = Vec::new();
    for a in 0..q {
        let l = steinberg_module(&nat, a)?;
        env.bind(format!("L{a}"), l.clone());
        simples.push((format!("L{a}"), l));
    }
    env.bind("St", simples[q as usize - 1].1.clone());
    Ok(CatalogGroup { name: format!("sl2(q={q})"), env, simples: Some(simples) })
}

fn psl2(p: u32, cap: usize) -> Result<CatalogGroup> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Parameter(format!("psl2 needs an odd prime, got {p}")));
    }
    let f = Field::new(p, 1)?;
    let s = Arc::new(GroupData::enumerate(&sl2_generators(&f), cap)?);
    let snat = Rep::natural(&s);
    let gens = snat.sym(2)?.images().to_vec();
    let g = Arc::new(GroupData::enumerate(&gens, cap)?);
    let mut env = Env::new(&g);
    let mut simples = Vec::new();
    for a in (0..p).step_by(2) {
        let images = snat.sym(a as usize)?.images().to_vec();
        let l = Rep::from_gens(&g, images, format!("L{a}"))?;
        env.bind(format!("L{a}"), l.clone());
        simples.push((format!("L{a}"), l));
    }
    env.bind("St", simples.last().expect("nonempty").1.clone());
    Ok(CatalogGroup { name: format!("psl2(p={p})"), env, simples: Some(simples) })
}

fn omega4plus5(cap: usize) -> Result<CatalogGroup> {
    let f = Field::new(5, 1)?;
    let [u, s]: [Mat; 2] = sl2_generators(&f).try_into().expect("two generators");
    let g = Arc::new(GroupData::enumerate(&[u.kron(&s)?, s.kron(&u)?], cap)?);
    let mut env = Env::new(&g);
    env.bind("V4", Rep::natural(&g));
    Ok(CatalogGroup { name: "omega4plus5".into(), env, simples: None })
}

fn block_swap(f: &Arc<Field>, n: usize) -> Mat {
    let mut m = Mat::zeros(f, 2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, 1);
        m.set(n + i, i, 1);
    }
    m
}

fn sl2_9_semidirect(cap: usize) -> Result<CatalogGroup> {
    let f = Field::new(3, 2)?;
    let mut gens: Vec<Mat> = sl2_generators(&f).iter().map(|s| Mat::block_diag(&f, &[s, &s.frobenius(1)])).collect();
    gens.push(block_swap(&f, 2));
    let g = Arc::new(GroupData::enumerate(&gens, cap)?);
    let mut env = Env::new(&g);
    env.bind("V", Rep::natural(&g));
    Ok(CatalogGroup { name: "sl2_9_semidirect".into(), env, simples: None })
}

fn q8_c3_wr_c2(cap: usize) -> Result<CatalogGroup> {
    let f = Field::new(3, 1)?;
    let id = Mat::identity(&f, 2);
    let mut gens: Vec<Mat> = sl2_generators(&f).iter().map(|s| Mat::block_diag(&f, &[s, &id])).collect();
    gens.push(block_swap(&f, 2));
    let g = Arc::new(GroupData::enumerate(&gens, cap)?);
    let gp = g.gplus();
    let hg = Arc::new(gp.enumerate(cap)?);
    let mut henv = Env::new(&hg);
    let w1 = Rep::natural(&hg).sub(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]])?;
    henv.bind("W1", w1.clone());
    let v = Rep::induce(&g, &gp, &hg, &w1)?;
    let mut env = Env::new(&g);
    env.bind("V", v);
    env.bind_subgroup("gplus", gp, henv);
    Ok(CatalogGroup { name: "q8_c3_wr_c2".into(), env, simples: None })
}

fn perm_matrix(f: &Arc<Field>, n: usize, pi: impl Fn(usize) -> usize) -> Mat {
    let mut m = Mat::zeros(f, n, n);
    for j in 0..n {
        m.set(pi(j), j, 1);
    }
    m
}

fn monomial(p: u32, m: u32, top: &str, cap: usize) -> Result<CatalogGroup> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    if m == 0 || !(p - 1).is_multiple_of(m) {
        return Err(Error::Parameter(format!("m={m} must divide p-1={}", p - 1)));
    }
    let f = Field::new(p, 1)?;
    let n = p as usize;
    let zeta = f.pow(f.primitive(), ((p - 1) / m) as u64);
    let mut d = Mat::identity(&f, n);
    d.set(0, 0, zeta);
    let cycle = perm_matrix(&f, n, |j| (j + 1) % n);
    let mut gens = vec![d, cycle];
    let top_name = match top {
        "cyclic" | "C5" | "Cp" => "cyclic",
        "affine" | "F20" | "AGL1" => {
            let g0 = f.primitive() as usize;
            gens.push(perm_matrix(&f, n, |j| (j * g0) % n));
            "affine"
        }
        other => return Err(Error::Parameter(format!("top must be cyclic or affine, got {other}"))),
    };
    let g = Arc::new(GroupData::enumerate(&gens, cap)?);
    let mut env = Env::new(&g);
    env.bind("V", Rep::natural(&g));
    Ok(CatalogGroup { name: format!("monomial(p={p},m={m},top={top_name})"), env, simples: None })
}

fn sln(n: u32, q: u32, cap: usize) -> Result<CatalogGroup> {
    let (p, k) = prime_power(q)?;
    if n < 2 {
        return Err(Error::Parameter("sln needs n >= 2".into()));
    }
    let f = Field::new(p, k)?;
    let n = n as usize;
    let mut e = Mat::identity(&f, n);
    e.set(0, 1, 1);
    let mut c = perm_matrix(&f, n, |j| (j + 1) % n);
    if n.is_multiple_of(2) {
        // the n-cycle has determinant -1
        let x = c.get(0, n - 1);
        c.set(0, n - 1, f.neg(x));
    }
    let mut gens = vec![e, c];
    if k > 1 {
        let w = f.primitive();
        let mut h = Mat::identity(&f, n);
        h.set(0, 0, w);
        h.set(1, 1, f.inv(w)?);
        gens.push(h);
    }
    let g = Arc::new(GroupData::enumerate(&gens, cap)?);
    let mut env = Env::new(&g);
    env.bind("V", Rep::natural(&g));
    Ok(CatalogGroup { name: format!("sln(n={n},q={q})"), env, simples: None })
}

/// Build a catalog group. Simple-module lists are checked for
/// irreducibility and pairwise non-isomorphism.
pub fn make_group(name: &str, params: &[(String, String)], cap: usize, seed: u64) -> Result<CatalogGroup> {
    let cg = match name {
        "sl2" => sl2(int_param(params, "q", None)?, cap)?,
        "psl2" => psl2(int_param(params, "p", None)?, cap)?,
        "omega4plus5" | "omega4plus" => omega4plus5(cap)?,
        "sl2_9_semidirect" => sl2_9_semidirect(cap)?,
        "q8_c3_wr_c2" => q8_c3_wr_c2(cap)?,
        "monomial" => monomial(
            int_param(params, "p", Some(5))?,
            int_param(params, "m", Some(4))?,
            param(params, "top").unwrap_or("cyclic"),
            cap,
        )?,
        "sln" | "sln_natural" => sln(int_param(params, "n", None)?, int_param(params, "q", None)?, cap)?,
        other => return Err(Error::UnknownGroup(other.to_string())),
    };
    if let Some(reps) = cg.simple_reps() {
        check_simples(&reps, seed)?;
    }
    Ok(cg)
}

/// A reducible self-dual indecomposable module, built and analysed.
#[derive(Clone, Debug)]
pub struct SelfDualInstance {
    pub name: String,
    pub group: String,
    pub group_order: usize,
    pub module: Rep,
    /// Expected layer names from head to socle.
    pub expected_shape: Vec<String>,
    pub expected_form: FormType,
    pub loewy: LoewyReport,
    pub forms: FormSpace,
    pub indecomposable: bool,
    /// The same construction with zero cocycles is decomposable.
    pub split_control_decomposable: bool,
}

fn zero_cocycle(v: &Rep, w: &Rep) -> Vec<Fe> {
    vec![0; v.dim() * w.dim() * v.images().len()]
}

#[allow(clippy::too_many_arguments)]
fn analyse(
    name: &str,
    cg: &CatalogGroup,
    module: Rep,
    split: Rep,
    expected_shape: &[&str],
    expected_form: FormType,
    projective: bool,
    seed: u64,
) -> Result<SelfDualInstance> {
    let names = cg.simples.clone().unwrap_or_default();
    let simples = if projective { cg.simple_reps() } else { None };
    let loewy = loewy_selfdual(&module, &names, simples.as_deref(), seed)?;
    let forms = invariant_forms(&module)?;
    let indecomposable = is_indecomposable(&module, seed)?.is_indecomposable();
    let split_control_decomposable = matches!(is_indecomposable(&split, seed)?, Indecomposability::Decomposable(_));
    Ok(SelfDualInstance {
        name: name.into(),
        group: cg.name.clone(),
        group_order: cg.group().order(),
        module,
        expected_shape: expected_shape.iter().map(|s| s.to_string()).collect(),
        expected_form,
        loewy,
        forms,
        indecomposable,
        split_control_decomposable,
    })
}

/// `(U|U)`: the extension of `U` by itself along the first basis cocycle.
fn self_extension(cg: &CatalogGroup, u: &str, form: FormType, mem_cap: usize, seed: u64) -> Result<SelfDualInstance> {
    let ur = cg.env.get(u).ok_or_else(|| Error::Unbound(u.into()))?.clone();
    let space = ext1_capped(&ur, &ur, mem_cap)?;
    let c = space.basis.first().ok_or_else(|| Error::Uncertified(format!("Ext^1({u},{u}) vanishes")))?;
    let m = build_extension(&ur, &ur, c)?.with_label(format!("({u}|{u})"));
    let split = build_extension(&ur, &ur, &zero_cocycle(&ur, &ur))?;
    analyse(&format!("{} ({u}|{u})", cg.name), cg, m, split, &[u, u], form, false, seed)
}

/// `(k|U|k)`: extend `k` by `U`, then that by `k`.
fn uniserial_kuk(cg: &CatalogGroup, u: &str, mem_cap: usize, seed: u64) -> Result<SelfDualInstance> {
    let ur = cg.env.get(u).ok_or_else(|| Error::Unbound(u.into()))?.clone();
    let k = Rep::trivial(cg.group(), 1).with_label("L0");
    let s1 = ext1_capped(&k, &ur, mem_cap)?;
    let c1 = s1.basis.first().ok_or_else(|| Error::Uncertified(format!("Ext^1({u},k) vanishes")))?;
    let m1 = build_extension(&k, &ur, c1)?;
    let s2 = ext1_capped(&m1, &k, mem_cap)?;
    let c2 = s2.basis.first().ok_or_else(|| Error::Uncertified("no extension of the trivial module on top".into()))?;
    let m = build_extension(&m1, &k, c2)?.with_label(format!("(k|{u}|k)"));
    let split1 = build_extension(&k, &ur, &zero_cocycle(&k, &ur))?;
    let split = build_extension(&split1, &k, &zero_cocycle(&split1, &k))?;
    analyse(&format!("{} (k|{u}|k)", cg.name), cg, m, split, &["L0", u, "L0"], FormType::Symmetric, true, seed)
}

/// The self-dual uniserial modules for p = 5 or 7, with their expected
/// layer shapes and form types.
pub fn self_dual_instances(p: u32, cap: usize, mem_cap: usize, seed: u64) -> Result<Vec<SelfDualInstance>> {
    let sl = make_group("sl2", &[("q".into(), p.to_string())], cap, seed)?;
    let psl = make_group("psl2", &[("p".into(), p.to_string())], cap, seed)?;
    match p {
        5 => Ok(vec![
            self_extension(&sl, "L1", FormType::Alternating, mem_cap, seed)?,
            self_extension(&psl, "L2", FormType::Symmetric, mem_cap, seed)?,
            uniserial_kuk(&psl, "L2", mem_cap, seed)?,
        ]),
        7 => Ok(vec![
            self_extension(&psl, "L2", FormType::Alternating, mem_cap, seed)?,
            self_extension(&sl, "L3", FormType::Symmetric, mem_cap, seed)?,
        ]),
        _ => Err(Error::Parameter(format!("instances exist for p = 5 and 7, not {p}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{DEFAULT_CAP, DEFAULT_MEMORY_CAP};

    fn q(v: u32) -> Vec<(String, String)> {
        vec![("q".into(), v.to_string())]
    }

    #[test]
    fn sl2_orders() {
        for qq in [2u32, 3, 4, 5, 7, 8, 9] {
            let g = make_group("sl2", &q(qq), DEFAULT_CAP, 0).unwrap();
            assert_eq!(g.group().order() as u32, qq * (qq * qq - 1), "q={qq}");
            assert_eq!(g.simples.as_ref().unwrap().len() as u32, qq);
        }
    }

    #[test]
    fn psl2_order_and_simples() {
        let g = make_group("psl2", &[("p".into(), "5".into())], DEFAULT_CAP, 0).unwrap();
        assert_eq!(g.group().order(), 60);
        let dims: Vec<usize> = g.simples.as_ref().unwrap().iter().map(|(_, r)| r.dim()).collect();
        assert_eq!(dims, vec![1, 3, 5]);
    }

    #[test]
    fn other_orders() {
        let order = |n: &str, ps: &[(&str, &str)]| {
            let ps: Vec<(String, String)> = ps.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
            make_group(n, &ps, DEFAULT_CAP, 0).unwrap().group().order()
        };
        assert_eq!(order("sl2_9_semidirect", &[]), 1440);
        assert_eq!(order("sln", &[("n", "3"), ("q", "2")]), 168);
        assert_eq!(order("monomial", &[("p", "5"), ("m", "4"), ("top", "cyclic")]), 5120);
        assert_eq!(order("q8_c3_wr_c2", &[]), 1152);
        let w = make_group("q8_c3_wr_c2", &[], DEFAULT_CAP, 0).unwrap();
        assert_eq!(w.env.subgroups[0].1.sub.order(), 576);
        assert_eq!(w.env.get("V").unwrap().dim(), 4);
        assert!(matches!(make_group("nope", &[], DEFAULT_CAP, 0), Err(Error::UnknownGroup(_))));
        assert!(matches!(make_group("sl2", &q(6), DEFAULT_CAP, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn self_dual_at_5() {
        let inst = self_dual_instances(5, DEFAULT_CAP, DEFAULT_MEMORY_CAP, 0).unwrap();
        for i in &inst {
            assert!(i.indecomposable, "{}", i.name);
            assert!(i.split_control_decomposable, "{}", i.name);
            assert!(i.loewy.uniserial && i.loewy.self_dual, "{}", i.name);
            assert_eq!(i.forms.type_verdict, i.expected_form, "{}", i.name);
            assert_eq!(i.loewy.shape(), i.expected_shape.join(" | "), "{}", i.name);
        }
        assert_eq!(inst[2].loewy.projective, Some(true));
    }
}
