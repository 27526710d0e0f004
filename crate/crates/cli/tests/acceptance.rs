//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::time::Instant;

use adequacy::{cmd_run, run, Check, FormsSection, Report, RunConfig};
use adequacy_core::catalog::{make_group, self_dual_instances};
use adequacy_core::cohomology::{ext1, verify_cocycle};
use adequacy_core::group::{DEFAULT_CAP, DEFAULT_MEMORY_CAP};
use adequacy_core::meataxe::{chop_labeled, radical_series, socle_series};
use adequacy_core::rep::Rep;
use adequacy_core::structure::FormType;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn report(group: &str, params: &[(&str, &str)], module: &str, checks: &[Check]) -> Result<Report, String> {
    run(&RunConfig::catalog(group, params, module, checks)).map_err(|e| format!("{group} {module}: {e}"))
}

fn criterion_1() -> Outcome {
    let q5 = [("q", "5")];
    for m in ["L1", "L2", "L3", "L4"] {
        let r = report("sl2", &q5, m, &[Check::Weak])?;
        let w = r.weak.unwrap();
        ensure!(w.span_dim == r.meta.dim * r.meta.dim, "{m}: span {} != {}", w.span_dim, r.meta.dim * r.meta.dim);
    }
    for m in ["L1", "L2"] {
        let e = report("sl2", &q5, m, &[Check::Ext1])?.ext1.unwrap();
        ensure!(e.self_dim == 1, "ext1({m},{m}) = {} != 1", e.self_dim);
    }
    let r = report("sl2", &q5, "L3", &[Check::Adequacy])?;
    let a = r.adequacy.unwrap();
    ensure!(a.ext1_self_dim == 0, "ext1(L3,L3) = {}", a.ext1_self_dim);
    ensure!(a.adequate, "L3 not adequate: {a:?}");
    let r = report("sl2", &q5, "St", &[Check::Ext1, Check::Projective])?;
    ensure!(r.ext1.unwrap().self_dim == 0, "ext1(St,St) != 0");
    ensure!(r.projective == Some(true), "St not projective");
    Ok(())
}

fn criterion_2() -> Outcome {
    let q4 = [("q", "4")];
    let r = report("sl2", &q4, "tensor(L1,twist(L1,1))", &[Check::Adequacy])?;
    let a = r.adequacy.unwrap();
    ensure!(r.meta.dim == 4, "dim {}", r.meta.dim);
    ensure!(a.h1_adq_dim == 1, "h1_adq = {}", a.h1_adq_dim);
    ensure!(!a.adequate, "dim-4 module reported adequate");
    let a = report("sl2", &q4, "L1", &[Check::Adequacy])?.adequacy.unwrap();
    ensure!(a.adequate, "dim-2 module not adequate: {a:?}");
    Ok(())
}

fn criterion_3() -> Outcome {
    let q9 = [("q", "9")];
    for a in 1..9 {
        let m = format!("L{a}");
        let r = report("sl2", &q9, &m, &[Check::Adequacy])?;
        let d = r.meta.dim;
        let ad = r.adequacy.unwrap();
        ensure!(ad.weak_ok, "{m} (dim {d}) not weakly adequate");
        if d % 3 == 0 {
            ensure!(ad.h1_adq_dim == 1, "{m} (dim {d}): h1_adq = {}", ad.h1_adq_dim);
            ensure!(!ad.adequate, "{m} (dim {d}) reported adequate");
        } else {
            ensure!(ad.adequate, "{m} (dim {d}) not adequate: {ad:?}");
        }
    }
    Ok(())
}

fn ext1_two(group: &str, module: &str, dim: usize, self_dual: bool) -> Outcome {
    let checks: &[Check] = if self_dual { &[Check::Ext1, Check::Structure] } else { &[Check::Ext1] };
    let r = report(group, &[], module, checks)?;
    ensure!(r.meta.dim == dim, "{group}: dim {} != {dim}", r.meta.dim);
    let e = r.ext1.unwrap();
    ensure!(e.self_dim == 2, "{group}: ext1(V,V) = {} != 2", e.self_dim);
    if self_dual {
        ensure!(r.structure.unwrap().self_dual, "{group}: V not self-dual");
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    ext1_two("omega4plus5", "V4", 4, true)
}

fn criterion_5() -> Outcome {
    ext1_two("sl2_9_semidirect", "V", 4, false)
}

fn criterion_6() -> Outcome {
    ext1_two("q8_c3_wr_c2", "V", 4, false)
}

fn criterion_7() -> Outcome {
    let expected = [
        (5, 4, FormType::Alternating, false),
        (5, 6, FormType::Symmetric, false),
        (5, 5, FormType::Symmetric, true),
        (7, 6, FormType::Alternating, false),
        (7, 8, FormType::Symmetric, false),
    ];
    let mut all = self_dual_instances(5, DEFAULT_CAP, DEFAULT_MEMORY_CAP, 0).map_err(|e| e.to_string())?;
    all.extend(self_dual_instances(7, DEFAULT_CAP, DEFAULT_MEMORY_CAP, 0).map_err(|e| e.to_string())?);
    ensure!(all.len() == expected.len(), "{} instances", all.len());
    for (i, (p, dim, form, proj)) in all.iter().zip(expected) {
        let n = &i.name;
        ensure!(i.module.field().characteristic() == p, "{n}: wrong characteristic");
        ensure!(i.module.dim() == dim, "{n}: dim {} != {dim}", i.module.dim());
        ensure!(i.indecomposable, "{n}: decomposable");
        ensure!(i.split_control_decomposable, "{n}: split control indecomposable");
        ensure!(i.loewy.self_dual, "{n}: not self-dual");
        ensure!(i.loewy.uniserial, "{n}: not uniserial");
        let shape = i.expected_shape.join(" | ");
        ensure!(i.loewy.shape() == shape, "{n}: layers {} != {shape}", i.loewy.shape());
        ensure!(i.forms.type_verdict == form, "{n}: form {:?} != {form:?}", i.forms.type_verdict);
        if proj {
            ensure!(i.loewy.projective == Some(true), "{n}: not projective");
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let w = report("monomial", &[("p", "5"), ("m", "4"), ("top", "cyclic")], "V", &[Check::Weak])?.weak.unwrap();
    ensure!(w.span_dim < 25 && !w.weak_ok, "A.C5 span {}", w.span_dim);
    // regression value from the first brute-force run: only the diagonal part is semisimple
    ensure!(w.span_dim == 5, "A.C5 span {} != 5", w.span_dim);
    let r = report("monomial", &[("p", "5"), ("m", "4"), ("top", "affine")], "V", &[Check::Adequacy])?;
    ensure!(r.meta.order == 20480, "A.F20 order {}", r.meta.order);
    let a = r.adequacy.unwrap();
    ensure!(a.adequate, "A.F20 not adequate: {a:?}");
    Ok(())
}

fn criterion_9() -> Outcome {
    let r = report("sln", &[("n", "3"), ("q", "2")], "V", &[Check::Adequacy])?;
    ensure!(r.meta.order == 168, "order {}", r.meta.order);
    ensure!(r.adequacy.unwrap().adequate, "SL3(2) natural not adequate");
    let g = make_group("sln", &[("n".into(), "3".into()), ("q".into(), "2".into())], DEFAULT_CAP, 0)
        .map_err(|e| e.to_string())?;
    let v = g.env.get("V").unwrap();
    let k = Rep::trivial(g.group(), 1);
    let factors = chop_labeled(&v.ad().unwrap(), 0, &[("k".into(), k)]).map_err(|e| e.to_string())?;
    let mut got: Vec<(String, usize, usize)> =
        factors.iter().map(|f| (f.name(), f.rep.dim(), f.multiplicity)).collect();
    got.sort();
    ensure!(got == vec![("dim8".into(), 8, 1), ("k".into(), 1, 1)], "chop(ad) = {got:?}");
    Ok(())
}

fn duality_pairs() -> Outcome {
    let g = make_group("sl2", &[("q".into(), "5".into())], DEFAULT_CAP, 0).map_err(|e| e.to_string())?;
    let s = g.simples.as_ref().unwrap();
    let mut pairs = 0;
    for (a, (na, va)) in s.iter().enumerate() {
        for (b, (nb, vb)) in s.iter().enumerate() {
            if a == b {
                continue;
            }
            let lhs = ext1(va, vb).map_err(|e| e.to_string())?.h1_dim;
            let rhs = ext1(&vb.dual().unwrap(), &va.dual().unwrap()).map_err(|e| e.to_string())?.h1_dim;
            ensure!(lhs == rhs, "ext1({na},{nb}) = {lhs} but dual pair gives {rhs}");
            pairs += 1;
        }
    }
    ensure!(pairs == 20, "{pairs} pairs");
    Ok(())
}

fn field_extension() -> Outcome {
    let cases: [(&str, &[(&str, &str)], &str); 10] = [
        ("sl2", &[("q", "5")], "L1"),
        ("sl2", &[("q", "5")], "L2"),
        ("sl2", &[("q", "5")], "L3"),
        ("sl2", &[("q", "5")], "St"),
        ("sl2", &[("q", "3")], "L1"),
        ("sl2", &[("q", "4")], "L1"),
        ("sl2", &[("q", "4")], "L3"),
        ("sl2", &[("q", "7")], "L2"),
        ("psl2", &[("p", "5")], "L2"),
        ("sln", &[("n", "3"), ("q", "2")], "V"),
    ];
    for (g, ps, m) in cases {
        let mut cfg = RunConfig::catalog(g, ps, m, &[Check::Adequacy]);
        let base = run(&cfg).map_err(|e| e.to_string())?.adequacy.unwrap();
        cfg.field_ext = 2;
        let big = run(&cfg).map_err(|e| e.to_string())?;
        ensure!(big.meta.field.contains('^'), "{g} {m}: field {} not extended", big.meta.field);
        ensure!(big.adequacy.as_ref() == Some(&base), "{g} {m}: {base:?} vs {:?}", big.adequacy);
    }
    Ok(())
}

fn socle_radical_duality() -> Outcome {
    let mut all = self_dual_instances(5, DEFAULT_CAP, DEFAULT_MEMORY_CAP, 0).map_err(|e| e.to_string())?;
    all.extend(self_dual_instances(7, DEFAULT_CAP, DEFAULT_MEMORY_CAP, 0).map_err(|e| e.to_string())?);
    for i in &all {
        let v = &i.module;
        let dims = |ls: &[Vec<adequacy_core::meataxe::Factor>]| -> Vec<Vec<usize>> {
            ls.iter().map(|l| l.iter().flat_map(|f| std::iter::repeat_n(f.rep.dim(), f.multiplicity)).collect()).collect()
        };
        let rad = radical_series(v, 0, &[]).map_err(|e| e.to_string())?;
        let soc_dual = socle_series(&v.dual().unwrap(), 0, &[]).map_err(|e| e.to_string())?;
        ensure!(dims(&rad) == dims(&soc_dual), "{}: radical of V vs socle of V*", i.name);
        let mut soc = dims(&i.loewy.socle);
        soc.reverse();
        ensure!(soc == dims(&i.loewy.radical), "{}: socle and radical layers differ", i.name);
    }
    Ok(())
}

fn cocycle_reverification() -> Outcome {
    let cases: [(&str, &[(&str, &str)], &str); 4] = [
        ("sl2", &[("q", "5")], "L1"),
        ("omega4plus5", &[], "V4"),
        ("sl2_9_semidirect", &[], "V"),
        ("q8_c3_wr_c2", &[], "V"),
    ];
    for (g, ps, m) in cases {
        let ps: Vec<(String, String)> = ps.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let cg = make_group(g, &ps, DEFAULT_CAP, 0).map_err(|e| e.to_string())?;
        let v = cg.env.get(m).unwrap();
        let hom = Rep::hom_module(v, v).map_err(|e| e.to_string())?;
        let space = ext1(v, v).map_err(|e| e.to_string())?;
        ensure!(!space.basis.is_empty(), "{g}: empty Ext^1");
        for c in &space.basis {
            let edges = verify_cocycle(&hom, c, DEFAULT_MEMORY_CAP).map_err(|e| format!("{g}: {e}"))?;
            ensure!(edges == cg.group().nontree().len(), "{g}: checked {edges} of {} edges", cg.group().nontree().len());
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let checks = [Check::Adequacy, Check::Ext1, Check::Structure, Check::Forms, Check::Projective];
    let mut bytes = Vec::new();
    for i in 0..2 {
        let mut cfg = RunConfig::catalog("sl2", &[("q", "5")], "ext(L1,L1,0)", &checks);
        cfg.out = Some(dir.path().join(format!("r{i}.json")));
        let o = cmd_run(&cfg);
        ensure!(o.code == 0, "exit {}: {}", o.code, o.message);
        bytes.push(std::fs::read(cfg.out.unwrap()).map_err(|e| e.to_string())?);
    }
    ensure!(bytes[0] == bytes[1], "reports differ");
    let r: Report = serde_json::from_slice(&bytes[0]).map_err(|e| e.to_string())?;
    ensure!(
        matches!(&r.forms, Some(FormsSection::Computed { form_type, .. }) if form_type == "alternating"),
        "forms {:?}",
        r.forms
    );
    Ok(())
}

fn criterion_10() -> Outcome {
    duality_pairs().map_err(|e| format!("duality: {e}"))?;
    field_extension().map_err(|e| format!("field extension: {e}"))?;
    socle_radical_duality().map_err(|e| format!("socle/radical: {e}"))?;
    cocycle_reverification().map_err(|e| format!("cocycles: {e}"))?;
    determinism().map_err(|e| format!("determinism: {e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("SL2(5) weak adequacy, Ext^1, Steinberg projective", criterion_1),
        ("SL2(4) exceptional Steinberg module", criterion_2),
        ("SL2(9) modules of dims 3, 6, 9", criterion_3),
        ("Omega4+(5) Ext^1 = 2", criterion_4),
        ("SL2(9) semidirect Ext^1 = 2", criterion_5),
        ("wreath instance Ext^1 = 2", criterion_6),
        ("self-dual uniserial modules and form types", criterion_7),
        ("imprimitive degree-5 monomial groups", criterion_8),
        ("SL3(2) natural module", criterion_9),
        ("property suites", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let ms = t.elapsed().as_millis();
        match res {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({ms} ms)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({ms} ms): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
