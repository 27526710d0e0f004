//! Group spec files, run configuration and JSON reports on top of
//! `adequacy-core`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use adequacy_core::adequacy::{adequacy_report_capped, weak_span_capped};
use adequacy_core::catalog::{make_group, CatalogGroup};
use adequacy_core::cohomology::ext1_capped;
use adequacy_core::dsl::{build, Env, EvalOptions};
use adequacy_core::group::{GroupData, DEFAULT_CAP, DEFAULT_MEMORY_CAP};
use adequacy_core::meataxe::{chop_labeled, is_indecomposable, FactorList};
use adequacy_core::rep::Rep;
use adequacy_core::structure::{check_simples, invariant_forms, is_projective, loewy_selfdual};
use adequacy_core::{Error, ErrorKind, Field, Mat};
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Adequacy,
    Weak,
    Ext1,
    Structure,
    Forms,
    Projective,
}

impl std::str::FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Check, String> {
        Ok(match s {
            "adequacy" => Check::Adequacy,
            "weak" => Check::Weak,
            "ext1" => Check::Ext1,
            "structure" => Check::Structure,
            "forms" => Check::Forms,
            "projective" => Check::Projective,
            _ => return Err(format!("unknown check {s:?}")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSource {
    Catalog { name: String, #[serde(default)] params: BTreeMap<String, String> },
    File { path: PathBuf },
}

impl GroupSource {
    /// A path to an existing file, or a `.json` name, is a spec file;
    /// anything else is a catalog name.
    pub fn parse(name: &str, params: &[(String, String)]) -> GroupSource {
        if name.ends_with(".json") || Path::new(name).is_file() {
            GroupSource::File { path: name.into() }
        } else {
            GroupSource::Catalog { name: name.into(), params: params.iter().cloned().collect() }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub group: GroupSource,
    pub module: String,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub field_ext: u32,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_cap")]
    pub cap_elems: usize,
    /// Megabytes.
    #[serde(default = "default_mem")]
    pub cap_mem: usize,
    #[serde(default)]
    pub timings: bool,
}

fn one() -> u32 {
    1
}
fn default_cap() -> usize {
    DEFAULT_CAP
}
fn default_mem() -> usize {
    DEFAULT_MEMORY_CAP >> 20
}

impl RunConfig {
    pub fn catalog(name: &str, params: &[(&str, &str)], module: &str, checks: &[Check]) -> RunConfig {
        RunConfig {
            group: GroupSource::Catalog {
                name: name.into(),
                params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            },
            module: module.into(),
            checks: checks.to_vec(),
            seed: 0,
            field_ext: 1,
            out: None,
            cap_elems: DEFAULT_CAP,
            cap_mem: default_mem(),
            timings: false,
        }
    }

    fn mem_bytes(&self) -> usize {
        self.cap_mem.saturating_mul(1 << 20)
    }
}

/// A matrix entry: a field element index (negative means additive inverse)
/// or a coefficient list in the field generator, constant term first.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Coeffs(Vec<i64>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub field: FieldSpec,
    /// Generators as lists of rows.
    pub generators: Vec<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub cap: Option<usize>,
    /// Named modules as expressions.
    #[serde(default)]
    pub modules: BTreeMap<String, String>,
    /// Names from `modules` forming a complete list of simples.
    #[serde(default)]
    pub simples: Option<Vec<String>>,
}

impl GroupSpec {
    pub fn field(&self) -> adequacy_core::Result<Arc<Field>> {
        match &self.field.modulus {
            Some(m) => Field::with_modulus(self.field.p, self.field.k, m),
            None => Field::new(self.field.p, self.field.k),
        }
    }

    pub fn matrices(&self, f: &Arc<Field>) -> adequacy_core::Result<Vec<Mat>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(g, rows)| {
                let n = rows.len();
                let mut data = Vec::with_capacity(n * n);
                for row in rows {
                    if row.len() != n {
                        return Err(Error::Dimension(format!("generator {g} is not square")));
                    }
                    for e in row {
                        data.push(match e {
                            Entry::Int(x) => f.from_index(*x)?,
                            Entry::Coeffs(c) => f.from_coeffs(c)?,
                        });
                    }
                }
                Mat::from_vec(f, n, n, data)
            })
            .collect()
    }

    pub fn build(&self, cap: usize, seed: u64, mem_cap: usize) -> adequacy_core::Result<CatalogGroup> {
        let f = self.field()?;
        let gens = self.matrices(&f)?;
        if gens.is_empty() {
            return Err(Error::Dimension("a group spec needs at least one generator".into()));
        }
        let g = Arc::new(GroupData::enumerate(&gens, self.cap.unwrap_or(cap).min(cap))?);
        let mut env = Env::new(&g);
        let opts = EvalOptions { seed, mem_cap };
        for (name, src) in &self.modules {
            let r = build(src, &env, &opts)?;
            env.bind(name.clone(), r);
        }
        let simples = match &self.simples {
            Some(names) => {
                let list = names
                    .iter()
                    .map(|n| env.get(n).cloned().map(|r| (n.clone(), r)).ok_or_else(|| Error::Unbound(n.clone())))
                    .collect::<adequacy_core::Result<Vec<_>>>()?;
                let reps: Vec<Rep> = list.iter().map(|(_, r)| r.clone()).collect();
                check_simples(&reps, seed)?;
                Some(list)
            }
            None => None,
        };
        Ok(CatalogGroup { name: self.name.clone().unwrap_or_else(|| "spec".into()), env, simples })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub group: String,
    pub order: usize,
    pub field: String,
    pub module: String,
    pub dim: usize,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdequacySection {
    pub span_dim: usize,
    pub weak_ok: bool,
    pub h1_trivial_dim: usize,
    pub h1_adq_dim: usize,
    pub ext1_self_dim: usize,
    pub h1_trivial_ok: bool,
    pub h1_adq_ok: bool,
    pub adequate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakSection {
    pub span_dim: usize,
    pub full_dim: usize,
    pub weak_ok: bool,
}

/// `self` is dim Ext^1(V,V); `dual` is dim Ext^1(V*,V*).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ext1Section {
    #[serde(rename = "self")]
    pub self_dim: usize,
    pub dual: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub name: String,
    pub dim: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSection {
    pub composition: Vec<Layer>,
    /// Bottom first.
    pub socle: Vec<Vec<Layer>>,
    /// Head first.
    pub radical: Vec<Vec<Layer>>,
    pub shape: String,
    pub uniserial: bool,
    pub self_dual: bool,
    pub indecomposable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormsSection {
    Computed {
        dim: usize,
        sym_dim: usize,
        alt_dim: usize,
        degenerate_dim: usize,
        single_type: bool,
        #[serde(rename = "type")]
        form_type: String,
    },
    Unsupported { unsupported: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub adequacy: Option<AdequacySection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weak: Option<WeakSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ext1: Option<Ext1Section>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structure: Option<StructureSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub forms: Option<FormsSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub projective: Option<bool>,
    /// Milliseconds per stage; only with `timings` set.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One-paragraph human summary.
    pub fn summary(&self) -> String {
        let m = &self.meta;
        let mut out = format!("{} (order {}) over {}: module {} of dim {}\n", m.group, m.order, m.field, m.module, m.dim);
        if let Some(a) = &self.adequacy {
            out += &format!(
                "  adequacy: span {}/{} h1(k)={} h1(adq)={} ext1(V,V)={} -> {}\n",
                a.span_dim,
                m.dim * m.dim,
                a.h1_trivial_dim,
                a.h1_adq_dim,
                a.ext1_self_dim,
                if a.adequate { "adequate" } else { "not adequate" }
            );
        }
        if let Some(w) = &self.weak {
            out += &format!("  weak: span {}/{} -> {}\n", w.span_dim, w.full_dim, w.weak_ok);
        }
        if let Some(e) = &self.ext1 {
            out += &format!("  ext1: self {} dual {}\n", e.self_dim, e.dual);
        }
        if let Some(s) = &self.structure {
            out += &format!(
                "  structure: {} uniserial={} self_dual={} indecomposable={}\n",
                s.shape, s.uniserial, s.self_dual, s.indecomposable
            );
        }
        match &self.forms {
            Some(FormsSection::Computed { dim, form_type, .. }) => {
                out += &format!("  forms: dim {dim} type {form_type}\n")
            }
            Some(FormsSection::Unsupported { unsupported }) => out += &format!("  forms: unsupported ({unsupported})\n"),
            None => {}
        }
        if let Some(p) = self.projective {
            out += &format!("  projective: {p}\n");
        }
        out
    }
}

/// An error tagged with the pipeline stage that raised it.
#[derive(Debug)]
pub struct RunError {
    pub stage: &'static str,
    pub kind: ErrorKind,
    pub message: String,
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

impl std::error::Error for RunError {}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Resource => 3,
            ErrorKind::Uncertified => 1,
        }
    }

    fn input(stage: &'static str, message: impl Into<String>) -> RunError {
        RunError { stage, kind: ErrorKind::Input, message: message.into() }
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, RunError>;
}

impl<T> Stage<T> for adequacy_core::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, RunError> {
        self.map_err(|e| RunError { stage, kind: e.kind(), message: e.to_string() })
    }
}

fn layers(list: &FactorList) -> Vec<Layer> {
    list.iter().map(|f| Layer { name: f.name(), dim: f.rep.dim(), multiplicity: f.multiplicity }).collect()
}

/// Load the group named by the config, with field extension applied.
pub fn load_group(config: &RunConfig) -> Result<CatalogGroup, RunError> {
    let mem = config.mem_bytes();
    let g = match &config.group {
        GroupSource::Catalog { name, params } => {
            let params: Vec<(String, String)> = params.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            make_group(name, &params, config.cap_elems, config.seed).stage("group")?
        }
        GroupSource::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::input("group", format!("cannot read {}: {e}", path.display())))?;
            let spec: GroupSpec = serde_json::from_str(&text)
                .map_err(|e| RunError::input("group", format!("bad group spec {}: {e}", path.display())))?;
            spec.build(config.cap_elems, config.seed, mem).stage("group")?
        }
    };
    if config.field_ext == 0 {
        return Err(RunError::input("group", "field extension degree must be at least 1"));
    }
    g.base_change(config.field_ext, config.cap_elems).stage("field-ext")
}

/// Run the requested checks and return the report.
pub fn run(config: &RunConfig) -> Result<Report, RunError> {
    if config.checks.is_empty() {
        return Err(RunError::input("config", "no checks requested"));
    }
    let mut checks = config.checks.clone();
    checks.sort();
    checks.dedup();
    let mem = config.mem_bytes();
    let mut timings = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut BTreeMap<String, u64>| {
        timings.insert(name.to_string(), clock.elapsed().as_millis() as u64);
        clock = Instant::now();
    };

    let cg = load_group(config)?;
    lap("group", &mut timings);
    let opts = EvalOptions { seed: config.seed, mem_cap: mem };
    let v = build(&config.module, &cg.env, &opts).stage("module")?;
    lap("module", &mut timings);
    let group = cg.group();
    let mut report = Report {
        meta: Meta {
            group: cg.name.clone(),
            order: group.order(),
            field: group.field().to_string(),
            module: v.label().to_string(),
            dim: v.dim(),
            seed: config.seed,
            version: VERSION.into(),
        },
        adequacy: None,
        weak: None,
        ext1: None,
        structure: None,
        forms: None,
        projective: None,
        timings: None,
    };
    let names = cg.simples.clone().unwrap_or_default();
    for check in checks {
        match check {
            Check::Adequacy => {
                let a = adequacy_report_capped(&v, &cg.name, mem).stage("adequacy")?;
                report.adequacy = Some(AdequacySection {
                    span_dim: a.span_dim,
                    weak_ok: a.weak_ok,
                    h1_trivial_dim: a.h1_trivial_dim,
                    h1_adq_dim: a.h1_adq_dim,
                    ext1_self_dim: a.ext1_self_dim,
                    h1_trivial_ok: a.h1_trivial_ok,
                    h1_adq_ok: a.h1_adq_ok,
                    adequate: a.adequate,
                });
                lap("adequacy", &mut timings);
            }
            Check::Weak => {
                let span_dim = weak_span_capped(&v, mem).stage("weak")?;
                let full_dim = v.dim() * v.dim();
                report.weak = Some(WeakSection { span_dim, full_dim, weak_ok: span_dim == full_dim });
                lap("weak", &mut timings);
            }
            Check::Ext1 => {
                let self_dim = ext1_capped(&v, &v, mem).stage("ext1")?.h1_dim;
                let d = v.dual().stage("ext1")?;
                let dual = ext1_capped(&d, &d, mem).stage("ext1")?.h1_dim;
                report.ext1 = Some(Ext1Section { self_dim, dual });
                lap("ext1", &mut timings);
            }
            Check::Structure => {
                let comp = chop_labeled(&v, config.seed, &names).stage("structure")?;
                let l = loewy_selfdual(&v, &names, None, config.seed).stage("structure")?;
                let indecomposable = is_indecomposable(&v, config.seed).stage("structure")?.is_indecomposable();
                report.structure = Some(StructureSection {
                    composition: layers(&comp),
                    socle: l.socle.iter().map(layers).collect(),
                    radical: l.radical.iter().map(layers).collect(),
                    shape: l.shape(),
                    uniserial: l.uniserial,
                    self_dual: l.self_dual,
                    indecomposable,
                });
                lap("structure", &mut timings);
            }
            Check::Forms => {
                report.forms = Some(match invariant_forms(&v) {
                    Ok(fs) => FormsSection::Computed {
                        dim: fs.basis.len(),
                        sym_dim: fs.sym_dim,
                        alt_dim: fs.alt_dim,
                        degenerate_dim: fs.degenerate_dim,
                        single_type: fs.single_type,
                        form_type: fs.type_verdict.as_str().into(),
                    },
                    Err(Error::Unsupported(msg)) => FormsSection::Unsupported { unsupported: msg },
                    Err(e) => return Err(RunError { stage: "forms", kind: e.kind(), message: e.to_string() }),
                });
                lap("forms", &mut timings);
            }
            Check::Projective => {
                let simples = cg
                    .simple_reps()
                    .ok_or_else(|| RunError::input("projective", format!("{} has no complete list of simples", cg.name)))?;
                report.projective = Some(is_projective(&v, &simples, config.seed).stage("projective")?);
                lap("projective", &mut timings);
            }
        }
    }
    if config.timings {
        report.timings = Some(timings);
    }
    Ok(report)
}

/// Outcome of one run: exit code, report when computed, and a human line.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<Report>,
    pub message: String,
}

/// Run, write the report to `config.out` if set, and map errors to exit
/// codes: 0 computed, 1 uncertified, 2 input, 3 resource cap.
pub fn cmd_run(config: &RunConfig) -> Outcome {
    match run(config) {
        Ok(report) => {
            if let Some(path) = &config.out {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    return Outcome { code: 2, report: Some(report), message: format!("output: {}: {e}", path.display()) };
                }
            }
            let message = report.summary();
            Outcome { code: 0, report: Some(report), message }
        }
        Err(e) => Outcome { code: e.exit_code(), report: None, message: e.to_string() },
    }
}

/// A batch manifest: a list of runs. Relative `out` and spec paths are
/// resolved against the manifest directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub runs: Vec<RunConfig>,
}

pub fn load_manifest(path: &Path) -> anyhow::Result<Manifest> {
    let text = std::fs::read_to_string(path)?;
    let mut m: Manifest = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for r in &mut m.runs {
        if let Some(out) = &mut r.out {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        if let GroupSource::File { path } = &mut r.group {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
    Ok(m)
}

/// Run every manifest entry on a pool of `workers` threads; outcomes are in
/// manifest order.
pub fn run_batch(manifest: &Manifest, workers: usize) -> anyhow::Result<Vec<Outcome>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    Ok(pool.install(|| manifest.runs.par_iter().map(cmd_run).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_5_natural_adequacy() {
        let r = run(&RunConfig::catalog("sl2", &[("q", "5")], "sym(1,natural)", &[Check::Adequacy])).unwrap();
        let a = r.adequacy.unwrap();
        assert!(a.weak_ok);
        assert_eq!(a.ext1_self_dim, 1);
        assert_eq!(r.meta.order, 120);
    }

    #[test]
    fn exit_codes() {
        let bad = RunConfig::catalog("nope", &[], "natural", &[Check::Weak]);
        assert_eq!(cmd_run(&bad).code, 2);
        let parse = RunConfig::catalog("sl2", &[("q", "5")], "sym(1,", &[Check::Weak]);
        let o = cmd_run(&parse);
        assert_eq!(o.code, 2);
        assert!(o.message.starts_with("module:"), "{}", o.message);
        let mut cap = RunConfig::catalog("sl2", &[("q", "5")], "natural", &[Check::Weak]);
        cap.cap_elems = 10;
        assert_eq!(cmd_run(&cap).code, 3);
        let none = RunConfig::catalog("sl2", &[("q", "5")], "natural", &[]);
        assert_eq!(cmd_run(&none).code, 2);
    }

    #[test]
    fn spec_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        std::fs::write(
            &path,
            r#"{"name":"c5","field":{"p":5},"generators":[[[1,1],[0,1]]],"modules":{"k":"trivial(1)"},"simples":["k"]}"#,
        )
        .unwrap();
        let mut cfg = RunConfig::catalog("x", &[], "natural", &[Check::Ext1, Check::Projective]);
        cfg.group = GroupSource::File { path: path.clone() };
        let r = run(&cfg).unwrap();
        assert_eq!(r.meta.order, 5);
        assert_eq!(r.projective, Some(false));
        std::fs::write(&path, r#"{"field":{"p":5},"generators":[[[1,1],[2,2]]]}"#).unwrap();
        assert_eq!(cmd_run(&cfg).code, 2);
    }
}
