use std::path::PathBuf;
use std::process::ExitCode;

use adequacy::{cmd_run, load_manifest, run_batch, Check, GroupSource, RunConfig};
use adequacy_core::catalog::ENTRIES;
use adequacy_core::group::{DEFAULT_CAP, DEFAULT_MEMORY_CAP};
use clap::Parser;

fn catalog_help() -> String {
    let mut s = String::from("Catalog groups:\n");
    for (name, doc) in ENTRIES {
        s += &format!("  {name:<18} {doc}\n");
    }
    s
}

/// Adequacy, cohomology and module-structure checks for finite matrix groups.
#[derive(Parser, Debug)]
#[command(version, after_help = catalog_help())]
struct Args {
    /// Catalog name or path to a JSON group spec.
    #[arg(long, required_unless_present = "batch")]
    group: Option<String>,
    /// Catalog parameter, e.g. q=9 (repeatable).
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, String)>,
    /// Module expression, e.g. "sym(2,natural)".
    #[arg(long, default_value = "natural")]
    module: String,
    /// adequacy, weak, ext1, structure, forms or projective (repeatable; default adequacy).
    #[arg(long = "check")]
    checks: Vec<Check>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extend scalars by this degree.
    #[arg(long = "field-ext", default_value_t = 1)]
    field_ext: u32,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "cap-elems", default_value_t = DEFAULT_CAP)]
    cap_elems: usize,
    /// Memory cap in MB.
    #[arg(long = "cap-mem", default_value_t = DEFAULT_MEMORY_CAP >> 20)]
    cap_mem: usize,
    /// JSON manifest `{"runs": [RunConfig, ...]}`.
    #[arg(long)]
    batch: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Include per-stage timings in the report.
    #[arg(long)]
    timings: bool,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(path) = &args.batch {
        let manifest = match load_manifest(path) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("batch: {e}");
                return ExitCode::from(2);
            }
        };
        let outcomes = match run_batch(&manifest, args.workers) {
            Ok(o) => o,
            Err(e) => {
                eprintln!("batch: {e}");
                return ExitCode::from(2);
            }
        };
        let mut worst = 0;
        for (i, o) in outcomes.iter().enumerate() {
            println!("[{i}] exit {}", o.code);
            print!("{}", o.message.trim_end());
            println!();
            worst = worst.max(o.code);
        }
        return ExitCode::from(worst as u8);
    }
    let config = RunConfig {
        group: GroupSource::parse(args.group.as_deref().expect("required"), &args.params),
        module: args.module,
        checks: if args.checks.is_empty() { vec![Check::Adequacy] } else { args.checks },
        seed: args.seed,
        field_ext: args.field_ext,
        out: args.out,
        cap_elems: args.cap_elems,
        cap_mem: args.cap_mem,
        timings: args.timings,
    };
    let o = cmd_run(&config);
    if o.code == 0 {
        print!("{}", o.message);
    } else {
        eprintln!("{}", o.message);
    }
    ExitCode::from(o.code as u8)
}
