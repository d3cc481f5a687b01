mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ordlat::mordell::{self, BoundsConfig};
use ordlat::num::{fmt_rational, parse_rational, rat};
use ordlat::verify::{self, CorpusSizes};
use ordlat::{catalog, corpus, io, reduction, sections};
use ordlat::{EnumOptions, Error, Order, PowerProduct};
use serde_json::{json, Value};

use render::Format;

#[derive(Parser)]
#[command(name = "ordlat", version, about = "Exact computations with lattices over maximal orders")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// LLL parameter, a rational in (1/4, 1).
    #[arg(long, global = true, default_value = "99/100")]
    delta: String,
    /// Enumeration node budget.
    #[arg(long, global = true, env = "ORDLAT_NODE_BUDGET")]
    node_budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the determinant D of an order.
    Dinv {
        #[arg(long)]
        order: String,
    },
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Audit(AuditCmd),
    #[command(subcommand)]
    Mordell(MordellCmd),
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Determinant, minimum, Hermite invariant and kissing number.
    Info {
        file: PathBuf,
        #[arg(long)]
        list_minvecs: bool,
    },
    /// Write the O-dual lattice.
    Dual {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Determinant, duality and section identities on a lattice file and/or
    /// seeded random corpora.
    Identities {
        file: Option<PathBuf>,
        /// Random subspaces tested on the file.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
        /// Also run the corpora.
        #[arg(long)]
        random: bool,
        /// Restrict the corpora to one order.
        #[arg(long)]
        order: Option<String>,
        /// Lattices (and section instances) per order in the corpora.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum AuditCmd {
    /// Equality conditions at the minimal vectors of the dual.
    Equality {
        file: PathBuf,
        #[arg(long)]
        reference: String,
        /// Test every minimal vector instead of one per unit orbit.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args)]
struct OrderArg {
    #[arg(long)]
    order: String,
}

#[derive(Subcommand)]
enum MordellCmd {
    /// Bound in K-dimension m from the value in K-dimension m-1.
    Step {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        gamma: String,
    },
    /// Steps from K-dimension m up to s.
    Iterate {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        gamma: String,
    },
    /// Best known, Mordell and conjectured Mordell bounds by dimension.
    Table {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        max_dim: u32,
        /// Bounds config; the shipped one for the order when omitted.
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Densest-known config for the conjectured column.
        #[arg(long)]
        conjectured: Option<PathBuf>,
    },
    /// Whether a candidate invariant in K-dimension m-1 contradicts the
    /// known value in K-dimension m.
    Obstruct {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        known: String,
        #[arg(long)]
        candidate: String,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    /// Recompute an entry's invariants against the stored values.
    Verify {
        name: String,
        /// Force the kissing number check on or off.
        #[arg(long, conflicts_with = "no_kissing")]
        kissing: bool,
        #[arg(long)]
        no_kissing: bool,
    },
    /// Write an entry as a lattice file (stdout without -o).
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Doc {
    Value(Value),
    Text(String),
    Table(mordell::BoundTable),
}

struct Outcome {
    doc: Doc,
    passed: bool,
}

fn ok(doc: Doc) -> Outcome {
    Outcome { doc, passed: true }
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn pp(s: &str) -> ordlat::Result<PowerProduct> {
    Ok(PowerProduct::parse(s)?)
}

fn pp_value(p: &PowerProduct) -> Value {
    json!({ "exact": p.to_string(), "decimal": p.to_decimal(12) })
}

fn options(cli: &Cli) -> ordlat::Result<EnumOptions> {
    let delta = parse_rational(&cli.delta)?;
    if delta <= rat(1, 4) || delta >= rat(1, 1) {
        return Err(Error::Config(format!("--delta must lie in (1/4, 1), got {}", cli.delta)));
    }
    let mut opts = EnumOptions {
        delta,
        ..EnumOptions::default()
    };
    if let Some(b) = cli.node_budget {
        opts.node_budget = b;
    }
    Ok(opts)
}

fn read_text(path: &Path) -> ordlat::Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn lattice_info(file: &Path, list: bool, opts: &EnumOptions) -> ordlat::Result<Outcome> {
    let l = io::read_lattice(file)?;
    let mv = reduction::minimal_vectors(&l, opts)?;
    let h = reduction::HermiteData::new(mv.norm.clone(), l.determinant(), l.rank());
    let mut out = json!({
        "order": l.order().name(),
        "m": l.m(),
        "rank": l.rank(),
        "det": fmt_rational(&h.det),
        "min_norm": fmt_rational(&h.min_norm),
        "gamma_nth": fmt_rational(&h.gamma_nth),
        "gamma": h.gamma_decimal,
        "kissing": mv.vectors.len(),
    });
    if list {
        let mut vs: Vec<Vec<String>> = mv.vectors.iter().map(|v| v.iter().map(fmt_rational).collect()).collect();
        vs.sort();
        out["minimal_vectors"] = value(&vs);
    }
    Ok(ok(Doc::Value(out)))
}

fn identities(
    file: Option<&Path>,
    trials: usize,
    seed: u64,
    random: bool,
    order: Option<&str>,
    count: usize,
    opts: &EnumOptions,
) -> ordlat::Result<Outcome> {
    if file.is_none() && !random {
        return Err(Error::Config("give a lattice file, --random, or both".into()));
    }
    let mut reports = Vec::new();
    if let Some(f) = file {
        let l = io::read_lattice(f)?;
        reports.push(verify::lattice_suite(&l, trials, seed, opts)?);
    }
    if random {
        let names: Vec<&str> = match order {
            Some(o) => vec![o],
            None => ordlat::orders::BUILTIN_ORDERS.to_vec(),
        };
        let orders = names.iter().map(|n| Order::builtin(n).map(Arc::new)).collect::<ordlat::Result<Vec<_>>>()?;
        let sizes = CorpusSizes {
            lattices: count,
            nested: count.div_ceil(4),
            sections: count,
        };
        reports.extend(verify::corpus_suites(&orders, sizes, seed, opts)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    let rows: Vec<Value> = reports
        .iter()
        .flat_map(|r| {
            r.results.iter().map(move |x| {
                json!({
                    "order": r.order,
                    "identity": x.identity,
                    "instances": x.instances,
                    "failures": x.failures,
                    "first_failure": x.first_failure,
                })
            })
        })
        .collect();
    Ok(Outcome {
        doc: Doc::Value(json!({ "seed": seed, "passed": passed, "results": rows })),
        passed,
    })
}

fn bounds_table(order: &str, max_dim: u32, bounds: Option<&Path>, conj: Option<&Path>) -> ordlat::Result<Outcome> {
    let o = Order::builtin(order)?;
    let (main, densest) = match bounds {
        Some(p) => (BoundsConfig::from_json(&read_text(p)?)?, None),
        None => (mordell::shipped_config(order)?, mordell::shipped_densest(order)?),
    };
    let densest = match conj {
        Some(p) => Some(BoundsConfig::from_json(&read_text(p)?)?),
        None => densest,
    };
    let t = mordell::build_table(&o, max_dim, &main, densest.as_ref())?;
    Ok(ok(Doc::Table(t)))
}

fn run(cli: &Cli) -> ordlat::Result<Outcome> {
    let opts = options(cli)?;
    match &cli.command {
        Command::Dinv { order } => Ok(ok(Doc::Text(fmt_rational(&Order::builtin(order)?.d_invariant())))),
        Command::Lattice(LatticeCmd::Info { file, list_minvecs }) => lattice_info(file, *list_minvecs, &opts),
        Command::Lattice(LatticeCmd::Dual { file, output }) => {
            let src = io::read_lattice_file(file)?;
            let dual = src.to_lattice()?.o_dual();
            io::write_lattice(output, &dual, src.metadata)?;
            Ok(ok(Doc::Value(json!({
                "output": output.display().to_string(),
                "det": fmt_rational(&dual.determinant()),
            }))))
        }
        Command::Verify(VerifyCmd::Identities {
            file,
            trials,
            seed,
            random,
            order,
            count,
        }) => identities(file.as_deref(), *trials, *seed, *random, order.as_deref(), *count, &opts),
        Command::Audit(AuditCmd::Equality { file, reference, all }) => {
            let l = io::read_lattice(file)?;
            let r = sections::equality_audit(&l, &pp(reference)?, *all, &opts)?;
            Ok(Outcome {
                passed: r.all_conditions_hold,
                doc: Doc::Value(value(&r)),
            })
        }
        Command::Mordell(MordellCmd::Step { order, m, gamma }) => {
            let v = mordell::mordell_step(&Order::builtin(&order.order)?, *m, &pp(gamma)?)?;
            Ok(ok(Doc::Value(pp_value(&v))))
        }
        Command::Mordell(MordellCmd::Iterate { order, m, s, gamma }) => {
            let v = mordell::mordell_iterate(&Order::builtin(&order.order)?, *m, *s, &pp(gamma)?)?;
            Ok(ok(Doc::Value(pp_value(&v))))
        }
        Command::Mordell(MordellCmd::Table {
            order,
            max_dim,
            bounds,
            conjectured,
        }) => bounds_table(&order.order, *max_dim, bounds.as_deref(), conjectured.as_deref()),
        Command::Mordell(MordellCmd::Obstruct {
            order,
            m,
            known,
            candidate,
        }) => {
            let r = mordell::structure_obstruction(&Order::builtin(&order.order)?, *m, &pp(known)?, &pp(candidate)?)?;
            Ok(ok(Doc::Value(json!({
                "order": r.order,
                "m": r.m,
                "known": r.known.to_string(),
                "candidate": r.candidate.to_string(),
                "bound_from_candidate": r.bound_from_candidate.to_string(),
                "verdict": value(&r.verdict),
                "test": r.test,
                "caveat": r.caveat,
            }))))
        }
        Command::Catalog(CatalogCmd::List) => {
            let rows: Vec<Value> = catalog::list_entries()
                .iter()
                .map(|n| {
                    let e = catalog::entry(n)?;
                    Ok(json!({
                        "name": n,
                        "order": e.order,
                        "det": fmt_rational(&e.expected.det),
                        "min_norm": fmt_rational(&e.expected.min_norm),
                        "gamma": e.expected.gamma.to_string(),
                    }))
                })
                .collect::<ordlat::Result<_>>()?;
            Ok(ok(Doc::Value(Value::Array(rows))))
        }
        Command::Catalog(CatalogCmd::Verify { name, kissing, no_kissing }) => {
            let force = match (kissing, no_kissing) {
                (true, _) => Some(true),
                (_, true) => Some(false),
                _ => None,
            };
            let r = catalog::verify_entry(name, &opts, force)?;
            Ok(Outcome {
                passed: r.passed,
                doc: Doc::Value(value(&r)),
            })
        }
        Command::Catalog(CatalogCmd::Export { name, output }) => match output {
            Some(p) => {
                catalog::export_entry(name, p)?;
                Ok(ok(Doc::Value(json!({ "name": name, "output": p.display().to_string() }))))
            }
            None => Ok(ok(Doc::Text(catalog::export_file(name)?.to_json()))),
        },
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NodeBudget { .. } => 3,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::RankDeficient { .. } => "rank_deficient",
        Error::OrderMismatch(..) => "order_mismatch",
        Error::AlgebraMismatch => "algebra_mismatch",
        Error::NotPositiveDefinite { .. } => "not_positive_definite",
        Error::NodeBudget { .. } => "node_budget",
        Error::Precondition(_) => "precondition",
        Error::NotANorm(_) => "not_a_norm",
        Error::UnknownOrder(_) => "unknown_order",
        Error::UnknownEntry(_) => "unknown_entry",
        Error::InvalidOrder(_) => "invalid_order",
        Error::Config(_) => "config",
        Error::MissingBound(_) => "missing_bound",
        Error::Ambiguous(..) => "ambiguous",
        Error::Io { .. } => "io",
        Error::Json(_) => "json",
    }
}

fn report_error(json_errors: bool, kind: &str, message: &str, code: u8) -> ExitCode {
    if json_errors {
        eprintln!("{}", json!({ "error": kind, "message": message, "exit_code": code }));
    } else {
        eprintln!("error: {message}");
    }
    ExitCode::from(code)
}

fn wants_json(args: &[String]) -> bool {
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || args.iter().any(|a| a == "--format=json")
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if wants_json(&args) => {
            let msg = e.to_string();
            let text: Vec<&str> = msg
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .collect();
            return report_error(true, "usage", text.join(" ").trim_start_matches("error: "), 2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = match &out.doc {
                Doc::Text(s) => s.clone(),
                Doc::Value(v) => render::render(cli.format, v),
                Doc::Table(t) => match cli.format {
                    Format::Md => t.to_markdown(),
                    Format::Csv => t.to_csv(),
                    Format::Json => render::render(cli.format, &value(t)),
                },
            };
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => report_error(cli.format == Format::Json, error_kind(&e), &e.to_string(), exit_code(&e)),
    }
}
