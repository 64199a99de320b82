//! Command-line entry point: parse space files, derive structures, build
//! completions, run the law suite, and browse the named catalog.
//!
//! Exit codes: 0 on success, 1 when a check suite reports a failure, 2 on
//! usage, parse, or validation errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qdom::catalog::{self, Profile};
use qdom::continuity::{way_below, WayBelowKind};
use qdom::extval::ExtVal;
use qdom::formalballs::{self, smyth_completion};
use qdom::grel::GRel;
use qdom::harness::{self, Scope};
use qdom::hyperspace::{ideal_completion_space, ideal_family, HausdorffKind};
use qdom::space::{mask_of, members, DistanceSpace};
use qdom::spacefile::{self, SpaceFile};
use qdom::topology::{FiniteTopology, TopKind};

#[derive(Parser)]
#[command(
    name = "qdom",
    version,
    about = "Exact distance-space kernel: derive, complete, and check"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive hemimetrics, orders, topologies, or way-below distances.
    Derive(DeriveArgs),
    /// Build a completion and dump it (optionally with a DOT diagram).
    Complete(CompleteArgs),
    /// Run the law suite over the named catalog or random spaces.
    Check(CheckArgs),
    /// List the named catalog, or print one entry.
    Catalog {
        /// Entry to print; omit to list all entries.
        name: Option<String>,
    },
}

#[derive(Args)]
struct DeriveArgs {
    /// Space file, JSON or line format.
    file: PathBuf,
    /// Structure to derive.
    #[arg(long, value_enum)]
    what: What,
    /// Way-below flavor (used with --what way-below).
    #[arg(long, value_enum, default_value_t = Kind::SmythTop)]
    kind: Kind,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    /// Upper and lower hemimetrics.
    Hemimetrics,
    /// The induced preorder and strict order, as pair lists.
    Orders,
    /// All six derived topologies, as open-set lists.
    Topologies,
    /// The way-below distance of the chosen flavor.
    WayBelow,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Cauchy nets converging in the Smyth topology.
    SmythTop,
    /// Cauchy nets converging in the Yoneda topology.
    YonedaTop,
    /// Directed subsets with a maximum.
    MaxRel,
    /// Directed subsets with a supremum.
    SupRel,
}

impl Kind {
    fn to_way_below(self) -> WayBelowKind {
        match self {
            Kind::SmythTop => WayBelowKind::SmythTop,
            Kind::YonedaTop => WayBelowKind::YonedaTop,
            Kind::MaxRel => WayBelowKind::MaxRel,
            Kind::SupRel => WayBelowKind::SupRel,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::SmythTop => "smyth-top",
            Kind::YonedaTop => "yoneda-top",
            Kind::MaxRel => "max-rel",
            Kind::SupRel => "sup-rel",
        }
    }
}

#[derive(Args)]
struct CompleteArgs {
    /// Space file, JSON or line format.
    file: PathBuf,
    /// Completion to build.
    #[arg(long, value_enum)]
    mode: Mode,
    /// Also print the completion's specialization order as a DOT digraph.
    #[arg(long)]
    dot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Directed-subset completion under the max order.
    Relational,
    /// Zero-aperture ideals with the reverse-Hausdorff distance.
    Smyth,
    /// The same ideals with the classical Hausdorff distance.
    Yoneda,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("scope").required(true).multiple(false))]
struct CheckArgs {
    /// Run the full named catalog (including registered witnesses).
    #[arg(long, group = "scope")]
    named: bool,
    /// Run this many seeded random spaces instead.
    #[arg(long, value_name = "N", group = "scope")]
    random: Option<usize>,
    /// Point-count range for random spaces, inclusive (e.g. 2..5).
    #[arg(long, default_value = "2..4", value_parser = parse_sizes)]
    sizes: (usize, usize),
    /// Seed for random spaces.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random profiles, comma-separated.
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_profile,
        default_value = "generic,hemimetric,quasimetric,characteristic-relation"
    )]
    profiles: Vec<Profile>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the suite (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_sizes(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("{text:?} is not a range; use a..b"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("{text:?} must satisfy 1 <= a <= b"));
    }
    Ok((lo, hi))
}

fn parse_profile(text: &str) -> Result<Profile, String> {
    text.parse()
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes, as line filters expect.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Derive(args) => cmd_derive(&args),
        Command::Complete(args) => cmd_complete(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Catalog { name } => cmd_catalog(name.as_deref()),
    }
}

fn fail(context: &str, e: impl Display) -> String {
    format!("{context}: {e}")
}

fn load_file(path: &Path) -> Result<(SpaceFile, DistanceSpace), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(&format!("cannot read {}", path.display()), e))?;
    spacefile::load(&text).map_err(|e| fail(&path.display().to_string(), e))
}

fn matrix_json(d: &GRel) -> Value {
    let rows: Vec<Vec<String>> = (0..d.rows())
        .map(|x| (0..d.cols()).map(|y| d.get(x, y).to_string()).collect())
        .collect();
    json!(rows)
}

/// Pairs (x, y) standing in a characteristic relation, as label pairs.
fn pair_list(rel: &GRel, labels: &[String]) -> Value {
    let mut pairs: Vec<[&String; 2]> = Vec::new();
    for x in 0..rel.rows() {
        for y in 0..rel.cols() {
            if rel.get(x, y).is_zero() {
                pairs.push([&labels[x], &labels[y]]);
            }
        }
    }
    json!(pairs)
}

fn cmd_derive(args: &DeriveArgs) -> Result<ExitCode, String> {
    let (file, space) = load_file(&args.file)?;
    let body = match args.what {
        What::Hemimetrics => json!({
            "name": file.name,
            "points": file.points,
            "distance": matrix_json(space.d()),
            "upper": matrix_json(&space.upper_hemimetric()),
            "lower": matrix_json(&space.lower_hemimetric()),
        }),
        What::Orders => json!({
            "name": file.name,
            "points": file.points,
            "leq": pair_list(&space.leq_rel(), space.labels()),
            "strict": pair_list(&space.strict_rel(), space.labels()),
        }),
        What::Topologies => {
            let mut tops = serde_json::Map::new();
            for kind in TopKind::ALL {
                let top = FiniteTopology::generate(&space, kind)
                    .map_err(|e| fail("cannot derive topologies", e))?;
                let opens: Vec<Vec<&String>> = top
                    .opens()
                    .iter()
                    .map(|&o| members(o).map(|x| &space.labels()[x]).collect())
                    .collect();
                tops.insert(top_name(kind).to_string(), json!(opens));
            }
            json!({
                "name": file.name,
                "points": file.points,
                "topologies": tops,
            })
        }
        What::WayBelow => {
            let w = way_below(&space, args.kind.to_way_below())
                .map_err(|e| fail("cannot derive the way-below distance", e))?;
            json!({
                "name": file.name,
                "points": file.points,
                "kind": args.kind.name(),
                "way_below": matrix_json(&w),
            })
        }
    };
    println!("{}", pretty(&body));
    Ok(ExitCode::SUCCESS)
}

fn top_name(kind: TopKind) -> &'static str {
    match kind {
        TopKind::Ball => "ball",
        TopKind::Lower => "lower",
        TopKind::Smyth => "smyth",
        TopKind::Upper => "upper",
        TopKind::Yoneda => "yoneda",
        TopKind::SymmetricBall => "symmetric-ball",
    }
}

fn embedding_json(base: &DistanceSpace, completion: &DistanceSpace, map: &[usize]) -> Value {
    let mut out = serde_json::Map::new();
    for (x, &ix) in map.iter().enumerate() {
        out.insert(
            base.labels()[x].clone(),
            json!(completion.labels()[ix].clone()),
        );
    }
    Value::Object(out)
}

fn cmd_complete(args: &CompleteArgs) -> Result<ExitCode, String> {
    let (file, space) = load_file(&args.file)?;
    let (body, completion_space) = match args.mode {
        Mode::Relational => {
            let completion = ideal_completion_space(&space)
                .map_err(|e| fail("cannot build the relational completion", e))?;
            let fam = ideal_family(&space)
                .map_err(|e| fail("cannot build the relational completion", e))?;
            let ideals: Vec<Vec<&String>> = fam
                .members()
                .iter()
                .map(|&set| members(set).map(|x| &space.labels()[x]).collect())
                .collect();
            let upper = space
                .with_matrix(space.upper_hemimetric())
                .map_err(|e| fail("cannot derive the upper hemimetric", e))?;
            let upper_ball = FiniteTopology::generate(&upper, TopKind::Ball)
                .map_err(|e| fail("cannot derive the ideal closure", e))?;
            let embedding: Vec<usize> = (0..space.n())
                .map(|x| {
                    let down = upper_ball.closure(mask_of([x]));
                    fam.members()
                        .iter()
                        .position(|&set| set == down)
                        .expect("point closures of a max-continuous space are ideals")
                })
                .collect();
            let body = json!({
                "mode": "relational",
                "name": file.name,
                "ideals": ideals,
                "labels": completion.labels(),
                "matrix": matrix_json(completion.d()),
                "embedding": embedding_json(&space, &completion, &embedding),
            });
            (body, completion)
        }
        Mode::Smyth => {
            let c = smyth_completion(&space)
                .map_err(|e| fail("cannot build the Smyth completion", e))?;
            let ideals: Vec<_> = c.family().iter().map(|i| i.radius_map(&space)).collect();
            let body = json!({
                "mode": "smyth",
                "name": file.name,
                "ideals": ideals,
                "labels": c.space().labels(),
                "matrix": matrix_json(c.space().d()),
                "embedding": embedding_json(&space, c.space(), c.embedding()),
            });
            (body, c.space().clone())
        }
        Mode::Yoneda => {
            let c = smyth_completion(&space)
                .map_err(|e| fail("cannot build the Yoneda completion", e))?;
            let k = c.family().len();
            let classical = GRel::from_fn(k, k, |i, j| {
                formalballs::ideal_hausdorff(
                    &space,
                    &c.family()[i],
                    &c.family()[j],
                    HausdorffKind::Classical,
                )
            });
            let yoneda = c
                .space()
                .with_matrix(classical)
                .map_err(|e| fail("the classical ideal distance is not a distance", e))?;
            let ideals: Vec<_> = c.family().iter().map(|i| i.radius_map(&space)).collect();
            let body = json!({
                "mode": "yoneda",
                "name": file.name,
                "ideals": ideals,
                "labels": yoneda.labels(),
                "matrix": matrix_json(yoneda.d()),
                "embedding": embedding_json(&space, &yoneda, c.embedding()),
            });
            (body, yoneda)
        }
    };
    println!("{}", pretty(&body));
    if args.dot {
        let top = FiniteTopology::generate(&completion_space, TopKind::Ball)
            .map_err(|e| fail("cannot render the specialization order", e))?;
        print!("{}", top.specialization_dot(completion_space.labels()));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode, String> {
    let scope = if args.named {
        Scope::Named
    } else {
        let n_spaces = args
            .random
            .expect("clap guarantees one scope flag is present");
        Scope::Random {
            n_spaces,
            sizes: args.sizes,
            profiles: args.profiles.clone(),
            seed: args.seed,
        }
    };
    let run = || harness::run_suite(&scope);
    let results = match args.jobs {
        None => run(),
        Some(0) => return Err("--jobs must be at least 1".into()),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| fail("cannot start the worker pool", e))?
            .install(run),
    }
    .map_err(|e| fail("cannot run the suite", e))?;
    let report = harness::to_json(&results);
    match &args.out {
        Some(path) => std::fs::write(path, report + "\n")
            .map_err(|e| fail(&format!("cannot write {}", path.display()), e))?,
        None => println!("{report}"),
    }
    Ok(if harness::has_failures(&results) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_catalog(name: Option<&str>) -> Result<ExitCode, String> {
    match name {
        None => {
            let mut list = Vec::new();
            for name in catalog::names() {
                let entry = catalog::get(name).map_err(|e| fail("catalog", e))?;
                let claims: Vec<&str> =
                    entry.witnesses().iter().map(|w| w.claim()).collect();
                let row = match (entry.finite(), entry.formula()) {
                    (Some(s), _) => json!({
                        "name": name,
                        "kind": "finite",
                        "points": s.labels(),
                        "witnesses": claims,
                    }),
                    (None, Some(f)) => json!({
                        "name": name,
                        "kind": "formula",
                        "carrier": f.carrier(),
                        "witnesses": claims,
                    }),
                    (None, None) => unreachable!("catalog entries are finite or formula"),
                };
                list.push(row);
            }
            println!("{}", pretty(&json!(list)));
        }
        Some(name) => {
            let entry = catalog::get(name).map_err(|e| e.to_string())?;
            if let Some(s) = entry.finite() {
                print!("{}", SpaceFile::from_space(name, s).to_json());
            } else if let Some(f) = entry.formula() {
                let points: Vec<String> = f
                    .default_points()
                    .iter()
                    .map(|&r| ExtVal::Fin(r).to_string())
                    .collect();
                let witnesses: Vec<Value> = entry
                    .witnesses()
                    .iter()
                    .map(|w| json!({"claim": w.claim(), "witness": w.witness()}))
                    .collect();
                let body = json!({
                    "name": name,
                    "kind": "formula",
                    "carrier": f.carrier(),
                    "default-points": points,
                    "witnesses": witnesses,
                });
                println!("{}", pretty(&body));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}
