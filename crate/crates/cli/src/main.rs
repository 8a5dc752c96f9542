mod config;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use vlab_core::criteria::{compare, BaseSet, Comparand, Domain};
use vlab_core::mc::{estimate_B, estimate_a, estimate_b, Estimate};
use vlab_core::potential::PairPotential;
use vlab_core::ree_hoover::{enumerate_rh_diagrams, rh_linear_combination, rh_reference_count, rh_summary, RhView, MAX_RH_ORDER};
use vlab_core::report::tables::{build_tables, render, Format, TableOptions, RH_BOX_SIDE};
use vlab_core::report::verify::{run_suite, SUITES};
use vlab_core::series::{measure_ops, op_bound, Route, MAYER_SUM_OP_ENVELOPE};
use vlab_core::trees::{count_tr, count_tr0, enumerate, tree_sum, Subset};

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(vlab_core::Error),
    VerifyFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Core(vlab_core::Error::UnknownSuite(_) | vlab_core::Error::Io(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl From<vlab_core::Error> for CliError {
    fn from(e: vlab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::VerifyFailed => write!(f, "verification failed"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Tree sums, Ree-Hoover sums and virial coefficients from graph-labeled
/// representations.
#[derive(Parser)]
#[command(name = "vlab", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true)]
    n: Option<String>,
    #[arg(long, global = true)]
    n_max: Option<String>,
    /// cr1, cr2, cr3, or cr1p, cr2p, cr3p for base sets
    #[arg(long, global = true)]
    criterion: Option<String>,
    /// full or a
    #[arg(long, global = true)]
    subset: Option<String>,
    /// b or a
    #[arg(long, global = true)]
    route: Option<String>,
    /// hard-sphere or square-well
    #[arg(long, global = true)]
    potential: Option<String>,
    #[arg(long, global = true)]
    dim: Option<String>,
    #[arg(long, global = true)]
    sigma: Option<String>,
    /// Square-well range in units of sigma
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Square-well reduced depth
    #[arg(long, global = true)]
    beta_eps: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// csv, json or md
    #[arg(long, global = true)]
    format: Option<String>,
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<String>,
}

impl Opts {
    fn flags(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("n", &self.n),
            ("n-max", &self.n_max),
            ("criterion", &self.criterion),
            ("subset", &self.subset),
            ("route", &self.route),
            ("potential", &self.potential),
            ("dim", &self.dim),
            ("sigma", &self.sigma),
            ("lambda", &self.lambda),
            ("beta-eps", &self.beta_eps),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("format", &self.format),
            ("out", &self.out),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit the complexity tables
    Tables {
        /// Table number 1 to 6; repeatable, all tables by default
        #[arg(long = "table")]
        tables: Vec<u8>,
    },
    /// Tree classes TR(n) and TR(n,0)
    Trees {
        #[command(subcommand)]
        action: TreesCmd,
    },
    /// Ree-Hoover diagrams
    Rh {
        #[command(subcommand)]
        action: RhCmd,
    },
    /// Compare a tree representation with the Ree-Hoover one, or with the
    /// layer-restricted tree sum
    Compare {
        /// rh or a
        #[arg(long, default_value = "rh")]
        against: String,
    },
    /// Monte Carlo estimate of b_n, a_n or B_n
    Estimate {
        /// b, a or B
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Arithmetic-operation bounds and measured counts
    Bounds,
    /// Run verification suites
    Verify {
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Subcommand)]
enum TreesCmd {
    /// One JSON object per class
    List,
    /// Class counts by closed form and by enumeration
    Count,
}

#[derive(Subcommand)]
enum RhCmd {
    Count,
    /// One JSON object per diagram class
    Diagrams,
}

fn emit(cfg: &mut RunConfig, text: &str) -> CliResult<()> {
    match cfg.out() {
        Some(path) => fs::write(&path, text).map_err(|e| CliError::Usage(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_only(cfg: &mut RunConfig) -> CliResult<()> {
    if cfg.is_set("format") && cfg.format("json")? != Format::Json {
        return Err(CliError::Usage("this command only emits JSON".into()));
    }
    Ok(())
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes") + "\n"
}

fn lines<T: Serialize>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|v| serde_json::to_string(&v).expect("output serializes") + "\n")
        .collect()
}

fn cmd_tables(cfg: &mut RunConfig, numbers: &[u8]) -> CliResult<()> {
    let numbers = if numbers.is_empty() { vec![1, 2, 3, 4, 5, 6] } else { numbers.to_vec() };
    let opts = TableOptions {
        n_max: cfg.n_max(10)?,
        ..TableOptions::default()
    };
    let format = cfg.format("csv")?;
    let tables = build_tables(&numbers, &opts)?;
    let text = render(&tables, format)?;
    emit(cfg, &text)
}

fn cmd_trees(cfg: &mut RunConfig, action: &TreesCmd) -> CliResult<()> {
    json_only(cfg)?;
    let n = cfg.n()?;
    let subset = cfg.subset()?;
    let classes = enumerate(n, subset)?;
    let text = match action {
        TreesCmd::List => lines(classes.iter().map(|t| {
            json!({
                "height": t.height(),
                "layers": t.layers(),
                "parents": t.parents(),
                "composition": t.composition(),
                "multiplicity": t.multiplicity().to_string().parse::<u64>().expect("multiplicity fits u64"),
                "admissible_count": t.admissible_count(),
            })
        })),
        TreesCmd::Count => {
            let closed = match subset {
                Subset::Full => count_tr(n),
                Subset::ASubset => count_tr0(n),
            };
            pretty(&json!({
                "n": n,
                "subset": subset,
                "enumerated": classes.len(),
                "closed_form": closed.to_string().parse::<u64>().expect("count fits u64"),
            }))
        }
    };
    emit(cfg, &text)
}

fn cmd_rh(cfg: &mut RunConfig, action: &RhCmd) -> CliResult<()> {
    json_only(cfg)?;
    let n = cfg.n()?;
    let text = match action {
        RhCmd::Count => {
            let (count, source) = if n <= MAX_RH_ORDER {
                (enumerate_rh_diagrams(n)?.len() as u64, "computed")
            } else {
                (rh_reference_count(n)?, "reference")
            };
            pretty(&json!({"n": n, "count": count, "source": source}))
        }
        RhCmd::Diagrams => lines(enumerate_rh_diagrams(n)?),
    };
    emit(cfg, &text)
}

fn cmd_compare(cfg: &mut RunConfig, against: &str) -> CliResult<()> {
    json_only(cfg)?;
    let n = cfg.n()?;
    let (criterion, primed) = cfg.criterion()?;
    let subset = cfg.subset()?;
    let domain = match against {
        "rh" => Domain::BoundedBox { side: RH_BOX_SIDE },
        "a" => Domain::ImproperSpace,
        other => return Err(CliError::Usage(format!("--against `{other}` is not one of rh, a"))),
    };
    let tree_side = |s: Subset| -> CliResult<Vec<_>> {
        let from = if primed { 2 } else { n };
        (from..=n)
            .map(|k| Ok(tree_sum(k, s, domain)?.to_combination()))
            .collect()
    };
    let left_members = tree_side(subset)?;
    let left_set = BaseSet::new(left_members.clone())?;
    let left = if primed {
        Comparand::Set(&left_set)
    } else {
        Comparand::Combination(&left_members[0])
    };
    let name = |s: Subset| match s {
        Subset::Full => "tree sum L_TR",
        Subset::ASubset => "tree sum L_TR0",
    };

    let (comparison, right_name) = match against {
        "rh" if n <= MAX_RH_ORDER => {
            let rh = rh_linear_combination(n, RH_BOX_SIDE, RhView::Classes)?;
            (compare(left, Comparand::Combination(&rh), criterion)?, "Ree-Hoover L_RH")
        }
        "rh" => {
            let rh = rh_summary(n, RH_BOX_SIDE)?;
            (compare(left, Comparand::Summary(&rh), criterion)?, "Ree-Hoover L_RH")
        }
        _ => {
            let members = tree_side(Subset::ASubset)?;
            let set = BaseSet::new(members.clone())?;
            let right = if primed {
                Comparand::Set(&set)
            } else {
                Comparand::Combination(&members[0])
            };
            (compare(left, right, criterion)?, name(Subset::ASubset))
        }
    };
    let prime = if primed { "'" } else { "" };
    let criterion_name = format!("Cr{prime}{}", &criterion.name()[2..]);
    let text = pretty(&json!({
        "n": n,
        "criterion": criterion_name,
        "left": {"representation": name(subset), "value": comparison.left},
        "right": {"representation": right_name, "value": comparison.right},
        "verdict": comparison.verdict.to_string(),
        "negligibly_more_complicated": comparison.negligibly_more_complicated,
    }));
    emit(cfg, &text)
}

#[derive(Serialize)]
struct Manifest<'a> {
    quantity: &'a str,
    n: usize,
    route: Option<Route>,
    potential: PairPotential,
    samples: u64,
    seed: u64,
    mean: f64,
    stderr: f64,
    pair_evals: u64,
    wall_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    arithmetic_ops: Option<u64>,
    config: &'a BTreeMap<String, String>,
}

const DEFAULT_MANIFEST: &str = "vlab-estimate.json";

fn cmd_estimate(cfg: &mut RunConfig) -> CliResult<()> {
    let quantity = cfg.quantity()?;
    let n = cfg.n()?;
    let potential = cfg.potential()?;
    let samples = cfg.samples()?;
    let seed = cfg.seed()?;
    let route = if quantity == "B" { Some(cfg.route()?) } else { None };
    let out = cfg.out().unwrap_or_else(|| DEFAULT_MANIFEST.to_string());

    let start = Instant::now();
    let est: Estimate = match (quantity.as_str(), route) {
        ("b", _) => estimate_b(n, &potential, samples, seed)?,
        ("a", _) => estimate_a(n, &potential, samples, seed)?,
        (_, Some(r)) => estimate_B(n, r, &potential, samples, seed)?.estimate,
        _ => unreachable!("B always has a route"),
    };
    let wall_time = start.elapsed().as_secs_f64();

    let manifest = Manifest {
        quantity: &quantity,
        n,
        route,
        potential,
        samples: est.samples,
        seed,
        mean: est.mean,
        stderr: est.stderr,
        pair_evals: est.pair_evals,
        wall_time,
        arithmetic_ops: est.arithmetic_ops,
        config: cfg.effective(),
    };
    fs::write(&out, pretty(&manifest)).map_err(|e| CliError::Usage(format!("cannot write {out}: {e}")))?;
    let via = route.map(|r| format!(" via the {}-route", if r == Route::A { "a" } else { "b" })).unwrap_or_default();
    println!(
        "{quantity}_{n}{via} = {:.10} +- {:.3e} ({} samples, {} pair evaluations, {wall_time:.2} s)",
        est.mean, est.stderr, est.samples, est.pair_evals
    );
    println!("manifest written to {out}");
    Ok(())
}

fn cmd_bounds(cfg: &mut RunConfig) -> CliResult<()> {
    json_only(cfg)?;
    let n_max = cfg.n_max(10)?;
    if !(2..=10).contains(&n_max) {
        return Err(CliError::Core(vlab_core::Error::OrderOutOfRange {
            what: "bounds",
            n: n_max,
            min: 2,
            max: 10,
        }));
    }
    let rows: Vec<_> = (2..=n_max)
        .map(|n| {
            let m = measure_ops(n);
            json!({
                "n": n,
                "a_route_bound": op_bound(Route::A, n),
                "a_route_measured": m.a_route_total,
                "b_route_bound": op_bound(Route::B, n),
                "b_route_measured": m.b_route_total,
                "mayer_sum_measured": m.b_route_sum,
                "mayer_sum_envelope": MAYER_SUM_OP_ENVELOPE,
            })
        })
        .collect();
    emit(cfg, &pretty(&rows))
}

fn cmd_verify(cfg: &mut RunConfig, suite: Option<&str>) -> CliResult<()> {
    json_only(cfg)?;
    let names: Vec<&str> = match suite {
        Some(s) => vec![s],
        None => SUITES.to_vec(),
    };
    let reports = names.iter().map(|s| run_suite(s)).collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let text = if reports.len() == 1 {
        pretty(&reports[0])
    } else {
        pretty(&json!({"passed": passed, "suites": reports}))
    };
    emit(cfg, &text)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let mut flags = cli.opts.flags();
    if let Cmd::Estimate { quantity: Some(q) } = &cli.cmd {
        flags.insert("quantity".into(), q.clone());
    }
    let merged = config::merge(cli.opts.config.as_deref(), std::env::vars(), &flags)?;
    let mut cfg = RunConfig::new(merged);
    match &cli.cmd {
        Cmd::Tables { tables } => cmd_tables(&mut cfg, tables),
        Cmd::Trees { action } => cmd_trees(&mut cfg, action),
        Cmd::Rh { action } => cmd_rh(&mut cfg, action),
        Cmd::Compare { against } => cmd_compare(&mut cfg, against),
        Cmd::Estimate { .. } => cmd_estimate(&mut cfg),
        Cmd::Bounds => cmd_bounds(&mut cfg),
        Cmd::Verify { suite } => cmd_verify(&mut cfg, suite.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed) {
                eprintln!("{e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
