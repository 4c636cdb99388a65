//! `sumprod`: field/ring inspection, exact set counters, product graphs,
//! spectral reports, and theorem sweeps from one binary.
//!
//! Exit codes: 0 success, 1 validation error (diagnostic on stderr),
//! 2 internal assertion failure.

use std::collections::BTreeMap;
use std::fs;
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use sumprod::counting::{rank_count, RankCountQuery};
use sumprod::field::FieldSpec;
use sumprod::graphs::{verify_nnt_decomposition, BipartiteGraph, Orientation};
use sumprod::matrix::RingSpec;
use sumprod::sets::{a_plus_bc, additive_energy, count_a_plus_b_eq_cd, count_n6};
use sumprod::spectral::{third_eigenvalue, SpectralMethod};
use sumprod::verify::{
    run_experiment, run_sweep, sweep_csv, ExperimentConfig, SetRecipe, SweepConfig, Theorem,
    TheoremReport,
};

#[derive(Parser)]
#[command(
    name = "sumprod",
    version,
    about = "Sum-product laboratory over matrix rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker thread cap (default: available cores). Output does not
    /// depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Offset added to every random-recipe seed in verify/sweep configs
    /// (0 leaves configs exactly as written).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Validate inputs and print the resolved plan without computing.
    #[arg(long, global = true)]
    dry_run: bool,

    /// Output format where a tabular form exists (verify, sweep).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrientationArg {
    Left,
    Right,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Orientation {
        match o {
            OrientationArg::Left => Orientation::Left,
            OrientationArg::Right => Orientation::Right,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Dense,
    Character,
    Auto,
}

#[derive(Args, Clone)]
struct RingArgs {
    /// Matrix dimension n.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Field characteristic p (prime).
    #[arg(long)]
    p: u64,
    /// Extension degree m (q = p^m).
    #[arg(long, default_value_t = 1)]
    m: u32,
}

impl RingArgs {
    fn spec(&self) -> sumprod::Result<RingSpec> {
        RingSpec::new(FieldSpec::new(self.p, self.m)?, self.n)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a finite field: order, modulus, trace table.
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Exact count of rows x cols matrices of one rank over F_q.
    RankCount {
        /// Block rows.
        #[arg(long)]
        m: u32,
        /// Block columns.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
    },
    /// Exact set-equation counters.
    Count {
        #[command(subcommand)]
        which: CountCmd,
    },
    /// Build a product graph; report structure, optionally export edges
    /// or check the N N^T decomposition.
    Graph {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_enum, default_value_t = OrientationArg::Left)]
        orientation: OrientationArg,
        /// Verify the exact N N^T decomposition entrywise.
        #[arg(long)]
        check_nnt: bool,
    },
    /// Third-eigenvalue report for a product graph.
    Spectrum {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_enum, default_value_t = OrientationArg::Left)]
        orientation: OrientationArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Run one theorem experiment (config file or --all saturation run).
    Verify {
        /// ExperimentConfig JSON path.
        #[arg(long, conflicts_with_all = ["theorem", "all"])]
        config: Option<PathBuf>,
        /// Theorem id (with --all): n_bound, a_plus_bc, sum_product,
        /// energy_bound, a_plus_b_eq_cd, apb_times_c.
        #[arg(long)]
        theorem: Option<String>,
        /// Use full sets (GL_n where the theorem needs invertibility).
        #[arg(long, requires = "theorem")]
        all: bool,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        trials: u32,
    },
    /// Run a (theorem, field, density) grid from a SweepConfig JSON.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand, Clone)]
enum CountCmd {
    /// Sextuples with ab + ef = c + d.
    N6(CountArgs),
    /// Additive energy of (A, B).
    Energy(CountArgs),
    /// |A + BC| and the representation-count total.
    APlusBc(CountArgs),
    /// Quadruples with a + b = cd.
    APlusBEqCd(CountArgs),
}

#[derive(Args, Clone)]
struct CountArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Use the full ring for every slot.
    #[arg(long, conflicts_with = "sets")]
    all: bool,
    /// JSON file mapping slot letters to set recipes.
    #[arg(long)]
    sets: Option<PathBuf>,
}

fn main() -> ExitCode {
    match panic::catch_unwind(run) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("internal assertion failure");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<(), String> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => {
            // clap renders its own "error:" prefix and usage hint
            eprint!("{e}");
            return Err(String::new());
        }
    };

    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err("--threads must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())?;
    }

    let output = dispatch(&cli).map_err(|e| e.to_string())?;
    match (&cli.out, output) {
        (_, Output::Done) => {}
        (Some(path), Output::Text(text)) => fs::write(path, text).map_err(|e| e.to_string())?,
        (None, Output::Text(text)) => print!("{text}"),
    }
    Ok(())
}

enum Output {
    Text(String),
    /// The subcommand already routed its own files/stdout.
    Done,
}

fn to_json_text(v: &Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("serializable")
    )
}

fn biguint_json(v: &BigUint) -> Value {
    match u64::try_from(v.clone()) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

fn plan(cli: &Cli, description: Value) -> Output {
    let mut obj = json!({ "dry_run": true, "plan": description });
    obj["seed"] = json!(cli.seed);
    Output::Text(to_json_text(&obj))
}

fn require_json(format: Format, sub: &str) -> sumprod::Result<()> {
    if format == Format::Csv {
        Err(sumprod::Error::Config(format!(
            "csv output is not defined for `{sub}`"
        )))
    } else {
        Ok(())
    }
}

fn dispatch(cli: &Cli) -> sumprod::Result<Output> {
    match &cli.command {
        Command::Field { p, m } => {
            require_json(cli.format, "field")?;
            if cli.dry_run {
                return Ok(plan(cli, json!({"command": "field", "p": p, "m": m})));
            }
            let f = FieldSpec::new(*p, *m)?;
            let traces: Vec<u32> = f.elements().map(|x| f.trace(x)).collect();
            Ok(Output::Text(to_json_text(&json!({
                "p": f.p(),
                "m": f.m(),
                "q": f.q(),
                "modulus": f.modulus(),
                "trace": traces,
            }))))
        }
        Command::RankCount { m, n, q, k } => {
            require_json(cli.format, "rank-count")?;
            if cli.dry_run {
                return Ok(plan(
                    cli,
                    json!({"command": "rank-count", "rows": m, "cols": n, "q": q, "k": k}),
                ));
            }
            let count = rank_count(&RankCountQuery {
                rows: *m,
                cols: *n,
                rank: *k,
                q: *q,
            })?;
            Ok(Output::Text(to_json_text(&json!({
                "rows": m,
                "cols": n,
                "q": q,
                "k": k,
                "count": biguint_json(&count),
            }))))
        }
        Command::Count { which } => {
            require_json(cli.format, "count")?;
            run_count(cli, which)
        }
        Command::Graph {
            ring,
            orientation,
            check_nnt,
        } => {
            require_json(cli.format, "graph")?;
            if cli.dry_run {
                return Ok(plan(
                    cli,
                    json!({
                        "command": "graph",
                        "n": ring.n, "p": ring.p, "m": ring.m,
                        "orientation": Orientation::from(*orientation).label(),
                        "check_nnt": check_nnt,
                        "export": cli.out,
                    }),
                ));
            }
            let spec = ring.spec()?;
            let orientation = Orientation::from(*orientation);
            let graph = BipartiteGraph::build(&spec, orientation)?;
            let mut report = json!({
                "n": spec.n(),
                "q": spec.q(),
                "orientation": orientation.label(),
                "vertices_per_side": graph.side_size(),
                "degree": graph.degree(),
                "edges": graph.edge_count(),
                "biregular": true,
            });
            if *check_nnt {
                let nnt = verify_nnt_decomposition(&spec, orientation)?;
                report["nnt_max_abs_discrepancy"] = json!(nnt.max_abs_discrepancy);
                report["nnt_families"] = json!(nnt.families);
            }
            if let Some(path) = &cli.out {
                let mut buf = Vec::new();
                graph.export_edges(&mut buf)?;
                fs::write(path, buf)?;
                report["exported"] = json!(path);
                // the edge list went to --out; the report goes to stdout
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
                return Ok(Output::Done);
            }
            Ok(Output::Text(to_json_text(&report)))
        }
        Command::Spectrum {
            ring,
            orientation,
            method,
        } => {
            require_json(cli.format, "spectrum")?;
            let orientation = Orientation::from(*orientation);
            if cli.dry_run {
                return Ok(plan(
                    cli,
                    json!({
                        "command": "spectrum",
                        "n": ring.n, "p": ring.p, "m": ring.m,
                        "orientation": orientation.label(),
                    }),
                ));
            }
            let spec = ring.spec()?;
            let method = match method {
                MethodArg::Dense => SpectralMethod::Dense,
                MethodArg::Character => SpectralMethod::CharacterSum,
                MethodArg::Auto => SpectralMethod::Auto,
            };
            let space = sumprod::graphs::triple_space(&spec);
            let graph = if method != SpectralMethod::CharacterSum && space <= 4096 {
                BipartiteGraph::build(&spec, orientation)?
            } else {
                BipartiteGraph::predicate(&spec, orientation)?
            };
            let report = third_eigenvalue(&graph, method)?;
            Ok(Output::Text(to_json_text(
                &serde_json::to_value(&report).expect("serializable"),
            )))
        }
        Command::Verify {
            config,
            theorem,
            all,
            n,
            p,
            m,
            trials,
        } => {
            let mut experiment = match (config, theorem) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path)?;
                    serde_json::from_str::<ExperimentConfig>(&text)?
                }
                (None, Some(id)) => {
                    if !all {
                        return Err(sumprod::Error::Config(
                            "--theorem needs --all or use --config".into(),
                        ));
                    }
                    let mut cfg = ExperimentConfig::full_sets(Theorem::from_id(id)?, *n, *p, *m);
                    cfg.trials = *trials;
                    cfg
                }
                (None, None) => {
                    return Err(sumprod::Error::Config(
                        "verify needs --config or --theorem --all".into(),
                    ))
                }
            };
            offset_recipe_seeds(&mut experiment.sets, cli.seed);
            if cli.dry_run {
                return Ok(plan(
                    cli,
                    json!({
                        "command": "verify",
                        "config": serde_json::to_value(&experiment)?,
                    }),
                ));
            }
            let report = run_experiment(&experiment)?;
            match cli.format {
                Format::Json => Ok(Output::Text(to_json_text(
                    &serde_json::to_value(&report).expect("serializable"),
                ))),
                Format::Csv => Ok(Output::Text(report_csv(&report))),
            }
        }
        Command::Sweep { config } => {
            let text = fs::read_to_string(config)?;
            let mut sweep: SweepConfig = serde_json::from_str(&text)?;
            sweep.seed = sweep.seed.wrapping_add(cli.seed);
            if cli.dry_run {
                let points = sweep.theorems.len() * sweep.fields.len() * sweep.densities.len();
                return Ok(plan(
                    cli,
                    json!({
                        "command": "sweep",
                        "config": serde_json::to_value(&sweep)?,
                        "grid_points": points,
                        "rows": points * sweep.trials as usize,
                    }),
                ));
            }
            let rows = run_sweep(&sweep)?;
            match cli.format {
                Format::Csv => Ok(Output::Text(sweep_csv(&rows))),
                Format::Json => Ok(Output::Text(to_json_text(
                    &serde_json::to_value(&rows).expect("serializable"),
                ))),
            }
        }
    }
}

fn offset_recipe_seeds(sets: &mut BTreeMap<String, SetRecipe>, offset: u64) {
    if offset == 0 {
        return;
    }
    for recipe in sets.values_mut() {
        match recipe {
            SetRecipe::Random { seed, .. } | SetRecipe::RandomGl { seed, .. } => {
                *seed = seed.wrapping_add(offset);
            }
            _ => {}
        }
    }
}

/// Flat per-trial CSV for a single experiment report.
fn report_csv(report: &TheoremReport) -> String {
    let mut out = String::from(
        "theorem,n,p,m,q,trial,size_a,size_b,size_c,size_d,size_e,size_f,lhs,bound,constant,degenerate\n",
    );
    for t in &report.trials {
        let size = |slot: &str| t.sizes.get(slot).map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6e},{:.6e},{}\n",
            report.theorem,
            report.n,
            report.p,
            report.m,
            report.q,
            t.trial,
            size("A"),
            size("B"),
            size("C"),
            size("D"),
            size("E"),
            size("F"),
            t.lhs,
            t.bound,
            t.constant,
            t.degenerate,
        ));
    }
    out
}

fn run_count(cli: &Cli, which: &CountCmd) -> sumprod::Result<Output> {
    let (name, args, slots): (&str, &CountArgs, &[&str]) = match which {
        CountCmd::N6(a) => ("n6", a, &["A", "B", "C", "D", "E", "F"]),
        CountCmd::Energy(a) => ("energy", a, &["A", "B"]),
        CountCmd::APlusBc(a) => ("a_plus_bc", a, &["A", "B", "C"]),
        CountCmd::APlusBEqCd(a) => ("a_plus_b_eq_cd", a, &["A", "B", "C", "D"]),
    };
    if cli.dry_run {
        return Ok(plan(
            cli,
            json!({
                "command": format!("count {name}"),
                "n": args.ring.n, "p": args.ring.p, "m": args.ring.m,
                "slots": slots,
                "all": args.all,
                "sets": args.sets,
            }),
        ));
    }
    let spec = args.ring.spec()?;
    let recipes: BTreeMap<String, SetRecipe> = if args.all {
        slots
            .iter()
            .map(|&s| (s.to_string(), SetRecipe::All))
            .collect()
    } else {
        let path = args
            .sets
            .as_ref()
            .ok_or_else(|| sumprod::Error::Config("count needs --all or --sets <path>".into()))?;
        serde_json::from_str(&fs::read_to_string(path)?)?
    };
    let mut sets = BTreeMap::new();
    for &slot in slots {
        let recipe = recipes
            .get(slot)
            .ok_or_else(|| sumprod::Error::Config(format!("count {name} needs set {slot}")))?;
        sets.insert(slot.to_string(), recipe.build(&spec, 0)?);
    }
    let get = |s: &str| sets.get(s).expect("built above");
    let mut report = json!({
        "op": name,
        "n": spec.n(),
        "q": spec.q(),
        "sizes": sets.iter().map(|(k, v)| (k.clone(), v.size())).collect::<BTreeMap<_, _>>(),
    });
    match which {
        CountCmd::N6(_) => {
            let count = count_n6(get("A"), get("B"), get("C"), get("D"), get("E"), get("F"))?;
            report["count"] = json!(count);
        }
        CountCmd::Energy(_) => {
            let count = additive_energy(get("A"), get("B"))?;
            report["count"] = json!(count);
        }
        CountCmd::APlusBc(_) => {
            let (image, table) = a_plus_bc(get("A"), get("B"), get("C"))?;
            report["image_size"] = json!(image.size());
            report["representation_total"] = json!(table.total()?);
        }
        CountCmd::APlusBEqCd(_) => {
            let count = count_a_plus_b_eq_cd(get("A"), get("B"), get("C"), get("D"))?;
            report["count"] = json!(count);
        }
    }
    Ok(Output::Text(to_json_text(&report)))
}
