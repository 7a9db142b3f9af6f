//! `qgt`: design, encode, decode and simulate sparse-graph-code
//! quantitative group testing.
//!
//! Human-readable output labels items from 1; files use 0-based indices.

mod grid;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use qgt_core::bch::{RootMethod, MAX_T};
use qgt_core::codec::{self, DecoderOptions, DesignParams, EllChoice, SignatureMatrix, TestVector};
use qgt_core::density::{self, c_of_t};
use qgt_core::golden;
use qgt_core::graph::BiRegularGraph;
use qgt_core::sim::{self, TrialConfig};

#[derive(Parser, Debug)]
#[command(name = "qgt", version, about = "Quantitative group testing with sparse graph codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print c(t), the optimal left degree and its threshold for t = 1..t_max.
    Table {
        #[arg(long, default_value_t = MAX_T)]
        t_max: usize,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive design parameters and compare test counts across t.
    Design(DesignArgs),
    /// Encode a defective set into a test-result file.
    Encode(EncodeArgs),
    /// Recover the defective set from a test-result file.
    Decode(DecodeArgs),
    /// Monte Carlo success rate versus m/K.
    Simulate(SimulateArgs),
    /// Check the worked example and c(t) spot values.
    Selftest {
        /// Replace the built-in H1 fixture (rows of 0/1).
        #[arg(long, hide = true)]
        h1_fixture: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct ProblemArgs {
    /// Number of items.
    #[arg(long = "N")]
    n: usize,
    /// Number of defectives.
    #[arg(long = "K")]
    k: usize,
    /// Per-node correction capability.
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Left degree, or "auto" for the density-evolution optimum.
    #[arg(long, default_value = "auto")]
    ell: EllChoice,
    /// Overprovisioning factor on the right-node count, > 1.
    #[arg(long, default_value_t = 1.1)]
    beta: f64,
    #[arg(long, env = "QGT_SEED", default_value_t = 1)]
    seed: u64,
}

impl ProblemArgs {
    fn validate(&self) {
        if self.k >= self.n {
            usage(format!("--K must be smaller than --N (got K={}, N={})", self.k, self.n));
        }
        check_t(self.t);
        if self.beta.is_nan() || self.beta <= 1.0 {
            usage(format!("--beta must exceed 1 (got {})", self.beta));
        }
        if let EllChoice::Fixed(e) = self.ell {
            if e < 2 {
                usage(format!("--ell must be at least 2 (got {e})"));
            }
        }
    }

    fn design(&self) -> Result<DesignParams> {
        Ok(DesignParams::derive(self.n, self.k, self.t, self.ell, self.beta)?)
    }
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// K values for a test-count CSV over t = 1..8 (e.g. 50:500:50).
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    /// Support file: 0-based defective indices, one per line.
    #[arg(long)]
    support: PathBuf,
    /// Graph file to use. Without it a graph is sampled from the design flags.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Where to save a sampled graph.
    #[arg(long)]
    graph_out: Option<PathBuf>,
    /// Correction capability when `--graph` is given.
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long, default_value = "auto")]
    ell: EllChoice,
    #[arg(long, default_value_t = 1.1)]
    beta: f64,
    #[arg(long, env = "QGT_SEED", default_value_t = 1)]
    seed: u64,
    /// Also write the dense measurement matrix (without the count-all row).
    #[arg(long)]
    matrix_out: Option<PathBuf>,
    /// Test-result file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Test-result file, one integer per line.
    #[arg(long)]
    y: PathBuf,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value = "chien")]
    root_method: RootMethod,
    /// Write the recovered set as a 0-based support file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long = "K")]
    k: usize,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value = "auto")]
    ell: EllChoice,
    /// m/K values: `a:b[:step]` or a comma list.
    #[arg(long)]
    grid: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "QGT_SEED", default_value_t = 1)]
    seed: u64,
    /// Reuse one graph for every trial.
    #[arg(long)]
    fixed_graph: bool,
    #[arg(long, default_value = "direct")]
    root_method: RootMethod,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage(msg: String) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn check_t(t: usize) {
    if !(1..=MAX_T).contains(&t) {
        usage(format!("--t must be in 1..={MAX_T} (got {t})"));
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn labels(items: &[usize]) -> String {
    let one_based: Vec<String> = items.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", one_based.join(", "))
}

fn resolve_ell(ell: EllChoice, t: usize) -> usize {
    match ell {
        EllChoice::Auto => c_of_t(t).ell_star,
        EllChoice::Fixed(e) => e,
    }
}

fn cmd_table(t_max: usize, out: Option<&Path>) -> Result<()> {
    check_t(t_max);
    let mut text = String::from("t,c,ell_star,lambda_T\n");
    for t in 1..=t_max {
        let c = c_of_t(t);
        text.push_str(&format!("{t},{:.4},{},{:.4}\n", c.c, c.ell_star, c.lambda_t));
    }
    emit(out, &text)
}

fn cmd_design(args: &DesignArgs) -> Result<()> {
    let p = &args.problem;
    p.validate();
    if let Some(spec) = &args.grid {
        let ks = grid::parse(spec).map_err(anyhow::Error::msg)?;
        let mut text = String::from("N,K,t,c,ell,m\n");
        for k in ks {
            let k = k.round() as usize;
            if k == 0 || k >= p.n {
                bail!("grid value K={k} must be in 1..N");
            }
            for t in 1..=MAX_T {
                let tc = density::tests_needed(p.n, k, t);
                text.push_str(&format!("{},{k},{t},{:.4},{},{:.1}\n", p.n, tc.c, tc.ell, tc.value));
            }
        }
        return emit(args.out.as_deref(), &text);
    }
    let d = p.design()?;
    let mut text = String::new();
    text.push_str(&format!(
        "# N={} K={} t={} beta={} seed={}\n",
        d.n, d.k, d.t, d.beta, p.seed
    ));
    text.push_str(&format!("c(t)            {:.4}\n", d.c_t));
    text.push_str(&format!("left degree     {}\n", d.ell));
    text.push_str(&format!("right nodes M   {}\n", d.right_nodes));
    text.push_str(&format!(
        "load K*ell/M    {:.4} (threshold {:.4})\n",
        d.lambda(),
        density::lambda_threshold(d.t, d.ell)
    ));
    text.push_str(&format!("r_max           {}\n", d.r_max));
    text.push_str(&format!("field degree b  {}\n", d.field_degree));
    text.push_str(&format!("tests per node  {}\n", d.tests_per_node));
    text.push_str(&format!("m_total         {}\n", d.total_tests));
    text.push_str(&format!("formula bound   {:.1}\n", d.formula_bound()));
    text.push_str("tests needed by t:\n");
    let best = density::best_t(d.n, d.k);
    for t in 1..=MAX_T {
        let tc = density::tests_needed(d.n, d.k, t);
        let mark = if t == best.t { "  <- min" } else { "" };
        text.push_str(&format!("  t={t}  {:.1}{mark}\n", tc.value));
    }
    emit(args.out.as_deref(), &text)
}

fn cmd_encode(args: &EncodeArgs) -> Result<()> {
    let (graph, t) = match &args.graph {
        Some(path) => {
            check_t(args.t);
            (BiRegularGraph::from_text(&read(path)?)?, args.t)
        }
        None => {
            let (Some(n), Some(k)) = (args.n, args.k) else {
                usage("either --graph or both --N and --K are required".into());
            };
            let problem = ProblemArgs {
                n,
                k,
                t: args.t,
                ell: args.ell,
                beta: args.beta,
                seed: args.seed,
            };
            problem.validate();
            let d = problem.design()?;
            let graph = BiRegularGraph::sample(d.n, d.right_nodes, d.ell, args.seed)?;
            if let Some(path) = &args.graph_out {
                fs::write(path, graph.to_text()).with_context(|| format!("writing {}", path.display()))?;
            }
            (graph, d.t)
        }
    };
    let support = codec::support_from_text(&read(&args.support)?)?;
    let sig = SignatureMatrix::build(t, graph.max_right_degree())?;
    let y = codec::encode(&graph, &sig, &support)?;
    fs::write(&args.out, y.to_text()).with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(path) = &args.matrix_out {
        let a = codec::measurement_matrix(&graph, &sig)?;
        fs::write(path, codec::matrix_to_text(&a)).with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "encoded {} defectives into {} tests (M={}, s={}, seed={})",
        support.len(),
        y.len(),
        graph.m(),
        sig.height(),
        graph.seed()
    );
    Ok(())
}

fn cmd_decode(args: &DecodeArgs) -> Result<()> {
    check_t(args.t);
    let graph = BiRegularGraph::from_text(&read(&args.graph)?)?;
    let y = TestVector::from_text(&read(&args.y)?)?;
    let sig = SignatureMatrix::build(args.t, graph.max_right_degree())?;
    let options = DecoderOptions {
        root_method: args.root_method,
        shuffle_seed: None,
    };
    let out = codec::decode_with(&graph, &sig, &y, options)?;
    println!("recovered {}", labels(&out.recovered));
    println!(
        "{} of {} defectives, {} rounds, {} unresolved right nodes, {}",
        out.recovered.len(),
        y.total(),
        out.iterations,
        out.unresolved_right,
        if out.success { "success" } else { "incomplete" }
    );
    if let Some(path) = &args.out {
        fs::write(path, codec::support_to_text(&out.recovered))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if !out.success {
        bail!("decoding did not recover every defective");
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    if args.k >= args.n {
        usage(format!("--K must be smaller than --N (got K={}, N={})", args.k, args.n));
    }
    check_t(args.t);
    if args.trials == 0 {
        usage("--trials must be at least 1".into());
    }
    let grid = grid::parse(&args.grid).unwrap_or_else(|e| usage(e));
    let config = TrialConfig {
        n: args.n,
        k: args.k,
        t: args.t,
        ell: resolve_ell(args.ell, args.t),
        right_nodes: 0,
        trials: args.trials,
        master_seed: args.seed,
        fixed_graph: args.fixed_graph,
        root_method: args.root_method,
    };
    let points = sim::run_sweep(&config, &grid)?;
    emit(args.out.as_deref(), &sim::sweep_to_csv(&config, &points))
}

fn cmd_selftest(h1_fixture: Option<&Path>) -> Result<()> {
    let h1 = match h1_fixture {
        Some(path) => Some(golden::parse_bit_rows(&read(path)?).map_err(anyhow::Error::msg)?),
        None => None,
    };
    let checks = golden::run_checks(h1.as_deref());
    let mut failed = 0;
    for check in &checks {
        match &check.result {
            Ok(()) => println!("ok    {}", check.name),
            Err(e) => {
                failed += 1;
                println!("FAIL  {}: {e}", check.name);
            }
        }
    }
    if failed > 0 {
        bail!("{failed} of {} self-test checks failed", checks.len());
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Table { t_max, out } => cmd_table(t_max, out.as_deref()),
        Command::Design(args) => cmd_design(&args),
        Command::Encode(args) => cmd_encode(&args),
        Command::Decode(args) => cmd_decode(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Selftest { h1_fixture } => cmd_selftest(h1_fixture.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
