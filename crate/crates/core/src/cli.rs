//! Command-line front end.
//!
//! [`run_command`] parses an argument vector, runs one subcommand and writes
//! CSV (default) or JSON. Exit codes: 0 on success, 1 when the analysis
//! itself fails (for example a reducible chain passed to `stationary`), 2 on
//! bad arguments or unreadable input.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::absorption::analyze;
use crate::chain::{DistributionVector, TransitionMatrix};
use crate::distance::{convergence_curve, empirical_mixing_time, MixingTime};
use crate::graph::{Graph, GraphKind};
use crate::martingale::check_space_time_harmonic;
use crate::models::{
    polya_pmf_empirical, polya_pmf_exact, triangle_region, triangle_region_sampler,
};
use crate::optimize::{simulated_annealing, AnnealSchedule, ObjectiveOnGraph};
use crate::samplers::{
    empirical_pmf, gibbs_sweep, metropolis_step, run_chain, GraphWalkMetropolis, RandomSource, Scan,
};
use crate::spectral::{mixing_bounds, spectrum};
use crate::stationary::{check_reversible, solve_stationary};
use crate::Error;

/// Environment variable that overrides the default `--tol`.
pub const TOL_ENV: &str = "MKCHAIN_TOL";
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "mkchain",
    version,
    about = "Finite Markov chain analysis and Monte Carlo"
)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Numerical tolerance (default 1e-9, or $MKCHAIN_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a named graph or an Erdős–Rényi graph.
    GenGraph(GenGraphArgs),
    /// Irreducibility, period and reversibility of a chain.
    Analyze(ChainArgs),
    /// Stationary distribution.
    Stationary(ChainArgs),
    /// Expected hitting times and absorption probabilities.
    Hitting {
        #[command(flatten)]
        chain: ChainArgs,
        /// Comma-separated boundary states.
        #[arg(long, value_delimiter = ',', required = true)]
        boundary: Vec<usize>,
    },
    /// Spectrum, relaxation time and mixing-time bounds.
    Mixing {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Also search for the exact mixing time up to this many steps.
        #[arg(long)]
        empirical_cap: Option<usize>,
    },
    /// Total variation distance to stationarity along the path from one state.
    TvCurve {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 0)]
        from: usize,
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
    /// Simulate a trajectory of a chain.
    Sample {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Print the empirical pmf instead of the path.
        #[arg(long)]
        pmf: bool,
    },
    /// Metropolis sampling of vertex weights over a graph walk.
    Mcmc {
        /// Weights file: {"weights": [...]}.
        #[arg(long)]
        target: PathBuf,
        /// Graph file for the base walk.
        #[arg(long)]
        base: PathBuf,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        burn_in: usize,
        #[arg(long, default_value_t = 1)]
        thinning: usize,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long)]
        pmf: bool,
    },
    /// Gibbs sampling of the uniform law on {(m, k) : m, k >= 1, m + k <= N}.
    Gibbs {
        #[arg(long, default_value_t = 6)]
        region: usize,
        #[arg(long, default_value_t = 1000)]
        sweeps: usize,
        #[arg(long, value_enum, default_value_t = ScanArg::Random)]
        scan: ScanArg,
        #[arg(long)]
        pmf: bool,
    },
    /// Simulated annealing of a vertex objective.
    Anneal {
        #[arg(long)]
        graph: PathBuf,
        /// Objective file: {"values": [...]}.
        #[arg(long)]
        objective: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Log-schedule scale c in λ(t) = c ln(1 + t); defaults to
        /// 1 / (max f − min f).
        #[arg(long)]
        scale: Option<f64>,
    },
    /// Pólya urn: simulated and exact law of the black count.
    Polya {
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long, default_value_t = 20)]
        steps: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Exact one-step check of a space-time harmonic table.
    MartingaleCheck {
        #[command(flatten)]
        chain: ChainArgs,
        /// Table file: {"values": [[f(0,x)...], [f(1,x)...], ...]}.
        #[arg(long)]
        table: PathBuf,
        /// Restrict the check to these states.
        #[arg(long, value_delimiter = ',')]
        states: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanArg {
    Random,
    Systematic,
}

#[derive(Debug, Args)]
struct ChainArgs {
    /// Chain file: {"states": [...] optional, "matrix": [[...], ...]}.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    chain: Option<PathBuf>,
    /// Graph file; the chain is its simple random walk.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Use the lazy version ½(I + P).
    #[arg(long)]
    lazy: bool,
}

#[derive(Debug, Args)]
struct GenGraphArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Vertex count (cycle, path, complete, erdos-renyi), dimension
    /// (hypercube), leaves (star) or first side (complete-bipartite).
    #[arg(long)]
    n: usize,
    /// Second side of a complete bipartite graph.
    #[arg(long)]
    m: Option<usize>,
    /// Edge probability for erdos-renyi.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Cycle,
    Path,
    Complete,
    CompleteBipartite,
    Hypercube,
    Star,
    ErdosRenyi,
}

/// Kinds accepted by [`load_input`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Graph,
    Chain,
    Objective,
}

/// A validated input file.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Graph(Graph),
    Chain(TransitionMatrix),
    Objective(Vec<f64>),
}

/// Failure of a CLI run, split by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable, malformed or invalid input (exit 2).
    Input(String),
    /// The requested analysis failed on valid input (exit 1).
    Domain(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Domain(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValuesFile {
    values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    values: Vec<Vec<f64>>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Reads and validates one input file.
pub fn load_input(path: &Path, kind: InputKind) -> CliResult<Input> {
    Ok(match kind {
        InputKind::Graph => Input::Graph(read_json(path)?),
        InputKind::Chain => Input::Chain(read_json(path)?),
        InputKind::Objective => {
            let file: ValuesFile = read_json(path)?;
            if let Some(v) = file.values.iter().position(|f| !f.is_finite()) {
                return Err(CliError::Input(format!(
                    "{}: value {v} is not finite",
                    path.display()
                )));
            }
            Input::Objective(file.values)
        }
    })
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    match load_input(path, InputKind::Graph)? {
        Input::Graph(g) => Ok(g),
        _ => unreachable!(),
    }
}

fn load_chain(args: &ChainArgs) -> CliResult<TransitionMatrix> {
    let p = match (&args.chain, &args.graph) {
        (Some(path), _) => match load_input(path, InputKind::Chain)? {
            Input::Chain(p) => p,
            _ => unreachable!(),
        },
        (None, Some(path)) => {
            let g = load_graph(path)?;
            TransitionMatrix::srw_from_graph(&g)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        (None, None) => {
            return Err(CliError::Input(
                "one of --chain or --graph is required".into(),
            ))
        }
    };
    Ok(if args.lazy { p.lazy() } else { p })
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Results go to `out` (or the `--out` file), diagnostics to `err`.
pub fn run_command<S: AsRef<str>>(args: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    2
                }
            };
        }
    };
    let tol = match resolve_tol(cli.tol) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return e.exit_code();
        }
    };
    let ctx = Ctx {
        format: cli.format,
        seed: cli.seed,
        tol,
    };
    match dispatch(&cli.command, &ctx) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => out.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "input error: cannot write output: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> CliResult<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{TOL_ENV}={s} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Input(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

struct Ctx {
    format: Format,
    seed: u64,
    tol: f64,
}

impl Ctx {
    fn rng(&self) -> RandomSource {
        RandomSource::new(self.seed)
    }
}

/// Column-oriented result that renders as CSV or as a JSON array of records.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new<S: ToString>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj = self
                        .header
                        .iter()
                        .cloned()
                        .zip(row.iter().cloned())
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => pretty(&self.json()),
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains([',', '"', '\n']) => {
            format!("\"{}\"", s.replace('"', "\"\""))
        }
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialise");
    s.push('\n');
    s
}

/// Finite floats as JSON numbers, the rest as strings.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> CliResult<String> {
    match cmd {
        Command::GenGraph(a) => gen_graph(a, ctx),
        Command::Analyze(c) => analyze_cmd(c, ctx),
        Command::Stationary(c) => {
            let p = load_chain(c)?;
            let pi = solve_stationary(&p)?;
            let mut t = Table::new(&["state", "prob"]);
            for x in 0..p.n() {
                t.push(vec![json!(p.state_name(x)), num(pi[x])]);
            }
            Ok(t.render(ctx.format))
        }
        Command::Hitting { chain, boundary } => hitting_cmd(chain, boundary, ctx),
        Command::Mixing {
            chain,
            eps,
            empirical_cap,
        } => mixing_cmd(chain, *eps, *empirical_cap, ctx),
        Command::TvCurve { chain, from, steps } => {
            let p = load_chain(chain)?;
            let pi = solve_stationary(&p)?;
            let curve = convergence_curve(&p, *from, &pi, *steps)?;
            let mut t = Table::new(&["n", "tv"]);
            for (n, v) in curve.into_iter().enumerate() {
                t.push(vec![json!(n), num(v)]);
            }
            Ok(t.render(ctx.format))
        }
        Command::Sample {
            chain,
            steps,
            start,
            pmf,
        } => {
            let p = load_chain(chain)?;
            let path = p.simulate(*start, *steps, &mut ctx.rng())?;
            Ok(if *pmf {
                pmf_table(&path.states, p.n(), |x| p.state_name(x), None).render(ctx.format)
            } else {
                path_table(&path.states, |x| p.state_name(x)).render(ctx.format)
            })
        }
        Command::Mcmc {
            target,
            base,
            steps,
            burn_in,
            thinning,
            start,
            pmf,
        } => mcmc_cmd(target, base, *steps, *burn_in, *thinning, *start, *pmf, ctx),
        Command::Gibbs {
            region,
            sweeps,
            scan,
            pmf,
        } => gibbs_cmd(*region, *sweeps, *scan, *pmf, ctx),
        Command::Anneal {
            graph,
            objective,
            steps,
            start,
            scale,
        } => anneal_cmd(graph, objective, *steps, *start, *scale, ctx),
        Command::Polya {
            a,
            b,
            steps,
            trials,
        } => {
            let exact =
                polya_pmf_exact(*a, *b, *steps).map_err(|e| CliError::Input(e.to_string()))?;
            let emp = polya_pmf_empirical(*a, *b, *steps, *trials, &mut ctx.rng())?;
            let mut t = Table::new(&["black", "empirical", "exact"]);
            for k in *a as usize..exact.len() {
                t.push(vec![json!(k), num(emp[k]), num(exact[k])]);
            }
            Ok(t.render(ctx.format))
        }
        Command::MartingaleCheck {
            chain,
            table,
            states,
        } => martingale_cmd(chain, table, states.as_deref(), ctx),
    }
}

fn gen_graph(a: &GenGraphArgs, ctx: &Ctx) -> CliResult<String> {
    let input = |e: Error| CliError::Input(e.to_string());
    let g = match a.kind {
        KindArg::Cycle => Graph::generate(GraphKind::Cycle(a.n)),
        KindArg::Path => Graph::generate(GraphKind::Path(a.n)),
        KindArg::Complete => Graph::generate(GraphKind::Complete(a.n)),
        KindArg::CompleteBipartite => {
            let m = a
                .m
                .ok_or_else(|| CliError::Input("--m is required for complete-bipartite".into()))?;
            Graph::generate(GraphKind::CompleteBipartite(a.n, m))
        }
        KindArg::Hypercube => {
            let dim =
                u32::try_from(a.n).map_err(|_| CliError::Input("dimension too large".into()))?;
            Graph::generate(GraphKind::Hypercube(dim))
        }
        KindArg::Star => Graph::generate(GraphKind::Star(a.n)),
        KindArg::ErdosRenyi => {
            let p =
                a.p.ok_or_else(|| CliError::Input("--p is required for erdos-renyi".into()))?;
            Graph::erdos_renyi(a.n, p, &mut ctx.rng())
        }
    }
    .map_err(input)?;
    Ok(match ctx.format {
        Format::Json => pretty(&serde_json::to_value(&g).expect("graphs serialise")),
        Format::Csv => {
            let mut t = Table::new(&["u", "v"]);
            for (u, v) in g.edges() {
                t.push(vec![json!(u), json!(v)]);
            }
            t.csv()
        }
    })
}

fn kv_render(pairs: Vec<(&str, Value)>, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in &pairs {
                let _ = writeln!(s, "{k},{}", csv_cell(v));
            }
            s
        }
        Format::Json => pretty(&Value::Object(
            pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        )),
    }
}

fn analyze_cmd(c: &ChainArgs, ctx: &Ctx) -> CliResult<String> {
    let p = load_chain(c)?;
    let irreducible = p.is_irreducible();
    let period = p.period()?;
    let mut pairs = vec![
        ("states", json!(p.n())),
        ("irreducible", json!(irreducible)),
        ("period", json!(period)),
        ("aperiodic", json!(period == 1)),
    ];
    if irreducible {
        let pi = solve_stationary(&p)?;
        let report = check_reversible(&p, &pi, ctx.tol)?;
        pairs.push(("reversible", json!(report.reversible)));
        pairs.push(("max_dbe_violation", num(report.max_violation)));
    } else {
        pairs.push(("reversible", Value::Null));
        pairs.push(("max_dbe_violation", Value::Null));
    }
    Ok(kv_render(pairs, ctx.format))
}

fn hitting_cmd(c: &ChainArgs, boundary: &[usize], ctx: &Ctx) -> CliResult<String> {
    let p = load_chain(c)?;
    let a = analyze(&p, boundary)?;
    let mut header = vec!["state".to_string(), "hit_time".to_string()];
    header.extend(a.boundary.iter().map(|&b| format!("p_{}", p.state_name(b))));
    let mut t = Table::new(&header);
    for x in 0..p.n() {
        let mut row = vec![json!(p.state_name(x)), num(a.hit_time(x))];
        row.extend(a.boundary.iter().map(|&b| num(a.hit_prob(x, b))));
        t.push(row);
    }
    Ok(t.render(ctx.format))
}

fn mixing_cmd(c: &ChainArgs, eps: f64, cap: Option<usize>, ctx: &Ctx) -> CliResult<String> {
    let p = load_chain(c)?;
    let pi = solve_stationary(&p)?;
    let spec = spectrum(&p, &pi)?;
    let bounds = mixing_bounds(&spec, pi.min(), eps)?;
    let empirical = match cap {
        Some(cap) => Some(empirical_mixing_time(&p, &pi, eps, cap)?),
        None => None,
    };
    let empirical_value = |m: MixingTime| match m {
        MixingTime::Reached(n) => json!(n),
        MixingTime::NotReached(cap) => json!(format!("not reached by {cap}")),
    };
    match ctx.format {
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (j, l) in spec.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "eigenvalue_{j},{l}");
            }
            for (k, v) in [
                ("lambda_star", spec.lambda_star),
                ("gap", spec.gap),
                ("t_rel", spec.t_rel),
                ("eps", eps),
                ("lower_bound", bounds.lower),
                ("upper_bound", bounds.upper),
            ] {
                let _ = writeln!(s, "{k},{v}");
            }
            if let Some(m) = empirical {
                let _ = writeln!(s, "empirical_t_mix,{}", csv_cell(&empirical_value(m)));
            }
            Ok(s)
        }
        Format::Json => {
            let mut v = json!({
                "eigenvalues": spec.eigenvalues.iter().map(|&l| num(l)).collect::<Vec<_>>(),
                "lambda_star": num(spec.lambda_star),
                "gap": num(spec.gap),
                "t_rel": num(spec.t_rel),
                "eps": num(eps),
                "lower_bound": num(bounds.lower),
                "upper_bound": num(bounds.upper),
            });
            if let Some(m) = empirical {
                v["empirical_t_mix"] = empirical_value(m);
            }
            Ok(pretty(&v))
        }
    }
}

fn path_table(states: &[usize], name: impl Fn(usize) -> String) -> Table {
    let mut t = Table::new(&["t", "state"]);
    for (i, &x) in states.iter().enumerate() {
        t.push(vec![json!(i), json!(name(x))]);
    }
    t
}

fn pmf_table(
    states: &[usize],
    n: usize,
    name: impl Fn(usize) -> String,
    target: Option<&DistributionVector>,
) -> Table {
    let emp = empirical_pmf(states, n);
    let mut t = match target {
        Some(_) => Table::new(&["state", "empirical", "target"]),
        None => Table::new(&["state", "empirical"]),
    };
    for x in 0..n {
        let mut row = vec![json!(name(x)), num(emp[x])];
        if let Some(pi) = target {
            row.push(num(pi[x]));
        }
        t.push(row);
    }
    t
}

#[allow(clippy::too_many_arguments)]
fn mcmc_cmd(
    target: &Path,
    base: &Path,
    steps: usize,
    burn_in: usize,
    thinning: usize,
    start: usize,
    pmf: bool,
    ctx: &Ctx,
) -> CliResult<String> {
    let g = load_graph(base)?;
    let w: WeightsFile = read_json(target)?;
    let n = g.n_vertices();
    if w.weights.len() != n {
        return Err(CliError::Input(format!(
            "{}: {} weights for a graph with {n} vertices",
            target.display(),
            w.weights.len()
        )));
    }
    if let Some(x) = w.weights.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(CliError::Input(format!(
            "{}: weight {x} is not positive",
            target.display()
        )));
    }
    if start >= n {
        return Err(CliError::Domain(Error::StateOutOfRange { state: start, n }));
    }
    let weights = &w.weights;
    let spec = GraphWalkMetropolis::new(&g, |x, y| weights[y] / weights[x])?;
    let samples = run_chain(
        |x: &usize, r: &mut RandomSource| metropolis_step(&spec, x, r),
        start,
        steps,
        burn_in,
        thinning,
        &mut ctx.rng(),
    )?;
    let name = |x: usize| x.to_string();
    Ok(if pmf {
        let pi = DistributionVector::from_weights(weights)?;
        pmf_table(&samples, n, name, Some(&pi)).render(ctx.format)
    } else {
        let mut t = Table::new(&["sample", "state"]);
        for (i, &x) in samples.iter().enumerate() {
            t.push(vec![json!(i), json!(x)]);
        }
        t.render(ctx.format)
    })
}

fn gibbs_cmd(
    region: usize,
    sweeps: usize,
    scan: ScanArg,
    pmf: bool,
    ctx: &Ctx,
) -> CliResult<String> {
    let states = triangle_region(region).map_err(|e| CliError::Input(e.to_string()))?;
    let conds = [
        triangle_region_sampler(region, 0),
        triangle_region_sampler(region, 1),
    ];
    let scan = match scan {
        ScanArg::Random => Scan::Random,
        ScanArg::Systematic => Scan::Systematic,
    };
    let mut rng = ctx.rng();
    let mut x = vec![1usize, 1];
    let mut visits = Vec::with_capacity(sweeps);
    for _ in 0..sweeps {
        gibbs_sweep(&conds, &mut x, scan, &mut rng);
        visits.push(x.clone());
    }
    Ok(if pmf {
        let mut t = Table::new(&["m", "k", "empirical", "target"]);
        let total = sweeps.max(1) as f64;
        for s in &states {
            let count = visits.iter().filter(|v| *v == s).count() as f64;
            t.push(vec![
                json!(s[0]),
                json!(s[1]),
                num(count / total),
                num(1.0 / states.len() as f64),
            ]);
        }
        t.render(ctx.format)
    } else {
        let mut t = Table::new(&["sweep", "m", "k"]);
        for (i, v) in visits.iter().enumerate() {
            t.push(vec![json!(i + 1), json!(v[0]), json!(v[1])]);
        }
        t.render(ctx.format)
    })
}

fn anneal_cmd(
    graph: &Path,
    objective: &Path,
    steps: u64,
    start: usize,
    scale: Option<f64>,
    ctx: &Ctx,
) -> CliResult<String> {
    let g = load_graph(graph)?;
    let values = match load_input(objective, InputKind::Objective)? {
        Input::Objective(v) => v,
        _ => unreachable!(),
    };
    let obj = ObjectiveOnGraph::new(g, values).map_err(|e| CliError::Input(e.to_string()))?;
    let schedule = match scale {
        Some(c) => AnnealSchedule::logarithmic(c).map_err(|e| CliError::Input(e.to_string()))?,
        None => AnnealSchedule::range_scaled(&obj)?,
    };
    let out = simulated_annealing(&obj, &schedule, steps, start, &mut ctx.rng())?;
    match ctx.format {
        Format::Csv => {
            let mut s = format!(
                "# best_vertex={} best_value={}\n",
                out.best_vertex, out.best_value
            );
            s.push_str("t,lambda,vertex,value\n");
            for p in &out.trace {
                let _ = writeln!(s, "{},{},{},{}", p.t, p.lambda, p.vertex, p.value);
            }
            Ok(s)
        }
        Format::Json => Ok(pretty(&json!({
            "best_vertex": out.best_vertex,
            "best_value": num(out.best_value),
            "schedule": schedule.label(),
            "trace": out.trace.iter().map(|p| json!({
                "t": p.t, "lambda": num(p.lambda), "vertex": p.vertex, "value": num(p.value)
            })).collect::<Vec<_>>(),
        }))),
    }
}

fn martingale_cmd(
    c: &ChainArgs,
    table: &Path,
    states: Option<&[usize]>,
    ctx: &Ctx,
) -> CliResult<String> {
    let p = load_chain(c)?;
    let f: TableFile = read_json(table)?;
    if f.values.is_empty() {
        return Err(CliError::Input(format!(
            "{}: table has no rows",
            table.display()
        )));
    }
    if let Some(row) = f.values.iter().position(|r| r.len() != p.n()) {
        return Err(CliError::Input(format!(
            "{}: row {row} has {} entries, expected {}",
            table.display(),
            f.values[row].len(),
            p.n()
        )));
    }
    let steps = (f.values.len() - 1) as u64;
    let check =
        check_space_time_harmonic(&p, |n, x| f.values[n as usize][x], steps, ctx.tol, states)?;
    let (ws, wx) = match check.worst {
        Some((n, x)) => (json!(n), json!(p.state_name(x))),
        None => (Value::Null, Value::Null),
    };
    Ok(kv_render(
        vec![
            ("holds", json!(check.holds)),
            ("steps", json!(steps)),
            ("tol", num(ctx.tol)),
            ("worst_violation", num(check.worst_violation)),
            ("worst_step", ws),
            ("worst_state", wx),
        ],
        ctx.format,
    ))
}
