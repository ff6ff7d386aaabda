//! Command-line front end for the `cutideal` library.
//!
//! Every command reads a graph file `{"n": 4, "edges": [[0, 1], ...]}` and
//! writes JSON to standard output or to `--output`. Exit status is 0 on
//! success, 1 when the computation itself fails (for example a `K4` minor
//! for `quad-basis`) and 2 for unreadable or malformed input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cutideal::algebra::{phi_image, CutMonomial, GeneratingSet};
use cutideal::construct::quadratic_basis_sp_with;
use cutideal::construct::ConstructConfig;
use cutideal::cut::enumerate_cuts;
use cutideal::fiber::DEFAULT_FIBER_CAP;
use cutideal::oracle::{generates_up_to_degree, markov_basis_up_to_degree, FiberWitness};
use cutideal::sampler::{marginals, sample_fiber, write_samples, CutTable, SampleParams};
use cutideal::sp::{is_k4_minor_free, sp_decompose};
use cutideal::strategy::{StrategyConfig, StrategyRegistry};
use cutideal::{Error, Graph};

#[derive(Parser, Debug)]
#[command(name = "cutideal", version, about = "Cut ideals of graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Degree bound for oracle computations.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..))]
    pub max_degree: u64,

    /// Largest number of monomials of one degree the oracle may list.
    #[arg(long, global = true, default_value_t = DEFAULT_FIBER_CAP)]
    pub fiber_cap: u128,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the cuts of a graph.
    Cuts { graph: PathBuf },
    /// Image of a cut monomial, given as a JSON list of cuts.
    Phi {
        graph: PathBuf,
        /// e.g. '[[0],[0,1]]'; each cut is the side containing vertex 0.
        #[arg(long)]
        monomial: String,
    },
    /// Series-parallel decomposition tree.
    Decompose { graph: PathBuf },
    /// Brute-force generating set up to --max-degree.
    MarkovBasis { graph: PathBuf },
    /// Quadratic generating set of a K4-minor-free graph, with its construction trace.
    QuadBasis { graph: PathBuf },
    /// Do quadrics connect every fiber up to --max-degree?
    CheckQuadratic {
        graph: PathBuf,
        /// Strategy producing the quadrics; by default the construction when
        /// the graph is K4-minor-free and all kernel quadrics otherwise.
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Edge-cut marginals of a table of cut counts.
    Marginals {
        graph: PathBuf,
        #[arg(long)]
        counts: PathBuf,
    },
    /// Random walk over tables with the marginals of --counts.
    Sample {
        graph: PathBuf,
        #[arg(long)]
        counts: PathBuf,
        /// Generating set file; computed when absent.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Check that a generating set file connects every fiber up to --max-degree.
    Verify {
        graph: PathBuf,
        #[arg(long)]
        basis: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub burn_in: u64,
    #[arg(long, default_value_t = 1)]
    pub thin: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
pub enum Failure {
    /// Exit status 2.
    Input(String),
    /// Exit status 1.
    Domain(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "{m}"),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_table(g: &Graph, path: &Path) -> Result<CutTable, Failure> {
    let table = CutTable::from_json(g.clone(), &read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    marginals(&table, g).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(table)
}

fn load_basis(g: &Graph, path: &Path) -> Result<GeneratingSet, Failure> {
    let set = GeneratingSet::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(set.with_graph(g.clone()))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

#[derive(Serialize)]
struct CutList {
    count: usize,
    cuts: Vec<cutideal::Cut>,
}

#[derive(Serialize)]
struct PhiOutput {
    degree: usize,
    image: cutideal::EdgeExponentVector,
}

#[derive(Serialize)]
struct QuadraticCheck {
    k4_minor_free: bool,
    strategy: &'static str,
    generators: usize,
    max_generator_degree: usize,
    checked_up_to: usize,
    generates: bool,
    witness: Option<FiberWitness>,
}

#[derive(Serialize)]
struct VerifyOutput {
    generators: usize,
    checked_up_to: usize,
    generates: bool,
    witness: Option<FiberWitness>,
}

/// Runs one command and returns the text to write.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let max_degree = cli.max_degree as usize;
    let cap = cli.fiber_cap;
    let strategies = StrategyRegistry::default();
    let config = StrategyConfig { max_degree, fiber_cap: cap };
    Ok(match &cli.command {
        Command::Cuts { graph } => {
            let cuts = enumerate_cuts(&load_graph(graph)?);
            json(&CutList { count: cuts.len(), cuts })
        }
        Command::Phi { graph, monomial } => {
            let g = load_graph(graph)?;
            let m: CutMonomial =
                serde_json::from_str(monomial).map_err(|e| Failure::Input(format!("monomial: {e}")))?;
            m.check_fits(&g).map_err(|e| Failure::Input(format!("monomial: {e}")))?;
            json(&PhiOutput { degree: m.degree(), image: phi_image(&g, &m) })
        }
        Command::Decompose { graph } => json(&sp_decompose(&load_graph(graph)?)?),
        Command::MarkovBasis { graph } => markov_basis_up_to_degree(&load_graph(graph)?, max_degree, cap)?.to_json(),
        Command::QuadBasis { graph } => {
            let cc = ConstructConfig { verify_degree: max_degree, fiber_cap: cap };
            quadratic_basis_sp_with(&load_graph(graph)?, &cc)?.to_json()
        }
        Command::CheckQuadratic { graph, strategy } => {
            let g = load_graph(graph)?;
            let s = match strategy {
                Some(name) => strategies.get(name)?,
                None => strategies.quadratic_for(&g)?,
            };
            let set = s.generate(&g, &config)?;
            let check = generates_up_to_degree(&g, &set, max_degree, cap)?;
            json(&QuadraticCheck {
                k4_minor_free: is_k4_minor_free(&g),
                strategy: s.name(),
                generators: set.len(),
                max_generator_degree: set.max_degree(),
                checked_up_to: max_degree,
                generates: check.generates,
                witness: check.witness,
            })
        }
        Command::Marginals { graph, counts } => {
            let g = load_graph(graph)?;
            json(&marginals(&load_table(&g, counts)?, &g)?)
        }
        Command::Sample { graph, counts, basis, chain } => {
            let g = load_graph(graph)?;
            let t0 = load_table(&g, counts)?;
            let moves = match basis {
                Some(p) => load_basis(&g, p)?,
                None if is_k4_minor_free(&g) => strategies.get("series-parallel")?.generate(&g, &config)?,
                None => strategies.get("oracle")?.generate(&g, &config)?,
            };
            let params = SampleParams { steps: chain.steps, burn_in: chain.burn_in, thin: chain.thin, seed: chain.seed };
            let samples = sample_fiber(&g, &t0, &moves, &params)?;
            let mut buf = Vec::new();
            write_samples(&mut buf, &params, &samples).expect("writing to memory");
            String::from_utf8(buf).expect("JSON is UTF-8")
        }
        Command::Verify { graph, basis } => {
            let g = load_graph(graph)?;
            let set = load_basis(&g, basis)?;
            let check = generates_up_to_degree(&g, &set, max_degree, cap)?;
            json(&VerifyOutput {
                generators: set.len(),
                checked_up_to: max_degree,
                generates: check.generates,
                witness: check.witness,
            })
        }
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("CUTIDEAL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    configure_threads();
    let text = match execute(&cli) {
        Ok(t) => t,
        Err(f) => {
            let _ = writeln!(stderr, "error: {f}");
            return f.exit_code();
        }
    };
    let text = if text.ends_with('\n') { text } else { text + "\n" };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    0
}
