//! `robinsonian`: recognize Robinsonian matrices from the command line.
//!
//! Exit status is 0 when the matrix is (or the order makes it) Robinson, 1
//! when it is not, and 2 on unreadable input or invalid flags.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use robinsonian::oracle::{self, OracleError};
use robinsonian::pqtree::{robinsonian_pq, TreeFormat};
use robinsonian::robinson::{recursion_trace, robinsonian, RecognitionError, RecursionStats};
use robinsonian::{load_matrix, InputFormat, LoadOptions, SimilarityMatrix};

#[derive(Parser)]
#[command(name = "robinsonian", version, about = "Recognize Robinsonian similarity matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an order making the matrix Robinson, with recursion statistics.
    Recognize(Input),
    /// Print the PQ-tree of all orders making the matrix Robinson.
    Pqtree {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "bracket")]
        format: Format,
    },
    /// Check whether a given order makes the matrix Robinson.
    Check {
        #[command(flatten)]
        input: Input,
        /// Comma-separated 1-based labels; the identity when omitted.
        #[arg(long)]
        perm: Option<String>,
    },
    /// List every order making the matrix Robinson by exhaustive search.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Largest matrix size to search.
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
    },
    /// Print the recursion statistics only.
    Stats(Input),
}

#[derive(Args)]
struct Input {
    /// Matrix file, or `-` for standard input.
    path: PathBuf,
    /// Read the entries as dissimilarities (largest entry minus each value).
    #[arg(long)]
    dissimilarity: bool,
    /// Subtract the smallest off-diagonal entry from all off-diagonal entries.
    #[arg(long)]
    shift: bool,
    /// Round entries to multiples of this step.
    #[arg(long, value_name = "EPS")]
    quantize: Option<f64>,
    /// Matrix layout.
    #[arg(long = "input-format", value_enum, default_value = "auto")]
    input_format: Layout,
}

#[derive(Clone, Copy, ValueEnum)]
enum Layout {
    Auto,
    Dense,
    Sparse,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Bracket,
    Json,
    Dot,
}

struct Failure(String);

impl Input {
    fn load(&self) -> Result<SimilarityMatrix, Failure> {
        let text = if self.path.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(&self.path)
        }
        .map_err(|e| Failure(format!("cannot read {}: {e}", self.path.display())))?;
        let options = LoadOptions {
            format: match self.input_format {
                Layout::Auto => InputFormat::Auto,
                Layout::Dense => InputFormat::Dense,
                Layout::Sparse => InputFormat::Sparse,
            },
            dissimilarity: self.dissimilarity,
            shift: self.shift,
            quantize: self.quantize,
        };
        load_matrix(&text, &options).map_err(|e| Failure(format!("{}: {e}", self.path.display())))
    }
}

fn labels(order: &[usize], separator: &str) -> String {
    order
        .iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(separator)
}

fn stats_line(stats: &RecursionStats, a: &SimilarityMatrix) -> String {
    format!(
        "d={} L={} n={} m={}",
        stats.depth,
        stats.levels,
        a.n(),
        a.edge_count()
    )
}

fn rejection(error: &RecognitionError) -> String {
    match error.stage() {
        Some(stage) => format!("NOT ROBINSONIAN stage={stage}"),
        None => format!("NOT ROBINSONIAN ({error})"),
    }
}

fn parse_perm(text: &str, n: usize) -> Result<Vec<usize>, Failure> {
    let bad = |why: String| Failure(format!("--perm: {why}"));
    let order = text
        .split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
            _ => Err(bad(format!("`{}` is not a label in 1..={n}", t.trim()))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = vec![false; n];
    for &v in &order {
        if std::mem::replace(&mut seen[v], true) {
            return Err(bad(format!("label {} repeated", v + 1)));
        }
    }
    if order.len() != n {
        return Err(bad(format!("{} labels given for {n} rows", order.len())));
    }
    Ok(order)
}

fn run(command: Command) -> Result<(String, bool), Failure> {
    let mut out = String::new();
    let ok = match command {
        Command::Recognize(input) => {
            let a = input.load()?;
            match robinsonian(&a) {
                Ok(r) => {
                    writeln!(out, "{}", labels(&r.order, " ")).unwrap();
                    writeln!(out, "{}", stats_line(&r.stats, &a)).unwrap();
                    true
                }
                Err(e) => {
                    writeln!(out, "{}", rejection(&e)).unwrap();
                    false
                }
            }
        }
        Command::Pqtree { input, format } => {
            let a = input.load()?;
            match robinsonian_pq(&a) {
                Ok(tree) => {
                    let format = match format {
                        Format::Bracket => TreeFormat::Bracket,
                        Format::Json => TreeFormat::Json,
                        Format::Dot => TreeFormat::Dot,
                    };
                    let text = tree.canonicalize().serialize(format);
                    writeln!(out, "{}", text.trim_end()).unwrap();
                    true
                }
                Err(e) => {
                    writeln!(out, "{}", rejection(&e)).unwrap();
                    false
                }
            }
        }
        Command::Check { input, perm } => {
            let a = input.load()?;
            let order = match perm {
                Some(text) => parse_perm(&text, a.n())?,
                None => (0..a.n()).collect(),
            };
            let robinson = if a.n() <= 2_000 {
                oracle::is_robinson(&a, Some(&order))
            } else {
                oracle::is_robinson_sparse(&a, &order)
            }
            .map_err(|e| Failure(format!("--perm: {e}")))?;
            writeln!(out, "{}", if robinson { "ROBINSON" } else { "NOT ROBINSON" }).unwrap();
            robinson
        }
        Command::Oracle { input, cap } => {
            let a = input.load()?;
            let orders = oracle::brute_force(&a, cap).map_err(|e| match e {
                OracleError::TooLarge { n, cap } => {
                    Failure(format!("--cap: {n} rows exceed the cap of {cap}"))
                }
                other => Failure(other.to_string()),
            })?;
            for order in &orders {
                writeln!(out, "{}", labels(order, " ")).unwrap();
            }
            if orders.is_empty() {
                writeln!(out, "NOT ROBINSONIAN").unwrap();
            }
            !orders.is_empty()
        }
        Command::Stats(input) => {
            let a = input.load()?;
            let stats = recursion_trace(&a);
            writeln!(out, "{} nodes={}", stats_line(&stats, &a), stats.nodes).unwrap();
            for (i, (size, edges, min)) in stats.per_node.iter().enumerate() {
                let min = min.map_or("-".to_string(), |w| w.to_string());
                writeln!(out, "node {} n={size} m={edges} min={min}", i + 1).unwrap();
            }
            match robinsonian(&a) {
                Ok(_) => true,
                Err(e) => {
                    writeln!(out, "{}", rejection(&e)).unwrap();
                    false
                }
            }
        }
    };
    Ok((out, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
