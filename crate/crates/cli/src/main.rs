//! `liptree`: weights, test functions, multiplication-operator analyses and
//! property suites on finite truncations of rooted trees.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use liptree_core::analysis::{self, TailConfig};
use liptree_core::exact::{self, NormSolution, OracleResult, SandwichReport};
use liptree_core::num17;
use liptree_core::spaces::NormReport;
use liptree_core::symbols::{FunctionJson, RootConvention, Symbol};
use liptree_core::testfns::{TestFnKind, TestFunctionSpec};
use liptree_core::tree::{TreeShape, TreeTruncation, VertexId, DEFAULT_VERTEX_CAP};
use liptree_core::verify::{self, Suite, SuiteConfig};
use liptree_core::weights;
use liptree_core::TreeFunction;

#[derive(Parser, Debug)]
#[command(name = "liptree", version, about = "Iterated logarithmic Lipschitz spaces on rooted trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print ℓ_0..ℓ_K and Λ_0..Λ_K at x.
    Weights {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one of the extremal test functions.
    Testfn {
        #[arg(long, value_parser = parse_kind)]
        kind: TestFnKind,
        /// Target vertex as a child-index path such as 0/1/0 (`o` is the root).
        #[arg(long, value_parser = parse_vertex)]
        vertex: Option<VertexId>,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// μ/ν profiles, norm bounds, tail diagnostics and isometry defect of M_ψ.
    Analyze {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        indices: IndexArgs,
        #[command(flatten)]
        tree: TreeArgs,
        /// Also compute the exact operator norm on the truncation.
        #[arg(long)]
        exact: bool,
        /// Write the per-depth profile (depth, mu_max, nu_max) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = TailConfig::default().eps_tail)]
        eps_tail: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact operator norm with witness, cross-checked by random search.
    ExactNorm {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        indices: IndexArgs,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized property suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = TailConfig::default().eps_tail)]
        eps_tail: f64,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct TreeArgs {
    /// Children per vertex.
    #[arg(long, default_value_t = 2, conflicts_with = "branching_per_level")]
    branching: u32,
    /// Children per vertex at each length, e.g. 3,2,2; the last entry repeats.
    #[arg(long, value_delimiter = ',')]
    branching_per_level: Option<Vec<u32>>,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, env = "LIPTREE_VERTEX_CAP", default_value_t = DEFAULT_VERTEX_CAP)]
    vertex_cap: usize,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SymbolArgs {
    /// Symbol JSON file.
    #[arg(long)]
    symbol: Option<PathBuf>,
    /// Radial symbol expression in x = |v|.
    #[arg(long)]
    symbol_expr: Option<String>,
}

#[derive(Args, Debug)]
struct IndexArgs {
    #[arg(long, requires = "n", conflicts_with = "k")]
    m: Option<u32>,
    #[arg(long, requires = "m")]
    n: Option<u32>,
    /// Shorthand for --m K --n K.
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    fn input(context: &str, err: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{context}: {err}"))
    }
}

fn parse_kind(s: &str) -> Result<TestFnKind, String> {
    s.parse().map_err(|e: liptree_core::testfns::TestFnError| e.to_string())
}

fn parse_vertex(s: &str) -> Result<VertexId, String> {
    s.parse().map_err(|e: liptree_core::tree::TreeError| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

impl TreeArgs {
    fn shape(&self) -> TreeShape {
        match &self.branching_per_level {
            Some(levels) => TreeShape::PerLevel(levels.clone()),
            None => TreeShape::Uniform(self.branching),
        }
    }

    fn build(&self) -> Result<Arc<TreeTruncation>, CliError> {
        TreeTruncation::with_cap(self.shape(), self.depth, self.vertex_cap)
            .map(Arc::new)
            .map_err(|e| CliError::input("--branching/--depth", e))
    }
}

impl IndexArgs {
    fn resolve(&self) -> Result<(u32, u32), CliError> {
        match (self.m, self.n, self.k) {
            (_, _, Some(k)) => Ok((k, k)),
            (Some(m), Some(n), None) => Ok((m, n)),
            _ => Err(CliError::Input("give --m and --n, or --k".into())),
        }
    }
}

impl SymbolArgs {
    fn load(&self) -> Result<Symbol, CliError> {
        match (&self.symbol, &self.symbol_expr) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                Symbol::from_json(&text).map_err(|e| CliError::input(&path.display().to_string(), e))
            }
            (None, Some(expr)) => Symbol::radial(expr).map_err(|e| CliError::input("--symbol-expr", e)),
            (None, None) => Err(CliError::Input("give --symbol or --symbol-expr".into())),
        }
    }

    fn materialize(&self, tree: &Arc<TreeTruncation>) -> Result<(Symbol, TreeFunction, RootConvention), CliError> {
        let symbol = self.load()?;
        let (psi, convention) = symbol
            .materialize(tree)
            .map_err(|e| CliError::input("symbol", e))?;
        Ok((symbol, psi, convention))
    }
}

fn emit(report: &impl Serialize, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

#[derive(Serialize)]
struct WeightsReport {
    #[serde(with = "num17")]
    x: f64,
    k: u32,
    #[serde(with = "num17::vec")]
    ell: Vec<f64>,
    #[serde(with = "num17::vec")]
    lambda: Vec<f64>,
}

#[derive(Serialize)]
struct TestFnReport {
    #[serde(flatten)]
    spec: TestFunctionSpec,
    depth: usize,
    norm: NormReport,
    function: FunctionJson,
}

#[derive(Serialize)]
struct ExactNormReport {
    symbol: String,
    solution: NormSolution,
    oracle: OracleResult,
    sandwich: Option<SandwichReport>,
    passed: bool,
}

fn write_profile_csv(path: &Path, profile: &analysis::MuNuProfile) -> Result<(), CliError> {
    let io_err = |e: csv::Error| CliError::Io {
        path: path.display().to_string(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(["depth", "mu_max", "nu_max"]).map_err(io_err)?;
    let cell = |x: f64| num17::format(x).unwrap_or_default();
    for (i, (mu, nu)) in profile.mu_by_depth.iter().zip(&profile.nu_by_depth).enumerate() {
        w.write_record([(i + 1).to_string(), cell(*mu), cell(*nu)]).map_err(io_err)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Runs one command; `Ok(false)` means a verification failed.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Weights { k, x, out } => {
            let (ell, lambda) = weights::hierarchy(k, x).map_err(|e| CliError::input("--x", e))?;
            emit(&WeightsReport { x, k, ell, lambda }, out.as_deref())?;
            Ok(true)
        }
        Command::Testfn {
            kind,
            vertex,
            m,
            tree,
            out,
        } => {
            let tree = tree.build()?;
            let spec = TestFunctionSpec { kind, vertex, m };
            let f = spec.build(&tree).map_err(|e| CliError::input("--kind/--vertex", e))?;
            let report = TestFnReport {
                spec,
                depth: tree.depth(),
                norm: f.norm(m),
                function: FunctionJson::from(&f),
            };
            emit(&report, out.as_deref())?;
            Ok(true)
        }
        Command::Analyze {
            symbol,
            indices,
            tree,
            exact,
            csv,
            eps_tail,
            out,
        } => {
            let (m, n) = indices.resolve()?;
            let tree = tree.build()?;
            let (sym, psi, convention) = symbol.materialize(&tree)?;
            let tail = TailConfig {
                eps_tail,
                ..TailConfig::default()
            };
            let report = analysis::analyze(&psi, sym.describe(), convention, m, n, &tail, exact);
            if let Some(path) = csv {
                write_profile_csv(&path, &report.profile)?;
            }
            emit(&report, out.as_deref())?;
            Ok(true)
        }
        Command::ExactNorm {
            symbol,
            indices,
            tree,
            trials,
            seed,
            out,
        } => {
            let (m, n) = indices.resolve()?;
            if trials == 0 {
                return Err(CliError::Input("--trials must be at least 1".into()));
            }
            let tree = tree.build()?;
            let (sym, psi, _) = symbol.materialize(&tree)?;
            let solution = exact::exact_operator_norm(&psi, m, n);
            let oracle = exact::random_search(&psi, m, n, trials, seed);
            let sandwich = if m != n {
                Some(exact::verify_sandwich(&psi, m, n, &sym.describe()).map_err(|e| {
                    eprintln!("verification failed: {e}");
                }))
            } else {
                None
            };
            let sandwich_ok = !matches!(sandwich, Some(Err(())));
            let passed = sandwich_ok
                && oracle.value <= solution.value + exact::SANDWICH_TOL
                && (solution.witness_norm - 1.0).abs() <= 1e-12
                && solution.image_norm >= solution.value - exact::SANDWICH_TOL;
            let report = ExactNormReport {
                symbol: sym.describe(),
                solution,
                oracle,
                sandwich: sandwich.and_then(Result::ok),
                passed,
            };
            emit(&report, out.as_deref())?;
            Ok(passed)
        }
        Command::Verify {
            suite,
            trials,
            seed,
            eps_tail,
            tree,
            out,
        } => {
            let cfg = SuiteConfig {
                suite,
                shape: tree.shape(),
                depth: tree.depth,
                trials,
                seed,
                vertex_cap: tree.vertex_cap,
                tail: TailConfig {
                    eps_tail,
                    ..TailConfig::default()
                },
            };
            let report = verify::run_suite(&cfg).map_err(|e| CliError::input("verify", e))?;
            for f in &report.failures {
                let vertex = f.vertex.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                eprintln!(
                    "FAIL {}: vertex {vertex}, depth {}, slack {:e}",
                    f.instance, f.depth, f.slack
                );
            }
            emit(&report, out.as_deref())?;
            Ok(report.passed)
        }
    }
}

fn status(outcome: &Result<bool, CliError>) -> u8 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(_) => 2,
    }
}

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    ExitCode::from(status(&outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_status_contract() {
        assert_eq!(status(&Ok(true)), 0);
        assert_eq!(status(&Ok(false)), 1);
        assert_eq!(status(&Err(CliError::Input("x".into()))), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
