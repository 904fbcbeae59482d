use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk_cli::commands;
use qwalk_cli::{CliError, CoinSource, CompileOutputs, Output, Partitions};
use qwalk_core::{NamedCoin, Tolerance};

/// Coined quantum walks on multigraphs.
#[derive(Debug, Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    /// Absolute tolerance for unitarity and completeness checks.
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,
    /// Output file (standard output when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write every step of a walk, not only the last.
    #[arg(long, global = true)]
    trajectory: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct CoinArgs {
    /// Coin file.
    #[arg(long, value_name = "PATH")]
    coin: Option<PathBuf>,
    /// Named coin: identity, hadamard, grover or dft.
    #[arg(long, value_name = "NAME")]
    coin_name: Option<NamedCoin>,
}

impl CoinArgs {
    fn source(&self) -> Option<CoinSource> {
        match (&self.coin, self.coin_name) {
            (Some(path), _) => Some(CoinSource::File(path.clone())),
            (None, Some(name)) => Some(CoinSource::Named(name)),
            (None, None) => None,
        }
    }

    fn required(&self) -> Result<CoinSource, CliError> {
        self.source()
            .ok_or_else(|| CliError::Precondition("--coin or --coin-name is required".to_owned()))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a regular adjacency matrix into permutation blocks.
    Decompose { adjacency: PathBuf },
    /// Check a Kraus grid for completeness and, optionally, its block sum.
    Verify {
        grid: PathBuf,
        #[arg(long, value_name = "PATH")]
        adjacency: Option<PathBuf>,
    },
    /// Assemble the shift matrix of a Kraus grid.
    Assemble { grid: PathBuf },
    /// Build a coin operator from a coin file or a named coin.
    Coin {
        spec: Option<PathBuf>,
        #[arg(long, conflicts_with = "spec", requires_all = ["m", "n"])]
        name: Option<NamedCoin>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Compose a shift matrix with a coin.
    EvolveOp {
        shift: PathBuf,
        #[command(flatten)]
        coin: CoinArgs,
        /// Coin dimension (taken from the coin file when omitted).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Run a coined quantum walk and write position probabilities as CSV.
    Walk {
        /// Evolution operator, or the shift when a coin is given.
        operator: PathBuf,
        #[command(flatten)]
        coin: CoinArgs,
        #[arg(long, value_name = "PATH")]
        init: PathBuf,
        #[arg(long, value_name = "T")]
        steps: usize,
    },
    /// Run the classical random walk on an adjacency matrix.
    Classical {
        adjacency: PathBuf,
        #[arg(long, value_name = "PATH")]
        init: PathBuf,
        #[arg(long, value_name = "T")]
        steps: usize,
    },
    /// Read a unitary as a shift operator and write its multigraph.
    Extract {
        unitary: PathBuf,
        #[arg(long, required_unless_present = "all_partitions")]
        m: Option<usize>,
        #[arg(long, conflicts_with = "m")]
        all_partitions: bool,
    },
    /// Decompose, assemble and apply a coin in one go.
    Compile {
        adjacency: PathBuf,
        #[command(flatten)]
        coin: CoinArgs,
        /// Also write the Kraus grid here.
        #[arg(long, value_name = "PATH")]
        grid_out: Option<PathBuf>,
        /// Also write the shift matrix here.
        #[arg(long, value_name = "PATH")]
        shift_out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let tol = match cli.tol {
        None => Tolerance::default(),
        Some(eps) => Tolerance::with_abs(eps)
            .ok_or_else(|| CliError::Precondition(format!("invalid tolerance {eps}")))?,
    };
    let out = Output::from_option(cli.out.clone());
    match cli.command {
        Command::Decompose { adjacency } => commands::decompose(&adjacency, &out),
        Command::Verify { grid, adjacency } => commands::verify(&grid, adjacency.as_deref(), tol),
        Command::Assemble { grid } => commands::assemble(&grid, &out, tol),
        Command::Coin { spec, name, m, n } => {
            let source = match (spec, name) {
                (Some(path), _) => CoinSource::File(path),
                (None, Some(name)) => CoinSource::Named(name),
                (None, None) => {
                    return Err(CliError::Precondition(
                        "give a coin file or --name".to_owned(),
                    ))
                }
            };
            commands::coin(&source, m.zip(n), &out, tol)
        }
        Command::EvolveOp { shift, coin, m } => {
            commands::evolve_op(&shift, &coin.required()?, m, &out, tol)
        }
        Command::Walk {
            operator,
            coin,
            init,
            steps,
        } => commands::walk(
            &operator,
            coin.source().as_ref(),
            &init,
            steps,
            cli.trajectory,
            &out,
            tol,
        ),
        Command::Classical {
            adjacency,
            init,
            steps,
        } => commands::classical(&adjacency, &init, steps, cli.trajectory, &out, tol),
        Command::Extract {
            unitary,
            m,
            all_partitions,
        } => {
            let path = cli
                .out
                .ok_or_else(|| CliError::Precondition("extract needs --out".to_owned()))?;
            let partitions = match m {
                Some(m) if !all_partitions => Partitions::Single(m),
                _ => Partitions::All,
            };
            commands::extract(&unitary, partitions, &path, tol)
        }
        Command::Compile {
            adjacency,
            coin,
            grid_out,
            shift_out,
        } => {
            let outputs = CompileOutputs {
                operator: out,
                grid: grid_out,
                shift: shift_out,
            };
            commands::compile(&adjacency, &coin.required()?, &outputs, tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Summaries go to stderr when the artifact itself is on stdout.
    let artifact_on_stdout = cli.out.is_none() && !matches!(cli.command, Command::Verify { .. });
    match run(cli) {
        Ok(summary) => {
            if artifact_on_stdout {
                eprint!("{summary}");
            } else {
                print!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(CliError::VerificationFailed(report)) => {
            print!("{report}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
