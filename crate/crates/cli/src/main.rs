mod cache;
mod commands;
mod error;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fourier_core::fourier::DEFAULT_NODE_BUDGET;
use fourier_core::modular::{DEFAULT_GROUP_CAP, DEFAULT_T_ORDER};

use crate::cache::Cache;
use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "fourier", version, about = "Integral Fourier matrices, modular data and quantum doubles")]
struct Cli {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Result cache directory [default: $XDG_CACHE_HOME/fourier or ~/.cache/fourier].
    #[arg(long, global = true, env = "FOURIER_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true, env = "FOURIER_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Admissible norm vectors of dimension N.
    Norms { n: usize },
    /// All integral Fourier matrices of dimension N up to isomorphism.
    Enumerate {
        n: usize,
        /// Keep only congruence multiplication tables.
        #[arg(long)]
        cmt: bool,
        /// Keep only matrices with nonnegative structure constants.
        #[arg(long)]
        nonneg: bool,
        /// Resumable search state, written after every level.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Abort after this many search nodes.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Congruence multiplication table check.
    Cmt { matrix: String },
    /// Greatest modulus of the degree congruences.
    Modulus { matrix: String },
    /// Kronecker product of two matrices.
    Tensor { a: String, b: String },
    /// The (n+6)-dimensional extension.
    Plus6 { matrix: String },
    /// Diagonal T-matrices of root-of-unity entries solving S^2 = (ST)^3.
    Tsolve {
        matrix: String,
        #[arg(long, default_value_t = DEFAULT_T_ORDER)]
        max_order: u64,
    },
    /// Check every modular datum axiom; T defaults to the catalog's stored T.
    Verify { s: String, t: Option<String> },
    /// The k-th member of the infinite family of rational modular data.
    Sequence {
        k: u32,
        /// Also compute the order of the group generated by S and T.
        #[arg(long)]
        group_order: bool,
    },
    /// Order of the matrix group generated by S and T.
    Grouporder {
        s: String,
        t: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: u64,
    },
    /// Finite permutation groups.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Modular datum of the quantum double of a group.
    Qdouble {
        group: String,
        /// Print the integral Fourier matrix (rational doubles only).
        #[arg(long)]
        fourier: bool,
        /// Exit 1 unless the S-matrix is rational.
        #[arg(long)]
        rational_check: bool,
        /// Include the exact S-matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Search for pairing maps of H relative to the normal subgroup N.
    Pairing {
        h: String,
        /// Generators of N: `;`-separated cycles or `g<k>` for the k-th generator of H.
        n: String,
        /// Multipliers to try [default: units modulo the exponent except 1].
        #[arg(long, value_delimiter = ',')]
        multipliers: Vec<u64>,
    },
    /// Enumerate dimensions 1..=MAX_DIM and match them against the catalog.
    Reproduce {
        max_dim: usize,
        /// Allow dimension 12.
        #[arg(long, env = "FOURIER_LONG")]
        long: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// The built-in catalog of named matrices.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Order, exponent and conjugacy classes.
    Info { group: String },
    /// Exact character table.
    Chartab { group: String },
    /// Subdirect product of R copies of H over H/N.
    Subdirect {
        h: String,
        /// Generators of N: `;`-separated cycles or `g<k>` for the k-th generator of H.
        n: String,
        r: usize,
        /// Also decide whether the quantum double is rational.
        #[arg(long)]
        rational_check: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// Every entry with its dimension and tags.
    List,
    /// One materialized entry.
    Show { name: String },
    /// Recompute all tags and compare with the stored ones.
    Check,
}

fn init_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<commands::Outcome> {
    init_threads(cli.threads)?;
    let cache = if cli.no_cache {
        None
    } else {
        let root = cli.cache_dir.clone().unwrap_or_else(cache::default_root);
        Some(Cache::open(&root)?)
    };
    let cache = cache.as_ref();
    use commands as c;
    match cli.command {
        Command::Norms { n } => c::norms(cache, n),
        Command::Enumerate {
            n,
            cmt,
            nonneg,
            checkpoint,
            budget,
        } => c::enumerate(cache, n, cmt, nonneg, checkpoint, budget),
        Command::Cmt { matrix } => c::cmt(&matrix),
        Command::Modulus { matrix } => c::modulus(&matrix),
        Command::Tensor { a, b } => c::tensor(&a, &b),
        Command::Plus6 { matrix } => c::plus6(&matrix),
        Command::Tsolve { matrix, max_order } => c::tsolve(&matrix, max_order),
        Command::Verify { s, t } => c::verify(&s, t.as_deref()),
        Command::Sequence { k, group_order } => c::sequence(k, group_order),
        Command::Grouporder { s, t, cap } => c::grouporder(&s, t.as_deref(), cap),
        Command::Group { command } => match command {
            GroupCommand::Info { group } => c::group_info(&group),
            GroupCommand::Chartab { group } => c::chartab(&group),
            GroupCommand::Subdirect {
                h,
                n,
                r,
                rational_check,
            } => c::subdirect(&h, &n, r, rational_check),
        },
        Command::Qdouble {
            group,
            fourier,
            rational_check,
            matrix,
        } => c::qdouble(&group, fourier, rational_check, matrix),
        Command::Pairing { h, n, multipliers } => c::pairing(&h, &n, &multipliers),
        Command::Reproduce { max_dim, long, budget } => c::reproduce(cache, max_dim, long, budget),
        Command::Catalog { command } => match command {
            CatalogCommand::List => c::catalog_list(),
            CatalogCommand::Show { name } => c::catalog_show(&name),
            CatalogCommand::Check => c::catalog_check(),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(outcome) => {
            let text = if json {
                let mut s = serde_json::to_string_pretty(&outcome.value).expect("json values serialize");
                s.push('\n');
                s
            } else {
                outcome.text
            };
            // a closed pipe (`fourier ... | head`) is not an error
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(2);
                }
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
