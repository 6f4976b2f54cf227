use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use defcoh_cli::commands::{self, CohomologyArgs, StarArgs};
use defcoh_cli::params::{parse_bound, parse_pair, parse_window};
use defcoh_cli::{Format, HDesc, Params, QDesc, Report, Verdict};

#[derive(Parser)]
#[command(name = "defcoh", version, about = "Exact checks of deformation cohomology at bounded degree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Fmt,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include per-check wall times (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario.
    Run {
        scenario: String,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        hbar: Option<String>,
        /// Degree bound "D" or "Dx,Dy".
        #[arg(long)]
        bound: Option<String>,
        /// Truncation order K.
        #[arg(long)]
        order: Option<usize>,
        /// "order=o,deg=d".
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Build m exp(h sum phi_i (x) psi_i) and optionally check associativity.
    Star {
        /// e.g. "(dx,dy)" or "(1/2*dx,dy);(-1/2*dy,dx)".
        #[arg(long)]
        pairs: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long)]
        check: Option<String>,
        #[arg(long, default_value = "4")]
        bound: String,
        #[command(flatten)]
        output: Output,
    },
    /// Window dimension of Hochschild cohomology.
    Cohomology {
        #[arg(long, default_value = "poly")]
        algebra: String,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        hbar: Option<String>,
        #[arg(long, default_value_t = 1)]
        arity: usize,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        bidegree: String,
        #[arg(long, default_value = "order=2,deg=6")]
        window: String,
        #[command(flatten)]
        output: Output,
    },
    /// Euler-Poincare fuzzing over seeded random complexes.
    EpFuzz {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn build(cmd: Command) -> defcoh_core::Result<(Report, Output)> {
    Ok(match cmd {
        Command::Run { scenario, q, hbar, bound, order, window, seed, count, max_dim, max_len, output } => {
            let p = Params {
                q: q.as_deref().map(QDesc::parse).transpose()?,
                hbar: hbar.as_deref().map(HDesc::parse).transpose()?,
                bound: bound.as_deref().map(parse_bound).transpose()?,
                order,
                window: window.as_deref().map(parse_window).transpose()?,
                seed,
                count,
                max_dim,
                max_len,
            };
            (defcoh_cli::run(&scenario, &p)?, output)
        }
        Command::Star { pairs, order, check, bound, output } => {
            let check_assoc = match check.as_deref() {
                None => false,
                Some("assoc") => true,
                Some(other) => return Err(defcoh_core::Error::InvalidParameters(format!("unknown check {other:?}"))),
            };
            (commands::star(&StarArgs { pairs, order, check_assoc, bound: parse_bound(&bound)? })?, output)
        }
        Command::Cohomology { algebra, q, hbar, arity, bidegree, window, output } => {
            let a = CohomologyArgs {
                algebra,
                q: q.as_deref().map(QDesc::parse).transpose()?,
                hbar: hbar.as_deref().map(HDesc::parse).transpose()?,
                arity,
                bidegree: parse_pair(&bidegree)?,
                window: parse_window(&window)?,
            };
            (commands::cohomology(&a)?, output)
        }
        Command::EpFuzz { count, max_dim, max_len, seed, output } => {
            let p = Params { seed: Some(seed), count: Some(count), max_dim: Some(max_dim), max_len: Some(max_len), ..Params::default() };
            (defcoh_cli::run("ep-fuzz", &p)?, output)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, output) = match build(cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = match output.format {
        Fmt::Text => Format::Text,
        Fmt::Json => Format::Json,
        Fmt::Csv => Format::Csv,
    };
    let text = report.render(format, output.timings);
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.has_warnings() {
        eprintln!("warning: some checks hold only inside their window (NONE-AT-WINDOW)");
    }
    match report.overall() {
        Verdict::Fail => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
