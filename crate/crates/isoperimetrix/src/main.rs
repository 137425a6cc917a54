//! Batch front door: parse specs, run computations and verification suites,
//! emit JSON/CSV reports.

use clap::Parser;
use isoperimetrix::commands::{self, CommonArgs, ConstantCmd, TensorCmd, TransferCmd};

#[derive(Debug, Parser)]
#[command(
    name = "isoperimetrix",
    version,
    about = "Isoperimetric profiles, Orlicz-Sobolev norms, capacities and constant transfers on 1-D probability measures"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, clap::Subcommand)]
enum Cmd {
    /// Sample the isoperimetric profile of a measure.
    Profile {
        #[arg(long)]
        measure: String,
        /// Number of export grid points.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Orlicz and weak-Orlicz norms of a test function.
    Norm {
        #[arg(long)]
        measure: String,
        #[arg(long = "N")]
        n: String,
        /// Test function: `indicator:mass` or `grid:file`.
        #[arg(long)]
        f: String,
    },
    /// Interval capacity or Cap_q(t, 1/2) with an optional oracle cross-check.
    Capacity {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        /// Also run the discretized variational oracle.
        #[arg(long)]
        oracle: bool,
        /// Oracle grid size.
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Hierarchy constants of a measure.
    Constant {
        #[command(subcommand)]
        which: ConstantCmd,
        #[arg(long, global = true, default_value = "gaussian")]
        measure: String,
    },
    /// Constant-transfer maps with ledgers.
    Transfer {
        #[command(subcommand)]
        which: TransferCmd,
    },
    /// Tensorization machinery.
    Tensor {
        #[command(subcommand)]
        which: TensorCmd,
    },
    /// Run verification suites (exit code 2 on failed assertions).
    Verify {
        /// `all`, a suite name, or `mazya-duality` with --measure/--N/--a.
        target: String,
        /// Suite collection (only `paper`).
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        measure: Option<String>,
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long)]
        a: Option<f64>,
    },
}

fn main() {
    let echo = std::env::args().collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    let code = match run(&cli, echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli, echo: String) -> anyhow::Result<i32> {
    let common = &cli.common;
    match &cli.cmd {
        Cmd::Profile { measure, grid } => commands::profile(common, echo, measure, *grid),
        Cmd::Norm { measure, n, f } => commands::norm(common, echo, measure, n, f),
        Cmd::Capacity { measure, q, t, a, b, oracle, grid } => {
            commands::capacity_cmd(common, echo, measure, *q, *t, *a, *b, *oracle, *grid)
        }
        Cmd::Constant { which, measure } => commands::constant(common, echo, which, measure),
        Cmd::Transfer { which } => commands::transfer(common, echo, which),
        Cmd::Tensor { which } => commands::tensor(common, echo, which),
        Cmd::Verify { target, suite, measure, n, a } => commands::verify(
            common,
            echo,
            target,
            suite.as_deref(),
            measure.as_deref(),
            n.as_deref(),
            *a,
        ),
    }
}
