use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partition_harmonics::{Evaluator, Rule};

#[derive(Debug, Parser)]
#[command(
    name = "partition-harmonics",
    version,
    about = "Partition numbers from exact trigonometric kernels and their integral representations"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "format")]
    pub json: bool,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads; the PH_THREADS environment variable takes precedence.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition-number tables.
    #[command(subcommand)]
    Partitions(PartitionsCommand),
    /// Exact kernel expansions.
    #[command(subcommand)]
    Kernel(KernelCommand),
    /// Evaluate one integral representation of p_s.
    Quadrature(QuadratureArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Time kernel construction and quadrature per order.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
pub enum PartitionsCommand {
    /// p_0 … p_max from one or both oracles.
    Table {
        #[arg(long, value_name = "N")]
        max: u32,
        #[arg(long, value_enum, default_value_t = Oracle::Euler)]
        oracle: Oracle,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Euler,
    Enumerate,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum KernelCommand {
    /// Cosine series of D_s.
    Expand {
        #[arg(long, value_name = "S")]
        s: u32,
    },
    /// The s+1 top coefficients of D_s, halved.
    Tail {
        #[arg(long, value_name = "S")]
        s: u32,
    },
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    #[arg(long, value_name = "S")]
    pub s: u32,
    /// Order offset for the generalized form.
    #[arg(long, value_name = "M")]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value_t = FormArg::Reduced)]
    pub form: FormArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Trapezoid)]
    pub rule: RuleArg,
    /// Node count; sized from the integrand when omitted.
    #[arg(long, value_name = "N")]
    pub nodes: Option<usize>,
    #[arg(long, value_enum, default_value_t = EvaluatorArg::Direct)]
    pub evaluator: EvaluatorArg,
    /// Also report the exact value from the kernel series.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Reduced,
    Sin,
    Cos,
    Full,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Trapezoid,
    Gauss,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Rule {
        match r {
            RuleArg::Trapezoid => Rule::UniformTrapezoid,
            RuleArg::Gauss => Rule::GaussLegendre,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorArg {
    Direct,
    Series,
}

impl From<EvaluatorArg> for Evaluator {
    fn from(e: EvaluatorArg) -> Evaluator {
        match e {
            EvaluatorArg::Direct => Evaluator::Direct,
            EvaluatorArg::Series => Evaluator::Series,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: SuiteArg,
    /// Cap on the order each suite visits.
    #[arg(long, value_name = "S")]
    pub max_s: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Kernel,
    Tail,
    Section4,
    Quadrature,
    Grid,
    Moments,
    Oracles,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_name = "S")]
    pub max_s: u32,
}
