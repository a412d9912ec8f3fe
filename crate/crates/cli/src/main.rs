mod commands;
mod input;

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use inhomog_core::cantor::SetKind;
use inhomog_core::hallray::SchedulePolicy;
use inhomog_core::{Error, Execution};

use commands::ConstructArgs;
use input::{AlphaSpec, Auto, BetaSpec, UsageError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Exec {
    Parallel,
    Sequential,
}

impl From<Exec> for Execution {
    fn from(e: Exec) -> Self {
        match e {
            Exec::Parallel => Execution::Parallel,
            Exec::Sequential => Execution::Sequential,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Set {
    E,
    F,
}

/// Negative continued fractions and inhomogeneous approximation constants.
///
/// Alpha is given as `ncf:pre;period`, `rcf:pre;period` or `rational:p/q`,
/// e.g. `ncf:;5,3` for <5,3,5,3,...>.
#[derive(Debug, Parser)]
#[command(name = "inhomog", version)]
struct Cli {
    /// Output format. Not every subcommand supports every format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Decimal digits in rendered numbers.
    #[arg(long, global = true, env = "INHOMOG_PRECISION", default_value_t = 30)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct BetaArgs {
    /// Rational beta `p/q`.
    #[arg(long)]
    beta: Option<String>,
    /// Davenport digits of beta: `b1,b2,...` (finite) or `pre;period`.
    #[arg(long)]
    beta_digits: Option<String>,
}

impl BetaArgs {
    fn spec(&self) -> anyhow::Result<BetaSpec> {
        BetaSpec::parse(self.beta.as_deref(), self.beta_digits.as_deref())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Digits and convergents of alpha.
    Ncf {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Greedy Ostrowski coefficients of q.
    Ostrowski {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        q: BigInt,
    },
    /// Davenport digits of beta and the enclosure they give.
    Davenport {
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long, default_value_t = 60)]
        depth: usize,
    },
    /// Bracket for the one-sided constant M+(alpha, beta).
    Spectrum {
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        /// Report min(M+(alpha, beta), M+(alpha, -beta)) instead.
        #[arg(long)]
        two_sided: bool,
    },
    /// Brute-force window minima of q||q alpha - beta|| for q <= qmax.
    Oracle {
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long, default_value_t = 1_000_000)]
        qmax: u64,
        #[arg(long, value_enum, default_value_t = Exec::Parallel)]
        exec: Exec,
    },
    /// Nested interval dissection of E(alpha, s) or F(alpha, s).
    Dissect {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum)]
        set: Set,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Exec::Parallel)]
        exec: Exec,
    },
    /// Gap condition on neighbouring dissection intervals.
    Hallcheck {
        #[arg(long)]
        alpha: String,
        /// `auto` searches for the smallest passing s.
        #[arg(long, default_value = "auto")]
        s: Auto,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 40)]
        max_s: usize,
        #[arg(long, value_enum, default_value_t = Exec::Parallel)]
        exec: Exec,
    },
    /// Glue a beta whose constant equals a chosen product and trace it.
    Construct {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "auto")]
        s: Auto,
        /// `auto` takes s times the zero-block factor.
        #[arg(long, default_value = "auto")]
        r: Auto,
        /// Schedule spacing in periods.
        #[arg(long, default_value_t = 3)]
        scale: usize,
        /// Number of schedule points.
        #[arg(long, default_value_t = 15)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        phase: usize,
        /// Dissection depth of the glued words.
        #[arg(long, default_value_t = 3)]
        word_depth: usize,
        /// Depth of the gap check used when s is `auto`.
        #[arg(long, default_value_t = 10)]
        hall_depth: usize,
        /// Cross-check against the oracle up to this q.
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long, value_enum, default_value_t = Exec::Parallel)]
        exec: Exec,
    },
    /// Consecutive ray intervals and their overlap flags.
    Chain {
        #[arg(long)]
        alpha: String,
        /// `auto` starts at the first s whose chain overlaps throughout.
        #[arg(long, default_value = "auto")]
        r0: Auto,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Long/short subdivision of the unit interval by multiples of alpha.
    Figure {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 2)]
        levels: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let p = cli.precision;
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match cli.command {
        Command::Ncf { alpha, terms } => commands::ncf(&alpha.parse()?, terms, fmt(Format::Json), p),
        Command::Ostrowski { alpha, q } => commands::ostrowski_cmd(&alpha.parse()?, &q, fmt(Format::Json)),
        Command::Davenport { alpha, beta, depth } => {
            commands::davenport(&alpha.parse()?, &beta.spec()?, depth, fmt(Format::Json), p)
        }
        Command::Spectrum {
            alpha,
            beta,
            depth,
            two_sided,
        } => commands::spectrum(&alpha.parse()?, &beta.spec()?, depth, two_sided, fmt(Format::Json), p),
        Command::Oracle {
            alpha,
            beta,
            qmax,
            exec,
        } => commands::oracle(&alpha.parse()?, &beta.spec()?, qmax, exec.into(), fmt(Format::Json)),
        Command::Dissect {
            alpha,
            set,
            s,
            depth,
            exec,
        } => {
            let set = match set {
                Set::E => SetKind::E,
                Set::F => SetKind::F,
            };
            commands::dissect_cmd(&alpha.parse()?, set, s, depth, exec.into(), fmt(Format::Json), p)
        }
        Command::Hallcheck {
            alpha,
            s,
            depth,
            max_s,
            exec,
        } => commands::hallcheck(&alpha.parse()?, s, depth, max_s, exec.into(), fmt(Format::Json)),
        Command::Construct {
            alpha,
            s,
            r,
            scale,
            len,
            phase,
            word_depth,
            hall_depth,
            qmax,
            exec,
        } => {
            let args = ConstructArgs {
                s,
                r,
                policy: SchedulePolicy { phase, scale, len },
                word_depth,
                hall_depth,
                qmax,
            };
            commands::construct_cmd(&alpha.parse::<AlphaSpec>()?, &args, exec.into(), fmt(Format::Json), p)
        }
        Command::Chain { alpha, r0, count } => commands::chain(&alpha.parse()?, r0, count, fmt(Format::Json), p),
        Command::Figure { alpha, levels } => commands::figure(&alpha.parse()?, levels, fmt(Format::Svg), p),
    }
}

/// Stable machine name of a library error.
fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotInUnitInterval => "NotInUnitInterval",
        Error::DegeneratePeriod => "DegeneratePeriod",
        Error::PrecisionExhausted { .. } => "PrecisionExhausted",
        Error::OutOfRange(_) => "OutOfRange",
        Error::UnboundedInput => "UnboundedInput",
        Error::NotCanonicalizable(_) => "NotCanonicalizable",
        Error::ZeroDigits => "ZeroDigits",
        Error::FiniteSupport { .. } => "FiniteSupport",
        Error::Terminated(_) => "Terminated",
        Error::TargetUnreachable { .. } => "TargetUnreachable",
        Error::EmptyNode => "EmptyNode",
        Error::SBelowN { .. } => "SBelowN",
        Error::TargetOutsideWindow => "TargetOutsideWindow",
        Error::NotEventuallyPeriodic => "NotEventuallyPeriodic",
        Error::ScheduleTooTight(_) => "ScheduleTooTight",
        Error::InvalidEF(_) => "InvalidEF",
        Error::Inexact(_) => "Inexact",
        Error::InvalidInput(_) => "InvalidInput",
        Error::HallConditionFailed { .. } => "HallConditionFailed",
    }
}

fn fail(code: u8, kind: &str, message: &str) -> ExitCode {
    let body = json!({"error": kind, "message": message, "exitCode": code});
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(1, "Usage", e.render().to_string().trim_end()),
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let Some(u) = err.downcast_ref::<UsageError>() {
                return fail(1, "Usage", &u.0);
            }
            match err.downcast_ref::<Error>() {
                Some(e @ Error::PrecisionExhausted { .. }) => fail(3, error_kind(e), &e.to_string()),
                Some(e) => fail(2, error_kind(e), &e.to_string()),
                None => fail(2, "Other", &format!("{err:#}")),
            }
        }
    }
}
