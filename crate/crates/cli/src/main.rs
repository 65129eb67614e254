use std::io::Write;
use std::process::ExitCode;

use burnside_core::Error;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod oracle;
mod output;

use output::{Format, Report};

#[derive(Parser)]
#[command(name = "burnside", version, about = "Burnside rings, crossed Burnside rings and their idempotents")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Recompute through the slow independent path and require identical output
    #[arg(long, global = true)]
    oracle: bool,

    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of marks, one row per transitive G-set G/K
    Tom { group: String },
    /// Primitive idempotents of the rational Burnside algebra, or the integral ones
    Idem {
        group: String,
        #[arg(long)]
        integral: bool,
    },
    /// Product of two Burnside ring elements given as JSON (inline or a file path)
    Mul { group: String, x: String, y: String },
    /// Basis of the crossed Burnside ring
    CrossedBasis { group: String },
    /// Product of two crossed Burnside ring elements given as JSON
    CrossedMul { group: String, x: String, y: String },
    /// The map into centres of group algebras; without an element, its matrix on the basis
    Zeta { group: String, x: Option<String> },
    /// Computations along a tower of finite quotients
    Tower {
        spec: String,
        #[command(subcommand)]
        action: TowerAction,
    },
    /// Values of a Mackey functor and the action of crossed G-sets on them
    Mackey {
        group: String,
        /// burnside, fixed-point or fixed-quotient
        #[arg(long, value_enum, default_value_t = FunctorKind::Burnside)]
        functor: FunctorKind,
        /// Coefficient field: 0 for the rationals, or a prime
        #[arg(long, default_value_t = 0)]
        field: u64,
        /// Representation for the fixed-point functors
        #[arg(long, value_enum, default_value_t = RepKind::Regular)]
        rep: RepKind,
        /// G-set: `G/<class id>` terms joined by `+`, or G-set JSON
        #[arg(long)]
        y: String,
        /// Act by the transitive crossed G-set `<class id>@<marker>`
        #[arg(long, conflicts_with = "crossed")]
        pair: Option<String>,
        /// Act by a crossed element given as JSON
        #[arg(long)]
        crossed: Option<String>,
    },
    /// Checks on a finite truncation of Hall's class-2 group of exponent p
    Hall {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of random interior words
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
pub enum TowerAction {
    /// Level groups and tower maps
    Describe,
    /// The family of Gluck idempotents of a named open subgroup
    Idem {
        #[arg(long)]
        subgroup: String,
    },
    /// Idempotents per level and the coherent idempotent families
    Census,
    /// First level at which a family (JSON) fails to be compatible
    Check { family: String },
    /// Marker coset chains of a crossed family (JSON)
    Markers { family: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctorKind {
    Burnside,
    FixedPoint,
    FixedQuotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepKind {
    Regular,
    Trivial,
}

/// Why a run failed, carrying its exit code.
pub enum Failure {
    Core(Error),
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::CapExceeded { .. }) => 2,
            Failure::Core(Error::Invariant(_)) | Failure::Mismatch(_) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
            Failure::Mismatch(m) => format!("oracle mismatch: {m}"),
        }
    }
}

fn compute(cli: &Cli, slow: bool) -> Result<Report, Failure> {
    let seed = cli.seed;
    match &cli.command {
        Command::Tom { group } => commands::tom(group, slow),
        Command::Idem { group, integral } => commands::idem(group, *integral, slow),
        Command::Mul { group, x, y } => commands::mul(group, x, y, slow),
        Command::CrossedBasis { group } => commands::crossed_basis(group, slow),
        Command::CrossedMul { group, x, y } => commands::crossed_mul(group, x, y, slow),
        Command::Zeta { group, x } => commands::zeta(group, x.as_deref(), slow),
        Command::Tower { spec, action } => commands::tower(spec, action, slow),
        Command::Mackey { group, functor, field, rep, y, pair, crossed } => {
            commands::mackey(group, *functor, *field, *rep, y, pair.as_deref(), crossed.as_deref(), slow)
        }
        Command::Hall { p, n, samples } => commands::hall(*p, *n, *samples, seed, slow),
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let fast = compute(cli, false)?.render(cli.format)?;
    if cli.oracle {
        let slow = compute(cli, true)?.render(cli.format)?;
        if slow != fast {
            let line = fast.lines().zip(slow.lines()).position(|(a, b)| a != b).unwrap_or(0);
            return Err(Failure::Mismatch(format!("outputs first differ at line {}", line + 1)));
        }
    }
    Ok(fast)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("burnside: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_failure_kind() {
        assert_eq!(Failure::Core(Error::CapExceeded { size: 60, cap: 10 }).code(), 2);
        assert_eq!(Failure::Core(Error::Invariant("x".into())).code(), 3);
        assert_eq!(Failure::Mismatch("x".into()).code(), 3);
        assert_eq!(Failure::Usage("x".into()).code(), 1);
        assert_eq!(Failure::Core(Error::GroupMismatch).code(), 1);
    }
}
