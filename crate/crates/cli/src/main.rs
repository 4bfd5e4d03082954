//! `dr2`: compute and verify the double-ramification class `DR_2(d)`.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{parse_d, DArg};

#[derive(Parser)]
#[command(
    name = "dr2",
    version,
    about = "Exact calculator for the double-ramification class DR_2(d)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Md,
}

#[derive(Args)]
struct EmitArg {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
}

#[derive(Args)]
struct DArgs {
    /// Positive integer, or `symbolic` for polynomials in d.
    #[arg(long, value_parser = parse_d, default_value = "symbolic")]
    d: DArg,
}

#[derive(Args)]
struct FixtureArg {
    /// Directory of surface fixture files to use instead of the built-in set.
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// The DR class, and the same class recomputed by the solver.
    Class {
        #[command(flatten)]
        d: DArgs,
        #[command(flatten)]
        fixtures: FixtureArg,
        #[command(flatten)]
        emit: EmitArg,
    },
    /// Solve the 16-row system and print its certificate.
    Solve {
        #[command(flatten)]
        fixtures: FixtureArg,
        #[command(flatten)]
        emit: EmitArg,
    },
    /// The 16 equation rows.
    Equations {
        /// Plain one-line-per-row listing.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        fixtures: FixtureArg,
        #[command(flatten)]
        emit: EmitArg,
    },
    /// Push-forward to the 1-pointed space, the pull-back pipeline and psi^3.
    Pushforward {
        #[command(flatten)]
        d: DArgs,
        #[command(flatten)]
        emit: EmitArg,
    },
    /// Position of the push-forward in the divisor cones of the 1-pointed space.
    ConeM21 {
        #[command(flatten)]
        d: DArgs,
        #[command(flatten)]
        emit: EmitArg,
    },
    /// Compact-type restriction compared with the Hain class.
    Ct {
        #[command(flatten)]
        d: DArgs,
        #[command(flatten)]
        emit: EmitArg,
    },
    /// Cone decomposition, DR(inf) and the non-extremality check.
    Cone {
        #[command(flatten)]
        d: DArgs,
        /// JSON table of decorated strata in the 14-slot basis.
        #[arg(long, value_name = "FILE")]
        strata_table: Option<PathBuf>,
        #[command(flatten)]
        emit: EmitArg,
    },
    /// Run every regression check.
    Verify {
        /// Run only the named check (repeatable).
        #[arg(long, value_name = "CHECK")]
        only: Vec<String>,
        #[arg(long, value_name = "FILE")]
        strata_table: Option<PathBuf>,
        #[command(flatten)]
        fixtures: FixtureArg,
        #[command(flatten)]
        emit: EmitArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, emit) = match &cli.command {
        Command::Class { d, fixtures, emit } => (
            commands::class(&d.d, fixtures.fixtures.as_deref()),
            emit.emit,
        ),
        Command::Solve { fixtures, emit } => {
            (commands::solve(fixtures.fixtures.as_deref()), emit.emit)
        }
        Command::Equations {
            list: true,
            fixtures,
            ..
        } => {
            return match commands::equations_listing(fixtures.fixtures.as_deref()) {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::FAILURE
                }
            };
        }
        Command::Equations { fixtures, emit, .. } => {
            (commands::equations(fixtures.fixtures.as_deref()), emit.emit)
        }
        Command::Pushforward { d, emit } => (commands::pushforward(&d.d), emit.emit),
        Command::ConeM21 { d, emit } => (commands::cone_m21(&d.d), emit.emit),
        Command::Ct { d, emit } => (commands::ct(&d.d), emit.emit),
        Command::Cone {
            d,
            strata_table,
            emit,
        } => (commands::cone(&d.d, strata_table.as_deref()), emit.emit),
        Command::Verify {
            only,
            strata_table,
            fixtures,
            emit,
        } => (
            commands::verify(only, strata_table.as_deref(), fixtures.fixtures.as_deref()),
            emit.emit,
        ),
    };
    match result {
        Ok(out) => {
            match emit {
                Emit::Json => print!("{}", out.report.to_json()),
                Emit::Md => print!("{}", out.markdown),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
