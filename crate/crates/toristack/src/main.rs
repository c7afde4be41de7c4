use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use toristack::human;
use toristack::input::parse_input;
use toristack::runner::{run, Command, Flags};

/// Exact quotient presentations of toric DM stacks from labelled polytopes
/// and stacky fans, with a machine-checkable comparison certificate.
#[derive(Parser)]
#[command(name = "toristack", version)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct CommonArgs {
    /// Input document (JSON; see docs/format.md)
    input: PathBuf,
    /// Emit the machine-readable report instead of text
    #[arg(long)]
    json: bool,
    /// Number of worker threads for per-pattern checks (certify)
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Assert completeness for fans of dimension four and higher, where the
    /// facet-pairing criterion is out of reach
    #[arg(long)]
    fan_complete_assert: bool,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Check the input data exactly and report each validation item
    Validate(CommonArgs),
    /// Compute or echo the (stacky) fan
    Fan(CommonArgs),
    /// Both quotient group presentations, the finite extension and the
    /// splitting
    Groups(CommonArgs),
    /// Local chart groups and the label extension at every maximal cone
    Charts(CommonArgs),
    /// Stabiliser table over the admissible zero-patterns
    Isotropy(CommonArgs),
    /// Moment coefficients, level value, regularity and level-set inclusion
    Moment(CommonArgs),
    /// The full comparison certificate
    Certify(CommonArgs),
}

impl CliCommand {
    fn split(&self) -> (Command, &CommonArgs) {
        match self {
            Self::Validate(a) => (Command::Validate, a),
            Self::Fan(a) => (Command::Fan, a),
            Self::Groups(a) => (Command::Groups, a),
            Self::Charts(a) => (Command::Charts, a),
            Self::Isotropy(a) => (Command::Isotropy, a),
            Self::Moment(a) => (Command::Moment, a),
            Self::Certify(a) => (Command::Certify, a),
        }
    }
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = cli.command.split();

    let text = match std::fs::read_to_string(&args.input) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    let doc = match parse_input(&text) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    let flags = Flags {
        fan_complete_assert: args.fan_complete_assert,
        jobs: args.jobs.max(1),
    };
    let report = match run(command, &doc, &flags) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };

    if args.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", human::render(&report));
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
