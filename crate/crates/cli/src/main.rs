mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use symfock::Error;

#[derive(Parser)]
#[command(
    name = "symfock",
    version,
    about = "Quantize oscillator phase-space scenarios and verify their equivalences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks on a scenario: antisymmetry, nondegeneracy,
    /// generator condition, and a dimensional survey of the form.
    Validate {
        /// Builtin name (s0, s1, s2, s3, simple, simple-alt) or a JSON file.
        scenario: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Build the compatible structure and Fock representation, then report
    /// the spectrum and canonical commutation residuals.
    Quantize {
        /// Builtin name or a JSON scenario file.
        scenario: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Relate two scenarios by a form-preserving map and verify that their
    /// quantizations are unitarily equivalent.
    Compare {
        /// Source scenario: builtin name or JSON file.
        scenario_a: String,
        /// Target scenario: builtin name or JSON file.
        scenario_b: String,
        /// Also contrast the sign-misread Hamiltonian with the transported
        /// one (requires the standard/flipped demonstration pair).
        #[arg(long)]
        demo: bool,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Args)]
struct CommonOpts {
    /// Max total occupation kept in the Fock basis. Defaults to 6 for
    /// builtins and to the stored value for file scenarios.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cutoff: Option<u64>,

    /// Tolerance for Fock-space checks. Matrix-level identities use the
    /// fixed tighter tiers reported per check.
    #[arg(long, default_value_t = symfock::TOL_FOCK)]
    tolerance: f64,

    /// Seed for the sampled check vectors.
    #[arg(long, default_value_t = symfock::DEFAULT_SEED)]
    seed: u64,

    /// Mass parameter for builtin scenarios (file scenarios keep their own).
    #[arg(long, default_value_t = 1.0)]
    mass: f64,

    /// Frequency parameter for builtin scenarios.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,

    /// Quantum of action for builtin scenarios.
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl CommonOpts {
    fn settings(&self) -> run::Settings {
        run::Settings {
            cutoff: self.cutoff.map(|c| c as usize),
            tolerance: self.tolerance,
            seed: self.seed,
            mass: self.mass,
            omega: self.omega,
            hbar: self.hbar,
        }
    }
}

/// Exit 2 for anything wrong with the request itself (unparseable input,
/// unknown scenarios, incompatible pairs); exit 1 for mathematical failures
/// found while running it.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_)
        | Error::Json(_)
        | Error::Schema(_)
        | Error::UnknownScenario(_)
        | Error::Parameter(_)
        | Error::InvalidCutoff
        | Error::Dimension(_)
        | Error::NotComparable(_)
        | Error::NotDemoPair(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (opts, outcome) = match &cli.command {
        Command::Validate { scenario, opts } => (opts, run::cmd_validate(scenario, &opts.settings())),
        Command::Quantize { scenario, opts } => (opts, run::cmd_quantize(scenario, &opts.settings())),
        Command::Compare {
            scenario_a,
            scenario_b,
            demo,
            opts,
        } => (
            opts,
            run::cmd_compare(scenario_a, scenario_b, &opts.settings(), *demo),
        ),
    };

    let mut report = match outcome {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(exit_code_for(&e));
        }
    };
    report.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;

    let rendered = match opts.format {
        Format::Json => report::render_json(&report),
        Format::Text => report::render_text(&report),
    };
    if let Some(path) = &opts.out {
        if let Err(e) = std::fs::write(path, rendered) {
            eprintln!("error: cannot write {}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    } else {
        print!("{}", rendered);
    }

    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
