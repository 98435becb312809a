use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jetcalc::commands::{self, PwArgs, USAGE};
use jetcalc::suites::Caps;
use jetcalc::InputError;

/// Exact jet calculus: verification suites and single computations.
#[derive(Parser)]
#[command(name = "jetcalc", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for random instances [default: $JETCALC_SEED, else 20240601]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest number of variables
    #[arg(long, global = true, default_value_t = 3)]
    nmax: usize,
    /// Largest nilpotency order k
    #[arg(long, global = true, default_value_t = 3)]
    kmax: u32,
    /// Largest module or block dimension; 0 runs nothing
    #[arg(long, global = true, default_value_t = 6)]
    dimmax: usize,
    /// Longest random word
    #[arg(long, global = true, default_value_t = 6)]
    words: usize,
    /// Also write the JSON output to this file
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and report one JSON line per instance
    Verify {
        /// Restrict to a suite (poly, localmod, jetfun, approxalg, family); repeatable
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// At most this many instances per check
        #[arg(long)]
        count: Option<usize>,
    },
    /// Print f^(E) and its values at the given points
    Jet {
        /// Module: trivial, dual:<v>, delorme:<v>;<v>..., or a module JSON file
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 1)]
        nvars: usize,
        /// Exponential polynomial, e.g. "x1^2 + exp[1]*(x1)"
        #[arg(long = "poly")]
        poly: String,
        /// Comma-separated point; repeatable
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Compute the kernel of the reduced coproduct twice and compare
    Kernel {
        /// Directions separated by ';', coordinates by ','
        #[arg(long)]
        lambdas: String,
        #[arg(long)]
        degree: u32,
    },
    /// Check pi(A) = End(pi)^# for an algebra file
    Dcomm {
        file: PathBuf,
    },
    /// Run the three Paley-Wiener membership tests on a candidate
    Pw {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
        /// Module: trivial, dual:<v>, delorme:<v>;<v>..., or a module JSON file
        #[arg(long, default_value = "trivial")]
        module: String,
        /// Comma-separated labels; all labels by default
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
        /// Points separated by ';', coordinates by ','
        #[arg(long)]
        points: String,
    },
    /// A short tour on fixed inputs
    Demo,
}

fn run(cli: Cli) -> Result<i32, InputError> {
    let c = cli.common;
    let json = c.json.as_ref();
    match cli.command {
        Command::Verify { suites, count } => {
            let seed = match c.seed {
                Some(s) => s,
                None => commands::default_seed()?,
            };
            let caps = Caps { nmax: c.nmax, kmax: c.kmax, dimmax: c.dimmax, words: c.words, limit: count };
            commands::verify(seed, &caps, &suites, json).map(|(_, code)| code)
        }
        Command::Jet { module, nvars, poly, points } => commands::jet_cmd(&module, nvars, &poly, &points, json),
        Command::Kernel { lambdas, degree } => commands::kernel_cmd(&lambdas, degree, json),
        Command::Dcomm { file } => commands::dcomm_cmd(&file, json),
        Command::Pw { family, candidate, module, labels, points } => commands::pw_cmd(&PwArgs {
            family: &family,
            candidate: &candidate,
            module: &module,
            labels: &labels,
            points: &points,
            json,
        }),
        Command::Demo => commands::demo(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE as u8)
        }
    }
}
