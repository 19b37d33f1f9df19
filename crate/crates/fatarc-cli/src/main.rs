use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fatarc_cli::exec::Options;
use fatarc_core::polycore::MonomialOrder;
use fatarc_core::Budget;

/// Exact arc-scheme computations along fat points: arcs, dimensions,
/// motivic series, integrals, and point counts, driven by a small script
/// language (see the repository README for the grammar).
#[derive(Parser)]
#[command(name = "fatarc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct CommonFlags {
    /// Emit one JSON object per command instead of text
    #[arg(long)]
    json: bool,
    /// Override the script's coefficient field with F_p
    #[arg(long = "char", value_name = "P")]
    char_p: Option<u64>,
    /// Cap on tuples visited by point-counting enumerations
    #[arg(long, value_name = "N")]
    max_enumeration: Option<u128>,
    /// Cap on S-pairs processed per Gröbner-basis run
    #[arg(long, value_name = "N")]
    max_gb_pairs: Option<usize>,
    /// Monomial order used by the `basis` command on ideals
    #[arg(long, value_parser = ["lex", "grevlex"], default_value = "grevlex")]
    order: String,
}

#[derive(Subcommand)]
enum Sub {
    /// Run a script file (use `-` to read standard input)
    Run {
        /// Script path, or `-` for standard input
        script: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run a script passed directly on the command line
    Eval {
        /// Script text
        script: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn options(flags: &CommonFlags) -> Options {
    let mut budget = Budget::default();
    if let Some(n) = flags.max_enumeration {
        budget.max_enumeration = n;
    }
    if let Some(n) = flags.max_gb_pairs {
        budget.max_gb_pairs = n;
    }
    Options {
        json: flags.json,
        char_override: flags.char_p,
        order: if flags.order == "lex" { MonomialOrder::Lex } else { MonomialOrder::GrevLex },
        budget,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (source, flags) = match &cli.command {
        Sub::Run { script, flags } => {
            let text = if script.as_os_str() == "-" {
                let mut buf = String::new();
                if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
                    eprintln!("error: reading standard input: {}", e);
                    return ExitCode::FAILURE;
                }
                buf
            } else {
                match std::fs::read_to_string(script) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: reading {}: {}", script.display(), e);
                        return ExitCode::FAILURE;
                    }
                }
            };
            (text, flags)
        }
        Sub::Eval { script, flags } => (script.clone(), flags),
    };

    let out = fatarc_cli::run_source(&source, &options(flags));
    print!("{}", out.stdout);
    if let Some(err) = out.error {
        eprintln!("error: {}", err);
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
