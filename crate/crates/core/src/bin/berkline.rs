use std::io::Read;
use std::process::ExitCode;

use berkovich_line::cli::{load_field_arg, run, Format, JobConfig, COMMANDS};
use clap::Parser;

/// Exact computations on the Berkovich projective line. Reads one JSON
/// document from stdin and writes the result to stdout.
#[derive(Parser)]
#[command(name = "berkline", version)]
struct Args {
    /// Field configuration: inline JSON or a path to a JSON file.
    #[arg(long)]
    field: Option<String>,
    /// Output format: json, dot or tsv.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Seed for sampled tree validation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled vertex pairs in tree validation.
    #[arg(long, default_value_t = 64)]
    budget: usize,
    /// Subcommand to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMMANDS))]
    command: String,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let field = match args.field.as_deref().map(load_field_arg).transpose() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("cannot read --field: {e}");
            return ExitCode::from(2);
        }
    };
    let mut input = String::new();
    if let Err(e) = std::io::stdin().read_to_string(&mut input) {
        eprintln!("cannot read stdin: {e}");
        return ExitCode::from(2);
    }
    let config = JobConfig {
        field,
        command: args.command,
        format: args.format,
        seed: args.seed,
        budget: args.budget,
    };
    let out = run(&config, &input);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
