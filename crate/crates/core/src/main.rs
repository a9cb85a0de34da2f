use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use quatrot::cli::{self, CliError, Command, Format, JobSpec, KindArg};

/// Quaternion tools for 3D and 4D rotation matrices.
///
/// Reads one JSON document (or plain whitespace-separated numbers) from
/// --input or stdin and writes a JSON result to stdout.
#[derive(Parser, Debug)]
#[command(name = "quatrot", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// Input file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    #[arg(long, default_value_t = quatrot::DEFAULT_TOLERANCE)]
    tol: f64,

    /// Seed for `random`.
    #[arg(long)]
    seed: Option<u64>,

    /// Dimension for `random`.
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
    dim: Option<u8>,

    /// Force rotation or rotoreflection instead of inferring it from the determinant.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
}

fn fail(err: CliError) -> ExitCode {
    eprint!("{}", err.to_json_line());
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(CliError::Usage(first.to_owned()));
        }
    };

    let mut input = Vec::new();
    if args.command != Command::Random {
        let read = match &args.input {
            Some(path) => std::fs::read(path).map(|b| input = b),
            None => std::io::stdin().read_to_end(&mut input).map(|_| ()),
        };
        if let Err(e) = read {
            return fail(CliError::Io(e.to_string()));
        }
    }

    let spec = JobSpec {
        command: args.command,
        format: args.format,
        tolerance: args.tol,
        seed: args.seed,
        dim: args.dim,
        kind: args.kind,
    };
    let out = cli::run(&spec, &input);
    let _ = std::io::stdout().write_all(&out.stdout);
    let _ = std::io::stderr().write_all(&out.stderr);
    ExitCode::from(out.exit_code as u8)
}
