//! Argument parsing and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use crate::commands::{run_command, CliError, Command, Flags};
use crate::problem::load_problem;
use crate::report::{emit_report, Format};

const USAGE: &str = "usage: gitwin <stratify|fan|wallcross|windows|lift|quantize> <problem.json> \
[--format json|text] [--window W] [--wall X --direction D] [--box R] [--complex file.json]";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Exact GIT stratifications, fans, wall crossings and windows for torus actions on affine space.
#[derive(Debug, Parser)]
#[command(name = "gitwin", version, override_usage = USAGE)]
struct Args {
    /// One of stratify, fan, wallcross, windows, lift, quantize.
    command: String,
    /// Problem file (JSON).
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Window integers, comma separated (one per stratum; a single integer for lift).
    #[arg(long, allow_hyphen_values = true, value_parser = int_list)]
    window: Option<IntList>,
    /// Wall point character, comma separated.
    #[arg(long, allow_hyphen_values = true, value_parser = int_list)]
    wall: Option<IntList>,
    /// Crossing direction, comma separated.
    #[arg(long, allow_hyphen_values = true, value_parser = int_list)]
    direction: Option<IntList>,
    /// Box radius for window enumeration; largest twist difference for quantize.
    #[arg(long = "box")]
    box_radius: Option<u32>,
    /// Graded free complex for lift (JSON).
    #[arg(long)]
    complex: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct IntList(Vec<i64>);

fn int_list(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("{x:?} is not an integer")))
        .collect::<Result<_, _>>()
        .map(IntList)
}

/// Runs the tool and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 64;
        }
    };
    let Some(command) = Command::parse(&args.command) else {
        let _ = writeln!(err, "unknown command {:?}\n{USAGE}", args.command);
        return 64;
    };
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let flags = Flags {
        window: args.window.map(|l| l.0),
        wall: args.wall.map(|l| l.0),
        direction: args.direction.map(|l| l.0),
        box_radius: args.box_radius,
        complex: args.complex,
    };
    let outcome = load_problem(&args.problem)
        .map_err(CliError::from)
        .and_then(|file| run_command(command, &file, &flags));
    match outcome {
        Ok(report) => {
            if out.write_all(&emit_report(&report, format)).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, CliError::Usage(_)) {
                let _ = writeln!(err, "{USAGE}");
            }
            e.exit_code()
        }
    }
}
