mod args;
mod report;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use apnspectra::Error;
use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
    /// Verification ran but at least one claim failed.
    Failed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            CliError::Core(Error::CapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(Error::InvalidParams(vs)) => {
                write!(f, "invalid family parameters")?;
                for v in vs {
                    write!(f, "\n  {v}")?;
                }
                Ok(())
            }
            CliError::Core(Error::CapExceeded { n, cap }) => write!(
                f,
                "n = {n} exceeds the cap {cap}; pass --force, raise --n-cap, or use --sample-b"
            ),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Failed => f.write_str("verification failed"),
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Field { field, out } => {
            let spec = field.spec()?;
            write_output(out.output.as_deref(), &report::field(&spec, out.format))
        }
        Command::Analyze { func, run, out } => {
            let spec = func.field.spec()?;
            let table = func.table(&spec)?;
            let text = report::analyze(&table, &run, out.format)?;
            write_output(out.output.as_deref(), &text)
        }
        Command::ImportTable { field, input, run, out } => {
            let spec = field.spec()?;
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let table = apnspectra::FunctionTable::import(&text, &spec)?;
            let text = report::analyze(&table, &run, out.format)?;
            write_output(out.output.as_deref(), &text)
        }
        Command::Kernels { func, run, out } => {
            let spec = func.field.spec()?;
            let table = func.table(&spec)?;
            let bound = func.family_params(&spec)?.and_then(|p| {
                (p.family == apnspectra::poly::Family::F5).then_some(2)
            });
            let text = report::kernels(&table, bound, &run, out.format)?;
            write_output(out.output.as_deref(), &text)
        }
        Command::VerifyProof { func, run, out } => {
            let spec = func.field.spec()?;
            let params = func
                .family_params(&spec)?
                .ok_or_else(|| CliError::Usage("verify-proof needs --family f5".into()))?;
            let (text, pass) = report::verify(&params, &spec, &run, out.format)?;
            write_output(out.output.as_deref(), &text)?;
            if pass {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
        Command::ExportTable { func, as_poly, output } => {
            let spec = func.field.spec()?;
            let table = func.table(&spec)?;
            let text = if as_poly {
                let p = table.provenance().polynomial().unwrap_or_default();
                format!("{p}\n")
            } else {
                table.export()
            };
            write_output(output.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
