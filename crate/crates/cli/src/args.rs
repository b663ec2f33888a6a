use std::path::PathBuf;

use apnspectra::analysis::DEFAULT_N_CAP;
use apnspectra::poly::{build_family, parse_poly, Family, FamilyParams};
use apnspectra::{FieldElement, FieldSpec, FunctionTable};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "apnspectra", version, about = "Quadratic APN functions over GF(2^n): construction and exact spectra")]
pub struct Cli {
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, env = "APNSPECTRA_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Show the reduction polynomial, alpha and the group order of GF(2^n)
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Walsh spectrum, nonlinearity and differential uniformity
    Analyze {
        #[command(flatten)]
        func: FunctionArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Kernel of the linearized map L_b for every component b
    Kernels {
        #[command(flatten)]
        func: FunctionArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check every claim of the F5 kernel-bound argument for each b
    VerifyProof {
        #[command(flatten)]
        func: FunctionArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write the value table (or the polynomial) of a function
    ExportTable {
        #[command(flatten)]
        func: FunctionArgs,
        /// Write the polynomial expression instead of the value table
        #[arg(long)]
        as_poly: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Read a value table and analyze it
    ImportTable {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Field degree
    #[arg(long)]
    pub n: u32,
    /// Reduction polynomial in hex, e.g. 0x5B
    #[arg(long, value_parser = parse_hex)]
    pub poly_override: Option<u64>,
}

impl FieldArgs {
    pub fn spec(&self) -> Result<FieldSpec, CliError> {
        Ok(FieldSpec::new(self.n, self.poly_override)?)
    }
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// One of f1, f2, f3, f4, f5, gold, dillon
    #[arg(long, conflicts_with = "poly")]
    pub family: Option<String>,
    /// Polynomial expression, e.g. "2*x^5+x^3"
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, value_parser = parse_hex)]
    pub v: Option<u64>,
    #[arg(long, value_parser = parse_hex)]
    pub w: Option<u64>,
    /// Comma-separated hex gamma_1..gamma_(k-1)
    #[arg(long, value_delimiter = ',', value_parser = parse_hex)]
    pub gammas: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_hex)]
    pub alpha: Option<u64>,
    #[arg(long, value_parser = parse_hex)]
    pub beta: Option<u64>,
    #[arg(long, value_parser = parse_hex)]
    pub t: Option<u64>,
    #[arg(long, value_parser = parse_hex)]
    pub u: Option<u64>,
}

impl FunctionArgs {
    pub fn family_params(&self, field: &FieldSpec) -> Result<Option<FamilyParams>, CliError> {
        let Some(name) = &self.family else {
            return Ok(None);
        };
        let family: Family = name.parse().map_err(CliError::Usage)?;
        let el = |v: Option<u64>| v.map(|x| field.element(x)).transpose();
        let mut p = FamilyParams::new(family);
        p.k = self.k;
        p.s = self.s;
        p.i = self.i;
        p.m = self.m;
        p.d = self.d;
        p.v = el(self.v)?;
        p.w = el(self.w)?;
        p.alpha = el(self.alpha)?;
        p.beta = el(self.beta)?;
        p.t = el(self.t)?;
        p.u = el(self.u)?;
        p.gammas = self
            .gammas
            .as_ref()
            .map(|g| g.iter().map(|&x| field.element(x)).collect::<Result<Vec<FieldElement>, _>>())
            .transpose()?;
        Ok(Some(p.with_defaults(field)))
    }

    pub fn table(&self, field: &FieldSpec) -> Result<FunctionTable, CliError> {
        if let Some(p) = self.family_params(field)? {
            return Ok(build_family(&p, field)?);
        }
        match &self.poly {
            Some(text) => Ok(parse_poly(text, field)?.tabulate()),
            None => Err(CliError::Usage("one of --family or --poly is required".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Largest n analyzed exhaustively without --force
    #[arg(long, default_value_t = DEFAULT_N_CAP)]
    pub n_cap: u32,
    #[arg(long)]
    pub force: bool,
    /// Analyze this many random nonzero b instead of all of them
    #[arg(long, requires = "seed")]
    pub sample_b: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("not a hex value: {e}"))
}
