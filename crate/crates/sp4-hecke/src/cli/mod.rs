//! Command-line front end: run configurations, verification suites and reports.

pub mod report;
pub mod suites;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::affine::Case;
use crate::chevalley::Sp4;
use crate::filtration::Mu;
use crate::hecke::Setting;
use crate::scalar::Prime;
use crate::Error;
use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "sp4-hecke",
    version,
    about = "Hecke algebra verification for Sp(4) types"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and write a report.
    Verify(VerifyArgs),
    /// Levi subgroups of Sp(2n) whose simple affine roots share a value.
    Levi(LeviArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseArg {
    Sl2xgl1,
    Gl2,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::Sl2xgl1 => Case::Sl2Gl1,
            CaseArg::Gl2 => Case::Gl2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuMode {
    Trivial,
    Legendre,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Subgroups,
    Support,
    Length,
    Gauss,
    Structure,
    Iso,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long, value_enum, default_value_t = CaseArg::Sl2xgl1)]
    pub case: CaseArg,
    #[arg(long, value_enum, default_value_t = MuMode::Legendre)]
    pub mu: MuMode,
    /// Word length for the support, length and isomorphism suites.
    #[arg(long, default_value_t = 2)]
    pub length_bound: usize,
    /// Largest accepted length bound.
    #[arg(long, default_value_t = 4)]
    pub length_cap: usize,
    /// Multiplier of the character on the first active factor; the second follows from
    /// invariance under the strip generators.
    #[arg(long, default_value_t = 1)]
    pub multiplier: u64,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for the random evaluation points of the associativity check.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LeviArgs {
    #[arg(long, default_value_t = 6)]
    pub max_rank: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated verification run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub prime: u64,
    pub case: CaseArg,
    pub mu: MuMode,
    pub length_bound: usize,
    pub multiplier: u64,
    pub tolerance: f64,
    pub seed: u64,
    pub suite: Suite,
}

impl RunConfig {
    pub fn new(prime: u64, case: CaseArg, mu: MuMode, length_bound: usize) -> Self {
        RunConfig {
            prime,
            case,
            mu,
            length_bound,
            multiplier: 1,
            tolerance: 1e-6,
            seed: 0,
            suite: Suite::All,
        }
    }

    pub fn from_args(a: &VerifyArgs) -> Result<Self, Error> {
        Prime::new(a.prime)?;
        if a.length_bound == 0 || a.length_bound > a.length_cap {
            return Err(Error::Invalid(format!(
                "length bound {} outside 1..={}",
                a.length_bound, a.length_cap
            )));
        }
        if a.multiplier.is_multiple_of(a.prime) {
            return Err(Error::Invalid("multiplier must be a unit mod p".into()));
        }
        if a.tolerance <= 0.0 {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        Ok(RunConfig {
            prime: a.prime,
            case: a.case,
            mu: a.mu,
            length_bound: a.length_bound,
            multiplier: a.multiplier,
            tolerance: a.tolerance,
            seed: a.seed,
            suite: a.suite,
        })
    }

    pub fn sp(&self) -> Result<Sp4, Error> {
        Ok(Sp4::new(Prime::new(self.prime)?))
    }

    pub fn case(&self) -> Case {
        self.case.into()
    }

    pub fn mu(&self) -> Result<Mu, Error> {
        Ok(match self.mu {
            MuMode::Trivial => Mu::trivial(),
            MuMode::Legendre => Mu::legendre(&Prime::new(self.prime)?),
        })
    }

    /// `(K⁺, ψ)`.
    pub fn weak(&self) -> Result<Setting, Error> {
        let mut s = Setting::weak(&self.sp()?, self.case(), self.multiplier)?;
        s.tolerance = self.tolerance;
        Ok(s)
    }

    /// `(K, χ)` with the torus part of the case.
    pub fn strong(&self) -> Result<Setting, Error> {
        let mut s = Setting::strong(&self.sp()?, self.case(), self.mu()?, self.multiplier)?;
        s.tolerance = self.tolerance;
        Ok(s)
    }
}

fn emit<C: Serialize>(
    report: &Report<C>,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<(), Error> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
        }
        None => match writeln!(io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                Err(Error::Invalid(format!("stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

/// Runs a command and returns its exit code.
pub fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify(a) => {
            let cfg = RunConfig::from_args(&a)?;
            let (rows, errors) = suites::run_suite(&cfg, cfg.suite);
            let report = Report::new(cfg, rows, errors);
            emit(&report, a.format, a.out.as_ref())?;
            Ok(report.summary.status.exit_code())
        }
        Command::Levi(a) => {
            let rows = suites::levi(a.max_rank);
            let report = Report::new(serde_json::json!({ "max_rank": a.max_rank }), rows, vec![]);
            emit(&report, a.format, a.out.as_ref())?;
            Ok(report.summary.status.exit_code())
        }
    }
}
