//! Command-line front end: TOML documents in, JSON documents out.
//!
//! Exit codes are 0 on success, 1 when an input or result fails a check,
//! 2 on usage errors and 3 when the engine breaches one of its own
//! invariants.

pub mod commands;
pub mod error;
pub mod field;
pub mod input;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{FieldFlags, Io};
pub use crate::error::{CliError, CliResult};
pub use crate::field::FieldChoice;

#[derive(Debug, Parser)]
#[command(name = "injres", version, about = "Injective resolutions of sheaves on finite posets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Coefficient field: `rational` or `mod p`. Overrides the documents.
    #[arg(long, global = true)]
    pub field: Option<String>,

    /// Field used when neither the flag nor the documents name one.
    #[arg(long = "default-field", env = "INJRES_FIELD", global = true, hide = true)]
    pub default_field: Option<String>,

    /// Write the JSON document here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Minimal,
    OrderComplex,
}

impl From<MethodArg> for injres::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Minimal => injres::Method::Minimal,
            MethodArg::OrderComplex => injres::Method::OrderComplex,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an input document, or re-check a resolution or pushforward
    /// document written by this tool.
    Validate { path: PathBuf },
    /// Resolve a sheaf (or the constant sheaf on a poset or complex).
    Resolve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Minimal)]
        method: MethodArg,
        /// Fail unless the resolution stops by this degree.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Multiplicities of the indecomposable injectives in the minimal
    /// resolution.
    Multiplicities {
        path: PathBuf,
        /// Compare against compactly supported cohomology of open stars.
        #[arg(long)]
        verify: bool,
    },
    /// Derived pushforward of a sheaf along a poset map.
    Pushforward {
        sheaf: PathBuf,
        map: PathBuf,
        /// Pushforward with compact supports; the sheaf lives on an open
        /// set of the map's source complex.
        #[arg(long)]
        compact: bool,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Cohomology straight from cochains, without resolutions.
    Cohomology {
        path: PathBuf,
        /// Restrict to the open star of this element.
        #[arg(long, conflicts_with = "open")]
        star: Option<String>,
        /// Restrict to this up-closed set of elements.
        #[arg(long, value_delimiter = ',')]
        open: Option<Vec<String>>,
    },
}

impl Cli {
    fn fields(&self) -> CliResult<FieldFlags> {
        let explicit = self.field.as_deref().map(str::parse).transpose()?;
        let fallback = match self.default_field.as_deref() {
            Some(s) => Some(
                s.parse()
                    .map_err(|e: CliError| CliError::Usage(format!("INJRES_FIELD: {e}")))?,
            ),
            None => None,
        };
        Ok(FieldFlags { explicit, fallback })
    }

    /// Runs the command, writing the document to `out` (or `--output`) and
    /// messages to `err`.
    pub fn execute(&self, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
        let fields = self.fields()?;
        match &self.output {
            Some(p) => {
                let file = std::fs::File::create(p).map_err(|source| CliError::Io {
                    path: p.clone(),
                    source,
                })?;
                let mut file = std::io::BufWriter::new(file);
                self.dispatch(fields, Io { out: &mut file, err })?;
                file.flush()?;
                Ok(())
            }
            None => self.dispatch(fields, Io { out, err }),
        }
    }

    fn dispatch(&self, fields: FieldFlags, io: Io) -> CliResult<()> {
        match &self.command {
            Command::Validate { path } => commands::validate(path, fields, io),
            Command::Resolve {
                path,
                method,
                max_degree,
            } => commands::resolve(path, (*method).into(), *max_degree, fields, io),
            Command::Multiplicities { path, verify } => commands::multiplicities(path, *verify, fields, io),
            Command::Pushforward {
                sheaf,
                map,
                compact,
                degree,
            } => commands::pushforward_cmd(sheaf, map, *compact, *degree, fields, io),
            Command::Cohomology { path, star, open } => {
                commands::cohomology(path, star.as_deref(), open.as_deref(), fields, io)
            }
        }
    }
}

/// Parses `args` and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.execute(out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
