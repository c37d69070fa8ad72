//! Command-line front end for [`indoor_channel`].
//!
//! [`dispatch`] parses an argument list, runs exactly one subcommand and
//! returns the exit code together with what would go to stdout and stderr,
//! so the whole command surface can be exercised in-process.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indoor_channel::Error;

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 on success, 1 for usage errors, 2 for data and model errors.
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "indoor-channel", version, about = "Indoor mmWave and sub-THz channel models")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the payload here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fresnel TE reflection coefficient and loss for one incidence angle.
    Fresnel {
        #[arg(long)]
        eps: f64,
        /// Incidence angle from the normal, degrees.
        #[arg(long, allow_negative_numbers = true)]
        angle: f64,
    },
    /// MMSE relative permittivity from reflection-loss samples.
    EstimateEps(ReflectionInput),
    /// Linear fit of |Γ| against incidence angle.
    FitLinear(ReflectionInput),
    /// Predicted scattering pattern on the measurement arc.
    ScatterPattern(ScatterArgs),
    /// Backscatter margin and smooth-surface classification.
    Backscatter {
        #[command(flatten)]
        model: ScatterArgs,
        /// Classify a measured pattern instead of the model prediction.
        #[arg(long, value_name = "CSV")]
        input: Option<PathBuf>,
    },
    /// Partition loss from a through-material power measurement.
    Partition {
        #[arg(long, allow_negative_numbers = true)]
        pt_dbm: f64,
        #[arg(long, allow_negative_numbers = true)]
        pr_dbm: f64,
        #[arg(long)]
        distance: f64,
        #[arg(long)]
        freq: f64,
        /// TX and RX antenna gains to remove from the received power.
        #[arg(long, num_args = 2, value_names = ["TX", "RX"], allow_negative_numbers = true)]
        gains_dbi: Option<Vec<f64>>,
        #[arg(long, default_value = "V", value_parser = parse_pol)]
        tx_pol: indoor_channel::datasets::Polarization,
        #[arg(long, default_value = "V", value_parser = parse_pol)]
        rx_pol: indoor_channel::datasets::Polarization,
    },
    /// Antenna XPD from cross- and co-polarized path losses.
    Xpd {
        /// One distance: cross-polarized then co-polarized path loss, dB.
        #[arg(long = "pair", num_args = 2, value_names = ["CROSS", "CO"], required = true, action = clap::ArgAction::Append)]
        pairs: Vec<f64>,
    },
    /// Depolarization margin of a material.
    DepolMargin {
        /// Band of the embedded tables; all bands when omitted.
        #[arg(long)]
        freq: Option<f64>,
        #[arg(long, default_value = "drywall", value_parser = parse_material)]
        material: indoor_channel::datasets::Material,
        /// Mean cross-polarized partition loss, instead of the embedded tables.
        #[arg(long, requires = "xpd_db")]
        cross_db: Option<f64>,
        #[arg(long, requires = "cross_db")]
        xpd_db: Option<f64>,
    },
    /// Reflected, transmitted and absorbed fractions of incident power.
    Budget {
        #[arg(long)]
        refl_db: f64,
        #[arg(long)]
        part_db: f64,
    },
    /// Friis free-space path loss.
    Fspl {
        #[arg(long)]
        freq: f64,
        #[arg(long)]
        distance: f64,
    },
    /// Close-in path-loss model at one distance.
    CiEval {
        #[arg(long)]
        freq: f64,
        #[arg(long)]
        distance: f64,
        /// Path-loss exponent; defaults to the embedded fit for `--env`.
        #[arg(long, required_unless_present = "env")]
        ple: Option<f64>,
        #[arg(long, value_parser = parse_ci_env)]
        env: Option<indoor_channel::datasets::CiEnvironment>,
    },
    /// Close-in model fits of a directional path-loss CSV.
    FitCi {
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        /// Defaults to the frequency of the first row.
        #[arg(long)]
        freq: Option<f64>,
        /// LOS, NLOS_BEST, NLOS or ALL (every row, unreduced). Fits the three
        /// directional subsets when omitted.
        #[arg(long)]
        env: Option<String>,
    },
    /// Splits a directional sweep and keeps the best NLOS pointing per link.
    ReduceDirectional {
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
    },
    /// The embedded reference tables.
    PaperTables,
    /// Counts, distance range and duplicate keys of a path-loss CSV.
    Validate {
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ReflectionInput {
    /// Reflection CSV; the embedded drywall table when omitted.
    #[arg(long, value_name = "CSV")]
    input: Option<PathBuf>,
    /// Restrict to one band.
    #[arg(long)]
    freq: Option<f64>,
}

#[derive(Debug, Args)]
struct ScatterArgs {
    /// Incidence angle from the normal, degrees.
    #[arg(long)]
    angle: f64,
    /// Band used to look up the permittivity and horn beamwidth.
    #[arg(long, default_value_t = indoor_channel::datasets::F142_GHZ)]
    freq: f64,
    #[arg(long)]
    eps: Option<f64>,
    /// Horn half-power beamwidth, degrees.
    #[arg(long)]
    hpbw: Option<f64>,
    /// Scattering coefficient.
    #[arg(long, default_value_t = 0.4)]
    s: f64,
    /// Share of scattered power in the forward lobe.
    #[arg(long, default_value_t = 0.9)]
    lambda: f64,
    #[arg(long, default_value_t = 4)]
    alpha_r: u32,
    #[arg(long, default_value_t = 4)]
    alpha_i: u32,
    #[arg(long, default_value_t = 1.5)]
    tx_dist: f64,
    #[arg(long, default_value_t = 1.5)]
    rx_dist: f64,
    /// Observation angles, degrees from the normal (negative on the TX side).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    obs: Option<Vec<f64>>,
}

fn parse_pol(s: &str) -> Result<indoor_channel::datasets::Polarization, String> {
    indoor_channel::datasets::Polarization::parse(s).ok_or_else(|| format!("expected V or H, got {s:?}"))
}

fn parse_material(s: &str) -> Result<indoor_channel::datasets::Material, String> {
    indoor_channel::datasets::Material::parse(s).ok_or_else(|| format!("expected clear_glass or drywall, got {s:?}"))
}

fn parse_ci_env(s: &str) -> Result<indoor_channel::datasets::CiEnvironment, String> {
    indoor_channel::datasets::CiEnvironment::parse(s)
        .ok_or_else(|| format!("expected LOS, NLOS_BEST or NLOS, got {s:?}"))
}

/// Failure of a parsed command.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Runs one command. `args` excludes the program name.
pub fn dispatch<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = std::iter::once(OsString::from("indoor-channel")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult {
                    exit_code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CommandResult {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let payload = commands::run(&cli.command, cli.format).and_then(|body| match &cli.output {
        Some(path) => std::fs::write(path, &body)
            .map(|()| String::new())
            .map_err(|e| Failure::Domain(Error::Io(format!("{}: {e}", path.display())))),
        None => Ok(body),
    });
    match payload {
        Ok(stdout) => CommandResult {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => CommandResult {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => CommandResult {
            exit_code: EXIT_DATA,
            stdout: String::new(),
            stderr: format!("error: {}: {e}\n", e.name()),
        },
    }
}
