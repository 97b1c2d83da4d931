//! Thin command-line front end over the library pipeline. Exit codes:
//! 0 = every sampled point admits a distortion, 1 = input error,
//! 2 = a Landau stationarity solution was certified, 3 = structural
//! obstruction (zig-zag photon chain).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use landaukit::rat::Rat;
use landaukit::report::{
    run_pipeline_on_file, AnalysisConfig, Command, Report, SectorSelection, StratumSelection,
    EXIT_INPUT,
};
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "landaukit",
    version,
    about = "Singularity analysis for soft-photon-dressed triangle graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List pole-decomposition terms, segment routing, and sign tables
    Decompose(CommonArgs),
    /// Print denominator sets, the singularity matrix, and momentum forms
    Matrix(CommonArgs),
    /// Sample chart points per stratum and certify distortions
    Check(CommonArgs),
    /// Run the contraction cascade and log every deduction
    Cascade(CommonArgs),
    /// Realize one spacetime diagram per term and render it
    Diagram(DiagramArgs),
    /// Full pipeline: decomposition, matrices, sweep, cascade, diagrams
    Report(CommonArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
    Dot,
}

#[derive(Args)]
struct CommonArgs {
    /// Graph description file (line format or JSON mirror); relative paths
    /// also resolve under $LANDAUKIT_FIXTURES
    input: PathBuf,
    /// Photon-depth permutation, e.g. "1,0", or "all"
    #[arg(long, default_value = "all")]
    sector: String,
    /// Comma-separated strata (0 = interior, g = face r_g = 0), or "all"
    #[arg(long, default_value = "all")]
    stratum: String,
    /// Sample count per stratum for the sweep
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Soft-photon radius bounding the leading radial coordinate (rational)
    #[arg(long, default_value = "1/100")]
    delta: String,
    /// Contraction shift radius (rational); defaults to the certified m/10
    #[arg(long)]
    delta_prime: Option<String>,
    /// Active-row tolerance for the sweep (rational)
    #[arg(long, default_value = "1/1000000000")]
    tolerance: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// JSON multiplier file (alpha_photon, alpha_star, beta, ks); seeded
    /// random multipliers when absent
    #[arg(long)]
    params: Option<PathBuf>,
}

fn parse_rat_arg(name: &str, s: &str) -> Result<Rat, String> {
    Rat::from_str(s.trim()).map_err(|e| format!("--{name} '{s}': {e}"))
}

fn parse_list(name: &str, s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("--{name} '{s}': {e}"))
        })
        .collect()
}

fn build_config(
    command: Command,
    args: &CommonArgs,
    params: Option<PathBuf>,
) -> Result<AnalysisConfig, String> {
    let sectors = if args.sector == "all" {
        SectorSelection::All
    } else {
        SectorSelection::Explicit(parse_list("sector", &args.sector)?)
    };
    let strata = if args.stratum == "all" {
        StratumSelection::All
    } else {
        StratumSelection::List(parse_list("stratum", &args.stratum)?)
    };
    let delta_prime = match &args.delta_prime {
        Some(s) => Some(parse_rat_arg("delta-prime", s)?),
        None => None,
    };
    Ok(AnalysisConfig {
        command,
        sectors,
        strata,
        samples: args.samples,
        seed: args.seed,
        delta: parse_rat_arg("delta", &args.delta)?,
        delta_prime,
        tolerance: parse_rat_arg("tolerance", &args.tolerance)?,
        params_path: params,
    })
}

fn collect_dot(report: &Report) -> Option<String> {
    let mut out = String::new();
    let units = report.machine.get("units")?.as_array()?;
    for unit in units {
        for sec in unit.get("sectors")?.as_array()? {
            if let Some(dot) = sec.get("diagram").and_then(|d| d.get("dot")).and_then(|d| d.as_str())
            {
                out.push_str(dot);
            }
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

fn emit(args: &CommonArgs, report: &Report) -> Result<(), String> {
    let bytes: Vec<u8> = match args.format {
        Format::Text => report.text.clone().into_bytes(),
        Format::Machine => report.machine_bytes(),
        Format::Dot => collect_dot(report)
            .ok_or_else(|| "--format dot needs the diagram command".to_string())?
            .into_bytes(),
    };
    match &args.output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| e.to_string()),
    }
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return code;
        }
    };
    let (command, args, params) = match &cli.command {
        Cmd::Decompose(a) => (Command::Decompose, a, None),
        Cmd::Matrix(a) => (Command::Matrix, a, None),
        Cmd::Check(a) => (Command::Check, a, None),
        Cmd::Cascade(a) => (Command::Cascade, a, None),
        Cmd::Diagram(d) => (Command::Diagram, &d.common, d.params.clone()),
        Cmd::Report(a) => (Command::Report, a, None),
    };
    let cfg = match build_config(command, args, params) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("landaukit: {msg}");
            return EXIT_INPUT;
        }
    };
    let report = match run_pipeline_on_file(&args.input, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("landaukit: {e}");
            return EXIT_INPUT;
        }
    };
    if let Err(msg) = emit(args, &report) {
        eprintln!("landaukit: {msg}");
        return EXIT_INPUT;
    }
    report.exit_code
}

fn main() {
    std::process::exit(run());
}
