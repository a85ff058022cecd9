//! Command-line front end: run the generation protocols, parameter sweeps
//! and Wigner grids, emitting JSON/CSV artifacts.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 impossible post-selection.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;

use kerrcat::cliutil::{format_complex, parse_complex, parse_complex_list, Range};
use kerrcat::elements::DetectorPattern;
use kerrcat::error::Error;
use kerrcat::protocols::{
    build_cat, run_protocol1, run_protocol2, sample_protocol1, sample_protocol2, CatSpec, Parity,
    ProtocolResult,
};
use kerrcat::serial::{result_from_json, result_to_json};
use kerrcat::state::Polarization;
use kerrcat::sweep::{sweep, SweepGrid};
use kerrcat::wigner::{wigner_grid, wigner_point};

#[derive(Parser)]
#[command(
    name = "kerrcat",
    about = "Cat-state generation with weak cross-Kerr nonlinearities",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-photon scheme with explicit (or seeded) post-selection.
    Protocol1(Protocol1Args),
    /// Twin-photon scheme read out through the detector pattern.
    Protocol2(Protocol2Args),
    /// Sweep (alpha, phi, epsilon) through the asymmetric-Kerr pipeline.
    Sweep(SweepArgs),
    /// Wigner grid of a cat state or of a stored protocol output.
    Wigner(WignerArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Artifact file path; without it only the summary line is printed.
    #[arg(short = 'o', long = "out")]
    out: Option<String>,
    /// Artifact format (protocols: json; sweep/wigner: csv).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct Protocol1Args {
    /// Drive amplitude as a complex literal `a+bi`, e.g. `0+100i`.
    #[arg(long)]
    alpha: String,
    /// Cross-Kerr phase (radians).
    #[arg(long)]
    phi: f64,
    /// Post-selected photon polarization (H or V).
    #[arg(long, required_unless_present = "seed")]
    outcome: Option<String>,
    /// Sample the outcome from the Born rule with this seed instead.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct Protocol2Args {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    phi: f64,
    /// Detector pattern (`one` or `both`).
    #[arg(long, required_unless_present = "seed")]
    pattern: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated complex literals, e.g. `0+50i,0+100i,0+141i`.
    #[arg(long)]
    alpha: String,
    /// Kerr phase value or `start:stop:count` range.
    #[arg(long)]
    phi: String,
    /// Kerr asymmetry value or `start:stop:count` range.
    #[arg(long, default_value = "0")]
    epsilon: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct WignerArgs {
    /// Cat amplitude as a complex literal (mutually exclusive with --input).
    #[arg(long, conflicts_with = "input")]
    gamma: Option<String>,
    /// Cat parity (`+`/`even` or `-`/`odd`).
    #[arg(long, default_value = "+")]
    parity: String,
    /// Protocol-result JSON file; its `cat_o2` state is evaluated.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = -4.0)]
    xmin: f64,
    #[arg(long, default_value_t = 4.0)]
    xmax: f64,
    #[arg(long, default_value_t = 81)]
    nx: usize,
    #[arg(long, default_value_t = -4.0)]
    pmin: f64,
    #[arg(long, default_value_t = 4.0)]
    pmax: f64,
    #[arg(long, default_value_t = 81)]
    np: usize,
    #[command(flatten)]
    output: OutputArgs,
}

/// CLI failure: exit code plus message.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ImpossibleOutcome(_) | Error::ZeroNorm | Error::ZeroTrace => 3,
            Error::InvalidInput { .. } => 2,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

fn check_format(output: &OutputArgs, expected: &str) -> Result<(), Failure> {
    if let Some(fmt) = &output.format {
        if fmt != expected {
            return Err(Failure(
                2,
                format!("invalid --format `{fmt}`: this command emits {expected}"),
            ));
        }
    }
    Ok(())
}

fn write_artifact(output: &OutputArgs, contents: &str) -> Result<(), Failure> {
    if let Some(path) = &output.out {
        fs::write(path, contents).map_err(|e| Failure(1, format!("cannot write `{path}`: {e}")))?;
    }
    Ok(())
}

fn result_summary(r: &ProtocolResult) -> Result<String, Failure> {
    let w0 = wigner_point((&r.cat_o2).into(), "o2", C64::new(0.0, 0.0))?;
    Ok(format!(
        "outcome={} outcome_prob={:.16e} gamma_phi={} W0={:.16e}",
        r.outcome,
        r.outcome_prob,
        format_complex(r.cat_amplitude_approx),
        w0
    ))
}

fn cmd_protocol1(args: &Protocol1Args) -> Result<(), Failure> {
    check_format(&args.output, "json")?;
    let alpha = parse_complex(&args.alpha).map_err(usage)?;
    let result = match args.seed {
        Some(seed) => sample_protocol1(alpha, args.phi, seed)?,
        None => {
            let outcome = Polarization::parse(args.outcome.as_deref().unwrap()).map_err(usage)?;
            run_protocol1(alpha, args.phi, outcome)?
        }
    };
    write_artifact(&args.output, &result_to_json(&result)?)?;
    println!("{}", result_summary(&result)?);
    Ok(())
}

fn cmd_protocol2(args: &Protocol2Args) -> Result<(), Failure> {
    check_format(&args.output, "json")?;
    let alpha = parse_complex(&args.alpha).map_err(usage)?;
    let result = match args.seed {
        Some(seed) => sample_protocol2(alpha, args.phi, seed)?,
        None => {
            let pattern = DetectorPattern::parse(args.pattern.as_deref().unwrap()).map_err(usage)?;
            run_protocol2(alpha, args.phi, pattern)?
        }
    };
    // note the single-photon equivalence in the summary
    let (p1_outcome, checkpoint) = match result.outcome.as_str() {
        "one_detector" => (Polarization::H, "eq5"),
        _ => (Polarization::V, "eq6"),
    };
    let p1 = run_protocol1(alpha, args.phi, p1_outcome)?;
    let gpd = result.checkpoints[checkpoint].global_phase_distance(&p1.checkpoints[checkpoint])?;
    write_artifact(&args.output, &result_to_json(&result)?)?;
    println!(
        "{} equivalent_protocol1_outcome={} gpd={:.3e}",
        result_summary(&result)?,
        p1_outcome,
        gpd
    );
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    check_format(&args.output, "csv")?;
    let grid = SweepGrid {
        alphas: parse_complex_list(&args.alpha).map_err(usage)?,
        phis: Range::parse(&args.phi).map_err(usage)?.values(),
        epsilons: Range::parse(&args.epsilon).map_err(usage)?.values(),
    };
    let records = sweep(&grid)?;
    let mut buf = Vec::new();
    kerrcat::sweep::write_csv(&mut buf, &records)
        .map_err(|e| Failure(1, format!("csv: {e}")))?;
    let text = String::from_utf8(buf).expect("csv is utf-8");
    write_artifact(&args.output, &text)?;
    if args.output.out.is_none() {
        print!("{text}");
        std::io::stdout().flush().ok();
    }
    println!("rows={}", records.len());
    Ok(())
}

fn cmd_wigner(args: &WignerArgs) -> Result<(), Failure> {
    check_format(&args.output, "csv")?;
    let state = match (&args.gamma, &args.input) {
        (Some(gamma), None) => {
            let spec = CatSpec {
                gamma: parse_complex(gamma).map_err(usage)?,
                parity: Parity::parse(&args.parity).map_err(usage)?,
            };
            build_cat(&spec)?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure(2, format!("cannot read `{path}`: {e}")))?;
            result_from_json(&text)?.cat_o2
        }
        _ => {
            return Err(Failure(
                2,
                "exactly one of --gamma or --input is required".to_string(),
            ))
        }
    };
    let grid = wigner_grid(
        (&state).into(),
        "o2",
        (args.xmin, args.xmax),
        (args.pmin, args.pmax),
        args.nx,
        args.np,
    )?;
    let mut buf = Vec::new();
    grid.write_csv(&mut buf).map_err(|e| Failure(1, format!("csv: {e}")))?;
    write_artifact(&args.output, &String::from_utf8(buf).expect("csv is utf-8"))?;
    let w0 = wigner_point((&state).into(), "o2", C64::new(0.0, 0.0))?;
    println!("W0={:.16e} grid={}x{}", w0, grid.nx, grid.np);
    Ok(())
}

/// Reclassify a library error as a usage error (exit 2): bad literals and
/// malformed ranges are the caller's fault, not a physics dead end.
fn usage(e: Error) -> Failure {
    Failure(2, e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Protocol1(a) => cmd_protocol1(a),
        Command::Protocol2(a) => cmd_protocol2(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Wigner(a) => cmd_wigner(a),
    };
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
