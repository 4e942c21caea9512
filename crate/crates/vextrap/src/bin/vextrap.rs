//! Thin command-line front end over [`vextrap::cli`].
//!
//! Exit codes: 0 on success (flagged table cells allowed), 1 on input or
//! validation errors, 2 when verification claims fail.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vextrap::cli::{cmd_diagnose, cmd_extrapolate, cmd_generate, cmd_verify, RunConfig};
use vextrap::io::FileFormat;
use vextrap::scalar::Field;

#[derive(Parser)]
#[command(
    name = "vextrap",
    version,
    about = "Vector sequence extrapolation against known asymptotic scale families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic sequence with its scale-family and ground-truth files
    Generate(CommonArgs),
    /// Fill the extrapolation table for a sequence file and export it
    Extrapolate(CommonArgs),
    /// Estimate the asymptotic profile of a scale family and report diagnostics
    Diagnose(CommonArgs),
    /// Run the claim verification registry and write the report
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Sequence file (CSV or JSON)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Scale-family JSON file
    #[arg(long)]
    scales: Option<PathBuf>,
    /// Weighting vector as a one-vector sequence file (default: all ones)
    #[arg(long)]
    weighting: Option<PathBuf>,
    /// Ground-truth JSON file (limit, optional coefficients)
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Named synthetic preset (generate only)
    #[arg(long)]
    preset: Option<String>,
    /// Scalar field; inferred from the input files when omitted
    #[arg(long)]
    field: Option<Field>,
    /// First index of the table/measurement range
    #[arg(long)]
    n0: Option<usize>,
    /// Last index of the table/measurement range (inclusive)
    #[arg(long)]
    n1: Option<usize>,
    /// Largest table column; for `verify`, the column at which claims run
    #[arg(long)]
    kmax: Option<usize>,
    /// Output path (for `generate`, the prefix of the three files)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for sequences and tables
    #[arg(long, value_parser = clap::value_parser!(FileFormat))]
    format: Option<FileFormat>,
    /// Relative pivot threshold that flags a cell as singular
    #[arg(long = "tol-singular")]
    tol_singular: Option<f64>,
    /// Relative tolerance for asymptotic claims
    #[arg(long = "tol-claim")]
    tol_claim: Option<f64>,
}

impl CommonArgs {
    /// Resolve flags into a config, with per-command defaults for the
    /// index range and column count.
    fn into_config(self, defaults: (usize, usize, usize)) -> RunConfig {
        let base = RunConfig::default();
        RunConfig {
            input: self.input,
            scales: self.scales,
            weighting: self.weighting,
            truth: self.truth,
            preset: self.preset,
            field: self.field,
            n0: self.n0.unwrap_or(defaults.0),
            n1: self.n1.unwrap_or(defaults.1),
            kmax: self.kmax.unwrap_or(defaults.2),
            singular_tol: self.tol_singular.unwrap_or(base.singular_tol),
            claim_tol: self.tol_claim.unwrap_or(base.claim_tol),
            out: self.out,
            format: self.format.unwrap_or(base.format),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; bad arguments are
            // input errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let outcome = match cli.command {
        Command::Generate(args) => {
            let cfg = args.into_config((0, 59, 3));
            cmd_generate(&cfg).map(|summary| {
                for file in &summary.files {
                    println!("wrote {}", file.display());
                }
                true
            })
        }
        Command::Extrapolate(args) => {
            let cfg = args.into_config((0, 25, 3));
            cmd_extrapolate(&cfg).map(|summary| {
                println!("{}", summary.render());
                true
            })
        }
        Command::Diagnose(args) => {
            let cfg = args.into_config((15, 25, 3));
            cmd_diagnose(&cfg).map(|summary| {
                println!("diagnostics written to {}", summary.out.display());
                for advisory in &summary.advisories {
                    println!("advisory: {advisory}");
                }
                true
            })
        }
        Command::Verify(args) => {
            let cfg = args.into_config((15, 25, 1));
            cmd_verify(&cfg).map(|summary| {
                for line in &summary.lines {
                    println!("{line}");
                }
                println!(
                    "verification {}; report written to {}",
                    if summary.pass { "passed" } else { "FAILED" },
                    summary.out.display()
                );
                summary.pass
            })
        }
    };

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
