//! `asymloss` — optimal additive correction of point forecasts under
//! asymmetric linear loss with generalized Gaussian errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use asymloss::cli::{
    cmd_correct, cmd_curve, cmd_fit, cmd_simulate, cmd_verify, exit_code_for, CorrectConfig,
    CurveConfig, FitConfig, SimulateConfig, SweepVariable, VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "asymloss",
    about = "Optimal bias correction for point forecasts scored by asymmetric linear loss",
    long_about = "Computes the additive correction C minimizing the expected asymmetric \
                  linear loss when prediction errors follow a zero-mean generalized \
                  Gaussian law with shape a and scale b. Residuals are prediction minus \
                  observation: positive residuals are charged at k1 per unit, negative \
                  at k2."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the optimal correction and its loss/variance statistics
    Correct {
        /// Shape of the error law (requires --b; alternative to --residuals)
        #[arg(long)]
        a: Option<f64>,
        /// Scale of the error law (requires --a)
        #[arg(long)]
        b: Option<f64>,
        /// Residuals CSV (header `residual`) to fit the error law from
        #[arg(long, conflicts_with_all = ["a", "b"])]
        residuals: Option<PathBuf>,
        /// Loss per unit of over-prediction (positive residual)
        #[arg(long)]
        k1: f64,
        /// Loss per unit of under-prediction (negative residual)
        #[arg(long)]
        k2: f64,
        /// Predictions CSV (header `prediction`) to write a corrected copy of
        #[arg(long, requires = "out")]
        apply: Option<PathBuf>,
        /// Destination for the corrected predictions
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Sweep closed-form curves to CSV (the data behind the usual plots)
    Curve {
        /// Shape of the error law
        #[arg(long)]
        a: f64,
        /// Scale of the error law
        #[arg(long)]
        b: f64,
        /// Loss per unit of over-prediction
        #[arg(long)]
        k1: f64,
        /// Loss per unit of under-prediction (only for --sweep c)
        #[arg(long)]
        k2: Option<f64>,
        /// Variable to sweep
        #[arg(long, value_enum)]
        sweep: SweepArg,
        /// Start of the sweep range (inclusive)
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        /// End of the sweep range (inclusive)
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of evaluation points (at least 2)
        #[arg(long)]
        points: usize,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the numerical verification suite (exit 1 on any failed check)
    Verify {
        /// Custom grid file (JSON with a_values, x_values, ratio_values)
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Force the named check to fail (harness self-test)
        #[arg(long, hide = true)]
        fault: Option<String>,
    },
    /// Compare the closed forms against a seeded Monte Carlo run
    Simulate {
        /// Shape of the error law
        #[arg(long)]
        a: f64,
        /// Scale of the error law
        #[arg(long)]
        b: f64,
        /// Loss per unit of over-prediction
        #[arg(long)]
        k1: f64,
        /// Loss per unit of under-prediction
        #[arg(long)]
        k2: f64,
        /// Shift applied to the error before the loss
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        c: f64,
        /// Sample count (at least 2)
        #[arg(long)]
        n: usize,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Fit the error-law parameters to residuals by moment matching
    Fit {
        /// Residuals CSV (header `residual`)
        #[arg(long)]
        residuals: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepArg {
    /// Sweep the shift applied to the error
    C,
    /// Sweep the under-prediction slope
    K2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Correct {
            a,
            b,
            residuals,
            k1,
            k2,
            apply,
            out,
            json,
        } => cmd_correct(&CorrectConfig {
            a,
            b,
            residuals,
            k1,
            k2,
            apply,
            out,
            json,
        })
        .map(|text| (text, 0)),
        Command::Curve {
            a,
            b,
            k1,
            k2,
            sweep,
            from,
            to,
            points,
            out,
        } => cmd_curve(&CurveConfig {
            a,
            b,
            k1,
            k2,
            sweep: match sweep {
                SweepArg::C => SweepVariable::Shift,
                SweepArg::K2 => SweepVariable::UnderSlope,
            },
            from,
            to,
            points,
            out,
        })
        .map(|text| (text, 0)),
        Command::Verify { grid, json, fault } => {
            cmd_verify(&VerifyConfig { grid, json, fault })
                .map(|(text, passed)| (text, if passed { 0 } else { 1 }))
        }
        Command::Simulate {
            a,
            b,
            k1,
            k2,
            c,
            n,
            seed,
            json,
        } => cmd_simulate(&SimulateConfig {
            a,
            b,
            k1,
            k2,
            c,
            n,
            seed,
            json,
        })
        .map(|text| (text, 0)),
        Command::Fit { residuals, json } => {
            cmd_fit(&FitConfig { residuals, json }).map(|text| (text, 0))
        }
    };

    match outcome {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err) as u8)
        }
    }
}
