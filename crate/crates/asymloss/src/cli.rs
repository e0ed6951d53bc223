//! Command implementations behind the `asymloss` binary.
//!
//! Each command takes a plain config struct, performs its file side
//! effects, and returns the exact bytes destined for stdout; the binary
//! only parses flags and maps errors to exit codes. All output is
//! deterministic given the flags (and seed, where one applies).
//!
//! File formats:
//! - residuals CSV: header `residual`, one value per line, UTF-8, decimal
//!   point, scientific notation accepted. A residual is prediction minus
//!   observation, so positive values are over-predictions charged at `k1`.
//! - predictions CSV: header `prediction`; `--apply` writes a copy with an
//!   added `corrected` column holding prediction + C.
//! - sweep CSV: `c,expected_loss,variance` for shift sweeps, or
//!   `k2,C,E0,EC,E_diff,V0,VC,V_diff` for slope sweeps, closed forms only.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input,
//! 3 residuals outside the model family.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fit::{fit_moments, mean_bias_warning, summarize};
use crate::gnd::GndParams;
use crate::loss::{expected_loss, variance_loss, LossParams};
use crate::montecarlo::estimate_loss_stats;
use crate::optimizer::{is_saturated, optimal_correction};
use crate::report::{
    render_verification_text, CorrectionReport, FitReport, SimulationReport,
};
use crate::verification::{default_grid, run_suite, GridSpec};

/// Map an error to the CLI exit-code contract.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::OutOfFamily(_) => 3,
        _ => 2,
    }
}

#[derive(Debug, Clone)]
pub struct CorrectConfig {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub residuals: Option<PathBuf>,
    pub k1: f64,
    pub k2: f64,
    pub apply: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub json: bool,
}

/// Compute the optimal correction, optionally fitting (a, b) from a
/// residual file first and applying the shift to a prediction file.
pub fn cmd_correct(cfg: &CorrectConfig) -> Result<String> {
    let mut warnings = Vec::new();
    let params = match (cfg.a, cfg.b, &cfg.residuals) {
        (Some(a), Some(b), None) => GndParams::new(a, b)?,
        (None, None, Some(path)) => {
            let residuals = read_residuals(path)?;
            let summary = summarize(&residuals)?;
            if let Some(w) = mean_bias_warning(&summary) {
                warnings.push(w);
            }
            fit_moments(&summary)?
        }
        _ => {
            return Err(Error::InvalidInput(
                "provide either both --a and --b, or --residuals (not both)".into(),
            ))
        }
    };
    let slopes = LossParams::new(cfg.k1, cfg.k2)?;
    if is_saturated(&slopes) {
        warnings.push(
            "slope asymmetry is within 1e-12 of total; the correction sits at the edge \
             of the solvable range"
                .into(),
        );
    }
    let corr = optimal_correction(&params, &slopes)?;
    let report = CorrectionReport::new(&params, &slopes, &corr, warnings);

    if let Some(apply) = &cfg.apply {
        let out = cfg.out.as_ref().ok_or_else(|| {
            Error::InvalidInput("--apply needs --out for the corrected copy".into())
        })?;
        apply_correction(apply, out, corr.shift)?;
    }

    Ok(if cfg.json {
        to_json(&report)
    } else {
        report.render_text()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Shift,
    UnderSlope,
}

#[derive(Debug, Clone)]
pub struct CurveConfig {
    pub a: f64,
    pub b: f64,
    pub k1: f64,
    /// Required for shift sweeps, absent for slope sweeps.
    pub k2: Option<f64>,
    pub sweep: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub out: Option<PathBuf>,
}

/// Emit a closed-form sweep as CSV (to --out, or returned for stdout).
pub fn cmd_curve(cfg: &CurveConfig) -> Result<String> {
    if cfg.points < 2 {
        return Err(Error::InvalidInput(format!(
            "--points must be at least 2, got {}",
            cfg.points
        )));
    }
    if !(cfg.from.is_finite() && cfg.to.is_finite()) || cfg.from >= cfg.to {
        return Err(Error::InvalidInput(format!(
            "empty or invalid sweep range [{}, {}]",
            cfg.from, cfg.to
        )));
    }
    let params = GndParams::new(cfg.a, cfg.b)?;
    let step = (cfg.to - cfg.from) / (cfg.points as f64 - 1.0);

    let mut csv = String::new();
    match cfg.sweep {
        SweepVariable::Shift => {
            let k2 = cfg.k2.ok_or_else(|| {
                Error::InvalidInput("sweeping c needs --k2 for the loss slopes".into())
            })?;
            let slopes = LossParams::new(cfg.k1, k2)?;
            csv.push_str("c,expected_loss,variance\n");
            for i in 0..cfg.points {
                let c = cfg.from + step * i as f64;
                let e = expected_loss(c, &params, &slopes)?;
                let v = variance_loss(c, &params, &slopes)?;
                csv.push_str(&format!("{c},{e},{v}\n"));
            }
        }
        SweepVariable::UnderSlope => {
            if cfg.k2.is_some() {
                return Err(Error::InvalidInput(
                    "--k2 conflicts with sweeping k2; it is the sweep variable".into(),
                ));
            }
            if cfg.from <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "k2 sweep must stay positive, range starts at {}",
                    cfg.from
                )));
            }
            csv.push_str("k2,C,E0,EC,E_diff,V0,VC,V_diff\n");
            for i in 0..cfg.points {
                let k2 = cfg.from + step * i as f64;
                let slopes = LossParams::new(cfg.k1, k2)?;
                let corr = optimal_correction(&params, &slopes)?;
                let e_diff = corr.expected_loss_at_zero - corr.expected_loss_at_shift;
                let v_diff = corr.variance_at_zero - corr.variance_at_shift;
                csv.push_str(&format!(
                    "{k2},{},{},{},{e_diff},{},{},{v_diff}\n",
                    corr.shift,
                    corr.expected_loss_at_zero,
                    corr.expected_loss_at_shift,
                    corr.variance_at_zero,
                    corr.variance_at_shift,
                ));
            }
        }
    }

    if let Some(path) = &cfg.out {
        write_file(path, &csv)?;
        Ok(format!("wrote {} rows to {}\n", cfg.points, path.display()))
    } else {
        Ok(csv)
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyConfig {
    pub grid: Option<PathBuf>,
    pub json: bool,
    /// Test-only: negate the named check to prove the harness can fail.
    pub fault: Option<String>,
}

/// Run the verification suite; the bool is true when every check passed.
pub fn cmd_verify(cfg: &VerifyConfig) -> Result<(String, bool)> {
    let grid = match &cfg.grid {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
            })?;
            let grid: GridSpec = serde_json::from_str(&text).map_err(|e| {
                Error::InvalidInput(format!("{}: invalid grid file: {e}", path.display()))
            })?;
            grid
        }
        None => default_grid(),
    };
    let mut report = run_suite(&grid)?;
    if let Some(fault) = &cfg.fault {
        let mut hit = false;
        for check in &mut report.checks {
            if &check.name == fault {
                check.passed = false;
                check.margin = -check.margin;
                check.detail.push_str(" [fault injected]");
                hit = true;
            }
        }
        if !hit {
            return Err(Error::InvalidInput(format!(
                "no check named '{fault}' to fault"
            )));
        }
    }
    let passed = report.all_passed();
    let rendered = if cfg.json {
        to_json(&report)
    } else {
        render_verification_text(&report)
    };
    Ok((rendered, passed))
}

#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub a: f64,
    pub b: f64,
    pub k1: f64,
    pub k2: f64,
    pub c: f64,
    pub n: usize,
    pub seed: u64,
    pub json: bool,
}

/// Closed form vs Monte Carlo at one parameter point.
pub fn cmd_simulate(cfg: &SimulateConfig) -> Result<String> {
    let params = GndParams::new(cfg.a, cfg.b)?;
    let slopes = LossParams::new(cfg.k1, cfg.k2)?;
    let closed_mean = expected_loss(cfg.c, &params, &slopes)?;
    let closed_variance = variance_loss(cfg.c, &params, &slopes)?;
    let stats = estimate_loss_stats(cfg.c, &params, &slopes, cfg.n, cfg.seed)?;
    let report = SimulationReport::new(
        &params,
        &slopes,
        cfg.c,
        closed_mean,
        closed_variance,
        &stats,
    );
    Ok(if cfg.json {
        to_json(&report)
    } else {
        report.render_text()
    })
}

#[derive(Debug, Clone)]
pub struct FitConfig {
    pub residuals: PathBuf,
    pub json: bool,
}

/// Fit (a, b) to a residual file by moment matching.
pub fn cmd_fit(cfg: &FitConfig) -> Result<String> {
    let residuals = read_residuals(&cfg.residuals)?;
    let summary = summarize(&residuals)?;
    let mut warnings = Vec::new();
    if let Some(w) = mean_bias_warning(&summary) {
        warnings.push(w);
    }
    let fitted = fit_moments(&summary)?;
    let report = FitReport::new(&summary, &fitted, warnings);
    Ok(if cfg.json {
        to_json(&report)
    } else {
        report.render_text()
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

/// Read a residuals CSV (header `residual`).
pub fn read_residuals(path: &Path) -> Result<Vec<f64>> {
    read_single_column(path, "residual")
}

fn read_single_column(path: &Path, header: &str) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::InvalidInput(format!("{}: empty file", path.display())))?;
    let first = first.trim_start_matches('\u{feff}').trim();
    if first != header {
        return Err(Error::InvalidInput(format!(
            "{}: expected header '{header}', found '{first}'",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let token = line.trim();
        if token.is_empty() {
            continue;
        }
        let value: f64 = token.parse().map_err(|_| {
            Error::InvalidInput(format!(
                "{} line {}: invalid number '{token}' in column {header}",
                path.display(),
                i + 1
            ))
        })?;
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{} line {}: non-finite value '{token}' in column {header}",
                path.display(),
                i + 1
            )));
        }
        out.push(value);
    }
    Ok(out)
}

/// Copy a predictions CSV adding `corrected = prediction + shift`; the
/// original prediction text is echoed verbatim.
fn apply_correction(input: &Path, output: &Path, shift: f64) -> Result<()> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", input.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::InvalidInput(format!("{}: empty file", input.display())))?;
    let header = first.trim_start_matches('\u{feff}').trim();
    if header != "prediction" {
        return Err(Error::InvalidInput(format!(
            "{}: expected header 'prediction', found '{header}'",
            input.display()
        )));
    }
    let mut corrected = String::from("prediction,corrected\n");
    for (i, line) in lines {
        let token = line.trim();
        if token.is_empty() {
            continue;
        }
        let value: f64 = token.parse().map_err(|_| {
            Error::InvalidInput(format!(
                "{} line {}: invalid number '{token}' in column prediction",
                input.display(),
                i + 1
            ))
        })?;
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{} line {}: non-finite value '{token}' in column prediction",
                input.display(),
                i + 1
            )));
        }
        corrected.push_str(&format!("{token},{}\n", value + shift));
    }
    write_file(output, &corrected)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}
