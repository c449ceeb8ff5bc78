//! The `hentropy` command-line tool.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use harmonic_entropy_core::estimators::{
    harmonic_estimate, miller_estimate, plugin_estimate, plugin_variance_estimate,
    variance_estimate, wald_ci,
};
use harmonic_entropy_core::oracle::{Grid, SuiteReport};
use harmonic_entropy_core::special::harmonic_table;
use harmonic_entropy_core::{CountsHistogram, DistributionSpec, EstimateReport, MomentOracle, Pmf};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::SimulationConfig;
use crate::error::{HarnessError, Result};
use crate::export::{export_results, ExportFormat};
use crate::input::{read_histogram, InputFormat};
use crate::simulation::{run_simulation, run_simulation_with_workers};

/// Environment variable that replaces `base_seed` of a simulation config.
pub const SEED_ENV: &str = "ENTROPY_SEED";

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "hentropy",
    version,
    about = "Shannon entropy estimation with the harmonic-number estimator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate entropy from a sample file and print a JSON report.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo experiment described by a JSON config.
    Simulate(SimulateArgs),
    /// Check the moment identities by exact enumeration; prints JSON lines.
    Verify(VerifyArgs),
    /// Print the exact bias of the harmonic estimator over a range of n as CSV.
    BiasCurve(BiasCurveArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CliEstimator {
    Harmonic,
    Plugin,
    Miller,
}

#[derive(Debug, clap::Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "symbols")]
    pub format: InputFormat,
    #[arg(long, value_enum, default_value = "harmonic")]
    pub estimator: CliEstimator,
    /// Confidence level of the Wald interval.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Report in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; defaults to `output_path` from the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Default,
    Extended,
}

impl From<GridArg> for Grid {
    fn from(g: GridArg) -> Grid {
        match g {
            GridArg::Default => Grid::Default,
            GridArg::Extended => Grid::Extended,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "default")]
    pub grid: GridArg,
    /// Multiply every harmonic-table entry by this factor (mutation testing).
    #[arg(long, hide = true)]
    pub perturb_harmonic: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct BiasCurveArgs {
    /// Distribution as JSON, e.g. `{"family":"zeta","gamma":2}`.
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub n_min: u64,
    #[arg(long)]
    pub n_max: u64,
    /// Number of geometrically spaced sample sizes.
    #[arg(long)]
    pub points: usize,
}

/// Entropy report as printed by `estimate`.
#[derive(Debug, Serialize)]
struct UnitReport {
    #[serde(flatten)]
    report: EstimateReport,
    units: &'static str,
}

/// Runs one invocation, writing payloads to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let outcome = match cli.command {
        Command::Estimate(a) => cmd_estimate(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::BiasCurve(a) => cmd_bias_curve(&a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| HarnessError::io("<stdout>", e))
}

pub fn estimate_report(
    hist: &CountsHistogram,
    estimator: CliEstimator,
    level: f64,
    bits: bool,
) -> Result<EstimateReport> {
    if hist.n() < 2 {
        return Err(harmonic_entropy_core::Error::SampleTooSmall {
            estimator: "estimate",
            required: 2,
            n: hist.n(),
        }
        .into());
    }
    let (name, point, variance) = match estimator {
        CliEstimator::Harmonic => (
            "harmonic",
            harmonic_estimate(hist)?,
            variance_estimate(hist)?,
        ),
        CliEstimator::Plugin => (
            "plugin",
            plugin_estimate(hist),
            plugin_variance_estimate(hist),
        ),
        CliEstimator::Miller => (
            "miller",
            miller_estimate(hist),
            plugin_variance_estimate(hist),
        ),
    };
    let ci = wald_ci(point, variance, hist.n(), level)?;
    let scale = if bits { std::f64::consts::LN_2 } else { 1.0 };
    Ok(EstimateReport {
        estimator_name: name.to_string(),
        n: hist.n(),
        point: point / scale,
        variance_hat: Some(variance / (scale * scale)),
        ci_low: Some(ci.low / scale),
        ci_high: Some(ci.high / scale),
        ci_clamped: Some(ci.clamped),
        level: Some(level),
        seed: None,
    })
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<u8> {
    let hist = read_histogram(&args.input, args.format)?;
    let report = estimate_report(&hist, args.estimator, args.level, args.bits)?;
    let line = serde_json::to_string(&UnitReport {
        report,
        units: if args.bits { "bits" } else { "nats" },
    })
    .expect("report serializes");
    write_out(out, &format!("{line}\n"))?;
    Ok(EXIT_OK)
}

fn seed_override() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse::<u64>().map(Some).map_err(|_| {
            HarnessError::Config(format!(
                "{SEED_ENV} = `{v}` is not an unsigned 64-bit integer"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(HarnessError::Config(format!("{SEED_ENV}: {e}"))),
    }
}

fn cmd_simulate(args: &SimulateArgs, err: &mut dyn Write) -> Result<u8> {
    let mut config = SimulationConfig::from_path(&args.config)?;
    if let Some(seed) = seed_override()? {
        let _ = writeln!(
            err,
            "{SEED_ENV}={seed} overrides base_seed {}",
            config.base_seed
        );
        config.base_seed = seed;
    }
    let dir = args
        .out
        .clone()
        .or_else(|| config.output_path.clone())
        .ok_or_else(|| {
            HarnessError::Config("no output directory: pass --out or set output_path".into())
        })?;
    let result = match args.workers {
        Some(0) => return Err(HarnessError::Config("--workers must be at least 1".into())),
        Some(w) => run_simulation_with_workers(&config, w)?,
        None => run_simulation(&config)?,
    };
    let mut written = export_results(&result, &dir, ExportFormat::Csv)?;
    written.extend(export_results(&result, &dir, ExportFormat::Json)?);
    for path in &written {
        let _ = writeln!(err, "wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let perturbed = args.perturb_harmonic.map(|f| harmonic_table().perturbed(f));
    let oracle = match &perturbed {
        Some(table) => MomentOracle::with_table(table),
        None => MomentOracle::new(),
    };
    let checks = Grid::from(args.grid).checks();
    let mut reports = checks
        .par_iter()
        .map(|c| c.run(&oracle))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    reports.sort_by(SuiteReport::sort_cmp);

    let mut text = String::new();
    let mut failed = 0usize;
    for r in &reports {
        text.push_str(&serde_json::to_string(r).expect("report serializes"));
        text.push('\n');
        if !r.passed() {
            failed += 1;
            let _ = writeln!(
                err,
                "FAIL {}",
                serde_json::to_string(r).expect("report serializes")
            );
        }
    }
    write_out(out, &text)?;
    let _ = writeln!(
        err,
        "{} of {} checks passed",
        reports.len() - failed,
        reports.len()
    );
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// `points` sample sizes spaced geometrically from `n_min` to `n_max`,
/// rounded and deduplicated.
pub fn geometric_grid(n_min: u64, n_max: u64, points: usize) -> Result<Vec<u64>> {
    if n_min < 2 {
        return Err(HarnessError::Config(format!(
            "--n-min must be at least 2, got {n_min}"
        )));
    }
    if n_max < n_min {
        return Err(HarnessError::Config(format!(
            "--n-max ({n_max}) is below --n-min ({n_min})"
        )));
    }
    if points == 0 {
        return Err(HarnessError::Config("--points must be at least 1".into()));
    }
    if points == 1 || n_min == n_max {
        return Ok(vec![n_min]);
    }
    let ratio = n_max as f64 / n_min as f64;
    let mut grid: Vec<u64> = (0..points)
        .map(|i| (n_min as f64 * ratio.powf(i as f64 / (points - 1) as f64)).round() as u64)
        .map(|n| n.clamp(n_min, n_max))
        .collect();
    grid[points - 1] = n_max;
    grid.dedup();
    Ok(grid)
}

fn cmd_bias_curve(args: &BiasCurveArgs, out: &mut dyn Write) -> Result<u8> {
    let spec: DistributionSpec = serde_json::from_str(&args.dist)
        .map_err(|e| HarnessError::Config(format!("--dist: {e}")))?;
    let pmf = Pmf::from_spec(&spec).map_err(|e| HarnessError::Config(format!("--dist: {e}")))?;
    let grid = geometric_grid(args.n_min, args.n_max, args.points)?;
    let rows = grid
        .par_iter()
        .map(|&n| pmf.exact_bias(n).map(|b| (n, b)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut text = String::from("n,exact_bias,abs_bias\n");
    for (n, b) in rows {
        text.push_str(&format!("{n},{b:.16e},{:.16e}\n", b.abs()));
    }
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_shape() {
        assert_eq!(
            geometric_grid(128, 16384, 8).unwrap(),
            vec![128, 256, 512, 1024, 2048, 4096, 8192, 16384]
        );
        assert_eq!(geometric_grid(2, 4, 10).unwrap(), vec![2, 3, 4]);
        assert_eq!(geometric_grid(5, 5, 3).unwrap(), vec![5]);
        assert!(geometric_grid(1, 10, 3).is_err());
        assert!(geometric_grid(10, 5, 3).is_err());
        assert!(geometric_grid(2, 5, 0).is_err());
    }

    #[test]
    fn estimate_report_examples() {
        let hist = CountsHistogram::from_symbols([1, 1, 2]).unwrap();
        let r = estimate_report(&hist, CliEstimator::Harmonic, 0.95, false).unwrap();
        assert!((r.point - 5.0 / 6.0).abs() < 1e-15);
        assert!((r.variance_hat.unwrap() - 2.0 / 9.0).abs() < 1e-15);
        let hist = CountsHistogram::from_symbols([1, 2, 3]).unwrap();
        let r = estimate_report(&hist, CliEstimator::Harmonic, 0.95, true).unwrap();
        assert!((r.point - 2.164_042_561_333_445).abs() < 1e-12);
        let single = CountsHistogram::from_symbols([4]).unwrap();
        assert!(estimate_report(&single, CliEstimator::Plugin, 0.95, false).is_err());
    }

    #[test]
    fn cli_rejects_unknown_flags() {
        assert!(Cli::try_parse_from(["hentropy", "verify", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["hentropy"]).is_err());
        assert!(Cli::try_parse_from([
            "hentropy",
            "estimate",
            "--input",
            "x",
            "--estimator",
            "oracle"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["hentropy", "verify", "--perturb-harmonic", "1.001"]).is_ok());
    }
}
