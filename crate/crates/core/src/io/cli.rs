//! Command-line front end. `run` does all the work so it can be driven from
//! tests; the binary only parses arguments and maps the error to an exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::config::{Config, ConfigError, ModelKind};
use super::curve_csv::{
    read_curve_file, write_atomic, write_curve, write_overlay, CsvError, CurveRow,
};
use crate::interferometer::{phase_difference, PhaseMethod};
use crate::limits::{optimize_distance, scan, ModelFamily};
use crate::model::{de_broglie_wavelength, PotentialModel};
use crate::quadrature::QuadratureSettings;
use crate::selfcheck;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_SELF_TEST: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl ToString) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }

    fn domain(message: impl ToString) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.to_string(),
        }
    }

    fn io(message: impl ToString) -> Self {
        Self {
            code: EXIT_IO,
            message: message.to_string(),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Read { .. } => Self::io(e),
            _ => Self::config(e),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        Self::domain(e)
    }
}

impl From<CsvError> for CliError {
    fn from(e: CsvError) -> Self {
        match e {
            CsvError::Io { .. } => Self::io(e),
            CsvError::Schema(_) => Self::config(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wirephase",
    version,
    about = "Wire test-mass phase shifts on an atom interferometer and exclusion limits on short-range gravity"
)]
pub struct Cli {
    /// Scenario configuration file; the reference scenario when omitted.
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,

    /// Print the effective configuration (defaults filled in) and exit.
    #[arg(long)]
    pub dump_config: bool,

    /// Relative tolerance for adaptive quadrature.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub quad_tol: f64,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Newtonian,
    Yukawa,
    Extradim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Numerical,
}

impl From<MethodArg> for PhaseMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => PhaseMethod::ClosedForm,
            MethodArg::Numerical => PhaseMethod::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Yukawa,
    Extradim,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase difference for the configured scenario.
    Phase {
        /// Override the configured model kind (strength and range are kept).
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        #[arg(long, value_enum, default_value = "closed")]
        method: MethodArg,
    },
    /// Exclusion curve α(λ) over the configured λ grid, written as CSV.
    Scan {
        /// Output file; `[output] curve` when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Worker threads (0 = all cores). Output does not depend on it.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Wire distance minimising α_lim at fixed λ, with the wire side equal to d.
    Optimize {
        /// Range λ; the configured model range when omitted.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        d_min: f64,
        #[arg(long, default_value_t = 1e-3)]
        d_max: f64,
        /// Model family; the `[scan]` family when omitted.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Extra dimensions for `--family extradim`; `[scan] n` when omitted.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Run every oracle sweep and report the largest deviations.
    Check {
        /// Replace the stated sweep tolerances.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Merge our curve with an external one into a long-format plot file.
    Overlay {
        ours: PathBuf,
        external: PathBuf,
        #[arg(long, short, default_value = "overlay.csv")]
        output: PathBuf,
        #[arg(long, default_value = "atom_interferometer")]
        ours_label: String,
        #[arg(long, default_value = "external")]
        external_label: String,
    },
}

fn load_config(path: Option<&Path>) -> Result<Config, CliError> {
    match path {
        Some(p) => Ok(Config::load(p)?),
        None => Ok(Config::default()),
    }
}

fn describe(model: &PotentialModel) -> String {
    match model {
        PotentialModel::Newtonian => "newtonian".to_owned(),
        PotentialModel::Yukawa(y) => {
            format!("yukawa (alpha = {}, lambda = {:e} m)", y.strength, y.range)
        }
        PotentialModel::ExtraDim(x) => format!(
            "extradim (n = {}, alpha = {}, lambda = {:e} m)",
            x.dimensions, x.strength, x.range
        ),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let mut config = load_config(cli.config.as_deref())?;
    if cli.dump_config {
        write!(out, "{}", config.dump())?;
        return Ok(());
    }
    let settings = QuadratureSettings::new(cli.quad_tol, 1000).map_err(CliError::config)?;
    let Some(command) = &cli.command else {
        return Err(CliError::config("no subcommand given (see --help)"));
    };
    match command {
        Command::Phase { model, method } => {
            if let Some(m) = model {
                config.model.kind = match m {
                    ModelArg::Newtonian => ModelKind::Newtonian,
                    ModelArg::Yukawa => ModelKind::Yukawa,
                    ModelArg::Extradim => ModelKind::Extradim,
                };
            }
            cmd_phase(&config, (*method).into(), &settings, out, err)
        }
        Command::Scan { output, threads } => {
            let path = output
                .clone()
                .unwrap_or_else(|| config.output.curve.clone());
            cmd_scan(
                &config,
                &config.resolve_output(&path),
                *threads,
                &settings,
                out,
                err,
            )
        }
        Command::Optimize {
            lambda,
            d_min,
            d_max,
            family,
            n,
        } => {
            let n = n.unwrap_or(config.scan.n);
            let family = match family {
                Some(FamilyArg::Yukawa) => ModelFamily::Yukawa,
                Some(FamilyArg::Extradim) => ModelFamily::ExtraDim(n),
                None => config.family(),
            };
            let lambda = lambda.unwrap_or(config.model.lambda);
            cmd_optimize(&config, family, lambda, (*d_min, *d_max), &settings, out)
        }
        Command::Check { tolerance } => cmd_check(&settings, *tolerance, out),
        Command::Overlay {
            ours,
            external,
            output,
            ours_label,
            external_label,
        } => cmd_overlay(
            ours,
            external,
            &config.resolve_output(output),
            (ours_label, external_label),
            out,
            err,
        ),
    }
}

pub fn cmd_phase(
    config: &Config,
    method: PhaseMethod,
    settings: &QuadratureSettings,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let scenario = config.scenario()?;
    let result = phase_difference(&scenario, method, settings)?;
    let threshold = scenario.detection_limit();
    writeln!(out, "model          {}", describe(scenario.model()))?;
    writeln!(out, "method         {}", result.method)?;
    writeln!(out, "wire distance  {:e} m", scenario.wire().distance())?;
    writeln!(out, "wire mass      {:e} kg", scenario.wire().mass())?;
    writeln!(
        out,
        "de Broglie     {:e} m",
        de_broglie_wavelength(scenario.constants(), scenario.beam())
    )?;
    writeln!(out, "prefactor      {:.9e}", scenario.prefactor())?;
    writeln!(out, "delta_phi      {:.9e} rad", result.delta_phi)?;
    writeln!(out, "phi_lower      {:.9e} rad", result.phi_lower + 0.0)?;
    writeln!(out, "phi_upper      {:.9e} rad", result.phi_upper + 0.0)?;
    writeln!(
        out,
        "detectable     {} (threshold {:e} rad)",
        if result.delta_phi.abs() >= threshold {
            "yes"
        } else {
            "no"
        },
        threshold
    )?;
    for w in &result.warnings {
        writeln!(err, "warning: {w}")?;
    }
    Ok(())
}

pub fn cmd_scan(
    config: &Config,
    path: &Path,
    threads: usize,
    settings: &QuadratureSettings,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let scenario = config.scenario()?;
    let spec = config.scan_spec()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(CliError::domain)?;
    let curve = pool.install(|| scan(&spec, &scenario, settings))?;
    let rows: Vec<CurveRow> = (&curve).into();
    write_atomic(path, |w| write_curve(&rows, w))?;
    for f in &curve.failures {
        writeln!(
            err,
            "warning: lambda = {:e} m skipped: {}",
            f.lambda, f.error
        )?;
    }
    let flagged = curve
        .points
        .iter()
        .filter(|p| !p.warnings.is_empty())
        .count();
    if flagged > 0 {
        writeln!(
            err,
            "warning: {flagged} point(s) computed outside the closed-form regime (e < 5 lambda or d > lambda)"
        )?;
    }
    writeln!(
        out,
        "wrote {} points ({} {}, d = {:e} m) to {}",
        rows.len(),
        spec.family,
        spec.mass_coupling,
        spec.distance,
        path.display()
    )?;
    Ok(())
}

pub fn cmd_optimize(
    config: &Config,
    family: ModelFamily,
    lambda: f64,
    d_range: (f64, f64),
    settings: &QuadratureSettings,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if !(d_range.0 > 0.0 && d_range.0 < d_range.1 && d_range.1.is_finite()) {
        return Err(CliError::config(format!(
            "invalid distance range: --d-min {:e} must be positive and below --d-max {:e}",
            d_range.0, d_range.1
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CliError::config(format!("invalid --lambda {lambda:e}")));
    }
    let scenario = config.scenario()?;
    let best = optimize_distance(family, lambda, &scenario, d_range, settings)?;
    writeln!(out, "family        {family}")?;
    writeln!(out, "lambda        {lambda:e} m")?;
    writeln!(out, "d_opt         {:.6e} m", best.distance)?;
    writeln!(out, "alpha_limit   {:.9e}", best.alpha_limit)?;
    writeln!(out, "regime        {}", best.regime)?;
    writeln!(
        out,
        "flatness      {:.6} (max/min alpha_limit over [{:e}, {:e}] m)",
        best.flatness, d_range.0, d_range.1
    )?;
    Ok(())
}

pub fn cmd_check(
    settings: &QuadratureSettings,
    tolerance: Option<f64>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let reports = selfcheck::run_all(settings, tolerance)?;
    let mut failed = 0;
    for r in &reports {
        let verdict = if r.passed() { "ok" } else { "FAIL" };
        failed += usize::from(!r.passed());
        writeln!(
            out,
            "{:<36} samples={:<5} max_rel_dev={:<10.3e} tol={:<8.1e} {verdict}",
            r.name, r.samples, r.max_deviation, r.tolerance
        )?;
    }
    if failed > 0 {
        return Err(CliError {
            code: EXIT_SELF_TEST,
            message: format!("{failed} sweep(s) out of tolerance"),
        });
    }
    Ok(())
}

pub fn cmd_overlay(
    ours: &Path,
    external: &Path,
    output: &Path,
    labels: (&str, &str),
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let ours_rows = read_curve_file(ours)?;
    let external_rows = read_curve_file(external)?;
    if external_rows.is_empty() {
        writeln!(err, "warning: {} has no data rows", external.display())?;
    }
    write_atomic(output, |w| {
        write_overlay(&[(labels.0, &ours_rows), (labels.1, &external_rows)], w)
    })?;
    writeln!(
        out,
        "wrote {} rows to {}",
        ours_rows.len() + external_rows.len(),
        output.display()
    )?;
    Ok(())
}
