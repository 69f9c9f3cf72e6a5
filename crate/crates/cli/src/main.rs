//! `gaussbeam`: run beam propagation scenarios from the command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaussbeam::harness::{
    builtin, filter_experiment, run_scenario, scenario_library, write_filter_outputs,
    FilterConfig, Overrides, PotentialConfig, ScenarioConfig,
};
use gaussbeam::HarnessError;

#[derive(Parser)]
#[command(name = "gaussbeam", version, about = "Gaussian beams in waveguides with gain and loss")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write outputs here instead of the configured directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Step size for every propagator.
    #[arg(long, global = true)]
    dz: Option<f64>,

    /// Number of grid points for the split-step propagator.
    #[arg(long, global = true)]
    grid_points: Option<usize>,

    /// Propagation distance.
    #[arg(long, global = true)]
    z_max: Option<f64>,

    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run { config: PathBuf },
    /// List the built-in scenarios.
    List,
    /// Run a built-in scenario by name.
    RunBuiltin { name: String },
    /// Run a width-filter experiment file.
    Filter { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are configuration errors; exit code 2 is reserved for numerical failures.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.quiet {
        log::LevelFilter::Error
    } else {
        log::LevelFilter::Warn
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();

    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), HarnessError> {
    let overrides = Overrides {
        out_dir: cli.out_dir.clone(),
        dz: cli.dz,
        grid_points: cli.grid_points,
        z_max: cli.z_max,
    };
    match &cli.command {
        Command::Run { config } => run(ScenarioConfig::from_path(config)?, &overrides, cli.quiet),
        Command::RunBuiltin { name } => {
            let config = builtin(name).ok_or_else(|| {
                HarnessError::Config(format!("no built-in scenario named {name:?}; see `gaussbeam list`"))
            })?;
            run(config, &overrides, cli.quiet)
        }
        Command::List => {
            for s in scenario_library() {
                println!("{:<20} {}", s.name, describe(&s));
            }
            Ok(())
        }
        Command::Filter { config } => filter(config, &overrides, cli.quiet),
    }
}

fn describe(s: &ScenarioConfig) -> String {
    let potential = match s.potential {
        PotentialConfig::PtTanhGaussian { eta, hermitian, .. } => {
            format!("tanh-gaussian eta={eta}{}", if hermitian { " hermitian" } else { "" })
        }
        PotentialConfig::QuadraticLinear { .. } => "quadratic".to_string(),
    };
    let b = s.initial.b0;
    let propagators: Vec<&str> = s.propagators.iter().map(|p| p.name()).collect();
    format!(
        "{potential:<36} q0={} p0={} b0={}{:+}i  [{}]",
        s.initial.q0,
        s.initial.p0,
        b.re,
        b.im,
        propagators.join(", ")
    )
}

fn run(config: ScenarioConfig, overrides: &Overrides, quiet: bool) -> Result<(), HarnessError> {
    let config = config.with_overrides(overrides)?;
    let outcome = run_scenario(&config)?;
    let sim = &outcome.simulation;
    if !quiet {
        println!(
            "{}: wrote {} files to {}",
            sim.config.name,
            outcome.files.len(),
            outcome.output_dir.display()
        );
        for r in &sim.reports {
            let l2 = r
                .renormalized_intensity_l2
                .map(|v| format!(", intensity l2 {v:.3e}"))
                .unwrap_or_default();
            println!(
                "  {} vs {}: sup |q error| {:.3e}, sup norm rel error {:.3e}{l2}",
                r.candidate, r.reference, r.sup_q_error, r.sup_norm_rel_error
            );
        }
        if sim.boundary_warning {
            println!("  warning: grid edge mass exceeded the contamination threshold");
        }
    }
    match sim.abort_error() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn filter(path: &Path, overrides: &Overrides, quiet: bool) -> Result<(), HarnessError> {
    if overrides.grid_points.is_some() {
        return Err(HarnessError::Config("--grid-points does not apply to filter".into()));
    }
    let mut config = FilterConfig::from_path(path)?;
    if let Some(dir) = &overrides.out_dir {
        config.out_dir = Some(dir.clone());
    }
    if let Some(dz) = overrides.dz {
        config.dz = dz;
    }
    if let Some(z) = overrides.z_max {
        config.z_max = z;
    }
    config.validate()?;
    let report = filter_experiment(&config)?;
    let files = write_filter_outputs(&config, &report)?;
    if !quiet {
        println!(
            "{}: gain/loss slope {:.6} at q0, wrote {} files to {}",
            config.name,
            report.slope,
            files.len(),
            config.output_dir().display()
        );
        for p in &report.pairs {
            let resolved = p
                .resolvability_distance
                .map(|z| format!("resolved at z = {z}"))
                .unwrap_or_else(|| "not resolved".into());
            println!(
                "  beams {} and {}: predicted separation rate {:.6}, {resolved}",
                p.a, p.b, p.predicted_rate
            );
        }
    }
    Ok(())
}
