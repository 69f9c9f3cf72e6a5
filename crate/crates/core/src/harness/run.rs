use std::path::PathBuf;

use serde::Serialize;

use crate::error::{DynamicsError, GridError, HarnessError};
use crate::gaussian::{integrate, reconstruct_wavefunction, Trajectory, TrajectorySample};
use crate::grid::{GridRun, GridSpec, SplitStepPropagator};
use crate::oracle::exact_params;
use crate::potential::Potential;

use super::compare::{compare, gaussian_intensity, ComparisonReport, ObservableSample, ObservableSeries};
use super::config::{PropagatorKind, ScenarioConfig};
use super::output::{comparison_csv, heatmap_csv, observables_csv, trajectory_csv, Writer};

/// A propagator that stopped before `z_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Abort {
    pub propagator: PropagatorKind,
    pub reached_z: Option<f64>,
    pub message: String,
}

impl Abort {
    pub fn to_error(&self) -> HarnessError {
        HarnessError::Numerical {
            propagator: self.propagator.to_string(),
            reached_z: self.reached_z,
            message: self.message.clone(),
        }
    }
}

/// Everything one scenario produced, before or after writing it out.
#[derive(Debug)]
pub struct Simulation {
    /// The configuration with every default filled in.
    pub config: ScenarioConfig,
    pub grid_spec: GridSpec,
    pub potential_description: String,
    pub gaussian: Option<Trajectory>,
    pub oracle: Option<Vec<TrajectorySample>>,
    pub grid: Option<GridRun>,
    /// Observables per finished propagator, in config order.
    pub series: Vec<ObservableSeries>,
    /// Pairwise comparisons; empty unless two propagators finished.
    pub reports: Vec<ComparisonReport>,
    pub aborts: Vec<Abort>,
    pub boundary_warning: bool,
}

impl Simulation {
    pub fn series(&self, kind: PropagatorKind) -> Option<&ObservableSeries> {
        self.series.iter().find(|s| s.name == kind.name())
    }

    pub fn report(&self, candidate: PropagatorKind, reference: PropagatorKind) -> Option<&ComparisonReport> {
        self.reports
            .iter()
            .find(|r| r.candidate == candidate.name() && r.reference == reference.name())
    }

    /// The first abort as an error, if any propagator stopped early.
    pub fn abort_error(&self) -> Option<HarnessError> {
        self.aborts.first().map(Abort::to_error)
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub simulation: Simulation,
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Runs the scenario and writes its output directory.
///
/// A propagator abort does not stop the others; their outputs are still
/// written and the abort is listed in `report.json`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunOutcome, HarnessError> {
    let simulation = simulate(config)?;
    let (output_dir, files) = write_outputs(&simulation)?;
    Ok(RunOutcome {
        simulation,
        output_dir,
        files,
    })
}

/// Runs every selected propagator concurrently and compares the results.
pub fn simulate(config: &ScenarioConfig) -> Result<Simulation, HarnessError> {
    config.validate()?;
    let config = config.resolved()?;
    let potential = config.potential.build()?;
    let grid_spec = config.grid_spec()?;
    let wants = |k| config.propagators.contains(&k);
    let profiles = config.output.heatmap || config.propagators.len() > 1;

    let (gaussian, grid, oracle) = std::thread::scope(|s| {
        let gaussian = wants(PropagatorKind::Gaussian).then(|| s.spawn(|| run_gaussian(&config, &potential)));
        let grid = wants(PropagatorKind::Grid).then(|| s.spawn(|| run_grid(&config, &potential, grid_spec, profiles)));
        let oracle = wants(PropagatorKind::Oracle).then(|| s.spawn(|| run_oracle(&config)));
        (
            gaussian.map(|h| h.join().expect("gaussian propagator panicked")),
            grid.map(|h| h.join().expect("grid propagator panicked")),
            oracle.map(|h| h.join().expect("oracle panicked")),
        )
    });

    let mut aborts = Vec::new();
    let gaussian = keep(gaussian, &mut aborts);
    let grid = keep(grid, &mut aborts);
    let oracle = keep(oracle, &mut aborts);

    let mut series = Vec::new();
    for kind in &config.propagators {
        let s = match kind {
            PropagatorKind::Gaussian => gaussian
                .as_ref()
                .map(|t: &Trajectory| gaussian_series(*kind, &t.samples, &grid_spec, profiles)),
            PropagatorKind::Oracle => oracle
                .as_ref()
                .map(|t: &Vec<TrajectorySample>| gaussian_series(*kind, t, &grid_spec, profiles)),
            PropagatorKind::Grid => grid.as_ref().map(|run| ObservableSeries {
                name: kind.name().into(),
                samples: run.samples.iter().map(ObservableSample::from_grid).collect(),
                intensity: run.samples.iter().map(|s| s.intensity.clone()).collect(),
            }),
        };
        series.extend(s);
    }

    let mut reports = Vec::new();
    for (candidate, reference) in [
        (PropagatorKind::Gaussian, PropagatorKind::Grid),
        (PropagatorKind::Gaussian, PropagatorKind::Oracle),
        (PropagatorKind::Grid, PropagatorKind::Oracle),
    ] {
        let find = |k: PropagatorKind| series.iter().find(|s| s.name == k.name());
        if let (Some(a), Some(b)) = (find(candidate), find(reference)) {
            let report = compare(&a.common_with(b), &b.common_with(a))
                .map_err(|e| HarnessError::Config(format!("{candidate} vs {reference}: {e}")))?;
            reports.push(report);
        }
    }

    let boundary_warning = grid.as_ref().is_some_and(GridRun::any_boundary_warning);
    Ok(Simulation {
        potential_description: potential.describe(),
        config,
        grid_spec,
        gaussian,
        oracle,
        grid,
        series,
        reports,
        aborts,
        boundary_warning,
    })
}

fn keep<T>(result: Option<Result<T, Abort>>, aborts: &mut Vec<Abort>) -> Option<T> {
    match result? {
        Ok(v) => Some(v),
        Err(a) => {
            log::error!("{} propagator aborted: {}", a.propagator, a.message);
            aborts.push(a);
            None
        }
    }
}

fn run_gaussian(config: &ScenarioConfig, potential: &Potential) -> Result<Trajectory, Abort> {
    integrate(
        &config.initial.params(),
        potential,
        config.z_max,
        config.gaussian.dz,
        config.sample_stride,
        &config.constants,
    )
    .map_err(|e: DynamicsError| Abort {
        propagator: PropagatorKind::Gaussian,
        reached_z: e.reached_z(),
        message: e.to_string(),
    })
}

fn run_grid(
    config: &ScenarioConfig,
    potential: &Potential,
    spec: GridSpec,
    record_intensity: bool,
) -> Result<GridRun, Abort> {
    let abort = |e: GridError| Abort {
        propagator: PropagatorKind::Grid,
        reached_z: match e {
            GridError::NonFinite { z } => Some(z),
            _ => None,
        },
        message: e.to_string(),
    };
    let initial = reconstruct_wavefunction(&config.initial.params(), &spec).map_err(|e| Abort {
        propagator: PropagatorKind::Grid,
        reached_z: None,
        message: e.to_string(),
    })?;
    let propagator =
        SplitStepPropagator::new(spec, potential, config.grid.dz, config.constants).map_err(abort)?;
    propagator
        .propagate(initial.state, config.z_max, config.sample_stride, record_intensity)
        .map_err(abort)
}

/// Closed-form parameters on the same `z` samples the RK4 integrator uses
/// for the same step.
fn run_oracle(config: &ScenarioConfig) -> Result<Vec<TrajectorySample>, Abort> {
    let params = config
        .potential
        .quadratic_params()
        .expect("validated: oracle needs the quadratic potential");
    let initial = config.initial.params();
    let dz = config.oracle.dz;
    let n_steps = (config.z_max / dz - 1e-9).ceil().max(1.0) as usize;
    let stride = config.sample_stride;
    let mut samples = vec![TrajectorySample {
        z: 0.0,
        params: initial,
    }];
    for i in (1..=n_steps).filter(|i| i % stride == 0 || *i == n_steps) {
        let z = if i == n_steps { config.z_max } else { i as f64 * dz };
        let p = exact_params(&initial, params, config.constants.hbar, z).map_err(|e| Abort {
            propagator: PropagatorKind::Oracle,
            reached_z: Some(z),
            message: e.to_string(),
        })?;
        samples.push(TrajectorySample { z, params: p });
    }
    Ok(samples)
}

fn gaussian_series(
    kind: PropagatorKind,
    samples: &[TrajectorySample],
    spec: &GridSpec,
    profiles: bool,
) -> ObservableSeries {
    ObservableSeries {
        name: kind.name().into(),
        samples: samples.iter().map(ObservableSample::from_gaussian).collect(),
        intensity: profiles.then(|| {
            samples
                .iter()
                .map(|s| gaussian_intensity(spec, s.params.q, s.params.b.im))
                .collect()
        }),
    }
}

#[derive(Serialize)]
struct ReportFile<'a> {
    scenario: &'a str,
    aborts: &'a [Abort],
    boundary_warning: bool,
    comparisons: &'a [ComparisonReport],
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    potential: &'a str,
    grid_spacing: f64,
    files: Vec<String>,
    config: &'a ScenarioConfig,
}

/// Writes CSVs, `report.json` and `manifest.json` into the configured
/// output directory.
pub fn write_outputs(sim: &Simulation) -> Result<(PathBuf, Vec<PathBuf>), HarnessError> {
    let config = &sim.config;
    let mut w = Writer::new(config.output_dir());
    let heatmap = config.output.heatmap;
    let stride = config.output.heatmap_column_stride;

    if let Some(t) = &sim.gaussian {
        w.write("gaussian_trajectory.csv", &trajectory_csv(&t.samples))?;
    }
    if let Some(t) = &sim.oracle {
        w.write("oracle_trajectory.csv", &trajectory_csv(t))?;
    }
    if let Some(run) = &sim.grid {
        w.write("grid_observables.csv", &observables_csv(&run.samples))?;
    }
    if heatmap {
        for kind in [PropagatorKind::Gaussian, PropagatorKind::Grid] {
            if let Some(s) = sim.series(kind) {
                if let Some(rows) = &s.intensity {
                    let zs: Vec<f64> = s.samples.iter().map(|o| o.z).collect();
                    w.write(&format!("{kind}_heatmap.csv"), &heatmap_csv(&sim.grid_spec, &zs, rows, stride))?;
                }
            }
        }
    }
    for r in &sim.reports {
        w.write(
            &format!("comparison_{}_vs_{}.csv", r.candidate, r.reference),
            &comparison_csv(&r.table),
        )?;
    }
    let report = ReportFile {
        scenario: &config.name,
        aborts: &sim.aborts,
        boundary_warning: sim.boundary_warning,
        comparisons: &sim.reports,
    };
    w.write("report.json", &to_json(&report))?;

    let files = w
        .files
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    let manifest = Manifest {
        tool: "gaussbeam",
        version: crate::VERSION,
        potential: &sim.potential_description,
        grid_spacing: sim.grid_spec.spacing(),
        files,
        config,
    };
    w.write("manifest.json", &to_json(&manifest))?;
    Ok((w.dir, w.files))
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
