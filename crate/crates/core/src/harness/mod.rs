//! Scenario files, built-in scenarios, output files and comparisons.

mod compare;
mod config;
mod filter;
mod library;
mod output;
mod run;

pub use compare::{
    compare, gaussian_intensity, CompareError, ComparisonReport, ComparisonRow, ObservableSample,
    ObservableSeries,
};
pub use config::{
    ComplexValue, GridConfig, InitialBeam, OutputConfig, Overrides, PotentialConfig,
    PropagatorKind, ScenarioConfig, StepConfig, DEFAULT_DZ, DEFAULT_GRID_POINTS,
    DEFAULT_HEATMAP_COLUMN_STRIDE, DEFAULT_SAMPLE_STRIDE, SCHEMA_VERSION,
};
pub use filter::{
    filter_experiment, write_filter_outputs, FilterConfig, FilterPair, FilterReport,
    SeparationRow,
};
pub use library::{builtin, scenario_library, LIBRARY_Z_MAX};
pub use output::{number, write_atomic};
pub use run::{run_scenario, simulate, write_outputs, Abort, RunOutcome, Simulation};
