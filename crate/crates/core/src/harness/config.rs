use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::gaussian::GaussianParams;
use crate::grid::GridSpec;
use crate::potential::{
    hermitian_variant, pt_tanh_gaussian, quadratic_linear, PhysicalConstants, Potential,
    PtPotentialParams, QuadraticLinearParams,
};

/// Current scenario file schema.
pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_DZ: f64 = 1e-3;
pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const DEFAULT_SAMPLE_STRIDE: usize = 100;
pub const DEFAULT_HEATMAP_COLUMN_STRIDE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    PtTanhGaussian {
        gamma: f64,
        omega: f64,
        eta: f64,
        /// Drop the imaginary part.
        #[serde(default)]
        hermitian: bool,
    },
    QuadraticLinear {
        omega: f64,
        gamma: f64,
        #[serde(default)]
        hermitian: bool,
    },
}

impl PotentialConfig {
    pub fn build(&self) -> Result<Potential, HarnessError> {
        let (potential, hermitian) = match *self {
            Self::PtTanhGaussian {
                gamma,
                omega,
                eta,
                hermitian,
            } => (pt_tanh_gaussian(PtPotentialParams::new(gamma, omega, eta)?)?, hermitian),
            Self::QuadraticLinear {
                omega,
                gamma,
                hermitian,
            } => (quadratic_linear(QuadraticLinearParams::new(omega, gamma)?)?, hermitian),
        };
        Ok(if hermitian {
            hermitian_variant(&potential)
        } else {
            potential
        })
    }

    /// Parameters for the closed-form solutions, with the gain/loss slope
    /// zeroed for the Hermitian variant. `None` for the tanh-Gaussian well.
    pub fn quadratic_params(&self) -> Option<QuadraticLinearParams> {
        match *self {
            Self::QuadraticLinear {
                omega,
                gamma,
                hermitian,
            } => Some(QuadraticLinearParams {
                omega,
                gamma: if hermitian { 0.0 } else { gamma },
            }),
            Self::PtTanhGaussian { .. } => None,
        }
    }

    /// `8 eta` for the tanh-Gaussian well, 20 for the quadratic potential.
    pub fn default_half_width(&self) -> f64 {
        match *self {
            Self::PtTanhGaussian { eta, .. } => 8.0 * eta,
            Self::QuadraticLinear { .. } => 20.0,
        }
    }
}

/// A complex number written as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexValue> for Complex64 {
    fn from(c: ComplexValue) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialBeam {
    pub q0: f64,
    pub p0: f64,
    pub b0: ComplexValue,
    #[serde(default = "one")]
    pub norm0: f64,
    #[serde(default)]
    pub alpha0: f64,
}

impl InitialBeam {
    pub fn params(&self) -> GaussianParams {
        GaussianParams::new(self.q0, self.p0, self.b0.into(), self.norm0, self.alpha0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagatorKind {
    Gaussian,
    Grid,
    Oracle,
}

impl PropagatorKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Grid => "grid",
            Self::Oracle => "oracle",
        }
    }
}

impl fmt::Display for PropagatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepConfig {
    #[serde(default = "default_dz")]
    pub dz: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self { dz: DEFAULT_DZ }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_dz")]
    pub dz: f64,
    /// Defaults to the potential's natural size, see
    /// [`PotentialConfig::default_half_width`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default = "default_grid_points")]
    pub n_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            dz: DEFAULT_DZ,
            half_width: None,
            n_points: DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Defaults to `output/<name>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default = "yes")]
    pub heatmap: bool,
    /// Every n-th grid point becomes a heatmap column.
    #[serde(default = "default_heatmap_stride")]
    pub heatmap_column_stride: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            heatmap: true,
            heatmap_column_stride: DEFAULT_HEATMAP_COLUMN_STRIDE,
        }
    }
}

/// One scenario: a potential, an initial beam and the propagators to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    pub potential: PotentialConfig,
    pub initial: InitialBeam,
    #[serde(default)]
    pub constants: PhysicalConstants,
    pub propagators: Vec<PropagatorKind>,
    pub z_max: f64,
    /// Steps between recorded samples, for every propagator.
    #[serde(default = "default_sample_stride")]
    pub sample_stride: usize,
    #[serde(default)]
    pub gaussian: StepConfig,
    #[serde(default)]
    pub oracle: StepConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Command-line values that replace config entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    /// Applied to every propagator.
    pub dz: Option<f64>,
    pub grid_points: Option<usize>,
    pub z_max: Option<f64>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    /// Reads the configuration embedded in a run manifest.
    pub fn from_manifest(text: &str) -> Result<Self, HarnessError> {
        #[derive(Deserialize)]
        struct Envelope {
            config: ScenarioConfig,
        }
        let envelope: Envelope =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        envelope.config.validate()?;
        Ok(envelope.config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.name.trim().is_empty() {
            return fail("name must not be empty".into());
        }
        self.potential.build()?;
        self.constants.validate()?;

        let b = &self.initial;
        for (name, v) in [
            ("q0", b.q0),
            ("p0", b.p0),
            ("b0.re", b.b0.re),
            ("b0.im", b.b0.im),
            ("alpha0", b.alpha0),
        ] {
            if !v.is_finite() {
                return fail(format!("initial.{name} must be finite, got {v}"));
            }
        }
        if !(b.b0.im > 0.0) {
            return fail(format!("initial.b0.im must be positive, got {}", b.b0.im));
        }
        if !(b.norm0.is_finite() && b.norm0 > 0.0) {
            return fail(format!("initial.norm0 must be positive, got {}", b.norm0));
        }

        if self.propagators.is_empty() {
            return fail("at least one propagator is required".into());
        }
        let unique: BTreeSet<_> = self.propagators.iter().collect();
        if unique.len() != self.propagators.len() {
            return fail("propagators must not repeat".into());
        }
        if self.propagators.contains(&PropagatorKind::Oracle)
            && self.potential.quadratic_params().is_none()
        {
            return fail("the oracle propagator requires the quadratic_linear potential".into());
        }

        if !(self.z_max.is_finite() && self.z_max > 0.0) {
            return fail(format!("z_max must be positive, got {}", self.z_max));
        }
        if self.sample_stride == 0 {
            return fail("sample_stride must be at least 1".into());
        }
        for (name, dz) in [
            ("gaussian.dz", self.gaussian.dz),
            ("oracle.dz", self.oracle.dz),
            ("grid.dz", self.grid.dz),
        ] {
            if !(dz.is_finite() && dz > 0.0) {
                return fail(format!("{name} must be positive, got {dz}"));
            }
        }
        if self.propagators.contains(&PropagatorKind::Grid) {
            let ratio = self.z_max / self.grid.dz;
            if (ratio - ratio.round()).abs() > 1e-6 * ratio.round().max(1.0) {
                return fail(format!(
                    "z_max = {} is not a whole number of grid steps of {}",
                    self.z_max, self.grid.dz
                ));
            }
        }
        self.grid_spec()?;
        if self.output.heatmap_column_stride == 0 {
            return fail("output.heatmap_column_stride must be at least 1".into());
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec, HarnessError> {
        let half_width = self
            .grid
            .half_width
            .unwrap_or_else(|| self.potential.default_half_width());
        GridSpec::new(half_width, self.grid.n_points)
            .map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output
            .dir
            .clone()
            .unwrap_or_else(|| Path::new("output").join(&self.name))
    }

    /// Fills every defaulted value in, so the result re-runs identically
    /// regardless of future default changes.
    pub fn resolved(&self) -> Result<Self, HarnessError> {
        let mut out = self.clone();
        out.grid.half_width = Some(self.grid_spec()?.half_width());
        out.output.dir = Some(self.output_dir());
        Ok(out)
    }

    pub fn with_overrides(mut self, overrides: &Overrides) -> Result<Self, HarnessError> {
        if let Some(dir) = &overrides.out_dir {
            self.output.dir = Some(dir.clone());
        }
        if let Some(dz) = overrides.dz {
            self.gaussian.dz = dz;
            self.oracle.dz = dz;
            self.grid.dz = dz;
        }
        if let Some(n) = overrides.grid_points {
            self.grid.n_points = n;
        }
        if let Some(z) = overrides.z_max {
            self.z_max = z;
        }
        self.validate()?;
        Ok(self)
    }
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn default_dz() -> f64 {
    DEFAULT_DZ
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_sample_stride() -> usize {
    DEFAULT_SAMPLE_STRIDE
}

fn default_heatmap_stride() -> usize {
    DEFAULT_HEATMAP_COLUMN_STRIDE
}
