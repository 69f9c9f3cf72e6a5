use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::gaussian::{integrate, widths, GaussianParams, Trajectory};
use crate::potential::PhysicalConstants;

use super::config::{ComplexValue, PotentialConfig, SCHEMA_VERSION};
use super::output::{number, write_atomic};

/// Several beams launched from the same center with different widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub schema_version: u32,
    pub name: String,
    pub potential: PotentialConfig,
    pub q0: f64,
    pub p0: f64,
    pub widths: Vec<ComplexValue>,
    #[serde(default)]
    pub constants: PhysicalConstants,
    pub z_max: f64,
    #[serde(default = "default_dz")]
    pub dz: f64,
    #[serde(default = "one")]
    pub sample_stride: usize,
    /// Defaults to `output/<name>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl FilterConfig {
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

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!("unsupported schema_version {}", self.schema_version));
        }
        if self.name.trim().is_empty() {
            return fail("name must not be empty".into());
        }
        self.potential.build()?;
        self.constants.validate()?;
        if !(self.q0.is_finite() && self.p0.is_finite()) {
            return fail("q0 and p0 must be finite".into());
        }
        if self.widths.len() < 2 {
            return fail("at least two widths are required".into());
        }
        if let Some(b) = self.widths.iter().find(|b| !(b.re.is_finite() && b.im > 0.0)) {
            return fail(format!("every width needs Im b0 > 0, got {} + {}i", b.re, b.im));
        }
        if !(self.z_max.is_finite() && self.z_max > 0.0) {
            return fail(format!("z_max must be positive, got {}", self.z_max));
        }
        if !(self.dz.is_finite() && self.dz > 0.0) {
            return fail(format!("dz must be positive, got {}", self.dz));
        }
        if self.sample_stride == 0 {
            return fail("sample_stride must be at least 1".into());
        }
        Ok(())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .unwrap_or_else(|| Path::new("output").join(&self.name))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationRow {
    pub z: f64,
    /// `q_a - q_b`.
    pub separation: f64,
    pub predicted: f64,
    /// `dq_a + dq_b` at this `z`.
    pub width_sum: f64,
}

/// Two of the beams, `a` and `b` indexing [`FilterConfig::widths`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterPair {
    pub a: usize,
    pub b: usize,
    /// `2 V_I'(q0) (dq_a^2 - dq_b^2)`, the initial rate of separation.
    pub predicted_rate: f64,
    /// First sampled `z` where the separation exceeds the sum of the widths.
    pub resolvability_distance: Option<f64>,
    #[serde(skip)]
    pub rows: Vec<SeparationRow>,
}

impl FilterPair {
    /// Separation at a sampled `z`.
    pub fn separation_at(&self, z: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| (r.z - z).abs() <= 1e-9 * z.abs().max(1.0))
            .map(|r| r.separation)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterReport {
    /// Gain/loss slope `V_I'(q0)` the prediction uses.
    pub slope: f64,
    pub trajectories: Vec<Trajectory>,
    pub pairs: Vec<FilterPair>,
}

/// Propagates every beam with the Gaussian dynamics and reports how fast
/// the centers separate.
///
/// Near the launch point each center moves at `p0 + 2 V_I'(q0) dq^2`, so
/// wide beams drift towards gain faster than narrow ones.
pub fn filter_experiment(config: &FilterConfig) -> Result<FilterReport, HarnessError> {
    config.validate()?;
    let potential = config.potential.build()?;
    let slope = potential.try_sample(config.q0)?.dv_imag;
    let trajectories = config
        .widths
        .iter()
        .map(|b0| {
            let initial = GaussianParams::new(config.q0, config.p0, (*b0).into(), 1.0, 0.0);
            integrate(&initial, &potential, config.z_max, config.dz, config.sample_stride, &config.constants)
                .map_err(|e| HarnessError::Numerical {
                    propagator: "gaussian".into(),
                    reached_z: e.reached_z(),
                    message: e.to_string(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let delta_q0 = |i: usize| 1.0 / (2.0 * config.widths[i].im);
    let mut pairs = Vec::new();
    for a in 0..trajectories.len() {
        for b in a + 1..trajectories.len() {
            let predicted_rate = 2.0 * slope * (delta_q0(a) - delta_q0(b));
            let rows: Vec<SeparationRow> = trajectories[a]
                .samples
                .iter()
                .zip(&trajectories[b].samples)
                .map(|(sa, sb)| {
                    let wa = widths(&sa.params).map(|w| w.0).unwrap_or(f64::NAN);
                    let wb = widths(&sb.params).map(|w| w.0).unwrap_or(f64::NAN);
                    SeparationRow {
                        z: sa.z,
                        separation: sa.params.q - sb.params.q,
                        predicted: predicted_rate * sa.z,
                        width_sum: wa + wb,
                    }
                })
                .collect();
            let resolvability_distance = rows
                .iter()
                .find(|r| r.separation.abs() > r.width_sum)
                .map(|r| r.z);
            pairs.push(FilterPair {
                a,
                b,
                predicted_rate,
                resolvability_distance,
                rows,
            });
        }
    }
    Ok(FilterReport {
        slope,
        trajectories,
        pairs,
    })
}

#[derive(Serialize)]
struct FilterSummary<'a> {
    tool: &'static str,
    version: &'static str,
    slope: f64,
    pairs: &'a [FilterPair],
    config: &'a FilterConfig,
}

/// Writes one `separation_<a>_<b>.csv` per pair and `filter.json`.
pub fn write_filter_outputs(config: &FilterConfig, report: &FilterReport) -> Result<Vec<PathBuf>, HarnessError> {
    let dir = config.output_dir();
    let mut files = Vec::new();
    for pair in &report.pairs {
        let mut csv = String::from("z,separation,predicted,width_sum\n");
        for r in &pair.rows {
            csv.push_str(&[r.z, r.separation, r.predicted, r.width_sum].map(number).join(","));
            csv.push('\n');
        }
        let path = dir.join(format!("separation_{}_{}.csv", pair.a, pair.b));
        write_atomic(&path, &csv)?;
        files.push(path);
    }
    let mut resolved = config.clone();
    resolved.out_dir = Some(dir.clone());
    let summary = FilterSummary {
        tool: "gaussbeam",
        version: crate::VERSION,
        slope: report.slope,
        pairs: &report.pairs,
        config: &resolved,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    let path = dir.join("filter.json");
    write_atomic(&path, &json)?;
    files.push(path);
    Ok(files)
}

fn default_dz() -> f64 {
    1e-4
}

fn one() -> usize {
    1
}
