use serde::Serialize;
use thiserror::Error;

use crate::gaussian::{widths, TrajectorySample};
use crate::grid::{GridSample, GridSpec};

/// Relative tolerance for treating two sample positions as the same `z`.
const Z_MATCH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error("series have {a} and {b} samples")]
    LengthMismatch { a: usize, b: usize },
    #[error("sample {index} sits at z = {z_a} in one series and z = {z_b} in the other")]
    MismatchedSampling { index: usize, z_a: f64, z_b: f64 },
    #[error("nothing to compare")]
    Empty,
}

/// Beam observables at one `z`, whatever the propagator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableSample {
    pub z: f64,
    pub norm: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub delta_q: f64,
}

impl ObservableSample {
    /// Observables of the Gaussian read off its parameters.
    pub fn from_gaussian(sample: &TrajectorySample) -> Self {
        let p = &sample.params;
        let delta_q = widths(p).map(|w| w.0).unwrap_or(f64::NAN);
        Self {
            z: sample.z,
            norm: p.norm,
            mean_q: p.q,
            mean_p: p.p,
            delta_q,
        }
    }

    pub fn from_grid(sample: &GridSample) -> Self {
        let o = &sample.observables;
        Self {
            z: sample.z,
            norm: o.norm,
            mean_q: o.mean_q,
            mean_p: o.mean_p,
            delta_q: o.delta_q,
        }
    }
}

/// A propagator's observables, optionally with renormalized intensity
/// profiles on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub name: String,
    pub samples: Vec<ObservableSample>,
    pub intensity: Option<Vec<Vec<f64>>>,
}

impl ObservableSeries {
    pub fn new(name: impl Into<String>, samples: Vec<ObservableSample>) -> Self {
        Self {
            name: name.into(),
            samples,
            intensity: None,
        }
    }

    /// Restricts to the samples whose `z` also occurs in `other`.
    pub fn common_with(&self, other: &Self) -> Self {
        let mut keep = Vec::new();
        let mut j = 0;
        for (i, s) in self.samples.iter().enumerate() {
            while j < other.samples.len() && other.samples[j].z < s.z && !same_z(other.samples[j].z, s.z) {
                j += 1;
            }
            if j < other.samples.len() && same_z(other.samples[j].z, s.z) {
                keep.push(i);
            }
        }
        Self {
            name: self.name.clone(),
            samples: keep.iter().map(|&i| self.samples[i]).collect(),
            intensity: self
                .intensity
                .as_ref()
                .map(|rows| keep.iter().map(|&i| rows[i].clone()).collect()),
        }
    }
}

fn same_z(a: f64, b: f64) -> bool {
    (a - b).abs() <= Z_MATCH * a.abs().max(b.abs()).max(1.0)
}

/// Renormalized intensity `|psi|^2 / N^2` of a Gaussian of width `im_b`
/// centered at `q`, on the grid points.
pub fn gaussian_intensity(spec: &GridSpec, q: f64, im_b: f64) -> Vec<f64> {
    let peak = (im_b / std::f64::consts::PI).sqrt();
    spec.positions()
        .into_iter()
        .map(|x| peak * (-im_b * (x - q) * (x - q)).exp())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub z: f64,
    pub q_candidate: f64,
    pub q_reference: f64,
    pub q_error: f64,
    pub norm_candidate: f64,
    pub norm_reference: f64,
    pub norm_rel_error: f64,
    /// Relative L2 distance of the renormalized intensity profiles.
    pub intensity_l2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub candidate: String,
    pub reference: String,
    pub sup_q_error: f64,
    pub sup_norm_rel_error: f64,
    /// Mean over samples of the relative L2 intensity distance.
    pub renormalized_intensity_l2: Option<f64>,
    #[serde(skip)]
    pub table: Vec<ComparisonRow>,
}

/// Compares `candidate` against `reference` sample by sample.
///
/// Norm errors are relative to the reference norm, with the denominator
/// floored at `1e-12` times the largest norm in either series.
pub fn compare(
    candidate: &ObservableSeries,
    reference: &ObservableSeries,
) -> Result<ComparisonReport, CompareError> {
    let (a, b) = (&candidate.samples, &reference.samples);
    if a.len() != b.len() {
        return Err(CompareError::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.is_empty() {
        return Err(CompareError::Empty);
    }
    for (index, (sa, sb)) in a.iter().zip(b).enumerate() {
        if !same_z(sa.z, sb.z) {
            return Err(CompareError::MismatchedSampling {
                index,
                z_a: sa.z,
                z_b: sb.z,
            });
        }
    }
    let max_norm = a.iter().chain(b).map(|s| s.norm.abs()).fold(0.0, f64::max);
    let floor = 1e-12 * max_norm;
    let profiles = match (&candidate.intensity, &reference.intensity) {
        (Some(pa), Some(pb)) if pa.len() == a.len() && pb.len() == b.len() => Some((pa, pb)),
        _ => None,
    };

    let table: Vec<ComparisonRow> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(k, (sa, sb))| {
            let denom = sb.norm.abs().max(floor);
            let norm_rel_error = if denom > 0.0 {
                (sa.norm - sb.norm).abs() / denom
            } else {
                0.0
            };
            ComparisonRow {
                z: sb.z,
                q_candidate: sa.mean_q,
                q_reference: sb.mean_q,
                q_error: (sa.mean_q - sb.mean_q).abs(),
                norm_candidate: sa.norm,
                norm_reference: sb.norm,
                norm_rel_error,
                intensity_l2: profiles.map(|(pa, pb)| relative_l2(&pa[k], &pb[k])),
            }
        })
        .collect();

    let sup = |f: fn(&ComparisonRow) -> f64| table.iter().map(f).fold(0.0, f64::max);
    let renormalized_intensity_l2 = profiles.map(|_| {
        table.iter().filter_map(|r| r.intensity_l2).sum::<f64>() / table.len() as f64
    });
    Ok(ComparisonReport {
        candidate: candidate.name.clone(),
        reference: reference.name.clone(),
        sup_q_error: sup(|r| r.q_error),
        sup_norm_rel_error: sup(|r| r.norm_rel_error),
        renormalized_intensity_l2,
        table,
    })
}

fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let base: f64 = b.iter().map(|y| y * y).sum();
    if base > 0.0 {
        (diff / base).sqrt()
    } else {
        diff.sqrt()
    }
}
