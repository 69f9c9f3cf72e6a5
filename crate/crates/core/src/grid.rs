//! Split-operator spectral propagation of the paraxial wave equation
//!
//! `i hbar dpsi/dz = -(hbar^2 / 2 n0) d^2psi/dx^2 + V(x) psi`
//!
//! on a periodic transverse grid. Each step applies a half potential step,
//! the full kinetic step in Fourier space and another half potential step
//! (Strang splitting). The imaginary part of `V` turns the potential factor
//! into a real gain/loss factor; the norm is never renormalized.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::GridError;
use crate::potential::{PhysicalConstants, Potential};

/// Fraction of |psi|^2 in the outer band above which a sample is flagged.
pub const EDGE_MASS_WARNING: f64 = 0.01;

/// Outer band used for `edge_mass`, as a fraction of the half width.
const EDGE_BAND: f64 = 0.05;

/// Uniform periodic grid on `[-L, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    n_points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, n_points: usize) -> Result<Self, GridError> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(GridError::InvalidSpec(format!(
                "half_width must be positive, got {half_width}"
            )));
        }
        if n_points < 256 || !n_points.is_power_of_two() {
            return Err(GridError::InvalidSpec(format!(
                "n_points must be a power of two >= 256, got {n_points}"
            )));
        }
        Ok(Self {
            half_width,
            n_points,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Angular wavenumbers in FFT order for a periodic domain of length 2L.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let dk = PI / self.half_width;
        (0..n)
            .map(|j| if j < n / 2 { j } else { j - n })
            .map(|m| m as f64 * dk)
            .collect()
    }
}

/// Field amplitudes `psi(x_j)` at propagation distance `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    spec: GridSpec,
    amplitudes: Vec<Complex64>,
    z: f64,
}

impl GridState {
    pub fn new(spec: GridSpec, amplitudes: Vec<Complex64>, z: f64) -> Result<Self, GridError> {
        if amplitudes.len() != spec.n_points {
            return Err(GridError::InvalidInput(format!(
                "expected {} amplitudes, got {}",
                spec.n_points,
                amplitudes.len()
            )));
        }
        if !all_finite(&amplitudes) {
            return Err(GridError::NonFinite { z });
        }
        Ok(Self {
            spec,
            amplitudes,
            z,
        })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(spec: GridSpec, z: f64, f: impl Fn(f64) -> Complex64) -> Result<Self, GridError> {
        Self::new(spec, spec.positions().into_iter().map(f).collect(), z)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
            ..self.clone()
        }
    }

    /// Discrete L2 norm, `sqrt(sum |psi_j|^2 dx)`.
    pub fn norm(&self) -> f64 {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spec.spacing()).sqrt()
    }

    /// Discrete L2 norm of the difference of two states on the same grid.
    pub fn distance(&self, other: &GridState) -> Result<f64, GridError> {
        if self.spec != other.spec {
            return Err(GridError::InvalidInput("states live on different grids".into()));
        }
        let sum: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sum * self.spec.spacing()).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridObservables {
    pub norm: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub delta_q: f64,
    /// Fraction of |psi|^2 in the outer 5% of the domain.
    pub edge_mass: f64,
}

impl GridObservables {
    pub fn boundary_contaminated(&self) -> bool {
        self.edge_mass > EDGE_MASS_WARNING
    }
}

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl Spectral {
    fn new(spec: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(spec.n_points),
            inverse: planner.plan_fft_inverse(spec.n_points),
            k: spec.wavenumbers(),
        }
    }

    fn observables(&self, state: &GridState, hbar: f64) -> Result<GridObservables, GridError> {
        let spec = &state.spec;
        let dx = spec.spacing();
        let psi = &state.amplitudes;

        let mut mass = 0.0;
        let mut first = 0.0;
        let mut second = 0.0;
        let mut edge = 0.0;
        let edge_start = (1.0 - EDGE_BAND) * spec.half_width;
        for (j, a) in psi.iter().enumerate() {
            let x = spec.x(j);
            let rho = a.norm_sqr();
            mass += rho;
            first += x * rho;
            second += x * x * rho;
            if x.abs() >= edge_start {
                edge += rho;
            }
        }
        if !(mass > 0.0) {
            return Err(GridError::ZeroNorm);
        }
        let mean_q = first / mass;
        let variance = (second / mass - mean_q * mean_q).max(0.0);

        // <p> = Re sum conj(psi) (-i hbar dpsi/dx) dx / norm^2, derivative taken spectrally.
        // The Nyquist mode has no well-defined derivative and is dropped.
        let n = spec.n_points;
        let mut dpsi = psi.clone();
        self.forward.process(&mut dpsi);
        for (j, (c, &k)) in dpsi.iter_mut().zip(&self.k).enumerate() {
            let k = if j == n / 2 { 0.0 } else { k };
            *c *= Complex64::new(0.0, k / n as f64);
        }
        self.inverse.process(&mut dpsi);
        let momentum: f64 = psi
            .iter()
            .zip(&dpsi)
            .map(|(a, d)| (a.conj() * Complex64::new(0.0, -hbar) * d).re)
            .sum();

        Ok(GridObservables {
            norm: (mass * dx).sqrt(),
            mean_q,
            mean_p: momentum / mass,
            delta_q: variance.sqrt(),
            edge_mass: edge / mass,
        })
    }
}

/// Norm, moments and edge mass of a state, with `hbar = 1`.
pub fn observables(state: &GridState) -> Result<GridObservables, GridError> {
    observables_with(state, &PhysicalConstants::default())
}

pub fn observables_with(
    state: &GridState,
    constants: &PhysicalConstants,
) -> Result<GridObservables, GridError> {
    Spectral::new(&state.spec).observables(state, constants.hbar)
}

/// `|psi_j|^2 / norm^2`, which integrates to one over the grid.
pub fn renormalized_intensity(state: &GridState) -> Result<Vec<f64>, GridError> {
    let norm = state.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(GridError::ZeroNorm);
    }
    let scale = 1.0 / (norm * norm);
    Ok(state.amplitudes.iter().map(|a| a.norm_sqr() * scale).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSample {
    pub z: f64,
    pub observables: GridObservables,
    pub boundary_warning: bool,
    /// Renormalized intensity, when requested.
    pub intensity: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct GridRun {
    pub samples: Vec<GridSample>,
    pub final_state: GridState,
}

impl GridRun {
    pub fn any_boundary_warning(&self) -> bool {
        self.samples.iter().any(|s| s.boundary_warning)
    }
}

/// Strang split-step propagator with precomputed multipliers for one
/// `(grid, potential, dz)` combination.
pub struct SplitStepPropagator {
    spec: GridSpec,
    dz: f64,
    constants: PhysicalConstants,
    half_potential: Vec<Complex64>,
    full_potential: Vec<Complex64>,
    /// Kinetic multiplier with the 1/n of the inverse transform folded in.
    kinetic: Vec<Complex64>,
    spectral: Spectral,
}

impl fmt::Debug for SplitStepPropagator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SplitStepPropagator")
            .field("spec", &self.spec)
            .field("dz", &self.dz)
            .field("constants", &self.constants)
            .finish_non_exhaustive()
    }
}

impl SplitStepPropagator {
    pub fn new(
        spec: GridSpec,
        potential: &Potential,
        dz: f64,
        constants: PhysicalConstants,
    ) -> Result<Self, GridError> {
        if !(dz.is_finite() && dz > 0.0) {
            return Err(GridError::InvalidInput(format!("dz must be positive, got {dz}")));
        }
        constants.validate()?;
        let hbar = constants.hbar;

        let mut half_potential = Vec::with_capacity(spec.n_points);
        let mut full_potential = Vec::with_capacity(spec.n_points);
        for x in spec.positions() {
            let v = potential.value(x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(crate::error::PotentialError::NonFinite { x }.into());
            }
            // exp(-i V dz / hbar); Im V > 0 amplifies.
            let phase = Complex64::new(0.0, -dz / hbar) * v;
            half_potential.push((phase * 0.5).exp());
            full_potential.push(phase.exp());
        }

        let inv_n = 1.0 / spec.n_points as f64;
        let kinetic = spec
            .wavenumbers()
            .into_iter()
            .map(|k| {
                Complex64::from_polar(inv_n, -hbar * k * k * dz / (2.0 * constants.n_zero))
            })
            .collect();

        Ok(Self {
            spec,
            dz,
            constants,
            half_potential,
            full_potential,
            kinetic,
            spectral: Spectral::new(&spec),
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn observables(&self, state: &GridState) -> Result<GridObservables, GridError> {
        self.spectral.observables(state, self.constants.hbar)
    }

    fn kinetic_step(&self, psi: &mut [Complex64]) {
        self.spectral.forward.process(psi);
        for (c, m) in psi.iter_mut().zip(&self.kinetic) {
            *c *= m;
        }
        self.spectral.inverse.process(psi);
    }

    /// Advances `state` by `steps` Strang steps in place.
    ///
    /// Adjacent potential half steps are fused into full steps; the result is
    /// the same composition of operators.
    pub fn advance(&self, state: &mut GridState, steps: usize) -> Result<(), GridError> {
        if state.spec != self.spec {
            return Err(GridError::InvalidInput(
                "state grid does not match propagator grid".into(),
            ));
        }
        if steps == 0 {
            return Ok(());
        }
        let z0 = state.z;
        let psi = &mut state.amplitudes;
        multiply(psi, &self.half_potential);
        for _ in 1..steps {
            self.kinetic_step(psi);
            multiply(psi, &self.full_potential);
        }
        self.kinetic_step(psi);
        multiply(psi, &self.half_potential);
        state.z = z0 + steps as f64 * self.dz;
        if !all_finite(psi) {
            return Err(GridError::NonFinite { z: state.z });
        }
        Ok(())
    }

    /// Propagates to `z_max`, recording observables every `sample_stride`
    /// steps (and at the final step). `z_max` must be a whole number of steps.
    pub fn propagate(
        &self,
        initial: GridState,
        z_max: f64,
        sample_stride: usize,
        record_intensity: bool,
    ) -> Result<GridRun, GridError> {
        let total = whole_steps(z_max - initial.z, self.dz)?;
        let stride = sample_stride.max(1);
        let z0 = initial.z;
        let mut state = initial;
        let mut samples = Vec::with_capacity(total / stride + 2);
        samples.push(self.sample(&state, record_intensity)?);
        let mut done = 0;
        while done < total {
            let chunk = stride.min(total - done);
            self.advance(&mut state, chunk)?;
            done += chunk;
            state.z = z0 + done as f64 * self.dz;
            samples.push(self.sample(&state, record_intensity)?);
        }
        Ok(GridRun {
            samples,
            final_state: state,
        })
    }

    fn sample(&self, state: &GridState, record_intensity: bool) -> Result<GridSample, GridError> {
        let observables = self.observables(state)?;
        let boundary_warning = observables.boundary_contaminated();
        if boundary_warning {
            log::warn!(
                "boundary contamination at z = {}: edge mass {:.3e}",
                state.z,
                observables.edge_mass
            );
        }
        let intensity = if record_intensity {
            Some(renormalized_intensity(state)?)
        } else {
            None
        };
        Ok(GridSample {
            z: state.z,
            observables,
            boundary_warning,
            intensity,
        })
    }
}

fn whole_steps(distance: f64, dz: f64) -> Result<usize, GridError> {
    let ratio = distance / dz;
    let steps = ratio.round();
    if !(distance > 0.0) || (ratio - steps).abs() > 1e-6 * steps.max(1.0) {
        return Err(GridError::InvalidInput(format!(
            "propagation distance {distance} is not a positive whole number of steps of {dz}"
        )));
    }
    Ok(steps as usize)
}

fn multiply(psi: &mut [Complex64], factor: &[Complex64]) {
    for (a, f) in psi.iter_mut().zip(factor) {
        *a *= f;
    }
}

fn all_finite(values: &[Complex64]) -> bool {
    values.iter().all(|a| a.re.is_finite() && a.im.is_finite())
}
