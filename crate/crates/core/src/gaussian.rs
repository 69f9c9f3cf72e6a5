//! Semiclassical dynamics of the five Gaussian beam parameters.
//!
//! The beam is
//!
//! `psi(x) = N (Im b / pi)^(1/4) exp(i (b/2 (x-q)^2 + p (x-q) + alpha))`
//!
//! and its parameters follow from a second-order Taylor expansion of the
//! potential around the center `q`. With a complex potential the width
//! parameter `b` feeds back into the motion of the center.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;
use crate::grid::{GridSpec, GridState};
use crate::potential::{PhysicalConstants, Potential, PotentialSample};

/// Center `q`, momentum `p`, complex width `b`, norm `N`, phase `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub q: f64,
    pub p: f64,
    pub b: Complex64,
    pub norm: f64,
    pub alpha: f64,
}

impl GaussianParams {
    pub fn new(q: f64, p: f64, b: Complex64, norm: f64, alpha: f64) -> Self {
        Self {
            q,
            p,
            b,
            norm,
            alpha,
        }
    }

    fn check_normalizable(&self) -> Result<(), DynamicsError> {
        if self.b.im > 0.0 {
            Ok(())
        } else {
            Err(DynamicsError::NonNormalizable { im_b: self.b.im })
        }
    }

    fn is_finite(&self) -> bool {
        [self.q, self.p, self.b.re, self.b.im, self.norm, self.alpha]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// z-derivatives of the beam parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianRates {
    pub dq: f64,
    pub dp: f64,
    pub db: Complex64,
    pub dnorm: f64,
    pub dalpha: f64,
}

/// Growth rate of `ln N`.
fn log_norm_rate(im_b: f64, sample: &PotentialSample, constants: &PhysicalConstants) -> f64 {
    sample.v_imag / constants.hbar + sample.d2v_imag / (4.0 * im_b)
}

/// Right-hand side of the parameter equations of motion.
pub fn rhs(
    params: &GaussianParams,
    sample: &PotentialSample,
    constants: &PhysicalConstants,
) -> Result<GaussianRates, DynamicsError> {
    params.check_normalizable()?;
    let GaussianParams { p, b, norm, .. } = *params;
    let chirp = b.re / b.im;

    let dp = -sample.dv_real + chirp * sample.dv_imag;
    let dq = p + sample.dv_imag / b.im;
    let db = -b * b - Complex64::new(sample.d2v_real, sample.d2v_imag);
    let dnorm = log_norm_rate(b.im, sample, constants) * norm;
    let dalpha = p * dq - 0.5 * p * p - sample.v_real - 0.5 * b.im;

    Ok(GaussianRates {
        dq,
        dp,
        db,
        dnorm,
        dalpha,
    })
}

/// `d^2q/dz^2` with `p` eliminated. Only used to cross-check [`rhs`].
pub fn center_acceleration(
    params: &GaussianParams,
    sample: &PotentialSample,
) -> Result<f64, DynamicsError> {
    params.check_normalizable()?;
    let b = params.b;
    let dq = params.p + sample.dv_imag / b.im;
    // d(1/Im b)/dz = (2 Re b Im b + V_I'') / Im b^2
    let width_rate = (2.0 * b.re * b.im + sample.d2v_imag) / (b.im * b.im);
    Ok(-sample.dv_real
        + (b.re / b.im) * sample.dv_imag
        + sample.d2v_imag / b.im * dq
        + sample.dv_imag * width_rate)
}

/// Position and momentum widths `(1/sqrt(2 Im b), |b|/sqrt(2 Im b))`.
pub fn widths(params: &GaussianParams) -> Result<(f64, f64), DynamicsError> {
    params.check_normalizable()?;
    let root = (2.0 * params.b.im).sqrt();
    Ok((1.0 / root, params.b.norm() / root))
}

/// Classical energy of the center in the real part of the potential.
pub fn center_energy(params: &GaussianParams, potential: &Potential) -> f64 {
    0.5 * params.p * params.p + potential.sample(params.q).v_real
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub z: f64,
    pub params: GaussianParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub dz: f64,
    pub potential: String,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }
}

/// Internal integration state: `(q, p, Re b, Im b, ln N, alpha)`.
#[derive(Debug, Clone, Copy)]
struct State([f64; 6]);

impl State {
    fn from_params(p: &GaussianParams) -> Self {
        Self([p.q, p.p, p.b.re, p.b.im, p.norm.ln(), p.alpha])
    }

    fn to_params(self) -> GaussianParams {
        let [q, p, re_b, im_b, log_norm, alpha] = self.0;
        GaussianParams {
            q,
            p,
            b: Complex64::new(re_b, im_b),
            norm: log_norm.exp(),
            alpha,
        }
    }

    fn axpy(&self, h: f64, k: &State) -> State {
        let mut out = self.0;
        for (o, d) in out.iter_mut().zip(k.0) {
            *o += h * d;
        }
        State(out)
    }
}

struct System<'a> {
    potential: &'a Potential,
    constants: &'a PhysicalConstants,
}

impl System<'_> {
    fn derivative(&self, state: &State, z: f64) -> Result<State, DynamicsError> {
        let [q, p, re_b, im_b, _, _] = state.0;
        if !(im_b > 0.0) {
            return if im_b.is_nan() {
                Err(DynamicsError::NonFinite { z })
            } else {
                Err(DynamicsError::WidthCollapse { z })
            };
        }
        let sample = self.potential.sample(q);
        let b = Complex64::new(re_b, im_b);
        let params = GaussianParams::new(q, p, b, 1.0, 0.0);
        let r = rhs(&params, &sample, self.constants)?;
        let d = State([
            r.dq,
            r.dp,
            r.db.re,
            r.db.im,
            log_norm_rate(im_b, &sample, self.constants),
            r.dalpha,
        ]);
        if d.0.iter().all(|v| v.is_finite()) {
            Ok(d)
        } else {
            Err(DynamicsError::NonFinite { z })
        }
    }

    fn rk4_step(&self, y: &State, z: f64, h: f64) -> Result<State, DynamicsError> {
        let k1 = self.derivative(y, z)?;
        let k2 = self.derivative(&y.axpy(0.5 * h, &k1), z + 0.5 * h)?;
        let k3 = self.derivative(&y.axpy(0.5 * h, &k2), z + 0.5 * h)?;
        let k4 = self.derivative(&y.axpy(h, &k3), z + h)?;
        let mut out = y.0;
        for i in 0..6 {
            out[i] += h / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
        }
        Ok(State(out))
    }
}

/// Fixed-step classical RK4 integration of the parameter equations.
///
/// The norm is integrated as `ln N`. Samples are taken every
/// `sample_stride` steps plus the final point; if `z_max` is not a multiple
/// of `dz` the last step is shortened to land on it.
pub fn integrate(
    initial: &GaussianParams,
    potential: &Potential,
    z_max: f64,
    dz: f64,
    sample_stride: usize,
    constants: &PhysicalConstants,
) -> Result<Trajectory, DynamicsError> {
    if !(dz.is_finite() && dz > 0.0) {
        return Err(DynamicsError::InvalidInput(format!("dz must be positive, got {dz}")));
    }
    if !(z_max.is_finite() && z_max > 0.0) {
        return Err(DynamicsError::InvalidInput(format!(
            "z_max must be positive, got {z_max}"
        )));
    }
    if !initial.is_finite() {
        return Err(DynamicsError::InvalidInput("initial parameters must be finite".into()));
    }
    if !(initial.norm > 0.0) {
        return Err(DynamicsError::InvalidInput(format!(
            "initial norm must be positive, got {}",
            initial.norm
        )));
    }
    initial.check_normalizable()?;
    constants
        .validate()
        .map_err(|e| DynamicsError::InvalidInput(e.to_string()))?;

    let system = System {
        potential,
        constants,
    };
    let stride = sample_stride.max(1);
    let n_steps = (z_max / dz - 1e-9).ceil().max(1.0) as usize;

    let mut samples = vec![TrajectorySample {
        z: 0.0,
        params: *initial,
    }];
    let mut y = State::from_params(initial);
    for i in 1..=n_steps {
        let z_start = (i - 1) as f64 * dz;
        let z_end = if i == n_steps { z_max } else { i as f64 * dz };
        y = system.rk4_step(&y, z_start, z_end - z_start)?;
        if !(y.0.iter().all(|v| v.is_finite()) && y.0[4].exp().is_finite()) {
            return Err(DynamicsError::NonFinite { z: z_end });
        }
        if !(y.0[3] > 0.0) {
            return Err(DynamicsError::WidthCollapse { z: z_end });
        }
        if i % stride == 0 || i == n_steps {
            samples.push(TrajectorySample {
                z: z_end,
                params: y.to_params(),
            });
        }
    }

    Ok(Trajectory {
        samples,
        dz,
        potential: potential.describe(),
    })
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub state: GridState,
    /// Set when either grid edge lies within 6 position widths of the center.
    pub too_narrow: bool,
}

/// Samples the Gaussian on `grid`.
pub fn reconstruct_wavefunction(
    params: &GaussianParams,
    grid: &GridSpec,
) -> Result<Reconstruction, DynamicsError> {
    let (delta_q, _) = widths(params)?;
    let GaussianParams {
        q,
        p,
        b,
        norm,
        alpha,
    } = *params;
    let amplitude = norm * (b.im / std::f64::consts::PI).powf(0.25);
    let state = GridState::from_fn(*grid, 0.0, |x| {
        let d = x - q;
        let exponent = Complex64::i() * (0.5 * b * d * d + p * d + alpha);
        amplitude * exponent.exp()
    })
    .map_err(|e| DynamicsError::InvalidInput(e.to_string()))?;

    let half = grid.half_width();
    let too_narrow = (q + half) < 6.0 * delta_q || (half - q) < 6.0 * delta_q;
    if too_narrow {
        log::warn!("grid edge within 6 widths of beam center q = {q} (width {delta_q})");
    }
    Ok(Reconstruction { state, too_narrow })
}
